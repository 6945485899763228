use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::weyl::weyl_dim;
use super::{LieData, Weight, R128};
use crate::error::{Error, Result};

/// Dominant weights of an irreducible module with their multiplicities,
/// ordered by depth below the highest weight.
#[derive(Debug, Clone)]
pub struct DominantCharacter {
    pub highest: Weight,
    pub entries: Vec<(Weight, u64)>,
}

impl DominantCharacter {
    pub fn multiplicity(&self, mu: &Weight) -> u64 {
        self.entries.iter().find(|(w, _)| w == mu).map_or(0, |(_, m)| *m)
    }
}

/// Full weight multiset of a module.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeightSystem {
    pub entries: HashMap<Weight, u64>,
}

impl WeightSystem {
    pub fn dim(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn multiplicity(&self, w: &Weight) -> u64 {
        self.entries.get(w).copied().unwrap_or(0)
    }

    pub fn add(&mut self, w: Weight, m: u64) {
        if m > 0 {
            *self.entries.entry(w).or_insert(0) += m;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &u64)> {
        self.entries.iter()
    }
}

/// Dominant weights of `V(lam)` and their multiplicities via Freudenthal's
/// recursion. Fails with a resource error if more than `max_weights`
/// dominant weights occur.
pub fn dominant_multiplicities(data: &LieData, lam: &Weight, max_weights: usize) -> Result<DominantCharacter> {
    weyl_dim(data, lam)?;
    let (order, depth) = dominant_weights(data, lam, max_weights)?;
    let index: HashMap<&Weight, usize> = order.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let l = R128::from_integer(data.form_scale as i128);
    let shift = |w: &Weight| -> Vec<i64> { w.0.iter().map(|x| x + 1).collect() };
    let top_rho = shift(lam);
    let top = data.inner(&top_rho, &top_rho);

    let mut mult = vec![0u64; order.len()];
    let mut idx: Vec<usize> = (0..order.len()).collect();
    idx.sort_by_key(|&i| depth[i]);
    for &i in &idx {
        let mu = &order[i];
        if i == 0 {
            mult[i] = 1;
            continue;
        }
        let mr = shift(mu);
        let denom = (top - data.inner(&mr, &mr)) * l;
        let mut acc: i128 = 0;
        for (beta, pairing) in data.positive_root_labels.iter().zip(&data.root_pairing) {
            let mut nu = mu.0.clone();
            loop {
                for (a, b) in nu.iter_mut().zip(beta) {
                    *a += b;
                }
                let (dom, _) = data.to_dominant(&nu);
                let Some(&j) = index.get(&Weight(dom)) else { break };
                let p: i64 = nu.iter().zip(pairing).map(|(a, b)| a * b).sum();
                acc += mult[j] as i128 * p as i128;
            }
        }
        let m = R128::from_integer(2 * acc) / denom;
        debug_assert!(m.is_integer());
        mult[i] = m.to_integer() as u64;
    }
    let entries = idx
        .into_iter()
        .filter(|&i| mult[i] > 0)
        .map(|i| (order[i].clone(), mult[i]))
        .collect();
    Ok(DominantCharacter { highest: lam.clone(), entries })
}

/// Dominant weights below `lam` (highest first) and their depths.
fn dominant_weights(data: &LieData, lam: &Weight, max_weights: usize) -> Result<(Vec<Weight>, Vec<i64>)> {
    let heights: Vec<i64> = data.positive_roots.iter().map(|b| b.iter().sum()).collect();
    let mut seen: HashMap<Weight, usize> = HashMap::new();
    let mut order = vec![lam.clone()];
    let mut depth = vec![0i64];
    seen.insert(lam.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let cur = order[i].clone();
        for (beta, h) in data.positive_root_labels.iter().zip(&heights) {
            let next: Vec<i64> = cur.0.iter().zip(beta).map(|(a, b)| a - b).collect();
            if next.iter().any(|&x| x < 0) {
                continue;
            }
            let w = Weight(next);
            if seen.contains_key(&w) {
                continue;
            }
            if order.len() >= max_weights {
                return Err(Error::Resource(format!("more than {max_weights} dominant weights in V({lam})")));
            }
            seen.insert(w.clone(), order.len());
            depth.push(depth[i] + h);
            order.push(w);
            queue.push_back(order.len() - 1);
        }
    }
    Ok((order, depth))
}

/// The Weyl orbit of a dominant weight.
pub fn orbit(data: &LieData, mu: &Weight) -> Vec<Weight> {
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut out = vec![mu.clone()];
    seen.insert(mu.0.clone());
    let mut k = 0;
    while k < out.len() {
        let cur = out[k].0.clone();
        for i in 0..data.rank {
            if cur[i] > 0 {
                let mut next = cur.clone();
                data.reflect(&mut next, i);
                if seen.insert(next.clone()) {
                    out.push(Weight(next));
                }
            }
        }
        k += 1;
    }
    out
}

/// Full weight system of `V(lam)`; refuses modules of dimension above `cap`.
pub fn weight_system(data: &LieData, lam: &Weight, cap: u64) -> Result<WeightSystem> {
    let dim = weyl_dim(data, lam)?;
    if dim > BigInt::from(cap) {
        return Err(Error::Resource(format!("dim V({lam}) = {dim} exceeds cap {cap}")));
    }
    let dc = dominant_multiplicities(data, lam, cap.to_usize().unwrap_or(usize::MAX))?;
    let mut ws = WeightSystem::default();
    for (mu, m) in &dc.entries {
        for w in orbit(data, mu) {
            ws.add(w, *m);
        }
    }
    Ok(ws)
}
