use std::collections::{HashMap, HashSet};
use std::cell::RefCell;
use std::rc::Rc;
use std::sync::{Arc, LazyLock, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::freudenthal::{dominant_multiplicities, DominantCharacter, WeightSystem};
use super::weyl::irreducible_order;
use super::{positive_roots, LieData, Weight};
use crate::arith::binomial_table;
use crate::error::Result;
use crate::rootsys::{Family, SimpleType};

/// An element `h` of the Cartan subalgebra of one simple factor, given by its
/// coordinates on the simple coroots. Such elements pair integrally with
/// every integral weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanElement {
    pub factor: usize,
    pub coroot: Vec<i64>,
}

impl CartanElement {
    pub fn new(factor: usize, coroot: Vec<i64>) -> Self {
        CartanElement { factor, coroot }
    }

    pub fn is_zero(&self) -> bool {
        self.coroot.iter().all(|&x| x == 0)
    }

    /// `μ(h)`.
    pub fn pair(&self, mu: &[i64]) -> i64 {
        mu.iter().zip(&self.coroot).map(|(a, b)| a * b).sum()
    }

    /// `⟨α_i, h⟩` for every simple root.
    pub fn labels(&self, data: &LieData) -> Vec<i64> {
        (0..data.rank)
            .map(|i| (0..data.rank).map(|j| data.cartan[i][j] * self.coroot[j]).sum())
            .collect()
    }

    /// The vertex-algebra norm `k·(h, h)`; always an even integer.
    pub fn norm(&self, data: &LieData, level: u64) -> i64 {
        level as i64 * data.coroot_norm(&self.coroot)
    }
}

/// `Σ_{ν ∈ Wμ} ν(h)^j` for `j = 0..=j_max`, with `μ` dominant.
pub fn orbit_power_sums(data: &LieData, mu: &Weight, h: &CartanElement, j_max: usize) -> Vec<BigInt> {
    let (h_coroot, h_labels) = dominant_coweight(data, &h.coroot);
    let jm = zero_set(&mu.0);
    let jh = zero_set(&h_labels);
    let stab_mu = parabolic_order(data, &jm);
    let stab_h = parabolic_order(data, &jh);
    // Enumerate whichever orbit is smaller.
    let values: Vec<i64>;
    let (num, den);
    if stab_mu >= stab_h {
        values = weight_orbit_values(data, &mu.0, &h_coroot);
        num = BigInt::one();
        den = BigInt::one();
    } else {
        values = coweight_orbit_values(data, &h_coroot, &h_labels, &mu.0);
        num = stab_h;
        den = stab_mu;
    }
    let mut sums = vec![0i128; j_max + 1];
    for v in values {
        let mut p: i128 = 1;
        for s in sums.iter_mut() {
            *s += p;
            p *= v as i128;
        }
    }
    sums.into_iter().map(|s| BigInt::from(s) * &num / &den).collect()
}

fn zero_set(labels: &[i64]) -> Vec<usize> {
    labels.iter().enumerate().filter(|(_, &x)| x == 0).map(|(i, _)| i).collect()
}

fn dominant_coweight(data: &LieData, coroot: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let mut c = coroot.to_vec();
    let mut l: Vec<i64> = (0..data.rank)
        .map(|i| (0..data.rank).map(|j| data.cartan[i][j] * c[j]).sum())
        .collect();
    while let Some(i) = l.iter().position(|&x| x < 0) {
        reflect_coweight(data, &mut c, &mut l, i);
    }
    (c, l)
}

fn reflect_coweight(data: &LieData, c: &mut [i64], l: &mut [i64], i: usize) {
    let li = l[i];
    c[i] -= li;
    for m in 0..data.rank {
        l[m] -= li * data.cartan[m][i];
    }
}

/// Weight orbits kept in memory as flat `i8` rows, up to `ORBIT_CACHE_LIMIT`
/// entries in total.
struct OrbitCache {
    orbits: HashMap<(SimpleType, Vec<i64>), Arc<Vec<i8>>>,
    entries: usize,
}

const ORBIT_CACHE_LIMIT: usize = 1 << 26;

static ORBITS: LazyLock<Mutex<OrbitCache>> =
    LazyLock::new(|| Mutex::new(OrbitCache { orbits: HashMap::new(), entries: 0 }));

fn weight_orbit_values(data: &LieData, mu: &[i64], h: &[i64]) -> Vec<i64> {
    let key = (data.ty, mu.to_vec());
    let cached = ORBITS.lock().unwrap().orbits.get(&key).cloned();
    let flat = match cached {
        Some(f) => f,
        None => {
            let orbit = weight_orbit(data, mu);
            let flat: Option<Vec<i8>> = orbit.iter().flatten().map(|&x| i8::try_from(x).ok()).collect();
            let Some(flat) = flat else {
                return orbit.iter().map(|w| data.pair(w, h)).collect();
            };
            let flat = Arc::new(flat);
            let mut cache = ORBITS.lock().unwrap();
            if cache.entries + flat.len() <= ORBIT_CACHE_LIMIT {
                cache.entries += flat.len();
                cache.orbits.insert(key, flat.clone());
            }
            flat
        }
    };
    let support: Vec<(usize, i64)> = h.iter().copied().enumerate().filter(|&(_, x)| x != 0).collect();
    flat.chunks_exact(data.rank.max(1))
        .map(|w| support.iter().map(|&(i, b)| w[i] as i64 * b).sum())
        .collect()
}

fn weight_orbit(data: &LieData, mu: &[i64]) -> Vec<Vec<i64>> {
    let mut seen: HashSet<Vec<i64>> = HashSet::from([mu.to_vec()]);
    let mut stack = vec![mu.to_vec()];
    let mut out = Vec::new();
    while let Some(cur) = stack.pop() {
        for i in 0..data.rank {
            if cur[i] > 0 {
                let mut next = cur.clone();
                data.reflect(&mut next, i);
                if seen.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
        out.push(cur);
    }
    out
}

thread_local! {
    // the orbit of the last probe, shared by all dominant weights paired with it
    static LAST_COWEIGHT: RefCell<Option<(SimpleType, Vec<i64>, Rc<Vec<i64>>)>> = const { RefCell::new(None) };
}

fn coweight_orbit_values(data: &LieData, c: &[i64], l: &[i64], mu: &[i64]) -> Vec<i64> {
    let hit = LAST_COWEIGHT.with_borrow(|last| match last {
        Some((ty, key, flat)) if *ty == data.ty && key == c => Some(flat.clone()),
        _ => None,
    });
    let flat = hit.unwrap_or_else(|| {
        let flat = Rc::new(coweight_orbit(data, c, l).concat());
        LAST_COWEIGHT.set(Some((data.ty, c.to_vec(), flat.clone())));
        flat
    });
    let support: Vec<(usize, i64)> = mu.iter().copied().enumerate().filter(|&(_, x)| x != 0).collect();
    flat.chunks_exact(data.rank.max(1)).map(|w| support.iter().map(|&(i, a)| a * w[i]).sum()).collect()
}

fn coweight_orbit(data: &LieData, c: &[i64], l: &[i64]) -> Vec<Vec<i64>> {
    let mut seen: HashSet<Vec<i64>> = HashSet::from([c.to_vec()]);
    let mut stack = vec![(c.to_vec(), l.to_vec())];
    let mut out = Vec::new();
    while let Some((cc, ll)) = stack.pop() {
        for i in 0..data.rank {
            if ll[i] > 0 {
                let (mut c2, mut l2) = (cc.clone(), ll.clone());
                reflect_coweight(data, &mut c2, &mut l2, i);
                if seen.insert(c2.clone()) {
                    stack.push((c2, l2));
                }
            }
        }
        out.push(cc);
    }
    out
}

/// Order of the parabolic subgroup generated by the simple reflections in `nodes`.
pub(crate) fn parabolic_order(data: &LieData, nodes: &[usize]) -> BigInt {
    static ORDERS: LazyLock<Mutex<HashMap<(SimpleType, Vec<usize>), BigInt>>> = LazyLock::new(Default::default);
    let key = (data.ty, nodes.to_vec());
    if let Some(o) = ORDERS.lock().unwrap().get(&key) {
        return o.clone();
    }
    let order = parabolic_order_uncached(data, nodes);
    ORDERS.lock().unwrap().insert(key, order.clone());
    order
}

fn parabolic_order_uncached(data: &LieData, nodes: &[usize]) -> BigInt {
    let mut order = BigInt::one();
    let mut left: Vec<usize> = nodes.to_vec();
    while let Some(start) = left.pop() {
        let mut comp = vec![start];
        let mut k = 0;
        while k < comp.len() {
            let a = comp[k];
            let mut i = 0;
            while i < left.len() {
                if data.cartan[a][left[i]] != 0 {
                    comp.push(left.swap_remove(i));
                } else {
                    i += 1;
                }
            }
            k += 1;
        }
        comp.sort();
        let sub: Vec<Vec<i64>> = comp.iter().map(|&i| comp.iter().map(|&j| data.cartan[i][j]).collect()).collect();
        order *= component_order(&sub);
    }
    order
}

fn component_order(sub: &[Vec<i64>]) -> BigInt {
    let n = sub.len();
    let roots = positive_roots(sub).len();
    let symmetric = (0..n).all(|i| (0..n).all(|j| sub[i][j] == sub[j][i]));
    let family = if symmetric {
        if roots == n * (n + 1) / 2 {
            Family::A
        } else if n >= 4 && roots == n * (n - 1) {
            Family::D
        } else {
            Family::E
        }
    } else if n == 2 && roots == 6 {
        Family::G
    } else if n == 4 && roots == 24 {
        Family::F
    } else {
        Family::B
    };
    irreducible_order(family, n as u32)
}

/// Moments of an irreducible module computed from its dominant character.
pub fn irrep_moments(data: &LieData, lam: &Weight, h: &CartanElement, j_max: usize) -> Result<Vec<BigInt>> {
    let dc = cached_dominant(data, lam)?;
    let mut out = vec![BigInt::zero(); j_max + 1];
    for (mu, m) in &dc.entries {
        for (o, s) in out.iter_mut().zip(orbit_power_sums(data, mu, h, j_max)) {
            *o += s * *m;
        }
    }
    Ok(out)
}

static DOMINANT: LazyLock<Mutex<HashMap<(SimpleType, Weight), Arc<DominantCharacter>>>> =
    LazyLock::new(Default::default);

fn cached_dominant(data: &LieData, lam: &Weight) -> Result<Arc<DominantCharacter>> {
    let key = (data.ty, lam.clone());
    if let Some(dc) = DOMINANT.lock().unwrap().get(&key) {
        return Ok(dc.clone());
    }
    let dc = Arc::new(dominant_multiplicities(data, lam, 1_000_000)?);
    DOMINANT.lock().unwrap().insert(key, dc.clone());
    Ok(dc)
}

/// `S^j(h) = Σ_μ m_μ μ(h)^j` over an explicit weight system.
pub fn moments(ws: &WeightSystem, h: &CartanElement, j_max: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); j_max + 1];
    for (w, m) in ws.iter() {
        let v = BigInt::from(h.pair(&w.0));
        let mut p = BigInt::from(*m);
        for o in out.iter_mut() {
            *o += &p;
            p *= &v;
        }
    }
    out
}

/// Moments of `A ⊗ B` from those of `A` and `B`.
pub fn tensor_moments(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().min(b.len());
    let binom = binomial_table(n);
    (0..n)
        .map(|p| (0..=p).map(|i| &binom[p][i] * &a[i] * &b[p - i]).sum())
        .collect()
}

/// Moments of `Sym² A` from those of `A`.
pub fn sym2_moments(a: &[BigInt]) -> Vec<BigInt> {
    let t = tensor_moments(a, a);
    t.iter()
        .enumerate()
        .map(|(p, tp)| (tp + (BigInt::one() << p) * &a[p]) / 2)
        .collect()
}

/// Weight system of `A ⊗ B`.
pub fn tensor_weights(a: &WeightSystem, b: &WeightSystem) -> WeightSystem {
    let mut acc: HashMap<Weight, u64> = HashMap::new();
    for (x, m) in a.iter() {
        for (y, n) in b.iter() {
            let w = Weight(x.0.iter().zip(&y.0).map(|(p, q)| p + q).collect());
            *acc.entry(w).or_insert(0) += m * n;
        }
    }
    WeightSystem { entries: acc }
}

/// Weight system of `Sym²` of the adjoint module.
pub fn sym2_weights(data: &LieData) -> Result<WeightSystem> {
    let adj = super::weight_system(data, &data.theta(), u64::MAX)?;
    Ok(sym2_of(&adj))
}

pub(crate) fn sym2_of(ws: &WeightSystem) -> WeightSystem {
    let items: Vec<(&Weight, &u64)> = ws.iter().collect();
    let mut out = WeightSystem::default();
    for (i, (x, m)) in items.iter().enumerate() {
        let double = Weight(x.0.iter().map(|v| 2 * v).collect());
        out.add(double, **m * (**m + 1) / 2);
        for (y, n) in &items[i + 1..] {
            let w = Weight(x.0.iter().zip(&y.0).map(|(p, q)| p + q).collect());
            out.add(w, **m * **n);
        }
    }
    out
}
