//! Finite-dimensional simple Lie algebra combinatorics.
//!
//! Conventions: Bourbaki numbering of simple roots, Cartan matrix entries
//! `A[i][j] = ⟨α_i, α_j∨⟩`, and the invariant form normalised so that long
//! roots have norm 2. Weights are stored by Dynkin labels; Cartan elements
//! by their coordinates on the simple coroots.

mod freudenthal;
mod moments;
mod weyl;

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rootsys::{Family, SimpleType};

pub use freudenthal::{dominant_multiplicities, weight_system, DominantCharacter, WeightSystem};
pub use moments::{
    irrep_moments, moments, orbit_power_sums, sym2_moments, sym2_weights, tensor_moments, tensor_weights,
    CartanElement,
};
pub use weyl::{formal_dim, signed_dominant, weyl_dim};

/// A weight given by its Dynkin labels (coefficients on the fundamental weights).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Weight(v)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn labels(&self) -> &[i64] {
        &self.0
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub type R128 = Ratio<i128>;

/// Root data of one simple type.
#[derive(Debug)]
pub struct LieData {
    pub ty: SimpleType,
    pub rank: usize,
    /// `A[i][j] = ⟨α_i, α_j∨⟩`.
    pub cartan: Vec<Vec<i64>>,
    /// `|α_i|²/2` scaled by [`LieData::form_scale`] to an integer.
    pub root_scale: Vec<i64>,
    /// Common denominator of the `|α_i|²/2` (1, 2 or 3).
    pub form_scale: i64,
    /// Positive roots in simple-root coordinates, sorted by height.
    pub positive_roots: Vec<Vec<i64>>,
    /// Positive roots in Dynkin labels, parallel to `positive_roots`.
    pub positive_root_labels: Vec<Vec<i64>>,
    /// `form_scale · (ω_j, β)` per positive root `β`, used for Weyl-type products.
    pub(crate) root_pairing: Vec<Vec<i64>>,
    pub highest_root: Vec<i64>,
    /// Coefficients of `θ∨` on the simple coroots.
    pub comarks: Vec<i64>,
    /// `(ω_i, ω_j)`.
    pub weight_gram: Vec<Vec<R128>>,
    /// `(α_i∨, α_j∨)`, always integral.
    pub coroot_gram: Vec<Vec<i64>>,
}

static CACHE: LazyLock<Mutex<HashMap<SimpleType, Arc<LieData>>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

impl LieData {
    /// Cached root data for `ty`.
    pub fn get(ty: SimpleType) -> Arc<LieData> {
        if let Some(d) = CACHE.lock().unwrap().get(&ty) {
            return d.clone();
        }
        let data = Arc::new(LieData::build(ty));
        CACHE.lock().unwrap().entry(ty).or_insert(data).clone()
    }

    fn build(ty: SimpleType) -> LieData {
        let (cartan, root_scale, form_scale) = cartan_matrix(ty);
        let rank = cartan.len();
        let positive_roots = positive_roots(&cartan);
        let positive_root_labels: Vec<Vec<i64>> = positive_roots
            .iter()
            .map(|b| (0..rank).map(|j| (0..rank).map(|i| b[i] * cartan[i][j]).sum()).collect())
            .collect();
        let root_pairing = positive_roots
            .iter()
            .map(|b| (0..rank).map(|j| b[j] * root_scale[j]).collect())
            .collect();
        let highest_root = positive_roots.last().cloned().expect("nonempty root system");
        // θ∨ = θ (norm 2), and α_i = u_i α_i∨, so a_i∨ = a_i u_i.
        let comarks: Vec<i64> = (0..rank).map(|i| highest_root[i] * root_scale[i] / form_scale).collect();
        let inv = invert(&cartan);
        let weight_gram = (0..rank)
            .map(|i| (0..rank).map(|j| inv[i][j] * R128::new(root_scale[j] as i128, form_scale as i128)).collect())
            .collect();
        let coroot_gram = (0..rank)
            .map(|i| (0..rank).map(|j| cartan[i][j] * form_scale / root_scale[i]).collect())
            .collect();
        LieData {
            ty,
            rank,
            cartan,
            root_scale,
            form_scale,
            positive_roots,
            positive_root_labels,
            root_pairing,
            highest_root,
            comarks,
            weight_gram,
            coroot_gram,
        }
    }

    pub fn dim(&self) -> u64 {
        (self.rank + 2 * self.positive_roots.len()) as u64
    }

    /// `1 + Σ a_i∨`.
    pub fn dual_coxeter(&self) -> i64 {
        1 + self.comarks.iter().sum::<i64>()
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    /// Highest root `θ` as a weight (the adjoint highest weight).
    pub fn theta(&self) -> Weight {
        Weight(self.positive_root_labels.last().unwrap().clone())
    }

    /// `(a, b)` for weights in Dynkin labels.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> R128 {
        let mut acc = R128::zero();
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                if b[j] != 0 {
                    acc += self.weight_gram[i][j] * R128::from_integer((a[i] * b[j]) as i128);
                }
            }
        }
        acc
    }

    /// `(λ, λ + 2ρ)`.
    pub fn casimir(&self, lam: &Weight) -> R128 {
        let shifted: Vec<i64> = lam.0.iter().map(|x| x + 2).collect();
        self.inner(&lam.0, &shifted)
    }

    /// Simple reflection `s_i` on Dynkin labels.
    pub fn reflect(&self, v: &mut [i64], i: usize) {
        let c = v[i];
        if c != 0 {
            for j in 0..self.rank {
                v[j] -= c * self.cartan[i][j];
            }
        }
    }

    /// Dominant representative of the Weyl orbit of `v` and the parity of the
    /// number of reflections used.
    pub fn to_dominant(&self, v: &[i64]) -> (Vec<i64>, bool) {
        let mut w = v.to_vec();
        let mut odd = false;
        while let Some(i) = w.iter().position(|&x| x < 0) {
            self.reflect(&mut w, i);
            odd = !odd;
        }
        (w, odd)
    }

    /// Simple roots expressed in Dynkin labels (rows of the Cartan matrix).
    pub fn simple_root_labels(&self, i: usize) -> &[i64] {
        &self.cartan[i]
    }

    /// `μ(h)` for a weight in labels and a Cartan element in coroot coordinates.
    pub fn pair(&self, mu: &[i64], h: &[i64]) -> i64 {
        mu.iter().zip(h).map(|(a, b)| a * b).sum()
    }

    /// `(h, h)` for a Cartan element in coroot coordinates.
    pub fn coroot_norm(&self, h: &[i64]) -> i64 {
        let mut acc = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                acc += h[i] * h[j] * self.coroot_gram[i][j];
            }
        }
        acc
    }

    /// Coroot-coordinate vectors of the smallest positive multiples of the
    /// fundamental coweights that lie in the coroot lattice.
    pub fn integral_fundamental_coweights(&self) -> Vec<Vec<i64>> {
        // ω_i∨ = Σ_j (A^{-1})_{ji} α_j∨.
        let inv = invert(&self.cartan);
        (0..self.rank)
            .map(|i| {
                let col: Vec<R128> = (0..self.rank).map(|j| inv[j][i]).collect();
                let den = col.iter().fold(1i128, |acc, x| num_integer::lcm(acc, *x.denom()));
                col.iter().map(|x| (*x * R128::from_integer(den)).to_integer() as i64).collect()
            })
            .collect()
    }

    /// Coroot coordinates of `θ∨`.
    pub fn highest_coroot(&self) -> Vec<i64> {
        self.comarks.clone()
    }
}

/// Cartan matrix, scaled half-norms `L·|α_i|²/2`, and `L`.
fn cartan_matrix(ty: SimpleType) -> (Vec<Vec<i64>>, Vec<i64>, i64) {
    let n = ty.rank as usize;
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let link = |a: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    let mut scale = vec![1i64; n];
    let mut l = 1i64;
    match ty.family {
        Family::A => {
            for i in 0..n.saturating_sub(1) {
                link(&mut a, i, i + 1);
            }
        }
        Family::B => {
            for i in 0..n - 1 {
                link(&mut a, i, i + 1);
            }
            // α_n short.
            a[n - 2][n - 1] = -2;
            l = 2;
            scale = vec![2; n];
            scale[n - 1] = 1;
        }
        Family::C => {
            for i in 0..n - 1 {
                link(&mut a, i, i + 1);
            }
            // α_n long, the rest short.
            a[n - 1][n - 2] = -2;
            l = 2;
            scale = vec![1; n];
            scale[n - 1] = 2;
        }
        Family::D => {
            for i in 0..n - 2 {
                link(&mut a, i, i + 1);
            }
            link(&mut a, n - 3, n - 1);
        }
        Family::E => {
            link(&mut a, 0, 2);
            link(&mut a, 1, 3);
            for i in 2..n - 1 {
                link(&mut a, i, i + 1);
            }
        }
        Family::F => {
            link(&mut a, 0, 1);
            link(&mut a, 1, 2);
            link(&mut a, 2, 3);
            a[1][2] = -2;
            l = 2;
            scale = vec![2, 2, 1, 1];
        }
        Family::G => {
            link(&mut a, 0, 1);
            // α_1 short.
            a[1][0] = -3;
            l = 3;
            scale = vec![1, 3];
        }
    }
    (a, scale, l)
}

/// Positive roots in simple-root coordinates, generated by root strings.
pub(crate) fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut all: Vec<Vec<i64>> = Vec::new();
    let mut index: HashMap<Vec<i64>, ()> = HashMap::new();
    let mut layer: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    while !layer.is_empty() {
        for r in &layer {
            index.insert(r.clone(), ());
        }
        all.extend(layer.iter().cloned());
        let mut next: Vec<Vec<i64>> = Vec::new();
        for beta in &layer {
            for i in 0..n {
                let pairing: i64 = (0..n).map(|j| beta[j] * cartan[j][i]).sum();
                let mut p = 0;
                let mut probe = beta.clone();
                loop {
                    probe[i] -= 1;
                    if index.contains_key(&probe) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort();
        layer = next;
    }
    all
}

/// Exact inverse of a small integer matrix.
pub(crate) fn invert(m: &[Vec<i64>]) -> Vec<Vec<R128>> {
    let n = m.len();
    let mut a: Vec<Vec<R128>> = m.iter().map(|r| r.iter().map(|&x| R128::from_integer(x as i128)).collect()).collect();
    let mut inv: Vec<Vec<R128>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { R128::one() } else { R128::zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("nonsingular Cartan matrix");
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..n {
                    let (x, y) = (a[col][j], inv[col][j]);
                    a[r][j] -= f * x;
                    inv[r][j] -= f * y;
                }
            }
        }
    }
    inv
}

/// Order of the Weyl group of `ty`.
pub fn weyl_group_order(ty: SimpleType) -> BigInt {
    weyl::irreducible_order(ty.family, ty.rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_types() -> Vec<SimpleType> {
        SimpleType::all_up_to_rank(9)
    }

    #[test]
    fn root_counts_and_dual_coxeter() {
        for ty in all_types() {
            let d = LieData::get(ty);
            assert_eq!(d.dim(), ty.dim(), "{ty}");
            assert_eq!(d.dual_coxeter() as u64, ty.dual_coxeter(), "{ty}");
            // θ has norm 2.
            let th = d.theta();
            assert_eq!(d.inner(&th.0, &th.0), R128::from_integer(2), "{ty}");
            // (ρ, α_i∨) = 1: ρ has all labels 1 by construction; check α_i labels
            for i in 0..d.rank {
                assert_eq!(d.simple_root_labels(i)[i], 2);
            }
        }
    }

    #[test]
    fn coroot_gram_is_even() {
        for ty in all_types() {
            let d = LieData::get(ty);
            for i in 0..d.rank {
                assert_eq!(d.coroot_gram[i][i] % 2, 0, "{ty}");
                for j in 0..d.rank {
                    assert_eq!(d.coroot_gram[i][j], d.coroot_gram[j][i]);
                }
            }
        }
    }

    #[test]
    fn e8_comarks() {
        let e8 = LieData::get(SimpleType::new(Family::E, 8).unwrap());
        assert_eq!(e8.comarks, vec![2, 3, 4, 6, 5, 4, 3, 2]);
        assert_eq!(e8.theta(), Weight(vec![0, 0, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn non_simply_laced_comarks() {
        let g2 = LieData::get(SimpleType::new(Family::G, 2).unwrap());
        assert_eq!(g2.comarks, vec![1, 2]);
        let f4 = LieData::get(SimpleType::new(Family::F, 4).unwrap());
        assert_eq!(f4.comarks, vec![2, 3, 2, 1]);
        let b3 = LieData::get(SimpleType::new(Family::B, 3).unwrap());
        assert_eq!(b3.comarks, vec![1, 2, 1]);
        let c3 = LieData::get(SimpleType::new(Family::C, 3).unwrap());
        assert_eq!(c3.comarks, vec![1, 1, 1]);
    }

    #[test]
    fn integral_coweights_pair_integrally() {
        for ty in all_types() {
            let d = LieData::get(ty);
            for (i, h) in d.integral_fundamental_coweights().iter().enumerate() {
                // ⟨α_j, h⟩ vanishes off i.
                for j in 0..d.rank {
                    let v: i64 = (0..d.rank).map(|m| d.cartan[j][m] * h[m]).sum();
                    if j != i {
                        assert_eq!(v, 0, "{ty}");
                    } else {
                        assert!(v > 0);
                    }
                }
            }
        }
    }
}
