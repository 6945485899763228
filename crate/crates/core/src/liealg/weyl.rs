use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{LieData, Weight};
use crate::arith::factorial;
use crate::error::{Error, Result};
use crate::rootsys::Family;

/// Weyl's product `∏_{β>0} (γ+ρ, β)/(ρ, β)` evaluated at an arbitrary integral
/// weight. At dominant weights this is the dimension of `V(γ)`.
pub fn formal_dim(data: &LieData, gamma: &Weight) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for pair in &data.root_pairing {
        let mut a = 0i64;
        let mut r = 0i64;
        for (j, &p) in pair.iter().enumerate() {
            a += (gamma.0[j] + 1) * p;
            r += p;
        }
        if a == 0 {
            return BigInt::zero();
        }
        num *= a;
        den *= r;
    }
    let (q, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    q
}

/// Dimension of the irreducible module with highest weight `lam`.
pub fn weyl_dim(data: &LieData, lam: &Weight) -> Result<BigInt> {
    check_len(data, lam)?;
    if !lam.is_dominant() {
        return Err(Error::NotDominant(format!("{} for {}", lam, data.ty)));
    }
    Ok(formal_dim(data, lam))
}

/// Resolves the formal character `ch_γ` as `sign · ch_μ` with `μ` dominant,
/// or `(0, None)` when `γ + ρ` is singular.
pub fn signed_dominant(data: &LieData, gamma: &Weight) -> (i8, Option<Weight>) {
    let mut v: Vec<i64> = gamma.0.iter().map(|x| x + 1).collect();
    let mut sign = 1i8;
    loop {
        if v.contains(&0) {
            return (0, None);
        }
        match v.iter().position(|&x| x < 0) {
            Some(i) => {
                data.reflect(&mut v, i);
                sign = -sign;
            }
            None => break,
        }
    }
    (sign, Some(Weight(v.into_iter().map(|x| x - 1).collect())))
}

fn check_len(data: &LieData, lam: &Weight) -> Result<()> {
    if lam.0.len() != data.rank {
        return Err(Error::InvalidArgument(format!(
            "weight {} has {} labels, {} expects {}",
            lam,
            lam.0.len(),
            data.ty,
            data.rank
        )));
    }
    Ok(())
}

pub(crate) fn irreducible_order(family: Family, rank: u32) -> BigInt {
    let n = rank as u64;
    match family {
        Family::A => factorial(n + 1),
        Family::B | Family::C => BigInt::from(2u32).pow(rank) * factorial(n),
        Family::D => BigInt::from(2u32).pow(rank - 1) * factorial(n),
        Family::E => match rank {
            6 => BigInt::from(51_840u64),
            7 => BigInt::from(2_903_040u64),
            _ => BigInt::from(696_729_600u64),
        },
        Family::F => BigInt::from(1152),
        Family::G => BigInt::from(12),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::SimpleType;

    fn data(f: Family, r: u32) -> std::sync::Arc<LieData> {
        LieData::get(SimpleType::new(f, r).unwrap())
    }

    #[test]
    fn small_dimensions() {
        let a1 = data(Family::A, 1);
        assert_eq!(weyl_dim(&a1, &Weight(vec![2])).unwrap(), BigInt::from(3));
        let e8 = data(Family::E, 8);
        let mut adj = vec![0; 8];
        adj[7] = 1;
        assert_eq!(weyl_dim(&e8, &Weight(adj)).unwrap(), BigInt::from(248));
        let g2 = data(Family::G, 2);
        assert_eq!(weyl_dim(&g2, &Weight(vec![1, 0])).unwrap(), BigInt::from(7));
        assert_eq!(weyl_dim(&g2, &Weight(vec![0, 1])).unwrap(), BigInt::from(14));
        assert!(weyl_dim(&a1, &Weight(vec![-1])).is_err());
    }

    #[test]
    fn adjoint_is_dimension() {
        for ty in SimpleType::all_up_to_rank(8) {
            let d = LieData::get(ty);
            assert_eq!(weyl_dim(&d, &d.theta()).unwrap(), BigInt::from(ty.dim()), "{ty}");
        }
    }

    #[test]
    fn signed_dominant_examples() {
        let a1 = data(Family::A, 1);
        assert_eq!(signed_dominant(&a1, &Weight(vec![3])), (1, Some(Weight(vec![3]))));
        assert_eq!(signed_dominant(&a1, &Weight(vec![-1])), (0, None));
        assert_eq!(signed_dominant(&a1, &Weight(vec![-3])), (-1, Some(Weight(vec![1]))));
    }

    #[test]
    fn weyl_orders_match_root_counts() {
        // |W| = ∏ (m_i + 1); spot-check against known values via rank-2 types
        assert_eq!(irreducible_order(Family::A, 2), BigInt::from(6));
        assert_eq!(irreducible_order(Family::B, 2), BigInt::from(8));
        assert_eq!(irreducible_order(Family::D, 4), BigInt::from(192));
    }
}
