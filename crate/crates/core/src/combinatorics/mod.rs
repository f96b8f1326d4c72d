//! Integer partitions and the polynomial-in-`n` coefficient attached to each.

mod npoly;
mod partition;

use num_bigint::BigInt;
use num_traits::One;

pub use npoly::NPoly;
pub use partition::{
    enumerate_partitions, enumerate_partitions_with_cap, multiplicity_profile,
    MultiplicityProfile, Partition,
};

use crate::{Error, Result};

/// Largest moment order accepted unless a caller passes an explicit cap.
pub const DEFAULT_ORDER_CAP: u32 = 30;

/// `n (n-1) ... (n-m+1)` in expanded form; `1` for `m = 0`.
pub fn falling_factorial(m: u32) -> NPoly {
    (0..m).fold(NPoly::one(), |acc, i| {
        &acc * &NPoly::from_terms([(1, BigInt::one()), (0, -BigInt::from(i))])
    })
}

pub fn factorial(k: u32) -> BigInt {
    (2..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// Number of ordered index tuples in `{1..n}^p` whose exponent pattern is
/// `part`, as a polynomial in `n`:
///
/// `n!/(n-m)! * p!/(p_1! ... p_m!) / (l_1! ... l_h!)`.
///
/// The result always has integer coefficients; a failed exact division is
/// reported as [`Error::Internal`].
pub fn coefficient(part: &Partition) -> Result<NPoly> {
    let p = part.order();
    let multinomial = part
        .parts()
        .iter()
        .fold(factorial(p), |acc, &k| acc / factorial(k));
    let symmetry = multiplicity_profile(part)
        .multiplicities
        .iter()
        .fold(BigInt::one(), |acc, &l| acc * factorial(l));
    let m = part.len() as u32;
    falling_factorial(m)
        .scale(&multinomial)
        .exact_div(&symmetry)
        .ok_or_else(|| Error::Internal(format!("coefficient of {part} is not integral")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(u32, i64)]) -> NPoly {
        NPoly::from_terms(terms.iter().copied())
    }

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(0), NPoly::one());
        assert_eq!(falling_factorial(1), NPoly::n());
        assert_eq!(falling_factorial(3), poly(&[(3, 1), (2, -3), (1, 2)]));
    }

    #[test]
    fn third_moment_coefficients() {
        assert_eq!(coefficient(&part(&[3])).unwrap(), poly(&[(1, 1)]));
        assert_eq!(coefficient(&part(&[2, 1])).unwrap(), poly(&[(2, 3), (1, -3)]));
        assert_eq!(
            coefficient(&part(&[1, 1, 1])).unwrap(),
            poly(&[(3, 1), (2, -3), (1, 2)])
        );
    }

    #[test]
    fn single_block_and_all_ones() {
        for p in 1..=12 {
            assert_eq!(coefficient(&part(&[p])).unwrap(), NPoly::n());
            let ones = Partition::new(vec![1; p as usize]).unwrap();
            assert_eq!(coefficient(&ones).unwrap(), falling_factorial(p));
        }
    }

    #[test]
    fn coefficient_vanishes_below_part_count() {
        for p in 1..=10 {
            for part in enumerate_partitions(p).unwrap() {
                let a = coefficient(&part).unwrap();
                let m = part.len() as u64;
                for n in 0..m {
                    assert_eq!(a.eval_u64(n), BigInt::from(0), "{part} at n={n}");
                }
                for n in m..m + 5 {
                    assert!(a.eval_u64(n) > BigInt::from(0), "{part} at n={n}");
                }
            }
        }
    }
}
