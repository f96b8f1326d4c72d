use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::factorial;
use crate::distributions::MomentProvider;
use crate::{Error, Rational, Result};

/// Concrete values for the raw moments `u_k = E(X^k)`.
///
/// Construction enforces `u2 >= u1^2` whenever both are present.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MomentAssignment {
    values: BTreeMap<u32, Rational>,
}

impl MomentAssignment {
    pub fn new(values: BTreeMap<u32, Rational>) -> Result<Self> {
        if values.contains_key(&0) {
            return Err(Error::InvalidParameter("moment indices start at 1".into()));
        }
        if let (Some(u1), Some(u2)) = (values.get(&1), values.get(&2)) {
            let u1_squared = u1 * u1;
            if *u2 < u1_squared {
                return Err(Error::InconsistentMoments {
                    u2: u2.to_string(),
                    u1_squared: u1_squared.to_string(),
                });
            }
        }
        Ok(Self { values })
    }

    /// `moments[0]` is `u1`, `moments[1]` is `u2`, and so on.
    pub fn from_sequence(moments: impl IntoIterator<Item = Rational>) -> Result<Self> {
        Self::new((1..).zip(moments).collect())
    }

    /// Every `u_k = 1` for `k <= order`, the moments of the constant 1.
    pub fn all_ones(order: u32) -> Self {
        Self {
            values: (1..=order).map(|k| (k, Rational::one())).collect(),
        }
    }

    /// Standard-normal raw moments up to `order`: `(k-1)!!` for even `k`,
    /// zero for odd `k`.
    pub fn standard_normal(order: u32) -> Self {
        let values = (1..=order)
            .map(|k| {
                let v = if k % 2 == 1 {
                    BigInt::zero()
                } else {
                    (1..k).step_by(2).fold(BigInt::one(), |acc, j| acc * j)
                };
                (k, Rational::from_integer(v))
            })
            .collect();
        Self { values }
    }

    /// Exponential(1) raw moments `k!` up to `order`.
    pub fn unit_exponential(order: u32) -> Self {
        Self {
            values: (1..=order)
                .map(|k| (k, Rational::from_integer(factorial(k))))
                .collect(),
        }
    }

    /// Pulls `u_1..=u_order` from a provider, failing on the first moment the
    /// provider cannot supply.
    pub fn from_provider(dist: &MomentProvider, order: u32) -> Result<Self> {
        let values = (1..=order)
            .map(|k| dist.raw_moment(k).map(|v| (k, v)))
            .collect::<Result<_>>()?;
        Self::new(values)
    }

    pub fn get(&self, k: u32) -> Result<&Rational> {
        self.values.get(&k).ok_or(Error::MissingMoment(k))
    }

    pub fn values(&self) -> &BTreeMap<u32, Rational> {
        &self.values
    }

    /// Largest index `K` such that `u_1..=u_K` are all present.
    pub fn contiguous_order(&self) -> u32 {
        (1..).take_while(|k| self.values.contains_key(k)).last().unwrap_or(0)
    }

    pub fn mean(&self) -> Result<&Rational> {
        self.get(1)
    }

    /// `u2 - u1^2`.
    pub fn variance(&self) -> Result<Rational> {
        let u1 = self.get(1)?;
        Ok(self.get(2)? - u1 * u1)
    }

    /// Copy with every odd-index moment set to zero.
    pub fn symmetrized(&self) -> Self {
        let values = self
            .values
            .iter()
            .map(|(&k, v)| (k, if k % 2 == 1 { Rational::zero() } else { v.clone() }))
            .collect();
        Self { values }
    }

    /// First odd index `k <= order` with a nonzero moment, if any. Missing
    /// indices are reported as errors.
    pub fn first_asymmetry(&self, order: u32) -> Result<Option<(u32, &Rational)>> {
        for k in (1..=order).step_by(2) {
            let v = self.get(k)?;
            if !v.is_zero() {
                return Ok(Some((k, v)));
            }
        }
        Ok(None)
    }
}
