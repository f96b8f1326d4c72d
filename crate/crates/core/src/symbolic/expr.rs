use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{MomentAssignment, MomentMonomial};
use crate::{Error, Rational, Result};

/// Product of moment symbols with integer (possibly negative) exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponents(BTreeMap<u32, i32>);

impl Exponents {
    pub fn symbol(k: u32, power: i32) -> Self {
        let mut out = Self::default();
        out.bump(k, power);
        out
    }

    fn bump(&mut self, k: u32, by: i32) {
        let e = self.0.entry(k).or_insert(0);
        *e += by;
        if *e == 0 {
            self.0.remove(&k);
        }
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (u32, i32)> + '_ {
        self.0.iter().map(|(k, e)| (*k, *e))
    }

    fn times(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, e) in other.iter() {
            out.bump(k, e);
        }
        out
    }
}

impl From<&MomentMonomial> for Exponents {
    fn from(m: &MomentMonomial) -> Self {
        Exponents(m.exponents().iter().map(|(k, e)| (*k, *e as i32)).collect())
    }
}

/// Rational-coefficient Laurent polynomial in the moment symbols `u_k`.
///
/// Used for quantities that are regrouped or normalized after expansion,
/// e.g. the coefficient of `n^m` in a moment or `u4/u2^2 - 3`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MomentExpr {
    terms: BTreeMap<Exponents, Rational>,
}

impl MomentExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Exponents::default(), c)
    }

    pub fn term(exponents: Exponents, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(exponents, c);
        out
    }

    /// `u_k^power`.
    pub fn symbol(k: u32, power: i32) -> Self {
        Self::term(Exponents::symbol(k, power), Rational::one())
    }

    pub fn add_term(&mut self, exponents: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponents.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exponents);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Moment indices that appear with a nonzero exponent.
    pub fn symbols(&self) -> impl Iterator<Item = u32> + '_ {
        let mut ks: Vec<u32> = self.terms.keys().flat_map(|e| e.0.keys().copied()).collect();
        ks.sort_unstable();
        ks.dedup();
        ks.into_iter()
    }

    pub fn evaluate(&self, moments: &MomentAssignment) -> Result<Rational> {
        let mut total = Rational::zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (k, e) in exps.iter() {
                let v = moments.get(k)?;
                if e < 0 && v.is_zero() {
                    return Err(Error::DivisionByZero(k));
                }
                term *= crate::rational::pow(v, e)?;
            }
            total += term;
        }
        Ok(total)
    }
}

impl Add<&MomentExpr> for &MomentExpr {
    type Output = MomentExpr;
    fn add(self, rhs: &MomentExpr) -> MomentExpr {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub<&MomentExpr> for &MomentExpr {
    type Output = MomentExpr;
    fn sub(self, rhs: &MomentExpr) -> MomentExpr {
        self + &(-rhs.clone())
    }
}

impl Mul<&MomentExpr> for &MomentExpr {
    type Output = MomentExpr;
    fn mul(self, rhs: &MomentExpr) -> MomentExpr {
        let mut out = MomentExpr::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.times(eb), ca * cb);
            }
        }
        out
    }
}

impl Neg for MomentExpr {
    type Output = MomentExpr;
    fn neg(self) -> MomentExpr {
        MomentExpr {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

fn write_factors(f: &mut fmt::Formatter<'_>, factors: &[(u32, i32)]) -> fmt::Result {
    for (i, (k, e)) in factors.iter().enumerate() {
        if i > 0 {
            f.write_str("*")?;
        }
        if *e == 1 {
            write!(f, "u{k}")?;
        } else {
            write!(f, "u{k}^{e}")?;
        }
    }
    Ok(())
}

/// Renders e.g. `u4/u2^2 - 3`; symbols with larger index first.
impl fmt::Display for MomentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // Highest moment index first; the constant term sorts last.
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by_cached_key(|(e, _)| std::cmp::Reverse(e.iter().rev().collect::<Vec<_>>()));
        for (i, (exps, c)) in ordered.into_iter().enumerate() {
            let magnitude = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut numer: Vec<(u32, i32)> = exps.iter().filter(|(_, e)| *e > 0).collect();
            let mut denom: Vec<(u32, i32)> =
                exps.iter().filter(|(_, e)| *e < 0).map(|(k, e)| (k, -e)).collect();
            numer.reverse();
            denom.reverse();
            let show_coeff = numer.is_empty() || !magnitude.is_one();
            if show_coeff {
                write!(f, "{magnitude}")?;
                if !numer.is_empty() {
                    f.write_str("*")?;
                }
            }
            write_factors(f, &numer)?;
            if !denom.is_empty() {
                f.write_str("/")?;
                if denom.len() > 1 {
                    f.write_str("(")?;
                }
                write_factors(f, &denom)?;
                if denom.len() > 1 {
                    f.write_str(")")?;
                }
            }
        }
        Ok(())
    }
}
