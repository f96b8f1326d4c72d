//! Integer polynomials in the single symbol `n`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Polynomial in `n` with arbitrary-precision integer coefficients.
///
/// Stored sparsely by degree; zero coefficients are never kept, so two equal
/// polynomials always have identical maps.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct NPoly {
    coeffs: BTreeMap<u32, BigInt>,
}

impl NPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
    }

    /// The polynomial `n`.
    pub fn n() -> Self {
        Self::monomial(1, 1)
    }

    /// `c * n^degree`.
    pub fn monomial(degree: u32, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(degree, c);
        }
        Self { coeffs }
    }

    /// Builds a polynomial from `(degree, coefficient)` pairs, summing repeats.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (d, c) in terms {
            out.add_term(d, c.into());
        }
        out
    }

    fn add_term(&mut self, degree: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(degree).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&degree);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `n`, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, degree: u32) -> BigInt {
        self.coeffs.get(&degree).cloned().unwrap_or_default()
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.values().next_back()
    }

    /// Nonzero `(degree, coefficient)` pairs in ascending degree.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &BigInt)> {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, c * factor)).collect(),
        }
    }

    /// Divides every coefficient by `divisor`, or returns `None` unless all of
    /// them are exact multiples.
    pub fn exact_div(&self, divisor: &BigInt) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let mut coeffs = BTreeMap::new();
        for (d, c) in &self.coeffs {
            let (q, r) = c.div_rem(divisor);
            if !r.is_zero() {
                return None;
            }
            coeffs.insert(*d, q);
        }
        Some(Self { coeffs })
    }

    /// Gcd of the coefficients, carrying the sign of the leading coefficient.
    /// Zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let g = self
            .coeffs
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        match self.leading_coeff() {
            Some(lead) if lead.is_negative() => -g,
            _ => g,
        }
    }

    /// Horner evaluation at an integer point.
    pub fn eval(&self, n: &BigInt) -> BigInt {
        let Some(top) = self.degree() else {
            return BigInt::zero();
        };
        let mut acc = BigInt::zero();
        for d in (0..=top).rev() {
            acc = acc * n + self.coeff(d);
        }
        acc
    }

    pub fn eval_u64(&self, n: u64) -> BigInt {
        self.eval(&BigInt::from(n))
    }

    pub fn eval_rational(&self, n: &Rational) -> Rational {
        let Some(top) = self.degree() else {
            return Rational::zero();
        };
        let mut acc = Rational::zero();
        for d in (0..=top).rev() {
            acc = acc * n + Rational::from_integer(self.coeff(d));
        }
        acc
    }

    pub fn eval_f64(&self, n: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .map(|(d, c)| c.to_f64().unwrap_or(f64::NAN) * n.powi(*d as i32))
            .sum()
    }
}

impl Add<&NPoly> for &NPoly {
    type Output = NPoly;
    fn add(self, rhs: &NPoly) -> NPoly {
        let mut out = self.clone();
        for (d, c) in &rhs.coeffs {
            out.add_term(*d, c.clone());
        }
        out
    }
}

impl Add for NPoly {
    type Output = NPoly;
    fn add(self, rhs: NPoly) -> NPoly {
        &self + &rhs
    }
}

impl Sub<&NPoly> for &NPoly {
    type Output = NPoly;
    fn sub(self, rhs: &NPoly) -> NPoly {
        let mut out = self.clone();
        for (d, c) in &rhs.coeffs {
            out.add_term(*d, -c.clone());
        }
        out
    }
}

impl Sub for NPoly {
    type Output = NPoly;
    fn sub(self, rhs: NPoly) -> NPoly {
        &self - &rhs
    }
}

impl Mul<&NPoly> for &NPoly {
    type Output = NPoly;
    fn mul(self, rhs: &NPoly) -> NPoly {
        let mut out = NPoly::zero();
        for (da, ca) in &self.coeffs {
            for (db, cb) in &rhs.coeffs {
                out.add_term(da + db, ca * cb);
            }
        }
        out
    }
}

impl Mul for NPoly {
    type Output = NPoly;
    fn mul(self, rhs: NPoly) -> NPoly {
        &self * &rhs
    }
}

impl Neg for NPoly {
    type Output = NPoly;
    fn neg(self) -> NPoly {
        NPoly {
            coeffs: self.coeffs.into_iter().map(|(d, c)| (d, -c)).collect(),
        }
    }
}

/// Renders highest degree first with implicit multiplication, e.g.
/// `n^3-3n^2+2n`.
impl fmt::Display for NPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (d, c)) in self.coeffs.iter().rev().enumerate() {
            let magnitude = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if i > 0 {
                f.write_str("+")?;
            }
            if *d == 0 || !magnitude.is_one() {
                write!(f, "{magnitude}")?;
            }
            match d {
                0 => {}
                1 => f.write_str("n")?,
                _ => write!(f, "n^{d}")?,
            }
        }
        Ok(())
    }
}
