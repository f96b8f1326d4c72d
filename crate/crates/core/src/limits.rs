//! Normalized moments of `S_n` and their exact `1/n` corrections.
//!
//! Two normalizations are covered:
//!
//! * central-limit scaling, `E(S_n^p) / (n^{p/2} sigma^p)` for a summand
//!   symmetric about zero, whose limit is the normal moment `(p-1)!!`;
//! * mean scaling, `E(S_n^p) / n^p`, whose limit is `u1^p`, the `p`-th moment
//!   of a point mass at the mean.
//!
//! The difference from the limit is a finite polynomial in `1/n` because
//! `E(S_n^p)` is a polynomial in `n` of bounded degree. `sigma^p` is carried
//! as `u2^{p/2}` so every quantity stays rational.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::symbolic::{evaluate, moment_of_sum, Mode, MomentAssignment, MomentExpr, MomentPoly};
use crate::{Error, Rational, Result};

/// `(p-1)!!` for even `p`, `0` for odd `p`, `1` for `p = 0`.
pub fn normal_moment(p: u32) -> BigInt {
    if p % 2 == 1 {
        return BigInt::zero();
    }
    (1..p).step_by(2).fold(BigInt::one(), |acc, j| acc * j)
}

/// `mu^p`, the `p`-th moment of the unit step at `mu`.
pub fn step_moment(mu: &Rational, p: u32) -> Rational {
    num_traits::pow(mu.clone(), p as usize)
}

/// Which normalization a correction refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrectionKind {
    /// `E(S_n^p) / (n^{p/2} sigma^p)`, symmetric summands, even `p`.
    Clt,
    /// `E(S_n^p) / n^p`.
    Lln,
}

/// `limit + sum_j c_j / n^j` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionExpansion {
    pub p: u32,
    pub kind: CorrectionKind,
    pub limit_term: Rational,
    /// `j -> c_j`, nonzero entries only.
    pub coefficients: BTreeMap<u32, Rational>,
}

impl CorrectionExpansion {
    /// The correction alone, `sum_j c_j / n^j`.
    pub fn residual_at(&self, n: u64) -> Rational {
        let n = Rational::from_integer(BigInt::from(n));
        self.coefficients
            .iter()
            .map(|(j, c)| c / num_traits::pow(n.clone(), *j as usize))
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    /// The full normalized moment, `limit + residual`.
    pub fn value_at(&self, n: u64) -> Rational {
        &self.limit_term + self.residual_at(n)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: serde_json::Map<String, serde_json::Value> = self
            .coefficients
            .iter()
            .map(|(j, c)| (j.to_string(), c.to_string().into()))
            .collect();
        serde_json::json!({
            "p": self.p,
            "limit": self.limit_term.to_string(),
            "terms": terms,
        })
    }

    /// Inverse of [`CorrectionExpansion::to_json`].
    pub fn from_json(kind: CorrectionKind, value: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("correction json: {what}"));
        let p = value["p"].as_u64().ok_or_else(|| bad("missing p"))? as u32;
        let limit = value["limit"].as_str().ok_or_else(|| bad("missing limit"))?;
        let limit_term = crate::rational::parse_rational(limit)?;
        let mut coefficients = BTreeMap::new();
        for (j, c) in value["terms"].as_object().ok_or_else(|| bad("missing terms"))? {
            let j: u32 = j.parse().map_err(|_| bad("term index"))?;
            let c = crate::rational::parse_rational(c.as_str().ok_or_else(|| bad("term value"))?)?;
            coefficients.insert(j, c);
        }
        Ok(Self { p, kind, limit_term, coefficients })
    }
}

/// Renders e.g. `3 - 2/n + 1/(2n^2)`.
impl fmt::Display for CorrectionExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.limit_term)?;
        for (j, c) in &self.coefficients {
            let sign = if c.is_negative() { '-' } else { '+' };
            let c = c.abs();
            let power = if *j == 1 { "n".to_string() } else { format!("n^{j}") };
            if c.denom().is_one() {
                write!(f, " {sign} {}/{power}", c.numer())?;
            } else {
                write!(f, " {sign} {}/({}{power})", c.numer(), c.denom())?;
            }
        }
        Ok(())
    }
}

/// A correction with coefficients left symbolic in the moments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicExpansion {
    pub p: u32,
    pub kind: CorrectionKind,
    pub limit: MomentExpr,
    /// `j -> c_j(u)`, the coefficient of `1/n^j`.
    pub coefficients: BTreeMap<u32, MomentExpr>,
}

impl SymbolicExpansion {
    /// Substitutes concrete moments. Zero coefficients are dropped.
    pub fn evaluate(&self, moments: &MomentAssignment) -> Result<CorrectionExpansion> {
        let limit_term = self.limit.evaluate(moments)?;
        let mut coefficients = BTreeMap::new();
        for (j, c) in &self.coefficients {
            let v = c.evaluate(moments)?;
            if !v.is_zero() {
                coefficients.insert(*j, v);
            }
        }
        Ok(CorrectionExpansion { p: self.p, kind: self.kind, limit_term, coefficients })
    }
}

impl fmt::Display for SymbolicExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.limit)?;
        for (j, c) in &self.coefficients {
            let power = if *j == 1 { "n".to_string() } else { format!("n^{j}") };
            write!(f, " + ({c})/{power}")?;
        }
        Ok(())
    }
}

fn require_even(p: u32) -> Result<()> {
    if p == 0 || p % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "the central-limit normalization needs an even positive order, got {p}"
        )));
    }
    Ok(())
}

/// `beta_n(p)` with symbolic coefficients: `E(S_n^p)/(n^{p/2} u2^{p/2})`
/// minus `(p-1)!!`, for symmetric summands.
pub fn clt_correction_symbolic(p: u32) -> Result<SymbolicExpansion> {
    require_even(p)?;
    let half = p / 2;
    let by_power = moment_of_sum(p, Mode::Symmetric)?.by_power_of_n();
    let normalizer = MomentExpr::symbol(2, -(half as i32));
    let limit = by_power.get(&half).map(|c| c * &normalizer).unwrap_or_default();
    let expected = MomentExpr::constant(Rational::from_integer(normal_moment(p)));
    if limit != expected {
        return Err(Error::Internal(format!(
            "leading coefficient of E(S_n^{p}) normalizes to {limit}, not {expected}"
        )));
    }
    if let Some(top) = by_power.keys().next_back() {
        if *top > half {
            return Err(Error::Internal(format!("E(S_n^{p}) has degree {top} > {half}")));
        }
    }
    let coefficients = by_power
        .iter()
        .filter(|(m, _)| **m < half)
        .map(|(m, c)| (half - m, c * &normalizer))
        .collect();
    Ok(SymbolicExpansion { p, kind: CorrectionKind::Clt, limit, coefficients })
}

fn check_symmetric_variance(p: u32, moments: &MomentAssignment) -> Result<()> {
    for k in 1..=p {
        moments.get(k)?;
    }
    if let Some((k, value)) = moments.first_asymmetry(p)? {
        return Err(Error::Asymmetric { k, value: value.to_string() });
    }
    if moments.get(2)?.is_zero() {
        return Err(Error::ZeroVariance);
    }
    Ok(())
}

/// `beta_n(p)` for concrete symmetric moments.
///
/// Odd moments must be exactly zero; any nonzero odd moment up to order `p`
/// is an [`Error::Asymmetric`].
pub fn clt_correction(p: u32, moments: &MomentAssignment) -> Result<CorrectionExpansion> {
    require_even(p)?;
    check_symmetric_variance(p, moments)?;
    clt_correction_symbolic(p)?.evaluate(moments)
}

/// `alpha_n(p)` with symbolic coefficients: `E(S_n^p)/n^p - u1^p`.
pub fn lln_correction_symbolic(p: u32) -> Result<SymbolicExpansion> {
    let by_power = moment_of_sum(p, Mode::General)?.by_power_of_n();
    let limit = by_power.get(&p).cloned().unwrap_or_default();
    if limit != MomentExpr::symbol(1, p as i32) {
        return Err(Error::Internal(format!(
            "leading coefficient of E(S_n^{p}) is {limit}, not u1^{p}"
        )));
    }
    let coefficients = by_power
        .iter()
        .filter(|(m, _)| **m < p)
        .map(|(m, c)| (p - m, c.clone()))
        .collect();
    Ok(SymbolicExpansion { p, kind: CorrectionKind::Lln, limit, coefficients })
}

pub fn lln_correction(p: u32, moments: &MomentAssignment) -> Result<CorrectionExpansion> {
    let symbolic = lln_correction_symbolic(p)?;
    for k in 1..=p {
        moments.get(k)?;
    }
    symbolic.evaluate(moments)
}

/// Expansion for either normalization.
pub fn correction(
    kind: CorrectionKind,
    p: u32,
    moments: &MomentAssignment,
) -> Result<CorrectionExpansion> {
    match kind {
        CorrectionKind::Clt => clt_correction(p, moments),
        CorrectionKind::Lln => lln_correction(p, moments),
    }
}

/// Evaluates a normalized moment directly from `E(S_n^p)`, without going
/// through the `1/n` expansion.
#[derive(Debug, Clone)]
pub struct NormalizedMoment {
    kind: CorrectionKind,
    p: u32,
    expansion: MomentPoly,
    moments: MomentAssignment,
}

impl NormalizedMoment {
    pub fn new(kind: CorrectionKind, p: u32, moments: &MomentAssignment) -> Result<Self> {
        let expansion = match kind {
            CorrectionKind::Clt => {
                require_even(p)?;
                check_symmetric_variance(p, moments)?;
                moment_of_sum(p, Mode::Symmetric)?
            }
            CorrectionKind::Lln => moment_of_sum(p, Mode::General)?,
        };
        Ok(Self { kind, p, expansion, moments: moments.clone() })
    }

    pub fn at(&self, n: u64) -> Result<Rational> {
        let raw = evaluate(&self.expansion, n, &self.moments)?;
        let n = Rational::from_integer(BigInt::from(n));
        let scale = match self.kind {
            CorrectionKind::Clt => {
                let half = (self.p / 2) as usize;
                num_traits::pow(n * self.moments.get(2)?, half)
            }
            CorrectionKind::Lln => num_traits::pow(n, self.p as usize),
        };
        Ok(raw / scale)
    }
}

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceRow {
    pub n: u64,
    pub normalized: Rational,
    pub residual: Rational,
}

/// Exact normalized moment and its distance from the limit at each `n`.
pub fn convergence_table(
    kind: CorrectionKind,
    p: u32,
    moments: &MomentAssignment,
    schedule: &[u64],
) -> Result<(CorrectionExpansion, Vec<ConvergenceRow>)> {
    let expansion = correction(kind, p, moments)?;
    let direct = NormalizedMoment::new(kind, p, moments)?;
    let rows = schedule
        .iter()
        .map(|&n| {
            let normalized = direct.at(n)?;
            let residual = &normalized - &expansion.limit_term;
            Ok(ConvergenceRow { n, normalized, residual })
        })
        .collect::<Result<_>>()?;
    Ok((expansion, rows))
}

/// Markov bound `E((S_n^p/n^p - mu^p)^2) / eps^2` on
/// `P(|S_n^p/n^p - mu^p| > eps)`, evaluated exactly.
///
/// Expanded as `E(S_n^{2p})/n^{2p} + mu^{2p} - 2 mu^p E(S_n^p)/n^p`, so it
/// needs moments up to order `2p`.
#[derive(Debug, Clone)]
pub struct WeakLawBound {
    p: u32,
    high: MomentPoly,
    low: MomentPoly,
    moments: MomentAssignment,
    eps_squared: Rational,
}

impl WeakLawBound {
    pub fn new(p: u32, moments: &MomentAssignment, epsilon: &Rational) -> Result<Self> {
        if !epsilon.is_positive() {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
        }
        for k in 1..=2 * p {
            moments.get(k)?;
        }
        Ok(Self {
            p,
            high: moment_of_sum(2 * p, Mode::General)?,
            low: moment_of_sum(p, Mode::General)?,
            moments: moments.clone(),
            eps_squared: epsilon * epsilon,
        })
    }

    pub fn at(&self, n: u64) -> Result<Rational> {
        let p = self.p as usize;
        let nq = Rational::from_integer(BigInt::from(n));
        let n_p = num_traits::pow(nq, p);
        let mu_p = step_moment(self.moments.mean()?, self.p);
        let high = evaluate(&self.high, n, &self.moments)? / (&n_p * &n_p);
        let low = evaluate(&self.low, n, &self.moments)? / &n_p;
        let second = high + &mu_p * &mu_p - Rational::from_integer(2.into()) * &mu_p * low;
        Ok(second / &self.eps_squared)
    }
}

pub fn weak_law_bound(
    p: u32,
    moments: &MomentAssignment,
    n: u64,
    epsilon: &Rational,
) -> Result<Rational> {
    WeakLawBound::new(p, moments, epsilon)?.at(n)
}

/// `E(S_n^{2p}) = sum_{m=1}^{p} c_m n^m` for a symmetric summand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongLawCoefficients {
    pub p: u32,
    /// `m -> c_m`, polynomials in the even moments.
    pub coefficients: BTreeMap<u32, MomentExpr>,
}

impl StrongLawCoefficients {
    pub fn degree(&self) -> u32 {
        self.coefficients.keys().next_back().copied().unwrap_or(0)
    }

    pub fn numeric(&self, moments: &MomentAssignment) -> Result<BTreeMap<u32, Rational>> {
        self.coefficients
            .iter()
            .map(|(m, c)| Ok((*m, c.evaluate(moments)?)))
            .collect()
    }

    /// `C = max_m c_m` once moments are fixed.
    pub fn max_coefficient(&self, moments: &MomentAssignment) -> Result<Rational> {
        self.numeric(moments)?
            .into_values()
            .max()
            .ok_or_else(|| Error::Internal("no coefficients".into()))
    }

    /// `D = sum_m max(c_m, 0)`, which satisfies `E(S_n^{2p}) <= D n^p` for
    /// every `n >= 1` even when some `c_m` are negative.
    pub fn dominating_constant(&self, moments: &MomentAssignment) -> Result<Rational> {
        Ok(self
            .numeric(moments)?
            .into_values()
            .filter(|c| c.is_positive())
            .fold(Rational::zero(), |acc, c| acc + c))
    }
}

pub fn strong_law_coefficients(p: u32) -> Result<StrongLawCoefficients> {
    if p == 0 {
        return Err(Error::OrderOutOfRange { p, cap: crate::DEFAULT_ORDER_CAP / 2 });
    }
    let coefficients = moment_of_sum(2 * p, Mode::Symmetric)?.by_power_of_n();
    let out = StrongLawCoefficients { p, coefficients };
    if out.degree() != p || out.coefficients.contains_key(&0) {
        return Err(Error::Internal(format!(
            "E(S_n^{}) should span n^1..n^{p}, got degree {}",
            2 * p,
            out.degree()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_int;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn moments(values: &[i64]) -> MomentAssignment {
        MomentAssignment::from_sequence(values.iter().map(|&v| from_int(v))).unwrap()
    }

    #[test]
    fn normal_moments() {
        assert_eq!(normal_moment(0), BigInt::from(1));
        assert_eq!(normal_moment(2), BigInt::from(1));
        assert_eq!(normal_moment(4), BigInt::from(3));
        assert_eq!(normal_moment(6), BigInt::from(15));
        assert_eq!(normal_moment(7), BigInt::from(0));
        for p in (2..=30).step_by(2) {
            assert_eq!(normal_moment(p), normal_moment(p - 2) * (p - 1));
        }
    }

    #[test]
    fn rademacher_sixth_order() {
        let rad = moments(&[0, 1, 0, 1, 0, 1]);
        let b = clt_correction(6, &rad).unwrap();
        assert_eq!(b.limit_term, from_int(15));
        assert_eq!(b.coefficients, BTreeMap::from([(1, from_int(-30)), (2, from_int(16))]));
        assert_eq!(b.to_string(), "15 - 30/n + 16/n^2");
    }

    #[test]
    fn clt_errors() {
        let asym = moments(&[1, 2, 0, 5]);
        assert!(matches!(clt_correction(4, &asym), Err(Error::Asymmetric { k: 1, .. })));
        let degenerate = moments(&[0, 0, 0, 0]);
        assert_eq!(clt_correction(4, &degenerate), Err(Error::ZeroVariance));
        assert!(matches!(clt_correction(3, &moments(&[0, 1, 0])), Err(Error::InvalidParameter(_))));
        assert_eq!(clt_correction(4, &moments(&[0, 1])), Err(Error::MissingMoment(3)));
    }

    #[test]
    fn lln_first_orders() {
        let coin = MomentAssignment::from_sequence([q(1, 2), q(1, 2), q(1, 2)]).unwrap();
        let a1 = lln_correction(1, &coin).unwrap();
        assert_eq!(a1.limit_term, q(1, 2));
        assert!(a1.coefficients.is_empty());
        let a2 = lln_correction(2, &coin).unwrap();
        assert_eq!(a2.coefficients, BTreeMap::from([(1, q(1, 4))]));
        assert_eq!(a2.residual_at(100), q(1, 400));
        assert_eq!(lln_correction(3, &moments(&[1, 1])), Err(Error::MissingMoment(3)));
    }

    #[test]
    fn step_moments() {
        assert_eq!(step_moment(&q(0, 1), 5), q(0, 1));
        assert_eq!(step_moment(&q(1, 2), 3), q(1, 8));
    }

    #[test]
    fn weak_law_examples() {
        let rad = moments(&[0, 1]);
        assert_eq!(weak_law_bound(1, &rad, 100, &q(1, 10)).unwrap(), from_int(1));
        assert!(weak_law_bound(1, &rad, 100, &q(0, 1)).is_err());
        assert_eq!(weak_law_bound(2, &rad, 10, &q(1, 2)), Err(Error::MissingMoment(3)));
    }

    #[test]
    fn strong_law_small_orders() {
        let s1 = strong_law_coefficients(1).unwrap();
        assert_eq!(s1.coefficients[&1], MomentExpr::symbol(2, 1));
        let s3 = strong_law_coefficients(3).unwrap();
        assert_eq!(s3.degree(), 3);
        assert_eq!(s3.coefficients[&3], MomentExpr::symbol(2, 3).scale(&from_int(15)));
        let rad = moments(&[0, 1, 0, 1]);
        let s2 = strong_law_coefficients(2).unwrap();
        assert_eq!(s2.max_coefficient(&rad).unwrap(), from_int(3));
        assert_eq!(s2.dominating_constant(&rad).unwrap(), from_int(3));
    }

    #[test]
    fn json_round_trip() {
        let rad = moments(&[0, 1, 0, 1, 0, 1]);
        let b = clt_correction(6, &rad).unwrap();
        let json = b.to_json();
        assert_eq!(json, serde_json::json!({"p": 6, "limit": "15", "terms": {"1": "-30", "2": "16"}}));
        assert_eq!(CorrectionExpansion::from_json(CorrectionKind::Clt, &json).unwrap(), b);
    }
}
