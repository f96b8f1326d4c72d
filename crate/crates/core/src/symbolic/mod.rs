//! Symbolic `E(S_n^p)` as a polynomial in `n` over the raw moments `u_k`.

mod assignment;
mod expr;
mod json;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use assignment::MomentAssignment;
pub use expr::{Exponents, MomentExpr};

use crate::combinatorics::{coefficient, enumerate_partitions_with_cap, NPoly, Partition};
use crate::{Error, Rational, Result, DEFAULT_ORDER_CAP};

/// Which partitions contribute to the expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every partition of `p`.
    General,
    /// Only partitions with all parts even: the expansion for a summand whose
    /// odd moments vanish.
    Symmetric,
}

/// A product of raw moments, `u_k` raised to its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MomentMonomial {
    exponents: BTreeMap<u32, u32>,
}

impl MomentMonomial {
    pub fn exponents(&self) -> &BTreeMap<u32, u32> {
        &self.exponents
    }

    /// `sum_k k * multiplicity(k)`.
    pub fn weighted_degree(&self) -> u32 {
        self.exponents.iter().map(|(k, e)| k * e).sum()
    }

    pub fn to_partition(&self) -> Result<Partition> {
        let parts = self
            .exponents
            .iter()
            .flat_map(|(&k, &e)| std::iter::repeat_n(k, e as usize))
            .collect();
        Partition::new(parts)
    }
}

impl From<&Partition> for MomentMonomial {
    fn from(part: &Partition) -> Self {
        let mut exponents = BTreeMap::new();
        for &k in part.parts() {
            *exponents.entry(k).or_insert(0) += 1;
        }
        Self { exponents }
    }
}

/// `u2*u1`, `u1^3`: larger index first.
impl fmt::Display for MomentMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, e)) in self.exponents.iter().rev().enumerate() {
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
}

/// `sum_i a_i(n) q_i`: one integer polynomial in `n` per moment product.
///
/// Terms are keyed by the partition of exponents and iterate in canonical
/// display order (fewest factors first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentPoly {
    order: u32,
    terms: BTreeMap<Partition, NPoly>,
}

impl MomentPoly {
    pub fn zero(order: u32) -> Self {
        Self {
            order,
            terms: BTreeMap::new(),
        }
    }

    /// Adds `coeff * monomial(part)`; `part` must be a partition of the order.
    pub fn add_term(&mut self, part: Partition, coeff: NPoly) -> Result<()> {
        if part.order() != self.order {
            return Err(Error::InvalidParameter(format!(
                "term {part} has weight {} but the expression has order {}",
                part.order(),
                self.order
            )));
        }
        let merged = match self.terms.remove(&part) {
            Some(existing) => &existing + &coeff,
            None => coeff,
        };
        if !merged.is_zero() {
            self.terms.insert(part, merged);
        }
        Ok(())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &NPoly)> {
        self.terms.iter()
    }

    pub fn coefficient_of(&self, part: &Partition) -> Option<&NPoly> {
        self.terms.get(part)
    }

    /// Highest power of `n` across all terms; `None` for the zero expression.
    pub fn degree_in_n(&self) -> Option<u32> {
        self.terms.values().filter_map(NPoly::degree).max()
    }

    /// Moment indices the expression depends on.
    pub fn required_moments(&self) -> BTreeSet<u32> {
        self.terms.keys().flat_map(|p| p.parts().iter().copied()).collect()
    }

    /// Regroups as `sum_m C_m n^m` and returns the moment expressions `C_m`.
    pub fn by_power_of_n(&self) -> BTreeMap<u32, MomentExpr> {
        let mut out: BTreeMap<u32, MomentExpr> = BTreeMap::new();
        for (part, poly) in &self.terms {
            let exps = Exponents::from(&MomentMonomial::from(part));
            for (d, c) in poly.terms() {
                out.entry(d)
                    .or_default()
                    .add_term(exps.clone(), Rational::from_integer(c.clone()));
            }
        }
        out.retain(|_, e| !e.is_zero());
        out
    }
}

fn render_coefficient(poly: &NPoly) -> String {
    let content = poly.content();
    let primitive = poly.exact_div(&content).expect("content divides every coefficient");
    if primitive.terms().count() == 1 {
        return poly.to_string();
    }
    if content.is_one() {
        format!("({primitive})")
    } else if (-content.clone()).is_one() {
        format!("-({primitive})")
    } else {
        format!("{content}*({primitive})")
    }
}

/// Text layout such as `n*u3 + 3*(n^2-n)*u2*u1 + (n^3-3n^2+2n)*u1^3`.
impl fmt::Display for MomentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (part, poly)) in self.terms.iter().enumerate() {
            let coeff = render_coefficient(poly);
            let (negative, body) = match coeff.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, coeff),
            };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write!(f, "{body}*{}", MomentMonomial::from(part))?;
        }
        Ok(())
    }
}

/// `E(S_n^p)` expanded over partitions of `p`, with the default order cap.
pub fn moment_of_sum(p: u32, mode: Mode) -> Result<MomentPoly> {
    moment_of_sum_with_cap(p, mode, DEFAULT_ORDER_CAP)
}

pub fn moment_of_sum_with_cap(p: u32, mode: Mode, cap: u32) -> Result<MomentPoly> {
    let partitions = enumerate_partitions_with_cap(p, cap)?;
    let mut out = MomentPoly::zero(p);
    for part in partitions {
        if mode == Mode::Symmetric && part.has_odd_part() {
            continue;
        }
        let a = coefficient(&part)?;
        out.add_term(part, a)?;
    }
    Ok(out)
}

/// Term-for-term equality of the two expansions.
pub fn moments_match(a: &MomentPoly, b: &MomentPoly) -> bool {
    a.terms == b.terms
}

/// Value of an expansion at concrete `n` and moments.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalResult {
    Exact(Rational),
    /// Computed in `f64`; subject to rounding.
    Float(f64),
}

impl EvalResult {
    pub fn to_f64(&self) -> f64 {
        match self {
            EvalResult::Exact(q) => crate::rational::to_f64(q),
            EvalResult::Float(x) => *x,
        }
    }
}

impl fmt::Display for EvalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalResult::Exact(q) => write!(f, "{q}"),
            EvalResult::Float(x) => write!(f, "{x} (float)"),
        }
    }
}

fn check_inputs(expr: &MomentPoly, n: u64, moments: &MomentAssignment) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptySum);
    }
    for k in expr.required_moments() {
        moments.get(k)?;
    }
    Ok(())
}

/// Exact value of `expr` at `n` with the given raw moments.
pub fn evaluate(expr: &MomentPoly, n: u64, moments: &MomentAssignment) -> Result<Rational> {
    check_inputs(expr, n, moments)?;
    let n = BigInt::from(n);
    let mut total = Rational::zero();
    for (part, poly) in &expr.terms {
        let count = poly.eval(&n);
        if count.is_zero() {
            continue;
        }
        let mut term = Rational::from_integer(count);
        for (&k, &e) in MomentMonomial::from(part).exponents() {
            term *= num_traits::pow(moments.get(k)?.clone(), e as usize);
        }
        total += term;
    }
    Ok(total)
}

/// Floating-point evaluation. Moments are rounded to `f64` first, so the
/// result is not exact.
pub fn evaluate_f64(expr: &MomentPoly, n: u64, moments: &MomentAssignment) -> Result<f64> {
    check_inputs(expr, n, moments)?;
    let nf = n as f64;
    let mut total = 0.0;
    for (part, poly) in &expr.terms {
        let mut term = poly.eval_f64(nf);
        for (&k, &e) in MomentMonomial::from(part).exponents() {
            let v = moments.get(k)?.to_f64().unwrap_or(f64::NAN);
            term *= v.powi(e as i32);
        }
        total += term;
    }
    Ok(total)
}

/// Dispatches to [`evaluate`] or, when `float` is set, [`evaluate_f64`].
pub fn evaluate_with(
    expr: &MomentPoly,
    n: u64,
    moments: &MomentAssignment,
    float: bool,
) -> Result<EvalResult> {
    if float {
        evaluate_f64(expr, n, moments).map(EvalResult::Float)
    } else {
        evaluate(expr, n, moments).map(EvalResult::Exact)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_int;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn poly(terms: &[(u32, i64)]) -> NPoly {
        NPoly::from_terms(terms.iter().copied())
    }

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn third_moment_renders_in_term_order() {
        let e = moment_of_sum(3, Mode::General).unwrap();
        assert_eq!(e.to_string(), "n*u3 + 3*(n^2-n)*u2*u1 + (n^3-3n^2+2n)*u1^3");
    }

    #[test]
    fn symmetric_fourth_and_sixth() {
        let e = moment_of_sum(4, Mode::Symmetric).unwrap();
        assert_eq!(e.to_string(), "n*u4 + 3*(n^2-n)*u2^2");
        let e = moment_of_sum(6, Mode::Symmetric).unwrap();
        assert_eq!(
            e.to_string(),
            "n*u6 + 15*(n^2-n)*u4*u2 + 15*(n^3-3n^2+2n)*u2^3"
        );
    }

    #[test]
    fn odd_symmetric_is_zero() {
        let e = moment_of_sum(5, Mode::Symmetric).unwrap();
        assert!(e.is_zero());
        assert_eq!(e.to_string(), "0");
        assert_eq!(e.order(), 5);
    }

    #[test]
    fn matching() {
        let mut expected = MomentPoly::zero(2);
        expected.add_term(part(&[2]), poly(&[(1, 1)])).unwrap();
        expected.add_term(part(&[1, 1]), poly(&[(2, 1), (1, -1)])).unwrap();
        let general2 = moment_of_sum(2, Mode::General).unwrap();
        assert!(moments_match(&general2, &expected));
        assert!(moments_match(&general2, &general2));
        assert!(!moments_match(
            &moment_of_sum(4, Mode::Symmetric).unwrap(),
            &moment_of_sum(4, Mode::General).unwrap()
        ));
        let general4 = moment_of_sum(4, Mode::General).unwrap();
        assert_eq!(
            general4.coefficient_of(&part(&[3, 1])),
            Some(&poly(&[(2, 4), (1, -4)]))
        );
    }

    #[test]
    fn add_term_rejects_wrong_weight() {
        let mut e = MomentPoly::zero(3);
        assert!(e.add_term(part(&[2]), NPoly::n()).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let e2 = moment_of_sum(2, Mode::General).unwrap();
        let coin = MomentAssignment::from_sequence([q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(evaluate(&e2, 2, &coin).unwrap(), q(3, 2));
        assert_eq!(evaluate_f64(&e2, 2, &coin).unwrap(), 1.5);

        let s2 = moment_of_sum(2, Mode::Symmetric).unwrap();
        let sigma2 = MomentAssignment::from_sequence([q(0, 1), q(7, 3)]).unwrap();
        for n in 1..10u64 {
            assert_eq!(evaluate(&s2, n, &sigma2).unwrap(), q(7 * n as i64, 3));
        }
    }

    #[test]
    fn single_summand_gives_raw_moment() {
        let m = MomentAssignment::from_sequence((1..=7).map(|k| q(k * k + 1, 3))).unwrap();
        for p in 1..=7 {
            let e = moment_of_sum(p, Mode::General).unwrap();
            assert_eq!(&evaluate(&e, 1, &m).unwrap(), m.get(p).unwrap());
        }
    }

    #[test]
    fn missing_and_empty() {
        let e = moment_of_sum(3, Mode::General).unwrap();
        let m = MomentAssignment::from_sequence([from_int(0), from_int(1)]).unwrap();
        assert_eq!(evaluate(&e, 3, &m), Err(Error::MissingMoment(3)));
        assert_eq!(evaluate(&e, 0, &m), Err(Error::EmptySum));
        assert!(moment_of_sum(0, Mode::General).is_err());
        assert!(moment_of_sum(31, Mode::General).is_err());
    }

    #[test]
    fn regroup_by_power_of_n() {
        let grouped = moment_of_sum(4, Mode::Symmetric).unwrap().by_power_of_n();
        assert_eq!(grouped.keys().copied().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(grouped[&1].to_string(), "u4 - 3*u2^2");
        assert_eq!(grouped[&2].to_string(), "3*u2^2");
    }

    #[test]
    fn evaluate_with_flag() {
        let e = moment_of_sum(2, Mode::General).unwrap();
        let m = MomentAssignment::all_ones(2);
        assert_eq!(evaluate_with(&e, 3, &m, false).unwrap(), EvalResult::Exact(from_int(9)));
        assert_eq!(evaluate_with(&e, 3, &m, true).unwrap(), EvalResult::Float(9.0));
    }

    #[test]
    fn monomial_round_trip() {
        let p = part(&[4, 2, 2, 1]);
        let m = MomentMonomial::from(&p);
        assert_eq!(m.weighted_degree(), 9);
        assert_eq!(m.to_string(), "u4*u2^2*u1");
        assert_eq!(m.to_partition().unwrap(), p);
    }

    #[test]
    fn negative_coefficient_rendering() {
        let mut e = MomentPoly::zero(2);
        e.add_term(part(&[2]), poly(&[(1, -1)])).unwrap();
        e.add_term(part(&[1, 1]), poly(&[(2, -2), (1, 2)])).unwrap();
        assert_eq!(e.to_string(), "-n*u2 - 2*(n^2-n)*u1^2");
    }
}
