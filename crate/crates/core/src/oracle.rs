//! Independent checks on the symbolic engine.
//!
//! [`brute_force_moment`] expands `E((X_1 + ... + X_n)^p)` literally over every
//! index tuple in `{1..n}^p` and shares no code with the partition machinery.
//! [`monte_carlo_moment`] estimates the same quantity from seeded samples.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{stream_rng, MomentProvider};
use crate::symbolic::{evaluate, moment_of_sum, Mode, MomentAssignment, MomentPoly};
use crate::{Error, Rational, Result};

/// Default cap on the number of index tuples the brute-force expansion visits.
pub const DEFAULT_TUPLE_BUDGET: u64 = 10_000_000;

/// Samples per independent Monte Carlo stream. Fixed so that the merged
/// estimate does not depend on how many threads run the streams.
const STREAM_CHUNK: usize = 1 << 14;

pub fn brute_force_moment(p: u32, n: u32, moments: &MomentAssignment) -> Result<Rational> {
    brute_force_moment_with_budget(p, n, moments, DEFAULT_TUPLE_BUDGET)
}

/// Sums `E(X_i X_j ... X_k)` over all `n^p` ordered index tuples. Each
/// expectation factors into `prod_idx u_{count(idx)}` by independence.
pub fn brute_force_moment_with_budget(
    p: u32,
    n: u32,
    moments: &MomentAssignment,
    budget: u64,
) -> Result<Rational> {
    if p == 0 {
        return Err(Error::OrderOutOfRange { p, cap: crate::DEFAULT_ORDER_CAP });
    }
    if n == 0 {
        return Err(Error::EmptySum);
    }
    let tuples = (n as u128).checked_pow(p);
    if tuples.is_none_or(|t| t > budget as u128) {
        return Err(Error::BudgetExceeded {
            tuples: BigInt::from(n).pow(p).to_string(),
            budget,
        });
    }

    // How often each per-index exponent vector occurs among the tuples.
    let mut tally: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut index = vec![0usize; p as usize];
    let mut counts = vec![0u32; n as usize];
    counts[0] = p;
    loop {
        *tally.entry(counts.clone()).or_insert(0) += 1;
        // Odometer step over the tuple.
        let mut pos = 0;
        loop {
            if pos == index.len() {
                return total(&tally, moments);
            }
            counts[index[pos]] -= 1;
            index[pos] += 1;
            if index[pos] < n as usize {
                counts[index[pos]] += 1;
                break;
            }
            index[pos] = 0;
            counts[0] += 1;
            pos += 1;
        }
    }
}

fn total(tally: &HashMap<Vec<u32>, u64>, moments: &MomentAssignment) -> Result<Rational> {
    let mut sum = Rational::zero();
    for (counts, occurrences) in tally {
        let mut term = Rational::from_integer(BigInt::from(*occurrences));
        for &c in counts.iter().filter(|&&c| c > 0) {
            term *= moments.get(c)?;
        }
        sum += term;
    }
    Ok(sum)
}

/// Sample mean of `S_n^p` with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation of `S_n^p` over `sqrt(samples)`.
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `(mean - exact) / std_error`; zero when both the error and the
    /// deviation vanish, infinite when only the error does.
    pub fn z_score(&self, exact: f64) -> f64 {
        let dev = self.mean - exact;
        if self.std_error == 0.0 {
            if dev == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            dev / self.std_error
        }
    }

    pub fn within(&self, exact: f64, z: f64) -> bool {
        self.z_score(exact).abs() <= z
    }
}

#[derive(Debug, Clone, Copy)]
struct Running {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Running {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Running) -> Running {
        if self.count == 0 {
            return other;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let weight = other.count as f64 / count as f64;
        Running {
            count,
            mean: self.mean + delta * weight,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * weight,
        }
    }
}

/// Estimates `E(S_n^p)` from `samples` independent realizations of `S_n`.
///
/// Realizations are split into fixed-size streams, stream `i` drawing from
/// `stream_rng(seed, i)`. Streams run in parallel but are merged in index
/// order, so the result is bit-identical for any thread count.
pub fn monte_carlo_moment(
    dist: &MomentProvider,
    n: u32,
    p: u32,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    if samples < 2 {
        return Err(Error::InvalidParameter("monte carlo needs at least 2 samples".into()));
    }
    if n == 0 {
        return Err(Error::EmptySum);
    }
    let sampler = dist.sampler()?;
    let streams = samples.div_ceil(STREAM_CHUNK as u64);
    let partials: Vec<Running> = (0..streams)
        .into_par_iter()
        .map(|stream| {
            let start = stream * STREAM_CHUNK as u64;
            let len = (samples - start).min(STREAM_CHUNK as u64);
            let mut rng = stream_rng(seed, stream);
            let mut acc = Running { count: 0, mean: 0.0, m2: 0.0 };
            for _ in 0..len {
                let s: f64 = (0..n).map(|_| sampler.draw(&mut rng)).sum();
                acc.push(s.powi(p as i32));
            }
            acc
        })
        .collect();
    let merged = partials
        .into_iter()
        .fold(Running { count: 0, mean: 0.0, m2: 0.0 }, Running::merge);
    let variance = merged.m2 / (merged.count - 1) as f64;
    Ok(McEstimate {
        mean: merged.mean,
        std_error: (variance.max(0.0) / merged.count as f64).sqrt(),
        samples,
        seed,
    })
}

/// Random but valid raw moments `u_1..=u_order` (small numerators and
/// denominators, `u2 >= u1^2`).
pub fn random_moments<R: Rng + ?Sized>(rng: &mut R, order: u32) -> MomentAssignment {
    let mut q = |num: std::ops::RangeInclusive<i64>, den: std::ops::RangeInclusive<i64>| {
        Rational::new(rng.random_range(num).into(), rng.random_range(den).into())
    };
    let mut values = BTreeMap::new();
    let u1 = q(-9..=9, 1..=6);
    let excess = q(0..=9, 1..=6);
    values.insert(1, u1.clone());
    if order >= 2 {
        values.insert(2, &u1 * &u1 + excess);
    }
    for k in 3..=order {
        values.insert(k, q(-20..=20, 1..=8));
    }
    MomentAssignment::new(values).expect("u2 >= u1^2 by construction")
}

/// Grid and trial counts for [`verify_equivalence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub p_max: u32,
    pub n_max: u32,
    pub trials: u32,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { p_max: 6, n_max: 5, trials: 50, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub p: u32,
    pub n: u32,
    pub trial: u32,
    /// `(k, u_k)` as exact rational strings.
    pub moments: Vec<(u32, String)>,
    pub symbolic: String,
    pub brute_force: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: u64,
    pub failures: Vec<Counterexample>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares the symbolic expansion against the brute-force oracle for every
/// `p <= p_max`, `n <= n_max` and `trials` random moment assignments.
pub fn verify_equivalence(config: VerifyConfig) -> Result<VerifyReport> {
    verify_equivalence_with(config, evaluate)
}

/// As [`verify_equivalence`], with the symbolic evaluator supplied by the
/// caller (used to exercise the failure path).
pub fn verify_equivalence_with<F>(config: VerifyConfig, evaluator: F) -> Result<VerifyReport>
where
    F: Fn(&MomentPoly, u64, &MomentAssignment) -> Result<Rational> + Sync,
{
    let polys: Vec<MomentPoly> = (1..=config.p_max)
        .map(|p| moment_of_sum(p, Mode::General))
        .collect::<Result<_>>()?;
    let per_trial: Vec<Result<(u64, Vec<Counterexample>)>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(config.seed, trial as u64);
            let moments = random_moments(&mut rng, config.p_max);
            let mut checks = 0;
            let mut failures = Vec::new();
            for (poly, p) in polys.iter().zip(1..) {
                for n in 1..=config.n_max {
                    let symbolic = evaluator(poly, n as u64, &moments)?;
                    let brute = brute_force_moment(p, n, &moments)?;
                    checks += 1;
                    if symbolic != brute {
                        failures.push(Counterexample {
                            p,
                            n,
                            trial,
                            moments: moments
                                .values()
                                .iter()
                                .map(|(k, v)| (*k, v.to_string()))
                                .collect(),
                            symbolic: symbolic.to_string(),
                            brute_force: brute.to_string(),
                        });
                    }
                }
            }
            Ok((checks, failures))
        })
        .collect();
    let mut report = VerifyReport { checks: 0, failures: Vec::new() };
    for outcome in per_trial {
        let (checks, failures) = outcome?;
        report.checks += checks;
        report.failures.extend(failures);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_int;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn single_summand_is_raw_moment() {
        let m = MomentAssignment::from_sequence((1..=6).map(|k| q(k, 7))).unwrap();
        for p in 1..=6 {
            assert_eq!(&brute_force_moment(p, 1, &m).unwrap(), m.get(p).unwrap());
        }
    }

    #[test]
    fn two_coins_squared() {
        let coin = MomentAssignment::from_sequence([q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(brute_force_moment(2, 2, &coin).unwrap(), q(3, 2));
    }

    #[test]
    fn ones_count_tuples() {
        let ones = MomentAssignment::all_ones(5);
        assert_eq!(brute_force_moment(5, 3, &ones).unwrap(), from_int(243));
    }

    #[test]
    fn budget_is_enforced() {
        let ones = MomentAssignment::all_ones(8);
        let err = brute_force_moment_with_budget(8, 10, &ones, 1000).unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded { tuples: "100000000".into(), budget: 1000 }
        );
        assert!(brute_force_moment(30, 30, &MomentAssignment::all_ones(30)).is_err());
    }

    #[test]
    fn missing_moment_surfaces() {
        let m = MomentAssignment::from_sequence([q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(brute_force_moment(3, 2, &m), Err(Error::MissingMoment(3)));
    }

    #[test]
    fn degenerate_monte_carlo() {
        let one = MomentProvider::constant(from_int(1));
        let est = monte_carlo_moment(&one, 5, 2, 1000, 7).unwrap();
        assert_eq!(est.mean, 25.0);
        assert_eq!(est.std_error, 0.0);
        assert!(est.within(25.0, 5.0));
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let d: MomentProvider = "uniform(-1,1)".parse().unwrap();
        let a = monte_carlo_moment(&d, 4, 3, 50_000, 99).unwrap();
        let b = monte_carlo_moment(&d, 4, 3, 50_000, 99).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    }

    #[test]
    fn monte_carlo_independent_of_thread_count() {
        let d = MomentProvider::rademacher();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| monte_carlo_moment(&d, 6, 4, 100_000, 5).unwrap())
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one.mean.to_bits(), four.mean.to_bits());
        assert_eq!(one.std_error.to_bits(), four.std_error.to_bits());
    }

    #[test]
    fn monte_carlo_rejects_bad_inputs() {
        let d: MomentProvider = "moments(0,1)".parse().unwrap();
        assert!(matches!(monte_carlo_moment(&d, 2, 2, 100, 1), Err(Error::NotSamplable(_))));
        let r = MomentProvider::rademacher();
        assert!(monte_carlo_moment(&r, 2, 2, 1, 1).is_err());
        assert_eq!(monte_carlo_moment(&r, 0, 2, 10, 1), Err(Error::EmptySum));
    }

    #[test]
    fn verify_passes_and_catches_faults() {
        let cfg = VerifyConfig { p_max: 4, n_max: 3, trials: 5, seed: 1 };
        let report = verify_equivalence(cfg).unwrap();
        assert!(report.passed());
        assert_eq!(report.checks, 4 * 3 * 5);

        let faulty = verify_equivalence_with(cfg, |poly, n, m| {
            let v = evaluate(poly, n, m)?;
            Ok(if poly.order() == 3 && n == 2 { v + from_int(1) } else { v })
        })
        .unwrap();
        assert!(!faulty.passed());
        assert_eq!(faulty.failures.len(), 5);
        let first = &faulty.failures[0];
        assert_eq!((first.p, first.n, first.trial), (3, 2, 0));
        assert_eq!(first.moments.len(), 4);
    }
}
