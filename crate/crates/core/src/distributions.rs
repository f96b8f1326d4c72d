//! Built-in summand laws with exact raw moments and seeded samplers.
//!
//! Moments come from closed forms (uniform, exponential, normal), the Touchard
//! recurrence (Poisson), or direct enumeration of the support (discrete laws).
//! Sampling uses ChaCha8 seeded with `seed_from_u64`; independent streams of
//! one seed are separated with `set_stream`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Cauchy, Distribution, Exp, Poisson, StandardNormal};

use crate::combinatorics::factorial;
use crate::rational::parse_rational;
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Law {
    Constant(Rational),
    Rademacher,
    Bernoulli(Rational),
    Uniform { low: Rational, high: Rational },
    StandardNormal,
    Exponential(Rational),
    Poisson(Rational),
    TwoPoint { x1: Rational, x2: Rational, q: Rational },
    Explicit(Vec<Rational>),
    Cauchy,
}

/// A named summand distribution that can report its raw moments `E(X^k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentProvider {
    law: Law,
}

fn probability(q: &Rational, what: &str) -> Result<()> {
    if q.is_negative() || *q > Rational::one() {
        return Err(Error::InvalidParameter(format!("{what} must lie in [0, 1], got {q}")));
    }
    Ok(())
}

fn positive(x: &Rational, what: &str) -> Result<()> {
    if !x.is_positive() {
        return Err(Error::InvalidParameter(format!("{what} must be positive, got {x}")));
    }
    Ok(())
}

impl MomentProvider {
    /// Point mass at `c`.
    pub fn constant(c: Rational) -> Self {
        Self { law: Law::Constant(c) }
    }

    /// `±1` with equal probability.
    pub fn rademacher() -> Self {
        Self { law: Law::Rademacher }
    }

    /// `1` with probability `q`, else `0`.
    pub fn bernoulli(q: Rational) -> Result<Self> {
        probability(&q, "bernoulli probability")?;
        Ok(Self { law: Law::Bernoulli(q) })
    }

    pub fn uniform(low: Rational, high: Rational) -> Result<Self> {
        if low >= high {
            return Err(Error::InvalidParameter(format!(
                "uniform needs low < high, got ({low}, {high})"
            )));
        }
        Ok(Self { law: Law::Uniform { low, high } })
    }

    pub fn standard_normal() -> Self {
        Self { law: Law::StandardNormal }
    }

    /// Exponential with rate `lambda` (mean `1/lambda`).
    pub fn exponential(rate: Rational) -> Result<Self> {
        positive(&rate, "exponential rate")?;
        Ok(Self { law: Law::Exponential(rate) })
    }

    pub fn poisson(lambda: Rational) -> Result<Self> {
        positive(&lambda, "poisson mean")?;
        Ok(Self { law: Law::Poisson(lambda) })
    }

    /// `x1` with probability `q`, else `x2`.
    pub fn two_point(x1: Rational, x2: Rational, q: Rational) -> Result<Self> {
        probability(&q, "two_point probability")?;
        Ok(Self { law: Law::TwoPoint { x1, x2, q } })
    }

    /// Moment-only provider echoing `u1, u2, ...`; it cannot be sampled.
    pub fn explicit(moments: Vec<Rational>) -> Result<Self> {
        if moments.is_empty() {
            return Err(Error::InvalidParameter("moments(...) needs at least u1".into()));
        }
        if moments.len() >= 2 {
            let u1_squared = &moments[0] * &moments[0];
            if moments[1] < u1_squared {
                return Err(Error::InconsistentMoments {
                    u2: moments[1].to_string(),
                    u1_squared: u1_squared.to_string(),
                });
            }
        }
        Ok(Self { law: Law::Explicit(moments) })
    }

    /// Standard Cauchy: samplable, but no moment of order >= 1 is finite.
    pub fn cauchy() -> Self {
        Self { law: Law::Cauchy }
    }

    pub fn name(&self) -> &'static str {
        match self.law {
            Law::Constant(_) => "constant",
            Law::Rademacher => "rademacher",
            Law::Bernoulli(_) => "bernoulli",
            Law::Uniform { .. } => "uniform",
            Law::StandardNormal => "normal",
            Law::Exponential(_) => "exponential",
            Law::Poisson(_) => "poisson",
            Law::TwoPoint { .. } => "two_point",
            Law::Explicit(_) => "moments",
            Law::Cauchy => "cauchy",
        }
    }

    pub fn params(&self) -> Vec<Rational> {
        match &self.law {
            Law::Constant(c) | Law::Bernoulli(c) | Law::Exponential(c) | Law::Poisson(c) => {
                vec![c.clone()]
            }
            Law::Uniform { low, high } => vec![low.clone(), high.clone()],
            Law::TwoPoint { x1, x2, q } => vec![x1.clone(), x2.clone(), q.clone()],
            Law::Explicit(m) => m.clone(),
            Law::Rademacher | Law::StandardNormal | Law::Cauchy => vec![],
        }
    }

    /// Whether the law is its own reflection about zero, which forces every
    /// reported odd moment to be exactly zero.
    pub fn is_symmetric(&self) -> bool {
        match &self.law {
            Law::Constant(c) => c.is_zero(),
            Law::Rademacher | Law::StandardNormal | Law::Cauchy => true,
            Law::Bernoulli(q) => q.is_zero(),
            Law::Uniform { low, high } => *low == -high.clone(),
            Law::Exponential(_) | Law::Poisson(_) => false,
            Law::TwoPoint { x1, x2, q } => {
                let half = Rational::new(1.into(), 2.into());
                let mass_at_zero_only = (x1.is_zero() || q.is_zero())
                    && (x2.is_zero() || q.is_one());
                mass_at_zero_only || (*x1 == -x2.clone() && *q == half)
            }
            Law::Explicit(m) => m.iter().step_by(2).all(Zero::is_zero),
        }
    }

    /// Highest order with a finite (or known) moment; `None` when unbounded.
    pub fn finite_up_to(&self) -> Option<u32> {
        match &self.law {
            Law::Explicit(m) => Some(m.len() as u32),
            Law::Cauchy => Some(0),
            _ => None,
        }
    }

    /// Exact `E(X^k)`; `k = 0` gives `1`.
    pub fn raw_moment(&self, k: u32) -> Result<Rational> {
        if k == 0 {
            return Ok(Rational::one());
        }
        let pow = |x: &Rational, e: u32| num_traits::pow(x.clone(), e as usize);
        let value = match &self.law {
            Law::Constant(c) => pow(c, k),
            Law::Rademacher => {
                if k % 2 == 0 {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            Law::Bernoulli(q) => q.clone(),
            Law::Uniform { low, high } => {
                let width = high - low;
                (pow(high, k + 1) - pow(low, k + 1)) / (width * Rational::from_integer((k + 1).into()))
            }
            Law::StandardNormal => {
                if k % 2 == 1 {
                    Rational::zero()
                } else {
                    let dfact = (1..k).step_by(2).fold(BigInt::one(), |acc, j| acc * j);
                    Rational::from_integer(dfact)
                }
            }
            Law::Exponential(rate) => Rational::from_integer(factorial(k)) / pow(rate, k),
            Law::Poisson(lambda) => touchard(lambda, k),
            Law::TwoPoint { x1, x2, q } => q * pow(x1, k) + (Rational::one() - q) * pow(x2, k),
            Law::Explicit(m) => match m.get(k as usize - 1) {
                Some(v) => v.clone(),
                None => return Err(Error::MissingMoment(k)),
            },
            Law::Cauchy => {
                return Err(Error::InfiniteMoment {
                    dist: self.to_string(),
                    k,
                    finite_up_to: 0,
                })
            }
        };
        Ok(value)
    }

    pub fn is_samplable(&self) -> bool {
        !matches!(self.law, Law::Explicit(_))
    }

    pub fn sampler(&self) -> Result<Sampler> {
        let f = |x: &Rational| x.to_f64().unwrap_or(f64::NAN);
        let kind = match &self.law {
            Law::Constant(c) => SamplerKind::Constant(f(c)),
            Law::Rademacher => SamplerKind::TwoPoint { x1: 1.0, x2: -1.0, q: 0.5 },
            Law::Bernoulli(q) => SamplerKind::TwoPoint { x1: 1.0, x2: 0.0, q: f(q) },
            Law::Uniform { low, high } => SamplerKind::Uniform { low: f(low), width: f(high) - f(low) },
            Law::StandardNormal => SamplerKind::Normal,
            Law::Exponential(rate) => SamplerKind::Exponential(
                Exp::new(f(rate)).map_err(|e| Error::InvalidParameter(e.to_string()))?,
            ),
            Law::Poisson(lambda) => SamplerKind::Poisson(
                Poisson::new(f(lambda)).map_err(|e| Error::InvalidParameter(e.to_string()))?,
            ),
            Law::TwoPoint { x1, x2, q } => SamplerKind::TwoPoint { x1: f(x1), x2: f(x2), q: f(q) },
            Law::Cauchy => SamplerKind::Cauchy(
                Cauchy::new(0.0, 1.0).map_err(|e| Error::InvalidParameter(e.to_string()))?,
            ),
            Law::Explicit(_) => return Err(Error::NotSamplable(self.to_string())),
        };
        Ok(Sampler { kind })
    }

    /// `count` draws from the stream seeded by `seed`.
    pub fn sample(&self, seed: u64, count: usize) -> Result<Vec<f64>> {
        let sampler = self.sampler()?;
        let mut rng = stream_rng(seed, 0);
        Ok((0..count).map(|_| sampler.draw(&mut rng)).collect())
    }
}

/// `E(X^k)` for Poisson(`lambda`): `m_k = lambda * sum_j C(k-1, j) m_j`.
fn touchard(lambda: &Rational, k: u32) -> Rational {
    let mut moments = vec![Rational::one()];
    for order in 1..=k as usize {
        let mut binom = BigInt::one();
        let mut acc = Rational::zero();
        for (j, m) in moments.iter().enumerate() {
            acc += Rational::from_integer(binom.clone()) * m;
            binom = binom * (order - 1 - j) / (j + 1);
        }
        moments.push(lambda * acc);
    }
    moments.pop().unwrap_or_else(Rational::one)
}

/// Generator for stream `stream` of `seed`. Distinct streams never overlap.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws `f64` variates; the generator state is owned by the caller.
#[derive(Debug, Clone)]
pub struct Sampler {
    kind: SamplerKind,
}

#[derive(Debug, Clone)]
enum SamplerKind {
    Constant(f64),
    TwoPoint { x1: f64, x2: f64, q: f64 },
    Uniform { low: f64, width: f64 },
    Normal,
    Exponential(Exp<f64>),
    Poisson(Poisson<f64>),
    Cauchy(Cauchy<f64>),
}

impl Sampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            SamplerKind::Constant(c) => *c,
            SamplerKind::TwoPoint { x1, x2, q } => {
                if rng.random::<f64>() < *q {
                    *x1
                } else {
                    *x2
                }
            }
            SamplerKind::Uniform { low, width } => low + width * rng.random::<f64>(),
            SamplerKind::Normal => StandardNormal.sample(rng),
            SamplerKind::Exponential(d) => d.sample(rng),
            SamplerKind::Poisson(d) => d.sample(rng),
            SamplerKind::Cauchy(d) => d.sample(rng),
        }
    }
}

/// One representative of every built-in law.
pub fn builtin_providers() -> Vec<MomentProvider> {
    let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
    vec![
        MomentProvider::constant(q(1, 1)),
        MomentProvider::rademacher(),
        MomentProvider::bernoulli(q(1, 2)).expect("valid"),
        MomentProvider::uniform(q(-1, 1), q(1, 1)).expect("valid"),
        MomentProvider::standard_normal(),
        MomentProvider::exponential(q(1, 1)).expect("valid"),
        MomentProvider::poisson(q(1, 1)).expect("valid"),
        MomentProvider::two_point(q(-1, 1), q(2, 1), q(2, 3)).expect("valid"),
        MomentProvider::explicit(vec![q(0, 1), q(1, 1), q(0, 1), q(3, 1)]).expect("valid"),
        MomentProvider::cauchy(),
    ]
}

/// `name(param, ...)` in the same syntax [`FromStr`] accepts.
impl fmt::Display for MomentProvider {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        let params = self.params();
        if !params.is_empty() || matches!(self.law, Law::Explicit(_)) {
            f.write_str("(")?;
            for (i, p) in params.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Parses `uniform(-1,1)`, `bernoulli(1/2)`, `rademacher`, `moments(0,1,0,3)`.
impl FromStr for MomentProvider {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(open) => {
                let inner = s[open + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("missing `)` in `{s}`")))?;
                let args = if inner.trim().is_empty() {
                    vec![]
                } else {
                    inner.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?
                };
                (s[..open].trim(), args)
            }
            None => (s, vec![]),
        };
        let name = name.to_ascii_lowercase();
        let arity = |want: usize| -> Result<()> {
            if args.len() != want {
                return Err(Error::Parse(format!(
                    "{name} takes {want} parameter(s), got {}",
                    args.len()
                )));
            }
            Ok(())
        };
        let mut a = args.clone().into_iter();
        let mut next = || a.next().expect("arity checked");
        match name.as_str() {
            "constant" => {
                arity(1)?;
                Ok(Self::constant(next()))
            }
            "rademacher" => {
                arity(0)?;
                Ok(Self::rademacher())
            }
            "bernoulli" => {
                arity(1)?;
                Self::bernoulli(next())
            }
            "uniform" => {
                arity(2)?;
                Self::uniform(next(), next())
            }
            "normal" | "standard_normal" => {
                arity(0)?;
                Ok(Self::standard_normal())
            }
            "exponential" => {
                arity(1)?;
                Self::exponential(next())
            }
            "poisson" => {
                arity(1)?;
                Self::poisson(next())
            }
            "two_point" | "twopoint" => {
                arity(3)?;
                Self::two_point(next(), next(), next())
            }
            "moments" => Self::explicit(args),
            "cauchy" => {
                arity(0)?;
                Ok(Self::cauchy())
            }
            _ => Err(Error::UnknownDistribution(name)),
        }
    }
}
