use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("moment order {p} is outside the supported range 1..={cap}")]
    OrderOutOfRange { p: u32, cap: u32 },

    #[error("sample size n must be at least 1")]
    EmptySum,

    #[error("moment u{0} is required but was not supplied")]
    MissingMoment(u32),

    #[error("moment u{k} of {dist} is infinite (finite only up to order {finite_up_to})")]
    InfiniteMoment {
        dist: String,
        k: u32,
        finite_up_to: u32,
    },

    #[error("raw moments are inconsistent: u2 = {u2} is smaller than u1^2 = {u1_squared}")]
    InconsistentMoments { u2: String, u1_squared: String },

    #[error("unknown distribution `{0}`")]
    UnknownDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0} is a moment-only provider and cannot be sampled")]
    NotSamplable(String),

    #[error("distribution is not symmetric about zero: odd moment u{k} = {value}")]
    Asymmetric { k: u32, value: String },

    #[error("variance is zero; the normalized moment is undefined")]
    ZeroVariance,

    #[error("expression divides by u{0}, which is zero")]
    DivisionByZero(u32),

    #[error("brute-force expansion needs {tuples} index tuples, over the budget of {budget}")]
    BudgetExceeded { tuples: String, budget: u64 },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by the mathematical setting rather than by
    /// malformed input: infinite or missing moments, asymmetry, zero variance.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::MissingMoment(_)
                | Error::InfiniteMoment { .. }
                | Error::InconsistentMoments { .. }
                | Error::Asymmetric { .. }
                | Error::ZeroVariance
                | Error::DivisionByZero(_)
                | Error::NotSamplable(_)
                | Error::BudgetExceeded { .. }
                | Error::OrderOutOfRange { .. }
                | Error::EmptySum
        )
    }
}
