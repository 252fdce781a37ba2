use thiserror::Error;

/// Errors raised by the library. Every closed form and oracle refuses inputs
/// outside its hypotheses instead of extrapolating.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported modulus {q}: {reason}")]
    UnsupportedModulus { q: u64, reason: &'static str },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{x} is not a unit modulo {modulus}")]
    NotUnit { x: i64, modulus: u64 },

    #[error("hypotheses violated for {claim}: {hypothesis}")]
    HypothesisViolated { claim: &'static str, hypothesis: String },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("denominator {denominator} does not divide working order {order}")]
    NotADivisor { denominator: u64, order: usize },

    #[error("{what} too large: estimated cost {cost:.3e} exceeds limit {limit:.3e}")]
    TooLarge { what: &'static str, cost: f64, limit: f64 },

    #[error("non-integral result for {0}")]
    NonIntegral(String),
}

impl Error {
    pub(crate) fn hypothesis(claim: &'static str, hypothesis: impl Into<String>) -> Self {
        Error::HypothesisViolated {
            claim,
            hypothesis: hypothesis.into(),
        }
    }

    /// True for errors caused by bad input, as opposed to a failed check.
    pub fn is_invalid_input(&self) -> bool {
        !matches!(self, Error::NonIntegral(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
