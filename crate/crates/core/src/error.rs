use num_bigint::BigInt;
use thiserror::Error;

use crate::exactq::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `t` is one of 0, 1, -1, where E_t is singular.
    #[error("degenerate parameter t = {0}: E_t is singular for t in {{0, 1, -1}}")]
    DegenerateParameter(Rational),

    #[error("point {0} is not on the curve")]
    NotOnCurve(String),

    /// The point lies in the torsion subgroup A_t and has no triangle image.
    #[error("degenerate point {0}: lies in A_t")]
    DegeneratePoint(String),

    #[error("factorization of {n} incomplete: effort budget of {budget} iterations exhausted (unfactored cofactor {cofactor})")]
    FactorizationIncomplete {
        n: BigInt,
        cofactor: BigInt,
        budget: u64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    /// A branch that the mathematics says is unreachable was reached.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
