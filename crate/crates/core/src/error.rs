use thiserror::Error;

use crate::monomial::Monomial;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("rewriting {monomial} exceeded the step budget of {budget} Adem rewrites")]
    StepBudget { monomial: Monomial, budget: u64 },

    #[error("λ_{0}λ_{1} is already admissible; the Adem relation applies only when j ≥ 2i+1")]
    AdmissiblePair(u64, u64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("the second subspace is not contained in the first")]
    NotASubspace,

    #[error("{0} is not a cocycle")]
    NotACocycle(String),

    #[error("{0} contains a monomial with no even subscript and cannot be lifted from Λ′")]
    NotLiftable(Monomial),

    #[error("{monomial} does not lie in the {what} basis")]
    NotInBasis { monomial: Monomial, what: String },

    #[error("element is not homogeneous of bidegree ({s},{t})")]
    WrongBidegree { s: u32, t: u32 },

    #[error("no odd-ending representative exists for {0}")]
    Infeasible(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
