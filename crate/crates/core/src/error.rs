use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("degree drop under reversal")]
    DegreeDropUnderReversal,
    #[error("content > 1")]
    NotPrimitive,
    #[error("polynomial of degree 0")]
    DegreeZero,
    #[error("cannot evaluate at an infinite point")]
    InfiniteArgument,
    #[error("not square-free")]
    NotSquareFree,
    #[error("interval does not isolate exactly one root (found {0})")]
    NotIsolating(usize),
    #[error("empty interval: lower endpoint must be below upper endpoint")]
    EmptyInterval,
    #[error("outside closed-form region")]
    OutsideClosedForm,
    #[error("budget too small")]
    BudgetTooSmall,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
