use thiserror::Error;

/// Errors produced by the geometric and arithmetic routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cone is not strongly convex")]
    NotStronglyConvex,
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("coefficients are not a linear relation among the given vectors")]
    NotARelation,
    #[error("relation has all coefficients of one sign")]
    DegenerateRelation,
    #[error("malformed fan: {0}")]
    MalformedFan(String),
    #[error("ray already present in the fan")]
    RayExists,
    #[error("vector lies outside the support of the fan")]
    OutsideSupport,
    #[error("relation is not divisorial for the given ray")]
    NotDivisorial,
    #[error("contraction does not produce a valid fan: {0}")]
    InvalidContraction(String),
    #[error("extremal ray is not matched by any primitive relation")]
    UnmatchedRay,
    #[error("operation requires a smooth fan")]
    RequiresSmooth,
    #[error("operation requires Picard rank two (got {0})")]
    RequiresRankTwo(usize),
    #[error("relation is not an inert divisorial relation")]
    NotInert,
    #[error("class {0} is not in the Frobenius support")]
    OutsideFSupp(String),
    #[error("blowdown chain stuck: {0}")]
    ChainStuck(String),
    #[error("enumeration budget exceeded: q^d = {0} > {1}")]
    BudgetExceeded(u128, u128),
    #[error("unknown catalog name: {0}")]
    UnknownName(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("integer overflow converting {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
