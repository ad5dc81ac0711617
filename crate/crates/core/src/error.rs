use alloc::boxed::Box;
use alloc::string::String;

use num_bigint::BigUint;
use thiserror::Error;

use crate::height::RealEnclosure;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument violates a mathematical precondition.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degree must be odd and at least 3, got {0}")]
    InvalidDegree(u32),

    #[error("radicand is not free of {d}-th powers: {prime}^{d} divides it")]
    NotPowerFree { prime: BigUint, d: u32 },

    #[error("x^{d} - {a} is reducible: {a} is a {p}-th power and {p} divides {d}")]
    Reducible { d: u32, a: BigUint, p: u32 },

    #[error("operation only supports degree {supported}, field has degree {got}")]
    UnsupportedDegree { supported: u32, got: u32 },

    #[error("elements belong to different fields")]
    MixedFields,

    #[error("argument out of the theorem's range: {0}")]
    OutOfRange(String),

    /// The requested work exceeds a configured limit.
    #[error("resource limit exceeded: {what} is {requested}, limit {limit}")]
    Resource { what: &'static str, requested: String, limit: String },

    /// A certified numeric routine could not reach the required accuracy.
    #[error("refinement exhausted at {bits} bits, best enclosure {best}")]
    Refinement { best: Box<RealEnclosure>, bits: u32 },

    /// The bound carries no information (for instance `C_d * A <= 1`).
    #[error("degenerate bound: {0}")]
    Degenerate(String),

    #[error("parse error: {0}")]
    Parse(String),
}
