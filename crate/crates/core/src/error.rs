use thiserror::Error;

use crate::quaternion::Quaternion;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point ({alpha}, {beta}) lies outside the domain")]
    Domain { alpha: f64, beta: f64 },
    #[error("quaternion {0} is not a valid imaginary unit")]
    InvalidUnit(Quaternion),
    #[error("normal stem vanishes at ({alpha}, {beta}); reciprocal undefined")]
    DivisionByZero { alpha: f64, beta: f64 },
    #[error("operands are defined on different domains")]
    DomainMismatch,
    #[error("no interior sample found in the domain")]
    EmptyDomain,
    #[error("operation needs a non-real point")]
    RealPoint,
    #[error("the real point {0} is not in a product domain")]
    ProductDomainRealPoint(f64),
    #[error("operation needs a polynomial stem")]
    NonPolynomial,
    #[error("normal function vanishes identically")]
    NormalIdenticallyZero,
    #[error("F2 vanishes at ({alpha}, {beta}); wing direction undefined there")]
    DegeneratePoint { alpha: f64, beta: f64 },
    #[error("the slice map vanishes near {0}")]
    ZeroOfMap(Quaternion),
    #[error("function is slice-constant")]
    SliceConstant,
    #[error("wing selection needs a product domain")]
    NotProductDomain,
    #[error("invalid function description: {0}")]
    Parse(String),
    #[error("unknown registry entry `{0}`")]
    UnknownFunction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
