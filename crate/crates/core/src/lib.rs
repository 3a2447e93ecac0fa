//! Quaternionic slice regular functions: stems, Jacobians, fibers and singular sets.

pub mod ast;
pub mod demo;
pub mod domain;
pub mod error;
pub mod exec;
pub mod fibers;
pub mod jacobian;
pub mod quaternion;
pub mod registry;
pub mod roots;
pub mod singular;
pub mod slicefn;
pub mod stem;

pub use domain::{BoundingBox, DomainKind, SymmetricDomain};
pub use error::{Error, Result};
pub use exec::Exec;
pub use quaternion::{ImaginaryUnit, Quaternion, SliceCoordinates};
pub use slicefn::{FunctionClass, SliceFunction};
pub use stem::{StemFunction, StemValue};
