// NaN inputs must fail the positivity checks, which `!(x > 0.0)` does.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ac;
pub mod error;
pub mod linear;
pub mod measure;
mod serde_float;
pub mod spaces;
pub mod tms;

pub use ac::{AcVerdict, Certificate, DeltaRule, DisjointFamily, FunctionSpec};
pub use error::{Result, TmsError};
pub use measure::{MeasureEstimate, MeasureKind};
pub use spaces::{CircleMetric, Norm, OpenSet, Point, SpaceDescriptor};
pub use tms::{Bracket, TmsInstance};
