pub mod algebra;
pub mod cli;
pub mod error;
pub mod frame_ops;
pub mod linalg;
pub mod measure;
pub mod module;
pub mod random;
pub mod report;
pub mod theorems;

pub use algebra::{AlgebraElement, AlgebraShape, DEFAULT_TOL};
pub use error::{Error, Result};
pub use frame_ops::{
    DiagnosticFlags, Frame, FrameBounds, FrameDiagnostics, GramOperator, RieszBounds,
};
pub use measure::{MeasureKind, MeasureSpace, QuadratureRule, SampledField};
pub use module::{ModuleOperator, ModuleVector};
