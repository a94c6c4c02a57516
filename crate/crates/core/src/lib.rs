pub mod cli;
pub mod conjugation;
pub mod construct;
pub mod defect;
pub mod error;
pub mod linalg;
pub mod report;
pub mod sequence;
pub mod structure;

pub use conjugation::Conjugation;
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ExactMatrix, TolerancePolicy, C64};
