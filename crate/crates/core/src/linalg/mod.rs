//! Dense complex linear algebra shared by every other module.

pub mod exact;
pub mod matrix;
pub mod spectral;
pub mod tolerance;

pub use exact::ExactMatrix;
pub use matrix::{ComplexMatrix, C64};
pub use spectral::{
    column_space_basis, column_space_basis_scaled, eigen_backward_error, eigenvalues, is_zero, norms, singular_values,
    smallest_singular_value, spectral_norm, spectral_radius, Norms, RangeBasis,
};
pub use tolerance::TolerancePolicy;
