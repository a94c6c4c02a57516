//! Factorization-based routines: singular values, eigenvalues, range bases.
//!
//! Matrices are stored as nalgebra values, but the decompositions run in
//! faer. nalgebra's complex SVD returns wrong factors for some
//! rank-deficient inputs (recomposition errors near 1e-2), which is fatal
//! for range bases.

use faer::MatRef;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64};
use super::tolerance::TolerancePolicy;
use crate::error::{Error, Result};

fn to_faer(a: &ComplexMatrix) -> MatRef<'_, C64> {
    let m = a.as_dmatrix();
    // nalgebra storage is column-major with a unit row stride.
    MatRef::from_column_major_slice(m.as_slice(), m.nrows(), m.ncols())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    pub frobenius: f64,
    pub spectral: f64,
}

/// Orthonormal bases of the column space of `A` and of its orthogonal
/// complement `N(A*)`.
#[derive(Debug, Clone)]
pub struct RangeBasis {
    pub range: ComplexMatrix,
    pub complement: ComplexMatrix,
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

impl RangeBasis {
    /// `[range | complement]`, a unitary matrix whose first `rank` columns span the range.
    pub fn unitary(&self) -> ComplexMatrix {
        let n = self.range.rows();
        let mut m = DMatrix::zeros(n, n);
        m.columns_mut(0, self.rank).copy_from(self.range.as_dmatrix());
        m.columns_mut(self.rank, n - self.rank)
            .copy_from(self.complement.as_dmatrix());
        ComplexMatrix::wrap(m)
    }
}

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(Vec::new());
    }
    to_faer(a).singular_values().map_err(|_| Error::SvdNonConvergence)
}

/// Largest singular value; zero for empty matrices.
pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a)
        .ok()
        .and_then(|s| s.first().copied())
        .unwrap_or(0.0)
}

pub fn smallest_singular_value(a: &ComplexMatrix) -> f64 {
    singular_values(a)
        .ok()
        .and_then(|s| s.last().copied())
        .unwrap_or(0.0)
}

pub fn norms(a: &ComplexMatrix) -> Norms {
    Norms {
        frobenius: a.frobenius_norm(),
        spectral: spectral_norm(a),
    }
}

/// Relative zero test: `|A|_F <= rel_zero * scale`.
pub fn is_zero(a: &ComplexMatrix, scale: f64, tol: &TolerancePolicy) -> bool {
    tol.is_zero_norm(a.frobenius_norm(), scale.max(1.0))
}

/// Eigenvalues with multiplicity, from a complex Schur form.
///
/// Each returned `λ` satisfies `σ_min(A − λI) ≤ eig_match·(1 + |A|₂)`
/// for well-scaled inputs; non-convergence is reported rather than guessed.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>> {
    let n = a.require_square()?;
    if n == 0 {
        return Ok(Vec::new());
    }
    to_faer(a).eigenvalues().map_err(|_| Error::EigenNonConvergence)
}

pub fn spectral_radius(a: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Backward error of `λ` as an eigenvalue of `A`: `σ_min(A − λI)`.
pub fn eigen_backward_error(a: &ComplexMatrix, lambda: C64) -> f64 {
    let n = a.rows();
    let shifted = a - &ComplexMatrix::identity(n).scale(lambda);
    smallest_singular_value(&shifted)
}

/// Orthonormal basis of the column space of `A` plus one of its complement.
///
/// The numerical rank counts singular values strictly above
/// `rank_rel · σ_max · max(rows, cols)`; values at the threshold are dropped.
pub fn column_space_basis(a: &ComplexMatrix, tol: &TolerancePolicy) -> Result<RangeBasis> {
    column_space_basis_scaled(a, 0.0, tol)
}

/// As [`column_space_basis`], with singular values also measured against
/// `scale`: a matrix that is roundoff of something of size `scale` has rank 0.
pub fn column_space_basis_scaled(a: &ComplexMatrix, scale: f64, tol: &TolerancePolicy) -> Result<RangeBasis> {
    let (rows, cols) = a.shape();
    if rows == 0 {
        return Ok(RangeBasis {
            range: ComplexMatrix::zeros(0, 0),
            complement: ComplexMatrix::zeros(0, 0),
            rank: 0,
            singular_values: Vec::new(),
        });
    }
    let svd = to_faer(a).svd().map_err(|_| Error::SvdNonConvergence)?;
    let (u, sv) = (svd.U(), svd.S().column_vector());
    let u = DMatrix::<C64>::from_fn(rows, rows, |i, j| u[(i, j)]);
    // Rows beyond the column count have singular value zero.
    let sv: Vec<f64> = (0..rows).map(|k| if k < sv.nrows() { sv[k].re } else { 0.0 }).collect();

    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));
    let sorted: Vec<f64> = order.iter().map(|&i| sv[i]).collect();
    let sigma_max = sorted.first().copied().unwrap_or(0.0);
    let threshold = tol.rank_rel * sigma_max.max(scale) * rows.max(cols) as f64;
    let rank = if sigma_max == 0.0 {
        0
    } else {
        sorted.iter().take_while(|&&s| s > threshold).count()
    };

    let mut q = DMatrix::<C64>::zeros(rows, rows);
    for (dst, &src) in order.iter().enumerate().take(rows) {
        q.set_column(dst, &u.column(src));
    }
    let q = ComplexMatrix::wrap(q);
    Ok(RangeBasis {
        range: q.columns(0, rank),
        complement: q.columns(rank, rows - rank),
        rank,
        singular_values: sorted.into_iter().take(cols.min(rows)).collect(),
    })
}
