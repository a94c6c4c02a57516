//! Dense complex matrices.
//!
//! [`ComplexMatrix`] is a thin newtype over `nalgebra::DMatrix<Complex64>` that
//! keeps the finiteness invariant and exposes the handful of operations the
//! rest of the toolkit is written against. The operator impls (`&a * &b`,
//! `&a + &b`, ...) panic on shape mismatch like their nalgebra counterparts;
//! the named methods return [`Result`] instead.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting NaN and infinities.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::EntryCount {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Self::from_dmatrix(DMatrix::from_row_slice(rows, cols, &entries))
    }

    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self(m))
    }

    /// Real matrix from nested rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self(DMatrix::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn from_complex_rows(rows: &[&[C64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
    }

    pub(crate) fn wrap(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Matrix unit `E_ij` (zero-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = C64::new(1.0, 0.0);
        Self(m)
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self(DMatrix::from_fn(n, n, |i, j| if i == j { diag[i] } else { C64::new(0.0, 0.0) }))
    }

    /// Antidiagonal permutation matrix.
    pub fn flip(n: usize) -> Self {
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i + j + 1 == n {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn dim(&self) -> usize {
        self.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn entries_row_major(&self) -> Vec<C64> {
        let (r, c) = self.shape();
        (0..r)
            .flat_map(|i| (0..c).map(move |j| (i, j)))
            .map(|(i, j)| self.0[(i, j)])
            .collect()
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }

    pub fn mat_mul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols() != rhs.rows() {
            return Err(Error::DimensionMismatch {
                op: "mat_mul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Self(&self.0 * &rhs.0))
    }

    pub fn try_add(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.same_shape("add", rhs)?;
        Ok(Self(&self.0 + &rhs.0))
    }

    pub fn try_sub(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.same_shape("sub", rhs)?;
        Ok(Self(&self.0 - &rhs.0))
    }

    fn same_shape(&self, op: &'static str, rhs: &ComplexMatrix) -> Result<()> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> ComplexMatrix {
        Self(self.0.transpose())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> ComplexMatrix {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, c: C64) -> ComplexMatrix {
        Self(self.0.map(|z| z * c))
    }

    pub fn scale_real(&self, c: f64) -> ComplexMatrix {
        Self(self.0.map(|z| z * c))
    }

    /// `A^k` by binary powering, with `A^0 = I`.
    pub fn pow(&self, k: u32) -> Result<ComplexMatrix> {
        let n = self.require_square()?;
        let mut result = DMatrix::<C64>::identity(n, n);
        let mut base = self.0.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(Self(result))
    }

    pub fn kron(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        Self(self.0.kronecker(&rhs.0))
    }

    /// Block-diagonal `self ⊕ rhs`.
    pub fn direct_sum(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let (r1, c1) = self.shape();
        let (r2, c2) = rhs.shape();
        let mut m = DMatrix::zeros(r1 + r2, c1 + c2);
        m.view_mut((0, 0), (r1, c1)).copy_from(&self.0);
        m.view_mut((r1, c1), (r2, c2)).copy_from(&rhs.0);
        Self(m)
    }

    /// Assembles `[[a, b], [c, d]]`.
    pub fn from_blocks(
        a: &ComplexMatrix,
        b: &ComplexMatrix,
        c: &ComplexMatrix,
        d: &ComplexMatrix,
    ) -> Result<ComplexMatrix> {
        if a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols() {
            return Err(Error::DimensionMismatch {
                op: "from_blocks",
                left: a.shape(),
                right: d.shape(),
            });
        }
        let (r1, c1) = a.shape();
        let (r2, c2) = d.shape();
        let mut m = DMatrix::zeros(r1 + r2, c1 + c2);
        m.view_mut((0, 0), (r1, c1)).copy_from(&a.0);
        m.view_mut((0, c1), (r1, c2)).copy_from(&b.0);
        m.view_mut((r1, 0), (r2, c1)).copy_from(&c.0);
        m.view_mut((r1, c1), (r2, c2)).copy_from(&d.0);
        Ok(Self(m))
    }

    pub fn block(&self, row: usize, col: usize, nrows: usize, ncols: usize) -> ComplexMatrix {
        Self(self.0.view((row, col), (nrows, ncols)).into_owned())
    }

    pub fn columns(&self, start: usize, count: usize) -> ComplexMatrix {
        Self(self.0.columns(start, count).into_owned())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `A·x` for a column vector given as a slice.
    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.cols() {
            return Err(Error::DimensionMismatch {
                op: "apply",
                left: self.shape(),
                right: (x.len(), 1),
            });
        }
        Ok((0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)] * x[j]).sum())
            .collect())
    }

    pub fn commutator(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        &(self * rhs) - &(rhs * self)
    }

    /// True when every entry is a Gaussian integer that fits losslessly in an `f64`.
    pub fn is_gaussian_integer(&self) -> bool {
        const LIMIT: f64 = 9_007_199_254_740_992.0;
        self.0.iter().all(|z| {
            z.re.fract() == 0.0 && z.im.fract() == 0.0 && z.re.abs() < LIMIT && z.im.abs() < LIMIT
        })
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{:?} [", self.shape())?;
        for i in 0..self.rows() {
            write!(f, "\n  ")?;
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
        }
        write!(f, "\n]")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}
