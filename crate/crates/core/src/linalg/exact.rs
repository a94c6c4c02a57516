//! Exact arithmetic over Gaussian integers.
//!
//! Used for golden cases and for re-checking suspected counterexamples when
//! every input has integer real and imaginary parts.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

pub type GaussianInt = Complex<BigInt>;

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianInt>,
}

fn gi(re: i64, im: i64) -> GaussianInt {
    Complex::new(BigInt::from(re), BigInt::from(im))
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![GaussianInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = GaussianInt::one();
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data = rows.iter().flat_map(|row| row.iter().map(|&x| gi(x, 0))).collect();
        Self { rows: r, cols: c, data }
    }

    /// Exact copy of a floating matrix whose entries are all Gaussian integers.
    pub fn from_complex(m: &ComplexMatrix) -> Option<Self> {
        if !m.is_gaussian_integer() {
            return None;
        }
        let data = m
            .entries_row_major()
            .into_iter()
            .map(|z| gi(z.re as i64, z.im as i64))
            .collect();
        Some(Self {
            rows: m.rows(),
            cols: m.cols(),
            data,
        })
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        let entries = self
            .data
            .iter()
            .map(|z| C64::new(z.re.to_f64().unwrap_or(f64::MAX), z.im.to_f64().unwrap_or(f64::MAX)))
            .collect();
        ComplexMatrix::from_row_major(self.rows, self.cols, entries).expect("finite by construction")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianInt {
        &self.data[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.is_zero())
    }

    /// Largest absolute value of any real or imaginary part.
    pub fn max_abs_part(&self) -> BigInt {
        self.data
            .iter()
            .flat_map(|z| [z.re.abs(), z.im.abs()])
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "exact mul",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs.data[k * rhs.cols + j];
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        self.zip_with(rhs, "exact add", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        self.zip_with(rhs, "exact sub", |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &ExactMatrix,
        op: &'static str,
        f: impl Fn(&GaussianInt, &GaussianInt) -> GaussianInt,
    ) -> Result<ExactMatrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch {
                op,
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: &BigInt) -> ExactMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn conj(&self) -> ExactMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> ExactMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Result<ExactMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut result = Self::identity(self.rows);
        for _ in 0..k {
            result = result.mul(self)?;
        }
        Ok(result)
    }

    /// `S·conj(T)·conj(S)`, the linear matrix of `x ↦ C(T(Cx))` for the
    /// conjugation with symbol `S`.
    pub fn conj_similarity(&self, symbol: &ExactMatrix) -> Result<ExactMatrix> {
        symbol.mul(&self.conj())?.mul(&symbol.conj())
    }

    /// `Σ_k (−1)^k C(m,k) T*^(m−k) · X_(m−k)` where `X_j` is either `T^j`
    /// (plain) or `C T^j C` (with a symbol).
    fn alternating_sum(&self, symbol: Option<&ExactMatrix>, m: u32) -> Result<ExactMatrix> {
        let n = self.rows;
        let adj = self.adjoint();
        let mut acc = Self::zeros(n, n);
        let mut left = Self::identity(n);
        let mut right = Self::identity(n);
        for j in 0..=m {
            let inner = match symbol {
                Some(s) => right.conj_similarity(s)?,
                None => right.clone(),
            };
            let term = left.mul(&inner)?;
            let k = m - j;
            let mut coeff = binomial_big(m, k);
            if k % 2 == 1 {
                coeff = -coeff;
            }
            acc = acc.add(&term.scale(&coeff))?;
            left = left.mul(&adj)?;
            right = right.mul(self)?;
        }
        Ok(acc)
    }

    pub fn iso_defect(&self, m: u32) -> Result<ExactMatrix> {
        self.alternating_sum(None, m)
    }

    pub fn lambda(&self, symbol: &ExactMatrix, m: u32) -> Result<ExactMatrix> {
        self.alternating_sum(Some(symbol), m)
    }

    pub fn quasi_lambda(&self, symbol: &ExactMatrix, m: u32, n: u32) -> Result<ExactMatrix> {
        let p = self.pow(n)?;
        p.adjoint().mul(&self.lambda(symbol, m)?)?.mul(&p)
    }

    pub fn quasi_iso_defect(&self, m: u32, n: u32) -> Result<ExactMatrix> {
        let p = self.pow(n)?;
        p.adjoint().mul(&self.iso_defect(m)?)?.mul(&p)
    }
}

pub fn binomial_big(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix{:?} [", (self.rows, self.cols))?;
        for i in 0..self.rows {
            write!(f, "\n  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{}{:+}i ", z.re, z.im)?;
            }
        }
        write!(f, "\n]")
    }
}
