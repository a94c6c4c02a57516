//! Antilinear conjugations on `C^n`.
//!
//! Every conjugation has the form `x ↦ S·conj(x)` with `S` symmetric and
//! unitary; we store only the symbol `S`. Antilinear compositions reduce to
//! linear ones: `C T C` is the matrix `S·conj(T)·conj(S)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{column_space_basis, ComplexMatrix, ExactMatrix, RangeBasis, TolerancePolicy, C64};

/// Per-dimension tolerance on `|S conj(S) − I|_F` and `|S* S − I|_F`.
pub const SYMBOL_TOL: f64 = 1e-12;
/// Relative off-diagonal residual below which a conjugation splits along a subspace.
pub const SPLIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConjugationKind {
    Entrywise,
    Flip,
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Conjugation {
    symbol: ComplexMatrix,
    kind: ConjugationKind,
}

/// Restrictions of a conjugation to `M` and `M⊥`, in the coordinates of the
/// orthonormal bases that defined the split.
#[derive(Debug, Clone)]
pub struct SplitConjugation {
    pub on_subspace: Conjugation,
    pub on_complement: Conjugation,
    pub residual: f64,
}

fn involution_residual(s: &ComplexMatrix) -> f64 {
    (&(s * &s.conj()) - &ComplexMatrix::identity(s.rows())).frobenius_norm()
}

fn unitarity_residual(s: &ComplexMatrix) -> f64 {
    (&(&s.adjoint() * s) - &ComplexMatrix::identity(s.rows())).frobenius_norm()
}

impl Conjugation {
    /// Validates `S` as the symbol of a conjugation.
    pub fn new(symbol: ComplexMatrix) -> Result<Self> {
        Self::with_kind(symbol, ConjugationKind::Custom)
    }

    fn with_kind(symbol: ComplexMatrix, kind: ConjugationKind) -> Result<Self> {
        let n = symbol.require_square()?;
        let bound = SYMBOL_TOL * n.max(1) as f64;
        let inv = involution_residual(&symbol);
        if inv > bound {
            return Err(Error::NotInvolutive { residual: inv });
        }
        let uni = unitarity_residual(&symbol);
        if uni > bound {
            return Err(Error::NotUnitary { residual: uni });
        }
        Ok(Self { symbol, kind })
    }

    /// Entrywise complex conjugation (`S = I`).
    pub fn entrywise(n: usize) -> Self {
        Self {
            symbol: ComplexMatrix::identity(n),
            kind: ConjugationKind::Entrywise,
        }
    }

    /// `(x_1, ..., x_n) ↦ (conj x_n, ..., conj x_1)`.
    pub fn flip(n: usize) -> Self {
        Self {
            symbol: ComplexMatrix::flip(n),
            kind: ConjugationKind::Flip,
        }
    }

    pub fn symbol(&self) -> &ComplexMatrix {
        &self.symbol
    }

    pub fn kind(&self) -> ConjugationKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.symbol.rows()
    }

    pub fn exact_symbol(&self) -> Option<ExactMatrix> {
        ExactMatrix::from_complex(&self.symbol)
    }

    fn check_dim(&self, op: &'static str, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(Error::DimensionMismatch {
                op,
                left: (self.dim(), self.dim()),
                right: (n, n),
            });
        }
        Ok(())
    }

    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        self.check_dim("conjugation apply", x.len())?;
        let conj: Vec<C64> = x.iter().map(|z| z.conj()).collect();
        self.symbol.apply(&conj)
    }

    /// The linear matrix of `x ↦ C(T(Cx))`.
    pub fn conj_similarity(&self, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        t.require_square()?;
        self.check_dim("conj_similarity", t.rows())?;
        Ok(&(&self.symbol * &t.conj()) * &self.symbol.conj())
    }

    pub fn direct_sum(&self, other: &Conjugation) -> Conjugation {
        let kind = if self.kind == ConjugationKind::Entrywise && other.kind == ConjugationKind::Entrywise {
            ConjugationKind::Entrywise
        } else {
            ConjugationKind::Custom
        };
        Conjugation {
            symbol: self.symbol.direct_sum(&other.symbol),
            kind,
        }
    }

    pub fn tensor(&self, other: &Conjugation) -> Conjugation {
        let kind = match (self.kind, other.kind) {
            (ConjugationKind::Entrywise, ConjugationKind::Entrywise) => ConjugationKind::Entrywise,
            (ConjugationKind::Flip, ConjugationKind::Flip) => ConjugationKind::Flip,
            _ => ConjugationKind::Custom,
        };
        Conjugation {
            symbol: self.symbol.kron(&other.symbol),
            kind,
        }
    }

    /// `U C U*` for a unitary `U`; its symbol is `U S Uᵀ`.
    pub fn rotated(&self, u: &ComplexMatrix) -> Result<Conjugation> {
        self.check_dim("rotated", u.rows())?;
        let symbol = &(u * &self.symbol) * &u.transpose();
        Self::new(symbol)
    }

    /// Symbol of this conjugation in the coordinates `x = U y`: `U* S conj(U)`.
    pub fn in_basis(&self, u: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim("in_basis", u.rows())?;
        Ok(&(&u.adjoint() * &self.symbol) * &u.conj())
    }

    /// Splits along the span of the orthonormal columns of `basis`.
    pub fn split_along(&self, basis: &ComplexMatrix, tol: &TolerancePolicy) -> Result<SplitConjugation> {
        self.check_dim("split_along", basis.rows())?;
        let gram = &basis.adjoint() * basis;
        let ortho = (&gram - &ComplexMatrix::identity(basis.cols())).frobenius_norm();
        if ortho > 1e-10 * basis.cols().max(1) as f64 {
            return Err(Error::InvalidArgument(format!(
                "split basis is not orthonormal (residual {ortho:e})"
            )));
        }
        let completed = column_space_basis(basis, tol)?;
        let adapted = RangeBasis {
            range: basis.clone(),
            complement: completed.complement,
            rank: basis.cols(),
            singular_values: completed.singular_values,
        };
        self.split_adapted(&adapted)
    }

    /// Splits along `basis.range`, using `basis.complement` for `M⊥`.
    pub fn split_adapted(&self, basis: &RangeBasis) -> Result<SplitConjugation> {
        let u = basis.unitary();
        let local = self.in_basis(&u)?;
        let r = basis.rank;
        let n = self.dim();
        let off = local.block(0, r, r, n - r);
        let residual = off.frobenius_norm();
        if residual > SPLIT_TOL {
            return Err(Error::NotReducing { residual });
        }
        let on_subspace = Self::new(local.block(0, 0, r, r))?;
        let on_complement = Self::new(local.block(r, r, n - r, n - r))?;
        Ok(SplitConjugation {
            on_subspace,
            on_complement,
            residual,
        })
    }
}
