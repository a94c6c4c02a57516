//! Block decomposition along `closure(R(T^n)) ⊕ N(T*^n)`.
//!
//! In adapted orthonormal coordinates an n-quasi-(m,C)-isometry is block
//! upper triangular,
//!
//! ```text
//! T = [ T1  T2 ]
//!     [ 0   T3 ]
//! ```
//!
//! with `T1` an (m,C1)-isometry and `T3^n = 0`, provided `C = C1 ⊕ C2`
//! splits along the same decomposition. Conversely any such block matrix is
//! n-quasi-(m,C1⊕C2)-isometric.

use serde::{Deserialize, Serialize};

use crate::conjugation::{Conjugation, SplitConjugation};
use crate::defect::{lambda, quasi_lambda};
use crate::error::{Error, Result};
use crate::linalg::{
    column_space_basis_scaled, eigen_backward_error, eigenvalues, spectral_norm, ComplexMatrix,
    RangeBasis, TolerancePolicy, C64,
};
use crate::report::{Check, InstanceDigest, VerificationReport};

/// Relative bound on the lower-left block of `Q* T Q`.
pub const LOWER_LEFT_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub basis: RangeBasis,
    pub rank: usize,
    pub t1: ComplexMatrix,
    pub t2: ComplexMatrix,
    pub t3: ComplexMatrix,
    /// `|lower-left block of Q*TQ|_F`.
    pub residual_lower_left: f64,
}

impl Decomposition {
    pub fn dim(&self) -> usize {
        self.basis.range.rows()
    }

    /// `Q` with the range basis first.
    pub fn unitary(&self) -> ComplexMatrix {
        self.basis.unitary()
    }

    pub fn has_dense_range(&self) -> bool {
        self.rank == self.dim()
    }
}

/// Orthonormal bases of `R(T^n)` and `N(T*^n)`. Rank is judged against
/// `max(1, |T|₂)^n`, so a numerically vanishing `T^n` has rank 0.
pub fn power_range_basis(t: &ComplexMatrix, n: u32, tol: &TolerancePolicy) -> Result<RangeBasis> {
    let scale = spectral_norm(t).max(1.0).powi(n as i32);
    column_space_basis_scaled(&t.pow(n)?, scale, tol)
}

pub fn decompose(t: &ComplexMatrix, n: u32, tol: &TolerancePolicy) -> Result<Decomposition> {
    let d = t.require_square()?;
    if n == 0 {
        return Err(Error::InvalidArgument("quasi order n must be at least 1".into()));
    }
    let basis = power_range_basis(t, n, tol)?;
    let q = basis.unitary();
    let local = &(&q.adjoint() * t) * &q;
    let r = basis.rank;
    Ok(Decomposition {
        t1: local.block(0, 0, r, r),
        t2: local.block(0, r, r, d - r),
        t3: local.block(r, r, d - r, d - r),
        residual_lower_left: local.block(r, 0, d - r, r).frobenius_norm(),
        rank: r,
        basis,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<C64>,
    pub spectral_radius: f64,
}

pub fn spectrum_report(t: &ComplexMatrix) -> Result<SpectrumReport> {
    let eigenvalues = eigenvalues(t)?;
    let spectral_radius = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(SpectrumReport {
        eigenvalues,
        spectral_radius,
    })
}

/// Outcome of pairing `σ(T)` against `σ(T1) ∪ {0, ..., 0}`.
#[derive(Debug, Clone)]
pub struct SpectralMatch {
    pub pairs: Vec<(C64, C64)>,
    /// Largest `|λ − μ|` over the pairing.
    pub max_distance: f64,
    /// Largest backward error `σ_min(T − ζI)/(1 + |T|₂)` over both members of every pair.
    pub max_backward: f64,
    pub pass: bool,
}

/// Greedy minimal-distance pairing of `σ(T)` with `σ(T1) ∪ {0}^(d−r)`.
///
/// A pair is accepted when both members are eigenvalues of `T` to backward
/// accuracy `eig_match·(1 + |T|₂)` and lie within the perturbation radius
/// `(eig_match·(1 + |T|₂))^(1/d)` of each other. Computed eigenvalues of
/// Jordan clusters scatter on that radius, so a raw forward distance would
/// reject exact spectra with non-trivial Jordan structure.
pub fn match_spectra(t: &ComplexMatrix, t1: &ComplexMatrix, tol: &TolerancePolicy) -> Result<SpectralMatch> {
    let d = t.require_square()?;
    let r = t1.require_square()?;
    let full = eigenvalues(t)?;
    let mut reference = eigenvalues(t1)?;
    reference.extend(std::iter::repeat_n(C64::new(0.0, 0.0), d.saturating_sub(r)));
    if full.len() != reference.len() {
        return Err(Error::DimensionMismatch {
            op: "match_spectra",
            left: (full.len(), 1),
            right: (reference.len(), 1),
        });
    }

    let mut left: Vec<Option<C64>> = full.into_iter().map(Some).collect();
    let mut right: Vec<Option<C64>> = reference.into_iter().map(Some).collect();
    let mut pairs = Vec::with_capacity(d);
    for _ in 0..d {
        let mut best: Option<(usize, usize, f64)> = None;
        for (i, a) in left.iter().enumerate() {
            let Some(a) = a else { continue };
            for (j, b) in right.iter().enumerate() {
                let Some(b) = b else { continue };
                let dist = (a - b).norm();
                if best.is_none_or(|(_, _, bd)| dist < bd) {
                    best = Some((i, j, dist));
                }
            }
        }
        let (i, j, _) = best.expect("equal-length multisets");
        pairs.push((left[i].take().unwrap(), right[j].take().unwrap()));
    }

    let norm = spectral_norm(t);
    let budget = tol.eig_match * (1.0 + norm);
    let radius = budget.powf(1.0 / d.max(1) as f64);
    let mut max_distance: f64 = 0.0;
    let mut max_backward: f64 = 0.0;
    let mut pass = true;
    for &(a, b) in &pairs {
        let dist = (a - b).norm();
        let backward = eigen_backward_error(t, a).max(eigen_backward_error(t, b));
        max_distance = max_distance.max(dist);
        max_backward = max_backward.max(backward / (1.0 + norm));
        let ok = dist <= budget || (backward <= budget && dist <= radius);
        pass &= ok;
    }
    Ok(SpectralMatch {
        pairs,
        max_distance,
        max_backward,
        pass,
    })
}

fn nilpotency_scale(t: &ComplexMatrix, n: u32) -> f64 {
    spectral_norm(t).max(1.0).powi(n as i32) * t.rows().max(1) as f64
}

/// Forward direction: an n-quasi-(m,C)-isometry has an (m,C1)-isometric
/// `T1`, a nilpotent `T3` of order at most `n`, and `σ(T) = σ(T1) ∪ {0}`.
///
/// Errors with `HypothesisFailed` when `T` is not n-quasi-(m,C)-isometric and
/// with `NotReducing` when `C` does not split along `R(T^n)`.
pub fn verify_structure_forward(
    t: &ComplexMatrix,
    c: &Conjugation,
    m: u32,
    n: u32,
    tol: &TolerancePolicy,
) -> Result<VerificationReport> {
    let q = quasi_lambda(t, c, m, n)?;
    if !q.is_zero(tol) {
        return Err(Error::HypothesisFailed(format!(
            "T is not {n}-quasi-({m},C)-isometric (relative residual {:e})",
            q.residual()
        )));
    }
    let dec = decompose(t, n, tol)?;
    let split: SplitConjugation = c.split_adapted(&dec.basis)?;

    let mut report = VerificationReport::new("th21", InstanceDigest::of(&[t])).with_variant("forward");
    report.expect_class(m, n);
    report.hypothesis(Check::new("quasi defect vanishes", q.residual(), tol.rel_zero));
    report.hypothesis(Check::new("C splits along R(T^n)", split.residual, crate::conjugation::SPLIT_TOL));
    report.hypothesis(Check::new(
        "T maps R(T^n) into itself",
        dec.residual_lower_left / t.frobenius_norm().max(1.0),
        LOWER_LEFT_TOL,
    ));

    if dec.rank > 0 {
        let l1 = lambda(&dec.t1, &split.on_subspace, m)?;
        report.conclude(Check::new("T1 is (m,C1)-isometric", l1.residual(), tol.rel_zero));
    } else {
        report.note("R(T^n) = {0}; T1 is empty");
    }
    if dec.rank < dec.dim() {
        let t3n = dec.t3.pow(n)?;
        let scale = nilpotency_scale(t, n);
        report.conclude(Check::new("T3^n = 0", t3n.frobenius_norm() / scale, tol.rel_zero));
    } else {
        report.note("R(T^n) is dense; sigma(T) = sigma(T1)");
    }
    let spectra = match_spectra(t, &dec.t1, tol)?;
    let mut eig = Check::new("sigma(T) = sigma(T1) u {0}", spectra.max_backward, tol.eig_match);
    eig.pass = spectra.pass;
    report.conclude(eig);
    report.note(format!("max eigenvalue pairing distance {:e}", spectra.max_distance));
    Ok(report.finish())
}

#[derive(Debug, Clone)]
pub struct Assembled {
    pub t: ComplexMatrix,
    pub conjugation: Conjugation,
}

/// Builds `[[T1, T2], [0, T3]]` on `C1 ⊕ C2` after checking that `T1` is
/// (m,C1)-isometric and `T3^n = 0`.
#[allow(clippy::too_many_arguments)]
pub fn assemble(
    t1: &ComplexMatrix,
    t2: &ComplexMatrix,
    t3: &ComplexMatrix,
    c1: &Conjugation,
    c2: &Conjugation,
    m: u32,
    n: u32,
    tol: &TolerancePolicy,
) -> Result<Assembled> {
    let r = t1.require_square()?;
    let s = t3.require_square()?;
    if t2.shape() != (r, s) || c1.dim() != r || c2.dim() != s {
        return Err(Error::DimensionMismatch {
            op: "assemble",
            left: (r, s),
            right: t2.shape(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("quasi order n must be at least 1".into()));
    }
    if r > 0 {
        let l1 = lambda(t1, c1, m)?;
        if !l1.is_zero(tol) {
            return Err(Error::HypothesisFailed(format!(
                "T1 is not ({m},C1)-isometric (relative residual {:e})",
                l1.residual()
            )));
        }
    }
    if s > 0 {
        let t3n = t3.pow(n)?;
        let scale = nilpotency_scale(t3, n);
        if !tol.is_zero_norm(t3n.frobenius_norm(), scale) {
            return Err(Error::HypothesisFailed(format!(
                "T3 is not nilpotent of order at most {n}"
            )));
        }
    }
    let t = ComplexMatrix::from_blocks(t1, t2, &ComplexMatrix::zeros(s, r), t3)?;
    Ok(Assembled {
        t,
        conjugation: c1.direct_sum(c2),
    })
}

/// Backward direction: the assembled block matrix is n-quasi-(m, C1⊕C2)-isometric.
#[allow(clippy::too_many_arguments)]
pub fn verify_structure_backward(
    t1: &ComplexMatrix,
    t2: &ComplexMatrix,
    t3: &ComplexMatrix,
    c1: &Conjugation,
    c2: &Conjugation,
    m: u32,
    n: u32,
    tol: &TolerancePolicy,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("th21", InstanceDigest::of(&[t1, t3])).with_variant("backward");
    report.expect_class(m, n);
    if t1.rows() > 0 {
        let l1 = lambda(t1, c1, m)?;
        report.hypothesis(Check::new("T1 is (m,C1)-isometric", l1.residual(), tol.rel_zero));
    }
    if t3.rows() > 0 {
        let t3n = t3.pow(n)?;
        report.hypothesis(Check::new(
            "T3^n = 0",
            t3n.frobenius_norm() / nilpotency_scale(t3, n),
            tol.rel_zero,
        ));
    }
    if !report.hypotheses_hold() {
        return Ok(report.finish());
    }
    let assembled = assemble(t1, t2, t3, c1, c2, m, n, tol)?;
    let q = quasi_lambda(&assembled.t, &assembled.conjugation, m, n)?;
    report.conclude(Check::new("quasi defect of assembled T vanishes", q.residual(), tol.rel_zero));
    Ok(report.finish())
}

/// Dense-range shortcut: when `R(T^n)` is the whole space the quasi verdict
/// at `(m, n)` equals the plain verdict at `m`.
pub fn dense_range_consistent(
    t: &ComplexMatrix,
    c: &Conjugation,
    m: u32,
    n: u32,
    tol: &TolerancePolicy,
) -> Result<Option<bool>> {
    let dec = decompose(t, n, tol)?;
    if !dec.has_dense_range() {
        return Ok(None);
    }
    let quasi = quasi_lambda(t, c, m, n)?.is_zero(tol);
    let plain = lambda(t, c, m)?.is_zero(tol);
    Ok(Some(quasi == plain))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn decompose_projection() {
        let t = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let d = decompose(&t, 1, &tol()).unwrap();
        assert_eq!(d.rank, 1);
        assert!((d.t1.get(0, 0).norm() - 1.0).abs() < 1e-14);
        assert!(d.t2.get(0, 0).norm() < 1e-14);
        assert!(d.t3.get(0, 0).norm() < 1e-14);
    }

    #[test]
    fn decompose_shift() {
        // R(T) = span e1, N(T*) = span e2
        let d = decompose(&ComplexMatrix::unit(2, 0, 1), 1, &tol()).unwrap();
        assert_eq!(d.rank, 1);
        assert!(d.t1.get(0, 0).norm() < 1e-14);
        assert!((d.t2.get(0, 0).norm() - 1.0).abs() < 1e-14);
        assert!(d.t3.get(0, 0).norm() < 1e-14);
        assert!(d.residual_lower_left < 1e-14);
    }

    #[test]
    fn decompose_invertible_has_dense_range() {
        let t = &ComplexMatrix::identity(3) + &ComplexMatrix::unit(3, 0, 2);
        let d = decompose(&t, 1, &tol()).unwrap();
        assert_eq!(d.rank, 3);
        assert!(d.has_dense_range());
        assert_eq!(d.t3.rows(), 0);
        // T1 is unitarily similar to T
        let q = d.unitary();
        let back = &(&q * &d.t1) * &q.adjoint();
        assert!((&back - &t).frobenius_norm() < 1e-13);
    }

    #[test]
    fn spectrum_of_example() {
        let t = ComplexMatrix::from_real_rows(&[&[-1.0, -1.0], &[3.0, 2.0]]);
        let s = spectrum_report(&t).unwrap();
        assert!((s.spectral_radius - 1.0).abs() < 1e-12);
        assert_eq!(s.eigenvalues.len(), 2);
        assert!(spectrum_report(&ComplexMatrix::unit(3, 1, 2)).unwrap().spectral_radius < 1e-12);
        assert!((spectrum_report(&ComplexMatrix::flip(3)).unwrap().spectral_radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn assemble_small_example() {
        let one = ComplexMatrix::identity(1);
        let zero = ComplexMatrix::zeros(1, 1);
        let e = Conjugation::entrywise(1);
        let a = assemble(&one, &one, &zero, &e, &e, 1, 1, &tol()).unwrap();
        assert_eq!(a.t, ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]));
        let q = quasi_lambda(&a.t, &a.conjugation, 1, 1).unwrap();
        assert!(q.matrix.frobenius_norm() < 1e-15);
    }

    #[test]
    fn assemble_unipotent_with_nilpotent_tail() {
        let t1 = &ComplexMatrix::identity(3) + &ComplexMatrix::unit(3, 0, 2);
        let t2 = ComplexMatrix::from_real_rows(&[&[0.3, -1.2], &[0.7, 0.1], &[-0.4, 2.0]]);
        let t3 = ComplexMatrix::unit(2, 0, 1);
        let a = assemble(&t1, &t2, &t3, &Conjugation::flip(3), &Conjugation::entrywise(2), 2, 2, &tol()).unwrap();
        assert!(quasi_lambda(&a.t, &a.conjugation, 2, 2).unwrap().is_zero(&tol()));
        // the 2-quasi order is needed: T3 has order 2
        assert!(!quasi_lambda(&a.t, &a.conjugation, 2, 1).unwrap().is_zero(&tol()));
    }

    #[test]
    fn assemble_rejects_failed_hypotheses() {
        let t1 = &ComplexMatrix::identity(3) + &ComplexMatrix::unit(3, 0, 2);
        let t2 = ComplexMatrix::zeros(3, 2);
        let t3 = ComplexMatrix::unit(2, 0, 1);
        let flip = Conjugation::flip(3);
        let e2 = Conjugation::entrywise(2);
        assert!(matches!(
            assemble(&t1, &t2, &t3, &flip, &e2, 1, 2, &tol()),
            Err(Error::HypothesisFailed(_))
        ));
        assert!(matches!(
            assemble(&t1, &t2, &t3, &flip, &e2, 2, 1, &tol()),
            Err(Error::HypothesisFailed(_))
        ));
    }

    #[test]
    fn assemble_with_empty_complement() {
        let t1 = &ComplexMatrix::identity(3) + &ComplexMatrix::unit(3, 0, 2);
        let a = assemble(
            &t1,
            &ComplexMatrix::zeros(3, 0),
            &ComplexMatrix::zeros(0, 0),
            &Conjugation::flip(3),
            &Conjugation::entrywise(0),
            2,
            1,
            &tol(),
        )
        .unwrap();
        assert_eq!(a.t, t1);
    }

    #[test]
    fn forward_on_dense_range() {
        let t = &ComplexMatrix::identity(3) + &ComplexMatrix::unit(3, 0, 2);
        let r = verify_structure_forward(&t, &Conjugation::flip(3), 2, 1, &tol()).unwrap();
        assert_eq!(r.outcome, crate::report::Outcome::Pass, "{r:?}");
    }

    #[test]
    fn forward_on_nilpotent() {
        let t = &ComplexMatrix::unit(3, 0, 1) + &ComplexMatrix::unit(3, 1, 2);
        let r = verify_structure_forward(&t, &Conjugation::entrywise(3), 1, 3, &tol()).unwrap();
        assert_eq!(r.outcome, crate::report::Outcome::Pass, "{r:?}");
    }

    #[test]
    fn forward_on_assembled_block() {
        let t1 = &ComplexMatrix::identity(3) + &ComplexMatrix::unit(3, 0, 2);
        let t2 = ComplexMatrix::from_real_rows(&[&[0.3, -1.2], &[0.7, 0.1], &[-0.4, 2.0]]);
        let t3 = ComplexMatrix::unit(2, 0, 1);
        let a = assemble(&t1, &t2, &t3, &Conjugation::flip(3), &Conjugation::entrywise(2), 2, 2, &tol()).unwrap();
        let r = verify_structure_forward(&a.t, &a.conjugation, 2, 2, &tol()).unwrap();
        assert_eq!(r.outcome, crate::report::Outcome::Pass, "{r:?}");
    }

    #[test]
    fn forward_reports_failed_hypotheses() {
        let t = ComplexMatrix::from_real_rows(&[&[-1.0, -1.0], &[3.0, 2.0]]);
        assert!(matches!(
            verify_structure_forward(&t, &Conjugation::flip(2), 1, 1, &tol()),
            Err(Error::HypothesisFailed(_))
        ));
        // T is 1-quasi-(1,C) for the Hadamard symbol, which does not split along span e1
        let t = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let h = 0.5f64.sqrt();
        let c = Conjugation::new(ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]])).unwrap();
        assert!(quasi_lambda(&t, &c, 1, 1).unwrap().is_zero(&tol()));
        assert!(matches!(
            verify_structure_forward(&t, &c, 1, 1, &tol()),
            Err(Error::NotReducing { .. })
        ));
    }
}
