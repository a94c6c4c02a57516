//! Defect operators and class membership.
//!
//! All defects use the `(−1)^k` sign convention
//!
//! ```text
//! Σ_{0≤k≤m} (−1)^k C(m,k) T*^(m−k) X_(m−k)
//! ```
//!
//! with `X_j = T^j` for plain m-isometries and `X_j = C T^j C` for the
//! conjugation variants. Quasi variants compress by `T*^n (·) T^n`. A defect
//! is "zero" when `|D|_F ≤ rel_zero · scale`, where
//! `scale = max(1, |T|₂)^(2m+2n) · dim`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conjugation::Conjugation;
use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, spectral_radius, ComplexMatrix, TolerancePolicy};

/// Largest order accepted by [`classify`].
pub const MAX_GRID_ORDER: u32 = 12;

#[derive(Debug, Clone)]
pub struct DefectOperator {
    pub matrix: ComplexMatrix,
    pub scale: f64,
    pub m: u32,
    pub n: u32,
    pub with_conjugation: bool,
}

impl DefectOperator {
    /// `|D|_F / scale`.
    pub fn residual(&self) -> f64 {
        self.matrix.frobenius_norm() / self.scale
    }

    pub fn is_zero(&self, tol: &TolerancePolicy) -> bool {
        tol.is_zero_norm(self.matrix.frobenius_norm(), self.scale)
    }
}

/// Zero-test scale for a defect of order `(m, n)` of `t`.
pub fn defect_scale(t: &ComplexMatrix, m: u32, n: u32) -> f64 {
    defect_scale_from_norm(spectral_norm(t), t.rows(), m, n)
}

pub(crate) fn defect_scale_from_norm(norm: f64, dim: usize, m: u32, n: u32) -> f64 {
    norm.max(1.0).powi((2 * m + 2 * n) as i32) * dim.max(1) as f64
}

pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

fn check_order(m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("order m must be at least 1".into()));
    }
    Ok(())
}

fn check_quasi(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("quasi order n must be at least 1".into()));
    }
    Ok(())
}

fn check_conj(t: &ComplexMatrix, c: &Conjugation) -> Result<()> {
    if c.dim() != t.rows() {
        return Err(Error::DimensionMismatch {
            op: "defect",
            left: t.shape(),
            right: (c.dim(), c.dim()),
        });
    }
    Ok(())
}

/// `[T*^j X_j]` for `j = 0..=m`.
fn moment_terms(t: &ComplexMatrix, c: Option<&Conjugation>, m: u32) -> Result<Vec<ComplexMatrix>> {
    let d = t.require_square()?;
    if let Some(c) = c {
        check_conj(t, c)?;
    }
    let adj = t.adjoint();
    let mut left = ComplexMatrix::identity(d);
    let mut right = ComplexMatrix::identity(d);
    let mut terms = Vec::with_capacity(m as usize + 1);
    for _ in 0..=m {
        let inner = match c {
            Some(c) => c.conj_similarity(&right)?,
            None => right.clone(),
        };
        terms.push(&left * &inner);
        left = &left * &adj;
        right = &right * t;
    }
    Ok(terms)
}

fn alternating_sum(terms: &[ComplexMatrix], m: u32) -> ComplexMatrix {
    let d = terms[0].rows();
    let mut acc = ComplexMatrix::zeros(d, d);
    for k in 0..=m {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = &terms[(m - k) as usize];
        acc = &acc + &term.scale_real(sign * binomial(m, k));
    }
    acc
}

fn compress(t: &ComplexMatrix, inner: &ComplexMatrix, n: u32) -> Result<ComplexMatrix> {
    let p = t.pow(n)?;
    Ok(&(&p.adjoint() * inner) * &p)
}

/// `Λ_0(T), ..., Λ_m(T)` (plain variant when `c` is `None`), with `Λ_0 = I`.
pub fn lambda_family(t: &ComplexMatrix, c: Option<&Conjugation>, m: u32) -> Result<Vec<ComplexMatrix>> {
    let terms = moment_terms(t, c, m)?;
    Ok((0..=m).map(|k| alternating_sum(&terms, k)).collect())
}

/// Plain or conjugation defect of order `(m, n)`; `n = 0` means no compression.
pub fn defect(t: &ComplexMatrix, c: Option<&Conjugation>, m: u32, n: u32) -> Result<DefectOperator> {
    check_order(m)?;
    let terms = moment_terms(t, c, m)?;
    let mut matrix = alternating_sum(&terms, m);
    if n > 0 {
        matrix = compress(t, &matrix, n)?;
    }
    Ok(DefectOperator {
        matrix,
        scale: defect_scale(t, m, n),
        m,
        n,
        with_conjugation: c.is_some(),
    })
}

/// `Σ (−1)^k C(m,k) T*^(m−k) T^(m−k)`; zero iff `T` is an m-isometry.
pub fn iso_defect(t: &ComplexMatrix, m: u32) -> Result<DefectOperator> {
    defect(t, None, m, 0)
}

/// `T*^n · iso_defect(T, m) · T^n`.
pub fn quasi_iso_defect(t: &ComplexMatrix, m: u32, n: u32) -> Result<DefectOperator> {
    check_quasi(n)?;
    defect(t, None, m, n)
}

/// `Λ_m(T) = Σ (−1)^k C(m,k) T*^(m−k) · C T^(m−k) C`.
pub fn lambda(t: &ComplexMatrix, c: &Conjugation, m: u32) -> Result<DefectOperator> {
    defect(t, Some(c), m, 0)
}

/// `T*^n Λ_m(T) T^n`.
pub fn quasi_lambda(t: &ComplexMatrix, c: &Conjugation, m: u32, n: u32) -> Result<DefectOperator> {
    check_quasi(n)?;
    defect(t, Some(c), m, n)
}

/// `Λ_m` via `Λ_(k+1) = T* Λ_k (CTC) − Λ_k` starting from `Λ_0 = I`.
pub fn lambda_by_recurrence(t: &ComplexMatrix, c: &Conjugation, m: u32) -> Result<DefectOperator> {
    check_order(m)?;
    let d = t.require_square()?;
    check_conj(t, c)?;
    let ctc = c.conj_similarity(t)?;
    let adj = t.adjoint();
    let mut current = ComplexMatrix::identity(d);
    for _ in 0..m {
        current = &(&(&adj * &current) * &ctc) - &current;
    }
    Ok(DefectOperator {
        matrix: current,
        scale: defect_scale(t, m, 0),
        m,
        n: 0,
        with_conjugation: true,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridCell {
    pub m: u32,
    pub n: u32,
    pub residual: f64,
    pub verdict: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub dim: usize,
    pub m_max: u32,
    pub n_max: u32,
    pub with_conjugation: bool,
    /// Row-major over `m = 1..=m_max`, then `n = 0..=n_max`.
    pub grid: Vec<GridCell>,
    pub minimal_pairs: Vec<(u32, u32)>,
    /// Whether `T` commutes with `CTC` (or with itself for plain classes).
    pub commutes_with_ctc: bool,
    /// Observed: verdict at `(m, n)` implies verdict at `(m+1, n)` everywhere on the grid.
    pub monotone_in_m: bool,
    /// Observed: verdict at `(m, n)` implies verdict at `(m, n+1)` everywhere on the grid.
    pub monotone_in_n: bool,
}

impl ClassificationReport {
    pub fn cell(&self, m: u32, n: u32) -> Option<&GridCell> {
        if m == 0 || m > self.m_max || n > self.n_max {
            return None;
        }
        let width = (self.n_max + 1) as usize;
        self.grid.get((m - 1) as usize * width + n as usize)
    }

    pub fn verdict(&self, m: u32, n: u32) -> bool {
        self.cell(m, n).is_some_and(|c| c.verdict)
    }
}

pub fn classify(
    t: &ComplexMatrix,
    c: Option<&Conjugation>,
    m_max: u32,
    n_max: u32,
    tol: &TolerancePolicy,
) -> Result<ClassificationReport> {
    if m_max == 0 || m_max > MAX_GRID_ORDER || n_max > MAX_GRID_ORDER {
        return Err(Error::InvalidArgument(format!(
            "grid bounds must satisfy 1 <= m_max <= {MAX_GRID_ORDER} and n_max <= {MAX_GRID_ORDER}"
        )));
    }
    let dim = t.require_square()?;
    let family = lambda_family(t, c, m_max)?;
    let norm = spectral_norm(t);
    let powers: Vec<ComplexMatrix> = (0..=n_max).map(|n| t.pow(n)).collect::<Result<_>>()?;

    let grid: Vec<GridCell> = (1..=m_max)
        .into_par_iter()
        .flat_map_iter(|m| {
            let lam = &family[m as usize];
            let powers = &powers;
            (0..=n_max).map(move |n| {
                let p = &powers[n as usize];
                let matrix = &(&p.adjoint() * lam) * p;
                let scale = defect_scale_from_norm(norm, dim, m, n);
                let residual = matrix.frobenius_norm() / scale;
                GridCell {
                    m,
                    n,
                    residual,
                    verdict: tol.is_zero_norm(matrix.frobenius_norm(), scale),
                }
            })
        })
        .collect();

    let width = (n_max + 1) as usize;
    let at = |m: u32, n: u32| grid[(m - 1) as usize * width + n as usize].verdict;

    let mut minimal_pairs = Vec::new();
    for m in 1..=m_max {
        for n in 0..=n_max {
            if !at(m, n) {
                continue;
            }
            let dominated = (1..=m).any(|mm| (0..=n).any(|nn| (mm, nn) != (m, n) && at(mm, nn)));
            if !dominated {
                minimal_pairs.push((m, n));
            }
        }
    }

    let monotone_in_m = (1..m_max).all(|m| (0..=n_max).all(|n| !at(m, n) || at(m + 1, n)));
    let monotone_in_n = (1..=m_max).all(|m| (0..n_max).all(|n| !at(m, n) || at(m, n + 1)));

    let ctc = match c {
        Some(c) => c.conj_similarity(t)?,
        None => t.clone(),
    };
    let comm = t.commutator(&ctc).frobenius_norm();
    let commutes_with_ctc = comm <= tol.rel_zero * (t.frobenius_norm() * ctc.frobenius_norm()).max(1.0);

    Ok(ClassificationReport {
        dim,
        m_max,
        n_max,
        with_conjugation: c.is_some(),
        grid,
        minimal_pairs,
        commutes_with_ctc,
        monotone_in_m,
        monotone_in_n,
    })
}

/// Horizon proxy for power boundedness: `max_{1≤k≤K} |T^k|₂ ≤ B` and `r(T) ≤ 1 + eig_match`.
pub fn is_power_bounded(t: &ComplexMatrix, horizon: u32, bound: f64, tol: &TolerancePolicy) -> Result<bool> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    t.require_square()?;
    let mut p = t.clone();
    for k in 1..=horizon {
        if spectral_norm(&p) > bound {
            return Ok(false);
        }
        if k < horizon {
            p = &p * t;
        }
    }
    Ok(spectral_radius(t)? <= 1.0 + tol.eig_match)
}

/// Default horizon and bound for [`is_power_bounded`].
pub const POWER_BOUND_HORIZON: u32 = 64;
pub const POWER_BOUND: f64 = 10.0;

/// `r(A) = |A|₂` up to `eig_match·(1 + |A|₂)`.
pub fn is_normaloid(a: &ComplexMatrix, tol: &TolerancePolicy) -> Result<bool> {
    a.require_square()?;
    let norm = spectral_norm(a);
    let radius = spectral_radius(a)?;
    Ok((radius - norm).abs() <= tol.eig_match * (1.0 + norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    fn example() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[-1.0, -1.0], &[3.0, 2.0]])
    }

    fn unipotent13() -> ComplexMatrix {
        &ComplexMatrix::identity(3) + &ComplexMatrix::unit(3, 0, 2)
    }

    fn assert_close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) {
        let r = (a - b).frobenius_norm();
        assert!(r <= tol, "residual {r:e}\n{a:?}\n{b:?}");
    }

    #[test]
    fn unitary_is_isometry_of_every_order() {
        let s = 0.6;
        let u = ComplexMatrix::from_complex_rows(&[
            &[C64::new(0.8, 0.0), C64::new(0.0, s)],
            &[C64::new(0.0, s), C64::new(0.8, 0.0)],
        ]);
        let tol = TolerancePolicy::default();
        for m in 1..=4 {
            assert!(iso_defect(&u, m).unwrap().is_zero(&tol));
        }
    }

    #[test]
    fn unipotent_second_difference() {
        // A_j = T*^j T^j = I + jα(E12+E21) + j²α²E22
        let alpha = 0.7;
        let t = &ComplexMatrix::identity(2) + &ComplexMatrix::unit(2, 0, 1).scale_real(alpha);
        let d2 = iso_defect(&t, 2).unwrap();
        let expect = ComplexMatrix::unit(2, 1, 1).scale_real(2.0 * alpha * alpha);
        assert_close(&d2.matrix, &expect, 1e-14);
        assert!(iso_defect(&t, 3).unwrap().matrix.frobenius_norm() < 1e-14);
    }

    #[test]
    fn quasi_defect_examples() {
        let tol = TolerancePolicy::default();
        let shift = ComplexMatrix::unit(2, 0, 1);
        // T*(T*T − I)T = −E22 for T = E12; T² = 0 kills the 2-quasi defect
        let d = quasi_iso_defect(&shift, 1, 1).unwrap();
        assert_close(&d.matrix, &ComplexMatrix::unit(2, 1, 1).scale_real(-1.0), 1e-15);
        assert!(!iso_defect(&shift, 1).unwrap().is_zero(&tol));
        for m in 1..=3 {
            assert!(quasi_iso_defect(&shift, m, 2).unwrap().is_zero(&tol));
        }
        let u = ComplexMatrix::flip(2);
        assert!(quasi_iso_defect(&u, 2, 3).unwrap().is_zero(&tol));
        assert!(quasi_iso_defect(&u, 2, 0).is_err());
    }

    #[test]
    fn lambda_examples() {
        let tol = TolerancePolicy::default();
        let any = Conjugation::flip(2);
        assert!(lambda(&ComplexMatrix::identity(2), &any, 1).unwrap().is_zero(&tol));

        let t = unipotent13();
        let flip = Conjugation::flip(3);
        let l1 = lambda(&t, &flip, 1).unwrap();
        assert_close(&l1.matrix, &ComplexMatrix::unit(3, 2, 0).scale_real(2.0), 1e-15);
        assert!(lambda(&t, &flip, 2).unwrap().matrix.frobenius_norm() == 0.0);

        let ent = Conjugation::entrywise(3);
        let l2 = lambda(&t, &ent, 2).unwrap();
        assert_close(&l2.matrix, &ComplexMatrix::unit(3, 2, 2).scale_real(2.0), 1e-15);
        assert!(lambda(&t, &ent, 3).unwrap().matrix.frobenius_norm() == 0.0);

        assert!(lambda(&t, &Conjugation::flip(2), 1).is_err());
    }

    #[test]
    fn quasi_lambda_examples() {
        let tol = TolerancePolicy::default();
        let flip = Conjugation::flip(2);
        let t = example();
        let t3 = t.pow(3).unwrap();
        assert!(quasi_lambda(&t3, &flip, 1, 1).unwrap().matrix.frobenius_norm() == 0.0);
        let q = quasi_lambda(&t, &flip, 1, 1).unwrap();
        let expect = ComplexMatrix::from_real_rows(&[&[-30.0, -18.0], &[-16.0, -10.0]]);
        assert_close(&q.matrix, &expect, 1e-12);
        let nil = ComplexMatrix::unit(3, 0, 1);
        assert!(quasi_lambda(&nil, &Conjugation::flip(3), 4, 2).unwrap().is_zero(&tol));
    }

    #[test]
    fn recurrence_matches_direct_sum() {
        let t = example();
        let c = Conjugation::flip(2);
        let direct = lambda(&t, &c, 1).unwrap();
        let rec = lambda_by_recurrence(&t, &c, 1).unwrap();
        assert_close(&direct.matrix, &rec.matrix, 1e-14);
        let i = ComplexMatrix::identity(3);
        for m in 1..=5 {
            assert!(lambda_by_recurrence(&i, &Conjugation::flip(3), m).unwrap().matrix.frobenius_norm() == 0.0);
        }
    }

    #[test]
    fn classify_unipotent_under_two_conjugations() {
        let tol = TolerancePolicy::default();
        let t = unipotent13();
        let r = classify(&t, Some(&Conjugation::flip(3)), 4, 3, &tol).unwrap();
        assert_eq!(r.minimal_pairs, vec![(2, 0)]);
        assert!(r.monotone_in_m && r.monotone_in_n);
        let r = classify(&t, Some(&Conjugation::entrywise(3)), 4, 3, &tol).unwrap();
        assert_eq!(r.minimal_pairs, vec![(3, 0)]);
    }

    #[test]
    fn classify_example_has_no_true_cell() {
        // T is invertible and diagonalisable with Λ1 ≠ 0, so every cell is false.
        let tol = TolerancePolicy::default();
        let r = classify(&example(), Some(&Conjugation::flip(2)), 3, 3, &tol).unwrap();
        assert!(!r.verdict(1, 1));
        assert!(!r.verdict(1, 3));
        assert!(r.minimal_pairs.is_empty());
    }

    #[test]
    fn classify_unitary_plain() {
        let tol = TolerancePolicy::default();
        let r = classify(&ComplexMatrix::flip(3), None, 2, 1, &tol).unwrap();
        assert!(r.verdict(1, 0));
        assert_eq!(r.minimal_pairs, vec![(1, 0)]);
        assert!(classify(&ComplexMatrix::flip(3), None, 13, 1, &tol).is_err());
    }

    #[test]
    fn power_bounded_examples() {
        let tol = TolerancePolicy::default();
        assert!(is_power_bounded(&ComplexMatrix::flip(3), 64, 1.0 + 1e-9, &tol).unwrap());
        assert!(!is_power_bounded(&ComplexMatrix::identity(2).scale_real(2.0), 64, 10.0, &tol).unwrap());
        // |T^k| ≥ k for T = I + E12
        let t = &ComplexMatrix::identity(2) + &ComplexMatrix::unit(2, 0, 1);
        assert!(!is_power_bounded(&t, 64, 10.0, &tol).unwrap());
        assert!(is_power_bounded(&t, 4, 10.0, &tol).unwrap());
    }

    #[test]
    fn normaloid_examples() {
        let tol = TolerancePolicy::default();
        let h = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, -3.0]]);
        assert!(is_normaloid(&h, &tol).unwrap());
        assert!(!is_normaloid(&ComplexMatrix::unit(3, 0, 1), &tol).unwrap());
        assert!(is_normaloid(&ComplexMatrix::flip(4), &tol).unwrap());
    }
}
