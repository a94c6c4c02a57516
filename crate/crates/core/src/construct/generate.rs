//! Seeded instance generators.
//!
//! Most families are built in coordinates where the conjugation is entrywise
//! (`J x = conj(x)`) and then moved by a random unitary `W`: the pair
//! `(W A W*, W J W*)` has exactly the class of `(A, J)`. Under `J` the defect
//! of `A` is the bilinear form `Σ (−1)^k C(m,k) (Aᵀ)^j A^j`, so complex
//! orthogonal matrices are (1,J)-isometries and `I + c·u uᵀ` with `uᵀu = 0`
//! is a (2,J)-isometry. For real `A` the class under `J` is the plain class.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::conjugation::Conjugation;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

pub type InstanceRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-trial seed: a SplitMix64 step over `seed + trial`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    let mut z = seed.wrapping_add((trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn normal(rng: &mut InstanceRng) -> f64 {
    rng.sample(StandardNormal)
}

fn uniform(rng: &mut InstanceRng, scale: f64) -> f64 {
    rng.random_range(-scale..=scale)
}

fn sign(rng: &mut InstanceRng) -> f64 {
    if rng.random_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

pub fn random_complex(rows: usize, cols: usize, scale: f64, rng: &mut InstanceRng) -> ComplexMatrix {
    ComplexMatrix::wrap(DMatrix::from_fn(rows, cols, |_, _| {
        C64::new(uniform(rng, scale), uniform(rng, scale))
    }))
}

pub fn random_real(rows: usize, cols: usize, scale: f64, rng: &mut InstanceRng) -> ComplexMatrix {
    ComplexMatrix::wrap(DMatrix::from_fn(rows, cols, |_, _| C64::new(uniform(rng, scale), 0.0)))
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of `R` removed.
pub fn random_unitary(n: usize, rng: &mut InstanceRng) -> ComplexMatrix {
    if n == 0 {
        return ComplexMatrix::identity(0);
    }
    let g = DMatrix::from_fn(n, n, |_, _| C64::new(normal(rng), normal(rng)));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
    }
    ComplexMatrix::wrap(q)
}

/// Haar-distributed real orthogonal matrix, stored as a complex matrix.
pub fn random_orthogonal(n: usize, rng: &mut InstanceRng) -> ComplexMatrix {
    if n == 0 {
        return ComplexMatrix::identity(0);
    }
    let g = DMatrix::from_fn(n, n, |_, _| normal(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    ComplexMatrix::wrap(q.map(|x| C64::new(x, 0.0)))
}

/// Product of complex Givens rotations with imaginary angle parts in
/// `[−0.25, 0.25]`; satisfies `GᵀG = I` but is not unitary.
pub fn random_complex_orthogonal(n: usize, rng: &mut InstanceRng) -> ComplexMatrix {
    let mut g = DMatrix::<C64>::identity(n, n);
    if n < 2 {
        if n == 1 {
            g[(0, 0)] = C64::new(sign(rng), 0.0);
        }
        return ComplexMatrix::wrap(g);
    }
    for _ in 0..2 * n {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let theta = C64::new(rng.random_range(0.0..std::f64::consts::TAU), uniform(rng, 0.25));
        let (c, s) = (theta.cos(), theta.sin());
        let mut rot = DMatrix::<C64>::identity(n, n);
        rot[(i, i)] = c;
        rot[(j, j)] = c;
        rot[(i, j)] = -s;
        rot[(j, i)] = s;
        g = rot * g;
    }
    ComplexMatrix::wrap(g)
}

pub fn random_conjugation(n: usize, rng: &mut InstanceRng) -> Conjugation {
    let w = random_unitary(n, rng);
    Conjugation::entrywise(n)
        .rotated(&w)
        .expect("W Wᵀ is a valid symbol for unitary W")
}

/// Block diagonal of strictly upper triangular blocks of size at most `max_order`;
/// nilpotent of order at most `max_order`.
pub fn random_nilpotent(n: usize, max_order: usize, real: bool, rng: &mut InstanceRng) -> ComplexMatrix {
    let mut m = DMatrix::<C64>::zeros(n, n);
    let mut start = 0;
    while start < n {
        let size = rng.random_range(1..=max_order.max(1)).min(n - start);
        for i in start..start + size {
            for j in i + 1..start + size {
                let im = if real { 0.0 } else { uniform(rng, 0.6) };
                m[(i, j)] = C64::new(uniform(rng, 0.6), im);
            }
        }
        start += size;
    }
    ComplexMatrix::wrap(m)
}

/// Smallest `p ≥ 1` with `Q^p ≈ 0`, or `None` if `Q^dim` is not negligible.
pub fn nilpotency_order(q: &ComplexMatrix, rel_zero: f64) -> Result<Option<u32>> {
    let d = q.require_square()?;
    let base = crate::linalg::spectral_norm(q).max(1.0);
    let mut p = q.clone();
    for k in 1..=d.max(1) as u32 {
        if p.frobenius_norm() <= rel_zero * base.powi(k as i32) * d.max(1) as f64 {
            return Ok(Some(k));
        }
        p = &p * q;
    }
    Ok(None)
}

/// `λI + N` with `N` the shift of order exactly `p` in the leading `p×p` block.
pub fn gen_scalar_plus_nilpotent(lambda: C64, p: usize, dim: usize) -> Result<ComplexMatrix> {
    if (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("|lambda| must be 1, got {}", lambda.norm())));
    }
    if p == 0 || p > dim {
        return Err(Error::InvalidArgument(format!("need 1 <= p <= dim, got p = {p}, dim = {dim}")));
    }
    let mut m = DMatrix::<C64>::identity(dim, dim) * lambda;
    for i in 0..p - 1 {
        m[(i, i + 1)] = C64::new(1.0, 0.0);
    }
    Ok(ComplexMatrix::wrap(m))
}

/// An `(m,J)`-isometry of size `dim` with `m ≤ min(m_max, 3)`, returned with its order.
///
/// Built as `G (P ⊕ R) Gᵀ` where `G`, `R` are complex orthogonal and `P` is
/// `I + c·u uᵀ` with `u = (1, i)` (order 2) or `±(I + x E12)` (order 3).
pub fn j_isometry(dim: usize, m_max: u32, rng: &mut InstanceRng) -> (ComplexMatrix, u32) {
    if dim == 0 {
        return (ComplexMatrix::identity(0), 1);
    }
    let top = if dim >= 2 { m_max.clamp(1, 3) } else { 1 };
    let m = rng.random_range(1..=top);
    let core = match m {
        1 => random_complex_orthogonal(dim, rng),
        _ => {
            let piece = if m == 2 {
                let c = C64::new(uniform(rng, 0.6), uniform(rng, 0.6));
                let i = C64::new(0.0, 1.0);
                let one = C64::new(1.0, 0.0);
                let n = ComplexMatrix::from_complex_rows(&[&[one, i], &[i, -one]]).scale(c);
                &ComplexMatrix::identity(2) + &n
            } else {
                let x = sign(rng) * rng.random_range(0.3..1.0);
                (&ComplexMatrix::identity(2) + &ComplexMatrix::unit(2, 0, 1).scale_real(x)).scale_real(sign(rng))
            };
            piece.direct_sum(&random_complex_orthogonal(dim - 2, rng))
        }
    };
    let g = random_complex_orthogonal(dim, rng);
    (&(&g * &core) * &g.transpose(), m)
}

/// A real n-quasi-m-isometry `[[T1, T2], [0, T3]]` (rotated by a real
/// orthogonal matrix) with `T1` orthogonal (`m = 1`) or `±(I + N)` with `N² = 0`
/// (`m = 3`), and `T3` strictly upper triangular of order at most `n`.
#[derive(Debug, Clone)]
pub struct RealQuasi {
    pub t: ComplexMatrix,
    pub m: u32,
    pub n: u32,
}

pub fn real_quasi(dim: usize, rng: &mut InstanceRng) -> RealQuasi {
    assert!(dim >= 1, "real_quasi needs a non-empty space");
    let r = rng.random_range(1..=dim);
    let s = dim - r;
    let n = rng.random_range(1..=3u32);
    let (t1, m) = if r >= 2 && rng.random_bool(0.5) {
        let h = r / 2;
        let mut nil = DMatrix::<C64>::zeros(r, r);
        for i in 0..h {
            for j in h..r {
                nil[(i, j)] = C64::new(uniform(rng, 0.7), 0.0);
            }
        }
        let unip = &ComplexMatrix::identity(r) + &ComplexMatrix::wrap(nil);
        let o = random_orthogonal(r, rng);
        (&(&o * &unip.scale_real(sign(rng))) * &o.transpose(), 3)
    } else {
        (random_orthogonal(r, rng), 1)
    };
    let t2 = random_real(r, s, 0.5, rng);
    let t3 = random_nilpotent(s, n as usize, true, rng);
    let block = ComplexMatrix::from_blocks(&t1, &t2, &ComplexMatrix::zeros(s, r), &t3).expect("conforming blocks");
    let o = random_orthogonal(dim, rng);
    RealQuasi {
        t: &(&o * &block) * &o.transpose(),
        m,
        n,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceKind {
    /// `dims = [d]`: a unitary commuting with its conjugation; class (1,0).
    Unitary,
    /// `dims = [d]`: `±I + N`, `N` real of order `p`; class (2p−1, 0).
    ScalarPlusNilpotent { p: u32 },
    /// `dims = [r, s]`: block upper triangular with an (m,C1)-isometric corner; class (m, n).
    Assembled { m: u32, n: u32 },
    /// `dims = [a, b]`: tensor product of two real-type quasi isometries.
    Tensor,
}

#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub t: ComplexMatrix,
    pub conjugation: Conjugation,
    /// A class `(m, n)` the instance belongs to (`n = 0`: non-quasi).
    pub declared: (u32, u32),
    pub seed: u64,
}

fn need_dims(dims: &[usize], k: usize, kind: &str) -> Result<()> {
    if dims.len() != k {
        return Err(Error::InvalidArgument(format!("{kind} instances take {k} dimension(s)")));
    }
    Ok(())
}

/// Deterministic instance of the given kind; identical seeds give bit-identical output.
pub fn gen_random_instance(kind: InstanceKind, dims: &[usize], seed: u64) -> Result<RandomInstance> {
    let mut rng = rng_from_seed(seed);
    let rng = &mut rng;
    let (t, conjugation, declared) = match kind {
        InstanceKind::Unitary => {
            need_dims(dims, 1, "unitary")?;
            let d = dims[0];
            let w = random_unitary(d, rng);
            let o = random_orthogonal(d, rng);
            (&(&w * &o) * &w.adjoint(), Conjugation::entrywise(d).rotated(&w)?, (1, 0))
        }
        InstanceKind::ScalarPlusNilpotent { p } => {
            need_dims(dims, 1, "scalar_plus_nilpotent")?;
            let d = dims[0];
            let a = gen_scalar_plus_nilpotent(C64::new(sign(rng), 0.0), p as usize, d)?;
            let w = random_unitary(d, rng);
            (&(&w * &a) * &w.adjoint(), Conjugation::entrywise(d).rotated(&w)?, (2 * p - 1, 0))
        }
        InstanceKind::Assembled { m, n } => {
            need_dims(dims, 2, "assembled")?;
            if m == 0 || n == 0 {
                return Err(Error::InvalidArgument("assembled instances need m, n >= 1".into()));
            }
            let (r, s) = (dims[0], dims[1]);
            let (a, _) = j_isometry(r, m, rng);
            let w1 = random_unitary(r, rng);
            let t1 = &(&w1 * &a) * &w1.adjoint();
            let c1 = Conjugation::entrywise(r).rotated(&w1)?;
            let t2 = random_complex(r, s, 0.5, rng);
            let t3 = random_nilpotent(s, n as usize, false, rng);
            let c2 = random_conjugation(s, rng);
            let block = ComplexMatrix::from_blocks(&t1, &t2, &ComplexMatrix::zeros(s, r), &t3)?;
            let v = random_unitary(r + s, rng);
            let t = &(&v * &block) * &v.adjoint();
            (t, c1.direct_sum(&c2).rotated(&v)?, (m, n))
        }
        InstanceKind::Tensor => {
            need_dims(dims, 2, "tensor")?;
            if dims[0] == 0 || dims[1] == 0 {
                return Err(Error::InvalidArgument("tensor factors must be non-empty".into()));
            }
            let (a, b) = (real_quasi(dims[0], rng), real_quasi(dims[1], rng));
            let (w1, w2) = (random_unitary(dims[0], rng), random_unitary(dims[1], rng));
            let t = &(&w1 * &a.t) * &w1.adjoint();
            let s = &(&w2 * &b.t) * &w2.adjoint();
            let c = Conjugation::entrywise(dims[0])
                .rotated(&w1)?
                .tensor(&Conjugation::entrywise(dims[1]).rotated(&w2)?);
            (t.kron(&s), c, (a.m + b.m - 1, a.n.max(b.n)))
        }
    };
    Ok(RandomInstance {
        t,
        conjugation,
        declared,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defect::{defect, iso_defect, lambda};
    use crate::linalg::TolerancePolicy;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn unitary_and_orthogonal_generators() {
        let mut rng = rng_from_seed(1);
        let u = random_unitary(4, &mut rng);
        assert!((&(&u.adjoint() * &u) - &ComplexMatrix::identity(4)).frobenius_norm() < 1e-13);
        let o = random_orthogonal(4, &mut rng);
        assert!((&(&o.transpose() * &o) - &ComplexMatrix::identity(4)).frobenius_norm() < 1e-13);
        assert!(o.entries_row_major().iter().all(|z| z.im == 0.0));
        let g = random_complex_orthogonal(4, &mut rng);
        assert!((&(&g.transpose() * &g) - &ComplexMatrix::identity(4)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn scalar_plus_nilpotent_examples() {
        let t = gen_scalar_plus_nilpotent(C64::new(1.0, 0.0), 2, 2).unwrap();
        assert!(iso_defect(&t, 3).unwrap().is_zero(&tol()));
        assert!(!iso_defect(&t, 2).unwrap().is_zero(&tol()));
        let t = gen_scalar_plus_nilpotent(C64::new(0.0, 1.0), 1, 3).unwrap();
        assert!(iso_defect(&t, 1).unwrap().is_zero(&tol()));
        let t = gen_scalar_plus_nilpotent(C64::new(1.0, 0.0), 3, 3).unwrap();
        assert!(iso_defect(&t, 5).unwrap().is_zero(&tol()));
        assert!(!iso_defect(&t, 4).unwrap().is_zero(&tol()));
        assert!(gen_scalar_plus_nilpotent(C64::new(2.0, 0.0), 1, 2).is_err());
        assert!(gen_scalar_plus_nilpotent(C64::new(1.0, 0.0), 3, 2).is_err());
    }

    #[test]
    fn j_isometries_have_their_order() {
        let mut rng = rng_from_seed(5);
        for _ in 0..40 {
            let (a, m) = j_isometry(4, 3, &mut rng);
            let j = Conjugation::entrywise(4);
            assert!(lambda(&a, &j, m).unwrap().is_zero(&tol()), "order {m}");
            if m > 1 {
                assert!(!lambda(&a, &j, m - 1).unwrap().is_zero(&tol()));
            }
        }
    }

    #[test]
    fn real_quasi_has_declared_class() {
        let mut rng = rng_from_seed(9);
        for _ in 0..40 {
            let q = real_quasi(5, &mut rng);
            assert!(defect(&q.t, None, q.m, q.n).unwrap().is_zero(&tol()));
        }
    }

    #[test]
    fn random_instances_are_deterministic_and_in_class() {
        let kinds = [
            (InstanceKind::Unitary, vec![4]),
            (InstanceKind::ScalarPlusNilpotent { p: 2 }, vec![3]),
            (InstanceKind::Assembled { m: 2, n: 2 }, vec![3, 2]),
            (InstanceKind::Tensor, vec![2, 3]),
        ];
        for (kind, dims) in kinds {
            for seed in 0..10 {
                let a = gen_random_instance(kind, &dims, seed).unwrap();
                let b = gen_random_instance(kind, &dims, seed).unwrap();
                assert_eq!(a.t, b.t);
                assert_eq!(a.conjugation, b.conjugation);
                let (m, n) = a.declared;
                let d = defect(&a.t, Some(&a.conjugation), m, n).unwrap();
                assert!(d.is_zero(&tol()), "{kind:?} seed {seed}: {:e}", d.residual());
            }
        }
    }

    #[test]
    fn nilpotency_order_is_measured() {
        let mut q = ComplexMatrix::unit(3, 0, 1);
        q = &q + &ComplexMatrix::unit(3, 1, 2);
        assert_eq!(nilpotency_order(&q, 1e-9).unwrap(), Some(3));
        assert_eq!(nilpotency_order(&ComplexMatrix::unit(3, 0, 2), 1e-9).unwrap(), Some(2));
        assert_eq!(nilpotency_order(&ComplexMatrix::zeros(2, 2), 1e-9).unwrap(), Some(1));
        assert_eq!(nilpotency_order(&ComplexMatrix::identity(2), 1e-9).unwrap(), None);
    }

    #[test]
    fn trial_seeds_differ() {
        assert_ne!(trial_seed(7, 0), trial_seed(7, 1));
        assert_ne!(trial_seed(7, 0), trial_seed(8, 0));
    }
}
