//! Seeded trial suites, one per theorem.
//!
//! Trial `i` draws its instance from `trial_seed(seed, i)` alone, so the
//! trials run in parallel and the records come back in trial order.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{
    gen_random_instance, j_isometry, random_complex, random_conjugation, random_nilpotent, random_orthogonal,
    random_unitary, real_quasi, rng_from_seed, trial_seed, InstanceKind, InstanceRng,
};
use super::theorems::{
    check_dense_range, check_escalation, check_multinomial, check_nilpotent_perturbation, check_order_escalation,
    check_power_bounded_reduction, check_power_gcd, check_power_theorem, check_product_theorem, check_tensor_lemma,
    check_tensor_theorem, ProductVariant, RECHECK_FACTOR,
};
use crate::conjugation::Conjugation;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, TolerancePolicy, C64};
use crate::report::{Check, InstanceDigest, Outcome, Recheck, VerificationReport};
use crate::sequence::{gcd_min_reduction, moments};
use crate::structure::verify_structure_forward;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremId {
    Th21,
    Th22,
    Th23,
    Th24,
    Th25,
    Th26,
    Th27,
    Th28,
    Pro21,
    Pro25,
    Lem21,
    Lem22,
    Lem23,
    Lem24,
    Cor21,
    Cor22,
    Cor23,
}

impl TheoremId {
    pub const ALL: [TheoremId; 17] = [
        TheoremId::Th21,
        TheoremId::Th22,
        TheoremId::Th23,
        TheoremId::Th24,
        TheoremId::Th25,
        TheoremId::Th26,
        TheoremId::Th27,
        TheoremId::Th28,
        TheoremId::Pro21,
        TheoremId::Pro25,
        TheoremId::Lem21,
        TheoremId::Lem22,
        TheoremId::Lem23,
        TheoremId::Lem24,
        TheoremId::Cor21,
        TheoremId::Cor22,
        TheoremId::Cor23,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TheoremId::Th21 => "th21",
            TheoremId::Th22 => "th22",
            TheoremId::Th23 => "th23",
            TheoremId::Th24 => "th24",
            TheoremId::Th25 => "th25",
            TheoremId::Th26 => "th26",
            TheoremId::Th27 => "th27",
            TheoremId::Th28 => "th28",
            TheoremId::Pro21 => "pro21",
            TheoremId::Pro25 => "pro25",
            TheoremId::Lem21 => "lem21",
            TheoremId::Lem22 => "lem22",
            TheoremId::Lem23 => "lem23",
            TheoremId::Lem24 => "lem24",
            TheoremId::Cor21 => "cor21",
            TheoremId::Cor22 => "cor22",
            TheoremId::Cor23 => "cor23",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            TheoremId::Th21 => "structure of n-quasi-(m,C)-isometries: (m,C1)-isometric corner, nilpotent T3",
            TheoremId::Th22 => "powers of n-quasi-(m,C)-isometries stay in the class",
            TheoremId::Th23 => "power bounded with normaloid T1C1T1C1 - I implies n-quasi-(1,C)",
            TheoremId::Th24 => "T^r (m,C) and T^s (l,C) give T^gcd(r,s) (min(m,l),C)",
            TheoremId::Th25 => "doubly commuting products, hypothesis T(CSC) = S(CTC)",
            TheoremId::Th26 => "tensor products T⊗S under C⊗D",
            TheoremId::Th27 => "commuting nilpotent perturbations of (m,C)-isometries",
            TheoremId::Th28 => "commuting nilpotent perturbations of n-quasi-(m,C)-isometries",
            TheoremId::Pro21 => "escalation of both orders",
            TheoremId::Pro25 => "doubly commuting products, hypothesis T(CSC) = (CSC)T",
            TheoremId::Lem21 => "escalation in m when T commutes with CTC",
            TheoremId::Lem22 => "gcd/min reduction of binomial recurrences on moment sequences",
            TheoremId::Lem23 => "T⊗I and I⊗T have the class of T",
            TheoremId::Lem24 => "multinomial expansion of the defect of T+Q",
            TheoremId::Cor21 => "dense range reduces to the non-quasi class",
            TheoremId::Cor22 => "power corollaries of the gcd theorem",
            TheoremId::Cor23 => "doubly commuting products with a power of S",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.label() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem id '{s}' (see verify --list)")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub report: VerificationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub theorem_id: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub inconclusive: usize,
    pub counterexamples: usize,
    pub max_hypothesis_residual: f64,
    pub max_conclusion_residual: f64,
}

impl SuiteSummary {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub summary: SuiteSummary,
    pub records: Vec<TrialRecord>,
}

/// Runs `trials` seeded trials of one theorem.
pub fn run_suite(id: TheoremId, trials: usize, seed: u64, tol: &TolerancePolicy) -> Result<SuiteReport> {
    tol.validate()?;
    let records = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let s = trial_seed(seed, trial);
            run_trial(id, s, tol).map(|report| TrialRecord { trial, report })
        })
        .collect::<Result<Vec<_>>>()?;
    let count = |o: Outcome| records.iter().filter(|r| r.report.outcome == o).count();
    let summary = SuiteSummary {
        theorem_id: id.label().to_string(),
        seed,
        trials,
        passed: count(Outcome::Pass),
        inconclusive: count(Outcome::Inconclusive),
        counterexamples: count(Outcome::CounterExample),
        max_hypothesis_residual: records
            .iter()
            .flat_map(|r| r.report.hypotheses.iter().map(|h| h.residual))
            .fold(0.0, f64::max),
        max_conclusion_residual: records
            .iter()
            .map(|r| r.report.conclusion.residual)
            .fold(0.0, f64::max),
    };
    Ok(SuiteReport { summary, records })
}

/// One trial from its own seed. A counterexample that has not been re-checked
/// by the theorem check is re-run at the loosened tolerance.
pub fn run_trial(id: TheoremId, seed: u64, tol: &TolerancePolicy) -> Result<VerificationReport> {
    let report = trial_once(id, seed, tol)?;
    if report.outcome != Outcome::CounterExample || report.recheck.is_some() {
        return Ok(report);
    }
    let loose = trial_once(id, seed, &tol.loosened(RECHECK_FACTOR))?;
    Ok(report.apply_recheck(Recheck {
        loosened_pass: loose.outcome == Outcome::Pass,
        exact_pass: None,
    }))
}

fn trial_once(id: TheoremId, seed: u64, tol: &TolerancePolicy) -> Result<VerificationReport> {
    let mut rng = rng_from_seed(seed);
    let rng = &mut rng;
    let report = match id {
        TheoremId::Th21 => structure_trial(seed, rng, tol)?,
        TheoremId::Th22 => {
            let (inst, (m, n)) = assembled(seed, rng)?;
            let k = rng.random_range(1..=3);
            check_power_theorem(&inst.0, &inst.1, m, n, k, tol)?
        }
        TheoremId::Th23 => {
            let (t, c, m, n) = power_bounded_instance(rng)?;
            check_power_bounded_reduction(&t, &c, m, n, tol)?
        }
        TheoremId::Th24 => {
            let g = gcd_instance(rng)?;
            check_power_gcd(&g.t, &g.c, g.powers, g.orders, tol)?
        }
        TheoremId::Cor22 => {
            let (g, item) = cor22_instance(rng)?;
            let mut r = check_power_gcd(&g.t, &g.c, g.powers, g.orders, tol)?;
            r.theorem_id = "cor22".into();
            r.variant = Some(format!("item {item}"));
            r
        }
        TheoremId::Th25 | TheoremId::Pro25 | TheoremId::Cor23 => {
            let p = product_instance(rng)?;
            let variant = match id {
                TheoremId::Th25 => ProductVariant::Stated,
                TheoremId::Pro25 => ProductVariant::Symmetric,
                _ => ProductVariant::Power {
                    q: rng.random_range(1..=3),
                },
            };
            check_product_theorem(&p.t, &p.s, &p.c, p.class_t, p.class_s, variant, tol)?
        }
        TheoremId::Th26 => {
            let p = tensor_instance(rng)?;
            check_tensor_theorem(&p.t, &p.s, &p.c, &p.d, p.class_t, p.class_s, tol)?
        }
        TheoremId::Lem23 => {
            let r = rng.random_range(1..=3usize);
            let s = rng.random_range(0..=3 - r);
            let (m, n) = (rng.random_range(1..=3), rng.random_range(1..=3));
            let inst = gen_random_instance(InstanceKind::Assembled { m, n }, &[r, s], seed)?;
            let d = random_conjugation(rng.random_range(1..=2), rng);
            // A random cell, so that false verdicts are exercised as well.
            let (mq, nq) = (rng.random_range(1..=3), rng.random_range(0..=3));
            check_tensor_lemma(&inst.t, &inst.conjugation, &d, mq, nq, tol)?
        }
        TheoremId::Lem24 => {
            let d = rng.random_range(1..=6usize);
            let t = random_complex(d, d, 1.0 / (d as f64).sqrt(), rng);
            let a = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let b = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let q = &t.scale(a) + &(&t * &t).scale(b);
            let c = random_conjugation(d, rng);
            check_multinomial(&t, &q, &c, rng.random_range(2..=4), tol)?
        }
        TheoremId::Th27 => {
            let p = perturbation_instance(rng, false)?;
            check_nilpotent_perturbation(&p.t, &p.q, &p.c, p.m, None, tol)?
        }
        TheoremId::Th28 => {
            let p = perturbation_instance(rng, true)?;
            check_nilpotent_perturbation(&p.t, &p.q, &p.c, p.m, Some(p.n), tol)?
        }
        TheoremId::Pro21 => {
            let (inst, (m, n)) = assembled(seed, rng)?;
            check_escalation(&inst.0, &inst.1, m, n, tol)?
        }
        TheoremId::Lem21 => {
            let d = rng.random_range(1..=6);
            let q = real_quasi(d, rng);
            let w = random_unitary(d, rng);
            let t = &(&w * &q.t) * &w.adjoint();
            let c = Conjugation::entrywise(d).rotated(&w)?;
            let n = if rng.random_bool(0.25) { 0 } else { q.n };
            if n == 0 && q.t.rows() > 0 {
                // Plain variant only when the instance is a plain isometry.
                let plain = crate::defect::defect(&t, Some(&c), q.m, 0)?.is_zero(tol);
                check_order_escalation(&t, &c, q.m, if plain { 0 } else { q.n }, tol)?
            } else {
                check_order_escalation(&t, &c, q.m, n, tol)?
            }
        }
        TheoremId::Lem22 => sequence_trial(rng, tol)?,
        TheoremId::Cor21 => {
            let d = rng.random_range(1..=6);
            let (a, m) = j_isometry(d, 3, rng);
            let w = random_unitary(d, rng);
            let t = &(&w * &a) * &w.adjoint();
            let c = Conjugation::entrywise(d).rotated(&w)?;
            check_dense_range(&t, &c, m, rng.random_range(1..=3), tol)?
        }
    };
    Ok(report.with_seed(seed))
}

fn structure_trial(seed: u64, rng: &mut InstanceRng, tol: &TolerancePolicy) -> Result<VerificationReport> {
    let ((t, c), (m, n)) = assembled(seed, rng)?;
    match verify_structure_forward(&t, &c, m, n, tol) {
        Ok(r) => Ok(r),
        Err(Error::HypothesisFailed(msg)) => {
            let mut r = VerificationReport::new("th21", InstanceDigest::of(&[&t])).with_variant("forward");
            r.expect_class(m, n);
            r.hypothesis(Check::flag("quasi defect vanishes", false));
            r.note(msg);
            Ok(r.finish())
        }
        Err(Error::NotReducing { residual }) => {
            let mut r = VerificationReport::new("th21", InstanceDigest::of(&[&t])).with_variant("forward");
            r.expect_class(m, n);
            r.hypothesis(Check::new("C splits along R(T^n)", residual, crate::conjugation::SPLIT_TOL));
            Ok(r.finish())
        }
        Err(e) => Err(e),
    }
}

/// Assembled instance with `dim ≤ 6`, `m ≤ 3`, `1 ≤ n ≤ 3`.
fn assembled(seed: u64, rng: &mut InstanceRng) -> Result<((ComplexMatrix, Conjugation), (u32, u32))> {
    let d = rng.random_range(1..=6usize);
    let r = rng.random_range(0..=d);
    let (m, n) = (rng.random_range(1..=3), rng.random_range(1..=3));
    let inst = gen_random_instance(InstanceKind::Assembled { m, n }, &[r, d - r], seed ^ 0x5eed)?;
    Ok(((inst.t, inst.conjugation), inst.declared))
}

/// `[[U, T2], [0, N]]` with `U` orthogonal commuting with its conjugation.
fn power_bounded_instance(rng: &mut InstanceRng) -> Result<(ComplexMatrix, Conjugation, u32, u32)> {
    let d = rng.random_range(1..=6usize);
    let r = rng.random_range(1..=d);
    let s = d - r;
    let n = rng.random_range(1..=3u32);
    let w1 = random_unitary(r, rng);
    let u = &(&w1 * &random_orthogonal(r, rng)) * &w1.adjoint();
    let c1 = Conjugation::entrywise(r).rotated(&w1)?;
    let t2 = random_complex(r, s, 0.3, rng);
    let nil = random_nilpotent(s, n as usize, false, rng);
    let block = ComplexMatrix::from_blocks(&u, &t2, &ComplexMatrix::zeros(s, r), &nil)?;
    let c = c1.direct_sum(&random_conjugation(s, rng));
    let v = random_unitary(d, rng);
    let t = &(&v * &block) * &v.adjoint();
    Ok((t, c.rotated(&v)?, rng.random_range(1..=3), n))
}

struct GcdInstance {
    t: ComplexMatrix,
    c: Conjugation,
    powers: (u32, u32),
    orders: (u32, u32),
}

/// `ω A` rotated, with `A` an (m0,J)-isometry and `ω^(2q) = 1`, so every
/// power divisible by `q` is again (m0,C)-isometric.
fn rotated_scaled(rng: &mut InstanceRng, m_max: u32, q: u32) -> Result<(ComplexMatrix, Conjugation, u32)> {
    let d = rng.random_range(1..=6usize);
    let (a, m0) = j_isometry(d, m_max, rng);
    let j = rng.random_range(0..2 * q);
    let omega = C64::from_polar(1.0, std::f64::consts::PI * j as f64 / q as f64);
    let w = random_unitary(d, rng);
    let t = &(&w * &a.scale(omega)) * &w.adjoint();
    Ok((t, Conjugation::entrywise(d).rotated(&w)?, m0))
}

fn gcd_instance(rng: &mut InstanceRng) -> Result<GcdInstance> {
    let (r, s) = (rng.random_range(1..=4u32), rng.random_range(1..=4u32));
    let q = gcd(r, s);
    let (t, c, m0) = rotated_scaled(rng, 3, q)?;
    let m = rng.random_range(m0..=3);
    let l = rng.random_range(m0..=3);
    Ok(GcdInstance {
        t,
        c,
        powers: (r, s),
        orders: (m, l),
    })
}

fn cor22_instance(rng: &mut InstanceRng) -> Result<(GcdInstance, u32)> {
    let item = rng.random_range(1..=3u32);
    let g = match item {
        1 => {
            let (t, c, _) = rotated_scaled(rng, 1, 1)?;
            GcdInstance {
                t,
                c,
                powers: (1, rng.random_range(2..=4)),
                orders: (rng.random_range(1..=3), 1),
            }
        }
        2 => {
            let (t, c, m0) = rotated_scaled(rng, 3, 1)?;
            let r = rng.random_range(1..=3);
            let m = rng.random_range(m0..=3);
            GcdInstance {
                t,
                c,
                powers: (r, r + 1),
                orders: (m, m),
            }
        }
        _ => {
            let (t, c, m0) = rotated_scaled(rng, 3, 1)?;
            let r = rng.random_range(1..=3);
            let m = rng.random_range(m0..=3);
            GcdInstance {
                t,
                c,
                powers: (r, r + 1),
                orders: (m, rng.random_range(m + 1..=4)),
            }
        }
    };
    Ok((g, item))
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

struct ProductInstance {
    t: ComplexMatrix,
    s: ComplexMatrix,
    c: Conjugation,
    class_t: (u32, u32),
    class_s: (u32, u32),
}

const FACTOR_DIMS: [(usize, usize); 8] = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2), (2, 3), (3, 2)];

/// `T = (A⊗I) ⊕ P`, `S = (I⊗B) ⊕ ±P^j` with `A`, `B` real quasi isometries
/// and `P` orthogonal, moved by one random unitary. Such pairs are doubly
/// commuting and satisfy every commutation hypothesis of the product theorems.
fn product_instance(rng: &mut InstanceRng) -> Result<ProductInstance> {
    let (a_dim, b_dim) = FACTOR_DIMS[rng.random_range(0..FACTOR_DIMS.len())];
    let extra = rng.random_range(0..=6 - a_dim * b_dim);
    let a = real_quasi(a_dim, rng);
    let b = real_quasi(b_dim, rng);
    let p = random_orthogonal(extra, rng);
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let p2 = p.pow(rng.random_range(0..=2))?.scale_real(sign);
    let t = a.t.kron(&ComplexMatrix::identity(b_dim)).direct_sum(&p);
    let s = ComplexMatrix::identity(a_dim).kron(&b.t).direct_sum(&p2);
    let d = t.rows();
    let w = random_unitary(d, rng);
    Ok(ProductInstance {
        t: &(&w * &t) * &w.adjoint(),
        s: &(&w * &s) * &w.adjoint(),
        c: Conjugation::entrywise(d).rotated(&w)?,
        class_t: (a.m, a.n),
        class_s: (b.m, b.n),
    })
}

struct TensorInstance {
    t: ComplexMatrix,
    s: ComplexMatrix,
    c: Conjugation,
    d: Conjugation,
    class_t: (u32, u32),
    class_s: (u32, u32),
}

fn tensor_instance(rng: &mut InstanceRng) -> Result<TensorInstance> {
    let (a_dim, b_dim) = FACTOR_DIMS[rng.random_range(0..FACTOR_DIMS.len())];
    let a = real_quasi(a_dim, rng);
    let b = real_quasi(b_dim, rng);
    let w1 = random_unitary(a_dim, rng);
    let w2 = random_unitary(b_dim, rng);
    Ok(TensorInstance {
        t: &(&w1 * &a.t) * &w1.adjoint(),
        s: &(&w2 * &b.t) * &w2.adjoint(),
        c: Conjugation::entrywise(a_dim).rotated(&w1)?,
        d: Conjugation::entrywise(b_dim).rotated(&w2)?,
        class_t: (a.m, a.n),
        class_s: (b.m, b.n),
    })
}

struct PerturbationInstance {
    t: ComplexMatrix,
    q: ComplexMatrix,
    c: Conjugation,
    m: u32,
    n: u32,
}

/// `T = A ⊕ B`, `Q = 0 ⊕ Q_B` in coordinates where the conjugation is
/// block diagonal, then moved by a random unitary.
///
/// `B` is either `±I` with an arbitrary nilpotent `Q_B` under a random
/// conjugation, or `±(I + N)` with `N` real, `N² = 0` and `Q_B = cN`
/// under `J`. `A` is an (m,J)-isometry, or a real quasi isometry when
/// `quasi` is set (so that `T` commutes with `CTC`).
fn perturbation_instance(rng: &mut InstanceRng, quasi: bool) -> Result<PerturbationInstance> {
    let d = rng.random_range(2..=6usize);
    let s = rng.random_range(1..=d - 1);
    let r = d - s;
    let (a, m_a, n) = if quasi {
        let q = real_quasi(r, rng);
        (q.t, q.m, q.n)
    } else {
        let (a, m) = j_isometry(r, 3, rng);
        (a, m, 0)
    };
    let lambda = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let (b, q_b, c_b, m_b) = if s >= 2 && rng.random_bool(0.5) {
        let nil = random_nilpotent(s, 2, true, rng);
        let coef = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let b = (&ComplexMatrix::identity(s) + &nil).scale_real(lambda);
        let m_b = if nil.frobenius_norm() > 0.0 { 3 } else { 1 };
        (b, nil.scale(coef), Conjugation::entrywise(s), m_b)
    } else {
        let u = random_unitary(s, rng);
        let nil = &(&u * &random_nilpotent(s, 3, false, rng)) * &u.adjoint();
        (ComplexMatrix::identity(s).scale_real(lambda), nil, random_conjugation(s, rng), 1)
    };
    let t = a.direct_sum(&b);
    let q = ComplexMatrix::zeros(r, r).direct_sum(&q_b);
    let c = Conjugation::entrywise(r).direct_sum(&c_b);
    let v = random_unitary(d, rng);
    Ok(PerturbationInstance {
        t: &(&v * &t) * &v.adjoint(),
        q: &(&v * &q) * &v.adjoint(),
        c: c.rotated(&v)?,
        m: m_a.max(m_b),
        n,
    })
}

/// Moment sequence of `ω A` for a random vector, then the gcd/min reduction.
fn sequence_trial(rng: &mut InstanceRng, tol: &TolerancePolicy) -> Result<VerificationReport> {
    let g = gcd_instance(rng)?;
    let (r, s) = g.powers;
    let (m, l) = g.orders;
    let horizon = 6;
    let len = horizon + (m * r).max(l * s) as usize;
    let x: Vec<C64> = (0..g.t.rows())
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let a = moments(&g.t, &g.c, &x, len)?;
    Ok(gcd_min_reduction(&a, (m, r), (l, s), horizon, tol)?.report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.label().parse::<TheoremId>().unwrap(), id);
        }
        assert!("th99".parse::<TheoremId>().is_err());
    }

    #[test]
    fn parallel_suite_matches_serial_trials() {
        let tol = TolerancePolicy::default();
        let suite = run_suite(TheoremId::Th27, 12, 7, &tol).unwrap();
        for rec in &suite.records {
            let again = run_trial(TheoremId::Th27, trial_seed(7, rec.trial), &tol).unwrap();
            assert_eq!(
                serde_json::to_string(&again).unwrap(),
                serde_json::to_string(&rec.report).unwrap()
            );
        }
    }

    #[test]
    fn every_suite_passes_a_short_run() {
        let tol = TolerancePolicy::default();
        for id in TheoremId::ALL {
            let suite = run_suite(id, 25, 11, &tol).unwrap();
            let bad: Vec<_> = suite
                .records
                .iter()
                .filter(|r| r.report.outcome != Outcome::Pass)
                .map(|r| (r.trial, &r.report))
                .collect();
            assert!(bad.is_empty(), "{id}: {bad:#?}");
        }
    }
}
