//! Scalar sequences behind the gcd-power reduction.
//!
//! Powers of an (m,C)-isometry reduce to the moment sequence
//! `a_j = ⟨C T^j x | T^j x⟩`, which then satisfies the binomial recurrence
//! `Σ_{0≤k≤m} (−1)^k C(m,k) a_{rk+j} = 0`. The inner product is linear in the
//! first slot and conjugate-linear in the second: `⟨u|v⟩ = Σ u_i conj(v_i)`.

use serde::{Deserialize, Serialize};

use crate::conjugation::Conjugation;
use crate::defect::binomial;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, TolerancePolicy, C64};
use crate::report::{Check, InstanceDigest, VerificationReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceOrigin {
    Polynomial { coefficients: Vec<f64> },
    OperatorMoments { dim: usize },
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSequence {
    #[serde(with = "pairs")]
    pub values: Vec<C64>,
    pub origin: SequenceOrigin,
}

mod pairs {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::linalg::C64;

    pub fn serialize<S: Serializer>(values: &[C64], s: S) -> Result<S::Ok, S::Error> {
        let raw: Vec<[f64; 2]> = values.iter().map(|z| [z.re, z.im]).collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}

impl MomentSequence {
    pub fn custom(values: Vec<C64>) -> Self {
        Self {
            values,
            origin: SequenceOrigin::Custom,
        }
    }

    /// `a_j = Σ_i c_i j^i` for `j = 0..len`.
    pub fn polynomial(coefficients: &[f64], len: usize) -> Self {
        let values = (0..len)
            .map(|j| {
                let x = j as f64;
                let v = coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c);
                C64::new(v, 0.0)
            })
            .collect();
        Self {
            values,
            origin: SequenceOrigin::Polynomial {
                coefficients: coefficients.to_vec(),
            },
        }
    }

    pub fn geometric(ratio: C64, len: usize) -> Self {
        let mut values = Vec::with_capacity(len);
        let mut z = C64::new(1.0, 0.0);
        for _ in 0..len {
            values.push(z);
            z *= ratio;
        }
        Self::custom(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn max_abs(&self, upto: usize) -> f64 {
        self.values[..upto.min(self.len())]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    fn require(&self, last_index: usize) -> Result<()> {
        if last_index >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: last_index,
                len: self.len(),
            });
        }
        Ok(())
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `Σ_{0≤k≤m} (−1)^k C(m,k) a_{rk+j}`.
pub fn binomial_diff(a: &MomentSequence, m: u32, r: u32, j: usize) -> Result<C64> {
    let last = r as usize * m as usize + j;
    a.require(last)?;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..=m {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += a.values[r as usize * k as usize + j] * (sign * binomial(m, k));
    }
    Ok(acc)
}

/// Largest `|binomial_diff(a, m, r, j)|` over `0 ≤ j ≤ J`, relative to `max|a|` on the touched range.
pub fn recurrence_residual(a: &MomentSequence, m: u32, r: u32, horizon: usize) -> Result<f64> {
    let last = r as usize * m as usize + horizon;
    a.require(last)?;
    let scale = a.max_abs(last + 1);
    let worst = (0..=horizon)
        .map(|j| binomial_diff(a, m, r, j).map(|z| z.norm()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(if scale == 0.0 { worst } else { worst / scale })
}

/// True iff every `|binomial_diff(a, m, r, j)| ≤ rel_zero · max|a|` for `0 ≤ j ≤ J`.
pub fn satisfies_recurrence(
    a: &MomentSequence,
    m: u32,
    r: u32,
    horizon: usize,
    tol: &TolerancePolicy,
) -> Result<bool> {
    Ok(recurrence_residual(a, m, r, horizon)? <= tol.rel_zero)
}

#[derive(Debug, Clone)]
pub struct GcdReduction {
    pub report: VerificationReport,
    /// `gcd(r, s)`.
    pub step: u32,
    /// `min(m, l)`.
    pub order: u32,
    /// The alternative reading with order and step swapped, evaluated at `j = 0`:
    /// `Σ_{0≤k≤q} (−1)^k C(q,k) a_{pk}`. Reported, never asserted.
    pub swapped_form: Option<C64>,
}

/// From order-`m` step-`r` and order-`l` step-`s` recurrences, checks the
/// order-`min(m,l)` step-`gcd(r,s)` recurrence on `0 ≤ j ≤ J`.
pub fn gcd_min_reduction(
    a: &MomentSequence,
    (m, r): (u32, u32),
    (l, s): (u32, u32),
    horizon: usize,
    tol: &TolerancePolicy,
) -> Result<GcdReduction> {
    if m == 0 || l == 0 || r == 0 || s == 0 {
        return Err(Error::InvalidArgument("orders and steps must be positive".into()));
    }
    let step = gcd(r, s);
    let order = m.min(l);
    let mut report = VerificationReport::new(
        "lem22",
        InstanceDigest {
            dims: vec![a.len()],
            norms: vec![a.max_abs(a.len())],
        },
    );
    report.hypothesis(Check::new(
        format!("order {m} step {r} recurrence"),
        recurrence_residual(a, m, r, horizon)?,
        tol.rel_zero,
    ));
    report.hypothesis(Check::new(
        format!("order {l} step {s} recurrence"),
        recurrence_residual(a, l, s, horizon)?,
        tol.rel_zero,
    ));
    report.conclude(Check::new(
        format!("order {order} step {step} recurrence"),
        recurrence_residual(a, order, step, horizon)?,
        tol.rel_zero,
    ));
    let swapped_form = binomial_diff(a, step, order, 0).ok();
    if let Some(z) = swapped_form {
        report.note(format!(
            "swapped reading (order {step}, step {order}, j = 0) evaluates to {:e}{:+e}i",
            z.re, z.im
        ));
    }
    Ok(GcdReduction {
        report: report.finish(),
        step,
        order,
        swapped_form,
    })
}

/// `a_j = ⟨C T^j x | T^j x⟩` for `j = 0..=J`.
pub fn moments(t: &ComplexMatrix, c: &Conjugation, x: &[C64], horizon: usize) -> Result<MomentSequence> {
    let d = t.require_square()?;
    if c.dim() != d || x.len() != d {
        return Err(Error::DimensionMismatch {
            op: "moments",
            left: t.shape(),
            right: (x.len(), c.dim()),
        });
    }
    let mut y = x.to_vec();
    let mut values = Vec::with_capacity(horizon + 1);
    for j in 0..=horizon {
        let cy = c.apply(&y)?;
        values.push(cy.iter().zip(&y).map(|(u, v)| u * v.conj()).sum());
        if j < horizon {
            y = t.apply(&y)?;
        }
    }
    Ok(MomentSequence {
        values,
        origin: SequenceOrigin::OperatorMoments { dim: d },
    })
}
