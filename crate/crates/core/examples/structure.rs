//! Structure theorem both ways: decompose a constructed n-quasi-(m,C)
//! isometry along R(T^n), then assemble one from blocks.
//!
//!     cargo run --example structure

use qik::construct::{gen_random_instance, InstanceKind};
use qik::structure::{assemble, decompose, spectrum_report, verify_structure_backward, verify_structure_forward};
use qik::{ComplexMatrix, Conjugation, TolerancePolicy};

fn main() {
    let tol = TolerancePolicy::default();
    let inst = gen_random_instance(InstanceKind::Assembled { m: 2, n: 2 }, &[3, 2], 17).unwrap();
    let (m, n) = inst.declared;

    let dec = decompose(&inst.t, n, &tol).unwrap();
    println!("rank of T^{n}: {} of {}", dec.rank, dec.dim());
    println!("lower-left block of Q*TQ: {:.2e}", dec.residual_lower_left);

    let report = verify_structure_forward(&inst.t, &inst.conjugation, m, n, &tol).unwrap();
    for c in report.hypotheses.iter().chain(&report.conclusion.parts) {
        println!("  {:<40} {:.2e} {}", c.name, c.residual, if c.pass { "ok" } else { "FAIL" });
    }
    println!("forward: {:?}", report.outcome);

    let spec = spectrum_report(&inst.t).unwrap();
    let shown: Vec<String> = spec.eigenvalues.iter().map(|z| format!("{:.4}{:+.4}i", z.re, z.im)).collect();
    println!("sigma(T) = {{{}}}", shown.join(", "));

    // Backward: an orthogonal corner, a nilpotent T3 of order 2.
    let t1 = ComplexMatrix::from_real_rows(&[&[0.6, -0.8], &[0.8, 0.6]]);
    let t2 = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, -1.0]]);
    let t3 = ComplexMatrix::unit(2, 0, 1);
    let (c1, c2) = (Conjugation::entrywise(2), Conjugation::flip(2));
    let built = assemble(&t1, &t2, &t3, &c1, &c2, 1, 2, &tol).unwrap();
    println!("assembled T is 4x4: {}", built.t.rows() == 4);
    let back = verify_structure_backward(&t1, &t2, &t3, &c1, &c2, 1, 2, &tol).unwrap();
    println!("backward: {:?}", back.outcome);
    // T3 is not nilpotent of order 1.
    println!("assemble with n = 1: {}", assemble(&t1, &t2, &t3, &c1, &c2, 1, 1, &tol).unwrap_err());
}
