//! Defect operators in floating point: plain, conjugation and quasi
//! variants, the recurrence, and the zero test with its scale.
//!
//!     cargo run --example defects

use qik::defect::{defect, iso_defect, lambda, lambda_by_recurrence, quasi_iso_defect, quasi_lambda};
use qik::{ComplexMatrix, Conjugation, TolerancePolicy};

fn main() {
    let tol = TolerancePolicy::default();
    let t = ComplexMatrix::from_real_rows(&[&[-1.0, -1.0], &[3.0, 2.0]]);
    let c = Conjugation::flip(2);

    let l1 = lambda(&t, &c, 1).unwrap();
    println!("Lambda_1(T)          = {:?}", l1.matrix);
    println!("  scale {:.3}, relative residual {:.3e}, zero: {}", l1.scale, l1.residual(), l1.is_zero(&tol));

    let t3 = t.pow(3).unwrap();
    let q = quasi_lambda(&t3, &c, 1, 1).unwrap();
    println!("quasi_lambda(T^3,1,1) zero: {}", q.is_zero(&tol));

    let rec = lambda_by_recurrence(&t, &c, 4).unwrap();
    let direct = lambda(&t, &c, 4).unwrap();
    println!(
        "Lambda_4 by recurrence vs direct: |diff|_F = {:.3e}",
        (&rec.matrix - &direct.matrix).frobenius_norm()
    );

    // Plain m-isometries: a Jordan block I + N with N^2 = 0 is a 3-isometry.
    let j = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
    for m in 1..=3 {
        println!("(I+N) is a {m}-isometry: {}", iso_defect(&j, m).unwrap().is_zero(&tol));
    }
    // E12 is not a quasi-isometry, but it is 2-quasi: E12^2 = 0.
    let e12 = ComplexMatrix::unit(2, 0, 1);
    println!("E12 1-quasi defect: {:?}", quasi_iso_defect(&e12, 1, 1).unwrap().matrix);
    println!("E12 2-quasi defect zero: {}", defect(&e12, None, 1, 2).unwrap().is_zero(&tol));
}
