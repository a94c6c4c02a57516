//! Single theorem checks on hand-built instances.
//!
//!     cargo run --example constructions

use qik::construct::{
    check_multinomial, check_nilpotent_perturbation, check_power_gcd, check_power_theorem, check_product_theorem,
    gen_scalar_plus_nilpotent, ProductVariant,
};
use qik::report::VerificationReport;
use qik::{ComplexMatrix, Conjugation, TolerancePolicy, C64};

fn show(r: &VerificationReport) {
    let failed: Vec<&str> = r.hypotheses.iter().filter(|h| !h.pass).map(|h| h.name.as_str()).collect();
    println!(
        "{:<5} {:<14} expected {:?}, conclusion residual {:.2e}{}",
        r.theorem_id,
        format!("{:?}", r.outcome),
        r.conclusion.expected,
        r.conclusion.residual,
        if failed.is_empty() { String::new() } else { format!(", failed: {failed:?}") }
    );
}

fn main() {
    let tol = TolerancePolicy::default();
    let flip3 = Conjugation::flip(3);
    let j3 = Conjugation::entrywise(3);
    let id = ComplexMatrix::identity(3);
    let e13 = ComplexMatrix::unit(3, 0, 2);
    let u = &id + &e13;

    // Powers: I + E13 is (2, flip)-isometric and so is every power.
    show(&check_power_theorem(&u, &flip3, 2, 1, 3, &tol).unwrap());

    // Nilpotent perturbation: I is (1,C)-isometric, E13 has order 2.
    show(&check_nilpotent_perturbation(&id, &e13, &flip3, 1, None, &tol).unwrap());

    // Multinomial identity for T = I, Q = E13.
    show(&check_multinomial(&id, &e13, &j3, 3, &tol).unwrap());

    // T = -(I + N) with N^2 = 0 is a 3-isometry; T^2 = I + 2N is one too.
    let t = gen_scalar_plus_nilpotent(C64::new(-1.0, 0.0), 2, 3).unwrap();
    show(&check_power_gcd(&t, &j3, (2, 3), (3, 3), &tol).unwrap());

    // Products: A (x) I and I (x) B commute doubly; A is a 3-isometry, B a rotation.
    let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
    let b = ComplexMatrix::from_real_rows(&[&[0.6, -0.8], &[0.8, 0.6]]);
    let i2 = ComplexMatrix::identity(2);
    let (t, s) = (a.kron(&i2), i2.kron(&b));
    let j4 = Conjugation::entrywise(4);
    show(&check_product_theorem(&t, &s, &j4, (3, 0), (1, 0), ProductVariant::Symmetric, &tol).unwrap());
    // I + E13 and its flip image are not doubly commuting.
    show(&check_product_theorem(&u, &u, &flip3, (2, 0), (2, 0), ProductVariant::Stated, &tol).unwrap());
}
