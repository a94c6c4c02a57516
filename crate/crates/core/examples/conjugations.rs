//! Conjugations as symmetric unitary symbols: construction, validation,
//! CTC, direct sums, tensor products and splitting along a subspace.
//!
//!     cargo run --example conjugations

use qik::construct::generate::{random_conjugation, rng_from_seed};
use qik::{ComplexMatrix, Conjugation, Error, TolerancePolicy, C64};

fn main() {
    let tol = TolerancePolicy::default();
    let flip = Conjugation::flip(3);
    let x = [C64::new(1.0, 2.0), C64::new(0.0, -1.0), C64::new(3.0, 0.0)];
    println!("flip(x) = {:?}", flip.apply(&x).unwrap());

    let t = &ComplexMatrix::identity(3) + &ComplexMatrix::unit(3, 0, 2);
    println!("flip: C(I+E13)C = {:?}", flip.conj_similarity(&t).unwrap());

    // C2 = -I is not a conjugation.
    let bad = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
    match Conjugation::new(bad) {
        Err(Error::NotInvolutive { residual }) => println!("[[0,1],[-1,0]] rejected, |S conj(S) - I|_F = {residual}"),
        other => println!("unexpected: {other:?}"),
    }

    let mut rng = rng_from_seed(4);
    let c = random_conjugation(2, &mut rng);
    println!("random symbol {:?}", c.symbol());
    println!("direct sum dim {}, tensor dim {}", c.direct_sum(&flip).dim(), c.tensor(&flip).dim());

    // entrywise splits along span{e1}; flip does not.
    let e1 = ComplexMatrix::from_real_rows(&[&[1.0], &[0.0]]);
    let split = Conjugation::entrywise(2).split_along(&e1, &tol).unwrap();
    println!("entrywise splits along e1, residual {}", split.residual);
    match Conjugation::flip(2).split_along(&e1, &tol) {
        Err(Error::NotReducing { residual }) => println!("flip does not split along e1, residual {residual}"),
        other => println!("unexpected: {other:?}"),
    }
}
