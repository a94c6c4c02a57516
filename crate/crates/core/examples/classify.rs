//! Membership grid and minimal pairs for a few matrices.
//!
//!     cargo run --example classify

use qik::defect::classify;
use qik::{ComplexMatrix, Conjugation, TolerancePolicy};

fn print_grid(label: &str, t: &ComplexMatrix, c: Option<&Conjugation>) {
    let tol = TolerancePolicy::default();
    let r = classify(t, c, 4, 3, &tol).unwrap();
    println!("{label}");
    for m in 1..=r.m_max {
        let row: String = (0..=r.n_max).map(|n| if r.verdict(m, n) { " Y" } else { " ." }).collect();
        println!("  m={m} {row}");
    }
    println!("  minimal pairs {:?}, T commutes with CTC: {}", r.minimal_pairs, r.commutes_with_ctc);
}

fn main() {
    let u = &ComplexMatrix::identity(3) + &ComplexMatrix::unit(3, 0, 2);
    print_grid("I + E13, flip", &u, Some(&Conjugation::flip(3)));
    print_grid("I + E13, entrywise", &u, Some(&Conjugation::entrywise(3)));
    print_grid("I + E13, plain", &u, None);

    // Invertible and diagonalisable, with T^3 = -I: no cell of the grid holds.
    let t = ComplexMatrix::from_real_rows(&[&[-1.0, -1.0], &[3.0, 2.0]]);
    print_grid("[[-1,-1],[3,2]], flip", &t, Some(&Conjugation::flip(2)));

    // A nilpotent block makes the quasi columns light up.
    let n = ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]]);
    print_grid("1 (+) shift, entrywise", &n, Some(&Conjugation::entrywise(3)));
}
