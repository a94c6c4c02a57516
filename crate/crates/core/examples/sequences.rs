//! Moment sequences and the binomial recurrences they satisfy.
//!
//!     cargo run --example sequences

use qik::construct::generate::{j_isometry, rng_from_seed};
use qik::sequence::{binomial_diff, gcd_min_reduction, moments, satisfies_recurrence, MomentSequence};
use qik::{Conjugation, TolerancePolicy, C64};

fn main() {
    let tol = TolerancePolicy::default();

    // a_j = 1 + 2j - j^2 has degree 2, so it satisfies the order-3 recurrence at every step.
    let a = MomentSequence::polynomial(&[1.0, 2.0, -1.0], 20);
    for (m, r) in [(2, 1), (3, 1), (3, 2), (3, 4)] {
        println!("polynomial, order {m} step {r}: {}", satisfies_recurrence(&a, m, r, 6, &tol).unwrap());
    }
    let g = MomentSequence::geometric(C64::new(2.0, 0.0), 12);
    println!("2^j, order 1 step 1: diff_0 = {}", binomial_diff(&g, 1, 1, 0).unwrap());

    // Moments of an (m,J)-isometry.
    let mut rng = rng_from_seed(3);
    let (t, m) = j_isometry(4, 3, &mut rng);
    let c = Conjugation::entrywise(4);
    let x = [C64::new(1.0, 0.5), C64::new(-0.2, 0.0), C64::new(0.0, 1.0), C64::new(0.3, -0.7)];
    let mo = moments(&t, &c, &x, 16).unwrap();
    println!("moments of a ({m},J)-isometry satisfy order {m}: {}", satisfies_recurrence(&mo, m, 1, 8, &tol).unwrap());

    // Orders (m, r) and (l, s) reduce to (min, gcd).
    let red = gcd_min_reduction(&mo, (m, 2), (m + 1, 3), 4, &tol).unwrap();
    println!(
        "gcd reduction: order {} step {}, outcome {:?}, swapped-form residual {:.1e}",
        red.order,
        red.step,
        red.report.outcome,
        red.swapped_form.map_or(0.0, |z| z.norm())
    );
}
