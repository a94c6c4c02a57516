//! Seeded randomized verification of every closure theorem.
//!
//!     cargo run --release --example theorem_suites -- [trials] [seed]

use qik::construct::{run_suite, TheoremId};
use qik::TolerancePolicy;

fn main() {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(11);
    let tol = TolerancePolicy::default();
    for id in TheoremId::ALL {
        let s = run_suite(id, trials, seed, &tol).unwrap().summary;
        println!(
            "{:<6} {:>4}/{:<4} inconclusive {:<3} counterexamples {:<3} max residual {:.2e}  {}",
            s.theorem_id,
            s.passed,
            s.trials,
            s.inconclusive,
            s.counterexamples,
            s.max_conclusion_residual,
            id.description()
        );
    }
}
