//! Instance generators and executable checks of the closure theorems.

pub mod generate;
pub mod suite;
pub mod theorems;

pub use generate::{gen_random_instance, gen_scalar_plus_nilpotent, InstanceKind, RandomInstance};
pub use suite::{run_suite, run_trial, SuiteReport, SuiteSummary, TheoremId, TrialRecord};
pub use theorems::{
    check_dense_range, check_escalation, check_multinomial, check_nilpotent_perturbation, check_order_escalation,
    check_power_bounded_reduction, check_power_gcd, check_power_theorem, check_product_theorem, check_tensor,
    check_tensor_lemma, check_tensor_theorem, multinomial_lambda, ProductVariant, TensorCheck,
};
