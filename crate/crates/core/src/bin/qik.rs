use clap::Parser;
use qik::cli::{execute, JobSpec};

fn main() {
    std::process::exit(execute(&JobSpec::parse()));
}
