//! Driving the command-line layer from code: write input files, run a
//! job, read the report envelope.
//!
//!     cargo run --example cli_job

use qik::cli::io::{write_json, ConjugationFile, MatrixFile};
use qik::cli::{run, Command, ConjArg, Format, JobSpec};
use qik::{ComplexMatrix, Conjugation};

fn main() {
    let dir = std::env::temp_dir().join("qik-cli-job");
    std::fs::create_dir_all(&dir).unwrap();
    let t = &ComplexMatrix::identity(3) + &ComplexMatrix::unit(3, 0, 2);
    write_json(&dir.join("t.json"), &MatrixFile::from_matrix(&t)).unwrap();
    write_json(&dir.join("c.json"), &ConjugationFile::from_conjugation(&Conjugation::flip(3))).unwrap();

    let mut job = JobSpec::new(Command::Classify);
    job.matrix = Some(dir.join("t.json"));
    job.conj = Some(ConjArg::Custom(dir.join("c.json")));
    job.mmax = Some(4);
    job.nmax = Some(2);
    let out = run(&job).unwrap();
    print!("{}", out.rendered(Format::Table));
    println!("exit status {}", out.status.code());

    let mut job = JobSpec::new(Command::Verify);
    job.theorem = Some("th22".into());
    job.trials = 50;
    job.seed = 1;
    let out = run(&job).unwrap();
    let envelope: serde_json::Value = serde_json::from_str(&out.json).unwrap();
    println!("th22 summary: {}", envelope["result"][0]["summary"]);
}
