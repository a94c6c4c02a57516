//! File-driven front end: one [`JobSpec`] in, one report out.
//!
//! Every report is a JSON envelope carrying the tool version, the tolerance
//! policy, the job parameters and the command result, plus a plain-text
//! table. Both are pure functions of the job, so identical jobs give
//! byte-identical files.

pub mod io;
mod table;

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::conjugation::Conjugation;
use crate::construct::generate::{gen_random_instance, random_complex, rng_from_seed, InstanceKind};
use crate::construct::suite::{run_suite, SuiteReport, TheoremId};
use crate::defect::{classify, defect, is_normaloid};
use crate::error::{Error, Result};
use crate::linalg::{norms, ComplexMatrix, TolerancePolicy};
use crate::report::Outcome;
use crate::sequence::{binomial_diff, moments, recurrence_residual, MomentSequence};
use crate::structure::{decompose, spectrum_report, verify_structure_forward};

use io::{read_conjugation, read_matrix, read_sequence, write_json, ConjugationFile, MatrixFile, MatrixInput};
use table::Table;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Default number of recurrence positions checked by `sequence`.
pub const DEFAULT_HORIZON: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Test one class membership: is the (n-quasi) defect of order m zero?
    Check,
    /// Membership over the grid 1..=mmax by 0..=nmax, with minimal pairs.
    Classify,
    /// Block form of T along R(T^n) ⊕ N(T*^n); with --conj and --m also
    /// verifies the structure theorem.
    Decompose,
    /// Eigenvalues, spectral radius, norms, normaloid flag.
    Spectrum,
    /// Generate a seeded instance of a known class.
    Construct,
    /// Run a seeded theorem suite (or list the suites).
    Verify,
    /// Binomial recurrence check on a moment sequence.
    Sequence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Unitary,
    ScalarPlusNilpotent,
    Assembled,
    Tensor,
}

/// `entrywise`, `flip` or `custom:<file>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConjArg {
    Entrywise,
    Flip,
    Custom(PathBuf),
}

impl std::str::FromStr for ConjArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "entrywise" => Ok(ConjArg::Entrywise),
            "flip" => Ok(ConjArg::Flip),
            _ => match s.strip_prefix("custom:") {
                Some(path) if !path.is_empty() => Ok(ConjArg::Custom(PathBuf::from(path))),
                _ => Err(format!("expected entrywise, flip or custom:<file>, got {s:?}")),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Parser)]
#[command(name = "qik", version, about = "Defects, classification and theorem checks for (m,C)-isometries")]
pub struct JobSpec {
    #[arg(value_enum)]
    pub command: Command,
    /// Matrix file.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Conjugation: entrywise, flip or custom:<file>. Omit for plain m-isometries.
    #[arg(long)]
    pub conj: Option<ConjArg>,
    /// Order m of the defect
    #[arg(long)]
    pub m: Option<u32>,
    /// Quasi order n (default 0)
    #[arg(long)]
    pub n: Option<u32>,
    /// Step r of the recurrence (`sequence`).
    #[arg(long)]
    pub k: Option<u32>,
    /// Largest m in the `classify` grid
    #[arg(long)]
    pub mmax: Option<u32>,
    /// Largest n in the `classify` grid
    #[arg(long)]
    pub nmax: Option<u32>,
    /// Suite id (see `verify --list`), or `all`.
    #[arg(long)]
    pub theorem: Option<String>,
    /// List the suites known to `verify`
    #[arg(long)]
    pub list: bool,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Overrides rel_zero (and QIK_DEFAULT_TOL).
    #[arg(long)]
    pub tol_rel: Option<f64>,
    /// Directory receiving report.json and report.txt.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Instance family for `construct`.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Block dimensions for `construct`, e.g. `3,2`.
    #[arg(long, value_delimiter = ',')]
    pub dims: Vec<usize>,
    /// Nilpotency order for `construct --kind scalar-plus-nilpotent`.
    #[arg(long)]
    pub p: Option<u32>,
    /// Sequence file (`sequence`): a list of [re, im] pairs.
    #[arg(long)]
    pub sequence: Option<PathBuf>,
    /// Recurrence positions checked by `sequence`.
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    pub horizon: usize,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            matrix: None,
            conj: None,
            m: None,
            n: None,
            k: None,
            mmax: None,
            nmax: None,
            theorem: None,
            list: false,
            trials: 200,
            seed: 0,
            tol_rel: None,
            out: None,
            format: Format::Table,
            kind: None,
            dims: Vec::new(),
            p: None,
            sequence: None,
            horizon: DEFAULT_HORIZON,
        }
    }
}

/// Process exit status of a job.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Success, or a true verdict.
    Ok,
    /// False verdict or counterexample.
    Negative,
    /// Input or hypothesis error.
    Error,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Negative => 1,
            Status::Error => 2,
        }
    }

    fn from_verdict(v: bool) -> Self {
        if v {
            Status::Ok
        } else {
            Status::Negative
        }
    }

    fn from_outcome(o: Outcome) -> Self {
        match o {
            Outcome::Pass => Status::Ok,
            Outcome::CounterExample => Status::Negative,
            Outcome::Inconclusive => Status::Error,
        }
    }
}

#[derive(Debug, Clone)]
pub struct JobOutput {
    pub status: Status,
    /// Pretty JSON envelope, newline terminated.
    pub json: String,
    pub table: String,
}

impl JobOutput {
    pub fn rendered(&self, format: Format) -> &str {
        match format {
            Format::Json => &self.json,
            Format::Table => &self.table,
        }
    }
}

/// Inputs after parsing; nothing is computed before all of them load.
struct Inputs {
    matrix: Option<MatrixInput>,
    conj: Option<Conjugation>,
    sequence: Option<MomentSequence>,
}

fn need<T: Copy>(v: Option<T>, flag: &str, command: Command) -> Result<T> {
    v.ok_or_else(|| Error::InvalidArgument(format!("{} needs --{flag}", command_name(command))))
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Check => "check",
        Command::Classify => "classify",
        Command::Decompose => "decompose",
        Command::Spectrum => "spectrum",
        Command::Construct => "construct",
        Command::Verify => "verify",
        Command::Sequence => "sequence",
    }
}

fn tolerance(job: &JobSpec) -> Result<TolerancePolicy> {
    let tol = TolerancePolicy::from_env()?;
    match job.tol_rel {
        Some(r) => tol.with_rel_zero(r),
        None => Ok(tol),
    }
}

fn load(job: &JobSpec) -> Result<Inputs> {
    let matrix = job.matrix.as_deref().map(read_matrix).transpose()?;
    if let Some(m) = &matrix {
        m.matrix.require_square()?;
    }
    let conj = match (&job.conj, &matrix) {
        (None, _) => None,
        (Some(ConjArg::Custom(path)), _) => Some(read_conjugation(path)?),
        (Some(_), None) => return Err(Error::InvalidArgument("--conj entrywise|flip needs --matrix".into())),
        (Some(ConjArg::Entrywise), Some(m)) => Some(Conjugation::entrywise(m.matrix.rows())),
        (Some(ConjArg::Flip), Some(m)) => Some(Conjugation::flip(m.matrix.rows())),
    };
    if let (Some(c), Some(m)) = (&conj, &matrix) {
        if c.dim() != m.matrix.rows() {
            return Err(Error::DimensionMismatch {
                op: "conjugation vs matrix",
                left: (c.dim(), c.dim()),
                right: m.matrix.shape(),
            });
        }
    }
    let sequence = job.sequence.as_deref().map(read_sequence).transpose()?;
    Ok(Inputs { matrix, conj, sequence })
}

fn matrix_of(inputs: &Inputs, command: Command) -> Result<&MatrixInput> {
    inputs
        .matrix
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument(format!("{} needs --matrix", command_name(command))))
}

/// Checks the flags a command needs, before any file is read.
fn validate(job: &JobSpec) -> Result<()> {
    let c = job.command;
    match c {
        Command::Check => {
            need(job.m, "m", c)?;
        }
        Command::Classify => {
            need(job.mmax, "mmax", c)?;
        }
        Command::Decompose => {
            need(job.n, "n", c)?;
            if job.conj.is_some() {
                need(job.m, "m", c)?;
            }
        }
        Command::Spectrum => {}
        Command::Construct => {
            need(job.kind, "kind", c)?;
            if job.dims.is_empty() {
                return Err(Error::InvalidArgument("construct needs --dims".into()));
            }
        }
        Command::Verify => {
            if !job.list {
                job.theorem
                    .as_deref()
                    .ok_or_else(|| Error::InvalidArgument("verify needs --theorem or --list".into()))?;
                theorem_ids(job)?;
            }
        }
        Command::Sequence => {
            need(job.m, "m", c)?;
            if job.sequence.is_none() && (job.matrix.is_none() || job.conj.is_none()) {
                return Err(Error::InvalidArgument(
                    "sequence needs --sequence, or --matrix with --conj".into(),
                ));
            }
        }
    }
    if matches!(c, Command::Check | Command::Classify | Command::Decompose | Command::Spectrum) {
        job.matrix
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("{} needs --matrix", command_name(c))))?;
    }
    Ok(())
}

fn theorem_ids(job: &JobSpec) -> Result<Vec<TheoremId>> {
    match job.theorem.as_deref() {
        Some("all") => Ok(TheoremId::ALL.to_vec()),
        Some(id) => Ok(vec![id.parse()?]),
        None => Ok(Vec::new()),
    }
}

struct Computed {
    status: Status,
    result: Value,
    table: Table,
}

/// Runs a job. Errors are returned rather than rendered; see [`execute`].
pub fn run(job: &JobSpec) -> Result<JobOutput> {
    validate(job)?;
    let tol = tolerance(job)?;
    let inputs = load(job)?;
    let out = match job.command {
        Command::Check => check(job, &inputs, &tol)?,
        Command::Classify => classify_cmd(job, &inputs, &tol)?,
        Command::Decompose => decompose_cmd(job, &inputs, &tol)?,
        Command::Spectrum => spectrum_cmd(&inputs, &tol)?,
        Command::Construct => construct_cmd(job)?,
        Command::Verify => verify_cmd(job, &tol)?,
        Command::Sequence => sequence_cmd(job, &inputs, &tol)?,
    };
    let envelope = json!({
        "tool": "qik",
        "version": VERSION,
        "command": job.command,
        "tolerance": tol,
        "params": params(job),
        "status": out.status,
        "result": out.result,
    });
    let mut json = serde_json::to_string_pretty(&envelope)?;
    json.push('\n');
    let mut table = Table::new();
    table.row("qik", VERSION);
    table.row("command", command_name(job.command));
    table.row(
        "tolerance",
        format!("rel_zero {:e}, rank_rel {:e}, eig_match {:e}", tol.rel_zero, tol.rank_rel, tol.eig_match),
    );
    table.append(out.table);
    Ok(JobOutput {
        status: out.status,
        json,
        table: table.render(),
    })
}

/// Job parameters as recorded in the report. Paths appear as given.
fn params(job: &JobSpec) -> Value {
    let mut v = serde_json::to_value(job).expect("job parameters serialize");
    if let Value::Object(map) = &mut v {
        map.remove("command");
        map.remove("out");
        map.remove("format");
        map.retain(|_, x| !x.is_null());
    }
    v
}

/// Runs a job, writes the report files, prints the chosen format and
/// returns the process exit code. Errors print to stderr with code 2.
pub fn execute(job: &JobSpec) -> i32 {
    let output = match run(job) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return Status::Error.code();
        }
    };
    if let Some(dir) = &job.out {
        if let Err(e) = write_reports(dir, &output) {
            eprintln!("error: {e}");
            return Status::Error.code();
        }
    }
    print!("{}", output.rendered(job.format));
    output.status.code()
}

pub fn write_reports(dir: &Path, output: &JobOutput) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("report.json"), &output.json)?;
    std::fs::write(dir.join("report.txt"), &output.table)?;
    Ok(())
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    serde_json::to_value(MatrixFile::from_matrix(m)).expect("matrix serializes")
}

fn check(job: &JobSpec, inputs: &Inputs, tol: &TolerancePolicy) -> Result<Computed> {
    let input = matrix_of(inputs, job.command)?;
    let (m, n) = (need(job.m, "m", job.command)?, job.n.unwrap_or(0));
    let c = inputs.conj.as_ref();
    let exact_symbol = match c {
        Some(c) => c.exact_symbol().map(Some),
        None => Some(None),
    };
    let mut table = Table::new();
    let class = class_label(m, n, c.is_some());
    table.row("class", &class);
    let (verdict, result) = match (&input.exact, exact_symbol) {
        (Some(t), Some(symbol)) => {
            let d = match &symbol {
                Some(s) => t.quasi_lambda(s, m, n)?,
                None => t.quasi_iso_defect(m, n)?,
            };
            let verdict = d.is_zero();
            table.row("path", "exact");
            table.matrix("defect", &d.to_complex());
            (
                verdict,
                json!({"path": "exact", "class": class, "m": m, "n": n, "defect": MatrixFile::exact(&d), "verdict": verdict}),
            )
        }
        _ => {
            let d = defect(&input.matrix, c, m, n)?;
            let verdict = d.is_zero(tol);
            table.row("path", "floating point");
            table.matrix("defect", &d.matrix);
            table.row("relative residual", format!("{:.3e}", d.residual()));
            (
                verdict,
                json!({"path": "float", "class": class, "m": m, "n": n, "defect": matrix_json(&d.matrix),
                       "scale": d.scale, "residual": d.residual(), "verdict": verdict}),
            )
        }
    };
    table.row("verdict", verdict);
    Ok(Computed {
        status: Status::from_verdict(verdict),
        result,
        table,
    })
}

fn class_label(m: u32, n: u32, conj: bool) -> String {
    let base = if conj { format!("({m},C)-isometry") } else { format!("{m}-isometry") };
    if n == 0 {
        base
    } else {
        format!("{n}-quasi-{base}")
    }
}

fn classify_cmd(job: &JobSpec, inputs: &Inputs, tol: &TolerancePolicy) -> Result<Computed> {
    let input = matrix_of(inputs, job.command)?;
    let (m_max, n_max) = (need(job.mmax, "mmax", job.command)?, job.nmax.unwrap_or(0));
    let report = classify(&input.matrix, inputs.conj.as_ref(), m_max, n_max, tol)?;
    let mut table = Table::new();
    table.grid(&report);
    let pairs: Vec<String> = report.minimal_pairs.iter().map(|(m, n)| format!("({m},{n})")).collect();
    table.row("minimal pairs", if pairs.is_empty() { "none".to_string() } else { pairs.join(" ") });
    table.row("T commutes with CTC", report.commutes_with_ctc);
    Ok(Computed {
        status: Status::from_verdict(!report.minimal_pairs.is_empty()),
        result: serde_json::to_value(&report)?,
        table,
    })
}

fn decompose_cmd(job: &JobSpec, inputs: &Inputs, tol: &TolerancePolicy) -> Result<Computed> {
    let input = matrix_of(inputs, job.command)?;
    let n = need(job.n, "n", job.command)?;
    let dec = decompose(&input.matrix, n, tol)?;
    let mut table = Table::new();
    table.row("rank of T^n", dec.rank);
    table.row("lower-left residual", format!("{:.3e}", dec.residual_lower_left));
    table.matrix("T1", &dec.t1);
    table.matrix("T2", &dec.t2);
    table.matrix("T3", &dec.t3);
    let mut result = json!({
        "n": n,
        "rank": dec.rank,
        "dense_range": dec.has_dense_range(),
        "basis": matrix_json(&dec.unitary()),
        "t1": matrix_json(&dec.t1),
        "t2": matrix_json(&dec.t2),
        "t3": matrix_json(&dec.t3),
        "residual_lower_left": dec.residual_lower_left,
    });
    let mut status = Status::Ok;
    if let Some(c) = &inputs.conj {
        let m = need(job.m, "m", job.command)?;
        let report = verify_structure_forward(&input.matrix, c, m, n, tol)?;
        table.report(&report);
        status = Status::from_outcome(report.outcome);
        result["structure"] = serde_json::to_value(&report)?;
    }
    Ok(Computed { status, result, table })
}

fn spectrum_cmd(inputs: &Inputs, tol: &TolerancePolicy) -> Result<Computed> {
    let t = &matrix_of(inputs, Command::Spectrum)?.matrix;
    let spec = spectrum_report(t)?;
    let nm = norms(t);
    let normaloid = is_normaloid(t, tol)?;
    let mut table = Table::new();
    for (i, z) in spec.eigenvalues.iter().enumerate() {
        table.row(format!("lambda_{}", i + 1), table::complex(*z));
    }
    table.row("spectral radius", table::real(spec.spectral_radius));
    table.row("spectral norm", table::real(nm.spectral));
    table.row("frobenius norm", table::real(nm.frobenius));
    table.row("normaloid", normaloid);
    Ok(Computed {
        status: Status::Ok,
        result: json!({"eigenvalues": spec.eigenvalues, "spectral_radius": spec.spectral_radius,
                       "norms": nm, "normaloid": normaloid}),
        table,
    })
}

fn construct_cmd(job: &JobSpec) -> Result<Computed> {
    let kind = match need(job.kind, "kind", job.command)? {
        Kind::Unitary => InstanceKind::Unitary,
        Kind::ScalarPlusNilpotent => InstanceKind::ScalarPlusNilpotent {
            p: need(job.p, "p", job.command)?,
        },
        Kind::Assembled => InstanceKind::Assembled {
            m: need(job.m, "m", job.command)?,
            n: need(job.n, "n", job.command)?,
        },
        Kind::Tensor => InstanceKind::Tensor,
    };
    let inst = gen_random_instance(kind, &job.dims, job.seed)?;
    let matrix = MatrixFile::from_matrix(&inst.t);
    let conj = ConjugationFile::from_conjugation(&inst.conjugation);
    if let Some(dir) = &job.out {
        std::fs::create_dir_all(dir)?;
        write_json(&dir.join("matrix.json"), &matrix)?;
        write_json(&dir.join("conj.json"), &conj)?;
    }
    let (m, n) = inst.declared;
    let mut table = Table::new();
    table.row("kind", format!("{kind:?}"));
    table.row("declared class", class_label(m, n, true));
    table.matrix("T", &inst.t);
    table.matrix("conjugation symbol", inst.conjugation.symbol());
    Ok(Computed {
        status: Status::Ok,
        result: json!({"kind": kind, "declared": [m, n], "seed": job.seed, "matrix": matrix, "conjugation": conj}),
        table,
    })
}

fn verify_cmd(job: &JobSpec, tol: &TolerancePolicy) -> Result<Computed> {
    let mut table = Table::new();
    if job.list {
        let list: Vec<Value> = TheoremId::ALL
            .iter()
            .map(|id| {
                table.row(id.label(), id.description());
                json!({"id": id.label(), "description": id.description()})
            })
            .collect();
        return Ok(Computed {
            status: Status::Ok,
            result: Value::Array(list),
            table,
        });
    }
    let reports: Vec<SuiteReport> = theorem_ids(job)?
        .into_iter()
        .map(|id| run_suite(id, job.trials, job.seed, tol))
        .collect::<Result<_>>()?;
    let mut status = Status::Ok;
    for r in &reports {
        let s = &r.summary;
        table.row(
            &s.theorem_id,
            format!(
                "{}/{} pass, {} inconclusive, {} counterexamples, max residuals: hypotheses {:.2e}, conclusion {:.2e}",
                s.passed, s.trials, s.inconclusive, s.counterexamples, s.max_hypothesis_residual, s.max_conclusion_residual
            ),
        );
        if s.counterexamples > 0 {
            status = Status::Negative;
        } else if s.inconclusive > 0 && status == Status::Ok {
            status = Status::Error;
        }
    }
    Ok(Computed {
        status,
        result: serde_json::to_value(&reports)?,
        table,
    })
}

fn sequence_cmd(job: &JobSpec, inputs: &Inputs, tol: &TolerancePolicy) -> Result<Computed> {
    let m = need(job.m, "m", job.command)?;
    let r = job.k.unwrap_or(1);
    let len = r as usize * m as usize + job.horizon;
    let seq = match (&inputs.sequence, &inputs.matrix, &inputs.conj) {
        (Some(s), _, _) => s.clone(),
        (None, Some(t), Some(c)) => {
            let mut rng = rng_from_seed(job.seed);
            let x = random_complex(t.matrix.rows(), 1, 1.0, &mut rng).entries_row_major();
            // Quasi classes constrain the moments of T^n x only.
            let x = t.matrix.pow(job.n.unwrap_or(0))?.apply(&x)?;
            moments(&t.matrix, c, &x, len)?
        }
        _ => return Err(Error::InvalidArgument("sequence needs --sequence, or --matrix with --conj".into())),
    };
    let horizon = seq.len().saturating_sub(r as usize * m as usize).min(job.horizon);
    if horizon == 0 {
        return Err(Error::InvalidArgument(format!(
            "sequence of length {} is too short for order {m} and step {r}",
            seq.len()
        )));
    }
    let residual = recurrence_residual(&seq, m, r, horizon - 1)?;
    let diffs: Vec<_> = (0..horizon).map(|j| binomial_diff(&seq, m, r, j)).collect::<Result<_>>()?;
    let verdict = residual <= tol.rel_zero;
    let mut table = Table::new();
    table.row("recurrence", format!("order {m}, step {r}, positions 0..{horizon}"));
    for (j, d) in diffs.iter().enumerate() {
        table.row(format!("diff_{j}"), table::complex(*d));
    }
    table.row("relative residual", format!("{residual:.3e}"));
    table.row("verdict", verdict);
    Ok(Computed {
        status: Status::from_verdict(verdict),
        result: json!({"m": m, "r": r, "horizon": horizon, "sequence": seq, "differences": diffs,
                       "residual": residual, "verdict": verdict}),
        table,
    })
}
