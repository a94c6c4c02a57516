//! Plain-text rendering of command results.

use std::fmt::Display;

use crate::defect::ClassificationReport;
use crate::linalg::{ComplexMatrix, C64};
use crate::report::VerificationReport;

/// Integers print as such; other values get six significant digits.
pub fn real(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{x}")
    } else if (1e-3..1e6).contains(&x.abs()) {
        format!("{}", (x * 1e6).round() / 1e6)
    } else {
        format!("{x:.5e}")
    }
}

pub fn complex(z: C64) -> String {
    if z.im == 0.0 {
        real(z.re)
    } else if z.re == 0.0 {
        format!("{}i", real(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", real(z.re), real(z.im.abs()))
    }
}

#[derive(Debug, Default)]
pub struct Table {
    lines: Vec<String>,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn row(&mut self, key: impl AsRef<str>, value: impl Display) {
        self.lines.push(format!("{:<22} {value}", key.as_ref()));
    }

    pub fn matrix(&mut self, label: &str, m: &ComplexMatrix) {
        self.lines.push(format!("{label} ({}x{}):", m.rows(), m.cols()));
        let cells: Vec<Vec<String>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| complex(m.get(i, j))).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
        for row in cells {
            let row: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            self.lines.push(format!("  [ {} ]", row.join("  ")));
        }
    }

    /// Membership grid: rows are `m`, columns `n`; `Y` marks membership.
    pub fn grid(&mut self, report: &ClassificationReport) {
        let header: String = (0..=report.n_max).map(|n| format!(" n={n:<3}")).collect();
        self.lines.push(format!("grid      {header}"));
        for m in 1..=report.m_max {
            let row: String = (0..=report.n_max)
                .map(|n| format!(" {:<5}", if report.verdict(m, n) { "Y" } else { "." }))
                .collect();
            self.lines.push(format!("  m={m:<6}{row}"));
        }
    }

    pub fn report(&mut self, r: &VerificationReport) {
        self.row("theorem", &r.theorem_id);
        for h in &r.hypotheses {
            self.lines.push(format!("  hypothesis {:<40} {:.3e} {}", h.name, h.residual, mark(h.pass)));
        }
        for c in &r.conclusion.parts {
            self.lines.push(format!("  conclusion {:<40} {:.3e} {}", c.name, c.residual, mark(c.pass)));
        }
        for n in &r.notes {
            self.lines.push(format!("  note: {n}"));
        }
        self.row("outcome", format!("{:?}", r.outcome));
    }

    pub fn append(&mut self, other: Table) {
        self.lines.extend(other.lines);
    }

    pub fn render(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

fn mark(pass: bool) -> &'static str {
    if pass {
        "ok"
    } else {
        "FAIL"
    }
}
