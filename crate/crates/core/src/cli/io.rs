//! File formats read and written by the command-line front end.
//!
//! Matrices: `{"rows": r, "cols": c, "data": [[re, im], ...], "exact": bool}`
//! with `data` in row-major order. Conjugations:
//! `{"kind": "entrywise" | "flip" | "custom", "dim": n, "symbol": [[re, im], ...]}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::conjugation::{Conjugation, ConjugationKind};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ExactMatrix, C64};
use crate::sequence::MomentSequence;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub exact: bool,
}

/// A parsed matrix plus its exact copy when the file asked for one.
#[derive(Debug, Clone)]
pub struct MatrixInput {
    pub matrix: ComplexMatrix,
    pub exact: Option<ExactMatrix>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.entries_row_major().iter().map(|z| [z.re, z.im]).collect(),
            exact: false,
        }
    }

    pub fn exact(m: &ExactMatrix) -> Self {
        Self {
            exact: true,
            ..Self::from_matrix(&m.to_complex())
        }
    }

    pub fn to_input(&self) -> Result<MatrixInput> {
        let entries = self.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        let matrix = ComplexMatrix::from_row_major(self.rows, self.cols, entries)?;
        let exact = if self.exact {
            Some(ExactMatrix::from_complex(&matrix).ok_or_else(|| {
                Error::Format("\"exact\": true requires integer real and imaginary parts".into())
            })?)
        } else {
            None
        };
        Ok(MatrixInput { matrix, exact })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugationFile {
    pub kind: ConjugationKind,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<Vec<[f64; 2]>>,
}

impl ConjugationFile {
    pub fn from_conjugation(c: &Conjugation) -> Self {
        let symbol = (c.kind() == ConjugationKind::Custom)
            .then(|| c.symbol().entries_row_major().iter().map(|z| [z.re, z.im]).collect());
        Self {
            kind: c.kind(),
            dim: c.dim(),
            symbol,
        }
    }

    pub fn to_conjugation(&self) -> Result<Conjugation> {
        match (self.kind, &self.symbol) {
            (ConjugationKind::Entrywise, None) => Ok(Conjugation::entrywise(self.dim)),
            (ConjugationKind::Flip, None) => Ok(Conjugation::flip(self.dim)),
            (ConjugationKind::Custom, Some(raw)) => {
                let entries = raw.iter().map(|&[re, im]| C64::new(re, im)).collect();
                Conjugation::new(ComplexMatrix::from_row_major(self.dim, self.dim, entries)?)
            }
            (ConjugationKind::Custom, None) => Err(Error::Format("custom conjugation needs a \"symbol\"".into())),
            (_, Some(_)) => Err(Error::Format("only custom conjugations carry a \"symbol\"".into())),
        }
    }
}

/// A sequence file is either a bare list of `[re, im]` pairs or a full
/// serialized [`MomentSequence`].
#[derive(Deserialize)]
#[serde(untagged)]
enum SequenceFile {
    Bare(Vec<[f64; 2]>),
    Full(MomentSequence),
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Result<MatrixInput> {
    read_json::<MatrixFile>(path)?
        .to_input()
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// Reads a conjugation file. Symbol validation errors, such as
/// [`Error::NotInvolutive`], pass through unchanged.
pub fn read_conjugation(path: &Path) -> Result<Conjugation> {
    read_json::<ConjugationFile>(path)?.to_conjugation()
}

pub fn read_sequence(path: &Path) -> Result<MomentSequence> {
    Ok(match read_json::<SequenceFile>(path)? {
        SequenceFile::Bare(raw) => MomentSequence::custom(raw.into_iter().map(|[re, im]| C64::new(re, im)).collect()),
        SequenceFile::Full(seq) => seq,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let m = ComplexMatrix::from_complex_rows(&[&[C64::new(1.0, -2.0), C64::new(0.5, 0.0)]]);
        let f = MatrixFile::from_matrix(&m);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"rows":1,"cols":2,"data":[[1.0,-2.0],[0.5,0.0]]}"#);
        let back: MatrixFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_input().unwrap().matrix, m);
    }

    #[test]
    fn exact_flag_needs_integers() {
        let f = MatrixFile {
            rows: 1,
            cols: 1,
            data: vec![[0.5, 0.0]],
            exact: true,
        };
        assert!(matches!(f.to_input(), Err(Error::Format(_))));
        let f = MatrixFile {
            data: vec![[3.0, -1.0]],
            ..f
        };
        assert!(f.to_input().unwrap().exact.is_some());
    }

    #[test]
    fn entry_count_is_checked() {
        let f = MatrixFile {
            rows: 2,
            cols: 2,
            data: vec![[1.0, 0.0]],
            exact: false,
        };
        assert!(matches!(f.to_input(), Err(Error::EntryCount { expected: 4, got: 1 })));
    }

    #[test]
    fn conjugation_files() {
        let f: ConjugationFile = serde_json::from_str(r#"{"kind":"flip","dim":3}"#).unwrap();
        assert_eq!(f.to_conjugation().unwrap(), Conjugation::flip(3));
        let bad: ConjugationFile =
            serde_json::from_str(r#"{"kind":"custom","dim":2,"symbol":[[0,0],[1,0],[-1,0],[0,0]]}"#).unwrap();
        match bad.to_conjugation() {
            Err(Error::NotInvolutive { residual }) => assert!((residual - 2.0 * 2f64.sqrt()).abs() < 1e-12),
            other => panic!("expected NotInvolutive, got {other:?}"),
        }
        let c = Conjugation::flip(2);
        let f = ConjugationFile::from_conjugation(&c);
        assert_eq!(f.to_conjugation().unwrap(), c);
    }
}
