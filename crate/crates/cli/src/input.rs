//! Matrix, sequence and vertex literals from the command line or an input file.

use std::fmt;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use btj_core::bttree::Vertex;
use btj_core::convergence::MatrixSequence;
use btj_core::localfield::{parse_element, FieldDesc};
use btj_core::sl2core::Mat2;
use btj_core::Error;

/// Bad input (exit 1) or a precision failure surfacing before any report exists (exit 2).
#[derive(Debug)]
pub struct UsageError {
    message: String,
    precision: bool,
}

impl UsageError {
    pub fn new(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            precision: false,
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.precision {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        Self {
            precision: e.is_precision_related(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    #[serde(default)]
    pub matrices: Vec<Value>,
    #[serde(default)]
    pub sequences: Vec<Value>,
    pub vertex: Option<Value>,
    pub exponents: Option<Vec<i64>>,
}

impl InputFile {
    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError::new(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| UsageError::new(format!("invalid input file {}: {e}", path.display())))
    }

    /// File matrices first, then command-line literals; at least `want` in total.
    pub fn matrices(
        &self,
        field: FieldDesc,
        lits: &[String],
        want: usize,
    ) -> Result<Vec<Mat2>, UsageError> {
        let mut out = Vec::new();
        for v in &self.matrices {
            out.push(matrix_from_value(v, &v.to_string(), field)?);
        }
        for lit in lits {
            out.push(parse_matrix(lit, field)?);
        }
        if out.len() < want {
            return Err(UsageError::new(format!(
                "expected {want} matrix literal(s), got {}",
                out.len()
            )));
        }
        Ok(out)
    }

    pub fn sequences(
        &self,
        field: FieldDesc,
        lits: &[String],
    ) -> Result<Vec<MatrixSequence>, UsageError> {
        let mut out = Vec::new();
        for v in &self.sequences {
            out.push(sequence_from_value(v, &v.to_string(), field)?);
        }
        for lit in lits {
            let v: Value = serde_json::from_str(lit)
                .map_err(|e| UsageError::new(format!("invalid sequence literal `{lit}`: {e}")))?;
            out.push(sequence_from_value(&v, lit, field)?);
        }
        if out.is_empty() {
            return Err(UsageError::new("expected a sequence literal"));
        }
        Ok(out)
    }
}

fn entries(v: &Value, lit: &str) -> Result<[[String; 2]; 2], UsageError> {
    let bad = || UsageError::new(format!("`{lit}` is not a 2x2 array of element literals"));
    let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
    let mut out: [[String; 2]; 2] = Default::default();
    for (i, row) in rows.iter().enumerate() {
        let cells = row.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
        for (j, cell) in cells.iter().enumerate() {
            out[i][j] = match cell {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(bad()),
            };
        }
    }
    Ok(out)
}

fn refs(e: &[[String; 2]; 2]) -> [[&str; 2]; 2] {
    [[&e[0][0], &e[0][1]], [&e[1][0], &e[1][1]]]
}

fn matrix_from_value(v: &Value, lit: &str, field: FieldDesc) -> Result<Mat2, UsageError> {
    let e = entries(v, lit)?;
    Mat2::from_literals(field, refs(&e))
        .map_err(|err| UsageError::new(format!("in matrix `{lit}`: {err}")))
}

pub fn parse_matrix(lit: &str, field: FieldDesc) -> Result<Mat2, UsageError> {
    let v: Value = serde_json::from_str(lit)
        .map_err(|e| UsageError::new(format!("invalid matrix literal `{lit}`: {e}")))?;
    matrix_from_value(&v, lit, field)
}

fn sequence_from_value(
    v: &Value,
    lit: &str,
    field: FieldDesc,
) -> Result<MatrixSequence, UsageError> {
    let missing = |k: &str| UsageError::new(format!("sequence `{lit}` lacks `{k}`"));
    let e = entries(v.get("entries").ok_or_else(|| missing("entries"))?, lit)?;
    let l = entries(v.get("limit").ok_or_else(|| missing("limit"))?, lit)?;
    MatrixSequence::parse(field, refs(&e), refs(&l))
        .map_err(|err| UsageError::new(format!("in sequence `{lit}`: {err}")))
}

pub fn parse_vertex(lit: &str, field: FieldDesc) -> Result<Vertex, UsageError> {
    #[derive(Deserialize)]
    struct Raw {
        level: i64,
        offset: Value,
    }
    let raw: Raw = serde_json::from_str(lit)
        .map_err(|e| UsageError::new(format!("invalid vertex literal `{lit}`: {e}")))?;
    let offset = match raw.offset {
        Value::String(s) => s,
        Value::Number(n) => n.to_string(),
        _ => {
            return Err(UsageError::new(format!(
                "vertex offset in `{lit}` must be a literal"
            )))
        }
    };
    let b = parse_element(&offset, field)?;
    Ok(Vertex::new(raw.level, &b)?)
}
