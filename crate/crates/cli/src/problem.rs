//! Problem files: JSON with either the matrix form {"J", "u", "a"} or the
//! pole/residue form {"mu", "d", "a"}. Complex entries are [re, im] pairs.
//! Unknown keys are rejected.

use minkspec_core::Complex64;
use serde::{Deserialize, Serialize};

use minkspec_core::spectral::SpectralForm;
use minkspec_core::{validate_problem, BorderedPencil};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MatrixProblem {
    #[serde(rename = "J")]
    pub j: Vec<Vec<[f64; 2]>>,
    pub u: Vec<[f64; 2]>,
    pub a: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SpectralProblem {
    pub mu: Vec<f64>,
    pub d: Vec<f64>,
    pub a: f64,
}

/// A parsed problem file, one of the two admissible forms.
#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(untagged)]
pub enum ProblemFile {
    Matrix(MatrixProblem),
    Spectral(SpectralProblem),
}

/// The validated in-memory problem.
#[derive(Debug, Clone)]
pub enum Problem {
    Pencil(BorderedPencil),
    Spectral(SpectralForm),
}

/// Strict parse: exactly one of the two key sets, no unknown keys.
pub fn parse_problem(text: &str) -> Result<ProblemFile, CliError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| {
        CliError::Parse(format!(
            "invalid JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| CliError::Parse("top level must be a JSON object".into()))?;
    if obj.contains_key("J") {
        let m: MatrixProblem = serde_json::from_value(value)
            .map_err(|e| CliError::Parse(format!("matrix form: {e}")))?;
        Ok(ProblemFile::Matrix(m))
    } else if obj.contains_key("mu") {
        let s: SpectralProblem = serde_json::from_value(value)
            .map_err(|e| CliError::Parse(format!("spectral form: {e}")))?;
        Ok(ProblemFile::Spectral(s))
    } else {
        Err(CliError::Parse(
            "expected either keys {\"J\", \"u\", \"a\"} or {\"mu\", \"d\", \"a\"}".into(),
        ))
    }
}

/// Validate a parsed file into the in-memory problem.
pub fn realize(file: &ProblemFile) -> Result<Problem, CliError> {
    match file {
        ProblemFile::Matrix(m) => {
            let rows: Vec<Vec<Complex64>> =
                m.j.iter()
                    .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                    .collect();
            let u: Vec<Complex64> = m.u.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
            let pencil = validate_problem(&rows, &u, m.a)?;
            Ok(Problem::Pencil(pencil))
        }
        ProblemFile::Spectral(s) => {
            let form = SpectralForm::new(s.mu.clone(), s.d.clone(), s.a)?;
            Ok(Problem::Spectral(form))
        }
    }
}

impl Problem {
    /// The reduced spectral form of the problem.
    pub fn spectral_form(&self) -> Result<SpectralForm, CliError> {
        match self {
            Problem::Pencil(p) => Ok(minkspec_core::kalman_reduce(p)?.reduced),
            Problem::Spectral(f) => Ok(f.clone()),
        }
    }

    /// A pencil realizing the problem; spectral input is realized as
    /// `J = diag(μ)`, `u = √d`.
    pub fn pencil(&self) -> Result<BorderedPencil, CliError> {
        match self {
            Problem::Pencil(p) => Ok(p.clone()),
            Problem::Spectral(f) => {
                let m = f.poles().len();
                let rows: Vec<Vec<Complex64>> = (0..m)
                    .map(|i| {
                        (0..m)
                            .map(|j| {
                                if i == j {
                                    Complex64::new(f.poles()[i], 0.0)
                                } else {
                                    Complex64::new(0.0, 0.0)
                                }
                            })
                            .collect()
                    })
                    .collect();
                let u: Vec<Complex64> = f
                    .residues()
                    .iter()
                    .map(|&d| Complex64::new(d.sqrt(), 0.0))
                    .collect();
                Ok(validate_problem(&rows, &u, f.shift())?)
            }
        }
    }
}

pub fn serialize_problem(file: &ProblemFile) -> String {
    serde_json::to_string_pretty(file).expect("problem serialization cannot fail")
}
