use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::linalg::{ComplexMatrix, ComplexVector, Subsystem};
use crate::tolerance::Tolerances;

pub type Pair = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    General,
    Filtering,
    TwoQubit,
}

/// Request for a seeded random instance instead of explicit states.
/// `general` uses `dim`, `filtering` uses `d` and `dim`, `two-qubit` uses `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub herm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orth: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resid: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eig: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            herm: self.herm.unwrap_or(base.herm),
            norm: self.norm.unwrap_or(base.norm),
            orth: self.orth.unwrap_or(base.orth),
            resid: self.resid.unwrap_or(base.resid),
            eig: self.eig.unwrap_or(base.eig),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho1: Option<Vec<Vec<Pair>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho2: Option<Vec<Vec<Pair>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<Vec<Pair>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsystem: Option<Subsystem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ProblemFile {
    /// Parses a problem document. Errors carry the JSON path of the offending
    /// field and the line/column reported by the JSON reader.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." || path.is_empty() {
                CliError::Parse(inner.to_string())
            } else {
                CliError::Parse(format!("field `{path}`: {inner}"))
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem file serialises")
    }
}

pub(crate) fn to_complex(p: &Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub(crate) fn to_pair(z: &Complex64) -> Pair {
    [z.re, z.im]
}

pub(crate) fn require<'a, T>(field: &'a Option<T>, name: &str, mode: &str) -> Result<&'a T, CliError> {
    field.as_ref().ok_or_else(|| CliError::Parse(format!("field `{name}`: required in {mode} mode")))
}

pub(crate) fn parse_matrix(rows: &[Vec<Pair>], name: &str) -> Result<ComplexMatrix, CliError> {
    ComplexMatrix::from_rows(rows.iter().map(|r| r.iter().map(to_complex).collect()).collect())
        .map_err(|e| CliError::Parse(format!("field `{name}`: {e}")))
}

pub(crate) fn parse_vector(entries: &[Pair], name: &str) -> Result<ComplexVector, CliError> {
    ComplexVector::new(entries.iter().map(to_complex).collect())
        .map_err(|e| CliError::Parse(format!("field `{name}`: {e}")))
}

pub(crate) fn matrix_pairs(m: &ComplexMatrix) -> Vec<Vec<Pair>> {
    m.rows().map(|r| r.iter().map(to_pair).collect()).collect()
}

pub(crate) fn vector_pairs(v: &ComplexVector) -> Vec<Pair> {
    v.entries().iter().map(to_pair).collect()
}
