//! JSON instance files and substitution files.
//!
//! ```json
//! { "dimension": 5,
//!   "parameters": ["l1", "m1"],
//!   "basis": ["e0", "e1", "e2", "e3", "e4"],
//!   "brackets": [ {"left": "e1", "right": "e2", "result": {"e1": "l1", "e0": "2*m1"}} ],
//!   "phi":    {"e1": {"e3": "1"}, "e3": {"e1": "1"}},
//!   "xi":     {"e0": "1"},
//!   "eta":    {"e0": "1"},
//!   "metric": {"e0": {"e0": "1"}, "e1": {"e1": "1"}} }
//! ```
//!
//! `phi` maps a basis label to the column `φ e_label`; omitted entries,
//! columns and bracket pairs are zero.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::scalar::{parse_scalar, ParamSet, Scalar, ScalarError, Substitution};
use crate::structure::{LieAlgebraStructure, PiStructure, StructureError};
use crate::tensor::{Matrix, Vector};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON at line {line}, column {column}: {msg}")]
    Json {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("`dimension` is {declared} but {basis} basis labels are given")]
    DimensionMismatch { declared: usize, basis: usize },
    #[error("in {context}: {source}")]
    Scalar {
        context: String,
        source: ScalarError,
    },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        InputError::Json {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        }
    }
}

/// A scalar entry may be written as an expression string or a bare integer.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ScalarText {
    Text(String),
    Int(i64),
}

impl ScalarText {
    fn parse(&self, params: &ParamSet, context: impl Fn() -> String) -> Result<Scalar, InputError> {
        match self {
            ScalarText::Int(n) => Ok(Scalar::from_int(*n)),
            ScalarText::Text(t) => parse_scalar(t, params).map_err(|source| InputError::Scalar {
                context: context(),
                source,
            }),
        }
    }

    fn as_text(&self) -> String {
        match self {
            ScalarText::Int(n) => n.to_string(),
            ScalarText::Text(t) => t.clone(),
        }
    }
}

type Column = BTreeMap<String, ScalarText>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketEntry {
    left: String,
    right: String,
    result: Column,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    dimension: usize,
    #[serde(default)]
    parameters: Vec<String>,
    basis: Vec<String>,
    #[serde(default)]
    brackets: Vec<BracketEntry>,
    #[serde(default)]
    phi: BTreeMap<String, Column>,
    xi: Column,
    eta: Column,
    metric: BTreeMap<String, Column>,
}

/// Parsed but not yet validated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceInput {
    pub algebra: LieAlgebraStructure,
    pub structure: PiStructure,
}

struct Ctx<'a> {
    basis: &'a [String],
    params: &'a ParamSet,
}

impl Ctx<'_> {
    fn index(&self, label: &str) -> Result<usize, InputError> {
        self.basis
            .iter()
            .position(|b| b == label)
            .ok_or_else(|| StructureError::UnknownBasisLabel(label.to_string()).into())
    }

    fn vector(&self, col: &Column, what: &str) -> Result<Vector, InputError> {
        let mut v = Vector::zeros(self.basis.len());
        for (label, value) in col {
            let i = self.index(label)?;
            v.set(i, value.parse(self.params, || format!("{what}.{label}"))?);
        }
        Ok(v)
    }

    fn matrix(&self, cols: &BTreeMap<String, Column>, what: &str) -> Result<Matrix, InputError> {
        let mut m = Matrix::zeros(self.basis.len());
        for (outer, col) in cols {
            let j = self.index(outer)?;
            let v = self.vector(col, &format!("{what}.{outer}"))?;
            for (i, s) in v.nonzero() {
                // phi: outer label is the column; metric: g(outer, inner), symmetric by axiom
                if what == "phi" {
                    m.set(i, j, s.clone());
                } else {
                    m.set(j, i, s.clone());
                }
            }
        }
        Ok(m)
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceInput, InputError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    if file.dimension != file.basis.len() {
        return Err(InputError::DimensionMismatch {
            declared: file.dimension,
            basis: file.basis.len(),
        });
    }
    let params =
        ParamSet::new(file.parameters.iter().cloned()).map_err(|source| InputError::Scalar {
            context: "parameters".into(),
            source,
        })?;
    let ctx = Ctx {
        basis: &file.basis,
        params: &params,
    };
    let mut brackets = Vec::new();
    for b in &file.brackets {
        let (i, j) = (ctx.index(&b.left)?, ctx.index(&b.right)?);
        let v = ctx.vector(&b.result, &format!("brackets[{},{}]", b.left, b.right))?;
        brackets.push((i, j, v));
    }
    let algebra = LieAlgebraStructure::new(file.basis.clone(), params.clone(), brackets)?;
    let structure = PiStructure {
        phi: ctx.matrix(&file.phi, "phi")?,
        xi: ctx.vector(&file.xi, "xi")?,
        eta: ctx.vector(&file.eta, "eta")?,
        metric: ctx.matrix(&file.metric, "metric")?,
    };
    Ok(InstanceInput { algebra, structure })
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<InstanceInput, InputError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance(&text)
}

/// Substitution file: `{"name": "value", ...}` with rational values.
pub fn parse_substitution(text: &str, params: &ParamSet) -> Result<Substitution, InputError> {
    let raw: BTreeMap<String, ScalarText> = serde_json::from_str(text)?;
    let texts: Vec<(String, String)> = raw.iter().map(|(k, v)| (k.clone(), v.as_text())).collect();
    Substitution::from_pairs(params, texts.iter().map(|(k, v)| (k.as_str(), v.as_str()))).map_err(
        |source| InputError::Scalar {
            context: "substitution".into(),
            source,
        },
    )
}

pub fn read_substitution(
    path: impl AsRef<Path>,
    params: &ParamSet,
) -> Result<Substitution, InputError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_substitution(&text, params)
}
