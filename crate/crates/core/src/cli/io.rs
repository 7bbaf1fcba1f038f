//! Input files and JSON rendering.
//!
//! Rationals are always strings (`"3/2"`, `"-1"`); infinity is `"inf"`.

use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::arrangement::Arrangement;
use crate::error::Error;
use crate::linalg::{LinearMap, Matrix, Rational, Subspace};
use crate::schubert::{ExtendedPoint, ExtendedScalar};

/// Failure to read or parse user input; always exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub reason: &'static str,
    pub message: String,
}

impl InputError {
    pub fn new(reason: &'static str, message: impl Into<String>) -> Self {
        InputError {
            reason,
            message: message.into(),
        }
    }
}

/// A rational written either as a string or as a JSON integer.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawScalar {
    Text(String),
    Int(i64),
}

impl RawScalar {
    fn text(&self) -> String {
        match self {
            RawScalar::Text(s) => s.clone(),
            RawScalar::Int(i) => i.to_string(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrangementFile {
    ambient_dim: usize,
    normals: Vec<Vec<RawScalar>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubspaceEntry {
    basis: Vec<Vec<RawScalar>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhaFile {
    ambient_dim: usize,
    subspaces: Vec<SubspaceEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    source_dim: usize,
    target_dim: usize,
    matrix: Vec<Vec<RawScalar>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointFile {
    coords: Vec<RawScalar>,
}

/// Contents of an input file, discriminated by its keys.
#[derive(Debug, Clone)]
pub enum Input {
    /// Normals as given; construction (and its domain errors) is deferred.
    Arrangement {
        ambient_dim: usize,
        normals: Vec<Vec<Rational>>,
    },
    Pha {
        ambient_dim: usize,
        subspaces: Vec<Subspace>,
    },
}

impl Input {
    pub fn arrangement(&self) -> Result<Result<Arrangement, Error>, InputError> {
        match self {
            Input::Arrangement {
                ambient_dim,
                normals,
            } => Ok(Arrangement::new(*ambient_dim, normals.clone())),
            Input::Pha { .. } => Err(InputError::new(
                "expected-arrangement-file",
                "this command needs an arrangement file (keys ambient_dim, normals)",
            )),
        }
    }
}

pub fn parse_rational(text: &str) -> Result<Rational, InputError> {
    let trimmed = text.trim();
    let bad = || InputError::new("bad-rational", format!("cannot parse rational {text:?}"));
    if trimmed.is_empty() {
        return Err(bad());
    }
    // Ratio::from_str accepts "p/q"; reject zero denominators explicitly.
    if let Some((_, d)) = trimmed.split_once('/') {
        if d.trim_start_matches(['+', '-']).chars().all(|c| c == '0') {
            return Err(bad());
        }
    }
    Rational::from_str(trimmed).map_err(|_| bad())
}

pub fn parse_scalar(text: &str) -> Result<ExtendedScalar, InputError> {
    if text.trim() == "inf" {
        Ok(ExtendedScalar::Infinity)
    } else {
        parse_rational(text).map(ExtendedScalar::Finite)
    }
}

fn rationals(row: &[RawScalar]) -> Result<Vec<Rational>, InputError> {
    row.iter().map(|x| parse_rational(&x.text())).collect()
}

fn check_row(row: &[Rational], d: usize) -> Result<(), InputError> {
    if row.len() != d {
        return Err(InputError::new(
            "bad-shape",
            format!(
                "row of length {} where {d} entries were expected",
                row.len()
            ),
        ));
    }
    Ok(())
}

pub fn read_file(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path)
        .map_err(|e| InputError::new("io", format!("cannot read {}: {e}", path.display())))
}

fn parse_json(text: &str) -> Result<Value, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::new("bad-json", e.to_string()))
}

fn from_value<T: for<'de> Deserialize<'de>>(value: Value) -> Result<T, InputError> {
    serde_json::from_value(value).map_err(|e| InputError::new("bad-schema", e.to_string()))
}

pub fn parse_input(text: &str) -> Result<Input, InputError> {
    let value = parse_json(text)?;
    if value.get("normals").is_some() {
        let file: ArrangementFile = from_value(value)?;
        let normals = file
            .normals
            .iter()
            .map(|r| {
                let row = rationals(r)?;
                check_row(&row, file.ambient_dim)?;
                Ok(row)
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        Ok(Input::Arrangement {
            ambient_dim: file.ambient_dim,
            normals,
        })
    } else if value.get("subspaces").is_some() {
        let file: PhaFile = from_value(value)?;
        let d = file.ambient_dim;
        let subspaces = file
            .subspaces
            .iter()
            .map(|entry| {
                let rows = entry
                    .basis
                    .iter()
                    .map(|r| {
                        let row = rationals(r)?;
                        check_row(&row, d)?;
                        Ok(row)
                    })
                    .collect::<Result<Vec<_>, InputError>>()?;
                Ok(Subspace::span(d, rows).expect("rows checked"))
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        Ok(Input::Pha {
            ambient_dim: d,
            subspaces,
        })
    } else {
        Err(InputError::new(
            "bad-schema",
            "expected an arrangement file (normals) or a partial arrangement file (subspaces)",
        ))
    }
}

pub fn load_input(path: &Path) -> Result<Input, InputError> {
    parse_input(&read_file(path)?)
}

pub fn parse_map(text: &str) -> Result<LinearMap, InputError> {
    let file: MapFile = from_value(parse_json(text)?)?;
    let rows = file
        .matrix
        .iter()
        .map(|r| {
            let row = rationals(r)?;
            check_row(&row, file.source_dim)?;
            Ok(row)
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    if rows.len() != file.target_dim {
        return Err(InputError::new(
            "bad-shape",
            format!(
                "map matrix has {} rows but target_dim is {}",
                rows.len(),
                file.target_dim
            ),
        ));
    }
    let m = Matrix::from_rows(file.source_dim, rows).expect("rows checked");
    Ok(LinearMap::new(file.source_dim, file.target_dim, m).expect("shape checked"))
}

pub fn load_map(path: &Path) -> Result<LinearMap, InputError> {
    parse_map(&read_file(path)?)
}

/// Inline comma-separated point, e.g. `1,2,inf`. The empty string is the
/// point with no coordinates.
pub fn parse_inline_point(text: &str) -> Result<ExtendedPoint, InputError> {
    if text.trim().is_empty() {
        return Ok(ExtendedPoint::new(Vec::new()));
    }
    text.split(',')
        .map(parse_scalar)
        .collect::<Result<Vec<_>, _>>()
        .map(ExtendedPoint::new)
}

pub fn load_point(path: &Path) -> Result<ExtendedPoint, InputError> {
    let file: PointFile = from_value(parse_json(&read_file(path)?)?)?;
    file.coords
        .iter()
        .map(|c| parse_scalar(&c.text()))
        .collect::<Result<Vec<_>, _>>()
        .map(ExtendedPoint::new)
}

pub fn parse_inline_vector(text: &str) -> Result<Vec<Rational>, InputError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_rational).collect()
}

/// Comma-separated hyperplane indices; empty means the empty set.
pub fn parse_index_set(text: &str) -> Result<Vec<usize>, InputError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| InputError::new("bad-index", format!("cannot parse index {t:?}")))
        })
        .collect()
}

pub fn rational_json(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn vector_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

pub fn rows_json(rows: &[Vec<Rational>]) -> Value {
    Value::Array(rows.iter().map(|r| vector_json(r)).collect())
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(m.row_iter().map(vector_json).collect())
}

pub fn subspace_json(s: &Subspace) -> Value {
    json!({ "rank": s.rank(), "basis": matrix_json(s.basis()) })
}

pub fn point_json(p: &ExtendedPoint) -> Value {
    Value::Array(
        p.coords()
            .iter()
            .map(|c| Value::String(c.to_string()))
            .collect(),
    )
}

pub fn indices_json(indices: &[usize]) -> Value {
    json!(indices)
}

/// Machine-readable witness data for a domain error.
pub fn error_witness(e: &Error) -> Value {
    match e {
        Error::DimensionMismatch { expected, found } => {
            json!({ "expected": expected, "found": found })
        }
        Error::ShapeMismatch { rows, cols, found } => {
            json!({ "rows": rows, "cols": cols, "found": found })
        }
        Error::ZeroNormal { index } => json!({ "index": index }),
        Error::DuplicateHyperplane { first, second } => {
            json!({ "first": first, "second": second })
        }
        Error::NotAFlat { indices } => json!({ "indices": indices }),
        Error::NotAFlatSubspace { subspace } => json!({ "subspace": subspace_json(subspace) }),
        Error::NotAnOrderFilter { upper, lower } => {
            json!({ "upper": subspace_json(upper), "lower": subspace_json(lower) })
        }
        Error::InvalidMorphism { target, preimage } => {
            json!({ "target": target, "preimage": subspace_json(preimage) })
        }
        Error::IndexOutOfRange { index, size } => json!({ "index": index, "size": size }),
        Error::NotEssential | Error::InvalidPha | Error::NotAMember => Value::Null,
    }
}
