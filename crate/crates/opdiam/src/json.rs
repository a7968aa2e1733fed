//! JSON formats for matrices and maps.
//!
//! A matrix is `{"rows": n, "cols": m, "re": [[...]], "im": [[...]]}` in
//! row-major order, with `im` optional for real matrices. A map is
//! `{"dim_in": n, "dim_out": m, "kind": "choi" | "kraus" | "transfer",
//! "data": ...}` where `data` is a matrix for `choi` and `transfer` and
//! `{"plus": [...], "minus": [...]}` for `kraus`.
//!
//! Numbers are written in shortest round-trip form, so a written matrix
//! parses back to bit-identical values.

use opdiam_core::{ComplexMatrix, SuperOp, C64};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{}{message} at line {line}, column {column}", field_prefix(path))]
    Syntax {
        path: String,
        message: String,
        line: usize,
        column: usize,
    },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error(transparent)]
    Core(#[from] opdiam_core::Error),
}

/// serde_path_to_error reports `?` or `.` when the error is not inside a field.
fn field_prefix(path: &str) -> String {
    if path == "?" || path == "." {
        String::new()
    } else {
        format!("{path}: ")
    }
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Choi,
    Kraus,
    Transfer,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperOpJson {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kind: MapKind,
    pub data: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrausJson {
    #[serde(default)]
    pub plus: Vec<MatrixJson>,
    #[serde(default)]
    pub minus: Vec<MatrixJson>,
}

impl MatrixJson {
    pub fn from_matrix(a: &ComplexMatrix) -> Self {
        let (r, c) = a.shape();
        let part = |f: fn(&C64) -> f64| (0..r).map(|i| a.row(i).iter().map(f).collect()).collect();
        // `-0.0` imaginary parts must survive the round trip, so only
        // bitwise `+0.0` counts as absent.
        let real = a.data().iter().all(|z| z.im.to_bits() == 0);
        MatrixJson {
            rows: r,
            cols: c,
            re: part(|z| z.re),
            im: (!real).then(|| part(|z| z.im)),
        }
    }

    /// Checks the shape against `rows` and `cols`; `field` prefixes error
    /// messages.
    pub fn to_matrix(&self, field: &str) -> Result<ComplexMatrix, FormatError> {
        check_grid(&self.re, self.rows, self.cols, &format!("{field}re"))?;
        if let Some(im) = &self.im {
            check_grid(im, self.rows, self.cols, &format!("{field}im"))?;
        }
        let data = (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .map(|(i, j)| C64::new(self.re[i][j], self.im.as_ref().map_or(0.0, |im| im[i][j])))
            .collect();
        Ok(ComplexMatrix::new(self.rows, self.cols, data)?)
    }
}

fn check_grid(grid: &[Vec<f64>], rows: usize, cols: usize, field: &str) -> Result<(), FormatError> {
    if grid.len() != rows {
        return Err(invalid(field, format!("expected {rows} rows, found {}", grid.len())));
    }
    for (i, row) in grid.iter().enumerate() {
        if row.len() != cols {
            return Err(invalid(
                format!("{field}[{i}]"),
                format!("expected {cols} entries, found {}", row.len()),
            ));
        }
    }
    Ok(())
}

fn from_str_with_path<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        FormatError::Syntax {
            path,
            message: strip_position(&inner),
            line: inner.line(),
            column: inner.column(),
        }
    })
}

fn from_value_with_path<T: serde::de::DeserializeOwned>(value: &Value, prefix: &str) -> Result<T, FormatError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." {
            prefix.to_string()
        } else {
            format!("{prefix}.{path}")
        };
        invalid(field, e.into_inner().to_string())
    })
}

/// serde_json appends " at line L column C"; the position is reported
/// separately.
fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(k) => s[..k].to_string(),
        None => s,
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, FormatError> {
    from_str_with_path::<MatrixJson>(text)?.to_matrix("")
}

pub fn parse_superop(text: &str) -> Result<SuperOp, FormatError> {
    let doc: SuperOpJson = from_str_with_path(text)?;
    let (n, m) = (doc.dim_in, doc.dim_out);
    if n == 0 || m == 0 {
        return Err(invalid(if n == 0 { "dim_in" } else { "dim_out" }, "must be positive"));
    }
    let expect = |a: &ComplexMatrix, rows: usize, cols: usize, field: &str| {
        if a.shape() == (rows, cols) {
            Ok(())
        } else {
            Err(invalid(
                field,
                format!(
                    "expected a {rows}x{cols} matrix for dim_in = {n}, dim_out = {m}, found {}x{}",
                    a.rows(),
                    a.cols()
                ),
            ))
        }
    };
    match doc.kind {
        MapKind::Choi => {
            let c = from_value_with_path::<MatrixJson>(&doc.data, "data")?.to_matrix("data.")?;
            expect(&c, n * m, n * m, "data")?;
            Ok(SuperOp::from_choi(n, m, c)?)
        }
        MapKind::Transfer => {
            let t = from_value_with_path::<MatrixJson>(&doc.data, "data")?.to_matrix("data.")?;
            expect(&t, m * m, n * n, "data")?;
            Ok(SuperOp::from_transfer(n, m, &t)?)
        }
        MapKind::Kraus => {
            let k: KrausJson = from_value_with_path(&doc.data, "data")?;
            let load = |list: &[MatrixJson], name: &str| -> Result<Vec<ComplexMatrix>, FormatError> {
                list.iter()
                    .enumerate()
                    .map(|(i, mj)| {
                        let field = format!("data.{name}[{i}]");
                        let a = mj.to_matrix(&format!("{field}."))?;
                        expect(&a, m, n, &field)?;
                        Ok(a)
                    })
                    .collect()
            };
            let plus = load(&k.plus, "plus")?;
            let minus = load(&k.minus, "minus")?;
            Ok(SuperOp::from_kraus(n, m, &plus, &minus)?)
        }
    }
}

pub fn matrix_value(a: &ComplexMatrix) -> Value {
    serde_json::to_value(MatrixJson::from_matrix(a)).expect("matrix serializes")
}

/// Choi form of a map.
pub fn superop_value(phi: &SuperOp) -> Value {
    serde_json::to_value(SuperOpJson {
        dim_in: phi.dim_in(),
        dim_out: phi.dim_out(),
        kind: MapKind::Choi,
        data: matrix_value(phi.choi()),
    })
    .expect("map serializes")
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

/// Finite numbers as JSON numbers, infinities as the strings `"inf"` and
/// `"-inf"`, NaN as `null`.
pub fn real(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::Null
    } else if x > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

pub fn complex(z: C64) -> Value {
    Value::Array(vec![real(z.re), real(z.im)])
}

pub fn vector(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|&z| complex(z)).collect())
}
