// SPDX-License-Identifier: Apache-2.0

//! JSON formats for algebras, symmetric and Legendrian algebras, and
//! reports, with a canonical writer for byte-reproducible output.
//!
//! Lie-algebra JSON lists the structure constants for `i < j` only:
//!
//! ```json
//! { "dim": 3, "labels": ["e1", "e2", "e3"],
//!   "brackets": [ { "i": 0, "j": 1, "coeffs": { "2": 1.0 } } ] }
//! ```
//!
//! Indices are zero-based. Symmetric-algebra JSON adds `"involution"`, a
//! row-major `n x n` matrix; Legendrian JSON further adds `"lambda"` and an
//! optional `"inner"` on the `g`-factor.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::decomposition::DecompositionResult;
use crate::error::{Error, Result};
use crate::legendrian::LegendrianSymmetricAlgebra;
use crate::lie::{BilinearForm, LieAlgebra, LinearOperator};
use crate::linalg::Mat;
use crate::report::ResidualReport;
use crate::symmetric::SymmetricLieAlgebra;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketEntry {
    i: usize,
    j: usize,
    coeffs: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
struct AlgebraDoc {
    dim: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
    brackets: Vec<BracketEntry>,
}

/// Parses the Lie-algebra format. Only antisymmetry is enforced by
/// construction; the Jacobi identity is left to the caller to check.
pub fn algebra_from_json(v: &Value) -> Result<LieAlgebra> {
    let doc: AlgebraDoc = serde_json::from_value(v.clone())?;
    let n = doc.dim;
    if n == 0 {
        return Err(Error::Format("dim must be positive".into()));
    }
    let labels = match doc.labels {
        Some(l) if l.len() != n => {
            return Err(Error::Format(format!("{} labels for dim {n}", l.len())));
        }
        Some(l) => l,
        None => (1..=n).map(|i| format!("e{i}")).collect(),
    };
    let mut c = vec![0.0; n * n * n];
    let mut seen = std::collections::BTreeSet::new();
    for entry in &doc.brackets {
        let (i, j) = (entry.i, entry.j);
        if i >= j {
            return Err(Error::Format(format!(
                "bracket entries need i < j, got i = {i}, j = {j}"
            )));
        }
        if j >= n {
            return Err(Error::Format(format!("bracket index {j} out of range for dim {n}")));
        }
        if !seen.insert((i, j)) {
            return Err(Error::Format(format!("duplicate bracket entry ({i}, {j})")));
        }
        for (key, &val) in &entry.coeffs {
            let k: usize = key
                .parse()
                .map_err(|_| Error::Format(format!("coefficient key '{key}' is not an index")))?;
            if k >= n {
                return Err(Error::Format(format!("coefficient index {k} out of range for dim {n}")));
            }
            if !val.is_finite() {
                return Err(Error::Format(format!("non-finite coefficient at ({i}, {j}, {k})")));
            }
            c[(i * n + j) * n + k] = val;
            c[(j * n + i) * n + k] = -val;
        }
    }
    LieAlgebra::from_structure(labels, |i, j, k| c[(i * n + j) * n + k])
}

/// Writes the Lie-algebra format, listing nonzero constants with `i < j`.
pub fn algebra_to_json(g: &LieAlgebra) -> Value {
    let n = g.dim();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut coeffs = Map::new();
            for k in 0..n {
                let c = g.structure_constant(i, j, k);
                if c != 0.0 {
                    coeffs.insert(k.to_string(), json!(c));
                }
            }
            if !coeffs.is_empty() {
                brackets.push(json!({ "i": i, "j": j, "coeffs": coeffs }));
            }
        }
    }
    json!({ "dim": n, "labels": g.labels(), "brackets": brackets })
}

fn matrix_field(v: &Value, key: &str, n: usize) -> Result<Option<Mat>> {
    let Some(field) = v.get(key) else {
        return Ok(None);
    };
    let rows: Vec<Vec<f64>> = serde_json::from_value(field.clone())?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Format(format!("'{key}' must be a {n} x {n} matrix")));
    }
    Ok(Some(Mat::from_fn(n, n, |r, c| rows[r][c])))
}

fn required_matrix(v: &Value, key: &str, n: usize) -> Result<Mat> {
    matrix_field(v, key, n)?.ok_or_else(|| Error::Format(format!("missing field '{key}'")))
}

fn matrix_to_json(m: &Mat) -> Value {
    let rows: Vec<Vec<f64>> = (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect();
    json!(rows)
}

/// Parses the symmetric-algebra format. With `validate`, the involution
/// and automorphism properties are checked before acceptance.
pub fn symmetric_from_json(v: &Value, validate: bool) -> Result<SymmetricLieAlgebra> {
    let g = algebra_from_json(v)?;
    let s = LinearOperator::new(required_matrix(v, "involution", g.dim())?);
    if validate {
        SymmetricLieAlgebra::split_eigenspaces(g, s)
    } else {
        Ok(SymmetricLieAlgebra::from_parts_unchecked(g, s))
    }
}

pub fn symmetric_to_json(sym: &SymmetricLieAlgebra) -> Value {
    let mut v = algebra_to_json(sym.algebra());
    v["involution"] = matrix_to_json(&sym.s().matrix);
    v
}

/// Parses the Legendrian format. With `validate`, the symmetric part and
/// every Legendrian axiom must hold; without it only shapes are checked, so
/// that broken inputs can still be reported on.
pub fn legendrian_from_json(v: &Value, validate: bool) -> Result<LegendrianSymmetricAlgebra> {
    let sym = symmetric_from_json(v, validate)?;
    let n = sym.dim();
    let lambda = BilinearForm::general(required_matrix(v, "lambda", n)?);
    let inner = match v.get("inner") {
        None | Some(Value::Null) => None,
        Some(_) => {
            let rows: Vec<Vec<f64>> = serde_json::from_value(v["inner"].clone())?;
            let m = rows.len();
            if rows.iter().any(|r| r.len() != m) {
                return Err(Error::Format("'inner' must be square".into()));
            }
            Some(BilinearForm::general(Mat::from_fn(m, m, |r, c| rows[r][c])))
        }
    };
    if validate {
        LegendrianSymmetricAlgebra::new(sym, lambda, inner)
    } else {
        LegendrianSymmetricAlgebra::new_unchecked(sym, lambda, inner)
    }
}

pub fn legendrian_to_json(l: &LegendrianSymmetricAlgebra) -> Value {
    let mut v = symmetric_to_json(l.sym());
    v["lambda"] = matrix_to_json(&l.lambda().matrix);
    if let Some(b) = l.inner() {
        v["inner"] = matrix_to_json(&b.matrix);
    }
    v
}

/// Check list as `[{name, max_residual, threshold, bound, pass}]`.
pub fn checks_to_json(report: &ResidualReport) -> Value {
    Value::Array(
        report
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "max_residual": c.value,
                    "threshold": c.threshold,
                    "bound": c.bound,
                    "pass": c.passed(),
                })
            })
            .collect(),
    )
}

pub fn decomposition_to_json(d: &DecompositionResult) -> Value {
    let components: Vec<Value> = d
        .components
        .iter()
        .map(|c| {
            json!({
                "type": c.kind.tag(),
                "kind": c.kind.name(),
                "dim": c.dim(),
                "g_dim": c.g_part.dim(),
                "iso_residual": c.iso_residual,
                "lambda_scale": c.lambda_scale,
                "j_scale": c.j_scale,
                "certificate": checks_to_json(&c.certificate),
            })
        })
        .collect();
    let [g0, gp, gm, p0, pp, pm] = d.pieces.dims();
    json!({
        "components": components,
        "pieces": { "g0": g0, "g_plus": gp, "g_minus": gm, "p0": p0, "p_plus": pp, "p_minus": pm },
        "jsq_eigenvalues": d.eigenvalues,
        "checks": checks_to_json(&d.report),
        "warnings": d.warnings,
        "pass": d.passed(),
    })
}

/// Serializes with sorted object keys, floats as `{:.16e}` (17 significant
/// digits), and non-finite floats as `null`, so equal values always give
/// identical bytes.
pub fn canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_canonical(&mut out, v, 0);
    out.push('\n');
    out
}

fn write_canonical(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| {
        out.push('\n');
        out.push_str(&"  ".repeat(d));
    };
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                write_float(out, n.as_f64().unwrap_or(f64::NAN));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (idx, item) in items.iter().enumerate() {
                if idx > 0 {
                    out.push(',');
                }
                pad(out, depth + 1);
                write_canonical(out, item, depth + 1);
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (idx, key) in keys.iter().enumerate() {
                if idx > 0 {
                    out.push(',');
                }
                pad(out, depth + 1);
                out.push_str(&Value::String((*key).clone()).to_string());
                out.push_str(": ");
                write_canonical(out, &map[*key], depth + 1);
            }
            pad(out, depth);
            out.push('}');
        }
    }
}

fn write_float(out: &mut String, x: f64) {
    if x.is_finite() {
        let _ = write!(out, "{x:.16e}");
    } else {
        out.push_str("null");
    }
}

/// A float as a JSON value, mapping non-finite values to `null`.
pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}
