//! Input documents.
//!
//! A matrix document is
//! `{"dim": N, "metric": {"signature": [k, l]} | {"matrix": [[..]]}, "operator": [[..]]}`
//! with entries given as numbers or `[re, im]` pairs. A synthesis document
//! replaces `operator` by a `target` plus optional `seed`, `max_condition`
//! and `spread`.

use std::path::Path;
use std::sync::Arc;

use krein::canonical::CellKind;
use krein::classify::TypeLabel;
use krein::linalg::{CMatrix, CVector};
use krein::operator::Operator;
use krein::space::Metric;
use krein::synthesis::{CellSpec, SynthesisSpec, SynthesisTarget, TypeParameters, DEFAULT_MAX_CONDITION};
use krein::{KreinError, Result};
use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::json;

#[derive(Debug, Clone)]
pub struct MatrixDocument {
    pub metric: Arc<Metric>,
    /// Absent in metric-only documents.
    pub operator: Option<Operator>,
    /// How the metric was given, echoed on output.
    pub signature: Option<(usize, usize)>,
}

impl MatrixDocument {
    pub fn operator(&self) -> Result<&Operator> {
        self.operator.as_ref().ok_or_else(|| KreinError::input("document has no \"operator\" field"))
    }

    pub fn to_json(&self) -> Value {
        let n = self.metric.dim();
        let metric = match self.signature {
            Some((k, l)) => json::object([("signature", Value::from(vec![k, l]))]),
            None => json::object([("matrix", json::matrix(self.metric.form()))]),
        };
        let mut map = Map::new();
        map.insert("dim".into(), json::int(n));
        map.insert("metric".into(), metric);
        if let Some(op) = &self.operator {
            map.insert("operator".into(), json::matrix(op.matrix()));
        }
        Value::Object(map)
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| KreinError::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| KreinError::input(format!("{}: {e}", path.display())))
}

pub fn parse_matrix_document(v: &Value) -> Result<MatrixDocument> {
    let obj = v.as_object().ok_or_else(|| KreinError::input("document: expected a JSON object"))?;
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| KreinError::input("dim: expected a positive integer"))? as usize;
    if dim == 0 {
        return Err(KreinError::input("dim: expected a positive integer"));
    }
    let (metric, signature) = parse_metric(obj.get("metric").ok_or_else(|| KreinError::input("metric: missing"))?, dim)?;
    let operator = match obj.get("operator") {
        Some(op) => Some(Operator::new(parse_matrix(op, dim, "operator")?, Arc::clone(&metric))?),
        None => None,
    };
    Ok(MatrixDocument { metric, operator, signature })
}

fn parse_metric(v: &Value, dim: usize) -> Result<(Arc<Metric>, Option<(usize, usize)>)> {
    let obj = v.as_object().ok_or_else(|| KreinError::input("metric: expected an object"))?;
    match (obj.get("signature"), obj.get("matrix")) {
        (Some(sig), None) => {
            let (k, l) = parse_signature(sig, "metric.signature")?;
            if k + l != dim {
                return Err(KreinError::input(format!("metric.signature: ({k}, {l}) does not match dim {dim}")));
            }
            Ok((Arc::new(Metric::with_signature(k, l)?), Some((k, l))))
        }
        (None, Some(m)) => {
            let form = parse_matrix(m, dim, "metric.matrix")?;
            Ok((Arc::new(Metric::from_matrix(form).map_err(|e| e.context("metric.matrix"))?), None))
        }
        _ => Err(KreinError::input("metric: expected exactly one of \"signature\" or \"matrix\"")),
    }
}

pub fn parse_signature(v: &Value, field: &str) -> Result<(usize, usize)> {
    let bad = || KreinError::input(format!("{field}: expected [k, l] with non-negative integers"));
    let arr = v.as_array().ok_or_else(bad)?;
    match arr.as_slice() {
        [k, l] => Ok((k.as_u64().ok_or_else(bad)? as usize, l.as_u64().ok_or_else(bad)? as usize)),
        _ => Err(bad()),
    }
}

/// Parse `"k,l"` from the command line.
pub fn parse_signature_flag(s: &str) -> Result<(usize, usize)> {
    let bad = || KreinError::input(format!("--signature: expected K,L, got {s:?}"));
    let (k, l) = s.split_once(',').ok_or_else(bad)?;
    Ok((k.trim().parse().map_err(|_| bad())?, l.trim().parse().map_err(|_| bad())?))
}

pub fn parse_complex(v: &Value, field: &str) -> Result<Complex64> {
    let bad = || KreinError::input(format!("{field}: expected a number or [re, im]"));
    match v {
        Value::Number(n) => n.as_f64().map(|x| Complex64::new(x, 0.0)).ok_or_else(bad),
        Value::Array(a) if a.len() == 2 => {
            let re = a[0].as_f64().ok_or_else(bad)?;
            let im = a[1].as_f64().ok_or_else(bad)?;
            Ok(Complex64::new(re, im))
        }
        _ => Err(bad()),
    }
    .and_then(|z| {
        if z.re.is_finite() && z.im.is_finite() {
            Ok(z)
        } else {
            Err(KreinError::input(format!("{field}: entry is not finite")))
        }
    })
}

pub fn parse_matrix(v: &Value, dim: usize, field: &str) -> Result<CMatrix> {
    let rows = v.as_array().ok_or_else(|| KreinError::input(format!("{field}: expected an array of {dim} rows")))?;
    if rows.len() != dim {
        return Err(KreinError::input(format!("{field}: expected {dim} rows, got {}", rows.len())));
    }
    let mut m = CMatrix::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| KreinError::input(format!("{field}[{i}]: expected an array")))?;
        if row.len() != dim {
            return Err(KreinError::input(format!("{field}[{i}]: expected {dim} entries, got {}", row.len())));
        }
        for (j, entry) in row.iter().enumerate() {
            m[(i, j)] = parse_complex(entry, &format!("{field}[{i}][{j}]"))?;
        }
    }
    Ok(m)
}

pub fn parse_vector(v: &Value, field: &str) -> Result<CVector> {
    let arr = v.as_array().ok_or_else(|| KreinError::input(format!("{field}: expected an array")))?;
    let entries = arr
        .iter()
        .enumerate()
        .map(|(i, e)| parse_complex(e, &format!("{field}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(CVector::from_vec(entries))
}

/// A synthesis request together with its metric.
#[derive(Debug, Clone)]
pub struct SynthesisDocument {
    pub metric: Arc<Metric>,
    pub signature: Option<(usize, usize)>,
    pub spec: SynthesisSpec,
}

/// `{"dim", "metric", "target": {"type": "K9", "parameters": {...}} | {"cells": [...]},
///   "seed", "max_condition", "spread"}`. Cells are
/// `{"kind": "RealJordanEven", "lambda": x | [re, im], "s": 1, "sign": 1}`.
pub fn parse_synthesis_document(v: &Value) -> Result<SynthesisDocument> {
    let obj = v.as_object().ok_or_else(|| KreinError::input("document: expected a JSON object"))?;
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .filter(|&d| d > 0)
        .ok_or_else(|| KreinError::input("dim: expected a positive integer"))? as usize;
    let (metric, signature) = parse_metric(obj.get("metric").ok_or_else(|| KreinError::input("metric: missing"))?, dim)?;
    let target = obj.get("target").ok_or_else(|| KreinError::input("target: missing"))?;
    let target = parse_target(target)?;
    let seed = match obj.get("seed") {
        Some(s) => s.as_u64().ok_or_else(|| KreinError::input("seed: expected a non-negative integer"))?,
        None => 0,
    };
    let real_field = |name: &str, default: f64| -> Result<f64> {
        match obj.get(name) {
            Some(x) => x.as_f64().ok_or_else(|| KreinError::input(format!("{name}: expected a number"))),
            None => Ok(default),
        }
    };
    let spec = SynthesisSpec {
        target,
        seed,
        max_condition: real_field("max_condition", DEFAULT_MAX_CONDITION)?,
        spread: real_field("spread", 1.0)?,
    };
    Ok(SynthesisDocument { metric, signature, spec })
}

fn parse_target(v: &Value) -> Result<SynthesisTarget> {
    let obj = v.as_object().ok_or_else(|| KreinError::input("target: expected an object"))?;
    match (obj.get("type"), obj.get("cells")) {
        (Some(t), None) => {
            let name = t.as_str().ok_or_else(|| KreinError::input("target.type: expected a string"))?;
            let label = TypeLabel::parse(name).ok_or_else(|| KreinError::input(format!("target.type: unknown type {name:?}")))?;
            let mut parameters = TypeParameters::defaults(label);
            if let Some(p) = obj.get("parameters") {
                let p = p.as_object().ok_or_else(|| KreinError::input("target.parameters: expected an object"))?;
                for (key, slot) in [("alpha", &mut parameters.alpha), ("beta", &mut parameters.beta), ("lambda", &mut parameters.lambda)] {
                    if let Some(list) = p.get(key) {
                        *slot = real_list(list, &format!("target.parameters.{key}"))?;
                    }
                }
                if let Some(list) = p.get("signs") {
                    parameters.signs = real_list(list, "target.parameters.signs")?
                        .into_iter()
                        .map(|s| sign_of(s, "target.parameters.signs"))
                        .collect::<Result<_>>()?;
                }
            }
            Ok(SynthesisTarget::Type { label, parameters })
        }
        (None, Some(cells)) => {
            let cells = cells.as_array().ok_or_else(|| KreinError::input("target.cells: expected an array"))?;
            cells.iter().enumerate().map(|(i, c)| parse_cell(c, &format!("target.cells[{i}]"))).collect::<Result<_>>().map(SynthesisTarget::Cells)
        }
        _ => Err(KreinError::input("target: expected exactly one of \"type\" or \"cells\"")),
    }
}

fn real_list(v: &Value, field: &str) -> Result<Vec<f64>> {
    let arr = v.as_array().ok_or_else(|| KreinError::input(format!("{field}: expected an array of numbers")))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| x.as_f64().ok_or_else(|| KreinError::input(format!("{field}[{i}]: expected a number"))))
        .collect()
}

fn sign_of(x: f64, field: &str) -> Result<i8> {
    match x {
        1.0 => Ok(1),
        -1.0 => Ok(-1),
        _ => Err(KreinError::input(format!("{field}: expected +1 or -1, got {x}"))),
    }
}

fn parse_cell(v: &Value, field: &str) -> Result<CellSpec> {
    let obj = v.as_object().ok_or_else(|| KreinError::input(format!("{field}: expected an object")))?;
    let kind_name = obj.get("kind").and_then(Value::as_str).ok_or_else(|| KreinError::input(format!("{field}.kind: expected a string")))?;
    let kind = CellKind::parse(kind_name).ok_or_else(|| KreinError::input(format!("{field}.kind: unknown cell kind {kind_name:?}")))?;
    let lambda = parse_complex(obj.get("lambda").ok_or_else(|| KreinError::input(format!("{field}.lambda: missing")))?, &format!("{field}.lambda"))?;
    let s = match obj.get("s") {
        Some(s) => s.as_u64().ok_or_else(|| KreinError::input(format!("{field}.s: expected a non-negative integer")))? as usize,
        None if kind == CellKind::SimpleReal => 0,
        None => return Err(KreinError::input(format!("{field}.s: missing"))),
    };
    let sign = match obj.get("sign") {
        Some(x) => sign_of(x.as_f64().unwrap_or(f64::NAN), &format!("{field}.sign"))?,
        None => 1,
    };
    Ok(CellSpec { kind, lambda, s, sign })
}
