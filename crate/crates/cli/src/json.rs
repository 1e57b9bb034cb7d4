//! JSON encoding of numbers, complex values and matrices.
//!
//! Every float is written with 17 significant digits so that parsing it back
//! yields the same `f64`. Complex numbers are `[re, im]` pairs.

use std::str::FromStr;

use krein::linalg::{CMatrix, CVector};
use num_complex::Complex64;
use serde_json::{Map, Number, Value};

pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    Value::Number(Number::from_str(&text).expect("exponent notation is valid JSON"))
}

pub fn int(x: usize) -> Value {
    Value::from(x)
}

pub fn complex(z: Complex64) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

pub fn vector(v: &CVector) -> Value {
    Value::Array(v.iter().map(|&z| complex(z)).collect())
}

pub fn matrix(m: &CMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| complex(m[(i, j)])).collect())).collect())
}

/// `{"value": x, "tolerance": tol}` for a residual checked against `tol`.
pub fn checked(value: f64, tolerance: f64) -> Value {
    object([("value", num(value)), ("tolerance", num(tolerance))])
}

pub fn object<const N: usize>(entries: [(&str, Value); N]) -> Value {
    let mut map = Map::new();
    for (k, v) in entries {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}
