use krein::linalg::CMatrix;
use krein::space::{gram, null_witness_in};
use krein::{Result, Tolerances};
use serde_json::Value;

use super::{metric_from_args, Command, Reply};
use crate::{json, Args};

/// `min(k, l)` mutually orthogonal null vectors of a metric.
pub struct Witness;

impl Command for Witness {
    fn name(&self) -> &'static str {
        "witness"
    }

    fn run(&self, args: &Args, _tol: &Tolerances) -> Result<Reply> {
        let metric = metric_from_args(args)?;
        let sig = metric.signature();
        let vectors = null_witness_in(&metric);
        let g = if vectors.is_empty() { CMatrix::zeros(0, 0) } else { gram(&metric, &vectors)? };
        Ok(Reply::ok(json::object([
            ("signature", Value::from(vec![sig.k, sig.l])),
            ("pontriagin_r", json::int(sig.pontriagin_r)),
            ("vectors", Value::Array(vectors.iter().map(|v| json::vector(&v.0)).collect())),
            ("gram", json::matrix(&g)),
        ])))
    }
}
