use krein::classify::type_catalog;
use krein::{Result, Tolerances};
use serde_json::Value;

use super::{metric_from_args, Command, Reply};
use crate::{encode, json, Args};

/// The canonical representative of every type of a signature.
pub struct Catalog;

impl Command for Catalog {
    fn name(&self) -> &'static str {
        "catalog"
    }

    fn run(&self, args: &Args, _tol: &Tolerances) -> Result<Reply> {
        let metric = metric_from_args(args)?;
        let sig = metric.signature();
        let entries = type_catalog(sig)?;
        let list = entries
            .iter()
            .map(|(t, op)| {
                json::object([
                    ("type", encode::algebraic_type(t)),
                    ("metric", json::object([("signature", Value::from(vec![sig.k, sig.l]))])),
                    ("operator", json::matrix(op.matrix())),
                ])
            })
            .collect();
        Ok(Reply::ok(json::object([
            ("signature", Value::from(vec![sig.k, sig.l])),
            ("entries", Value::Array(list)),
        ])))
    }
}
