//! The commands behind the registry.

pub mod canonicalize;
pub mod catalog;
pub mod check;
pub mod classify;
pub mod generate;
pub mod witness;

use std::path::Path;
use std::sync::Arc;

use krein::space::Metric;
use krein::{KreinError, Result, Tolerances};
use serde_json::Value;

use crate::document::{self, MatrixDocument};
use crate::{Args, Status};

/// Payload of a finished command. `status` is `Ok` except for batch runs
/// that carry per-file failures.
pub struct Reply {
    pub status: Status,
    pub result: Value,
}

impl Reply {
    pub fn ok(result: Value) -> Self {
        Reply { status: Status::Ok, result }
    }
}

pub trait Command: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, args: &Args, tol: &Tolerances) -> Result<Reply>;
}

pub(crate) fn require_input(args: &Args) -> Result<&Path> {
    args.input
        .as_deref()
        .ok_or_else(|| KreinError::input(format!("{} needs an input document", args.command)))
}

/// Read a matrix document; a report whose `result` is a matrix document
/// (the output of `generate`) is accepted as well.
pub(crate) fn load_matrix_document(path: &Path) -> Result<MatrixDocument> {
    let v = document::read_json(path)?;
    let inner = match v.get("result") {
        Some(r) if r.get("dim").is_some() => r,
        _ => &v,
    };
    document::parse_matrix_document(inner).map_err(|e| e.context(path.display()))
}

/// Metric from `--signature K,L` or from the input document.
pub(crate) fn metric_from_args(args: &Args) -> Result<Arc<Metric>> {
    match (&args.signature, &args.input) {
        (Some(s), None) => {
            let (k, l) = document::parse_signature_flag(s)?;
            if k + l == 0 {
                return Err(KreinError::input("--signature: dimension must be positive"));
            }
            Ok(Arc::new(Metric::with_signature(k, l)?))
        }
        (None, Some(path)) => {
            Ok(load_matrix_document(path)?.metric)
        }
        (Some(_), Some(_)) => Err(KreinError::input("give either --signature or an input document, not both")),
        (None, None) => Err(KreinError::input(format!("{} needs --signature K,L or an input document", args.command))),
    }
}
