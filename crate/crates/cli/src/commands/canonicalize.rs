use krein::canonical::decompose;
use krein::{Result, Tolerances};

use super::{load_matrix_document, require_input, Command, Reply};
use crate::{encode, Args};

/// Canonical decomposition: cells, basis, Gram pattern and residuals.
pub struct Canonicalize;

impl Command for Canonicalize {
    fn name(&self) -> &'static str {
        "canonicalize"
    }

    fn run(&self, args: &Args, tol: &Tolerances) -> Result<Reply> {
        let doc = load_matrix_document(require_input(args)?)?;
        let a = doc.operator()?;
        let d = decompose(a, tol)?;
        Ok(Reply::ok(encode::decomposition(a, &d)))
    }
}
