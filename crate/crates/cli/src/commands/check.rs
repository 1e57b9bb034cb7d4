use krein::operator::is_pseudo_hermitian;
use krein::{Result, Tolerances};

use super::{load_matrix_document, require_input, Command, Reply};
use crate::{encode, Args};

/// Pseudo-hermiticity test `||A - A†||_F / max(1, ||A||_F) <= tol`.
pub struct Check;

impl Command for Check {
    fn name(&self) -> &'static str {
        "check"
    }

    fn run(&self, args: &Args, tol: &Tolerances) -> Result<Reply> {
        let doc = load_matrix_document(require_input(args)?)?;
        let report = is_pseudo_hermitian(doc.operator()?, tol.hermitian)?;
        Ok(Reply::ok(encode::hermiticity(&report)))
    }
}
