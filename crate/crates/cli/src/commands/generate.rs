use krein::synthesis::synthesize;
use krein::{Result, Tolerances};
use serde_json::Value;

use super::{require_input, Command, Reply};
use crate::document::{self, MatrixDocument};
use crate::{json, Args};

/// Matrix document synthesized from a synthesis document. The result is
/// itself a matrix document, so the report can be fed back to the other
/// commands.
pub struct Generate;

impl Command for Generate {
    fn name(&self) -> &'static str {
        "generate"
    }

    fn run(&self, args: &Args, _tol: &Tolerances) -> Result<Reply> {
        let path = require_input(args)?;
        let mut doc = document::parse_synthesis_document(&document::read_json(path)?).map_err(|e| e.context(path.display()))?;
        if let Some(seed) = args.seed {
            doc.spec.seed = seed;
        }
        let a = synthesize(&doc.spec, &doc.metric)?;
        let out = MatrixDocument { metric: doc.metric, operator: Some(a), signature: doc.signature };
        let mut result = out.to_json();
        if let Value::Object(map) = &mut result {
            map.insert(
                "synthesis".into(),
                json::object([
                    ("seed", Value::from(doc.spec.seed)),
                    ("spread", json::num(doc.spec.spread)),
                    ("max_condition", json::num(doc.spec.max_condition)),
                ]),
            );
        }
        Ok(Reply::ok(result))
    }
}
