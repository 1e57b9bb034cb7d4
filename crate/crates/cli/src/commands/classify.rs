use std::path::{Path, PathBuf};

use krein::classify::classify_dim4;
use krein::{KreinError, Result, Tolerances};
use rayon::prelude::*;
use serde_json::{Map, Value};

use super::{load_matrix_document, Command, Reply};
use crate::{encode, json, Args, Status};

/// Algebraic type of a 4×4 operator; with `--batch` every `*.json` file of
/// a directory, classified concurrently and keyed by file name.
pub struct Classify;

fn classify_file(path: &Path, tol: &Tolerances) -> Result<Value> {
    let doc = load_matrix_document(path)?;
    let t = classify_dim4(doc.operator()?, tol)?;
    Ok(encode::algebraic_type(&t))
}

impl Command for Classify {
    fn name(&self) -> &'static str {
        "classify"
    }

    fn run(&self, args: &Args, tol: &Tolerances) -> Result<Reply> {
        match (&args.input, &args.batch) {
            (Some(path), None) => classify_file(path, tol).map(Reply::ok),
            (None, Some(dir)) => batch(dir, tol),
            (Some(_), Some(_)) => Err(KreinError::input("give either an input document or --batch, not both")),
            (None, None) => Err(KreinError::input("classify needs an input document or --batch DIR")),
        }
    }
}

fn batch(dir: &Path, tol: &Tolerances) -> Result<Reply> {
    let entries = std::fs::read_dir(dir).map_err(|e| KreinError::input(format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && p.is_file())
        .collect();
    files.sort();
    let results: Vec<(String, Result<Value>)> = files
        .par_iter()
        .map(|p| {
            let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            (name, classify_file(p, tol))
        })
        .collect();
    // the first failing file in name order decides the exit status
    let status = results.iter().find_map(|(_, r)| r.as_ref().err().map(Status::of)).unwrap_or(Status::Ok);
    let mut map = Map::new();
    for (name, r) in results {
        let entry = match r {
            Ok(v) => json::object([("status", Value::from("ok")), ("result", v)]),
            Err(e) => json::object([
                ("status", Value::from(Status::of(&e).as_str())),
                ("error", json::object([("message", Value::from(e.to_string()))])),
            ]),
        };
        map.insert(name, entry);
    }
    Ok(Reply { status, result: json::object([("files", Value::Object(map))]) })
}
