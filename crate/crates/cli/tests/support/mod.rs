//! Golden report cases shared by the golden and acceptance targets.
//! Run with `UPDATE_GOLDEN=1` to rewrite the files under `tests/golden/`.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

pub const CASES: &[Case] = &[
    Case { name: "check_minkowski", args: &["check", "tests/fixtures/minkowski_diag.json"], exit: 0 },
    Case { name: "check_b_operator", args: &["check", "tests/fixtures/b_operator.json"], exit: 0 },
    Case { name: "check_non_hermitian", args: &["check", "tests/fixtures/non_hermitian.json"], exit: 0 },
    Case { name: "check_malformed", args: &["check", "tests/fixtures/malformed.json"], exit: 2 },
    Case { name: "classify_minkowski", args: &["classify", "tests/fixtures/minkowski_diag.json"], exit: 0 },
    Case { name: "classify_k1", args: &["classify", "tests/fixtures/k1_split.json"], exit: 0 },
    Case { name: "classify_non_hermitian", args: &["classify", "tests/fixtures/non_hermitian.json"], exit: 3 },
    Case { name: "classify_malformed", args: &["classify", "tests/fixtures/malformed.json"], exit: 2 },
    Case { name: "classify_merged_cluster", args: &["classify", "tests/fixtures/merged_cluster.json"], exit: 4 },
    Case { name: "classify_wrong_dim", args: &["classify", "tests/fixtures/b_operator.json"], exit: 2 },
    Case { name: "classify_batch", args: &["classify", "--batch", "tests/fixtures"], exit: 2 },
    Case {
        name: "classify_merged_cluster_wide",
        args: &["classify", "--tol-cluster", "1e-5", "--tol-rank", "1e-5", "tests/fixtures/merged_cluster.json"],
        exit: 0,
    },
    Case { name: "canonicalize_b_operator", args: &["canonicalize", "tests/fixtures/b_operator.json"], exit: 0 },
    Case { name: "canonicalize_minkowski", args: &["canonicalize", "tests/fixtures/minkowski_diag.json"], exit: 0 },
    Case { name: "canonicalize_k1", args: &["canonicalize", "tests/fixtures/k1_split.json"], exit: 0 },
    Case { name: "canonicalize_non_hermitian", args: &["canonicalize", "tests/fixtures/non_hermitian.json"], exit: 3 },
    Case { name: "generate_k9", args: &["generate", "tests/fixtures/k9_spec.json"], exit: 0 },
    Case { name: "generate_k9_seed", args: &["generate", "--seed", "3", "tests/fixtures/k9_spec.json"], exit: 0 },
    Case { name: "generate_from_matrix", args: &["generate", "tests/fixtures/minkowski_diag.json"], exit: 2 },
    Case { name: "witness_split_metric", args: &["witness", "tests/fixtures/split_metric.json"], exit: 0 },
    Case { name: "witness_signature_3_3", args: &["witness", "--signature", "3,3"], exit: 0 },
    Case { name: "witness_definite", args: &["witness", "--signature", "4,0"], exit: 0 },
    Case { name: "witness_missing_signature", args: &["witness"], exit: 2 },
    Case { name: "catalog_lorentz", args: &["catalog", "--signature", "1,3"], exit: 0 },
    Case { name: "catalog_split", args: &["catalog", "--signature", "2,2"], exit: 0 },
    Case { name: "catalog_wrong_dim", args: &["catalog", "--signature", "2,1"], exit: 2 },
    Case { name: "unknown_command", args: &["invert", "tests/fixtures/minkowski_diag.json"], exit: 2 },
    Case { name: "negative_tolerance", args: &["check", "--tol-rank", "-1", "tests/fixtures/minkowski_diag.json"], exit: 2 },
];

fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

pub fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_kreinctl"))
        .args(args)
        .current_dir(manifest_dir())
        .output()
        .expect("kreinctl runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8 report"))
}

fn golden_path(name: &str) -> PathBuf {
    manifest_dir().join("tests/golden").join(format!("{name}.json"))
}

/// Equal up to a relative 1e-12 on numbers; everything else exact.
fn same(a: &Value, b: &Value, at: &str) -> Result<(), String> {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            if (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0) {
                Ok(())
            } else {
                Err(format!("{at}: {x} vs {y}"))
            }
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
            x.iter().zip(y).enumerate().try_for_each(|(i, (p, q))| same(p, q, &format!("{at}[{i}]")))
        }
        (Value::Object(x), Value::Object(y)) if x.keys().eq(y.keys()) => {
            x.iter().try_for_each(|(k, p)| same(p, &y[k], &format!("{at}.{k}")))
        }
        _ if a == b => Ok(()),
        _ => Err(format!("{at}: {a} vs {b}")),
    }
}

/// Runs every case twice; returns failures as messages.
pub fn check_all() -> Vec<String> {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut failures = Vec::new();
    for case in CASES {
        let (code, first) = run(case.args);
        let (_, second) = run(case.args);
        if code != case.exit {
            failures.push(format!("{}: exit {code}, expected {}", case.name, case.exit));
        }
        if first != second {
            failures.push(format!("{}: reports differ between runs", case.name));
        }
        let path = golden_path(case.name);
        if update {
            std::fs::write(&path, &first).expect("write golden");
            continue;
        }
        let Ok(want) = std::fs::read_to_string(&path) else {
            failures.push(format!("{}: missing {}", case.name, path.display()));
            continue;
        };
        let got: Value = serde_json::from_str(&first).expect("report is JSON");
        let want: Value = serde_json::from_str(&want).expect("golden is JSON");
        if let Err(e) = same(&got, &want, "$") {
            failures.push(format!("{}: {e}", case.name));
        }
    }
    failures
}
