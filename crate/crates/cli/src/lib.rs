//! `kreinctl`: JSON front-end for the krein library.
//!
//! Commands are registered by name in a [`Registry`] and share one report
//! envelope: tool version, command echo, the full tolerance set, a status and
//! either a result payload or an error message.

pub mod commands;
pub mod document;
pub mod encode;
pub mod json;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Parser;
use krein::{KreinError, Tolerances};
use serde_json::{Map, Value};

pub use commands::Command;

pub const TOOL: &str = "kreinctl";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "kreinctl", version, allow_negative_numbers = true, about = "Pseudo-hermitian operators in indefinite inner-product spaces")]
pub struct Args {
    /// check | classify | canonicalize | generate | witness | catalog
    pub command: String,
    /// Input document (matrix document, or synthesis document for `generate`).
    pub input: Option<PathBuf>,
    /// Classify every `*.json` file in a directory.
    #[arg(long)]
    pub batch: Option<PathBuf>,
    /// Signature `K,L` for `witness` and `catalog`.
    #[arg(long)]
    pub signature: Option<String>,
    #[arg(long)]
    pub tol_cluster: Option<f64>,
    #[arg(long)]
    pub tol_rank: Option<f64>,
    #[arg(long)]
    pub tol_real_axis: Option<f64>,
    #[arg(long)]
    pub tol_defect: Option<f64>,
    #[arg(long)]
    pub tol_hermitian: Option<f64>,
    /// Overrides the seed of a synthesis document.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

impl Args {
    pub fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            cluster: self.tol_cluster.unwrap_or(d.cluster),
            real_axis: self.tol_real_axis.unwrap_or(d.real_axis),
            rank: self.tol_rank.unwrap_or(d.rank),
            defect: self.tol_defect.unwrap_or(d.defect),
            hermitian: self.tol_hermitian.unwrap_or(d.hermitian),
        }
    }
}

/// Name → command table.
pub struct Registry {
    commands: BTreeMap<&'static str, Box<dyn Command>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry { commands: BTreeMap::new() }
    }

    pub fn register(&mut self, command: Box<dyn Command>) {
        self.commands.insert(command.name(), command);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Command> {
        self.commands.get(name).map(|c| c.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.commands.keys().copied().collect()
    }
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Registry::empty();
        r.register(Box::new(commands::check::Check));
        r.register(Box::new(commands::classify::Classify));
        r.register(Box::new(commands::canonicalize::Canonicalize));
        r.register(Box::new(commands::generate::Generate));
        r.register(Box::new(commands::witness::Witness));
        r.register(Box::new(commands::catalog::Catalog));
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    InputError,
    ContractError,
    NumericalFailure,
}

impl Status {
    pub fn of(err: &KreinError) -> Status {
        match err {
            KreinError::Input(_) => Status::InputError,
            KreinError::Contract(_) => Status::ContractError,
            KreinError::Numerical(_) => Status::NumericalFailure,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::InputError => "input_error",
            Status::ContractError => "contract_error",
            Status::NumericalFailure => "numerical_failure",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::InputError => 2,
            Status::ContractError => 3,
            Status::NumericalFailure => 4,
        }
    }
}

/// A finished report and the exit code that goes with it.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub report: Value,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    /// Pretty-printed report with a trailing newline.
    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.report).expect("reports serialize");
        text.push('\n');
        text
    }
}

/// Run one parsed invocation against a registry.
pub fn execute(registry: &Registry, args: &Args) -> Outcome {
    let tol = args.tolerances();
    let result = match (tol.validate(), registry.get(&args.command)) {
        (Err(e), _) => Err(e),
        (Ok(()), None) => Err(KreinError::input(format!(
            "unknown command {:?}; expected one of {}",
            args.command,
            registry.names().join(", ")
        ))),
        (Ok(()), Some(cmd)) => cmd.run(args, &tol),
    };
    let (status, body) = match result {
        Ok(commands::Reply { status, result }) => (status, ("result", result)),
        Err(e) => (Status::of(&e), ("error", json::object([("message", Value::from(e.to_string()))]))),
    };
    Outcome { status, report: envelope(args, &tol, status, body) }
}

fn envelope(args: &Args, tol: &Tolerances, status: Status, body: (&str, Value)) -> Value {
    let path = |p: &Option<PathBuf>| p.as_ref().map_or(Value::Null, |p| Value::from(p.display().to_string()));
    let arguments = json::object([
        ("input", path(&args.input)),
        ("batch", path(&args.batch)),
        ("signature", args.signature.clone().map_or(Value::Null, Value::from)),
        ("seed", args.seed.map_or(Value::Null, Value::from)),
    ]);
    let mut map = Map::new();
    map.insert("tool".into(), Value::from(TOOL));
    map.insert("version".into(), Value::from(VERSION));
    map.insert("command".into(), Value::from(args.command.clone()));
    map.insert("arguments".into(), arguments);
    map.insert("tolerances".into(), encode::tolerances(tol));
    map.insert("status".into(), Value::from(status.as_str()));
    map.insert(body.0.into(), body.1);
    Value::Object(map)
}

/// Parse command-line arguments (including the program name) and run.
/// Argument errors become `input_error` reports; `--help` and `--version`
/// return their text with exit code 0.
pub fn run_cli<I, T>(argv: I) -> (i32, String, Option<PathBuf>)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Args::try_parse_from(argv) {
        Ok(args) => {
            let outcome = execute(&Registry::default(), &args);
            (outcome.exit_code(), outcome.render(), args.out.clone())
        }
        Err(e) if !e.use_stderr() => (0, e.to_string(), None),
        Err(e) => {
            let mut map = Map::new();
            map.insert("tool".into(), Value::from(TOOL));
            map.insert("version".into(), Value::from(VERSION));
            map.insert("status".into(), Value::from(Status::InputError.as_str()));
            map.insert("error".into(), json::object([("message", Value::from(e.render().to_string().trim_end()))]));
            let outcome = Outcome { status: Status::InputError, report: Value::Object(map) };
            (outcome.exit_code(), outcome.render(), None)
        }
    }
}
