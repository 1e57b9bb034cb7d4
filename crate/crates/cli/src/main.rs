use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, text, out) = krein_cli::run_cli(std::env::args_os());
    let written = match out {
        Some(path) => std::fs::write(&path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        eprintln!("kreinctl: {msg}");
        return ExitCode::from(2);
    }
    if code != 0 {
        eprintln!("kreinctl: exit status {code}");
    }
    ExitCode::from(code as u8)
}
