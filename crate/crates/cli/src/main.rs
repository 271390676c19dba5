use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use suture_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(outcome.output.as_bytes()).is_err() {
        return ExitCode::from(2);
    }
    if outcome.code == 2 {
        if let Ok(v) = serde_json::from_str::<serde_json::Value>(&outcome.output) {
            if let Some(msg) = v.pointer("/error/message").and_then(|m| m.as_str()) {
                eprintln!("error: {msg}");
            }
        }
    }
    ExitCode::from(outcome.code as u8)
}
