use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use polycm_cli::{run, Cli, CliError, RunConfig};

fn execute(cli: Cli) -> Result<i32, CliError> {
    let cfg = RunConfig::from_cli(cli)?;
    let outcome = run(&cfg)?;
    let text = outcome.report.render(cfg.format)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    for f in &outcome.report.findings {
        if f.kind != "note" && f.kind != "verdict" {
            eprintln!("[{}] {}: {}", f.kind, f.subject, f.detail);
        }
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("polycm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
