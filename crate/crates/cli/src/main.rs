use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lacuna_cli::{run, Cli, ERROR_CODE};

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which is reserved for inconclusive
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { ERROR_CODE as u8 } else { 0 });
        }
    };
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(ERROR_CODE as u8);
        }
    };
    let written = match &cli.output.out {
        Some(path) => std::fs::write(path, &report.body),
        None => std::io::stdout().write_all(report.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: IoError: {e}");
        return ExitCode::from(ERROR_CODE as u8);
    }
    ExitCode::from(report.status.code() as u8)
}
