use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fracspline_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // --help and --version are not usage errors.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let report = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    for note in &report.notes {
        eprintln!("{note}");
    }
    let written = match cli.command.out_path() {
        Some(path) => std::fs::write(path, &report.csv),
        None => std::io::stdout().write_all(report.csv.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(report.status.exit_code() as u8)
}
