use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use expansat_cli::commands::{run, Cli, CliError, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::usage(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let line = serde_json::to_string(&out.manifest).expect("manifest serializes");
            if let Some(p) = &cli.manifest {
                if let Err(e) = std::fs::write(p, format!("{line}\n")) {
                    eprintln!("{}", CliError::from(e).to_json());
                    return ExitCode::from(EXIT_USAGE);
                }
            }
            let mut stdout = std::io::stdout().lock();
            let _ = if cli.pretty {
                writeln!(stdout, "{}", out.text)
            } else {
                writeln!(stdout, "{line}")
            };
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.code)
        }
    }
}
