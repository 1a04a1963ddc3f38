use std::process::ExitCode;

use clap::Parser;
use sommerfeld_cli::{emit, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli).and_then(|r| emit(&r, cli.config.out.as_deref())) {
        Ok(code) => {
            if code == 3 {
                eprintln!("a check failed; see the report");
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
