use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use sperner_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { CliError::CODE } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(status), Ok(())) => ExitCode::from(status.code()),
        (Err(e), _) => {
            eprintln!("error: {e}");
            ExitCode::from(CliError::CODE)
        }
        (Ok(_), Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(CliError::CODE)
        }
    }
}
