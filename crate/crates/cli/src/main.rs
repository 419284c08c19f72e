use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use quatfact_cli::commands::{cmd_atoms, cmd_clifford, cmd_factor, cmd_verify};
use quatfact_cli::config::{Cli, Command};
use quatfact_cli::error::CliError;

fn dispatch(cli: &Cli) -> Result<String, (String, CliError)> {
    let plain = |r: Result<String, CliError>| r.map_err(|e| (String::new(), e));
    match &cli.command {
        Command::Atoms(args) => plain(cmd_atoms(args)),
        Command::Factor(args) => plain(cmd_factor(args)),
        Command::Clifford(args) => plain(cmd_clifford(args)),
        Command::Verify(args) => {
            if let Some(t) = args.threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(t.max(1))
                    .build_global()
                    .map_err(|e| (String::new(), CliError::Domain(e.to_string())))?;
            }
            cmd_verify(args)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, err) = match dispatch(&cli) {
        Ok(out) => (out, None),
        Err((out, e)) => (out, Some(e)),
    };
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()) {
        eprintln!("error: {e}");
        return ExitCode::from(CliError::Io(e).exit_code() as u8);
    }
    match err {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
