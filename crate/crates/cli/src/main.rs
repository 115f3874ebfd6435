use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use bosecrit::FormulaMode;
use bosecrit_cli::commands::RunOptions;
use bosecrit_cli::scenario::builtin;
use bosecrit_cli::{run, tolerance_from_env, CliError, Command, Scenario, TOLERANCE_ENV};

/// Symmetry breaking and Bose-Einstein condensation of a trapped
/// self-interacting scalar field.
#[derive(Debug, Parser)]
#[command(name = "bosecrit", version)]
struct Args {
    command: Command,

    /// Scenario file, or the name of a built-in scenario (rb87-paper)
    #[arg(long)]
    scenario: String,

    /// Overrides the scenario's formula mode
    #[arg(long)]
    mode: Option<FormulaMode>,

    /// Write the table here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(source: &str) -> Result<Scenario, CliError> {
    let text = match std::fs::read_to_string(source) {
        Ok(text) => text,
        Err(e) => match builtin(source) {
            Some(text) => text.to_string(),
            None => return Err(CliError::Io(format!("cannot read scenario '{source}': {e}"))),
        },
    };
    Scenario::parse(&text)
}

fn execute(args: &Args) -> Result<i32, CliError> {
    let tolerance = tolerance_from_env(std::env::var(TOLERANCE_ENV).ok().as_deref())?;
    let scenario = load(&args.scenario)?;
    let outcome = run(
        args.command,
        &scenario,
        &RunOptions {
            mode: args.mode,
            tolerance,
        },
    )?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let mut stdout = std::io::stdout().lock();
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    stdout.write_all(outcome.report.as_bytes()).map_err(io)?;
    if let Some(table) = &outcome.table {
        match &args.out {
            Some(path) => std::fs::write(path, table.to_csv())
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
            None => stdout.write_all(table.to_csv().as_bytes()).map_err(io)?,
        }
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
