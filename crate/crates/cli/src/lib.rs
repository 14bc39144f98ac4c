//! Command-line front end for CUB fitting, fuzzy profiles and satisfaction
//! scores.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::io::Write;

use clap::Parser;

use crate::config::{Cli, Command, RunConfig};
use crate::error::{exit, CliError, CliResult};
use crate::table::render;

/// Runs the CLI on `args` and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
            let text = e.render().to_string();
            let _ = if code == exit::OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    let cfg = RunConfig::from_opts(&cli.opts)?;
    let outcome = match &cli.command {
        Command::Fit { csv } => commands::cmd_fit(&cfg, csv)?,
        Command::Fuzzify { csv } => commands::cmd_fuzzify(&cfg, csv)?,
        Command::Weights { csv } => commands::cmd_weights(&cfg, csv)?,
        Command::Scores { csv } => commands::cmd_scores(&cfg, csv)?,
        Command::Simulate(args) => {
            let text = commands::cmd_simulate(&cfg, args)?;
            match &args.out {
                Some(path) => std::fs::write(path, text)?,
                None => stdout.write_all(text.as_bytes())?,
            }
            return Ok(exit::OK);
        }
        Command::Report { csv, out_dir } => {
            let (written, warnings) = commands::cmd_report(&cfg, csv, out_dir)?;
            for w in warnings {
                writeln!(stderr, "warning: {w}")?;
            }
            for p in written {
                writeln!(stdout, "{}", p.display())?;
            }
            return Ok(exit::OK);
        }
    };
    for w in &outcome.warnings {
        writeln!(stderr, "warning: {w}")?;
    }
    stdout.write_all(render(&outcome.tables, cfg.format, cfg.digits).as_bytes())?;
    match outcome.failure {
        Some(e) => Err::<i32, CliError>(e),
        None => Ok(exit::OK),
    }
}
