//! Command-line front end for `spinwork`.

use std::path::PathBuf;

pub mod args;
pub mod commands;
pub mod output;
pub mod validate;

use args::{Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] spinwork::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// 1 usage or validation, 2 numerical failure, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) if e.is_usage() => 1,
            CliError::Core(_) | CliError::Failed(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Ergotropy(a) => {
            let report = commands::cmd_ergotropy(&a)?;
            print!("{}", report.to_text());
        }
        Command::Optimize(a) => {
            for o in commands::cmd_optimize(&a)? {
                let eta = o
                    .ensemble
                    .efficiency()
                    .map(|e| format!("{e:.6}"))
                    .unwrap_or_else(|_| "undefined".into());
                println!(
                    "{:<4} <W> = {:.9} +- {:.3e}  ergotropy = {:.9}  eta = {eta}  converged {}/{}",
                    o.connectivity.tag(),
                    o.ensemble.final_mean,
                    o.ensemble.final_std,
                    o.ensemble.ergotropy,
                    o.ensemble.converged,
                    o.ensemble.trials
                );
            }
        }
        Command::Sweep(a) => {
            let records = commands::cmd_sweep(&a)?;
            if a.out.is_some() {
                eprintln!("{} rows written", records.len());
            }
        }
        Command::Landscape(a) => {
            let grid = commands::cmd_landscape(&a)?;
            let (w, i, j) = grid.max();
            println!(
                "max W = {w:.9} at theta = ({:.6}, {:.6}), ergotropy = {:.9}",
                grid.axis[i], grid.axis[j], grid.ergotropy
            );
        }
        Command::Validate(a) => {
            let checks = validate::run_checks(a.inject_field_sign_flip);
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::Failed(format!("{failed} of {} checks failed", checks.len())));
            }
            println!("all {} checks passed", checks.len());
        }
    }
    Ok(())
}
