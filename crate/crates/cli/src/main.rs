use std::process::ExitCode;

use clap::Parser;
use spinwork_cli::args::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Ok(v) = std::env::var("SPINWORK_THREADS") {
        let threads = match v.parse::<usize>() {
            Ok(t) if t > 0 => t,
            _ => {
                eprintln!("error: SPINWORK_THREADS must be a positive integer, got {v:?}");
                return ExitCode::from(1);
            }
        };
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match spinwork_cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
