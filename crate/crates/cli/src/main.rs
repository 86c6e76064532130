use std::process::ExitCode;

use clap::Parser;

use reifenberg_cli::report::error_record;
use reifenberg_cli::{init_threads, run, RunConfig};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cfg = RunConfig::parse();
    let result = init_threads().and_then(|_| run(&cfg));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("{}", error_record(&err));
            ExitCode::from(2)
        }
    }
}
