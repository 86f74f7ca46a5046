use std::process::ExitCode;

use clap::Parser;
use qinfo_cli::{config::SEED_ENV, execute, exit_code_for, Cli, ExperimentConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env_seed = std::env::var(SEED_ENV).ok();
    let result = ExperimentConfig::resolve(cli.command, cli.flags, env_seed.as_deref())
        .and_then(|cfg| execute(&cfg));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
