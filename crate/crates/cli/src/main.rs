use std::process::ExitCode;

use anisoflow_cli::{execute, Cli};
use anyhow::Context;
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool");
        if let Err(e) = pool {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    match execute(&cli) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.exit_code() as u8;
            eprintln!("error: {:#}", anyhow::Error::new(e));
            ExitCode::from(code)
        }
    }
}
