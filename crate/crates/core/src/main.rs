use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use nlab::cli::{run, RunConfig, EXIT_INPUT};

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    match run(&cfg) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("nlab: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
