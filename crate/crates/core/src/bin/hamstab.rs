use std::fs;
use std::process::ExitCode;

use clap::Parser;
use hamstab::cli::{run, Args, RunConfig};

fn main() -> ExitCode {
    let cfg = match RunConfig::try_from(Args::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("hamstab: {e}");
            return ExitCode::from(2);
        }
    };
    let out = match run(&cfg) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("hamstab: {e}");
            return ExitCode::FAILURE;
        }
    };
    match &cfg.out {
        Some(path) => {
            if let Err(e) = fs::write(path, out) {
                eprintln!("hamstab: {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        }
        None => print!("{out}"),
    }
    ExitCode::SUCCESS
}
