use std::process::ExitCode;

use boxdim_cli::{execute, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("boxdim: cannot set up {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("boxdim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
