use clap::Parser;

use drdist_cli::args::{Cli, Command};
use drdist_cli::commands::{cmd_bench, cmd_measure, cmd_viz};
use drdist_cli::{error_json, exit_code};

fn main() {
    // DRDIST_THREADS caps the rayon worker count for the whole process.
    if let Ok(v) = std::env::var("DRDIST_THREADS") {
        if let Ok(threads) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Measure(args) => cmd_measure(args),
        Command::Viz(args) => cmd_viz(args),
        Command::Bench(args) => cmd_bench(args),
    };
    if let Err(err) = result {
        eprintln!("{}", error_json(&err));
        std::process::exit(exit_code(&err));
    }
}
