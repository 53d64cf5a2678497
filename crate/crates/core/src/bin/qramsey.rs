use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qramsey::runner::{run, RunConfig};

/// Finite-window probes of monochromatic polynomial patterns.
#[derive(Parser)]
#[command(name = "qramsey", version)]
struct Cli {
    /// JSON config file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    run: RunConfig,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let merged = match &cli.config {
        Some(path) => RunConfig::load(path).map(|file| file.overlay(&cli.run)),
        None => Ok(cli.run),
    };
    let result = merged.and_then(|config| run(&config, &mut io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qramsey: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
