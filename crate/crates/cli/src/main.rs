use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use kickmix_cli::{run_experiment, CliError, FieldError, RunConfig};

/// Run one kicked-mixture experiment from a JSON config.
#[derive(Parser)]
#[command(name = "kickmix", version)]
struct Args {
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding `output_dir` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Disorder seed, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn run(args: Args) -> Result<(), CliError> {
    let mut config = RunConfig::load(&args.config)?;
    if args.seed.is_some() {
        config.seed = args.seed;
    }
    let out = args
        .out
        .or_else(|| config.output_dir.clone())
        .ok_or_else(|| CliError::Config(vec![FieldError::new("output_dir", "set it in the config or pass --out")]))?;
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Config(vec![FieldError::new("--threads", "must be positive")]));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is configured once");
    }
    let manifest = run_experiment(&config, &out)?;
    eprintln!("{}: wrote {} files to {}", config.experiment, manifest.files.len() + 1, out.display());
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
