use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use qwfc_cli::config::{parse_file, resolve};
use qwfc_cli::{exit_code, run};

/// Generate content with classical, quantum-simulated or hybrid wave
/// function collapse.
#[derive(Parser, Debug)]
#[command(name = "qwfc", version)]
struct Args {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// cwfc | qwfc | hwfc | oracle
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    shots: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// ascii | ppm | voxel-slices | dump
    #[arg(long)]
    format: Option<String>,
    /// Write the lowered circuit as OpenQASM 3.
    #[arg(long)]
    export_qasm: bool,
    /// Write the exact instance distribution.
    #[arg(long)]
    exact_dist: bool,
    /// Check the configuration and exit.
    #[arg(long)]
    validate_only: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", args.config.display());
            return ExitCode::from(1);
        }
    };
    let config = parse_file(&text).and_then(|mut file| {
        if args.mode.is_some() {
            file.mode = args.mode.clone();
        }
        if args.seed.is_some() {
            file.seed = args.seed;
        }
        if args.shots.is_some() {
            file.shots = args.shots;
        }
        if args.format.is_some() {
            file.output.format = args.format.clone();
        }
        if args.export_qasm {
            file.output.qasm = Some(true);
        }
        if args.exact_dist {
            file.output.exact_dist = Some(true);
        }
        resolve(file)
    });
    let config = match config {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    if args.validate_only {
        println!(
            "{}: ok ({} segments, {} symbols, {} rules)",
            config.name,
            config.segment_count(),
            config.alphabet.size(),
            config.ruleset.len()
        );
        return ExitCode::SUCCESS;
    }
    match run(&config, &args.out) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
