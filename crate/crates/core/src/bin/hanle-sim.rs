use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hanle_core::cli::{self, ScanOptions};

/// Hanle / EIT / EIA resonance simulator.
#[derive(Parser)]
#[command(name = "hanle-sim", version)]
struct Args {
    /// Worker threads for scans (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    /// Write the CSV here instead of the config's `output` (or stdout).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Force detuning averaging on or off.
    #[arg(long, global = true)]
    doppler: Option<Toggle>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Run a field scan described by a JSON config.
    Scan { config: PathBuf },
    /// Compare the perturbative signals with direct time integration.
    Verify,
    /// List the built-in presets.
    Presets,
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> i32 {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Ok(()) => cli::EXIT_OK,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => cli::EXIT_OK,
        Err(e) => {
            eprintln!("cannot write to stdout: {e}");
            cli::EXIT_CONFIG
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.into()).build_global() {
            eprintln!("cannot start {n} worker threads: {e}");
            return ExitCode::FAILURE;
        }
    }
    let code = match args.command {
        Command::Scan { config } => {
            let opts = ScanOptions {
                output: args.output,
                doppler: args.doppler.map(|t| matches!(t, Toggle::On)),
            };
            match cli::run_scan(&config, &opts) {
                Ok((csv, None)) => emit(&csv),
                Ok((_, Some(path))) => {
                    eprintln!("wrote {}", path.display());
                    cli::EXIT_OK
                }
                Err(e) => {
                    eprintln!("{e}");
                    e.exit_code()
                }
            }
        }
        Command::Verify => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            let code = cli::verify(&mut lock).unwrap_or(cli::EXIT_VERIFY_FAILED);
            let _ = lock.flush();
            code
        }
        Command::Presets => emit(&format!("{}\n", cli::presets_json())),
    };
    ExitCode::from(code as u8)
}
