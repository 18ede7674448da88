mod artifact;
mod config;
mod error;
mod parse;
mod run;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

/// Overrides `output.dir` of the config when set.
pub const OUT_DIR_ENV: &str = "PERMEAS_OUT_DIR";

const EXIT_HELP: &str = "\
Exit codes:
  0  success
  2  config, IO or argument error
  3  domain failure (not invertible, tiling failed, separation, budget exhausted, ...)
  4  internal consistency failure, or an artifact that does not verify

Errors are printed to stderr as one JSON object.
The output directory is `output.dir` from the config unless PERMEAS_OUT_DIR is set.";

#[derive(Parser)]
#[command(name = "permeas", version, about = "Shadowing and periodic approximation experiments for algebraic Z^d actions", after_help = EXIT_HELP)]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified l1 inverse of f.
    #[command(after_help = "Writes invert.json and invert.csv.\n\ninvert.csv columns: s1..sd (site), coeff (inverse coefficient at the site).")]
    Invert {
        #[arg(long)]
        config: PathBuf,
    },
    /// Greedy eps-quasi-tiling of a box by box shapes.
    #[command(after_help = "Writes tile.json and tile.csv.\n\ntile.csv columns (one row): target_size, covered, cover_fraction, tiles, shapes, eps, invariance_defect.")]
    Tile {
        #[arg(long)]
        config: PathBuf,
    },
    /// Homoclinic or periodic shadow of points along windows.
    #[command(after_help = "Writes shadow.json and shadow.csv.\n\nshadow.csv columns: window (index), s1..sd (translate), rho (certified upper bound on the distance of the translates).")]
    Shadow {
        #[arg(long)]
        config: PathBuf,
    },
    /// Exact fixed-point counts for a range of moduli.
    #[command(after_help = "Writes count_fixed.json and count_fixed.csv.\n\ncount_fixed.csv columns: modulus, count (exact decimal).")]
    CountFixed {
        #[arg(long)]
        config: PathBuf,
    },
    /// Periodic point whose orbit measure approximates a mixture of periodic orbits.
    #[command(after_help = "Writes approx.json, approx_gaps.csv and approx_ledger.csv.\n\napprox_gaps.csv columns: function (index), integral_nu, integral_mu, gap.\napprox_ledger.csv columns: term, allowance, consumed.")]
    Approx {
        #[arg(long)]
        config: PathBuf,
    },
    /// Re-check a JSON artifact written by another subcommand.
    Verify { artifact: PathBuf },
}

fn load(path: &PathBuf) -> CliResult<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    ExperimentConfig::from_toml(&text)
}

fn execute(cli: Cli) -> CliResult<Vec<String>> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let written = match cli.command {
        Command::Invert { config } => run::invert(&load(&config)?)?,
        Command::Tile { config } => run::tile(&load(&config)?)?,
        Command::Shadow { config } => run::shadow(&load(&config)?)?,
        Command::CountFixed { config } => run::count_fixed(&load(&config)?)?,
        Command::Approx { config } => run::approx(&load(&config)?)?,
        Command::Verify { artifact } => {
            let env = artifact::read_json(&artifact)?;
            return Ok(vec![verify::verify(&env)?]);
        }
    };
    Ok(written.paths.iter().map(|p| p.display().to_string()).collect())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
