//! `gptforge`: command-line front end.
//!
//! Every command prints a `config` header (seed, samples, tolerance) so a run
//! can be reproduced from its output alone. Exit codes: 0 success, 2 input
//! error, 3 resource cap, 4 numerical failure.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gptforge::Error;

pub const DEFAULT_SAMPLES: usize = 2000;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const SEED_ENV: &str = "GPTFORGE_SEED";

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Core(Error::Domain(_)) => 2,
            CliError::Core(Error::Resource(_)) | CliError::Io(_) => 3,
            CliError::Core(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gptforge", version, about = "Transitive GPT systems from group data")]
struct Cli {
    /// RNG seed (default: $GPTFORGE_SEED, else 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte-Carlo sample count.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Numerical tolerance for pass/fail flags.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Write the main output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether (G, H) is a Gelfand pair and list spherical irreps.
    Gelfand {
        group: PathBuf,
        subgroup: PathBuf,
        /// Real-dimension cap for listing probabilistic structures (default |G/H|).
        #[arg(long)]
        dim_cap: Option<usize>,
    },
    /// Hexagon projection of the SU(3) family, distinguishable states and the encoding game.
    Hexagon {
        #[arg(num_args = 3, value_names = ["A1", "A2", "A3"], allow_negative_numbers = true)]
        alpha: Vec<f64>,
        /// Also solve the encoding game.
        #[arg(long)]
        game: bool,
        /// Write figure data (vertex,c1,c2,c3,plane_x,plane_y) to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Sweep the symmetrised distance along the SU(3) deformation path (CSV).
    Deform {
        #[arg(long, default_value = "0:0.1:0.02")]
        t_grid: String,
        #[arg(long, default_value = "0.5,0.3,0.2")]
        alpha: String,
        /// Witness effects per direction.
        #[arg(long, default_value_t = 16)]
        effects: usize,
    },
    /// Spherical weights of the complex Grassmannian Gr(m, m+n) and their reality.
    Grassmann { m: usize, n: usize, b1_max: u64 },
    /// Estimate the symmetrised distance between two structures.
    Distance {
        spec0: String,
        spec1: String,
        #[arg(long, default_value_t = 16)]
        effects: usize,
    },
    /// Maximum radial deviation of a sampled orbit from its sphere.
    SphereCheck {
        spec: String,
        /// Export the sample as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Monte-Carlo check of the Haar average of f(gx)².
    SchurAverage {
        spec: String,
        /// Effect coefficients (comma separated, leading unit coordinate);
        /// default: the witness effect anchored at the reference point.
        #[arg(long, allow_hyphen_values = true)]
        effect: Option<String>,
    },
    /// Two-point homogeneous spaces.
    Catalog {
        #[arg(long)]
        space: Option<String>,
    },
    /// Reference state of the quartic system and its stabiliser invariance.
    Quartic {
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

/// Resolved run settings, echoed in every output.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub rng: &'static str,
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = |command| -> Result<RunConfig, CliError> {
        Ok(RunConfig {
            command,
            seed: resolve_seed(cli.seed)?,
            samples: cli.samples,
            tol: cli.tol,
            rng: gptforge::SeededRng::ALGORITHM,
        })
    };
    if cli.samples == 0 {
        return Err(CliError::Input("--samples must be positive".into()));
    }
    let text = match &cli.command {
        Command::Gelfand { group, subgroup, dim_cap } => commands::gelfand(&cfg("gelfand")?, group, subgroup, *dim_cap)?,
        Command::Hexagon { alpha, game, csv } => commands::hexagon(&cfg("hexagon")?, alpha, *game, csv.as_deref())?,
        Command::Deform { t_grid, alpha, effects } => commands::deform(&cfg("deform")?, t_grid, alpha, *effects)?,
        Command::Grassmann { m, n, b1_max } => commands::grassmann(&cfg("grassmann")?, *m, *n, *b1_max)?,
        Command::Distance { spec0, spec1, effects } => commands::distance(&cfg("distance")?, spec0, spec1, *effects)?,
        Command::SphereCheck { spec, csv } => commands::sphere_check(&cfg("sphere-check")?, spec, csv.as_deref())?,
        Command::SchurAverage { spec, effect } => {
            commands::schur_average(&cfg("schur-average")?, spec, effect.as_deref())?
        }
        Command::Catalog { space } => commands::catalog(&cfg("catalog")?, space.as_deref())?,
        Command::Quartic { k } => commands::quartic(&cfg("quartic")?, *k)?,
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write output: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
