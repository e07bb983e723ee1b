//! `convlab`: convergence-set scans, the finite-set construction, the
//! example generators and capacity estimates from the command line.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use convlab::lab::Convention;

use config::BackendKind;

#[derive(Debug, Parser)]
#[command(
    name = "convlab",
    version,
    about = "Convergence sets along curve families and planar capacity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Truncation degree D (at least 4).
    #[arg(long, short = 'D')]
    pub degree: Option<u32>,
    #[arg(long, value_enum)]
    pub backend: Option<BackendKind>,
    /// Mantissa bits of the float backend.
    #[arg(long)]
    pub precision: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// TOML file with defaults for any of the flags, plus verdict thresholds
    /// under `[rule]`.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads for grid probes and capacity ladders.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Probe a series along `φ_s` over a grid of parameters; writes CSV.
    Scan {
        #[command(flatten)]
        common: Common,
        /// A-table JSON file.
        #[arg(long)]
        series: Option<PathBuf>,
        /// Curve as inline coefficients `b1;b2;…` (each a comma list in x) or
        /// a curve JSON file.
        #[arg(long)]
        curve: Option<String>,
        /// `cx,cy,r,n`: an n×n grid of half-width r.
        #[arg(long)]
        grid: Option<String>,
        /// Extra samples, `;`-separated complex numbers.
        #[arg(long)]
        samples: Option<String>,
        /// Also write per-degree growth rows here.
        #[arg(long)]
        profile_out: Option<PathBuf>,
    },
    /// Build a divergent series converging exactly on a finite parameter set;
    /// writes the A-table as JSON.
    Construct {
        #[command(flatten)]
        common: Common,
        /// Targets, `;`-separated complex numbers.
        #[arg(long)]
        targets: Option<String>,
        #[arg(long)]
        curve: Option<String>,
    },
    /// Write the A-table of one of the countable-set examples.
    Examples {
        #[arg(value_enum)]
        which: Which,
        #[command(flatten)]
        common: Common,
        /// The parameters s_j, `;`-separated, repeated cyclically.
        #[arg(long)]
        sequence: Option<String>,
        /// Number of summands N (defaults to D).
        #[arg(long)]
        count: Option<u32>,
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
        #[arg(long)]
        curve: Option<String>,
    },
    /// Estimate the logarithmic capacity of a planar set; writes CSV.
    Capacity {
        #[command(flatten)]
        common: Common,
        /// Set descriptor, e.g. `disk:0,0,1` or `union(points:0;1|segment:2,3)`.
        #[arg(long)]
        set: Option<String>,
        /// Sampling fineness.
        #[arg(long)]
        h: Option<f64>,
        /// Ladder degrees, comma-separated.
        #[arg(long, value_delimiter = ',')]
        rungs: Option<Vec<usize>>,
    },
    /// Check a capacity law numerically; writes CSV.
    Lawcheck {
        #[command(subcommand)]
        law: LawArg,
    },
    /// Fuzz the forward map and its inverse on random exact instances.
    Roundtrip {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cases: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum Which {
    F,
    G,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum ConventionArg {
    Member,
    Shifted,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Member => Convention::Member,
            ConventionArg::Shifted => Convention::Shifted,
        }
    }
}

/// Shared flags of the law checks.
#[derive(Debug, Clone, Args)]
pub struct LawCommon {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub rungs: Option<Vec<usize>>,
}

#[derive(Debug, Subcommand)]
enum LawArg {
    /// `c(λK) = |λ| c(K)`.
    Scaling {
        #[command(flatten)]
        shared: LawCommon,
        #[arg(long)]
        set: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        factor: String,
    },
    /// `c(P⁻¹K) = c(K)^{1/deg P}` for a monic P.
    Preimage {
        #[command(flatten)]
        shared: LawCommon,
        #[arg(long)]
        set: Option<String>,
        /// Coefficients of P from the constant term up, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// A union of polar-like sets stays polar-like.
    Union {
        #[command(flatten)]
        shared: LawCommon,
        /// One part of the union; repeat the flag for each.
        #[arg(long = "set", required = true)]
        sets: Vec<String>,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    use commands as c;
    match cli.command {
        Command::Scan {
            common,
            series,
            curve,
            grid,
            samples,
            profile_out,
        } => c::scan(&common, series, curve, grid, samples, profile_out),
        Command::Construct {
            common,
            targets,
            curve,
        } => c::construct(&common, targets, curve),
        Command::Examples {
            which,
            common,
            sequence,
            count,
            convention,
            curve,
        } => c::examples(
            &common,
            matches!(which, Which::G),
            sequence,
            count,
            convention.map(Into::into),
            curve,
        ),
        Command::Capacity {
            common,
            set,
            h,
            rungs,
        } => c::capacity(&common, set, h, rungs),
        Command::Lawcheck { law } => match law {
            LawArg::Scaling {
                shared,
                set,
                factor,
            } => c::lawcheck(&shared, c::LawInput::Scaling { set, factor }),
            LawArg::Preimage { shared, set, poly } => {
                c::lawcheck(&shared, c::LawInput::Preimage { set, poly })
            }
            LawArg::Union { shared, sets } => c::lawcheck(&shared, c::LawInput::Union(sets)),
        },
        Command::Roundtrip {
            common,
            seed,
            cases,
        } => c::roundtrip(&common, seed, cases),
    }
}

/// 0 on success, 2 when a numerical solver gave up, 1 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    let solver = err.chain().any(|e| {
        e.downcast_ref::<convlab::Error>()
            .is_some_and(convlab::Error::is_solver_failure)
    });
    if solver {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
