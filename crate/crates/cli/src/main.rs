//! `divlink`: links of divides from the command line.

mod commands;

use clap::{Parser, Subcommand};
use divlink::divide::DEFAULT_RESOLUTION;
use divlink::projection::DEFAULT_SEED;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "divlink", version, about = "Links of divides: counts, lifts, diagrams, monodromy and invariants")]
pub struct Cli {
    /// Seed for projection directions and sampling (decimal, 0x-hex, or 0xD1V1DE).
    #[arg(long, global = true, default_value = "0xD1V1DE", value_parser = parse_seed)]
    pub seed: u64,
    /// Minimum samples per spline segment.
    #[arg(long, global = true, default_value_t = DEFAULT_RESOLUTION, value_parser = parse_resolution)]
    pub resolution: usize,
    /// Perturbation parameter of the fibration map.
    #[arg(long, global = true, default_value_t = 0.05)]
    pub eta: f64,
    /// Sphere samples per half of the fibration evidence run.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub samples: usize,
    /// Output file for the primary result; standard output when absent.
    #[arg(short, long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and check genericity.
    Validate { input: PathBuf },
    /// Crossings, branches, Milnor number and genus.
    Counts { input: PathBuf },
    /// Sampled link in the 3-sphere (`link v1`).
    Lift {
        input: PathBuf,
        /// Member of the unknotting family, in [0, pi/2).
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
    },
    /// PD and Gauss codes of a projected diagram.
    Diagram {
        input: PathBuf,
        /// Apply reducing Reidemeister I/II moves first.
        #[arg(long)]
        simplify: bool,
    },
    /// SVG picture of the divide, or of the link diagram with `--diagram`.
    Svg {
        input: PathBuf,
        #[arg(long)]
        diagram: bool,
    },
    /// Twist cycles, intersection form and monodromy on first homology.
    Monodromy { input: PathBuf },
    /// Full invariant report with consistency checks.
    Invariants { input: PathBuf },
    /// Cutover schedule of the unknotting family.
    Untangle { input: PathBuf },
    /// Transversality of the unit lifts.
    Transversal { input: PathBuf },
    /// Morse function census and fibration evidence.
    Fibration {
        input: PathBuf,
        /// Write the fiber over argument 1 as stereographic `x y z` rows.
        #[arg(long)]
        xyz: Option<PathBuf>,
    },
    /// Connected sum of two divides.
    Sum { first: PathBuf, second: PathBuf },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("0xD1V1DE") {
        return Ok(DEFAULT_SEED);
    }
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => t.replace('_', "").parse::<u64>(),
    };
    parsed.map_err(|e| format!("invalid seed '{s}': {e}"))
}

fn parse_resolution(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(n) if (1..=1 << 16).contains(&n) => Ok(n),
        _ => Err(format!("resolution must be an integer in 1..=65536, got '{s}'")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version exit 0, usage errors exit 2
            e.exit();
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
