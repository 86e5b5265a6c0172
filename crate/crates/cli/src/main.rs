//! `ch2noid`: JSON-in, JSON-out certificates for n-noid Higgs data, parabolic
//! stability, CH² isometries and cusp-strip checks.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 input error.

mod certificate;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "ch2noid", version, about = "Certificates for CH² n-noid Higgs data")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct GlobalOpts {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Floating tolerance (cusp default: 10·h²).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Exact arithmetic only; fail instead of falling back to floating point.
    #[arg(long, global = true, conflicts_with = "float")]
    pub exact: bool,
    /// Floating point only.
    #[arg(long, global = true)]
    pub float: bool,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Explicit Higgs data on the n-punctured sphere.
    #[command(subcommand)]
    Nnoid(NnoidCmd),
    /// Parabolic stability of the mixed case.
    #[command(subcommand)]
    Stability(StabilityCmd),
    /// Points and isometries of the complex hyperbolic plane.
    #[command(subcommand)]
    Ch2(Ch2Cmd),
    /// Cusp-strip harness.
    #[command(subcommand)]
    Cusp(CuspCmd),
}

#[derive(Subcommand)]
enum NnoidCmd {
    /// Run the full pipeline on a JSON instance ("-" for stdin).
    Check { input: String },
    /// Sample a valid instance.
    Random {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum StabilityCmd {
    /// Check one (genus, n, d1, d2, weights) instance.
    Check { input: String },
    /// List stable (d1, d2) in [0, dmax]².
    Region {
        input: String,
        #[arg(long)]
        dmax: Option<i64>,
    },
}

#[derive(Subcommand)]
enum Ch2Cmd {
    /// Classify a 3×3 matrix as elliptic, parabolic or loxodromic.
    Classify { input: String },
    /// Bergman distance between {"z": [...], "w": [...]}.
    Distance { input: String },
}

#[derive(Subcommand)]
enum CuspCmd {
    /// Generate subharmonic fields on a grid and run the strip checks.
    Verify {
        input: String,
        /// Number of seeded random fields when the input has no generator.
        #[arg(long, default_value_t = 1)]
        samples: usize,
        /// C in tol = C·max(hx, hy)².
        #[arg(long, default_value_t = ch2noid::cusp::DEFAULT_TOL_CONSTANT)]
        tol_constant: f64,
        /// Threshold for the tail witness on 𝒜(y).
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let outcome = match &cli.command {
        Command::Nnoid(NnoidCmd::Check { input }) => commands::nnoid_check(g, input),
        Command::Nnoid(NnoidCmd::Random { n }) => commands::nnoid_random(g, *n),
        Command::Stability(StabilityCmd::Check { input }) => commands::stability_check(g, input),
        Command::Stability(StabilityCmd::Region { input, dmax }) => {
            commands::stability_region(g, input, *dmax)
        }
        Command::Ch2(Ch2Cmd::Classify { input }) => commands::ch2_classify(g, input),
        Command::Ch2(Ch2Cmd::Distance { input }) => commands::ch2_distance(g, input),
        Command::Cusp(CuspCmd::Verify {
            input,
            samples,
            tol_constant,
            eps,
        }) => commands::cusp_verify(g, input, *samples, *tol_constant, *eps),
    };
    match outcome {
        Ok(commands::Outcome::Success) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
