//! `halfspace-lab`: reproducible experiments on halfspaces, Farey
//! geometry and random walks on `SL(2, Z)`.
//!
//! Exit status: 0 when every check passed, 1 when violations were found,
//! 2 on a configuration or runtime error.

mod commands;
mod config;
mod error;
mod output;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "halfspace-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every experiment that writes a result directory.
#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Result directory.
    #[arg(long)]
    pub out: Option<String>,
    /// Also write SVG plots (`true` or `false`).
    #[arg(long)]
    pub plot: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Farey distance between two slopes `p/q`.
    FareyDist(commands::FareyDistArgs),
    /// Check the halfspace propositions on finite graphs.
    VerifyProps(commands::VerifyPropsArgs),
    /// Drift of a random walk, with an optional subadditivity audit.
    Drift(commands::DriftArgs),
    /// Frequency of turn changes along a random Farey path.
    Halfrate(commands::HalfrateArgs),
    /// Expected gain in displacement from step n to step n + m.
    DeltaNm(commands::DeltaNmArgs),
    /// Decay of halfspace measures along a nested family.
    Decay(commands::DecayArgs),
    /// Search for a ping-pong certificate for a pair of matrices.
    SchottkyCertify(commands::CertifyArgs),
    /// Re-check a stored ping-pong certificate.
    SchottkyVerify(commands::VerifyCertArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::FareyDist(a) => commands::farey_dist(a),
        Command::VerifyProps(a) => commands::verify_props(a),
        Command::Drift(a) => commands::drift(a),
        Command::Halfrate(a) => commands::halfrate(a),
        Command::DeltaNm(a) => commands::delta_nm(a),
        Command::Decay(a) => commands::decay(a),
        Command::SchottkyCertify(a) => commands::schottky_certify(a),
        Command::SchottkyVerify(a) => commands::schottky_verify(a),
    };
    match result {
        Ok(commands::Outcome::Passed) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Violations) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
