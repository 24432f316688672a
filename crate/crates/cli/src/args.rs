use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "sgad",
    version,
    about = "Squeezed generalized amplitude damping: channel parameters, dynamics and capacity",
    after_help = "Figures: 1-4 are `params` presets (nu, alpha, mu, p2 curves), \
                  5 is the `capacity` chi surface, 6 the `capacity` C-vs-t curves. \
                  Every preset value can be overridden by the matching flag."
)]
pub struct Args {
    #[command(subcommand)]
    pub command: CommandKind,

    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    /// Channel parameters (p1, p2, alpha, mu, nu, theta) over a time grid.
    Params,
    /// Analytic Bloch/density evolution, optionally checked against RK4.
    Evolve,
    /// Kraus operators at a single time, with certification numbers (JSON).
    Channel,
    /// Holevo chi surface (single time) or capacity-vs-time curves.
    Capacity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PictureArg {
    #[default]
    Interaction,
    Schroedinger,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct Options {
    /// Figure preset (1-6).
    #[arg(long, global = true)]
    pub figure: Option<u8>,

    /// Bath temperature (hbar = k_B = 1).
    #[arg(long = "T", global = true, allow_negative_numbers = true)]
    pub temperature: Option<f64>,

    /// Squeezing magnitude r.
    #[arg(long = "r", global = true, allow_negative_numbers = true)]
    pub squeezing: Option<f64>,

    /// Squeezing phase Phi (radians).
    #[arg(long = "Phi", global = true, allow_negative_numbers = true)]
    pub phase: Option<f64>,

    /// Spontaneous emission rate.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma0: Option<f64>,

    /// Qubit transition frequency (default 1).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega: Option<f64>,

    /// Start of the time grid.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t0: Option<f64>,

    /// End of the time grid.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t1: Option<f64>,

    /// Number of time-grid points.
    #[arg(long, global = true)]
    pub n: Option<usize>,

    /// Single time (channel; capacity surface).
    #[arg(long = "t", global = true, allow_negative_numbers = true)]
    pub t: Option<f64>,

    /// Input-state polar angle.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub theta0: Option<f64>,

    /// Input-state azimuth.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub phi0: Option<f64>,

    /// Weight of the first ensemble member.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub f: Option<f64>,

    /// Optimize over this many f values in [0, 1] instead of fixing f.
    #[arg(long = "f-sweep", global = true)]
    pub f_sweep: Option<usize>,

    /// Capacity grid nodes along theta0.
    #[arg(long = "n-theta", global = true)]
    pub n_theta: Option<usize>,

    /// Capacity grid nodes along phi0.
    #[arg(long = "n-phi", global = true)]
    pub n_phi: Option<usize>,

    /// Check the analytic evolution against RK4 integration.
    #[arg(long, global = true)]
    pub oracle: bool,

    /// Representation for `evolve`.
    #[arg(long, value_enum, global = true)]
    pub picture: Option<PictureArg>,

    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
}
