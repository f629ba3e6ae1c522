//! Flag definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "heun-sextic", version, about = "Quasi-exactly solvable sextic oscillator toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies of the exactly solvable levels.
    Spectrum(SpectrumArgs),
    /// Tabulate the wavefunctions, one CSV per level, plus node counts.
    Wavefunction(WavefunctionArgs),
    /// Tabulate the potential generated by a variable transformation.
    Potential(PotentialArgs),
    /// Run the built-in verification suite and print a JSON verdict.
    Verify(VerifyArgs),
    /// Write the data behind the reference figures.
    Figures(FiguresArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Exactly one parametrization: Heun `(γ, δ, ε, α)` or QES `(a, b, s)`.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true, help_heading = "Heun parameters")]
    pub gamma: Option<f64>,
    /// Defaults to 0.
    #[arg(long, allow_hyphen_values = true, help_heading = "Heun parameters")]
    pub delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true, help_heading = "Heun parameters")]
    pub epsilon: Option<f64>,
    /// Defaults to −Mε when -M is given.
    #[arg(long, allow_hyphen_values = true, help_heading = "Heun parameters")]
    pub alpha: Option<f64>,

    #[arg(short = 'a', allow_hyphen_values = true, help_heading = "QES parameters")]
    pub a: Option<f64>,
    /// Defaults to 0.
    #[arg(short = 'b', allow_hyphen_values = true, help_heading = "QES parameters")]
    pub b: Option<f64>,
    #[arg(short = 's', allow_hyphen_values = true, help_heading = "QES parameters")]
    pub s: Option<f64>,

    /// QES order M; M+1 levels are exactly solvable.
    #[arg(short = 'M', long = "order")]
    pub order: Option<u32>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Compare against the finite-difference oracle.
    #[arg(long)]
    pub verify: bool,
    /// Oracle agreement floor (overrides HEUN_SEXTIC_TOL).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Oracle coarse-grid size; the box is sized automatically.
    #[arg(long, default_value_t = 4000)]
    pub points: usize,
    /// Oracle box edge instead of the automatic choice.
    #[arg(long)]
    pub x_max: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Directory receiving `psi_<n>.csv` and `nodes.json`.
    #[arg(short = 'o', long)]
    pub output_dir: PathBuf,
    /// Defaults to 1e-3 of the upper edge.
    #[arg(long)]
    pub x_min: Option<f64>,
    /// Defaults to the point where the quartic exponent reaches −200.
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    /// Add a `psi_normalized` column with unit L² norm on the grid.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Clone, Args)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Transformation exponent m in dz/dx = z^m/σ: -1, -1/2, 0, 1/2 or 1.
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    pub m: String,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x0: f64,
    /// Accessory parameter; only shifts the energy.
    #[arg(short = 'q', long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub q: f64,
    #[arg(long, default_value_t = 0.05, allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 500)]
    pub points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Oracle agreement floor (overrides HEUN_SEXTIC_TOL).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for the random parameter draws.
    #[arg(long, default_value_t = 20180501)]
    pub seed: u64,
    /// Use the shifted centrifugal coefficient in the residual check, which
    /// must then fail.
    #[arg(long)]
    pub inject_shifted: bool,
    /// Write the verdict here as well as to standard output.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FiguresArgs {
    #[arg(short = 'o', long, default_value = "figures")]
    pub output_dir: PathBuf,
}
