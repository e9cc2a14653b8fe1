//! `circuitq`: netlists in, Hamiltonians, spectra and noise figures out.
//!
//! Exit status: 0 on success, 1 for usage errors, 2 when the input fails
//! validation, 3 when a numerical procedure does not converge.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use circuitq::netlist::parse_value;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Output(String),
    Core(circuitq::Error),
}

impl From<circuitq::Error> for CliError {
    fn from(e: circuitq::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use circuitq::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Output(_) => 3,
            CliError::Core(E::Io(_)) => 1,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(E::Internal(_)) => 3,
            CliError::Core(_) => 2,
        }
    }

    fn report(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Io(m) => format!("io error: {m}"),
            CliError::Output(m) => format!("output error: {m}"),
            CliError::Core(e) => format!("error: {e}"),
        }
    }
}

/// Accepts plain numbers and engineering suffixes such as `10p` or `5G`.
fn si(s: &str) -> Result<f64, String> {
    parse_value(s).ok_or_else(|| format!("`{s}` is not a number (suffixes f p n u m k M G T are allowed)"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "circuitq", version, about = "Quantization of lumped superconducting circuits")]
pub struct Cli {
    /// Output format; each verb has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to a file instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Reserved for stochastic operations; nothing in this release uses it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Node-flux Hamiltonian and normal modes of a netlist (JSON).
    Quantize(QuantizeArgs),
    /// Lowest levels of a single-node atom described by a netlist.
    Spectrum(SpectrumArgs),
    /// Levels and the ω_01 sensitivity along a bias sweep (CSV).
    Sweep(SweepArgs),
    /// Caldeira-Leggett oscillator comb of an admittance (CSV).
    Bath(BathArgs),
    /// Fluctuation-dissipation spectral densities on a frequency grid (CSV).
    Fdt(FdtArgs),
    /// Flux and charge variances of a damped LC: closed form and quadrature.
    Variance(VarianceArgs),
    /// Driven cavity response and reflected field across a detuning grid.
    Scatter(ScatterArgs),
}

#[derive(Debug, Args)]
pub struct QuantizeArgs {
    /// Netlist file.
    pub netlist: PathBuf,
    /// Replace junctions by their linear inductance L_J when computing modes.
    #[arg(long)]
    pub linearize: bool,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct TruncationArgs {
    /// Charge-basis cutoff |n| ≤ n_cut (circuits without an inductor).
    #[arg(long, default_value_t = 30)]
    pub n_cut: usize,
    /// Fock-basis size (circuits with an inductor).
    #[arg(long, default_value_t = 60)]
    pub n_max: usize,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    pub netlist: PathBuf,
    /// Number of levels.
    #[arg(long, default_value_t = 5)]
    pub levels: usize,
    #[command(flatten)]
    pub truncation: TruncationArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    /// Reduced external flux, radians.
    PhiExt,
    /// Offset charge, units of 2e.
    Ng,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub netlist: PathBuf,
    #[arg(long, value_enum)]
    pub param: SweepParam,
    #[arg(long, allow_hyphen_values = true, value_parser = si)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = si)]
    pub to: f64,
    #[arg(long, default_value_t = 21)]
    pub points: usize,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    #[command(flatten)]
    pub truncation: TruncationArgs,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct AdmittanceSource {
    /// Ohmic admittance 1/R (with --omega-c, 1/(R(1 − iω/ω_c))).
    #[arg(long = "R", value_parser = si)]
    pub r: Option<f64>,
    /// CSV with columns omega_rad_s,re_Y_S,im_Y_S.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BathArgs {
    #[command(flatten)]
    pub source: AdmittanceSource,
    /// Cutoff of the ohmic admittance, rad/s.
    #[arg(long, value_parser = si)]
    pub omega_c: Option<f64>,
    /// Comb spacing Δω, rad/s.
    #[arg(long, value_parser = si)]
    pub delta_omega: f64,
    /// Highest oscillator frequency, rad/s.
    #[arg(long, value_parser = si)]
    pub omega_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// Voltage noise S_VV, V²/(rad/s).
    Vv,
    /// Flux noise S_φφ, Wb²/(rad/s).
    Phiphi,
    /// Classical current noise 2k_BT Re Y, A²/(rad/s).
    Ii,
}

#[derive(Debug, Args)]
pub struct FdtArgs {
    /// Resistance, ohms; combined with --L and --C it shunts an LC.
    #[arg(long = "R", value_parser = si)]
    pub r: Option<f64>,
    #[arg(long = "L", value_parser = si, requires = "c")]
    pub l: Option<f64>,
    #[arg(long = "C", value_parser = si, requires = "l")]
    pub c: Option<f64>,
    /// Admittance table instead of --R.
    #[arg(long, conflicts_with = "r")]
    pub table: Option<PathBuf>,
    /// Cutoff of the ohmic element, rad/s.
    #[arg(long, value_parser = si)]
    pub omega_c: Option<f64>,
    /// Temperature, kelvin.
    #[arg(long = "T", value_parser = si)]
    pub temperature: f64,
    #[arg(long, value_enum, default_value = "vv")]
    pub quantity: Quantity,
    /// Classical 2k_BT Re Z instead of the quantum density (voltage noise only).
    #[arg(long)]
    pub classical: bool,
    /// Lowest angular frequency, rad/s (negative values are absorption).
    #[arg(long, allow_hyphen_values = true, value_parser = si)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = si)]
    pub to: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct VarianceArgs {
    #[arg(long = "L", value_parser = si)]
    pub l: f64,
    #[arg(long = "C", value_parser = si)]
    pub c: f64,
    #[arg(long = "R", value_parser = si)]
    pub r: f64,
    /// Temperature, kelvin.
    #[arg(long = "T", value_parser = si)]
    pub temperature: f64,
    /// ω_c/ω₀.
    #[arg(long, value_parser = si, default_value = "10")]
    pub wc_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DampingArg {
    Series,
    Parallel,
}

#[derive(Debug, Args)]
pub struct ScatterArgs {
    /// Resonance frequency, Hz (with --gamma).
    #[arg(long, value_parser = si, requires = "gamma", conflicts_with_all = ["l", "c", "r"])]
    pub f0: Option<f64>,
    /// Energy damping rate γ_a, 1/s.
    #[arg(long, value_parser = si)]
    pub gamma: Option<f64>,
    /// Parallel LC loaded by --R, instead of --f0/--gamma.
    #[arg(long = "L", value_parser = si, requires_all = ["c", "r"])]
    pub l: Option<f64>,
    #[arg(long = "C", value_parser = si)]
    pub c: Option<f64>,
    #[arg(long = "R", value_parser = si)]
    pub r: Option<f64>,
    #[arg(long, value_enum, default_value = "parallel")]
    pub damping: DampingArg,
    /// Characteristic impedance for --f0/--gamma, ohms.
    #[arg(long, value_parser = si, default_value = "50")]
    pub z: f64,
    /// Input amplitude, √(photons/s).
    #[arg(long, value_parser = si, default_value = "1")]
    pub amplitude: f64,
    /// Half-width of the detuning grid in units of γ_a.
    #[arg(long, value_parser = si, default_value = "10")]
    pub span: f64,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.report());
            ExitCode::from(e.exit_code())
        }
    }
}
