//! The `strip-lab` command line.
//!
//! Exit codes: 0 success, 1 invariant violation, 2 usage error, 3 solver
//! failure.

mod commands;
pub mod config;
mod output;

use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::geometry::{ElementOrder, GammaBc};
use crate::harness::Regime;
use crate::model1d::ModelVariant;

pub use output::{write_csv, Cell, RunDir, OUT_DIR_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "strip-lab",
    version,
    about = "Spectra and threshold scattering of thin trapezoids"
)]
pub struct Cli {
    /// TOML file with default values for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output root; each subcommand writes into its own directory below it.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smallest eigenvalues of the trapezoid, at one angle or along a range.
    Spectrum(SpectrumArgs),
    /// Threshold scattering coefficient S(alpha) over an angle range.
    Scan(ScanArgs),
    /// Angles where S = -1.
    Thresholds(ThresholdArgs),
    /// The constants B and D of the 1D models.
    Constants(ConstantsArgs),
    /// Eigenvalue curves of a 1D Robin model over tau.
    Model1d(Model1dArgs),
    /// Compare trapezoid eigenvalues with an asymptotic prediction.
    Verify(VerifyArgs),
    /// Parity-labelled spectrum of the broken strip.
    Broken(BrokenArgs),
    /// Write a trapezoid or half-strip mesh.
    MeshDump(MeshDumpArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    P1,
    P2,
}

impl From<OrderArg> for ElementOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::P1 => ElementOrder::P1,
            OrderArg::P2 => ElementOrder::P2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GammaArg {
    Neumann,
    Dirichlet,
}

impl From<GammaArg> for GammaBc {
    fn from(g: GammaArg) -> Self {
        match g {
            GammaArg::Neumann => GammaBc::Neumann,
            GammaArg::Dirichlet => GammaBc::Dirichlet,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Discrete,
    Generic,
    Threshold,
    ModelK,
    ModelZero,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Discrete => Regime::DiscreteSpectrum,
            RegimeArg::Generic => Regime::GenericDirichlet,
            RegimeArg::Threshold => Regime::ThresholdNeumann,
            RegimeArg::ModelK => Regime::RobinModelK,
            RegimeArg::ModelZero => Regime::RobinModelZero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    K,
    Zero,
}

impl From<VariantArg> for ModelVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::K => ModelVariant::ThresholdK,
            VariantArg::Zero => ModelVariant::ZeroAngle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Trapezoid,
    HalfStrip,
}

/// Trapezoid discretization flags.
#[derive(Debug, Clone, Default, Args)]
pub struct TrapezoidFlags {
    /// Element size over thickness.
    #[arg(long)]
    pub h_over_eps: Option<f64>,
    #[arg(long, value_enum)]
    pub order: Option<OrderArg>,
    /// Uniform refinements after meshing.
    #[arg(long)]
    pub refinements: Option<usize>,
    /// Eigensolver residual tolerance.
    #[arg(long)]
    pub eig_tol: Option<f64>,
}

/// Near-field discretization flags.
#[derive(Debug, Clone, Default, Args)]
pub struct NearFieldFlags {
    /// Truncation length of the half-strip.
    #[arg(long = "truncation-l")]
    pub truncation_l: Option<f64>,
    /// Element size in the half-strip.
    #[arg(long)]
    pub near_h: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub eps: Option<f64>,
    /// Angle in radians (required unless --alpha-range is given).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Sweep `alpha` over `[A, B]` instead of a single angle.
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true, conflicts_with = "alpha")]
    pub alpha_range: Option<Vec<f64>>,
    /// Points in the sweep.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, value_enum)]
    pub gamma_bc: Option<GammaArg>,
    /// Also write nodal values of each eigenfunction.
    #[arg(long)]
    pub modes: bool,
    #[command(flatten)]
    pub mesh: TrapezoidFlags,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_min: Option<f64>,
    #[arg(long)]
    pub alpha_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Only sample the grid, without adaptive refinement.
    #[arg(long)]
    pub no_refine: bool,
    #[command(flatten)]
    pub near: NearFieldFlags,
}

#[derive(Debug, Clone, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub max_alpha: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Number of positive angles to look for.
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Bisection width.
    #[arg(long)]
    pub angle_tol: Option<f64>,
    #[command(flatten)]
    pub near: NearFieldFlags,
}

#[derive(Debug, Clone, Args)]
pub struct ConstantsArgs {
    /// Guess for the threshold angle; refined to S = -1 on the mesh.
    #[arg(long)]
    pub alpha_star: Option<f64>,
    /// Also compare the phase slope with the boundary integral.
    #[arg(long)]
    pub phase_check: bool,
    /// Skip the constant D.
    #[arg(long)]
    pub no_d: bool,
    /// Element size for D.
    #[arg(long)]
    pub d_h: Option<f64>,
    #[command(flatten)]
    pub near: NearFieldFlags,
}

#[derive(Debug, Clone, Args)]
pub struct Model1dArgs {
    #[arg(long, value_enum, default_value = "k")]
    pub variant: VariantArg,
    /// The product 2B (variant k).
    #[arg(long, conflicts_with = "two_d")]
    pub two_b: Option<f64>,
    /// The product 2D (variant zero).
    #[arg(long)]
    pub two_d: Option<f64>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
    pub tau_range: Option<Vec<f64>>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub count: Option<usize>,
    /// Use the 1D finite element solver with this many elements instead of
    /// the dispersion roots.
    #[arg(long)]
    pub fem_elements: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub regime: RegimeArg,
    /// Angle for the discrete and generic regimes.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Guess for the threshold angle in the threshold and model-k regimes.
    #[arg(long)]
    pub alpha_star: Option<f64>,
    /// Decreasing thicknesses.
    #[arg(long, value_delimiter = ',')]
    pub eps_list: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub tau_list: Option<Vec<f64>>,
    /// Index p (discrete) or q (other regimes).
    #[arg(long)]
    pub index: Option<usize>,
    /// B for the model-k regime; computed when absent.
    #[arg(long)]
    pub b: Option<f64>,
    /// D for the model-zero regime; computed when absent.
    #[arg(long)]
    pub d: Option<f64>,
    #[command(flatten)]
    pub mesh: TrapezoidFlags,
}

#[derive(Debug, Clone, Args)]
pub struct BrokenArgs {
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[command(flatten)]
    pub mesh: TrapezoidFlags,
}

#[derive(Debug, Clone, Args)]
pub struct MeshDumpArgs {
    #[arg(long, value_enum, default_value = "trapezoid")]
    pub domain: DomainArg,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[command(flatten)]
    pub mesh: TrapezoidFlags,
    #[command(flatten)]
    pub near: NearFieldFlags,
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_solver_failure() {
        return EXIT_SOLVER;
    }
    match e {
        Error::InvalidGeometry(_) | Error::InvalidMesh(_) | Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_INVARIANT,
    }
}

/// Parses `args` and runs the subcommand; returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => {
            for line in &outcome.messages {
                println!("{line}");
            }
            if let Some(v) = outcome.violation {
                eprintln!("invariant violated: {v}");
                EXIT_INVARIANT
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            if code == EXIT_USAGE {
                let mut cmd = Cli::command();
                cmd.build();
                let name = cli.command.name();
                if let Some(sub) = cmd.find_subcommand_mut(name) {
                    eprintln!("{}", sub.render_usage());
                }
            }
            code
        }
    }
}

pub fn main() -> i32 {
    run_from(std::env::args_os())
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Scan(_) => "scan",
            Command::Thresholds(_) => "thresholds",
            Command::Constants(_) => "constants",
            Command::Model1d(_) => "model1d",
            Command::Verify(_) => "verify",
            Command::Broken(_) => "broken",
            Command::MeshDump(_) => "mesh-dump",
        }
    }
}
