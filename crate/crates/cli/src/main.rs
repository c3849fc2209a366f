//! `liouvillian-lab`: spectra, exceptional points, sweeps and time evolution
//! of the gain/loss/decay two-level system.
//!
//! Exit codes: 0 success, 1 usage error, 2 numeric failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use liouvillian_core::dynamics::Normalization;
use liouvillian_core::exec;
use liouvillian_core::sweep::Format;
use liouvillian_core::twolevel::Param;
use liouvillian_core::Error;

use crate::config::{PartialParams, PartialTolerances};

#[derive(Debug, Parser)]
#[command(name = "liouvillian-lab", version, about = "Spectra and dynamics of vectorized non-Hermitian Lindblad equations")]
pub struct Cli {
    /// JSON config with default parameters, tolerances and output settings.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Rescale all rates by gamma1 (gamma1 = 1). Times are then in units of 1/gamma1.
    #[arg(long, global = true)]
    pub normalized: bool,

    #[command(flatten)]
    pub tolerances: TolArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    /// Eigen residual bound, relative to the Frobenius norm.
    #[arg(long, global = true, value_name = "TOL")]
    pub eig_tol: Option<f64>,
    /// Steady tolerance factor on |Im lambda|.
    #[arg(long, global = true, value_name = "TOL")]
    pub steady_tol: Option<f64>,
    /// Cluster radius factor for coalescing eigenvalues.
    #[arg(long, global = true, value_name = "TOL")]
    pub ep_tol: Option<f64>,
    /// Relative singular-value cutoff for geometric multiplicity.
    #[arg(long, global = true, value_name = "TOL")]
    pub rank_tol: Option<f64>,
    /// Bound on |Re rho01| for the half-pi phase verdict.
    #[arg(long, global = true, value_name = "TOL")]
    pub phase_tol: Option<f64>,
    /// Bound on |Re lambda| for arc membership.
    #[arg(long, global = true, value_name = "TOL")]
    pub arc_tol: Option<f64>,
}

impl TolArgs {
    pub fn partial(&self) -> PartialTolerances {
        PartialTolerances {
            eig: self.eig_tol,
            steady: self.steady_tol,
            ep: self.ep_tol,
            rank: self.rank_tol,
            phase: self.phase_tol,
            arc: self.arc_tol,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, Args)]
pub struct ParamArgs {
    /// Loss rate on |0>.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma1: Option<f64>,
    /// Gain rate on |1>.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma2: Option<f64>,
    /// Coupling.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// Decay rate |1> -> |0>.
    #[arg(long, allow_hyphen_values = true)]
    pub dissipation: Option<f64>,
}

impl ParamArgs {
    pub fn partial(&self) -> PartialParams {
        PartialParams { gamma1: self.gamma1, gamma2: self.gamma2, omega: self.omega, dissipation: self.dissipation }
    }

    pub fn any(&self) -> bool {
        self.gamma1.is_some() || self.gamma2.is_some() || self.omega.is_some() || self.dissipation.is_some()
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenpairs, steady-state verdict, coalescence clusters and phase verdicts.
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        /// Cross-check against the closed-form eigenvalues.
        #[arg(long)]
        analytic: bool,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// One-parameter sweep written as CSV or JSON.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        /// Load a figure preset (fig2a, fig2c, fig3, fig4ab, fig4ef).
        #[arg(long, conflicts_with_all = ["param", "from", "to", "gamma1", "gamma2", "omega", "dissipation"])]
        figure: Option<String>,
        /// Varied parameter: gamma1, gamma2, omega or dissipation.
        #[arg(long, requires_all = ["from", "to"])]
        param: Option<Param>,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        /// Grid points, endpoints included.
        #[arg(long)]
        steps: Option<usize>,
        /// Comma-separated columns: eigenvalues, eigenstates, arcs, eps; or all / none.
        #[arg(long, value_name = "LIST")]
        outputs: Option<String>,
        /// csv or json; defaults to the config, then the --out extension, then csv.
        #[arg(long)]
        format: Option<Format>,
        /// Output file; standard output when absent.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Evaluate points on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Time evolution with populations, coherence and trace per step.
    Evolve {
        #[command(flatten)]
        params: ParamArgs,
        /// Load a figure preset (fig2b, fig2d, fig4cd, zero).
        #[arg(long)]
        preset: Option<String>,
        /// Initial vectorized state: four comma-separated complex values (a+bi).
        #[arg(long, allow_hyphen_values = true, value_name = "LIST")]
        initial: Option<String>,
        #[arg(long)]
        t_max: Option<f64>,
        /// Time steps; the grid has steps + 1 points.
        #[arg(long)]
        steps: Option<usize>,
        /// raw or trace.
        #[arg(long, default_value_t = Normalization::Trace)]
        normalize: Normalization,
        /// Propagation tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        format: Option<Format>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Coalescence loci in closed form with numeric confirmation.
    FindEps {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        json: bool,
    },
}

/// A failed run and its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numeric(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_)
            | Error::DimensionMismatch { .. }
            | Error::BadGrid
            | Error::OmegaZero
            | Error::OffLocus { .. }
            | Error::Io { .. }
            | Error::Serialization(_) => Failure::Usage(e.to_string()),
            Error::Dense(_)
            | Error::DegenerateTheta { .. }
            | Error::TrivialBranch
            | Error::NoSignChange { .. }
            | Error::ZeroVector => Failure::Numeric(e.to_string()),
        }
    }
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
    match exec::thread_cap_from_env() {
        Ok(cap) => exec::install_thread_cap(cap),
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
