//! Vectorized non-Hermitian Lindblad dynamics.
//!
//! A density matrix is row-stacked into a vector and the master equation
//! `dρ/dt = -i(Hρ - ρH†) + Σ r (CρC† - ½{C†C, ρ})` becomes the linear system
//! `dρ̂/dt = -i L ρ̂`. An eigenvalue `λ` of `L` therefore evolves as
//! `e^{-iλt}`: `Im λ = 0` is stationary, `Im λ < 0` decays.
//!
//! Modules, bottom up:
//!
//! * [`densec`] dense complex kernels (Kronecker, eigen, exponential, rank)
//! * [`vectorize`] open systems and their Liouvillians
//! * [`twolevel`] the gain/loss/decay qubit with closed-form spectra
//! * [`spectra`] steady-state verdicts, exceptional points, arc flags
//! * [`dynamics`] trajectories and observables
//! * [`sweep`] one-parameter sweeps, root finding and CSV/JSON output
//!
//! With the default `parallel` feature, sweeps and batch evaluations fan out
//! over rayon; without it the same code runs sequentially and produces
//! identical results.

pub mod densec;
pub mod dynamics;
mod error;
pub mod exec;
pub mod spectra;
pub mod sweep;
pub mod twolevel;
pub mod vectorize;

pub use densec::{CMatrix, C64};
pub use error::{Error, Result};
pub use twolevel::TwoLevelParams;
pub use vectorize::{Liouvillian, OpenSystem};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
