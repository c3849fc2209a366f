//! Open systems and their row-stacked Liouvillians.
//!
//! Row stacking maps `ρ` to `(ρ[0,:], ρ[1,:], ...)`, under which
//! `vec(A X B) = (A ⊗ Bᵀ) vec(X)`. The superoperator is therefore
//!
//! ```text
//! L = (H ⊗ I − I ⊗ H̄) + i Σ r [C ⊗ C̄ − ½ (C†C) ⊗ I − ½ I ⊗ (C†C)‾]
//! ```
//!
//! with evolution `dρ̂/dt = −i L ρ̂`. Each channel enters with its rate
//! linearly (effective jump `√r·C`) and the anticommutator uses `C†C`.

use serde::{Deserialize, Serialize};

use crate::densec::{kron, CMatrix, C64, I};
use crate::error::{Error, Result};

/// Tag stored with every Liouvillian.
pub const CONVENTION: &str = "hamiltonian-convention-row-stacking";

/// One dissipative channel: rate `r ≥ 0` and jump shape `C`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    rate: f64,
    op: CMatrix,
}

impl Channel {
    pub fn new(rate: f64, op: CMatrix) -> Result<Self> {
        if !(rate.is_finite() && rate >= 0.0) {
            return Err(Error::InvalidParams(format!("channel rate {rate} must be finite and >= 0")));
        }
        op.square_dim()?;
        Ok(Channel { rate, op })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn op(&self) -> &CMatrix {
        &self.op
    }
}

/// A possibly non-Hermitian Hamiltonian with dissipative channels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpenSystem {
    hamiltonian: CMatrix,
    channels: Vec<Channel>,
}

impl OpenSystem {
    pub fn new(hamiltonian: CMatrix, channels: Vec<Channel>) -> Result<Self> {
        let n = hamiltonian.square_dim()?;
        if n < 1 {
            return Err(Error::InvalidParams("empty Hamiltonian".into()));
        }
        for ch in &channels {
            if ch.op.rows() != n {
                return Err(Error::DimensionMismatch { expected: n, found: ch.op.rows() });
            }
        }
        Ok(OpenSystem { hamiltonian, channels })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Liouvillian {
    dim: usize,
    matrix: CMatrix,
}

impl Liouvillian {
    /// Wraps an `N²×N²` generator already in the crate's convention.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let n2 = matrix.square_dim()?;
        let dim = exact_sqrt(n2).ok_or(Error::DimensionMismatch { expected: n2, found: n2 })?;
        Ok(Liouvillian { dim, matrix })
    }

    /// Hilbert-space dimension `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn convention(&self) -> &'static str {
        CONVENTION
    }

    /// `dρ̂/dt = −i L ρ̂`.
    pub fn apply_rhs(&self, v: &[C64]) -> Result<Vec<C64>> {
        Ok(self.matrix.mul_vec(v)?.into_iter().map(|z| -I * z).collect())
    }
}

fn exact_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

/// Row-stacks a square matrix.
pub fn vec_row(rho: &CMatrix) -> Result<Vec<C64>> {
    rho.square_dim()?;
    Ok(rho.as_slice().to_vec())
}

/// Inverse of [`vec_row`].
pub fn unvec_row(v: &[C64]) -> Result<CMatrix> {
    let n = exact_sqrt(v.len()).ok_or(Error::DimensionMismatch { expected: 0, found: v.len() })?;
    Ok(CMatrix::from_vec(n, n, v.to_vec())?)
}

pub fn build_liouvillian(sys: &OpenSystem) -> Liouvillian {
    let n = sys.dim();
    let id = CMatrix::identity(n);
    let h = &sys.hamiltonian;
    let mut l = &kron(h, &id) - &kron(&id, &h.conj());
    for ch in &sys.channels {
        if ch.rate == 0.0 {
            continue;
        }
        let c = &ch.op;
        let cdc = &c.adjoint() * c;
        let mut d = kron(c, &c.conj());
        let half = C64::new(0.5, 0.0);
        d = &d - &kron(&cdc, &id).scale(half);
        d = &d - &kron(&id, &cdc.conj()).scale(half);
        l = &l + &d.scale(I * ch.rate);
    }
    Liouvillian { dim: n, matrix: l }
}

/// Master-equation right-hand side evaluated directly on the matrix `ρ`.
pub fn rhs_direct(sys: &OpenSystem, rho: &CMatrix) -> Result<CMatrix> {
    let n = sys.dim();
    if rho.rows() != n || rho.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: rho.rows().max(rho.cols()) });
    }
    let h = &sys.hamiltonian;
    let coherent = &(h * rho) - &(rho * &h.adjoint());
    let mut out = coherent.scale(-I);
    for ch in &sys.channels {
        let c = &ch.op;
        let cd = c.adjoint();
        let cdc = &cd * c;
        let jump = &(c * rho) * &cd;
        let anti = &(&cdc * rho) + &(rho * &cdc);
        let d = &jump - &anti.scale(C64::new(0.5, 0.0));
        out = &out + &d.scale(C64::new(ch.rate, 0.0));
    }
    Ok(out)
}
