//! Time evolution `ρ̂(t) = e^{−iLt} ρ̂(0)` with raw and trace-normalized views.
//!
//! Non-Hermitian evolution does not conserve the trace, so every trajectory
//! keeps the raw states and also divides by the trace where it is not
//! negligible (`|tr| > 1e−12·‖ρ̂‖`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::densec::{self, vec_norm, Propagator, C64, ZERO};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::vectorize::Liouvillian;

/// Relative floor below which a trace is treated as zero.
pub const TRACE_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    Raw,
    #[default]
    Trace,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Raw => "raw",
            Normalization::Trace => "trace",
        })
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Normalization::Raw),
            "trace" => Ok(Normalization::Trace),
            _ => Err(Error::InvalidParams(format!("unknown normalization {s:?} (expected raw or trace)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub dim: usize,
    pub times: Vec<f64>,
    pub raw_states: Vec<Vec<C64>>,
    pub traces: Vec<C64>,
    /// `raw / trace`, or `None` where the trace is below the floor.
    pub normalized_states: Vec<Option<Vec<C64>>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state(&self, k: usize, mode: Normalization) -> Option<&[C64]> {
        match mode {
            Normalization::Raw => Some(&self.raw_states[k]),
            Normalization::Trace => self.normalized_states[k].as_deref(),
        }
    }

    pub fn last(&self, mode: Normalization) -> Option<&[C64]> {
        self.len().checked_sub(1).and_then(|k| self.state(k, mode))
    }
}

/// Trace of a row-stacked `N×N` state.
pub fn trace_of(v: &[C64], dim: usize) -> C64 {
    (0..dim).map(|i| v[i * dim + i]).sum()
}

pub fn normalize_by_trace(v: &[C64], dim: usize) -> Option<Vec<C64>> {
    let tr = trace_of(v, dim);
    (tr.norm() > TRACE_FLOOR * vec_norm(v)).then(|| v.iter().map(|z| z / tr).collect())
}

/// `steps + 1` points `0, t_max/steps, …, t_max`.
pub fn uniform_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(t_max > 0.0 && t_max.is_finite()) || steps == 0 {
        return Err(Error::BadGrid);
    }
    Ok((0..=steps).map(|k| if k == steps { t_max } else { t_max * k as f64 / steps as f64 }).collect())
}

fn check_grid(times: &[f64]) -> Result<()> {
    let ok = !times.is_empty()
        && times[0] >= 0.0
        && times.iter().all(|t| t.is_finite())
        && times.windows(2).all(|w| w[1] > w[0]);
    if ok {
        Ok(())
    } else {
        Err(Error::BadGrid)
    }
}

/// Evolves `rho0` over `times` (strictly increasing, starting at `t ≥ 0`).
///
/// Consecutive states are linked by `e^{−iL·Δt}`; the step matrix is reused
/// while `Δt` stays the same to rounding.
pub fn evolve(l: &Liouvillian, rho0: &[C64], times: &[f64], tol: f64) -> Result<Trajectory> {
    let n2 = l.matrix().rows();
    if rho0.len() != n2 {
        return Err(Error::DimensionMismatch { expected: n2, found: rho0.len() });
    }
    if !(tol >= densec::ACHIEVABLE_TOL) {
        return Err(densec::DenseError::BadTolerance(tol).into());
    }
    check_grid(times)?;
    if rho0.iter().any(|z| !z.is_finite()) {
        return Err(densec::DenseError::NonFinite.into());
    }
    let dim = l.dim();
    let t_end = times[times.len() - 1];
    let mut raw_states = Vec::with_capacity(times.len());
    let mut current = if times[0] == 0.0 {
        rho0.to_vec()
    } else {
        Propagator::new(l.matrix(), times[0])?.apply(rho0)?
    };
    raw_states.push(current.clone());
    let mut step: Option<Propagator> = None;
    for w in times.windows(2) {
        let dt = w[1] - w[0];
        let reuse = step.as_ref().is_some_and(|p| (p.dt() - dt).abs() <= 8.0 * f64::EPSILON * t_end);
        if !reuse {
            step = Some(Propagator::new(l.matrix(), dt)?);
        }
        current = step.as_ref().unwrap().apply(&current)?;
        if current.iter().any(|z| !z.is_finite()) {
            return Err(densec::DenseError::NonFinite.into());
        }
        raw_states.push(current.clone());
    }
    let traces = raw_states.iter().map(|v| trace_of(v, dim)).collect();
    let normalized_states = raw_states.iter().map(|v| normalize_by_trace(v, dim)).collect();
    // the first entry is the caller's vector verbatim when t0 = 0
    Ok(Trajectory { dim, times: times.to_vec(), raw_states, traces, normalized_states })
}

/// Independent trajectories from several initial states.
pub fn evolve_batch(
    l: &Liouvillian,
    initials: &[Vec<C64>],
    times: &[f64],
    tol: f64,
    exec: Execution,
) -> Vec<Result<Trajectory>> {
    exec.map(initials, |rho0| evolve(l, rho0, times, tol))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableRow {
    pub t: f64,
    pub rho00: Option<f64>,
    pub rho11: Option<f64>,
    pub re_rho10: Option<f64>,
    pub im_rho10: Option<f64>,
    pub re_trace: f64,
    pub im_trace: f64,
}

impl ObservableRow {
    pub const HEADER: [&'static str; 7] = ["t", "rho00", "rho11", "re_rho10", "im_rho10", "re_trace", "im_trace"];
}

/// Populations, `ρ₁₀` and trace per step of a two-level trajectory. Element
/// columns are `None` where the normalized state is undefined.
pub fn observables(traj: &Trajectory, mode: Normalization) -> Result<Vec<ObservableRow>> {
    if traj.dim != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: traj.dim });
    }
    Ok((0..traj.len())
        .map(|k| {
            let s = traj.state(k, mode);
            let tr = traj.traces[k];
            ObservableRow {
                t: traj.times[k],
                rho00: s.map(|v| v[0].re),
                rho11: s.map(|v| v[3].re),
                re_rho10: s.map(|v| v[2].re),
                im_rho10: s.map(|v| v[2].im),
                re_trace: tr.re,
                im_trace: tr.im,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SteadyLimit {
    State(Vec<C64>),
    Diverging,
    NotConverged,
}

/// Growth factor of `|tr|` over its initial value that counts as divergence.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

/// Asymptotic normalized state from the last `window` steps.
///
/// Divergence is checked first: `|tr|` has passed `1e6·|tr(0)|` and grows
/// monotonically across the window. Otherwise the window must be fully
/// normalizable with pairwise distances (max-abs) within `tol`; its mean is
/// returned.
pub fn steady_limit(traj: &Trajectory, window: usize, tol: f64) -> SteadyLimit {
    let n = traj.len();
    if window == 0 || window > n {
        return SteadyLimit::NotConverged;
    }
    let tail = n - window..n;
    let t0 = traj.traces[0].norm();
    let mags: Vec<f64> = traj.traces[tail.clone()].iter().map(|z| z.norm()).collect();
    let growing = mags.windows(2).all(|w| w[1] > w[0]);
    if growing && mags[mags.len() - 1] > DIVERGENCE_FACTOR * t0.max(f64::MIN_POSITIVE) {
        return SteadyLimit::Diverging;
    }
    let states: Option<Vec<&Vec<C64>>> = traj.normalized_states[tail].iter().map(Option::as_ref).collect();
    let Some(states) = states else { return SteadyLimit::NotConverged };
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            if densec::vec_max_abs_diff(a, b) > tol {
                return SteadyLimit::NotConverged;
            }
        }
    }
    let mut mean = vec![ZERO; states[0].len()];
    for s in &states {
        for (m, z) in mean.iter_mut().zip(s.iter()) {
            *m += z;
        }
    }
    let w = states.len() as f64;
    SteadyLimit::State(mean.into_iter().map(|z| z / w).collect())
}
