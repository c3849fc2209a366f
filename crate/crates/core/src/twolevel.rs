//! The driven two-level system with loss `γ₁` on `|0⟩`, gain `γ₂` on `|1⟩`,
//! coupling `Ω`, and decay `|1⟩ → |0⟩` at rate `Γ`.
//!
//! ```text
//! H = ½ [[−iγ₁, Ω], [Ω, iγ₂]],    C = σ₋ = [[0, 1], [0, 0]] at rate Γ
//! ```
//!
//! Closed forms use `η± = ±γ₁ + γ₂ − Γ` and
//!
//! ```text
//! Θ = (54ΓΩ² + √(2916Γ²Ω⁴ − 27(η₊² − 4Ω²)³))^{1/3}
//! Λ(x) = (i + x)Θ/6 + (i − x)(η₊² − 4Ω²)/(2Θ)
//! ```
//!
//! with principal square and cube roots. Other branch choices only permute
//! the three non-trivial eigenvalues, so spectra are compared as multisets.
//!
//! The Liouvillian splits exactly into the symmetric coherence vector
//! `(0, 1, 1, 0)` (eigenvalue `iη₋/2`, the trivial branch) and the invariant
//! three-dimensional sector `{(a, b, −b, d)}` holding the other three.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::densec::{self, rank_at, CMatrix, C64, I, ONE, ZERO};
use crate::error::{Error, Result};
use crate::vectorize::{build_liouvillian, Channel, Liouvillian, OpenSystem};

pub type State4 = [C64; 4];

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub omega: f64,
    pub dissipation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    Gamma1,
    Gamma2,
    Omega,
    Dissipation,
}

impl Param {
    pub const ALL: [Param; 4] = [Param::Gamma1, Param::Gamma2, Param::Omega, Param::Dissipation];

    pub fn name(self) -> &'static str {
        match self {
            Param::Gamma1 => "gamma1",
            Param::Gamma2 => "gamma2",
            Param::Omega => "omega",
            Param::Dissipation => "dissipation",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown parameter {s:?}")))
    }
}

impl TwoLevelParams {
    pub fn new(gamma1: f64, gamma2: f64, omega: f64, dissipation: f64) -> Result<Self> {
        let p = TwoLevelParams { gamma1, gamma2, omega, dissipation };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("omega", self.omega),
            ("dissipation", self.dissipation),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {v} is not finite")));
            }
            if name != "omega" && v < 0.0 {
                return Err(Error::InvalidParams(format!("{name} = {v} must be >= 0")));
            }
        }
        Ok(())
    }

    pub fn get(&self, p: Param) -> f64 {
        match p {
            Param::Gamma1 => self.gamma1,
            Param::Gamma2 => self.gamma2,
            Param::Omega => self.omega,
            Param::Dissipation => self.dissipation,
        }
    }

    pub fn with(mut self, p: Param, value: f64) -> Self {
        match p {
            Param::Gamma1 => self.gamma1 = value,
            Param::Gamma2 => self.gamma2 = value,
            Param::Omega => self.omega = value,
            Param::Dissipation => self.dissipation = value,
        }
        self
    }

    /// All rates divided by `γ₁`, so that `γ₁ = 1`.
    pub fn in_gamma1_units(&self) -> Result<Self> {
        if self.gamma1 <= 0.0 {
            return Err(Error::InvalidParams("normalized units need gamma1 > 0".into()));
        }
        let g = self.gamma1;
        Ok(TwoLevelParams { gamma1: 1.0, gamma2: self.gamma2 / g, omega: self.omega / g, dissipation: self.dissipation / g })
    }

    /// `η₊ = γ₁ + γ₂ − Γ`
    pub fn eta_plus(&self) -> f64 {
        self.gamma1 + self.gamma2 - self.dissipation
    }

    /// `η₋ = −γ₁ + γ₂ − Γ`
    pub fn eta_minus(&self) -> f64 {
        -self.gamma1 + self.gamma2 - self.dissipation
    }

    /// Analytic trace of the Liouvillian, `i(−γ₁ + (γ₂−γ₁−Γ) + γ₂−Γ)`.
    pub fn liouvillian_trace(&self) -> C64 {
        I * (-self.gamma1 + (self.gamma2 - self.gamma1 - self.dissipation) + self.gamma2 - self.dissipation)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Intermediates {
    pub eta_plus: f64,
    pub eta_minus: f64,
    pub theta: C64,
    /// `η₊² − 4Ω²`
    pub q: f64,
}

impl Intermediates {
    pub fn new(p: &TwoLevelParams) -> Self {
        let eta_plus = p.eta_plus();
        let q = eta_plus * eta_plus - 4.0 * p.omega * p.omega;
        let g = p.dissipation;
        let om2 = p.omega * p.omega;
        let disc = C64::new(2916.0 * g * g * om2 * om2 - 27.0 * q * q * q, 0.0).sqrt();
        let theta = (C64::new(54.0 * g * om2, 0.0) + disc).cbrt();
        Intermediates { eta_plus, eta_minus: p.eta_minus(), theta, q }
    }

    /// `Λ(x)`; meaningful for `x ∈ {0, ±√3}`.
    pub fn lambda_of(&self, x: f64) -> C64 {
        (I + x) * self.theta / 6.0 + (I - x) * self.q / (self.theta * 2.0)
    }

    /// `Θ³` recomputed from the defining expression's radicand.
    pub fn theta_cubed_residual(&self, p: &TwoLevelParams) -> f64 {
        let om2 = p.omega * p.omega;
        let g = p.dissipation;
        let rhs = C64::new(54.0 * g * om2, 0.0)
            + C64::new(2916.0 * g * g * om2 * om2 - 27.0 * self.q.powi(3), 0.0).sqrt();
        (self.theta.powi(3) - rhs).norm()
    }
}

/// `|Θ|` below which the closed forms are numerically meaningless.
pub fn theta_floor(p: &TwoLevelParams) -> f64 {
    1e-6 * (1.0 + p.eta_plus().abs() + p.omega.abs() + p.dissipation)
}

fn checked_intermediates(p: &TwoLevelParams) -> Result<Intermediates> {
    p.validate()?;
    let it = Intermediates::new(p);
    let floor = theta_floor(p);
    if !(it.theta.norm() >= floor) {
        return Err(Error::DegenerateTheta { theta: it.theta.norm(), floor });
    }
    Ok(it)
}

pub fn hamiltonian(p: &TwoLevelParams) -> CMatrix {
    let half = 0.5;
    CMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => -I * p.gamma1 * half,
        (1, 1) => I * p.gamma2 * half,
        _ => C64::new(p.omega * half, 0.0),
    })
}

/// `σ₋ = |0⟩⟨1|`.
pub fn lowering() -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| if (i, j) == (0, 1) { ONE } else { ZERO })
}

pub fn open_system(p: &TwoLevelParams) -> Result<OpenSystem> {
    p.validate()?;
    let channels = if p.dissipation > 0.0 { vec![Channel::new(p.dissipation, lowering())?] } else { vec![] };
    OpenSystem::new(hamiltonian(p), channels)
}

pub fn liouvillian(p: &TwoLevelParams) -> Result<Liouvillian> {
    Ok(build_liouvillian(&open_system(p)?))
}

/// Closed-form spectrum `[λ₁, λ₂, λ₃, λ₄]`.
pub fn analytic_eigenvalues(p: &TwoLevelParams) -> Result<[C64; 4]> {
    let it = checked_intermediates(p)?;
    let em = it.eta_minus;
    Ok([
        I * em * 0.5,
        I * 0.5 * (em - 2.0 * I * it.lambda_of(0.0)),
        I * 0.5 * (em + I * it.lambda_of(SQRT3)),
        I * 0.5 * (em + I * it.lambda_of(-SQRT3)),
    ])
}

/// Closed-form eigenstates matching [`analytic_eigenvalues`] index by index,
/// scaled so the last component is 1 (state 1 is `(0, 1, 1, 0)`).
pub fn analytic_eigenstates(p: &TwoLevelParams) -> Result<[State4; 4]> {
    let it = checked_intermediates(p)?;
    if p.omega == 0.0 {
        return Err(Error::OmegaZero);
    }
    let om = p.omega;
    let om2 = om * om;
    let ep = it.eta_plus;
    let th = it.theta;

    let l0 = it.lambda_of(0.0);
    let a2 = ep + 2.0 * I * l0;
    // 3η₊² here; with 3η₊ the vector is not an eigenvector
    let s2 = [
        ONE - a2 * (3.0 * ep * ep + th * th - 12.0 * om2) / (6.0 * om2 * th),
        -I * a2 / (2.0 * om),
        I * a2 / (2.0 * om),
        ONE,
    ];
    let s34 = |x: f64| {
        let lx = it.lambda_of(x);
        let a = ep - I * lx;
        [ONE + a * (-I * lx) / (2.0 * om2), -I * a / (2.0 * om), I * a / (2.0 * om), ONE]
    };
    Ok([[ZERO, ONE, ONE, ZERO], s2, s34(SQRT3), s34(-SQRT3)])
}

/// Predicted coherence `Ω(ρ₀₀ − ρ₁₁)/(2λ − iη₋)` of an eigenstate.
///
/// This is the `ρ₁₀` entry (row-stacked index 2); the `ρ₀₁` entry is its
/// negative. Either is purely imaginary exactly when the other is.
pub fn coherence_relation(rho00: C64, rho11: C64, lambda: C64, p: &TwoLevelParams) -> Result<C64> {
    let num = (rho00 - rho11) * p.omega;
    if num == ZERO {
        return Ok(ZERO);
    }
    let em = p.eta_minus();
    let den = 2.0 * lambda - I * em;
    if den.norm() <= 1e-12 * (1.0 + lambda.norm() + em.abs()) {
        return Err(Error::TrivialBranch);
    }
    Ok(num / den)
}

/// Maximally mixed steady state at `Γ = (γ₁+γ₂)/2`; returns `(Γ, state)`.
///
/// `(½, 0, 0, ½)` is a null vector only on the balanced line `γ₁ = γ₂`
/// (equal populations make the trace rate `γ₂ρ₁₁ − γ₁ρ₀₀` vanish only
/// there), where `Γ = γ₁`. Off that line this returns `InvalidParams`.
pub fn steady_s1(gamma1: f64, gamma2: f64) -> Result<(f64, State4)> {
    if (gamma1 - gamma2).abs() > 1e-12 * (1.0 + gamma1.abs() + gamma2.abs()) {
        return Err(Error::InvalidParams(format!(
            "the maximally mixed steady state needs gamma1 = gamma2 (got {gamma1}, {gamma2})"
        )));
    }
    let half = C64::new(0.5, 0.0);
    Ok((0.5 * (gamma1 + gamma2), [half, ZERO, ZERO, half]))
}

/// Uncoupled (`Ω = 0`) steady state at `γ₂ = Γ`; returns `(γ₂, state)`.
pub fn steady_s2(gamma1: f64, dissipation: f64) -> Result<(f64, State4)> {
    let total = gamma1 + dissipation;
    if !(total > 0.0) {
        return Err(Error::InvalidParams("steady state s2 needs gamma1 + dissipation > 0".into()));
    }
    let gamma2 = dissipation;
    let s = gamma1 + gamma2;
    Ok((gamma2, [C64::new(dissipation / s, 0.0), ZERO, ZERO, C64::new((s - dissipation) / s, 0.0)]))
}

/// The incoherent (`Ω = 0`, `Γ = γ₁ + γ₂`) coalescence point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncoherentNlep {
    pub gamma1: f64,
    pub gamma2: f64,
    pub dissipation: f64,
    /// The literature value `−2iγ₁`, kept for comparison.
    pub lambda_reported: C64,
    /// Mean of the numerically computed (fourfold) eigenvalue.
    pub lambda_derived: C64,
    /// `iη₋/2` from the closed form; equals `−iγ₁` here.
    pub lambda_closed_form: C64,
    pub eigenvalues: Vec<C64>,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
    pub state: State4,
    /// Whether the literature value agrees with the derived one to 1e-9.
    pub reported_value_confirmed: bool,
}

pub fn nlep_incoherent(gamma1: f64, gamma2: f64) -> Result<IncoherentNlep> {
    let dissipation = gamma1 + gamma2;
    let p = TwoLevelParams::new(gamma1, gamma2, 0.0, dissipation)?;
    let l = liouvillian(&p)?;
    let vals = densec::eig(l.matrix(), densec::EIG_TOL)?.values;
    let mean = vals.iter().sum::<C64>() / vals.len() as f64;
    let scale = 1.0 + mean.norm();
    let algebraic = vals.iter().filter(|v| (*v - mean).norm() <= 1e-6 * scale).count();
    let geometric = 4 - rank_at(l.matrix(), mean, densec::RANK_TOL);
    let lambda_reported = C64::new(0.0, -2.0 * gamma1);
    Ok(IncoherentNlep {
        gamma1,
        gamma2,
        dissipation,
        lambda_reported,
        lambda_derived: mean,
        lambda_closed_form: I * p.eta_minus() * 0.5,
        eigenvalues: vals,
        algebraic_multiplicity: algebraic,
        geometric_multiplicity: geometric,
        state: [ONE, ZERO, ZERO, ZERO],
        reported_value_confirmed: (lambda_reported - mean).norm() <= 1e-9 * scale,
    })
}

/// Coalescence points at `Γ = 0`: `γ₂ = ±2Ω − γ₁`, returned as `(plus, minus)`.
pub fn ep_locus_gamma0(gamma1: f64, omega: f64) -> (f64, f64) {
    (2.0 * omega - gamma1, -2.0 * omega - gamma1)
}

/// Roots `η₊ = ±√(3(4Γ²Ω⁴)^{1/3} + 4Ω²)` of the coherent coalescence locus.
pub fn nlep_coherent_locus(omega: f64, dissipation: f64) -> (f64, f64) {
    let om2 = omega * omega;
    let root = (3.0 * (4.0 * dissipation * dissipation * om2 * om2).cbrt() + 4.0 * om2).sqrt();
    (root, -root)
}

/// Converts an `η₊` value to the matching gain, `γ₂ = η₊ − γ₁ + Γ`.
pub fn gamma2_from_eta_plus(eta_plus: f64, gamma1: f64, dissipation: f64) -> f64 {
    eta_plus - gamma1 + dissipation
}

/// Relative distance of `η₊` from the nearest coherent-locus root.
pub fn coherent_locus_residual(p: &TwoLevelParams) -> f64 {
    let (hi, lo) = nlep_coherent_locus(p.omega, p.dissipation);
    let ep = p.eta_plus();
    (ep - hi).abs().min((ep - lo).abs()) / (1.0 + ep.abs())
}

pub const LOCUS_TOL: f64 = 1e-9;

/// Coalesced eigenpair on the coherent locus:
/// `λ = i[η₋ − (2ΓΩ²)^{1/3}]/2` and its eigenvector (last component 1).
pub fn nlep_coherent_pair(p: &TwoLevelParams) -> Result<(C64, State4)> {
    p.validate()?;
    if p.omega == 0.0 {
        return Err(Error::OmegaZero);
    }
    let residual = coherent_locus_residual(p);
    if residual > LOCUS_TOL {
        return Err(Error::OffLocus { residual });
    }
    let om = p.omega;
    let c = (2.0 * p.dissipation * om * om).cbrt();
    let a = p.eta_plus() + c;
    let lambda = I * 0.5 * (p.eta_minus() - c);
    let state = [C64::new(1.0 + a * c / (2.0 * om * om), 0.0), -I * a / (2.0 * om), I * a / (2.0 * om), ONE];
    Ok((lambda, state))
}

/// Orthonormal basis of the invariant sector `{(a, b, −b, d)}` (columns).
fn sector_basis() -> [[f64; 3]; 4] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [[1.0, 0.0, 0.0], [0.0, r, 0.0], [0.0, -r, 0.0], [0.0, 0.0, 1.0]]
}

/// The Liouvillian restricted to the sector `{(a, b, −b, d)}` in the basis
/// `e₀, (e₁ − e₂)/√2, e₃`.
pub fn sector_block(p: &TwoLevelParams) -> Result<CMatrix> {
    let l = liouvillian(p)?;
    let m = l.matrix();
    let b = sector_basis();
    Ok(CMatrix::from_fn(3, 3, |i, j| {
        let mut s = ZERO;
        for r in 0..4 {
            for c in 0..4 {
                s += b[r][i] * m[(r, c)] * b[c][j];
            }
        }
        s
    }))
}

/// Maps sector coordinates back to a row-stacked state.
pub fn lift(y: &[C64]) -> Vec<C64> {
    let b = sector_basis();
    (0..4).map(|row| (0..3).map(|k| y[k] * b[row][k]).sum()).collect()
}

/// Sector eigenvector for an accurately known eigenvalue `lambda`, by
/// inverse iteration. Suited to coalescence points, where the eigensolver's
/// own vectors lose accuracy.
pub fn sector_state_at(p: &TwoLevelParams, lambda: C64) -> Result<Vec<C64>> {
    let block = sector_block(p)?;
    let start = [C64::new(1.0, 0.0), C64::new(0.37, 0.21), C64::new(0.59, -0.13)];
    Ok(lift(&densec::inverse_iteration(&block, lambda, &start, 4)?))
}

/// One numerically computed eigenpair of the two-level Liouvillian.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenpair {
    pub value: C64,
    pub state: Vec<C64>,
}

/// Numeric spectrum with the exact sector split: index 0 is the trivial
/// branch `(iη₋/2, (0,1,1,0)/√2)`, indices 1..4 come from the eigensolver on
/// the 3×3 sector block, lifted back to four components.
pub fn sector_eigenpairs(p: &TwoLevelParams, tol: f64) -> Result<(Vec<Eigenpair>, f64)> {
    let block = sector_block(p)?;
    let res = densec::eig(&block, tol)?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = vec![Eigenpair { value: I * p.eta_minus() * 0.5, state: vec![ZERO, ONE * r, ONE * r, ZERO] }];
    for (value, y) in res.pairs() {
        out.push(Eigenpair { value, state: lift(y) });
    }
    Ok((out, res.residual_bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(g1: f64, g2: f64, om: f64, d: f64) -> TwoLevelParams {
        TwoLevelParams::new(g1, g2, om, d).unwrap()
    }

    #[test]
    fn hamiltonian_entries() {
        let h = hamiltonian(&p(1.0, 1.0, 2.0, 0.0));
        assert_eq!(h[(0, 0)], C64::new(0.0, -0.5));
        assert_eq!(h[(0, 1)], ONE);
        assert_eq!(h[(1, 0)], ONE);
        assert_eq!(h[(1, 1)], C64::new(0.0, 0.5));
        assert_eq!(hamiltonian(&p(0.0, 0.0, 0.0, 0.0)), CMatrix::zeros(2, 2));
        let h = hamiltonian(&p(0.3, 2.0, -1.1, 0.0));
        assert_eq!(h, h.transpose());
    }

    #[test]
    fn param_validation() {
        assert!(TwoLevelParams::new(-1.0, 0.0, 0.0, 0.0).is_err());
        assert!(TwoLevelParams::new(1.0, -0.1, 0.0, 0.0).is_err());
        assert!(TwoLevelParams::new(1.0, 0.0, 0.0, -2.0).is_err());
        assert!(TwoLevelParams::new(1.0, 0.0, f64::NAN, 0.0).is_err());
        assert!(TwoLevelParams::new(1.0, 0.0, -3.0, 0.0).is_ok());
        assert_eq!("omega".parse::<Param>().unwrap(), Param::Omega);
        assert!("beta".parse::<Param>().is_err());
    }

    #[test]
    fn zero_dissipation_has_no_channel() {
        assert!(open_system(&p(1.0, 1.0, 2.0, 0.0)).unwrap().channels().is_empty());
    }

    #[test]
    fn pt_symmetric_point_closed_form() {
        let it = Intermediates::new(&p(1.0, 1.0, 2.0, 0.0));
        assert!((it.theta - C64::new(6.0, 0.0)).norm() < 1e-12, "{}", it.theta);
        assert!(it.lambda_of(0.0).norm() < 1e-12);
        assert!((it.lambda_of(SQRT3) - C64::new(2.0 * SQRT3, 0.0)).norm() < 1e-12);
        let vals = analytic_eigenvalues(&p(1.0, 1.0, 2.0, 0.0)).unwrap();
        let mut re: Vec<f64> = vals.iter().map(|v| v.re).collect();
        re.sort_by(f64::total_cmp);
        for (a, b) in re.iter().zip([-SQRT3, 0.0, 0.0, SQRT3]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(vals.iter().all(|v| v.im.abs() < 1e-12));
    }

    #[test]
    fn theta_cubed_recomputes() {
        for q in [p(1.0, 1.0, 2.0, 1.0), p(0.2, 3.0, -1.5, 0.7), p(2.0, 0.0, 0.3, 4.0)] {
            let it = Intermediates::new(&q);
            assert!(it.theta_cubed_residual(&q) < 1e-10 * (1.0 + it.theta.norm().powi(3)));
        }
    }

    #[test]
    fn degenerate_theta_at_gamma0_ep() {
        // Γ = 0 and η₊² = 4Ω²
        let q = p(1.0, 3.0, 2.0, 0.0);
        assert!(matches!(analytic_eigenvalues(&q), Err(Error::DegenerateTheta { .. })));
        assert!(matches!(analytic_eigenstates(&q), Err(Error::DegenerateTheta { .. })));
    }

    #[test]
    fn eigenstates_need_coupling() {
        assert!(matches!(analytic_eigenstates(&p(1.0, 1.5, 0.0, 1.0)), Err(Error::OmegaZero)));
    }

    #[test]
    fn coherence_relation_edge_cases() {
        let q = p(1.0, 1.0, 2.0, 1.0);
        let half = C64::new(0.5, 0.0);
        assert_eq!(coherence_relation(half, half, C64::new(0.3, -1.0), &q).unwrap(), ZERO);
        let q0 = p(1.0, 1.0, 0.0, 1.0);
        assert_eq!(coherence_relation(ONE, ZERO, C64::new(0.3, -1.0), &q0).unwrap(), ZERO);
        let trivial = I * q.eta_minus() * 0.5;
        assert!(matches!(coherence_relation(ONE, ZERO, trivial, &q), Err(Error::TrivialBranch)));
    }

    #[test]
    fn steady_families() {
        assert_eq!(steady_s1(1.0, 1.0).unwrap().0, 1.0);
        assert_eq!(steady_s1(0.0, 0.0).unwrap().0, 0.0);
        assert!(steady_s1(1.0, 3.0).is_err());
        let (g2, s) = steady_s2(1.0, 2.0).unwrap();
        assert_eq!(g2, 2.0);
        assert!((s[0].re - 2.0 / 3.0).abs() < 1e-15 && (s[3].re - 1.0 / 3.0).abs() < 1e-15);
        let (_, s) = steady_s2(1.0, 1.0).unwrap();
        assert_eq!(s, steady_s1(1.0, 1.0).unwrap().1);
        let (_, s) = steady_s2(0.0, 1.0).unwrap();
        assert_eq!(s, [ONE, ZERO, ZERO, ZERO]);
        assert!(steady_s2(0.0, 0.0).is_err());
    }

    #[test]
    fn locus_formulas() {
        assert_eq!(ep_locus_gamma0(1.0, 2.0), (3.0, -5.0));
        assert_eq!(ep_locus_gamma0(1.0, 0.5), (0.0, -2.0));
        let (hi, lo) = nlep_coherent_locus(2.0, 2.0);
        assert!((hi - 5.920_203_765_379_903).abs() < 1e-12);
        assert_eq!(lo, -hi);
        assert!((gamma2_from_eta_plus(hi, 1.0, 2.0) - 6.920_203_765_379_903).abs() < 1e-12);
        let (small, _) = nlep_coherent_locus(2.0, 1e-12);
        assert!((small - 4.0).abs() < 1e-6);
    }

    #[test]
    fn off_locus_is_rejected() {
        assert!(matches!(nlep_coherent_pair(&p(1.0, 6.0, 2.0, 2.0)), Err(Error::OffLocus { .. })));
        assert!(matches!(nlep_coherent_pair(&p(1.0, 6.0, 0.0, 2.0)), Err(Error::OmegaZero)));
    }

    #[test]
    fn sector_split_reproduces_full_spectrum() {
        let q = p(1.0, 1.3, 2.0, 0.8);
        let (pairs, _) = sector_eigenpairs(&q, 1e-10).unwrap();
        let l = liouvillian(&q).unwrap();
        for ep in &pairs {
            let lv = l.matrix().mul_vec(&ep.state).unwrap();
            let r: f64 = lv.iter().zip(&ep.state).map(|(a, b)| (a - ep.value * b).norm_sqr()).sum::<f64>().sqrt();
            assert!(r < 1e-12, "{r}");
        }
    }
}
