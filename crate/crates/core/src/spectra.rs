//! Classification of Liouvillian spectra.
//!
//! In the crate's convention an eigenvalue `λ` evolves as `e^{−iλt}`, so a
//! steady state needs some `Im λ = 0` with every other `Im λ ≤ 0`. A purely
//! imaginary `λ` (`Re λ = 0`) lies on a non-Hermitian Fermi arc; points where
//! eigenvalues and eigenvectors coalesce are exceptional points (EPs).

use serde::{Deserialize, Serialize};

use crate::densec::{self, rank_at, C64};
use crate::error::{Error, Result};
use crate::twolevel::{self, TwoLevelParams};
use crate::vectorize::Liouvillian;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Eigen residual bound relative to `‖L‖_F`.
    pub eig: f64,
    /// Steady tolerance factor: `|Im λ| ≤ steady·(1 + max|λ|)`.
    pub steady: f64,
    /// Cluster radius factor for coalescence: `ep·(1 + max|λ|)`. A `k`-fold
    /// defective eigenvalue splits by about `ε^{1/k}` in floating point, so
    /// the default `1e-4` still gathers third-order points.
    pub ep: f64,
    /// Relative singular-value cutoff for geometric multiplicity.
    pub rank: f64,
    /// Bound on `|Re ρ₀₁|` for the half-pi phase verdict.
    pub phase: f64,
    /// Bound on `|Re λ|` for arc membership.
    pub arc: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { eig: densec::EIG_TOL, steady: 1e-9, ep: 1e-4, rank: densec::RANK_TOL, phase: 1e-8, arc: 1e-9 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eig", self.eig),
            ("steady", self.steady),
            ("ep", self.ep),
            ("rank", self.rank),
            ("phase", self.phase),
            ("arc", self.arc),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!("tolerance {name} = {v} must be positive")));
            }
        }
        Ok(())
    }
}

fn max_abs(eigs: &[C64]) -> f64 {
    eigs.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Default absolute steady tolerance for a spectrum.
pub fn steady_tol(eigs: &[C64], factor: f64) -> f64 {
    factor * (1.0 + max_abs(eigs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SteadyVerdict {
    HasSteadyState,
    AllDecaying,
    Unstable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteadyClassification {
    pub verdict: SteadyVerdict,
    /// Indices with `|Im λ| ≤ tol_s`.
    pub indices: Vec<usize>,
    pub tol: f64,
}

/// Steady-state verdict for an absolute tolerance `tol_s`.
pub fn classify_steady(eigs: &[C64], tol_s: f64) -> SteadyClassification {
    let indices: Vec<usize> = eigs.iter().enumerate().filter(|(_, z)| z.im.abs() <= tol_s).map(|(i, _)| i).collect();
    let verdict = if eigs.iter().any(|z| z.im > tol_s) {
        SteadyVerdict::Unstable
    } else if !indices.is_empty() {
        SteadyVerdict::HasSteadyState
    } else {
        SteadyVerdict::AllDecaying
    };
    SteadyClassification { verdict, indices, tol: tol_s }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpCluster {
    pub mean: C64,
    pub algebraic: usize,
    pub geometric: usize,
    pub members: Vec<usize>,
}

impl EpCluster {
    /// `geometric = 0` means the cluster mean is not an eigenvalue at the rank
    /// tolerance: the members are close but distinct.
    pub fn is_exceptional(&self) -> bool {
        self.geometric >= 1 && self.geometric < self.algebraic
    }
}

/// Single-linkage clusters of radius `radius` (indices into `eigs`).
pub fn cluster_eigenvalues(eigs: &[C64], radius: f64) -> Vec<Vec<usize>> {
    let n = eigs.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eigs[i] - eigs[j]).norm() <= radius {
                let (a, b) = (root(&mut label, i), root(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut label, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Clusters of size ≥ 2 with algebraic (cluster size) and geometric
/// (`dim − rank(L − λ̄I)`) multiplicities.
pub fn detect_ep(l: &Liouvillian, tol: &Tolerances) -> Result<Vec<EpCluster>> {
    let eigs = densec::eig(l.matrix(), tol.eig)?.values;
    Ok(clusters_from(l, &eigs, tol))
}

pub(crate) fn clusters_from(l: &Liouvillian, eigs: &[C64], tol: &Tolerances) -> Vec<EpCluster> {
    let radius = tol.ep * (1.0 + max_abs(eigs));
    let n = l.matrix().rows();
    cluster_eigenvalues(eigs, radius)
        .into_iter()
        .filter(|g| g.len() >= 2)
        .map(|members| {
            let mean = members.iter().map(|&i| eigs[i]).sum::<C64>() / members.len() as f64;
            let algebraic = members.len();
            let measured = n - rank_at(l.matrix(), mean, tol.rank);
            if measured > algebraic {
                log::debug!("rank test found {measured} null directions for a cluster of {algebraic}");
            }
            EpCluster { mean, algebraic, geometric: measured.min(algebraic), members }
        })
        .collect()
}

/// Fixes the free complex scale of a row-stacked `N×N` state: the last
/// diagonal entry `ρ_{N−1,N−1}` becomes 1. If that entry is negligible, the
/// first largest-modulus entry becomes 1 instead.
pub fn gauge_fix(state: &[C64]) -> Result<Vec<C64>> {
    let big = state.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if big == 0.0 || state.is_empty() {
        return Err(Error::ZeroVector);
    }
    let last = state.len() - 1;
    let anchor = if state[last].norm() >= 1e-12 * big {
        last
    } else {
        state.iter().position(|z| z.norm() == big).unwrap_or(0)
    };
    let a = state[anchor];
    let mut out: Vec<C64> = state.iter().map(|z| z / a).collect();
    out[anchor] = C64::new(1.0, 0.0);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseVerdict {
    HalfPi,
    NotApplicable,
    Violated,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseTol {
    /// Arc membership: `|Re λ| ≤ arc`.
    pub arc: f64,
    /// Phase bound: `|Re ρ₀₁| ≤ phase`; also the floor for "nonzero".
    pub phase: f64,
}

impl PhaseTol {
    pub fn uniform(t: f64) -> Self {
        PhaseTol { arc: t, phase: t }
    }
}

impl From<&Tolerances> for PhaseTol {
    fn from(t: &Tolerances) -> Self {
        PhaseTol { arc: t.arc, phase: t.phase }
    }
}

/// Checks that a gauge-fixed two-level eigenstate on an arc has a purely
/// imaginary coherence.
pub fn phase_check(state: &[C64], lambda: C64, p: &TwoLevelParams, tol: PhaseTol) -> Result<PhaseVerdict> {
    if state.len() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: state.len() });
    }
    let (rho00, rho01, rho11) = (state[0], state[1], state[3]);
    let trivial = (2.0 * lambda - crate::densec::I * p.eta_minus()).norm() <= tol.phase;
    if lambda.re.abs() > tol.arc || p.omega == 0.0 || (rho00 - rho11).norm() <= tol.phase || trivial {
        return Ok(PhaseVerdict::NotApplicable);
    }
    Ok(if rho01.re.abs() <= tol.phase && rho01.im.abs() > tol.phase {
        PhaseVerdict::HalfPi
    } else {
        PhaseVerdict::Violated
    })
}

/// Optimal assignment minimizing total cost (Hungarian algorithm, square
/// cost matrix). Returns `assign[row] = col`.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return vec![];
    }
    let inf = f64::INFINITY;
    // 1-based potentials formulation
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            assign[p[j] - 1] = j - 1;
        }
    }
    assign
}

/// Largest pairwise distance between two multisets after optimal matching.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len(), "multisets of different size");
    let cost: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).norm()).collect()).collect();
    let assign = min_cost_assignment(&cost);
    assign.iter().enumerate().map(|(i, &j)| cost[i][j]).fold(0.0, f64::max)
}

fn lex_cmp(a: &C64, b: &C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum BranchWarningKind {
    /// The best alternative matching is within the margin threshold.
    SmallMargin { margin: f64 },
    /// Two eigenvalues of this step lie within the coalescence radius.
    Coalescence { distance: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchWarning {
    pub step: usize,
    pub kind: BranchWarningKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchTable {
    /// `branches[step][b]`
    pub branches: Vec<Vec<C64>>,
    /// `order[step][b]` is the index into the input multiset of that step.
    pub order: Vec<Vec<usize>>,
    pub warnings: Vec<BranchWarning>,
}

/// Tracks eigenvalue branches along a sweep by minimal-total-distance
/// matching between consecutive multisets. The first step is ordered
/// lexicographically by `(Re, Im)`.
///
/// A warning is raised where the cheapest alternative matching costs less
/// than `10·eig_tol·scale` extra, or where two eigenvalues of a step are
/// closer than `coalesce_tol·scale` (`scale = 1 + max|λ|`).
pub fn continuity_sort(spectra: &[Vec<C64>], eig_tol: f64, coalesce_tol: f64) -> BranchTable {
    let mut table = BranchTable { branches: vec![], order: vec![], warnings: vec![] };
    let Some(first) = spectra.first() else { return table };
    let mut idx: Vec<usize> = (0..first.len()).collect();
    idx.sort_by(|&a, &b| lex_cmp(&first[a], &first[b]));
    table.branches.push(idx.iter().map(|&i| first[i]).collect());
    table.order.push(idx);
    coalescence_warning(&mut table.warnings, 0, first, coalesce_tol);

    for (step, cur) in spectra.iter().enumerate().skip(1) {
        let prev = table.branches.last().unwrap().clone();
        assert_eq!(prev.len(), cur.len(), "branch count changed at step {step}");
        let cost: Vec<Vec<f64>> = prev.iter().map(|a| cur.iter().map(|b| (a - b).norm()).collect()).collect();
        let assign = min_cost_assignment(&cost);
        let scale = 1.0 + max_abs(cur).max(max_abs(&prev));
        let mut margin = f64::INFINITY;
        for i in 0..assign.len() {
            for k in i + 1..assign.len() {
                let (j, l) = (assign[i], assign[k]);
                let extra = cost[i][l] + cost[k][j] - cost[i][j] - cost[k][l];
                margin = margin.min(extra);
            }
        }
        if margin < 10.0 * eig_tol * scale {
            table.warnings.push(BranchWarning { step, kind: BranchWarningKind::SmallMargin { margin } });
        }
        coalescence_warning(&mut table.warnings, step, cur, coalesce_tol);
        table.branches.push(assign.iter().map(|&j| cur[j]).collect());
        table.order.push(assign);
    }
    table
}

fn coalescence_warning(out: &mut Vec<BranchWarning>, step: usize, eigs: &[C64], tol: f64) {
    let radius = tol * (1.0 + max_abs(eigs));
    let mut closest = f64::INFINITY;
    for i in 0..eigs.len() {
        for j in i + 1..eigs.len() {
            closest = closest.min((eigs[i] - eigs[j]).norm());
        }
    }
    if closest <= radius {
        out.push(BranchWarning { step, kind: BranchWarningKind::Coalescence { distance: closest } });
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcSegment {
    pub branch: usize,
    pub start_index: usize,
    pub end_index: usize,
    pub start_param: f64,
    pub end_param: f64,
    /// Set for the trivial branch `λ₁ = iη₋/2`, which is imaginary everywhere.
    pub trivial: bool,
}

/// Maximal runs where `|Re λ| ≤ tol·(1 + |λ|)`, per branch.
///
/// `params[k]` is the swept value at step `k`; `branches[k][b]` the branch
/// eigenvalue (`None` for failed steps, which break runs). Branch indices in
/// `trivial` are flagged.
pub fn arc_segments(params: &[f64], branches: &[Vec<Option<C64>>], tol: f64, trivial: &[usize]) -> Vec<ArcSegment> {
    let nb = branches.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for b in 0..nb {
        let mut start: Option<usize> = None;
        for k in 0..=branches.len() {
            let on = k < branches.len()
                && branches[k][b].is_some_and(|z| z.re.abs() <= tol * (1.0 + z.norm()));
            match (on, start) {
                (true, None) => start = Some(k),
                (false, Some(s)) => {
                    out.push(ArcSegment {
                        branch: b,
                        start_index: s,
                        end_index: k - 1,
                        start_param: params[s],
                        end_param: params[k - 1],
                        trivial: trivial.contains(&b),
                    });
                    start = None;
                }
                _ => {}
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportedPair {
    pub value: C64,
    /// Gauge-fixed eigenstate.
    pub state: Vec<C64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticCheck {
    /// Largest pairwise deviation after optimal matching, or `None` when the
    /// closed form is unavailable (degenerate `Θ`) and numeric values stand.
    pub max_deviation: Option<f64>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub eigenpairs: Vec<ReportedPair>,
    pub residual_bound: f64,
    pub steady: SteadyClassification,
    pub ep_clusters: Vec<EpCluster>,
    /// Per eigenpair, only for two-level reports.
    pub phases: Option<Vec<PhaseVerdict>>,
    pub analytic: Option<AnalyticCheck>,
    pub tolerances: Tolerances,
}

impl SpectralReport {
    pub fn values(&self) -> Vec<C64> {
        self.eigenpairs.iter().map(|p| p.value).collect()
    }

    pub fn exceptional_points(&self) -> impl Iterator<Item = &EpCluster> {
        self.ep_clusters.iter().filter(|c| c.is_exceptional())
    }
}

/// Spectrum, steady verdict and coalescence clusters of a generic Liouvillian.
pub fn analyze(l: &Liouvillian, tol: &Tolerances) -> Result<SpectralReport> {
    tol.validate()?;
    let res = densec::eig(l.matrix(), tol.eig)?;
    let eigenpairs = res
        .pairs()
        .map(|(value, v)| Ok(ReportedPair { value, state: gauge_fix(v)? }))
        .collect::<Result<Vec<_>>>()?;
    let steady = classify_steady(&res.values, steady_tol(&res.values, tol.steady));
    let ep_clusters = clusters_from(l, &res.values, tol);
    Ok(SpectralReport {
        eigenpairs,
        residual_bound: res.residual_bound,
        steady,
        ep_clusters,
        phases: None,
        analytic: None,
        tolerances: *tol,
    })
}

/// Two-level report: the trivial branch first, then the three sector
/// eigenpairs, with phase verdicts and the closed-form cross-check.
pub fn analyze_two_level(p: &TwoLevelParams, tol: &Tolerances) -> Result<SpectralReport> {
    tol.validate()?;
    let (pairs, residual_bound) = twolevel::sector_eigenpairs(p, tol.eig)?;
    let values: Vec<C64> = pairs.iter().map(|e| e.value).collect();
    let eigenpairs = pairs
        .iter()
        .map(|e| Ok(ReportedPair { value: e.value, state: gauge_fix(&e.state)? }))
        .collect::<Result<Vec<_>>>()?;
    let phases = eigenpairs
        .iter()
        .map(|e| phase_check(&e.state, e.value, p, PhaseTol::from(tol)))
        .collect::<Result<Vec<_>>>()?;
    let l = twolevel::liouvillian(p)?;
    let analytic = match twolevel::analytic_eigenvalues(p) {
        Ok(a) => AnalyticCheck { max_deviation: Some(multiset_distance(&a, &values)), note: None },
        Err(Error::DegenerateTheta { theta, floor }) => AnalyticCheck {
            max_deviation: None,
            note: Some(format!("|Theta| = {theta:e} below floor {floor:e}; numeric eigenvalues used")),
        },
        Err(e) => return Err(e),
    };
    Ok(SpectralReport {
        steady: classify_steady(&values, steady_tol(&values, tol.steady)),
        ep_clusters: clusters_from(&l, &values, tol),
        eigenpairs,
        residual_bound,
        phases: Some(phases),
        analytic: Some(analytic),
        tolerances: *tol,
    })
}
