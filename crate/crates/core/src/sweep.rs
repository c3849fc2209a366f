//! One-parameter sweeps of the two-level model.
//!
//! Each grid point is an independent work item (Liouvillian, sector
//! eigenpairs, gauge fixing, coalescence clusters). Branches are tracked
//! afterwards in grid order, so the output does not depend on how the points
//! were scheduled. Branch `l1` is always the trivial coherence branch
//! `iη₋/2`; `l2..l4` are the tracked sector eigenvalues, ordered at the first
//! point by `(|Re|, Re, Im)`.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::densec::C64;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::spectra::{self, BranchWarningKind, Tolerances};
use crate::twolevel::{self, Param, TwoLevelParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputFlags {
    pub eigenvalues: bool,
    pub eigenstates: bool,
    pub arcs: bool,
    pub eps: bool,
}

impl OutputFlags {
    pub const ALL: OutputFlags = OutputFlags { eigenvalues: true, eigenstates: true, arcs: true, eps: true };
    pub const NONE: OutputFlags = OutputFlags { eigenvalues: false, eigenstates: false, arcs: false, eps: false };

    pub fn any(&self) -> bool {
        self.eigenvalues || self.eigenstates || self.arcs || self.eps
    }
}

impl Default for OutputFlags {
    fn default() -> Self {
        OutputFlags::ALL
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub varied: Param,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    /// The varied parameter's value here is ignored.
    pub fixed: TwoLevelParams,
    #[serde(default)]
    pub outputs: OutputFlags,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl SweepSpec {
    pub fn new(varied: Param, from: f64, to: f64, steps: usize, fixed: TwoLevelParams) -> Self {
        SweepSpec { varied, from, to, steps, fixed, outputs: OutputFlags::ALL, tolerances: Tolerances::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.from.is_finite() && self.to.is_finite() && self.from < self.to) {
            return Err(Error::InvalidParams(format!("sweep range [{}, {}] must satisfy from < to", self.from, self.to)));
        }
        if self.steps < 2 {
            return Err(Error::InvalidParams(format!("sweep needs at least 2 steps, got {}", self.steps)));
        }
        self.tolerances.validate()?;
        self.fixed.with(self.varied, self.from).validate()?;
        self.fixed.with(self.varied, self.to).validate()
    }

    /// `from + (to − from)·k/(steps − 1)`, hitting both endpoints exactly.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps)
            .map(|k| if k == n { self.to } else { self.from + (self.to - self.from) * k as f64 / n as f64 })
            .collect()
    }
}

/// One grid point in the flat output schema. Columns not requested by the
/// output flags, or unavailable because the point failed, are `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: f64,
    pub re_l1: Option<f64>,
    pub im_l1: Option<f64>,
    pub re_l2: Option<f64>,
    pub im_l2: Option<f64>,
    pub re_l3: Option<f64>,
    pub im_l3: Option<f64>,
    pub re_l4: Option<f64>,
    pub im_l4: Option<f64>,
    pub re_rho10_b2: Option<f64>,
    pub im_rho10_b2: Option<f64>,
    pub re_rho10_b3: Option<f64>,
    pub im_rho10_b3: Option<f64>,
    pub re_rho10_b4: Option<f64>,
    pub im_rho10_b4: Option<f64>,
    /// One character per branch, `1` where the branch is on an arc.
    pub arc_flags: Option<String>,
    /// `1` where a coalescence with geometric < algebraic was certified.
    pub ep_flag: Option<u8>,
    /// Gauge-fixed states per branch (JSON only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<Vec<C64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepRow {
    fn empty(param: f64) -> Self {
        SweepRow {
            param,
            re_l1: None,
            im_l1: None,
            re_l2: None,
            im_l2: None,
            re_l3: None,
            im_l3: None,
            re_l4: None,
            im_l4: None,
            re_rho10_b2: None,
            im_rho10_b2: None,
            re_rho10_b3: None,
            im_rho10_b3: None,
            re_rho10_b4: None,
            im_rho10_b4: None,
            arc_flags: None,
            ep_flag: None,
            states: None,
            error: None,
        }
    }

    /// Branch eigenvalue `b ∈ 0..4` (branch `l{b+1}`).
    pub fn eigenvalue(&self, b: usize) -> Option<C64> {
        let (re, im) = match b {
            0 => (self.re_l1, self.im_l1),
            1 => (self.re_l2, self.im_l2),
            2 => (self.re_l3, self.im_l3),
            3 => (self.re_l4, self.im_l4),
            _ => return None,
        };
        Some(C64::new(re?, im?))
    }

    pub fn eigenvalues(&self) -> Option<[C64; 4]> {
        Some([self.eigenvalue(0)?, self.eigenvalue(1)?, self.eigenvalue(2)?, self.eigenvalue(3)?])
    }

    /// Gauge-fixed `ρ₁₀` of branch `b ∈ 1..4`.
    pub fn rho10(&self, b: usize) -> Option<C64> {
        let (re, im) = match b {
            1 => (self.re_rho10_b2, self.im_rho10_b2),
            2 => (self.re_rho10_b3, self.im_rho10_b3),
            3 => (self.re_rho10_b4, self.im_rho10_b4),
            _ => return None,
        };
        Some(C64::new(re?, im?))
    }

    fn set_eigenvalues(&mut self, l: &[C64; 4]) {
        (self.re_l1, self.im_l1) = (Some(l[0].re), Some(l[0].im));
        (self.re_l2, self.im_l2) = (Some(l[1].re), Some(l[1].im));
        (self.re_l3, self.im_l3) = (Some(l[2].re), Some(l[2].im));
        (self.re_l4, self.im_l4) = (Some(l[3].re), Some(l[3].im));
    }

    fn set_rho10(&mut self, r: [C64; 3]) {
        (self.re_rho10_b2, self.im_rho10_b2) = (Some(r[0].re), Some(r[0].im));
        (self.re_rho10_b3, self.im_rho10_b3) = (Some(r[1].re), Some(r[1].im));
        (self.re_rho10_b4, self.im_rho10_b4) = (Some(r[2].re), Some(r[2].im));
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepWarning {
    pub index: usize,
    pub param: f64,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub version: String,
    pub spec: SweepSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub metadata: SweepMetadata,
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<SweepWarning>,
}

impl SweepResult {
    pub fn params(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.param).collect()
    }

    /// Branch eigenvalues per row, `None` for failed rows.
    pub fn branches(&self) -> Vec<Vec<Option<C64>>> {
        self.rows.iter().map(|r| (0..4).map(|b| r.eigenvalue(b)).collect()).collect()
    }
}

/// Arc segments of a sweep; the trivial branch `l1` is flagged.
pub fn fermi_arc_scan(result: &SweepResult, tol: f64) -> Vec<spectra::ArcSegment> {
    spectra::arc_segments(&result.params(), &result.branches(), tol, &[0])
}

struct PointData {
    values: [C64; 4],
    states: Vec<Vec<C64>>,
    exceptional: bool,
}

fn compute_point(p: &TwoLevelParams, tol: &Tolerances) -> Result<PointData> {
    let (pairs, _) = twolevel::sector_eigenpairs(p, tol.eig)?;
    let values = [pairs[0].value, pairs[1].value, pairs[2].value, pairs[3].value];
    let states = pairs.iter().map(|e| spectra::gauge_fix(&e.state)).collect::<Result<Vec<_>>>()?;
    let l = twolevel::liouvillian(p)?;
    let exceptional = spectra::clusters_from(&l, &values, tol).iter().any(|c| c.is_exceptional());
    Ok(PointData { values, states, exceptional })
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_with(spec, Execution::default())
}

/// Runs a sweep. Invalid specs are an error; failures at individual points
/// are recorded on their rows.
pub fn run_sweep_with(spec: &SweepSpec, exec: Execution) -> Result<SweepResult> {
    spec.validate()?;
    let grid = spec.grid();
    let tol = spec.tolerances;
    let points: Vec<Result<PointData>> =
        exec.map(&grid, |&x| compute_point(&spec.fixed.with(spec.varied, x), &tol));

    let ok: Vec<usize> = (0..grid.len()).filter(|&k| points[k].is_ok()).collect();
    let sector: Vec<Vec<C64>> =
        ok.iter().map(|&k| points[k].as_ref().map(|d| d.values[1..].to_vec()).unwrap_or_default()).collect();
    let table = spectra::continuity_sort(&sector, tol.eig, tol.ep);

    // present branches ordered by (|Re|, Re, Im) at the first tracked point
    let mut perm: Vec<usize> = (0..3).collect();
    if let Some(first) = table.branches.first() {
        perm.sort_by(|&a, &b| {
            let (x, y) = (first[a], first[b]);
            x.re.abs().total_cmp(&y.re.abs()).then(x.re.total_cmp(&y.re)).then(x.im.total_cmp(&y.im))
        });
    }

    let mut rows: Vec<SweepRow> = grid.iter().map(|&x| SweepRow::empty(x)).collect();
    let mut warnings = Vec::new();
    for (k, point) in points.iter().enumerate() {
        if let Err(e) = point {
            rows[k].error = Some(e.to_string());
            warnings.push(SweepWarning { index: k, param: grid[k], message: format!("point failed: {e}") });
        }
    }
    for (pos, &k) in ok.iter().enumerate() {
        let Ok(data) = &points[k] else { continue };
        let order = &table.order[pos];
        let branch_src: Vec<usize> = perm.iter().map(|&b| 1 + order[b]).collect();
        let values = [data.values[0], data.values[branch_src[0]], data.values[branch_src[1]], data.values[branch_src[2]]];
        let states: Vec<Vec<C64>> =
            std::iter::once(0).chain(branch_src.iter().copied()).map(|i| data.states[i].clone()).collect();
        let row = &mut rows[k];
        if spec.outputs.eigenvalues {
            row.set_eigenvalues(&values);
        }
        if spec.outputs.eigenstates {
            row.set_rho10([states[1][2], states[2][2], states[3][2]]);
            row.states = Some(states);
        }
        if spec.outputs.arcs {
            row.arc_flags = Some(
                values.iter().map(|z| if z.re.abs() <= tol.arc * (1.0 + z.norm()) { '1' } else { '0' }).collect(),
            );
        }
        if spec.outputs.eps {
            row.ep_flag = Some(data.exceptional as u8);
        }
    }
    for w in &table.warnings {
        let k = ok[w.step];
        let message = match w.kind {
            BranchWarningKind::SmallMargin { margin } => format!("ambiguous branch matching (margin {margin:e})"),
            BranchWarningKind::Coalescence { distance } => format!("eigenvalues coalesce (distance {distance:e})"),
        };
        warnings.push(SweepWarning { index: k, param: grid[k], message });
    }
    warnings.sort_by_key(|w| w.index);

    Ok(SweepResult {
        metadata: SweepMetadata { version: crate::VERSION.to_string(), spec: spec.clone(), note: None },
        rows,
        warnings,
    })
}

/// Largest imaginary part over the whole spectrum.
pub fn leading_imag(p: &TwoLevelParams, eig_tol: f64) -> Result<f64> {
    let (pairs, _) = twolevel::sector_eigenpairs(p, eig_tol)?;
    Ok(pairs.iter().map(|e| e.value.im).fold(f64::NEG_INFINITY, f64::max))
}

/// Target for [`find_steady_gamma2`].
pub const STEADY_ROOT_TOL: f64 = 1e-10;

/// `γ₂` in `bracket` at which the leading eigenvalue has `Im λ = 0`, by
/// bisection on the leading imaginary part.
pub fn find_steady_gamma2(gamma1: f64, omega: f64, dissipation: f64, bracket: (f64, f64)) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParams(format!("bad bracket [{lo}, {hi}]")));
    }
    let f = |g2: f64| -> Result<f64> {
        leading_imag(&TwoLevelParams::new(gamma1, g2, omega, dissipation)?, crate::densec::EIG_TOL)
    };
    let (mut f_lo, f_hi) = (f(lo)?, f(hi)?);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid.abs() <= STEADY_ROOT_TOL || hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1.0) {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidParams(format!("unknown format {s:?} (expected csv or json)"))),
        }
    }
}

const EIGEN_COLS: [&str; 8] = ["re_l1", "im_l1", "re_l2", "im_l2", "re_l3", "im_l3", "re_l4", "im_l4"];
const STATE_COLS: [&str; 6] =
    ["re_rho10_b2", "im_rho10_b2", "re_rho10_b3", "im_rho10_b3", "re_rho10_b4", "im_rho10_b4"];

fn num(x: Option<f64>) -> String {
    x.map(|v| (v + 0.0).to_string()).unwrap_or_default()
}

/// CSV column names for the given output flags.
pub fn csv_header(outputs: &OutputFlags) -> Vec<&'static str> {
    let mut h = vec!["param"];
    if outputs.eigenvalues {
        h.extend(EIGEN_COLS);
    }
    if outputs.eigenstates {
        h.extend(STATE_COLS);
    }
    if outputs.arcs {
        h.push("arc_flags");
    }
    if outputs.eps {
        h.push("ep_flag");
    }
    h
}

/// CSV with shortest round-trip floats and `\n` line endings. With every
/// output flag off only the header is written.
pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let outputs = result.metadata.spec.outputs;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let ser = |e: csv::Error| Error::Serialization(e.to_string());
    w.write_record(csv_header(&outputs)).map_err(ser)?;
    if outputs.any() {
        for r in &result.rows {
            let mut rec = vec![r.param.to_string()];
            if outputs.eigenvalues {
                rec.extend(
                    [r.re_l1, r.im_l1, r.re_l2, r.im_l2, r.re_l3, r.im_l3, r.re_l4, r.im_l4].map(num),
                );
            }
            if outputs.eigenstates {
                rec.extend(
                    [r.re_rho10_b2, r.im_rho10_b2, r.re_rho10_b3, r.im_rho10_b3, r.re_rho10_b4, r.im_rho10_b4]
                        .map(num),
                );
            }
            if outputs.arcs {
                rec.push(r.arc_flags.clone().unwrap_or_default());
            }
            if outputs.eps {
                rec.push(r.ep_flag.map(|f| f.to_string()).unwrap_or_default());
            }
            w.write_record(&rec).map_err(ser)?;
        }
    }
    w.flush().map_err(|e| Error::Io { context: "writing CSV".into(), source: e })
}

pub fn to_json(result: &SweepResult) -> Result<String> {
    serde_json::to_string_pretty(result).map_err(|e| Error::Serialization(e.to_string()))
}

pub fn from_json(s: &str) -> Result<SweepResult> {
    serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))
}

pub fn write_to<W: Write>(result: &SweepResult, format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(result, out),
        Format::Json => {
            let s = to_json(result)?;
            out.write_all(s.as_bytes())
                .and_then(|_| out.write_all(b"\n"))
                .map_err(|e| Error::Io { context: "writing JSON".into(), source: e })
        }
    }
}

/// Writes the result to a file.
pub fn emit(result: &SweepResult, format: Format, dest: &Path) -> Result<()> {
    let io = |e: std::io::Error| Error::Io { context: format!("writing {}", dest.display()), source: e };
    let mut out = BufWriter::new(File::create(dest).map_err(io)?);
    write_to(result, format, &mut out).map_err(|e| match e {
        Error::Io { source, .. } => io(source),
        other => other,
    })?;
    out.flush().map_err(io)
}

/// A sweep with the parameters of a reference figure.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPreset {
    pub name: &'static str,
    pub spec: SweepSpec,
    pub note: Option<&'static str>,
}

/// A time evolution with the parameters of a reference figure.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolvePreset {
    pub name: &'static str,
    pub params: TwoLevelParams,
    pub initial: [C64; 4],
    pub t_max: f64,
    pub steps: usize,
    pub note: Option<&'static str>,
}

pub const SWEEP_PRESETS: [&str; 5] = ["fig2a", "fig2c", "fig3", "fig4ab", "fig4ef"];
pub const EVOLVE_PRESETS: [&str; 4] = ["fig2b", "fig2d", "fig4cd", "zero"];

/// Points per preset sweep.
pub const PRESET_STEPS: usize = 200;

/// `γ₂` of the fig4 steady point, to three decimals.
pub const FIG4_GAMMA2: f64 = 1.298;

fn tl(gamma1: f64, gamma2: f64, omega: f64, dissipation: f64) -> TwoLevelParams {
    TwoLevelParams { gamma1, gamma2, omega, dissipation }
}

pub fn sweep_preset(name: &str) -> Option<SweepPreset> {
    let (fixed, to) = match name {
        "fig2a" => (tl(1.0, 0.0, 2.0, 1.0), 4.0),
        "fig2c" => (tl(1.0, 0.0, 0.0, 2.0), 4.0),
        "fig3" => (tl(1.0, 0.0, 2.0, 0.0), 6.0),
        "fig4ab" | "fig4ef" => (tl(1.0, 0.0, 2.0, 2.0), 8.0),
        _ => return None,
    };
    let name = SWEEP_PRESETS.into_iter().find(|n| *n == name)?;
    Some(SweepPreset { name, spec: SweepSpec::new(Param::Gamma2, 0.0, to, PRESET_STEPS, fixed), note: None })
}

pub fn evolve_preset(name: &str) -> Option<EvolvePreset> {
    let q = |a: f64, b: f64, c: f64, d: f64| [C64::new(a, 0.0), C64::new(b, 0.0), C64::new(c, 0.0), C64::new(d, 0.0)];
    let (params, initial, t_max, note) = match name {
        "fig2b" => (tl(1.0, 1.0, 2.0, 1.0), q(0.25, 0.0, 0.0, 0.75), 10.0, None),
        "fig2d" => (
            tl(1.0, 2.0, 0.0, 2.0),
            q(0.25, 0.0, 0.0, 0.75),
            10.0,
            Some("gamma2 = 2 gamma1 is assumed for this panel (the steady point of the Omega = 0, Gamma = 2 family)"),
        ),
        "fig4cd" => (tl(1.0, FIG4_GAMMA2, 2.0, 2.0), q(0.5, 0.5, 0.5, 0.5), 20.0, None),
        "zero" => (tl(0.0, 0.0, 0.0, 0.0), q(0.25, 0.0, 0.0, 0.75), 10.0, None),
        _ => return None,
    };
    let name = EVOLVE_PRESETS.into_iter().find(|n| *n == name)?;
    Some(EvolvePreset { name, params, initial, t_max, steps: 1000, note })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_hits_endpoints() {
        let spec = SweepSpec::new(Param::Gamma2, 0.0, 6.0, 61, tl(1.0, 0.0, 2.0, 0.0));
        let g = spec.grid();
        assert_eq!(g.len(), 61);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[30], 3.0);
        assert_eq!(g[60], 6.0);
    }

    #[test]
    fn spec_validation() {
        let base = SweepSpec::new(Param::Gamma2, 0.0, 1.0, 2, tl(1.0, 0.0, 2.0, 1.0));
        assert!(base.validate().is_ok());
        assert!(SweepSpec { steps: 1, ..base.clone() }.validate().is_err());
        assert!(SweepSpec { to: 0.0, ..base.clone() }.validate().is_err());
        assert!(SweepSpec { from: -1.0, ..base.clone() }.validate().is_err());
        let omega = SweepSpec { varied: Param::Omega, from: -1.0, ..base };
        assert!(omega.validate().is_ok());
    }

    #[test]
    fn header_only_without_outputs() {
        let mut spec = SweepSpec::new(Param::Gamma2, 0.0, 1.0, 3, tl(1.0, 0.0, 2.0, 1.0));
        spec.outputs = OutputFlags::NONE;
        let res = run_sweep(&spec).unwrap();
        let mut buf = Vec::new();
        write_csv(&res, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "param\n");
    }

    #[test]
    fn fig3_schema() {
        let res = run_sweep(&sweep_preset("fig3").unwrap().spec).unwrap();
        let mut buf = Vec::new();
        write_csv(&res, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(
            header,
            "param,re_l1,im_l1,re_l2,im_l2,re_l3,im_l3,re_l4,im_l4,re_rho10_b2,im_rho10_b2,re_rho10_b3,im_rho10_b3,re_rho10_b4,im_rho10_b4,arc_flags,ep_flag"
        );
        assert_eq!(text.lines().count(), 201);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn presets_exist() {
        for n in SWEEP_PRESETS {
            assert_eq!(sweep_preset(n).unwrap().name, n);
        }
        for n in EVOLVE_PRESETS {
            assert_eq!(evolve_preset(n).unwrap().name, n);
        }
        assert!(sweep_preset("fig9").is_none());
        assert!(evolve_preset("fig9").is_none());
        assert!(evolve_preset("fig2d").unwrap().note.is_some());
    }

    #[test]
    fn find_steady_known_families() {
        let g = find_steady_gamma2(1.0, 2.0, 1.0, (0.5, 1.5)).unwrap();
        assert!((g - 1.0).abs() < 1e-9, "{g}");
        let g = find_steady_gamma2(1.0, 0.0, 2.0, (1.5, 2.5)).unwrap();
        assert!((g - 2.0).abs() < 1e-9, "{g}");
        assert!(matches!(find_steady_gamma2(1.0, 2.0, 1.0, (2.0, 3.0)), Err(Error::NoSignChange { .. })));
    }
}
