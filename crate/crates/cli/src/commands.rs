use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use liouvillian_core::densec::C64;
use liouvillian_core::dynamics::{self, observables, steady_limit, uniform_grid, Normalization, ObservableRow, SteadyLimit};
use liouvillian_core::exec::Execution;
use liouvillian_core::spectra::{self, detect_ep, min_cost_assignment, EpCluster, SpectralReport, Tolerances};
use liouvillian_core::sweep::{self, Format, OutputFlags, SweepSpec};
use liouvillian_core::twolevel::{self, IncoherentNlep, Param};
use liouvillian_core::{Error, TwoLevelParams, VERSION};
use serde::Serialize;

use crate::config::{Config, PartialParams};
use crate::{Cli, Command, Failure};

type CmdResult<T = ()> = Result<T, Failure>;

/// Parameters used when neither flags nor config give a value.
pub const DEFAULT_PARAMS: TwoLevelParams = TwoLevelParams { gamma1: 1.0, gamma2: 1.0, omega: 2.0, dissipation: 1.0 };

struct Context {
    config: Config,
    tolerances: Tolerances,
    normalized: bool,
}

impl Context {
    fn params(&self, flags: PartialParams, preset: PartialParams) -> CmdResult<TwoLevelParams> {
        let p = flags.over(preset).over(self.config.params).resolve(DEFAULT_PARAMS)?;
        self.units(p)
    }

    fn units(&self, p: TwoLevelParams) -> CmdResult<TwoLevelParams> {
        Ok(if self.normalized { p.in_gamma1_units()? } else { p })
    }

    fn output(&self, out: &Option<PathBuf>, format: Option<Format>) -> (Option<PathBuf>, Format) {
        let path = out.clone().or_else(|| self.config.output.path.clone());
        let inferred = path
            .as_deref()
            .and_then(|p| p.extension())
            .and_then(|e| e.to_str())
            .and_then(|e| e.parse::<Format>().ok());
        let format = format.or(self.config.output.format).or(inferred).unwrap_or(Format::Csv);
        (path, format)
    }
}

pub fn run(cli: &Cli) -> CmdResult {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let tolerances = cli.tolerances.partial().over(config.tolerances).resolve()?;
    let ctx = Context { config, tolerances, normalized: cli.normalized };
    match &cli.command {
        Command::Spectrum { params, analytic, json } => {
            let p = ctx.params(params.partial(), PartialParams::default())?;
            spectrum(&ctx, &p, *analytic, *json)
        }
        Command::Sweep { params, figure, param, from, to, steps, outputs, format, out, sequential } => {
            let spec = sweep_spec(&ctx, params.partial(), figure.as_deref(), *param, *from, *to, *steps, outputs.as_deref())?;
            let exec = if *sequential { Execution::Sequential } else { Execution::default() };
            let (path, format) = ctx.output(out, *format);
            run_sweep(&spec, exec, path.as_deref(), format)
        }
        Command::Evolve { params, preset, initial, t_max, steps, normalize, tol, format, out } => {
            let (path, format) = ctx.output(out, *format);
            let req = EvolveRequest {
                flags: params.partial(),
                preset: preset.as_deref(),
                initial: initial.as_deref(),
                t_max: *t_max,
                steps: *steps,
                normalize: *normalize,
                tol: *tol,
            };
            evolve(&ctx, req, path.as_deref(), format)
        }
        Command::FindEps { params, json } => {
            let p = ctx.params(params.partial(), PartialParams::default())?;
            find_eps(&ctx, &p, *json)
        }
    }
}

fn destination(path: Option<&Path>) -> CmdResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_all(path: Option<&Path>, bytes: &[u8]) -> CmdResult {
    let mut out = destination(path)?;
    out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| Failure::Usage(format!("write failed: {e}")))
}

fn json_string<T: Serialize>(value: &T) -> CmdResult<String> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| Failure::Numeric(e.to_string()))
}

fn cplx(z: C64) -> String {
    // adding 0.0 turns -0.0 into 0.0
    format!("{:+.12e} {:+.12e}i", z.re + 0.0, z.im + 0.0)
}

fn params_line(p: &TwoLevelParams) -> String {
    format!("gamma1 = {}, gamma2 = {}, omega = {}, dissipation = {}", p.gamma1, p.gamma2, p.omega, p.dissipation)
}

fn tolerance_line(t: &Tolerances) -> String {
    format!(
        "tolerances: eig {:e}, steady {:e}, ep {:e}, rank {:e}, phase {:e}, arc {:e}",
        t.eig, t.steady, t.ep, t.rank, t.phase, t.arc
    )
}

fn cluster_line(c: &EpCluster) -> String {
    let kind = if c.is_exceptional() { "exceptional" } else { "not defective" };
    format!(
        "{} algebraic {} geometric {} ({kind}), members {:?}",
        cplx(c.mean),
        c.algebraic,
        c.geometric,
        c.members.iter().map(|m| m + 1).collect::<Vec<_>>()
    )
}

// ---- spectrum ----

#[derive(Serialize)]
struct SpectrumOutput<'a> {
    version: &'a str,
    params: TwoLevelParams,
    normalized: bool,
    report: &'a SpectralReport,
    /// Closed-form eigenvalue matched to each numeric one.
    #[serde(skip_serializing_if = "Option::is_none")]
    analytic_values: Option<Vec<C64>>,
}

fn spectrum(ctx: &Context, p: &TwoLevelParams, analytic: bool, json: bool) -> CmdResult {
    let report = spectra::analyze_two_level(p, &ctx.tolerances)?;
    let values = report.values();
    let matched = if analytic {
        twolevel::analytic_eigenvalues(p).ok().map(|a| {
            let cost: Vec<Vec<f64>> = values.iter().map(|v| a.iter().map(|w| (v - w).norm()).collect()).collect();
            min_cost_assignment(&cost).into_iter().map(|j| a[j]).collect::<Vec<_>>()
        })
    } else {
        None
    };
    if json {
        let out = SpectrumOutput {
            version: VERSION,
            params: *p,
            normalized: ctx.normalized,
            report: &report,
            analytic_values: matched,
        };
        return write_all(None, json_string(&out)?.as_bytes());
    }

    let mut s = String::new();
    let _ = writeln!(s, "liouvillian-lab {VERSION}");
    let _ = writeln!(s, "{}{}", params_line(p), if ctx.normalized { " (units of gamma1)" } else { "" });
    let _ = writeln!(s, "{}", tolerance_line(&ctx.tolerances));
    let _ = writeln!(s, "eigenvalues (residual bound {:.3e}):", report.residual_bound);
    let phases = report.phases.as_deref().unwrap_or_default();
    for (k, pair) in report.eigenpairs.iter().enumerate() {
        let mut line = format!("  l{}  {}", k + 1, cplx(pair.value));
        if let Some(phase) = phases.get(k) {
            let _ = write!(line, "  phase {phase:?}");
        }
        if let Some(m) = &matched {
            let _ = write!(line, "  analytic {}  dev {:.3e}", cplx(m[k]), (m[k] - pair.value).norm());
        }
        let _ = writeln!(s, "{line}");
    }
    let _ = writeln!(s, "eigenstates (gauge fixed, rho00 rho01 rho10 rho11):");
    for (k, pair) in report.eigenpairs.iter().enumerate() {
        let parts: Vec<String> = pair.state.iter().map(|z| cplx(*z)).collect();
        let _ = writeln!(s, "  l{}  [{}]", k + 1, parts.join(", "));
    }
    let st = &report.steady;
    let _ = writeln!(
        s,
        "steady: {:?} (|Im lambda| <= {:.3e} at {:?})",
        st.verdict,
        st.tol,
        st.indices.iter().map(|i| format!("l{}", i + 1)).collect::<Vec<_>>()
    );
    if report.ep_clusters.is_empty() {
        let _ = writeln!(s, "coalescence clusters: none");
    } else {
        let _ = writeln!(s, "coalescence clusters:");
        for c in &report.ep_clusters {
            let _ = writeln!(s, "  {}", cluster_line(c));
        }
    }
    if analytic {
        if let Some(check) = &report.analytic {
            match (check.max_deviation, &check.note) {
                (Some(d), _) => {
                    let _ = writeln!(s, "analytic: max multiset deviation {d:.3e}");
                }
                (None, Some(note)) => {
                    let _ = writeln!(s, "analytic: numeric fallback used ({note})");
                }
                (None, None) => {}
            }
        }
    }
    write_all(None, s.as_bytes())
}

// ---- sweep ----

fn parse_outputs(list: &str) -> CmdResult<OutputFlags> {
    let mut flags = OutputFlags::NONE;
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "all" => flags = OutputFlags::ALL,
            "none" => {}
            "eigenvalues" => flags.eigenvalues = true,
            "eigenstates" => flags.eigenstates = true,
            "arcs" => flags.arcs = true,
            "eps" => flags.eps = true,
            other => {
                return Err(Failure::Usage(format!(
                    "unknown output {other:?} (expected eigenvalues, eigenstates, arcs, eps, all or none)"
                )))
            }
        }
    }
    Ok(flags)
}

#[allow(clippy::too_many_arguments)]
fn sweep_spec(
    ctx: &Context,
    flags: PartialParams,
    figure: Option<&str>,
    param: Option<Param>,
    from: Option<f64>,
    to: Option<f64>,
    steps: Option<usize>,
    outputs: Option<&str>,
) -> CmdResult<SweepSpec> {
    let mut spec = match (figure, param) {
        (Some(name), _) => {
            sweep::sweep_preset(name)
                .ok_or_else(|| {
                    Failure::Usage(format!("unknown figure {name:?} (expected one of {})", sweep::SWEEP_PRESETS.join(", ")))
                })?
                .spec
        }
        (None, Some(varied)) => {
            let (from, to) = (from.unwrap_or_default(), to.unwrap_or_default());
            let raw = flags.over(ctx.config.params).resolve(DEFAULT_PARAMS)?;
            let (fixed, scale) = if ctx.normalized {
                if varied == Param::Gamma1 {
                    return Err(Failure::Usage("--normalized fixes gamma1 = 1; sweep another parameter".into()));
                }
                (raw.in_gamma1_units()?, raw.gamma1)
            } else {
                (raw, 1.0)
            };
            SweepSpec::new(varied, from / scale, to / scale, sweep::PRESET_STEPS, fixed)
        }
        (None, None) => return Err(Failure::Usage("sweep needs --figure or --param with --from and --to".into())),
    };
    if let Some(n) = steps {
        spec.steps = n;
    }
    if let Some(list) = outputs {
        spec.outputs = parse_outputs(list)?;
    }
    spec.tolerances = ctx.tolerances;
    spec.validate()?;
    Ok(spec)
}

fn run_sweep(spec: &SweepSpec, exec: Execution, path: Option<&Path>, format: Format) -> CmdResult {
    let result = sweep::run_sweep_with(spec, exec)?;
    for w in &result.warnings {
        eprintln!("warning: {} = {}: {}", spec.varied, w.param, w.message);
    }
    if result.rows.iter().all(|r| r.error.is_some()) {
        return Err(Failure::Numeric("every sweep point failed".into()));
    }
    let mut out = destination(path)?;
    sweep::write_to(&result, format, &mut out)?;
    out.flush().map_err(|e| Failure::Usage(format!("write failed: {e}")))
}

// ---- evolve ----

/// Parses `a+bi` values separated by commas.
pub fn parse_initial(list: &str) -> Result<Vec<C64>, String> {
    list.split(',')
        .map(|item| {
            let t: String = item.chars().filter(|c| !c.is_whitespace()).collect();
            t.parse::<C64>().map_err(|_| format!("malformed complex value {item:?} in --initial"))
        })
        .collect()
}

struct EvolveRequest<'a> {
    flags: PartialParams,
    preset: Option<&'a str>,
    initial: Option<&'a str>,
    t_max: Option<f64>,
    steps: Option<usize>,
    normalize: Normalization,
    tol: f64,
}

#[derive(Serialize)]
struct EvolveMetadata<'a> {
    version: &'a str,
    params: TwoLevelParams,
    normalized_units: bool,
    initial: Vec<C64>,
    normalization: Normalization,
    tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

#[derive(Serialize)]
struct EvolveOutput<'a> {
    metadata: EvolveMetadata<'a>,
    rows: Vec<ObservableRow>,
}

fn evolve(ctx: &Context, req: EvolveRequest<'_>, path: Option<&Path>, format: Format) -> CmdResult {
    let preset = match req.preset {
        Some(name) => Some(sweep::evolve_preset(name).ok_or_else(|| {
            Failure::Usage(format!("unknown preset {name:?} (expected one of {})", sweep::EVOLVE_PRESETS.join(", ")))
        })?),
        None => None,
    };
    let preset_params = preset.as_ref().map_or_else(PartialParams::default, |pr| PartialParams {
        gamma1: Some(pr.params.gamma1),
        gamma2: Some(pr.params.gamma2),
        omega: Some(pr.params.omega),
        dissipation: Some(pr.params.dissipation),
    });
    let p = ctx.params(req.flags, preset_params)?;
    let initial = match (req.initial, &preset) {
        (Some(list), _) => parse_initial(list).map_err(Failure::Usage)?,
        (None, Some(pr)) => pr.initial.to_vec(),
        (None, None) => return Err(Failure::Usage("evolve needs --initial or --preset".into())),
    };
    if initial.len() != 4 {
        return Err(Failure::Usage(format!("--initial needs 4 values (row-stacked 2x2), got {}", initial.len())));
    }
    let t_max = req.t_max.or(preset.as_ref().map(|pr| pr.t_max)).unwrap_or(10.0);
    let steps = req.steps.or(preset.as_ref().map(|pr| pr.steps)).unwrap_or(1000);
    let note = preset.as_ref().and_then(|pr| pr.note);
    if let Some(n) = note {
        eprintln!("note: {n}");
    }

    let l = twolevel::liouvillian(&p)?;
    let traj = dynamics::evolve(&l, &initial, &uniform_grid(t_max, steps)?, req.tol)?;
    let rows = observables(&traj, req.normalize)?;
    match steady_limit(&traj, (traj.len() / 10).max(2), 1e-6) {
        SteadyLimit::State(s) => {
            let parts: Vec<String> = s.iter().map(|z| cplx(*z)).collect();
            eprintln!("settled (normalized): [{}]", parts.join(", "));
        }
        SteadyLimit::Diverging => eprintln!("trace diverges"),
        SteadyLimit::NotConverged => {}
    }

    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(destination(path)?);
            for r in &rows {
                w.serialize(r).map_err(|e| Failure::Usage(format!("write failed: {e}")))?;
            }
            w.flush().map_err(|e| Failure::Usage(format!("write failed: {e}")))
        }
        Format::Json => {
            let out = EvolveOutput {
                metadata: EvolveMetadata {
                    version: VERSION,
                    params: p,
                    normalized_units: ctx.normalized,
                    initial,
                    normalization: req.normalize,
                    tolerance: req.tol,
                    note,
                },
                rows,
            };
            write_all(path, json_string(&out)?.as_bytes())
        }
    }
}

// ---- find-eps ----

#[derive(Serialize)]
struct CoherentPoint {
    eta_plus: f64,
    gamma2: f64,
    /// False when the locus needs gamma2 < 0.
    physical: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<C64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    state: Option<[C64; 4]>,
    /// Numeric cluster around `lambda`.
    #[serde(skip_serializing_if = "Option::is_none")]
    cluster: Option<EpCluster>,
}

#[derive(Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
enum EpReport {
    Coherent { gamma1: f64, omega: f64, dissipation: f64, points: Vec<CoherentPoint> },
    Incoherent(Box<IncoherentNlep>),
}

#[derive(Serialize)]
struct FindEpsOutput<'a> {
    version: &'a str,
    tolerances: Tolerances,
    report: EpReport,
}

fn coherent_points(p: &TwoLevelParams, tol: &Tolerances) -> CmdResult<Vec<CoherentPoint>> {
    let (hi, lo) = twolevel::nlep_coherent_locus(p.omega, p.dissipation);
    let mut points = Vec::new();
    for eta in [hi, lo] {
        let gamma2 = twolevel::gamma2_from_eta_plus(eta, p.gamma1, p.dissipation);
        let mut point = CoherentPoint { eta_plus: eta, gamma2, physical: gamma2 >= 0.0, lambda: None, state: None, cluster: None };
        if point.physical {
            let at = TwoLevelParams::new(p.gamma1, gamma2, p.omega, p.dissipation)?;
            let (lambda, state) = twolevel::nlep_coherent_pair(&at)?;
            let clusters = detect_ep(&twolevel::liouvillian(&at)?, tol)?;
            point.cluster = clusters
                .into_iter()
                .filter(|c| c.algebraic >= 2)
                .min_by(|a, b| (a.mean - lambda).norm().total_cmp(&(b.mean - lambda).norm()));
            point.lambda = Some(lambda);
            point.state = Some(state);
        }
        points.push(point);
    }
    Ok(points)
}

fn find_eps(ctx: &Context, p: &TwoLevelParams, json: bool) -> CmdResult {
    let report = if p.omega == 0.0 {
        EpReport::Incoherent(Box::new(twolevel::nlep_incoherent(p.gamma1, p.gamma2).map_err(|e| match e {
            Error::InvalidParams(m) => Failure::Usage(m),
            other => other.into(),
        })?))
    } else {
        EpReport::Coherent {
            gamma1: p.gamma1,
            omega: p.omega,
            dissipation: p.dissipation,
            points: coherent_points(p, &ctx.tolerances)?,
        }
    };
    if json {
        let out = FindEpsOutput { version: VERSION, tolerances: ctx.tolerances, report };
        return write_all(None, json_string(&out)?.as_bytes());
    }

    let mut s = String::new();
    let _ = writeln!(s, "liouvillian-lab {VERSION}");
    let _ = writeln!(s, "{}", tolerance_line(&ctx.tolerances));
    match &report {
        EpReport::Coherent { gamma1, omega, dissipation, points } => {
            let _ = writeln!(
                s,
                "coherent coalescence locus at gamma1 = {gamma1}, omega = {omega}, dissipation = {dissipation}:"
            );
            for pt in points {
                let _ = writeln!(s, "  eta_plus = {:.10}  gamma2 = {:.10}", pt.eta_plus, pt.gamma2);
                if !pt.physical {
                    let _ = writeln!(s, "    outside gamma2 >= 0, not checked numerically");
                    continue;
                }
                if let Some(l) = pt.lambda {
                    let _ = writeln!(s, "    lambda = {}", cplx(l));
                }
                match &pt.cluster {
                    Some(c) => {
                        let _ = writeln!(s, "    numeric cluster: {}", cluster_line(c));
                    }
                    None => {
                        let _ = writeln!(s, "    numeric cluster: none found");
                    }
                }
            }
        }
        EpReport::Incoherent(n) => {
            let _ = writeln!(
                s,
                "incoherent family (omega = 0) at gamma1 = {}, gamma2 = {}: dissipation = gamma1 + gamma2 = {}",
                n.gamma1, n.gamma2, n.dissipation
            );
            let _ = writeln!(
                s,
                "  lambda_derived = {} (algebraic {}, geometric {})",
                cplx(n.lambda_derived),
                n.algebraic_multiplicity,
                n.geometric_multiplicity
            );
            let _ = writeln!(s, "  lambda_closed_form = {}", cplx(n.lambda_closed_form));
            let _ = writeln!(
                s,
                "  lambda_reported = {} ({})",
                cplx(n.lambda_reported),
                if n.reported_value_confirmed { "confirmed" } else { "not confirmed by the numeric spectrum" }
            );
        }
    }
    write_all(None, s.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_parsing() {
        let v = parse_initial("0.25, 0.1+0.2i,0.1-0.2i,0.75").unwrap();
        assert_eq!(v, vec![C64::new(0.25, 0.0), C64::new(0.1, 0.2), C64::new(0.1, -0.2), C64::new(0.75, 0.0)]);
        assert_eq!(parse_initial("1e-3+2i,-i,i,0").unwrap()[..3], [C64::new(1e-3, 2.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0)]);
        assert!(parse_initial("1,2,x,4").is_err());
        assert!(parse_initial("1,,2").is_err());
    }

    #[test]
    fn output_lists() {
        assert_eq!(parse_outputs("all").unwrap(), OutputFlags::ALL);
        assert_eq!(parse_outputs("none").unwrap(), OutputFlags::NONE);
        let f = parse_outputs("eigenvalues,eps").unwrap();
        assert!(f.eigenvalues && f.eps && !f.arcs && !f.eigenstates);
        assert!(parse_outputs("phases").is_err());
    }
}
