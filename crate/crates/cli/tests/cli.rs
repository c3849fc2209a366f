use std::path::Path;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liouvillian-lab"))
        .args(args)
        .env_remove("LIOUVILLIAN_LAB_THREADS")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = lab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    lab(args).status.code().unwrap()
}

fn last_row(csv: &str) -> Vec<f64> {
    csv.lines().last().unwrap().split(',').map(|s| s.parse().unwrap()).collect()
}

#[test]
fn spectrum_fig2a_point() {
    let out = ok(&["spectrum", "--gamma1", "1", "--gamma2", "1", "--omega", "2", "--dissipation", "1", "--analytic"]);
    assert!(out.contains("steady: HasSteadyState"), "{out}");
    assert!(out.contains("-5.000000000000e-1i"));
    assert!(out.contains("+1.984313483298e0 -7.500000000000e-1i"));
    let dev: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("analytic: max multiset deviation "))
        .expect("deviation line")
        .parse()
        .unwrap();
    assert!(dev <= 1e-8);
}

#[test]
fn spectrum_gamma0_ep_is_reported() {
    let out = ok(&["spectrum", "--gamma1", "1", "--gamma2", "3", "--omega", "2", "--dissipation", "0", "--analytic"]);
    // the Hamiltonian itself is defective here, so all four eigenvalues meet
    assert!(out.contains("+1.000000000000e0i algebraic 4 geometric 2 (exceptional)"), "{out}");
    assert!(out.contains("numeric fallback used"));
}

#[test]
fn spectrum_trivial_system() {
    let out = ok(&["spectrum", "--gamma1", "0", "--gamma2", "0", "--omega", "0", "--dissipation", "0"]);
    let zero_lines = out.lines().filter(|l| l.contains("+0.000000000000e0 +0.000000000000e0i  phase")).count();
    assert_eq!(zero_lines, 4, "{out}");
}

#[test]
fn spectrum_json_parses() {
    let out = ok(&["spectrum", "--json", "--analytic"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["steady"]["verdict"], "HasSteadyState");
    assert_eq!(v["report"]["eigenpairs"].as_array().unwrap().len(), 4);
    assert_eq!(v["analytic_values"].as_array().unwrap().len(), 4);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn normalized_units_rescale_rates() {
    let raw = ok(&["spectrum", "--gamma1", "1", "--gamma2", "1", "--omega", "2", "--dissipation", "1"]);
    let scaled = ok(&["spectrum", "--normalized", "--gamma1", "2", "--gamma2", "2", "--omega", "4", "--dissipation", "2"]);
    let eigs = |s: &str| s.lines().filter(|l| l.starts_with("  l")).map(str::to_owned).collect::<Vec<_>>();
    assert_eq!(eigs(&raw), eigs(&scaled));
    assert!(scaled.contains("(units of gamma1)"));
    assert_eq!(code(&["spectrum", "--normalized", "--gamma1", "0"]), 1);
}

#[test]
fn sweep_figure_presets_to_file() {
    let dir = tempfile::tempdir().unwrap();
    for (fig, name) in [("fig3", "fig3.csv"), ("fig4ab", "fig4.csv")] {
        let path = dir.path().join(name);
        ok(&["sweep", "--figure", fig, "--out", path.to_str().unwrap()]);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 201);
        assert!(text.starts_with("param,re_l1,im_l1,"));
        assert_eq!(last_row(&text)[0], if fig == "fig3" { 6.0 } else { 8.0 });
    }
}

#[test]
fn minimal_two_row_sweep() {
    let out = ok(&["sweep", "--param", "gamma2", "--from", "0", "--to", "1", "--steps", "2", "--outputs", "eigenvalues"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "param,re_l1,im_l1,re_l2,im_l2,re_l3,im_l3,re_l4,im_l4");
    assert!(lines[1].starts_with("0,") && lines[2].starts_with("1,"));
}

#[test]
fn sweep_output_is_reproducible_across_threads() {
    let args = ["sweep", "--figure", "fig4ab", "--format", "json"];
    let a = ok(&args);
    let b = ok(&args);
    assert_eq!(a, b);
    let seq = ok(&["sweep", "--figure", "fig4ab", "--format", "json", "--sequential"]);
    assert_eq!(a, seq);
    let capped = Command::new(env!("CARGO_BIN_EXE_liouvillian-lab"))
        .args(args)
        .env("LIOUVILLIAN_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(capped.stdout).unwrap(), a);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["metadata"]["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["metadata"]["spec"]["tolerances"]["eig"].is_number());
}

#[test]
fn sweep_usage_errors() {
    assert_eq!(code(&["sweep", "--figure", "fig9"]), 1);
    assert_eq!(code(&["sweep"]), 1);
    assert_eq!(code(&["sweep", "--param", "gamma2", "--from", "1", "--to", "0"]), 1);
    assert_eq!(code(&["sweep", "--param", "beta", "--from", "0", "--to", "1"]), 1);
    assert_eq!(code(&["sweep", "--figure", "fig3", "--outputs", "phases"]), 1);
    assert_eq!(code(&["sweep", "--normalized", "--param", "gamma1", "--from", "0.5", "--to", "1"]), 1);
}

#[test]
fn evolve_fig2b_converges() {
    let out = ok(&[
        "evolve", "--gamma1", "1", "--gamma2", "1", "--omega", "2", "--dissipation", "1", "--initial", "0.25,0,0,0.75",
        "--t-max", "10", "--steps", "1000",
    ]);
    assert_eq!(out.lines().next().unwrap(), "t,rho00,rho11,re_rho10,im_rho10,re_trace,im_trace");
    assert_eq!(out.lines().count(), 1002);
    let last = last_row(&out);
    assert_eq!(last[0], 10.0);
    assert!((last[1] - 0.5).abs() < 1e-4 && (last[2] - 0.5).abs() < 1e-4, "{last:?}");
}

#[test]
fn evolve_fig4_coherence_real_part_vanishes() {
    let out = ok(&[
        "evolve", "--gamma1", "1", "--gamma2", "1.298", "--omega", "2", "--dissipation", "2", "--initial",
        "0.5,0.5,0.5,0.5", "--t-max", "40", "--steps", "2000",
    ]);
    let last = last_row(&out);
    assert!(last[3].abs() < 1e-4, "{last:?}");
    assert!(last[4].abs() > 0.1);
}

#[test]
fn evolve_zero_preset_is_constant() {
    let out = ok(&["evolve", "--preset", "zero"]);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    let tail = |r: &str| r.split_once(',').unwrap().1.to_owned();
    assert!(rows.iter().all(|r| tail(r) == tail(rows[0])));
}

#[test]
fn evolve_presets_and_modes() {
    let fig2d = lab(&["evolve", "--preset", "fig2d"]);
    assert!(String::from_utf8_lossy(&fig2d.stderr).contains("gamma2 = 2 gamma1 is assumed"));
    let last = last_row(&String::from_utf8(fig2d.stdout).unwrap());
    assert!((last[1] - 2.0 / 3.0).abs() < 1e-3, "{last:?}");

    let raw = ok(&["evolve", "--preset", "fig2b", "--normalize", "raw"]);
    let trace = ok(&["evolve", "--preset", "fig2b", "--normalize", "trace"]);
    let (r, t) = (last_row(&raw), last_row(&trace));
    assert!((r[1] / r[5] - t[1]).abs() < 1e-12);
    assert_eq!(r[5], t[5]);

    let json = ok(&["evolve", "--preset", "fig4cd", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 1001);
    assert_eq!(v["metadata"]["normalization"], "trace");
}

#[test]
fn evolve_rejects_malformed_initial() {
    for bad in ["0.25,0,0", "0.25,0,x,0.75", "0.25,,0,0.75"] {
        assert_eq!(code(&["evolve", "--initial", bad]), 1, "{bad}");
    }
    assert_eq!(code(&["evolve"]), 1);
    assert_eq!(code(&["evolve", "--preset", "fig9"]), 1);
    assert_eq!(code(&["evolve", "--initial", "1,0,0,0", "--normalize", "half"]), 1);
    assert_eq!(code(&["evolve", "--initial", "1+i,0.5-2i,-i,1e-3"]), 0);
}

#[test]
fn find_eps_gamma0() {
    let out = ok(&["find-eps", "--gamma1", "1", "--omega", "2", "--dissipation", "0"]);
    assert!(out.contains("gamma2 = 3.0000000000"), "{out}");
    assert!(out.contains("gamma2 = -5.0000000000"));
    assert!(out.contains("outside gamma2 >= 0"));
}

#[test]
fn find_eps_coherent() {
    let out = ok(&["find-eps", "--gamma1", "1", "--omega", "2", "--dissipation", "2"]);
    assert!(out.contains("gamma2 = 6.9202037654"), "{out}");
    assert!(out.contains("lambda = +0.000000000000e0 +7.001808327951e-1i"));
    assert!(out.contains("algebraic 2 geometric 1 (exceptional)"));
}

#[test]
fn find_eps_incoherent() {
    let out = ok(&["find-eps", "--gamma1", "1", "--gamma2", "1", "--omega", "0"]);
    assert!(out.contains("dissipation = gamma1 + gamma2 = 2"), "{out}");
    assert!(out.contains("lambda_derived = +0.000000000000e0 -1.000000000000e0i (algebraic 4, geometric 3)"));
    assert!(out.contains("lambda_reported = +0.000000000000e0 -2.000000000000e0i (not confirmed"));
    let v: serde_json::Value = serde_json::from_str(&ok(&["find-eps", "--omega", "0", "--json"])).unwrap();
    assert_eq!(v["report"]["family"], "incoherent");
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sweep.out");
    let cfg = dir.path().join("lab.json");
    let body = serde_json::json!({
        "params": { "gamma1": 1, "gamma2": 1, "omega": 2, "dissipation": 1 },
        "tolerances": { "eig": 1e-11 },
        "output": { "format": "json", "path": out_path }
    });
    std::fs::write(&cfg, body.to_string()).unwrap();
    let cfg_s = cfg.to_str().unwrap();
    ok(&["--config", cfg_s, "sweep", "--param", "omega", "--from", "0", "--to", "2", "--steps", "3"]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["metadata"]["spec"]["tolerances"]["eig"], 1e-11);
    assert_eq!(v["metadata"]["spec"]["fixed"]["dissipation"], 1.0);

    // flags override the config
    let spec = ok(&["spectrum", "--config", cfg_s, "--dissipation", "0", "--gamma2", "3"]);
    assert!(spec.contains("gamma1 = 1, gamma2 = 3, omega = 2, dissipation = 0"), "{spec}");
    assert!(spec.contains("eig 1e-11"));
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    };
    let cases = [
        write("unknown.json", r#"{"parms": {}}"#),
        write("negative.json", r#"{"tolerances": {"steady": -1}}"#),
        write("invalid.json", r#"{"params": {"gamma1": -2}}"#),
        write("syntax.json", "{"),
    ];
    for p in &cases {
        assert_eq!(code(&["--config", p.to_str().unwrap(), "spectrum"]), 1, "{}", p.display());
    }
    assert_eq!(code(&["--config", Path::new("/nonexistent/lab.json").to_str().unwrap(), "spectrum"]), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["spectrum", "--gamma1", "-1"]), 1);
    assert_eq!(code(&["spectrum", "--omega", "nan"]), 1);
    // residual target below what the solver can reach
    assert_eq!(code(&["spectrum", "--eig-tol", "1e-300"]), 2);
    let bad_env = Command::new(env!("CARGO_BIN_EXE_liouvillian-lab"))
        .args(["spectrum"])
        .env("LIOUVILLIAN_LAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(1));
}
