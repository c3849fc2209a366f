use liouvillian_core::densec::{eig, kron, vec_max_abs_diff, CMatrix, C64, ONE, ZERO};
use liouvillian_core::spectra::{self, gauge_fix, multiset_distance, PhaseVerdict};
use liouvillian_core::twolevel::{self, Param, TwoLevelParams};
use liouvillian_core::vectorize::{build_liouvillian, rhs_direct, unvec_row, vec_row, Channel, OpenSystem};
use liouvillian_core::Error;
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn matrix(n: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(complex(), n * n).prop_map(move |d| CMatrix::from_vec(n, n, d).unwrap())
}

fn hermitian(n: usize) -> impl Strategy<Value = CMatrix> {
    matrix(n).prop_map(|a| (&a + &a.adjoint()).scale(C64::new(0.5, 0.0)))
}

fn system(n: usize) -> impl Strategy<Value = OpenSystem> {
    (matrix(n), prop::collection::vec((0.0..2.0f64, matrix(n)), 0..3)).prop_map(|(h, chans)| {
        let chans = chans.into_iter().map(|(r, c)| Channel::new(r, c).unwrap()).collect();
        OpenSystem::new(h, chans).unwrap()
    })
}

fn params() -> impl Strategy<Value = TwoLevelParams> {
    (0.0..5.0f64, 0.0..5.0f64, -5.0..5.0f64, 0.0..5.0f64)
        .prop_map(|(a, b, c, d)| TwoLevelParams::new(a, b, c, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn vec_of_product(a in matrix(3), x in matrix(3), b in matrix(3)) {
        let lhs = vec_row(&(&(&a * &x) * &b)).unwrap();
        let rhs = kron(&a, &b.transpose()).mul_vec(&vec_row(&x).unwrap()).unwrap();
        prop_assert!(vec_max_abs_diff(&lhs, &rhs) < 1e-13);
        prop_assert_eq!(unvec_row(&vec_row(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn superoperator_matches_direct_rhs(sys in (2usize..4).prop_flat_map(system), rho in matrix(3)) {
        let n = sys.dim();
        let rho = CMatrix::from_fn(n, n, |i, j| rho[(i, j)]);
        let via_l = build_liouvillian(&sys).apply_rhs(&vec_row(&rho).unwrap()).unwrap();
        let direct = vec_row(&rhs_direct(&sys, &rho).unwrap()).unwrap();
        prop_assert!(vec_max_abs_diff(&via_l, &direct) < 1e-13);
    }

    #[test]
    fn hermitian_input_gives_hermitian_rate(p in params(), rho in hermitian(2)) {
        let sys = twolevel::open_system(&p).unwrap();
        let d = rhs_direct(&sys, &rho).unwrap();
        prop_assert!(d.max_abs_diff(&d.adjoint()) < 1e-13);
    }

    #[test]
    fn trace_rate_identity(p in params(), rho in matrix(2)) {
        let v = vec_row(&rho).unwrap();
        let rate = twolevel::liouvillian(&p).unwrap().apply_rhs(&v).unwrap();
        let expected = v[3] * p.gamma2 - v[0] * p.gamma1;
        prop_assert!((rate[0] + rate[3] - expected).norm() < 1e-13);
    }

    #[test]
    fn hermitian_limit_conserves_trace(h in hermitian(3), chans in prop::collection::vec((0.0..2.0f64, matrix(3)), 1..3)) {
        let chans = chans.into_iter().map(|(r, c)| Channel::new(r, c).unwrap()).collect();
        let l = build_liouvillian(&OpenSystem::new(h, chans).unwrap());
        // vec(I) is a left null vector of L
        let id = vec_row(&CMatrix::identity(3)).unwrap();
        let m = l.matrix();
        for col in 0..9 {
            let s: C64 = (0..9).map(|row| id[row] * m[(row, col)]).sum();
            prop_assert!(s.norm() < 1e-13);
        }
    }

    #[test]
    fn closed_form_matches_numeric(p in params()) {
        match twolevel::analytic_eigenvalues(&p) {
            Ok(a) => {
                let num = eig(twolevel::liouvillian(&p).unwrap().matrix(), 1e-10).unwrap().values;
                let scale = 1.0 + num.iter().map(|z| z.norm()).fold(0.0, f64::max);
                prop_assert!(multiset_distance(&a, &num) <= 1e-8 * scale);
            }
            Err(Error::DegenerateTheta { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn trace_of_spectrum(p in params()) {
        let (pairs, _) = twolevel::sector_eigenpairs(&p, 1e-10).unwrap();
        let sum: C64 = pairs.iter().map(|e| e.value).sum();
        prop_assert!((sum - p.liouvillian_trace()).norm() < 1e-11 * (1.0 + p.eta_plus().abs() + p.dissipation));
    }

    #[test]
    fn sector_pairs_are_eigenpairs(p in params()) {
        let l = twolevel::liouvillian(&p).unwrap();
        let (pairs, _) = twolevel::sector_eigenpairs(&p, 1e-10).unwrap();
        for e in pairs {
            let lv = l.matrix().mul_vec(&e.state).unwrap();
            let res: f64 = lv.iter().zip(&e.state).map(|(a, b)| (a - e.value * b).norm()).fold(0.0, f64::max);
            prop_assert!(res < 1e-10 * (1.0 + l.matrix().frobenius_norm()));
        }
    }

    #[test]
    fn coherence_relation_holds(p in params()) {
        prop_assume!(p.omega.abs() > 1e-3);
        let (pairs, _) = twolevel::sector_eigenpairs(&p, 1e-10).unwrap();
        for e in pairs.iter().skip(1) {
            let s = gauge_fix(&e.state).unwrap();
            match twolevel::coherence_relation(s[0], s[3], e.value, &p) {
                Ok(pred) => {
                    let den = (2.0 * e.value - C64::new(0.0, p.eta_minus())).norm();
                    prop_assume!(den > 1e-6);
                    let scale = 1.0 + s.iter().map(|z| z.norm()).fold(0.0, f64::max);
                    prop_assert!((s[2] - pred).norm() <= 1e-8 * scale / den.min(1.0));
                    prop_assert!((s[1] + pred).norm() <= 1e-8 * scale / den.min(1.0));
                }
                Err(Error::TrivialBranch) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }

    #[test]
    fn gauge_idempotent_and_phase_invariant(v in prop::collection::vec(complex(), 4), k in complex()) {
        prop_assume!(v.iter().any(|z| z.norm() > 1e-6) && k.norm() > 1e-3);
        let g = gauge_fix(&v).unwrap();
        prop_assert_eq!(gauge_fix(&g).unwrap(), g.clone());
        let scaled: Vec<C64> = v.iter().map(|z| z * k).collect();
        let gs = gauge_fix(&scaled).unwrap();
        let scale = 1.0 + g.iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(vec_max_abs_diff(&gs, &g) <= 4.0 * f64::EPSILON * scale);
    }

    #[test]
    fn pt_unbroken_states_have_half_pi_phase(g in 0.05..1.0f64, omega in 1.2..3.0f64) {
        // gamma1 = gamma2 = g < omega: all eigenvalues real
        let p = TwoLevelParams::new(g, g, omega, 0.0).unwrap();
        let report = spectra::analyze_two_level(&p, &Default::default()).unwrap();
        for (pair, verdict) in report.eigenpairs.iter().zip(report.phases.unwrap()) {
            prop_assert!(pair.value.im.abs() < 1e-9);
            prop_assert_ne!(verdict, PhaseVerdict::Violated);
        }
    }

    #[test]
    fn param_roundtrip(p in params(), x in 0.0..3.0f64) {
        for which in Param::ALL {
            prop_assert_eq!(p.with(which, x).get(which), x);
        }
    }
}

#[test]
fn steady_s1_is_null_vector() {
    for g in [0.0, 0.5, 1.0, 3.0] {
        let (gamma, s) = twolevel::steady_s1(g, g).unwrap();
        let l = twolevel::liouvillian(&TwoLevelParams::new(g, g, 2.0, gamma).unwrap()).unwrap();
        let lv = l.matrix().mul_vec(&s).unwrap();
        assert!(lv.iter().all(|z| z.norm() < 1e-15));
    }
    // unbalanced gain and loss: the zero eigenvalue at Gamma = (g1+g2)/2 is the
    // traceless trivial mode, and (1/2, 0, 0, 1/2) is not stationary
    assert!(twolevel::steady_s1(1.0, 3.0).is_err());
    let l = twolevel::liouvillian(&TwoLevelParams::new(1.0, 3.0, 2.0, 2.0).unwrap()).unwrap();
    let half = C64::new(0.5, 0.0);
    let lv = l.matrix().mul_vec(&[half, ZERO, ZERO, half]).unwrap();
    assert!(lv.iter().any(|z| z.norm() > 0.1));
}

#[test]
fn steady_s2_is_null_vector() {
    let (g2, s) = twolevel::steady_s2(1.0, 2.0).unwrap();
    let l = twolevel::liouvillian(&TwoLevelParams::new(1.0, g2, 0.0, 2.0).unwrap()).unwrap();
    assert!(l.matrix().mul_vec(&s).unwrap().iter().all(|z| z.norm() < 1e-15));
    assert_eq!(s[1], ZERO);
    assert_eq!(s[0] + s[3], ONE);
}
