use num_complex::Complex64;
use painlax_core::cases::{Registry, BUILTIN_IDS};
use painlax_core::exactpoly::{parse_poly, var, Poly};
use painlax_core::isomono::derive;
use painlax_core::numerics::*;
use proptest::prelude::*;

const LAMBDAS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];
const TWO_TIME: [&str; 4] = ["sl2n3-I-P22", "sl2n3-I-P4h", "sl2n3-II-P1h", "sl2n3-II-P21"];

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn system(id: &str) -> (NumericSystem, Vec<f64>, f64, f64) {
    let reg = Registry::builtin();
    let case = reg.get(id).unwrap();
    let d = derive(case, &reg).unwrap();
    let num = case.numeric.clone().unwrap();
    (NumericSystem::from_derivation(&d, case).unwrap(), num.x0, num.tol, num.threshold)
}

fn painleve_one() -> (Poly, HamiltonianField) {
    let h = parse_poly("1/2*p^2 - 2*q^3 - t*q").unwrap();
    let f = compile_flow(&h, &[(var("q"), var("p"))], &[var("q"), var("p"), var("t")]).unwrap();
    (h, f)
}

fn timed(f: &HamiltonianField) -> impl Fn(f64, &[Complex64]) -> Vec<Complex64> + '_ {
    move |t, y| f.eval(&[y[0], y[1], c(t)])
}

#[test]
fn compiled_painleve_one_field() {
    let (_, f) = painleve_one();
    let v = f.eval(&[c(0.5), c(-1.5), c(2.0)]);
    assert_eq!(v, vec![c(-1.5), c(6.0 * 0.25 + 2.0)]);
    let zero = compile_flow(&Poly::zero(), &[(var("q"), var("p"))], &[var("q"), var("p")]).unwrap();
    assert_eq!(zero.eval(&[c(1.0), c(2.0)]), vec![c(0.0), c(0.0)]);
    let bad = compile_flow(&Poly::zero(), &[(var("q"), var("p"))], &[var("p"), var("q")]);
    assert!(matches!(bad, Err(NumericError::Layout(_))));
    let unbound = compile_flow(&parse_poly("q*s").unwrap(), &[(var("q"), var("p"))], &[var("q"), var("p")]);
    assert!(matches!(unbound, Err(NumericError::Unbound(_))));
}

#[test]
fn gradients_match_finite_differences() {
    for id in BUILTIN_IDS {
        let (sys, ..) = system(id);
        let r = gradient_check(&sys, painlax_core::sampling::DEFAULT_SEED, 20, 1e-5, 1e-7);
        assert!(r.pass, "{id}: {}", r.max_residual);
    }
}

#[test]
fn harmonic_energy_drift() {
    let f = harmonic_toy();
    let tr = integrate(|_, y| f.eval(y), &[c(1.0), c(0.0)], 0.0, 10.0, &IntegrateOptions::rk45(1e-12)).unwrap();
    let e = |y: &[Complex64]| f.h.eval(y);
    let e0 = e(&tr.states[0]);
    let drift = tr.states.iter().map(|y| (e(y) - e0).norm()).fold(0.0, f64::max);
    assert!(drift < 1e-10, "{drift}");
    assert!(tr.times.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(*tr.times.last().unwrap(), 10.0);
}

#[test]
fn rk4_order_four() {
    let factor = rk4_convergence(50, 10.0).unwrap();
    assert!((12.0..=20.0).contains(&factor), "{factor}");
}

#[test]
fn rk4_agrees_with_rk45_on_painleve_one() {
    let (_, f) = painleve_one();
    let y0 = [c(0.1), c(0.2)];
    let a = integrate(timed(&f), &y0, 0.0, 0.5, &IntegrateOptions::rk4(400)).unwrap();
    let b = integrate(timed(&f), &y0, 0.0, 0.5, &IntegrateOptions::rk45(1e-10)).unwrap();
    let d = a.last().iter().zip(b.last()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(d < 1e-6, "{d}");
}

#[test]
fn painleve_one_blows_up() {
    let (_, f) = painleve_one();
    let r = integrate(timed(&f), &[c(0.1), c(0.2)], 0.0, 50.0, &IntegrateOptions::rk45(1e-10));
    match r {
        Err(NumericError::BlowupDetected { t, norm }) => assert!(t > 0.0 && t < 50.0 && norm > 1e8),
        other => panic!("expected blowup, got {other:?}"),
    }
    let (sys, x0, ..) = system("sl2n2-II-P1");
    let b = blowup_probe(&sys, 0, &x0, 50.0, 1e8).unwrap().expect("blowup on the real line");
    assert!(b.t > 0.0 && b.t < 50.0);
}

#[test]
fn integrator_rejects_bad_configuration() {
    let f = harmonic_toy();
    let y0 = [c(1.0), c(0.0)];
    assert!(matches!(integrate(|_, y| f.eval(y), &y0, 1.0, 0.0, &IntegrateOptions::rk45(1e-8)), Err(NumericError::Config(_))));
    assert!(matches!(integrate(|_, y| f.eval(y), &y0, 0.0, 1.0, &IntegrateOptions::rk4(0)), Err(NumericError::Config(_))));
    let mut opts = IntegrateOptions::rk45(1e-12);
    opts.max_steps = 3;
    assert!(matches!(integrate(|_, y| f.eval(y), &y0, 0.0, 10.0, &opts), Err(NumericError::StepLimit { .. })));
}

#[test]
fn autonomous_spectra_are_conserved() {
    for id in BUILTIN_IDS {
        let (sys, x0, ..) = system(id);
        for flow in 0..sys.flows.len() {
            let r = spectral_drift(&sys, flow, SpectralVariant::Autonomous, &x0, 0.0, 1.0, 1e-10, &LAMBDAS, 1e-8).unwrap();
            assert!(r.pass, "{id} flow {flow}: {}", r.max_residual);
            let r0 = spectral_drift(&sys, flow, SpectralVariant::Autonomous, &x0, 0.0, 0.0, 1e-10, &LAMBDAS, 1e-8).unwrap();
            assert_eq!(r0.max_residual, 0.0);
        }
    }
}

#[test]
fn promoted_spectrum_drifts() {
    let (sys, x0, ..) = system("sl2n2-I-P2");
    let r = spectral_drift(&sys, 0, SpectralVariant::Promoted, &x0, 0.0, 1.0, 1e-10, &LAMBDAS, 1e-3).unwrap();
    assert!(r.pass && r.max_residual > 1e-3, "{}", r.max_residual);
}

#[test]
fn energy_is_conserved() {
    for id in BUILTIN_IDS {
        let (sys, x0, tol, _) = system(id);
        for flow in 0..sys.flows.len() {
            let r = energy_drift(&sys, flow, &x0, 0.0, 1.0, tol).unwrap();
            assert!(r.pass, "{id} flow {flow}: {} vs {}", r.max_residual, r.threshold);
        }
    }
}

#[test]
fn curvature_residuals() {
    for id in BUILTIN_IDS {
        let (sys, x0, tol, threshold) = system(id);
        let r = curvature_residual(&sys, None, CurvatureVariant::Promoted, &x0, 0.0, 1.0, tol, &LAMBDAS, threshold).unwrap();
        assert!(r.pass, "{id}: {}", r.max_residual);
        assert!(r.lambdas.len() as u32 > sys.lambda_degree);
        if sys.l > 0 {
            assert!(!r.lambdas.contains(&0.0));
        }
    }
}

#[test]
fn curvature_residual_below_tolerance_scale() {
    let (sys, x0, ..) = system("sl2n2-I-P2");
    for tol in [1e-8, 1e-10, 1e-12] {
        let r = curvature_residual(&sys, None, CurvatureVariant::Promoted, &x0, 0.0, 1.0, tol, &LAMBDAS, 10.0 * tol).unwrap();
        assert!(r.pass, "{tol}: {}", r.max_residual);
    }
}

#[test]
fn curvature_negative_control_isolates_the_lambda_term() {
    let (sys, x0, ..) = system("sl2n2-I-P2");
    let r = curvature_residual(&sys, Some(0), CurvatureVariant::AutonomousWithTerm, &x0, 0.0, 0.0, 1e-10, &LAMBDAS, 1e-8).unwrap();
    assert!(r.pass);
    let y: Vec<Complex64> = x0.iter().map(|x| c(*x)).collect();
    let term = r
        .lambdas
        .iter()
        .map(|l| {
            let env = sys.env(&y, &[0.0], *l);
            sys.matrix_norm(&NumericSystem::eval(&sys.flows[0].auto_da_dlambda, &env))
        })
        .fold(0.0, f64::max);
    assert!((r.max_residual - term).abs() < 1e-12, "{} vs {term}", r.max_residual);
}

#[test]
fn two_time_flows_commute() {
    for id in TWO_TIME {
        let (sys, x0, ..) = system(id);
        let r = flow_commutation(&sys, &sys.timed_field(0), &sys.timed_field(1), &x0, 0.1, 1e-10, 1e-6, false).unwrap();
        assert!(r.pass, "{id}: {}", r.max_residual);
        let r0 = flow_commutation(&sys, &sys.timed_field(0), &sys.timed_field(1), &x0, 0.0, 1e-10, 1e-6, false).unwrap();
        assert_eq!(r0.max_residual, 0.0);
    }
}

#[test]
fn mismatched_pair_does_not_commute() {
    let (a, x0, ..) = system("sl2n3-II-P1h");
    let (b, ..) = system("sl2n3-II-P21");
    let r = flow_commutation(&a, &a.timed_field(0), &b.timed_field(1), &x0, 0.1, 1e-10, 1e-2, true).unwrap();
    assert!(r.pass, "{}", r.max_residual);
}

#[test]
fn run_check_defaults_and_errors() {
    let reg = Registry::builtin();
    let case = reg.get("sl2n2-I-P2").unwrap();
    let d = derive(case, &reg).unwrap();
    let opts = NumericOptions::default();
    for kind in [CheckKind::Spectral, CheckKind::Curvature, CheckKind::Gradient] {
        assert!(run_check(&d, case, kind, &opts).unwrap().pass, "{kind:?}");
    }
    assert!(matches!(run_check(&d, case, CheckKind::Commute, &opts), Err(NumericError::Config(_))));
    let bad = NumericOptions { x0: Some(vec![0.1]), ..NumericOptions::default() };
    assert!(matches!(run_check(&d, case, CheckKind::Spectral, &bad), Err(NumericError::Config(_))));
    let mut bare = case.clone();
    bare.numeric.as_mut().unwrap().parameters.clear();
    assert!(matches!(run_check(&d, &bare, CheckKind::Spectral, &opts), Err(NumericError::Unbound(_))));
}

#[test]
fn reports_serialize_deterministically() {
    let reg = Registry::builtin();
    let case = reg.get("sl2n3-II-P1h").unwrap();
    let d = derive(case, &reg).unwrap();
    let r = || serde_json::to_string(&run_check(&d, case, CheckKind::Commute, &NumericOptions::default()).unwrap()).unwrap();
    assert_eq!(r(), r());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn harmonic_energy_conserved(q in -2.0f64..2.0, p in -2.0f64..2.0, span in 0.1f64..5.0) {
        let f = harmonic_toy();
        let tol = 1e-10;
        let tr = integrate(|_, y| f.eval(y), &[c(q), c(p)], 0.0, span, &IntegrateOptions::rk45(tol)).unwrap();
        let e0 = f.h.eval(&tr.states[0]);
        let drift = tr.states.iter().map(|y| (f.h.eval(y) - e0).norm()).fold(0.0, f64::max);
        prop_assert!(drift < 10.0 * tol * span * (1.0 + e0.norm()));
    }

    #[test]
    fn trajectory_times_increase(q in -0.5f64..0.5, p in -0.5f64..0.5) {
        let (_, f) = painleve_one();
        let tr = integrate(timed(&f), &[c(q), c(p)], 0.0, 0.3, &IntegrateOptions::rk45(1e-9)).unwrap();
        prop_assert!(tr.times.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(tr.states.iter().all(|s| s.len() == 2));
    }

    #[test]
    fn rk4_matches_harmonic_rotation(q in -1.0f64..1.0, p in -1.0f64..1.0) {
        let f = harmonic_toy();
        let tr = integrate(|_, y| f.eval(y), &[c(q), c(p)], 0.0, 1.0, &IntegrateOptions::rk4(200)).unwrap();
        let (s, co) = 1.0f64.sin_cos();
        let want = [q * co + p * s, p * co - q * s];
        for (z, w) in tr.last().iter().zip(want) {
            prop_assert!((z.re - w).abs() < 1e-9);
        }
    }
}
