use painlax_core::exactpoly::{parse_ratexpr, RatExpr};
use painlax_core::liealg::LieAlgebraSpec;
use painlax_core::looppoisson::lambda;
use painlax_core::reduction::suites::reduced_suite;
use painlax_core::reduction::{beta_corrections, hamiltonian_lax, reduce, verify_chart, Chart, ChartDef, Distribution, ReducedSystem, ReductionError};
use painlax_core::sampling::{rng, DEFAULT_SEED};

fn e(s: &str) -> RatExpr {
    parse_ratexpr(s).unwrap()
}

fn x0(spec: &LieAlgebraSpec, pairs: &[(&str, i64)]) -> Vec<RatExpr> {
    spec.coords
        .iter()
        .map(|c| pairs.iter().find(|p| p.0 == c).map_or(RatExpr::zero(), |p| RatExpr::int(p.1)))
        .collect()
}

fn case_one(n: usize) -> ChartDef {
    let mut coords = Vec::new();
    let mut inv = serde_json::Map::new();
    let mut inverse = serde_json::Map::new();
    for j in 1..=n {
        coords.push(format!("U{j}"));
        inv.insert(format!("U{j}"), format!("u{j}").into());
        inverse.insert(format!("u{j}"), format!("U{j}").into());
        coords.push(format!("V{}", j + 1));
        inv.insert(format!("V{}", j + 1), format!("v{j}*w1").into());
        inverse.insert(format!("v{j}"), format!("V{}", j + 1).into());
    }
    for j in 1..n {
        coords.push(format!("W{j}"));
        inv.insert(format!("W{j}"), format!("w{}/w1", j + 1).into());
        inverse.insert(format!("w{}", j + 1), format!("W{j}").into());
    }
    inverse.insert("w1".into(), "1".into());
    serde_json::from_value(serde_json::json!({
        "slice": {"w1": "1"},
        "coordinates": coords,
        "invariants": inv,
        "inverse": inverse,
        "units": ["w1"],
    }))
    .unwrap()
}

fn case_two(n: usize) -> ChartDef {
    let mut coords = vec!["V0".to_string()];
    let mut inv = serde_json::Map::new();
    let mut inverse = serde_json::Map::new();
    inv.insert("V0".into(), "v1".into());
    inverse.insert("v1".into(), "V0".into());
    inverse.insert("u1".into(), "0".into());
    for j in 1..=n {
        let w = format!("W{}", 2 * j);
        coords.push(w.clone());
        inv.insert(w.clone(), format!("w{j} + 2*u{j}*u1/v1 - v{j}*u1^2/v1^2").into());
        inverse.insert(format!("w{j}"), w.into());
        if j > 1 {
            let u = format!("U{}", 2 * j - 1);
            coords.push(u.clone());
            inv.insert(u.clone(), format!("u{j} - v{j}*u1/v1").into());
            inverse.insert(format!("u{j}"), u.into());
            let v = format!("V{}", 2 * j - 2);
            coords.push(v.clone());
            inv.insert(v.clone(), format!("v{j}").into());
            inverse.insert(format!("v{j}"), v.into());
        }
    }
    serde_json::from_value(serde_json::json!({
        "slice": {"u1": "0"},
        "coordinates": coords,
        "invariants": inv,
        "inverse": inverse,
        "units": ["v1", "V0"],
    }))
    .unwrap()
}

fn so5_chart() -> ChartDef {
    let names = ["Q", "S", "T", "U", "V", "W", "X", "Y"];
    let mut inverse = serde_json::Map::new();
    inverse.insert("p1".into(), "0".into());
    inverse.insert("r1".into(), "0".into());
    for c in names {
        inverse.insert(format!("{}1", c.to_lowercase()), c.into());
    }
    serde_json::from_value(serde_json::json!({
        "slice": {"p1": "0", "r1": "0"},
        "coordinates": names,
        "inverse": inverse,
        "units": ["S"],
    }))
    .unwrap()
}

fn build(spec: &LieAlgebraSpec, n: usize, x0: &[RatExpr], def: &ChartDef) -> ReducedSystem {
    let dist = Distribution::new(spec, n, &x0.to_vec()).unwrap();
    let chart = Chart::from_def(def, &dist).unwrap();
    verify_chart(&chart, &dist, &mut rng(DEFAULT_SEED)).unwrap();
    reduce(&dist, &chart).unwrap()
}

#[test]
fn distribution_coordinate_forms() {
    let spec = LieAlgebraSpec::sl2();
    let d = Distribution::new(&spec, 2, &x0(&spec, &[("u", 1)])).unwrap();
    let g = &d.generators[0];
    for j in 1..=2 {
        assert!(g[j][0].is_zero());
        assert_eq!(g[j][1], e(&format!("2*v{j}")));
        assert_eq!(g[j][2], e(&format!("-2*w{j}")));
    }
    assert!(d.suite().iter().all(|c| c.pass));
    let d = Distribution::new(&spec, 2, &x0(&spec, &[("w", 1)])).unwrap();
    let g = &d.generators[0];
    for j in 1..=2 {
        assert_eq!(g[j][0], e(&format!("-v{j}")));
        assert!(g[j][1].is_zero());
        assert_eq!(g[j][2], e(&format!("2*u{j}")));
    }
    assert!(d.suite().iter().all(|c| c.pass));
}

#[test]
fn corrupted_chart_is_rejected() {
    let spec = LieAlgebraSpec::sl2();
    let dist = Distribution::new(&spec, 2, &x0(&spec, &[("u", 1)])).unwrap();
    let mut def = case_one(2);
    def.invariants.as_mut().unwrap().insert("V2".into(), "v1 + w1".into());
    let chart = Chart::from_def(&def, &dist).unwrap();
    let r = verify_chart(&chart, &dist, &mut rng(DEFAULT_SEED));
    assert!(matches!(r, Err(ReductionError::ChartInvalid(_))), "{r:?}");
}

#[test]
fn sl2_case_one() {
    let spec = LieAlgebraSpec::sl2();
    let red = build(&spec, 2, &x0(&spec, &[("u", 1)]), &case_one(2));
    assert_eq!(*red.psi(0, 2), e("2*U2 + U1^2 + V2"));
    let f = &(red.psi(0, 1) * &RatExpr::var(lambda())) + red.psi(0, 2);
    let bc = beta_corrections(&red, 1, &f).unwrap();
    assert_eq!(bc.beta, vec![e("W1")]);
    let checks = reduced_suite(&red, &mut rng(DEFAULT_SEED)).unwrap();
    assert!(checks.iter().all(|c| c.pass), "{checks:?}");
}

#[test]
fn invariant_and_lift_modes_agree() {
    let spec = LieAlgebraSpec::sl2();
    let a = build(&spec, 2, &x0(&spec, &[("u", 1)]), &case_one(2));
    let mut def = case_one(2);
    def.invariants = None;
    let b = build(&spec, 2, &x0(&spec, &[("u", 1)]), &def);
    for k in 1..=3 {
        assert_eq!(a.tensor(k), b.tensor(k));
    }
}

#[test]
fn sl2_case_two() {
    let spec = LieAlgebraSpec::sl2();
    let red = build(&spec, 2, &x0(&spec, &[("w", 1)]), &case_two(2));
    let checks = reduced_suite(&red, &mut rng(DEFAULT_SEED)).unwrap();
    assert!(checks.iter().all(|c| c.pass), "{checks:?}");
    let red = build(&spec, 3, &x0(&spec, &[("w", 1)]), &case_two(3));
    let unit: std::collections::BTreeMap<_, _> = [(painlax_core::exactpoly::var("V0"), RatExpr::one())].into();
    assert_eq!(red.psi(0, 4).substitute(&unit).unwrap(), e("U3^2 + W6 + V2*W4 + V4*W2"));
    let checks = reduced_suite(&red, &mut rng(DEFAULT_SEED)).unwrap();
    assert!(checks.iter().all(|c| c.pass), "{checks:?}");
}

#[test]
fn sl2_n3_case_one() {
    let spec = LieAlgebraSpec::sl2();
    let red = build(&spec, 3, &x0(&spec, &[("u", 1)]), &case_one(3));
    let checks = reduced_suite(&red, &mut rng(DEFAULT_SEED)).unwrap();
    assert!(checks.iter().all(|c| c.pass), "{checks:?}");
}

#[test]
fn so5_reduction() {
    let spec = LieAlgebraSpec::so5();
    let red = build(&spec, 1, &x0(&spec, &[("t", 1), ("x", 1)]), &so5_chart());
    assert_eq!(*red.psi(0, 1), e("-2*Q - 2*V"));
    let (a, _) = hamiltonian_lax(&red, 1, 1, 3).unwrap();
    let lam = RatExpr::var(lambda());
    let g11 = red.nabla1_psi1(0).unwrap();
    let g21 = red.nabla1_psi1(1).unwrap();
    let g22 = red.lp.gradient_part(1, &red.dist.family.get(1, 2).clone());
    let g22: Vec<RatExpr> = g22.iter().map(|x| x.substitute(&red.chart.inverse).unwrap()).collect();
    let c1 = e("V - Q");
    let c2 = e("2*(Q^2 - S*X)/S");
    for i in 0..spec.dim {
        let want = &(&(&lam * &g21[i]) + &g22[i]) + &(&(&c1 * &g11[i]) + &(&c2 * &g21[i]));
        assert_eq!(a[i], want, "coordinate {}", spec.coords[i]);
    }
    let checks = reduced_suite(&red, &mut rng(DEFAULT_SEED)).unwrap();
    assert!(checks.iter().all(|c| c.pass), "{checks:?}");
}
