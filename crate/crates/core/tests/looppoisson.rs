use painlax_core::exactpoly::{parse_ratexpr, RatExpr};
use painlax_core::liealg::LieAlgebraSpec;
use painlax_core::looppoisson::suites::{jacobi_suite, phi_suite, psi_suite};
use painlax_core::looppoisson::{casimir_family, expected_dimension, LoopElement};
use painlax_core::sampling::rng;

fn e(s: &str) -> RatExpr {
    parse_ratexpr(s).unwrap()
}

fn assert_all(checks: Vec<painlax_core::report::Check>) {
    for c in &checks {
        println!("{} {} {:?}", if c.pass { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
    assert!(checks.iter().all(|c| c.pass));
}

#[test]
fn sl2_n2_case_one_psi() {
    let g = LieAlgebraSpec::sl2();
    let x = LoopElement::with_x0(&g, 2, vec![e("1"), e("0"), e("0")]);
    let f = casimir_family(&g, &x).unwrap();
    assert_eq!(*f.get(0, 1), e("2*u1"));
    assert_eq!(*f.get(0, 2), e("2*u2 + u1^2 + v1*w1"));
    assert_eq!(*f.get(0, 3), e("2*u1*u2 + v2*w1 + v1*w2"));
    assert_eq!(*f.get(0, 4), e("u2^2 + v2*w2"));
}

#[test]
fn dimensions() {
    assert_eq!(expected_dimension(&LieAlgebraSpec::sl2(), 2), 2);
    assert_eq!(expected_dimension(&LieAlgebraSpec::sl2(), 3), 4);
    assert_eq!(expected_dimension(&LieAlgebraSpec::so5(), 1), 4);
}

#[test]
fn sl2_suites() {
    let g = LieAlgebraSpec::sl2();
    let mut r = rng(1);
    for n in [2, 3] {
        assert_all(phi_suite(&g, n).unwrap());
        assert_all(psi_suite(&g, n, &vec![e("1"), e("0"), e("0")], &mut r).unwrap());
        assert_all(psi_suite(&g, n, &vec![e("0"), e("0"), e("1")], &mut r).unwrap());
        assert_all(jacobi_suite(&g, n, &mut r).unwrap());
    }
}

#[test]
fn so5_suites() {
    let g = LieAlgebraSpec::so5();
    let mut r = rng(1);
    let mut x0 = vec![e("0"); 10];
    x0[4] = e("1");
    x0[8] = e("1");
    assert_all(phi_suite(&g, 1).unwrap());
    assert_all(psi_suite(&g, 1, &x0, &mut r).unwrap());
    assert_all(jacobi_suite(&g, 1, &mut r).unwrap());
}

proptest::proptest! {
    #![proptest_config(proptest::test_runner::Config::with_cases(6))]

    #[test]
    fn jacobi_for_any_seed(seed in proptest::prelude::any::<u64>()) {
        let g = LieAlgebraSpec::sl2();
        let checks = jacobi_suite(&g, 2, &mut rng(seed)).unwrap();
        proptest::prop_assert!(checks.iter().all(|c| c.pass));
    }
}
