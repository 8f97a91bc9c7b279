use painlax_core::exactpoly::{parse_poly, parse_ratexpr, var, Poly, RatExpr};
use painlax_core::liealg::LieAlgebraSpec;
use painlax_core::matrix::Matrix;

fn e(s: &str) -> RatExpr {
    parse_ratexpr(s).unwrap()
}

fn texts(m: &Matrix<RatExpr>) -> Vec<Vec<String>> {
    m.to_text()
}

#[test]
fn sl2_adjoint_matrix_matches_display() {
    let g = LieAlgebraSpec::sl2();
    let a = g.adjoint_matrix(&g.generic(""));
    let want = Matrix::from_rows(vec![
        vec![e("0"), e("v"), e("-w")],
        vec![e("-v"), e("0"), e("2*u")],
        vec![e("w"), e("-2*u"), e("0")],
    ]);
    assert_eq!(texts(&a), texts(&want));
    let zero = vec![RatExpr::zero(); 3];
    assert!(g.adjoint_matrix(&zero).is_zero());
}

#[test]
fn sl2_invariant_and_gradients() {
    let g = LieAlgebraSpec::sl2();
    assert_eq!(g.invariant_polynomials(), vec![parse_poly("u^2 + v*w").unwrap()]);
    let vars = g.coord_vars("");
    let gu = g.element(&g.gradient(&e("u"), &vars));
    assert_eq!(texts(&gu), vec![vec!["1/2", "0"], vec!["0", "-1/2"]]);
    let gv = g.element(&g.gradient(&e("v"), &vars));
    assert_eq!(texts(&gv), vec![vec!["0", "0"], vec!["1", "0"]]);
    assert!(g.gradient(&e("7"), &vars).iter().all(|x| x.is_zero()));
}

#[test]
fn sl2_bracket_root_action() {
    let g = LieAlgebraSpec::sl2();
    let h = vec![e("1"), e("0"), e("0")];
    let f = vec![e("0"), e("0"), e("1")];
    assert_eq!(g.bracket(&h, &f), vec![e("0"), e("0"), e("-2")]);
    let x = g.generic("");
    assert!(g.bracket(&x, &x).iter().all(|c| c.is_zero()));
}

#[test]
fn so5_invariants_have_degrees_two_and_four() {
    let g = LieAlgebraSpec::so5();
    let inv = g.invariant_polynomials();
    assert_eq!(inv.len(), 2);
    assert_eq!(inv[0].total_degree(), 2);
    assert_eq!(inv[1].total_degree(), 4);
    let _ = var("p");
    let _ = Poly::zero();
}

fn element(dim: usize) -> impl proptest::strategy::Strategy<Value = Vec<RatExpr>> {
    use proptest::prelude::*;
    prop::collection::vec(-5i64..=5, dim).prop_map(|v| v.into_iter().map(RatExpr::int).collect())
}

proptest::proptest! {
    #![proptest_config(proptest::test_runner::Config::with_cases(32))]

    #[test]
    fn jacobi_and_form_invariance(x in element(10), y in element(10), z in element(10)) {
        for g in [LieAlgebraSpec::sl2(), LieAlgebraSpec::so5()] {
            let (x, y, z) = (&x[..g.dim], &y[..g.dim], &z[..g.dim]);
            let j = [
                g.bracket(&g.bracket(x, y), z),
                g.bracket(&g.bracket(y, z), x),
                g.bracket(&g.bracket(z, x), y),
            ];
            for a in 0..g.dim {
                proptest::prop_assert!((&(&j[0][a] + &j[1][a]) + &j[2][a]).is_zero());
            }
            proptest::prop_assert_eq!(g.form(x, y), g.form(y, x));
            proptest::prop_assert_eq!(g.form(&g.bracket(x, y), z), g.form(x, &g.bracket(y, z)));
        }
    }
}
