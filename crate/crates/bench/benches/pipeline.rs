use criterion::{criterion_group, criterion_main, Criterion};
use painlax_core::cases::Registry;
use painlax_core::exactpoly::parse_poly;
use painlax_core::isomono::derive;
use painlax_core::liealg::LieAlgebraSpec;
use painlax_core::looppoisson::suites::jacobi_suite;
use painlax_core::numerics::{curvature_residual, CurvatureVariant, NumericSystem};
use painlax_core::sampling::{rng, DEFAULT_SEED};

fn poly(c: &mut Criterion) {
    let f = parse_poly("(a + b + c + 1)^4").unwrap();
    let g = parse_poly("(a - 2*b + c^2)^3").unwrap();
    c.bench_function("poly mul", |b| b.iter(|| &f * &g));
}

fn derive_cases(c: &mut Criterion) {
    let reg = Registry::builtin();
    for id in ["sl2n2-I-P2", "sl2n3-II-P1h", "so5n1-cosgrove"] {
        let case = reg.get(id).unwrap();
        c.bench_function(&format!("derive {id}"), |b| b.iter(|| derive(case, &reg).unwrap()));
    }
}

fn jacobi(c: &mut Criterion) {
    let g = LieAlgebraSpec::sl2();
    c.bench_function("jacobi sl2 n=2", |b| b.iter(|| jacobi_suite(&g, 2, &mut rng(DEFAULT_SEED)).unwrap()));
}

fn numerics(c: &mut Criterion) {
    let reg = Registry::builtin();
    let case = reg.get("sl2n3-I-P22").unwrap();
    let d = derive(case, &reg).unwrap();
    let sys = NumericSystem::from_derivation(&d, case).unwrap();
    let x0 = case.numeric.as_ref().unwrap().x0.clone();
    let lams = [-2.0, -1.0, 0.0, 1.0, 2.0];
    c.bench_function("curvature sl2n3-I-P22", |b| {
        b.iter(|| curvature_residual(&sys, None, CurvatureVariant::Promoted, &x0, 0.0, 1.0, 1e-10, &lams, 1e-8).unwrap())
    });
}

criterion_group!(benches, poly, derive_cases, jacobi, numerics);
criterion_main!(benches);
