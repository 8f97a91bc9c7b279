//! One line per acceptance criterion. Criteria recorded as unattainable are
//! printed as FAIL with their reason; the target itself fails only when an
//! outcome differs from the recorded one.

use std::collections::BTreeMap;
use std::process::Command;

use painlax_core::cases::{Registry, BUILTIN_IDS};
use painlax_core::exactpoly::{Poly, RatExpr};
use painlax_core::isomono::{derive, verify_zero_curvature, weight_table, Derivation};
use painlax_core::liealg::LieAlgebraSpec;
use painlax_core::looppoisson::expected_dimension;
use painlax_core::numerics::{
    curvature_residual, flow_commutation, rk4_convergence, spectral_drift, CurvatureVariant, NumericSystem, SpectralVariant,
};
use painlax_core::sampling::{nonzero_int, rng, DEFAULT_SEED};
use painlax_core::suites;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, ok: &str) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail: ok.to_string() }
    } else {
        Outcome { pass: false, detail: failures.join("; ") }
    }
}

fn derivations(reg: &Registry) -> BTreeMap<&'static str, Derivation> {
    BUILTIN_IDS.iter().map(|id| (*id, derive(reg.get(id).unwrap(), reg).unwrap())).collect()
}

fn golden(ds: &BTreeMap<&str, Derivation>) -> Outcome {
    let mut bad = Vec::new();
    let mut n = 0;
    for (id, d) in ds {
        for c in d.checks.iter().filter(|c| c.name.starts_with("golden ")) {
            n += 1;
            if !c.pass {
                bad.push(format!("{id} {}: {}", c.name, c.detail.as_deref().unwrap_or("")));
            }
        }
    }
    outcome(bad, &format!("{n} golden targets reproduced exactly"))
}

fn propositions(reg: &Registry) -> Outcome {
    let mut bad = Vec::new();
    let mut n = 0;
    for (alg, deg) in [("sl2", 2), ("sl2", 3), ("so5", 1)] {
        for suite in ["propositions", "reduction"] {
            let r = suites::run(reg, suite, alg, deg, DEFAULT_SEED).unwrap();
            n += r.checks.len();
            bad.extend(r.failures().map(|c| format!("{suite} {alg} n={deg}: {}", c.name)));
        }
    }
    outcome(bad, &format!("{n} exact checks on sl2 n=2,3 and so5 n=1"))
}

fn dimensions() -> Outcome {
    let got = [
        expected_dimension(&LieAlgebraSpec::sl2(), 2),
        expected_dimension(&LieAlgebraSpec::sl2(), 3),
        expected_dimension(&LieAlgebraSpec::so5(), 1),
    ];
    let bad = if got == [2, 4, 4] { vec![] } else { vec![format!("got {got:?}")] };
    outcome(bad, "2, 4, 4")
}

fn promotion(ds: &BTreeMap<&str, Derivation>) -> Outcome {
    let want: &[(&str, &[u32])] = &[
        ("sl2n2-I-P2", &[0]),
        ("sl2n2-II-P1", &[0]),
        ("sl2n3-I-P22", &[0, 0]),
        ("sl2n3-II-P1h", &[0, 0]),
        ("so5n1-cosgrove", &[0]),
        ("sl2n2-I-P4", &[1]),
        ("sl2n3-I-P4h", &[1, 1]),
        ("sl2n3-II-P21", &[1, 1]),
        ("sl2n3-I-H1120", &[2]),
        ("sl2n3-II-Hm1412", &[2]),
    ];
    let mut bad = Vec::new();
    for (id, ls) in want {
        let got: Vec<Option<u32>> = ds[id].conditions.iter().map(|c| c.l).collect();
        if got != ls.iter().map(|l| Some(*l)).collect::<Vec<_>>() {
            bad.push(format!("{id}: l = {got:?}"));
        }
    }
    for id in ["sl2n3-I-H1120", "sl2n3-II-Hm1412"] {
        let probes = &ds[id].probes;
        if probes.is_empty() || probes.iter().any(|p| p.scan.is_empty() || p.scan.iter().any(|c| c.l.is_some())) {
            bad.push(format!("{id}: second flow admits a parameter"));
        }
    }
    outcome(bad, "l = 0, 1, 2 as expected; second flows of the one-time 4-dim cases admit no parameter")
}

/// Adds a random nonzero integer to one coefficient of a term that moves the flow.
fn mutate(h: &Poly, phase: &[painlax_core::exactpoly::Var], r: &mut rand_chacha::ChaCha8Rng) -> Poly {
    let movable: Vec<_> = h.terms().filter(|(m, _)| phase.iter().any(|v| m.exp(*v) > 0)).collect();
    let (m, c) = movable[r.gen_range(0..movable.len())];
    let bumped = c.clone() + nonzero_int(r, 5);
    Poly::from_terms(h.terms().map(|(mm, cc)| (mm.clone(), if mm == m { bumped.clone() } else { cc.clone() })))
}

fn zero_curvature(reg: &Registry, ds: &BTreeMap<&str, Derivation>) -> Outcome {
    let mut bad = Vec::new();
    let mut r = rng(DEFAULT_SEED);
    let mut mutations = 0;
    for (id, d) in ds {
        let case = reg.get(id).unwrap();
        let hs: Vec<RatExpr> = d.hamiltonian_polys().into_iter().map(RatExpr::from).collect();
        if verify_zero_curvature(&d.spec, &d.pair, &d.pairs, &hs, case.orientation).is_err() {
            bad.push(format!("{id}: unmutated pair fails"));
        }
        let phase: Vec<_> = d.pairs.iter().flat_map(|(q, p)| [*q, *p]).collect();
        for k in 0..6 {
            let i = k % hs.len();
            let mut m = d.hamiltonian_polys();
            m[i] = mutate(&m[i], &phase, &mut r);
            let mh: Vec<RatExpr> = m.into_iter().map(RatExpr::from).collect();
            mutations += 1;
            if verify_zero_curvature(&d.spec, &d.pair, &d.pairs, &mh, case.orientation).is_ok() {
                bad.push(format!("{id}: mutation {k} of H{} still passes", i + 1));
            }
        }
    }
    outcome(bad, &format!("10 cases pass; all {mutations} single-coefficient mutations rejected"))
}

fn cosgrove(ds: &BTreeMap<&str, Derivation>) -> Outcome {
    let d = &ds["so5n1-cosgrove"];
    let mut bad = Vec::new();
    let mut scaled = Vec::new();
    for c in d.checks.iter().filter(|c| c.name.starts_with("ode ")) {
        if c.name.ends_with("up to scaling") {
            scaled.push(format!("{} {}", c.name, if c.pass { "holds" } else { "fails" }));
        } else if !c.pass {
            bad.push(format!("{}: {}", c.name, c.detail.as_deref().unwrap_or("")));
        }
    }
    let mut o = outcome(bad, "both scalar ODEs match exactly");
    if !o.pass {
        o.detail = format!("{} (recorded: rescaling needs tau^7 = -1/192; {})", o.detail, scaled.join(", "));
    }
    o
}

fn weights(reg: &Registry) -> Outcome {
    let mut bad = Vec::new();
    let mut negative = false;
    for row in &reg.tables.rows {
        match row.parsed().and_then(|hs| weight_table(row, &hs)) {
            Ok(_) => negative |= row.weights.values().any(|w| *w < 0),
            Err(e) => bad.push(format!("{}: {e}", row.name)),
        }
    }
    if !negative {
        bad.push("no row with a negative weight".into());
    }
    outcome(bad, &format!("{} rows reproduced, negative weight included", reg.tables.rows.len()))
}

fn numerics(reg: &Registry, ds: &BTreeMap<&str, Derivation>) -> Outcome {
    let lams = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let mut bad = Vec::new();
    let (mut spec_max, mut curv_max, mut comm_max): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (id, d) in ds {
        let case = reg.get(id).unwrap();
        let num = case.numeric.as_ref().unwrap();
        let sys = NumericSystem::from_derivation(d, case).unwrap();
        for f in 0..sys.flows.len() {
            let s = spectral_drift(&sys, f, SpectralVariant::Autonomous, &num.x0, 0.0, 1.0, 1e-10, &lams, 1e-8).unwrap();
            spec_max = spec_max.max(s.max_residual);
            if !s.pass {
                bad.push(format!("{id} spectral flow {}: {:e}", f + 1, s.max_residual));
            }
        }
        let c = curvature_residual(&sys, None, CurvatureVariant::Promoted, &num.x0, 0.0, 1.0, num.tol, &lams, num.threshold)
            .unwrap();
        curv_max = curv_max.max(c.max_residual);
        if !c.pass {
            bad.push(format!("{id} curvature: {:e}", c.max_residual));
        }
        if sys.flows.len() == 2 {
            let r = flow_commutation(&sys, &sys.timed_field(0), &sys.timed_field(1), &num.x0, 0.1, 1e-10, 1e-6, false).unwrap();
            comm_max = comm_max.max(r.max_residual);
            if !r.pass {
                bad.push(format!("{id} commute: {:e}", r.max_residual));
            }
        }
    }
    let factor = rk4_convergence(50, 10.0).unwrap();
    if !(12.0..=20.0).contains(&factor) {
        bad.push(format!("rk4 factor {factor}"));
    }
    outcome(
        bad,
        &format!("spectral {spec_max:.1e}, curvature {curv_max:.1e}, commute {comm_max:.1e}, rk4 factor {factor:.2}"),
    )
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_painlax"))
            .args(["verify", "--suite", "cases", "--seed", "7"])
            .current_dir(env!("CARGO_MANIFEST_DIR"))
            .output()
            .expect("run painlax")
    };
    let (a, b) = (run(), run());
    let mut bad = Vec::new();
    if a.stdout.is_empty() {
        bad.push(format!("empty report: {}", String::from_utf8_lossy(&a.stderr)));
    }
    if a.stdout != b.stdout {
        bad.push("reports differ".into());
    }
    if a.status.code() != b.status.code() {
        bad.push("exit codes differ".into());
    }
    outcome(bad, &format!("{} identical bytes", a.stdout.len()))
}

fn main() {
    let reg = Registry::builtin();
    let ds = derivations(&reg);
    let results: Vec<(u32, &str, Outcome, bool)> = vec![
        (1, "golden Hamiltonians", golden(&ds), false),
        (2, "proposition suites", propositions(&reg), true),
        (3, "dimension formula", dimensions(), true),
        (4, "promotion condition", promotion(&ds), true),
        (5, "zero curvature and mutations", zero_curvature(&reg, &ds), true),
        (6, "Cosgrove scalar ODE", cosgrove(&ds), false),
        (7, "weight tables", weights(&reg), true),
        (8, "numeric properties", numerics(&reg, &ds), true),
        (9, "determinism", determinism(), true),
    ];
    let mut unexpected = 0;
    for (n, name, o, expected) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if o.pass == *expected { "" } else { " [UNEXPECTED]" };
        println!("criterion {n} {name}: {tag}{note} - {}", o.detail);
        if o.pass != *expected {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria differ from the recorded outcome");
        std::process::exit(1);
    }
}
