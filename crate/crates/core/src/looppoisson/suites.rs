//! Exact checks of the structural statements about `phi_{i,j}`, `psi_{i,j}`
//! and the tensors `P_k`.

use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;

use crate::exactpoly::{Monomial, Poly, RatExpr, Rational, Var};
use crate::liealg::{LieAlgebraSpec, LieElement};
use crate::matrix::Matrix;
use crate::report::Check;
use crate::sampling::{random_poly, small_rational};

use super::element::{casimir_family, lambda, CasimirFamily, LoopElement};
use super::tensor::{field_difference, field_is_zero, Field, LoopPoisson};
use super::LoopError;

fn lam() -> RatExpr {
    RatExpr::var(lambda())
}

fn lam_pow(e: usize) -> RatExpr {
    RatExpr::from(Poly::term(num_traits::One::one(), Monomial::var_pow(lambda(), e as u32)))
}

fn describe(d: Option<(usize, usize, RatExpr)>, spec: &LieAlgebraSpec) -> String {
    match d {
        Some((p, a, r)) => format!("{}{}: {}", spec.coords[a], p, r.to_text()),
        None => String::new(),
    }
}

/// Statements (i)-(vi) about `phi_{i,j}` on `g_n` with symbolic `x_0`.
pub fn phi_suite(spec: &LieAlgebraSpec, n: usize) -> Result<Vec<Check>, LoopError> {
    let x = LoopElement::generic(spec, n);
    let fam = casimir_family(spec, &x)?;
    let lp = LoopPoisson::new(spec, x);
    let mut out = Vec::new();
    let part_of: BTreeMap<Var, usize> = lp
        .vars
        .iter()
        .enumerate()
        .flat_map(|(j, vs)| vs.iter().map(move |v| (*v, j)))
        .collect();

    for i in 0..fam.families() {
        let top = fam.top(i);
        let mn = fam.mn(i);
        // (i)
        let mut bad = Vec::new();
        for j in 0..n {
            if fam.get(i, j).vars().iter().any(|v| part_of[v] > j) {
                bad.push(j);
            }
        }
        out.push(Check::from_bool(format!("phi.i family {}", i + 1), bad.is_empty(), || {
            format!("phi_j with later parts for j in {bad:?}")
        }));
        // (ii)
        let rev = |v: Var| match part_of.get(&v) {
            Some(&p) => lp.vars[n - p][lp.vars[p].iter().position(|w| *w == v).unwrap()],
            None => v,
        };
        let mut bad = Vec::new();
        for j in 0..=top {
            let a = fam.get(i, j).num().clone();
            let b = fam.get(i, top - j).num().rename(&rev);
            if a != b {
                bad.push(j);
            }
        }
        out.push(Check::from_bool(format!("phi.ii family {}", i + 1), bad.is_empty(), || {
            format!("reversal symmetry fails for j in {bad:?}")
        }));
        // (iii), (iv)
        let mut bad3 = Vec::new();
        let mut bad4 = Vec::new();
        for j in 0..=mn {
            let ref_d: Vec<RatExpr> = lp.vars[0].iter().map(|v| fam.get(i, j).partial(*v)).collect();
            let ref_g = lp.gradient_part(0, fam.get(i, j));
            for k in 1..=n {
                let d: Vec<RatExpr> = lp.vars[k].iter().map(|v| fam.get(i, j + k).partial(*v)).collect();
                if d != ref_d {
                    bad3.push((j, k));
                }
                if lp.gradient_part(k, fam.get(i, j + k)) != ref_g {
                    bad4.push((j, k));
                }
            }
        }
        out.push(Check::from_bool(format!("phi.iii family {}", i + 1), bad3.is_empty(), || {
            format!("(j, k) = {bad3:?}")
        }));
        out.push(Check::from_bool(format!("phi.iv family {}", i + 1), bad4.is_empty(), || {
            format!("(j, k) = {bad4:?}")
        }));
        // (v): sum_l A_l dphi_{J+k-l}/dx_k = sum_l A_l dphi_{J-l}/dx_0 = 0
        let mut bad = Vec::new();
        for big_j in 0..=top {
            for k in 0..=n {
                let mut acc = vec![RatExpr::zero(); spec.dim];
                for l in 0..=n {
                    let idx = big_j as i64 + k as i64 - l as i64;
                    if idx < 0 || idx as usize > top {
                        continue;
                    }
                    let d: Vec<RatExpr> = lp.vars[k]
                        .iter()
                        .map(|v| fam.get(i, idx as usize).partial(*v))
                        .collect();
                    for (o, e) in acc.iter_mut().zip(lp.adjoint(l).mul_vec(&d)) {
                        *o = &*o + &e;
                    }
                }
                if acc.iter().any(|e| !e.is_zero()) {
                    bad.push((big_j, k));
                }
            }
        }
        out.push(Check::from_bool(format!("phi.v family {}", i + 1), bad.is_empty(), || {
            format!("(J, k) = {bad:?}")
        }));
        // (vi)
        let mut bad = Vec::new();
        for j in 0..=n {
            if !field_is_zero(&lp.field(0, fam.get(i, top - j))?) {
                bad.push(top - j);
            }
        }
        out.push(Check::from_bool(format!("phi.vi family {}", i + 1), bad.is_empty(), || {
            format!("P_0 d phi_j nonzero for j in {bad:?}")
        }));
    }
    Ok(out)
}

/// The pencil Casimir `lambda^{m n} psi_k + ... + psi_{m n + k}`.
pub fn pencil_casimir(fam: &CasimirFamily, i: usize, k: usize) -> RatExpr {
    let mn = fam.mn(i);
    let mut acc = RatExpr::zero();
    for s in 0..=mn {
        acc = acc + fam.get(i, k + s) * &lam_pow(mn - s);
    }
    acc
}

/// `G_{i,k,j} = -(lambda^{j-1} psi_k + ... + psi_{k+j-1})`.
pub fn g_function(fam: &CasimirFamily, i: usize, k: usize, j: usize) -> RatExpr {
    let mut acc = RatExpr::zero();
    for s in 0..j {
        acc = acc + fam.get(i, k + s) * &lam_pow(j - 1 - s);
    }
    -acc
}

/// Statements (i)-(v) about `psi_{i,j}` and `P_1 .. P_{n+1}` on `g_n^0`, and
/// the commuting-fields statement with its rank witness.
pub fn psi_suite(spec: &LieAlgebraSpec, n: usize, x0: &LieElement, rng: &mut ChaCha8Rng) -> Result<Vec<Check>, LoopError> {
    let x = LoopElement::with_x0(spec, n, x0.clone());
    let fam = casimir_family(spec, &x)?;
    let lp = LoopPoisson::new(spec, x);
    let mut out = Vec::new();
    let h = fam.families();
    let pencil = |k: usize| vec![(k + 1, lam()), (k, RatExpr::int(-1))];

    // (i)
    let mut bad = Vec::new();
    for k in 0..=n {
        for i in 0..h {
            let top = fam.top(i);
            let mn = fam.mn(i);
            for j in (1..=k).chain(mn + k + 1..=top) {
                if !field_is_zero(&lp.field(k + 1, fam.get(i, j))?) {
                    bad.push((k + 1, i + 1, j));
                }
            }
        }
    }
    out.push(Check::from_bool("psi.i casimirs of P_k+1", bad.is_empty(), || {
        format!("(k+1, i, j) = {bad:?}")
    }));
    // (ii)
    let mut bad = Vec::new();
    for k in 1..=n {
        for i in 0..h {
            let top = fam.top(i);
            let mn = fam.mn(i);
            for j in (1..k).chain(mn + k + 1..=top) {
                if !field_is_zero(&lp.field_combo(&pencil(k), fam.get(i, j))?) {
                    bad.push(format!("k={k} i={} j={j}", i + 1));
                }
            }
            if !field_is_zero(&lp.field_combo(&pencil(k), &pencil_casimir(&fam, i, k))?) {
                bad.push(format!("k={k} i={} pencil casimir", i + 1));
            }
        }
    }
    out.push(Check::from_bool("psi.ii casimirs of lambda P_k+1 - P_k", bad.is_empty(), || bad.join("; ")));
    // (iii)
    let mut bad = Vec::new();
    let coords: Vec<Var> = lp.vars[1..].iter().flatten().copied().collect();
    for k in 1..=n {
        let mut fs: Vec<RatExpr> = (0..h).flat_map(|i| (1..=fam.top(i)).map(move |j| (i, j))).map(|(i, j)| fam.get(i, j).clone()).collect();
        fs.push(RatExpr::from(random_poly(rng, &coords, 3, 3)));
        for f in &fs {
            if let Err(e) = lp.lax_form_of(k, f) {
                bad.push(format!("k={k} F={}: {e}", f.to_text()));
            }
        }
    }
    out.push(Check::from_bool("psi.iii lax form", bad.is_empty(), || bad.join("; ")));
    // (iv)
    let mut bad = Vec::new();
    for i in 0..h {
        let mn = fam.mn(i);
        for j in 1..=mn {
            let mut reference: Option<Field> = None;
            for k in 1..=n {
                let a = lp.field(k + 1, fam.get(i, k + j))?;
                let b = lp.field(k, fam.get(i, k + j - 1))?;
                let c = lp.field_combo(&pencil(k), &g_function(&fam, i, k, j))?;
                if let Some(d) = field_difference(&a, &b) {
                    bad.push(format!("i={} j={j} k={k} first: {}", i + 1, describe(Some(d), spec)));
                }
                if let Some(d) = field_difference(&a, &c) {
                    bad.push(format!("i={} j={j} k={k} pencil: {}", i + 1, describe(Some(d), spec)));
                }
                match &reference {
                    None => reference = Some(a),
                    Some(r) => {
                        if let Some(d) = field_difference(r, &a) {
                            bad.push(format!("i={} j={j} k={k} k-dependence: {}", i + 1, describe(Some(d), spec)));
                        }
                    }
                }
            }
        }
    }
    out.push(Check::from_bool("psi.iv recursion", bad.is_empty(), || bad.join("; ")));
    // (v)
    let mut fields = Vec::new();
    for i in 0..h {
        for j in 1..=fam.mn(i) {
            fields.push(((i, j), lp.field(n + 1, fam.get(i, n + j))?));
        }
    }
    let mut bad = Vec::new();
    for a in 0..fields.len() {
        for b in a + 1..fields.len() {
            let c = lp.field_commutator(&fields[a].1, &fields[b].1);
            if !field_is_zero(&c) {
                bad.push(format!("{:?} vs {:?}", fields[a].0, fields[b].0));
            }
        }
    }
    let mut nonzero = Vec::new();
    for i in 0..h {
        for i2 in 0..h {
            for j in 1..=fam.top(i) {
                for j2 in 1..=fam.top(i2) {
                    if !lp.bracket(n + 1, fam.get(i2, j2), fam.get(i, j))?.is_zero() {
                        nonzero.push(format!("{{psi_{},{j2}, psi_{},{j}}}", i2 + 1, i + 1));
                    }
                }
            }
        }
    }
    bad.extend(nonzero);
    out.push(Check::from_bool("psi.v commuting fields", bad.is_empty(), || bad.join("; ")));
    // rank witness
    let count: usize = (0..h).map(|i| fam.mn(i)).sum();
    let mut rank_detail = Vec::new();
    let mut ok = false;
    for _attempt in 0..4 {
        let pt: BTreeMap<Var, RatExpr> = coords.iter().map(|v| (*v, RatExpr::constant(small_rational(rng)))).collect();
        let rows: Vec<Vec<Rational>> = fields
            .iter()
            .map(|(_, f)| {
                f.iter()
                    .flatten()
                    .map(|e| e.substitute(&pt).ok().and_then(|x| x.as_constant()).unwrap_or_default())
                    .collect()
            })
            .collect();
        let r = Matrix::from_rows(rows).rank();
        rank_detail.push(r);
        if r == count && fields.iter().all(|(_, f)| !field_is_zero(f)) {
            ok = true;
            break;
        }
    }
    out.push(
        Check::from_bool("liouville rank", ok, || format!("ranks {rank_detail:?}, expected {count}"))
            .with_detail(format!("{count} commuting fields, ranks at sampled points {rank_detail:?}")),
    );
    Ok(out)
}

/// Antisymmetry and Jacobi for each `P_k` and for random pencils, on `g_n`
/// with symbolic `x_0`.
pub fn jacobi_suite(spec: &LieAlgebraSpec, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Check>, LoopError> {
    let lp = LoopPoisson::new(spec, LoopElement::generic(spec, n));
    let vars: Vec<Var> = lp.vars.iter().flatten().copied().collect();
    let mut out = Vec::new();
    let triple = |rng: &mut ChaCha8Rng| -> [RatExpr; 3] {
        [0, 1, 2].map(|_| RatExpr::from(random_poly(rng, &vars, 3, 2)))
    };
    for k in 0..=n + 1 {
        let [f, g, h] = triple(rng);
        let terms = [(k, RatExpr::one())];
        let anti = lp.bracket_combo(&terms, &f, &g)? + lp.bracket_combo(&terms, &g, &f)?;
        let jac = lp.jacobiator(&terms, &f, &g, &h)?;
        out.push(Check::from_bool(format!("jacobi P_{k}"), anti.is_zero() && jac.is_zero(), || {
            format!("antisymmetry {} jacobi {}", anti.to_text(), jac.to_text())
        }));
    }
    for j in 0..=n + 1 {
        for k in j + 1..=n + 1 {
            let mut bad = Vec::new();
            for _ in 0..3 {
                let c = small_rational(rng);
                let [f, g, h] = triple(rng);
                let terms = [(j, RatExpr::one()), (k, RatExpr::constant(c.clone()))];
                let jac = lp.jacobiator(&terms, &f, &g, &h)?;
                if !jac.is_zero() {
                    bad.push(format!("c={c}: {}", jac.to_text()));
                }
            }
            out.push(Check::from_bool(format!("jacobi P_{j} + c P_{k}"), bad.is_empty(), || bad.join("; ")));
        }
    }
    Ok(out)
}
