//! Exact checks of the reduced statements about `psi~` and `P~_k`.

use rand_chacha::ChaCha8Rng;

use crate::exactpoly::{Monomial, Poly, RatExpr};
use crate::looppoisson::lambda;
use crate::looppoisson::suites::g_function;
use crate::report::Check;
use crate::sampling::random_poly;

use super::{beta_corrections, ReducedSystem, ReductionError};

fn lam_pow(e: usize) -> RatExpr {
    RatExpr::from(Poly::term(num_traits::One::one(), Monomial::var_pow(lambda(), e as u32)))
}

fn pencil(k: usize) -> Vec<(usize, RatExpr)> {
    vec![(k + 1, lam_pow(1)), (k, RatExpr::int(-1))]
}

fn is_zero(v: &[RatExpr]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// `lambda^{m n - 1} psi~_{k+1} + ... + psi~_{m n + k}`.
pub fn reduced_pencil_casimir(red: &ReducedSystem, i: usize, k: usize) -> RatExpr {
    let mn = red.psi.mn(i);
    let mut acc = RatExpr::zero();
    for s in 0..mn {
        acc = acc + red.psi(i, k + 1 + s) * &lam_pow(mn - 1 - s);
    }
    acc
}

/// Statements (i)-(v) on the quotient, plus Jacobi for every `P~_k` on the
/// chart coordinates.
pub fn reduced_suite(red: &ReducedSystem, rng: &mut ChaCha8Rng) -> Result<Vec<Check>, ReductionError> {
    let n = red.n;
    let h = red.psi.families();
    let mut out = Vec::new();

    // (i)
    let mut bad = Vec::new();
    for k in 0..=n {
        for i in 0..h {
            let (mn, top) = (red.psi.mn(i), red.psi.top(i));
            for j in (1..=k + 1).chain(mn + k + 1..=top) {
                if !is_zero(&red.field(&[(k + 1, RatExpr::one())], red.psi(i, j))) {
                    bad.push(format!("k+1={} i={} j={j}", k + 1, i + 1));
                }
            }
        }
    }
    out.push(Check::from_bool("reduced.i casimirs of P~_k+1", bad.is_empty(), || bad.join("; ")));

    // (ii)
    let mut bad = Vec::new();
    for k in 1..=n {
        for i in 0..h {
            let (mn, top) = (red.psi.mn(i), red.psi.top(i));
            for j in (1..=k).chain(mn + k + 1..=top) {
                if !is_zero(&red.field(&pencil(k), red.psi(i, j))) {
                    bad.push(format!("k={k} i={} j={j}", i + 1));
                }
            }
            if !is_zero(&red.field(&pencil(k), &reduced_pencil_casimir(red, i, k))) {
                bad.push(format!("k={k} i={} pencil casimir", i + 1));
            }
        }
    }
    out.push(Check::from_bool("reduced.ii casimirs of lambda P~_k+1 - P~_k", bad.is_empty(), || bad.join("; ")));

    // (iii)
    let mut bad = Vec::new();
    for k in 1..=n {
        let mut fs: Vec<RatExpr> = Vec::new();
        for i in 0..h {
            for j in 1..=red.psi.mn(i) {
                fs.push(g_function(&red.psi, i, k, j));
            }
        }
        fs.push(RatExpr::from(random_poly(rng, red.coords(), 3, 2)));
        for f in &fs {
            if let Err(e) = beta_corrections(red, k, f) {
                bad.push(format!("k={k} F={f}: {e}"));
            }
        }
    }
    out.push(Check::from_bool("reduced.iii lax form with beta", bad.is_empty(), || bad.join("; ")));

    // (iv)
    let mut bad = Vec::new();
    for k in 1..=n {
        for i in 0..h {
            for j in 2..=red.psi.mn(i) {
                let a = red.field(&[(k + 1, RatExpr::one())], red.psi(i, k + j));
                let b = red.field(&[(k, RatExpr::one())], red.psi(i, k + j - 1));
                let c = red.field(&pencil(k), &g_function(&red.psi, i, k, j));
                if a != b || a != c {
                    bad.push(format!("k={k} i={} j={j}", i + 1));
                }
            }
        }
    }
    out.push(Check::from_bool("reduced.iv recursion", bad.is_empty(), || bad.join("; ")));

    // (v)
    let mut fields = Vec::new();
    for i in 0..h {
        for j in 2..=red.psi.mn(i) {
            fields.push(((i, j), red.field(&[(n + 1, RatExpr::one())], red.psi(i, n + j))));
        }
    }
    let mut bad = Vec::new();
    for a in 0..fields.len() {
        for b in a + 1..fields.len() {
            if !is_zero(&red.field_commutator(&fields[a].1, &fields[b].1)) {
                bad.push(format!("{:?} {:?}", fields[a].0, fields[b].0));
            }
        }
    }
    out.push(Check::from_bool("reduced.v commuting fields", bad.is_empty(), || bad.join("; ")));

    // Jacobi on coordinate triples
    let m = red.coords().len();
    let xs: Vec<RatExpr> = red.coords().iter().map(|c| RatExpr::var(*c)).collect();
    let mut bad = Vec::new();
    for k in 1..=n + 1 {
        let t = red.tensor(k);
        let mut anti = true;
        for a in 0..m {
            for b in 0..m {
                if !(&t[(a, b)] + &t[(b, a)]).is_zero() {
                    anti = false;
                }
            }
        }
        if !anti {
            bad.push(format!("P~_{k} not antisymmetric"));
            continue;
        }
        let terms = [(k, RatExpr::one())];
        'outer: for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    let j = red.bracket(&terms, &xs[a], &t[(b, c)])
                        + red.bracket(&terms, &xs[b], &t[(c, a)])
                        + red.bracket(&terms, &xs[c], &t[(a, b)]);
                    if !j.is_zero() {
                        bad.push(format!("P~_{k} on ({}, {}, {})", xs[a], xs[b], xs[c]));
                        break 'outer;
                    }
                }
            }
        }
    }
    out.push(Check::from_bool("reduced jacobi", bad.is_empty(), || bad.join("; ")));
    Ok(out)
}
