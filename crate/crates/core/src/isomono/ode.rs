use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactpoly::{parse_ratexpr, Monomial, Poly, RatExpr, Rational, Var};

use super::IsomonoError;

/// `y^(order) = rhs(y, y1, .., y_{order-1}, t, params)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarOde {
    pub order: usize,
    pub rhs: Poly,
}

/// Name of the `k`-th derivative of `y`: `y`, `y1`, `y2`, ...
pub fn derivative_var(k: usize) -> Var {
    if k == 0 {
        Var::new("y")
    } else {
        Var::new(&format!("y{k}"))
    }
}

fn total_derivative(f: &Poly, h: &Poly, pairs: &[(Var, Var)], time: Var) -> Poly {
    let mut acc = f.partial(time);
    for (q, p) in pairs {
        acc = acc + &f.partial(*q) * &h.partial(*p) - &f.partial(*p) * &h.partial(*q);
    }
    acc
}

/// Eliminates everything but `y` from the Hamiltonian flow of `h`. Each
/// successive derivative must be linear, with a constant coefficient, in
/// one not yet eliminated phase variable.
pub fn reduce_to_scalar_ode(h: &Poly, pairs: &[(Var, Var)], time: Var, y: Var) -> Result<ScalarOde, IsomonoError> {
    let momenta: Vec<Var> = pairs.iter().map(|(_, p)| *p).collect();
    for (q, p) in pairs {
        let v = h.partial(*p);
        for (m, _) in v.terms() {
            let deg: u32 = momenta.iter().map(|x| m.exp(*x)).sum();
            if deg > 1 {
                return Err(IsomonoError::MomentaNotAffine(format!("d H/d {p} = {v} (velocity of {q})")));
            }
        }
    }
    if !pairs.iter().any(|(q, _)| *q == y) {
        return Err(IsomonoError::Case(format!("{y} is not a position variable")));
    }
    let mut unknowns: Vec<Var> = pairs.iter().flat_map(|(q, p)| [*q, *p]).filter(|v| *v != y).collect();
    let mut sol: BTreeMap<Var, Poly> = BTreeMap::new();
    sol.insert(y, Poly::var(derivative_var(0)));
    let order = 2 * pairs.len();
    let mut e = Poly::var(y);
    for k in 1..order {
        e = total_derivative(&e, h, pairs, time);
        let f = e.compose(&sol);
        let pick = unknowns.iter().position(|u| {
            f.degree_in(*u) == 1 && f.partial(*u).as_constant().is_some_and(|c| !c.is_zero())
        });
        let Some(i) = pick else {
            return Err(IsomonoError::EliminationSingular(format!("derivative {k}: {f}")));
        };
        let u = unknowns.remove(i);
        let c = f.partial(u).as_constant().unwrap();
        let rest = &f - &f.filter_terms(|m| m.exp(u) > 0);
        let val = (Poly::var(derivative_var(k)) - rest).scale(&(Rational::one() / c));
        let one: BTreeMap<Var, Poly> = [(u, val.clone())].into_iter().collect();
        for v in sol.values_mut() {
            *v = v.compose(&one);
        }
        sol.insert(u, val);
    }
    let rhs = total_derivative(&e, h, pairs, time).compose(&sol);
    if let Some(v) = unknowns.iter().find(|v| rhs.contains_var(**v)) {
        return Err(IsomonoError::EliminationSingular(format!("{v} survives in {rhs}")));
    }
    Ok(ScalarOde { order, rhs })
}

/// Rescaling `y = ky Y(s)`, `t = kt s`, parameters mapped, with an algebraic
/// number `var^power = value` reduced exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeScaling {
    pub var: String,
    pub power: u32,
    pub value: String,
    pub y: String,
    pub t: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
}

/// Rewrites `var^e` with `e` in `0..power` using `var^power = value`; `var`
/// may also sit in the denominator.
pub fn reduce_power(e: &RatExpr, var: Var, power: u32, value: &Rational) -> RatExpr {
    let den_exp = e.den().exp(var) as i64;
    let den_rest = Monomial::from_pairs(e.den().iter().filter(|(v, _)| *v != var).copied());
    let mut num = Poly::zero();
    for (m, c) in e.num().terms() {
        let total = m.exp(var) as i64 - den_exp;
        let r = total.rem_euclid(power as i64);
        let q = (total - r) / power as i64;
        let factor = if q >= 0 {
            num_traits::pow(value.clone(), q as usize)
        } else {
            num_traits::pow(Rational::one() / value.clone(), (-q) as usize)
        };
        let rest = Monomial::from_pairs(m.iter().filter(|(v, _)| *v != var).copied());
        num.add_term(rest.mul(&Monomial::var_pow(var, r as u32)), c * factor);
    }
    RatExpr::new(num, den_rest)
}

/// Checks that `ode` becomes `target` (an expression in `y..`, `t` and the
/// parameters) under the scaling.
pub fn scaling_equivalence(ode: &ScalarOde, target: &Poly, s: &OdeScaling) -> Result<bool, IsomonoError> {
    let tau = Var::new(&s.var);
    let value = parse_ratexpr(&s.value)?
        .as_constant()
        .ok_or_else(|| IsomonoError::Case(format!("{} is not a constant", s.value)))?;
    let ky = parse_ratexpr(&s.y)?;
    let kt = parse_ratexpr(&s.t)?;
    let mut b: BTreeMap<Var, RatExpr> = BTreeMap::new();
    // y^(k) = ky kt^{-k} Y^(k)
    for k in 0..ode.order {
        let f = &ky * &kt.pow(k as u32).inv()?;
        b.insert(derivative_var(k), &f * &RatExpr::var(derivative_var(k)));
    }
    let t = Var::new("t");
    b.insert(t, &kt * &RatExpr::var(t));
    for (k, v) in &s.parameters {
        b.insert(Var::new(k), parse_ratexpr(v)?);
    }
    let lhs_factor = &ky * &kt.pow(ode.order as u32).inv()?;
    let rhs = RatExpr::from(ode.rhs.clone()).substitute(&b)?.div(&lhs_factor)?;
    let d = reduce_power(&rhs, tau, s.power, &value) - RatExpr::from(target.clone());
    Ok(reduce_power(&d, tau, s.power, &value).is_zero())
}
