use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exactpoly::{Monomial, Poly, RatExpr, Rational, Var};
use crate::liealg::{LieAlgebraSpec, LieElement};
use crate::looppoisson::lambda;

use super::IsomonoError;

/// Which commutator the isomonodromic equation uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// `dL/dt = [A, L] + dA/dlambda`
    AL,
    /// `dL/dt = [L, A] + dA/dlambda`
    LA,
}

#[derive(Clone, Debug)]
pub struct TimeFlow {
    pub time: Var,
    pub parameter: Var,
    pub a: LieElement,
}

/// `L = lambda^{-l} X~` with the promoted parameters replaced by times.
#[derive(Clone, Debug)]
pub struct LaxPair {
    pub l_coords: LieElement,
    pub flows: Vec<TimeFlow>,
    pub l: u32,
}

impl LaxPair {
    pub fn substitute(&self, b: &BTreeMap<Var, RatExpr>) -> Result<LaxPair, IsomonoError> {
        let sub = |x: &[RatExpr]| -> Result<LieElement, IsomonoError> {
            Ok(x.iter().map(|e| e.substitute(b)).collect::<Result<_, _>>()?)
        };
        Ok(LaxPair {
            l_coords: sub(&self.l_coords)?,
            flows: self
                .flows
                .iter()
                .map(|f| {
                    Ok(TimeFlow {
                        time: f.time,
                        parameter: f.parameter,
                        a: sub(&f.a)?,
                    })
                })
                .collect::<Result<_, IsomonoError>>()?,
            l: self.l,
        })
    }
}

fn lam_pow(e: u32) -> RatExpr {
    RatExpr::from(Poly::term(Rational::from_integer(1.into()), Monomial::var_pow(lambda(), e)))
}

fn low_degree(x: &[RatExpr]) -> Option<u32> {
    let lam = lambda();
    x.iter()
        .flat_map(|e| e.num().terms().map(move |(m, _)| m.exp(lam)))
        .min()
}

/// The unique `l >= 0` with `dX~/dalpha = lambda^l dA/dlambda`.
pub fn check_condition(x: &[RatExpr], a: &[RatExpr], alpha: Var, params: &[Var]) -> Result<u32, IsomonoError> {
    if !params.contains(&alpha) {
        return Err(IsomonoError::NoSuchParameter(alpha.to_string()));
    }
    let dx: Vec<RatExpr> = x.iter().map(|e| e.partial(alpha)).collect();
    let da: Vec<RatExpr> = a.iter().map(|e| e.partial(lambda())).collect();
    let (Some(lx), Some(la)) = (low_degree(&dx), low_degree(&da)) else {
        return Err(IsomonoError::ConditionFailed(format!(
            "dX/d{alpha} or dA/dlambda vanishes"
        )));
    };
    if lx < la {
        return Err(IsomonoError::ConditionFailed(format!(
            "dX/d{alpha} starts at lambda^{lx}, dA/dlambda at lambda^{la}"
        )));
    }
    let l = lx - la;
    let p = lam_pow(l);
    for (i, (u, v)) in dx.iter().zip(&da).enumerate() {
        let r = u - &(v * &p);
        if !r.is_zero() {
            return Err(IsomonoError::ConditionFailed(format!(
                "l = {l}, coordinate {i}: residual {r}"
            )));
        }
    }
    Ok(l)
}

/// Runs `check_condition` for every parameter.
pub fn scan_parameters(x: &[RatExpr], a: &[RatExpr], params: &[Var]) -> Vec<(Var, Result<u32, IsomonoError>)> {
    params
        .iter()
        .map(|p| (*p, check_condition(x, a, *p, params)))
        .collect()
}

/// Builds `L` from `X~` and the accepted flows `(parameter, time, A, l)`.
pub fn promote(x: &[RatExpr], flows: &[(Var, Var, LieElement, u32)]) -> Result<LaxPair, IsomonoError> {
    let Some(l) = flows.first().map(|f| f.3) else {
        return Err(IsomonoError::Case("no flow to promote".into()));
    };
    if flows.iter().any(|f| f.3 != l) {
        return Err(IsomonoError::ConditionFailed("flows disagree on l".into()));
    }
    let times: BTreeMap<Var, RatExpr> = flows.iter().map(|f| (f.0, RatExpr::var(f.1))).collect();
    let scale = lam_pow(l).inv()?;
    let l_coords = x
        .iter()
        .map(|e| Ok(&e.substitute(&times)? * &scale))
        .collect::<Result<_, IsomonoError>>()?;
    let flows = flows
        .iter()
        .map(|(p, t, a, _)| {
            Ok(TimeFlow {
                time: *t,
                parameter: *p,
                a: a.iter().map(|e| e.substitute(&times)).collect::<Result<_, _>>()?,
            })
        })
        .collect::<Result<_, IsomonoError>>()?;
    Ok(LaxPair { l_coords, flows, l })
}

/// Hamiltonian velocity `q' = dH/dp, p' = -dH/dq`.
pub fn hamiltonian_velocity(pairs: &[(Var, Var)], h: &RatExpr) -> Vec<(Var, RatExpr)> {
    let mut out = Vec::new();
    for (q, p) in pairs {
        out.push((*q, h.partial(*p)));
        out.push((*p, -h.partial(*q)));
    }
    out
}

fn along(e: &RatExpr, vel: &[(Var, RatExpr)], time: Option<Var>) -> RatExpr {
    let mut acc = time.map_or(RatExpr::zero(), |t| e.partial(t));
    for (v, x) in vel {
        let d = e.partial(*v);
        if !d.is_zero() {
            acc = acc + &d * x;
        }
    }
    acc
}

fn compare(spec: &LieAlgebraSpec, lhs: &[RatExpr], rhs: &[RatExpr], what: &str) -> Result<(), IsomonoError> {
    let d: Vec<RatExpr> = lhs.iter().zip(rhs).map(|(a, b)| a - b).collect();
    if d.iter().all(|x| x.is_zero()) {
        return Ok(());
    }
    let m = spec.element(&d);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !m[(r, c)].is_zero() {
                return Err(IsomonoError::ResidualNonzero {
                    entry: format!("{what} ({}, {})", r + 1, c + 1),
                    residual: m[(r, c)].to_text(),
                });
            }
        }
    }
    unreachable!()
}

fn commutator(spec: &LieAlgebraSpec, o: Orientation, a: &[RatExpr], l: &[RatExpr]) -> LieElement {
    match o {
        Orientation::AL => spec.bracket(a, l),
        Orientation::LA => spec.bracket(l, a),
    }
}

/// Exact check of `dL/dt_i = [A_i, L] + dA_i/dlambda` (or `[L, A_i]`) along
/// the flow of `H_i` in the canonical pairs.
pub fn verify_zero_curvature(
    spec: &LieAlgebraSpec,
    pair: &LaxPair,
    pairs: &[(Var, Var)],
    hams: &[RatExpr],
    orientation: Orientation,
) -> Result<(), IsomonoError> {
    if hams.len() != pair.flows.len() {
        return Err(IsomonoError::Case(format!(
            "{} Hamiltonians for {} flows",
            hams.len(),
            pair.flows.len()
        )));
    }
    for (f, h) in pair.flows.iter().zip(hams) {
        let vel = hamiltonian_velocity(pairs, h);
        let lhs: Vec<RatExpr> = pair.l_coords.iter().map(|e| along(e, &vel, Some(f.time))).collect();
        let mut rhs = commutator(spec, orientation, &f.a, &pair.l_coords);
        for (r, a) in rhs.iter_mut().zip(&f.a) {
            *r = &*r + &a.partial(lambda());
        }
        compare(spec, &lhs, &rhs, &format!("d/d{}", f.time))?;
    }
    Ok(())
}

/// `dX/dt = [A, X]` (or `[X, A]`) along the flow of `H` with every parameter frozen.
pub fn verify_isospectral(
    spec: &LieAlgebraSpec,
    x: &[RatExpr],
    a: &[RatExpr],
    pairs: &[(Var, Var)],
    h: &RatExpr,
    orientation: Orientation,
) -> Result<(), IsomonoError> {
    let vel = hamiltonian_velocity(pairs, h);
    let lhs: Vec<RatExpr> = x.iter().map(|e| along(e, &vel, None)).collect();
    let rhs = commutator(spec, orientation, a, x);
    compare(spec, &lhs, &rhs, "isospectral")
}
