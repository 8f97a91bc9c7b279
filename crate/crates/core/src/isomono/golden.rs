use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactpoly::{parse_ratexpr, Poly, RatExpr, Rational, Var};

use super::IsomonoError;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TimeMap {
    #[serde(default = "one_text")]
    pub scale: String,
    #[serde(default = "zero_text")]
    pub shift: String,
}

fn one_text() -> String {
    "1".into()
}

fn zero_text() -> String {
    "0".into()
}

/// `golden = kappa_i * H_i(a q, b p, S t + shift, params)` up to terms free of
/// the phase variables.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    #[serde(default)]
    pub scale: BTreeMap<String, String>,
    #[serde(default)]
    pub times: BTreeMap<String, TimeMap>,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
    #[serde(default)]
    pub kappa: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GoldenReport {
    pub pass: bool,
    pub differences: Vec<String>,
    pub dropped: Vec<String>,
    /// `a_i b_i` when it is the same for every pair.
    pub rho: Option<String>,
    /// `S_i / (kappa_i rho)` per Hamiltonian.
    pub flow_factors: Vec<Option<String>>,
    pub flow_exact: bool,
}

fn parse(s: &str) -> Result<RatExpr, IsomonoError> {
    Ok(parse_ratexpr(s)?)
}

fn constant(s: &str) -> Result<Rational, IsomonoError> {
    parse(s)?
        .as_constant()
        .ok_or_else(|| IsomonoError::Case(format!("{s} is not a constant")))
}

pub fn golden_match(
    hams: &[Poly],
    targets: &[Poly],
    norm: &Normalization,
    pairs: &[(Var, Var)],
    times: &[Var],
) -> Result<GoldenReport, IsomonoError> {
    if hams.len() != targets.len() {
        return Err(IsomonoError::Case(format!("{} Hamiltonians, {} goldens", hams.len(), targets.len())));
    }
    let mut b: BTreeMap<Var, RatExpr> = BTreeMap::new();
    let mut scales: BTreeMap<Var, Rational> = BTreeMap::new();
    for (k, v) in &norm.scale {
        let c = constant(v)?;
        scales.insert(Var::new(k), c.clone());
        b.insert(Var::new(k), RatExpr::var(Var::new(k)).scale(&c));
    }
    let mut time_scale: BTreeMap<Var, Rational> = BTreeMap::new();
    for (k, t) in &norm.times {
        let s = constant(&t.scale)?;
        time_scale.insert(Var::new(k), s.clone());
        b.insert(Var::new(k), RatExpr::var(Var::new(k)).scale(&s) + parse(&t.shift)?);
    }
    for (k, v) in &norm.parameters {
        b.insert(Var::new(k), parse(v)?);
    }
    let phase: Vec<Var> = pairs.iter().flat_map(|(q, p)| [*q, *p]).collect();
    let scale_of = |v: &Var| scales.get(v).cloned().unwrap_or_else(Rational::one);
    let rhos: Vec<Rational> = pairs.iter().map(|(q, p)| scale_of(q) * scale_of(p)).collect();
    let rho = if rhos.windows(2).all(|w| w[0] == w[1]) { rhos.first().cloned() } else { None };

    let mut differences = Vec::new();
    let mut dropped = Vec::new();
    let mut flow_factors = Vec::new();
    let mut pass = true;
    for (i, (h, g)) in hams.iter().zip(targets).enumerate() {
        let kappa = match norm.kappa.get(i) {
            Some(k) => constant(k)?,
            None => Rational::one(),
        };
        let hs = RatExpr::from(h.clone()).substitute(&b)?.scale(&kappa);
        let hs = hs
            .into_poly()
            .map_err(|e| IsomonoError::Case(format!("normalized Hamiltonian: {e}")))?;
        let diff = &hs - g;
        let keep = |m: &crate::exactpoly::Monomial| phase.iter().any(|v| m.exp(*v) > 0);
        let d = diff.filter_terms(keep);
        let pure = diff.filter_terms(|m| !keep(m));
        if !d.is_zero() {
            pass = false;
        }
        differences.push(d.to_text());
        dropped.push(pure.to_text());
        let s = times
            .get(i)
            .and_then(|t| time_scale.get(t).cloned())
            .unwrap_or_else(Rational::one);
        flow_factors.push(rho.as_ref().filter(|r| !r.is_zero()).map(|r| s / (kappa * r.clone())));
    }
    let flow_exact = flow_factors.iter().all(|f| f.as_ref().is_some_and(|x| x.is_one()));
    let report = GoldenReport {
        pass,
        differences,
        dropped,
        rho: rho.map(|r| r.to_string()),
        flow_factors: flow_factors.into_iter().map(|f| f.map(|x| x.to_string())).collect(),
        flow_exact,
    };
    if pass {
        Ok(report)
    } else {
        Err(IsomonoError::GoldenMismatch(
            report
                .differences
                .iter()
                .enumerate()
                .filter(|(_, d)| *d != "0")
                .map(|(i, d)| format!("H{}: {d}", i + 1))
                .collect::<Vec<_>>()
                .join("; "),
        ))
    }
}
