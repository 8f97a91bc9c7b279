use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::exactpoly::{Poly, RatExpr, Var};

use super::{IsomonoError, Restricted};

/// Leaf coordinates as functions of canonical pairs `(q_a, p_a)`.
#[derive(Clone, Debug)]
pub struct DarbouxChart {
    pub pairs: Vec<(Var, Var)>,
    pub map: BTreeMap<Var, RatExpr>,
    pub units: BTreeSet<Var>,
}

impl DarbouxChart {
    pub fn phase_vars(&self) -> Vec<Var> {
        self.pairs.iter().flat_map(|(q, p)| [*q, *p]).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivedHamiltonian {
    pub case: String,
    /// e.g. `psi~_2,3`.
    pub source: String,
    pub time: String,
    #[serde(serialize_with = "poly_text")]
    pub h: Poly,
}

fn poly_text<S: serde::Serializer>(p: &Poly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_text())
}

fn canonical_bracket(pairs: &[(Var, Var)], f: &RatExpr, g: &RatExpr) -> RatExpr {
    let mut acc = RatExpr::zero();
    for (q, p) in pairs {
        acc = acc + &f.partial(*q) * &g.partial(*p) - &f.partial(*p) * &g.partial(*q);
    }
    acc
}

/// Checks `{phi_a, phi_b}_can = P_leaf[a][b] o phi` for every pair of leaf
/// coordinates.
pub fn certify_darboux(r: &Restricted, chart: &DarbouxChart) -> Result<(), IsomonoError> {
    let coords = &r.leaf.coords;
    let keys: BTreeSet<Var> = chart.map.keys().copied().collect();
    if keys != coords.iter().copied().collect::<BTreeSet<_>>() {
        return Err(IsomonoError::DarbouxInvalid("map does not cover exactly the leaf coordinates".into()));
    }
    if 2 * chart.pairs.len() != coords.len() {
        return Err(IsomonoError::DarbouxInvalid(format!(
            "{} pairs for a leaf of dimension {}",
            chart.pairs.len(),
            coords.len()
        )));
    }
    for e in chart.map.values() {
        e.check_units(&chart.units)?;
    }
    for a in 0..coords.len() {
        for b in a + 1..coords.len() {
            let lhs = canonical_bracket(&chart.pairs, &chart.map[&coords[a]], &chart.map[&coords[b]]);
            let rhs = r.poisson[(a, b)].substitute(&chart.map)?;
            let d = &lhs - &rhs;
            if !d.is_zero() {
                return Err(IsomonoError::DarbouxInvalid(format!(
                    "{{{}, {}}}: canonical {lhs}, leaf {rhs}",
                    coords[a], coords[b]
                )));
            }
        }
    }
    Ok(())
}

/// `psi~` restricted, pulled back through the chart, with the parameter
/// choice and the time substitution applied. Must be a polynomial.
pub fn hamiltonian_in_darboux(
    r: &Restricted,
    chart: &DarbouxChart,
    psi: &RatExpr,
    choices: &BTreeMap<Var, RatExpr>,
    times: &BTreeMap<Var, RatExpr>,
) -> Result<Poly, IsomonoError> {
    let h = r.restrict(psi)?.substitute(&chart.map)?;
    let h = h.substitute(choices)?.substitute(times)?;
    h.clone()
        .into_poly()
        .map_err(|_| IsomonoError::NotPolynomial(h.to_text()))
}
