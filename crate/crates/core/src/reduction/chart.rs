use std::collections::{BTreeMap, BTreeSet};

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exactpoly::{parse_ratexpr, rational_text, RatExpr, Rational, Var};
use crate::matrix::Matrix;
use crate::report::Check;
use crate::sampling::nonzero_int;

use super::{Distribution, ReductionError};

/// A chart as it appears in case files. Every expression is text.
///
/// `slice` fixes `h` loop coordinates; `inverse` parametrizes the section by
/// `coordinates`. `invariants`, when present, give each chart coordinate as a
/// `D`-invariant function of the loop coordinates; without them every chart
/// coordinate must be the restriction of one loop coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartDef {
    pub slice: BTreeMap<String, String>,
    pub coordinates: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants: Option<BTreeMap<String, String>>,
    pub inverse: BTreeMap<String, String>,
    #[serde(default)]
    pub units: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Chart {
    pub coords: Vec<Var>,
    /// `(part, coordinate index, value)`.
    pub slice: Vec<(usize, usize, RatExpr)>,
    pub invariants: Option<Vec<RatExpr>>,
    pub inverse: BTreeMap<Var, RatExpr>,
    pub units: BTreeSet<Var>,
    /// In lift mode, the loop coordinate `(part, index)` carrying each chart coordinate.
    pub carriers: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartCertificate {
    pub checks: Vec<Check>,
    pub sample_points: Vec<BTreeMap<String, String>>,
}

fn invalid(s: impl Into<String>) -> ReductionError {
    ReductionError::ChartInvalid(s.into())
}

fn parse(s: &str) -> Result<RatExpr, ReductionError> {
    parse_ratexpr(s).map_err(|e| invalid(format!("{s:?}: {e}")))
}

impl Chart {
    pub fn from_def(def: &ChartDef, dist: &Distribution) -> Result<Chart, ReductionError> {
        let vars = &dist.lp.vars;
        let locate: BTreeMap<Var, (usize, usize)> = vars
            .iter()
            .enumerate()
            .skip(1)
            .flat_map(|(p, vs)| vs.iter().enumerate().map(move |(a, v)| (*v, (p, a))))
            .collect();
        let units: BTreeSet<Var> = def.units.iter().map(|u| Var::new(u)).collect();
        let coords: Vec<Var> = def.coordinates.iter().map(|c| Var::new(c)).collect();
        if coords.iter().collect::<BTreeSet<_>>().len() != coords.len() {
            return Err(invalid("repeated chart coordinate"));
        }
        let mut slice = Vec::new();
        for (k, v) in &def.slice {
            let var = Var::new(k);
            let &(p, a) = locate
                .get(&var)
                .ok_or_else(|| invalid(format!("slice variable {k} is not a loop coordinate")))?;
            let e = parse(v)?;
            if e.as_constant().is_none() {
                return Err(invalid(format!("slice value {v} for {k} is not constant")));
            }
            slice.push((p, a, e));
        }
        let mut inverse = BTreeMap::new();
        for (k, v) in &def.inverse {
            let var = Var::new(k);
            if !locate.contains_key(&var) {
                return Err(invalid(format!("inverse given for unknown coordinate {k}")));
            }
            let e = parse(v)?;
            if let Some(x) = e.vars().into_iter().find(|x| !coords.contains(x)) {
                return Err(invalid(format!("inverse of {k} uses {x}, not a chart coordinate")));
            }
            e.check_units(&units)?;
            inverse.insert(var, e);
        }
        if let Some(v) = locate.keys().find(|v| !inverse.contains_key(v)) {
            return Err(invalid(format!("inverse misses {v}")));
        }
        let invariants = match &def.invariants {
            None => None,
            Some(m) => {
                let mut out = Vec::new();
                for c in &def.coordinates {
                    let s = m
                        .get(c)
                        .ok_or_else(|| invalid(format!("no invariant for chart coordinate {c}")))?;
                    let e = parse(s)?;
                    if let Some(x) = e.vars().into_iter().find(|x| !locate.contains_key(x)) {
                        return Err(invalid(format!("invariant {c} uses {x}, not a loop coordinate")));
                    }
                    e.check_units(&units)?;
                    out.push(e);
                }
                if m.len() != out.len() {
                    return Err(invalid("invariant given for an unknown chart coordinate"));
                }
                Some(out)
            }
        };
        let mut carriers = Vec::new();
        if invariants.is_none() {
            for c in &coords {
                let hit: Vec<&Var> = inverse
                    .iter()
                    .filter(|(_, e)| **e == RatExpr::var(*c))
                    .map(|(v, _)| v)
                    .collect();
                if hit.len() != 1 {
                    return Err(invalid(format!("chart coordinate {c} has no unique carrier")));
                }
                carriers.push(locate[hit[0]]);
            }
        }
        Ok(Chart {
            coords,
            slice,
            invariants,
            inverse,
            units,
            carriers,
        })
    }

    /// Binding of every loop coordinate to its value on the section.
    pub fn section_bindings(&self) -> &BTreeMap<Var, RatExpr> {
        &self.inverse
    }

    /// `M[s][i]`: the slice component `s` of generator `i` on the section.
    pub fn slice_matrix(&self, dist: &Distribution) -> Result<Matrix<RatExpr>, ReductionError> {
        let h = dist.rank();
        let mut m = Matrix::zeros(self.slice.len(), h);
        for (s, (p, a, _)) in self.slice.iter().enumerate() {
            for i in 0..h {
                m[(s, i)] = dist.generators[i][*p][*a].substitute(&self.inverse)?;
            }
        }
        Ok(m)
    }
}

/// Checks invariance, transversality and the inverse round trip.
pub fn verify_chart(chart: &Chart, dist: &Distribution, rng: &mut ChaCha8Rng) -> Result<ChartCertificate, ReductionError> {
    let spec = &dist.lp.spec;
    let n = dist.lp.n;
    let h = dist.rank();
    let mut checks = Vec::new();
    if chart.slice.len() != h {
        return Err(invalid(format!("{} slice constraints for a rank {h} distribution", chart.slice.len())));
    }
    if chart.coords.len() + h != n * spec.dim {
        return Err(invalid(format!(
            "{} chart coordinates, expected {}",
            chart.coords.len(),
            n * spec.dim - h
        )));
    }
    checks.push(Check::pass("chart dimension"));

    let vars = &dist.lp.vars;
    for (p, a, val) in &chart.slice {
        let v = vars[*p][*a];
        if chart.inverse[&v] != *val {
            return Err(invalid(format!("inverse of {v} is {}, slice requires {val}", chart.inverse[&v])));
        }
    }
    checks.push(Check::pass("inverse lies on slice"));

    if let Some(inv) = &chart.invariants {
        for (a, f) in inv.iter().enumerate() {
            for (i, g) in dist.generators.iter().enumerate() {
                let d = dist.lp.lie_derivative(g, f);
                if !d.is_zero() {
                    return Err(invalid(format!(
                        "{} is not invariant along generator {}: {}",
                        chart.coords[a],
                        i + 1,
                        d
                    )));
                }
            }
        }
        checks.push(Check::pass("invariants annihilated by D"));
        for (a, f) in inv.iter().enumerate() {
            let back = f.substitute(&chart.inverse)?;
            if back != RatExpr::var(chart.coords[a]) {
                return Err(invalid(format!("{} round trip gives {back}", chart.coords[a])));
            }
        }
        let on_slice: BTreeMap<Var, RatExpr> = chart
            .slice
            .iter()
            .map(|(p, a, v)| (vars[*p][*a], v.clone()))
            .collect();
        let forward: BTreeMap<Var, RatExpr> = chart
            .coords
            .iter()
            .zip(inv)
            .map(|(c, f)| Ok((*c, f.substitute(&on_slice)?)))
            .collect::<Result<_, ReductionError>>()?;
        for (v, e) in &chart.inverse {
            if on_slice.contains_key(v) {
                continue;
            }
            let back = e.substitute(&forward)?;
            if back != RatExpr::var(*v) {
                return Err(invalid(format!("{v} round trip gives {back}")));
            }
        }
        checks.push(Check::pass("inverse round trip"));
    }

    let m = chart.slice_matrix(dist)?;
    let mut sample_points = Vec::new();
    let mut ok = false;
    for _ in 0..4 {
        let point: BTreeMap<Var, Rational> = chart
            .coords
            .iter()
            .map(|c| (*c, nonzero_int(rng, 9)))
            .collect();
        sample_points.push(
            point
                .iter()
                .map(|(k, v)| (k.to_string(), rational_text(v)))
                .collect(),
        );
        let Ok(num) = m.try_map(|e| e.eval(&point).ok_or(())) else {
            continue;
        };
        if num.rank() == h {
            ok = true;
            break;
        }
    }
    if !ok {
        return Err(invalid(format!("slice not transverse to D at {} sampled points", sample_points.len())));
    }
    checks.push(Check::pass("slice transverse to D"));
    Ok(ChartCertificate { checks, sample_points })
}
