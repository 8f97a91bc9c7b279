use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cases::{CaseDefinition, Registry};
use crate::exactpoly::{parse_poly, parse_ratexpr, parse_rational, Poly, RatExpr, Var};
use crate::liealg::{LieAlgebraSpec, LieElement};
use crate::reduction::{hamiltonian_lax, reduce, verify_chart, Chart, Distribution, ReducedSystem};
use crate::report::Check;
use crate::sampling::{rng, DEFAULT_SEED};

use super::{
    certify_darboux, check_condition, golden_match, hamiltonian_in_darboux, promote, reduce_to_scalar_ode,
    restrict_to_leaf, scaling_equivalence, verify_isospectral, verify_zero_curvature, weight_table, DarbouxChart,
    DerivedHamiltonian, GoldenReport, IsomonoError, LaxPair, Level, LeafSpec, Restricted, ScalarOde, Shift,
    WeightReport,
};

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub hamiltonian: String,
    pub parameter: String,
    pub l: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub hamiltonian: String,
    pub scan: Vec<ConditionReport>,
}

/// Everything the pipeline produces for one case.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub case: String,
    pub spec: LieAlgebraSpec,
    pub reduced: ReducedSystem,
    pub restricted: Restricted,
    pub conditions: Vec<ConditionReport>,
    pub probes: Vec<ProbeReport>,
    /// In leaf coordinates.
    pub leaf_pair: LaxPair,
    /// In Darboux coordinates.
    pub pair: LaxPair,
    pub pairs: Vec<(Var, Var)>,
    pub times: Vec<Var>,
    pub hamiltonians: Vec<DerivedHamiltonian>,
    /// Darboux-coordinate data with every parameter kept: `X~`, the `A`s and
    /// the Hamiltonians.
    pub autonomous: (LieElement, Vec<LieElement>, Vec<Poly>),
    pub golden: Option<Result<GoldenReport, String>>,
    pub weights: Option<Result<WeightReport, String>>,
    pub odes: Vec<(String, Result<ScalarOde, String>)>,
    pub checks: Vec<Check>,
}

impl Derivation {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn hamiltonian_polys(&self) -> Vec<Poly> {
        self.hamiltonians.iter().map(|h| h.h.clone()).collect()
    }
}

fn e(s: &str) -> Result<RatExpr, IsomonoError> {
    Ok(parse_ratexpr(s)?)
}

fn vars(v: &[String]) -> Vec<Var> {
    v.iter().map(|s| Var::new(s)).collect()
}

fn psi_name(family: usize, index: usize) -> String {
    format!("psi~_{family},{index}")
}

pub fn leaf_spec(case: &CaseDefinition) -> Result<LeafSpec, IsomonoError> {
    let l = &case.leaf;
    Ok(LeafSpec {
        tensor: l.tensor,
        levels: l
            .levels
            .iter()
            .map(|x| {
                if x.family == 0 {
                    return Err(IsomonoError::Case("families are counted from 1".into()));
                }
                Ok(Level {
                    family: x.family - 1,
                    index: x.index,
                    value: e(&x.value)?,
                })
            })
            .collect::<Result<_, IsomonoError>>()?,
        shifts: l
            .shifts
            .iter()
            .map(|s| {
                Ok(Shift {
                    old: Var::new(&s.coordinate),
                    new: Var::new(&s.new),
                    offset: e(&s.offset)?,
                })
            })
            .collect::<Result<_, IsomonoError>>()?,
        solves: l
            .solves
            .iter()
            .map(|(v, x)| Ok((Var::new(v), e(x)?)))
            .collect::<Result<_, IsomonoError>>()?,
        coords: vars(&l.coordinates),
        params: vars(&l.parameters),
        units: l.units.iter().map(|u| Var::new(u)).collect(),
    })
}

pub fn darboux_chart(case: &CaseDefinition) -> Result<DarbouxChart, IsomonoError> {
    let d = &case.darboux;
    Ok(DarbouxChart {
        pairs: d.pairs.iter().map(|(q, p)| (Var::new(q), Var::new(p))).collect(),
        map: d
            .map
            .iter()
            .map(|(k, v)| Ok((Var::new(k), e(v)?)))
            .collect::<Result<_, IsomonoError>>()?,
        units: d.units.iter().map(|u| Var::new(u)).collect(),
    })
}

pub fn reduced_system(case: &CaseDefinition) -> Result<(LieAlgebraSpec, ReducedSystem), IsomonoError> {
    let spec = LieAlgebraSpec::builtin(&case.algebra)?;
    let x0: BTreeMap<String, _> = case
        .x0
        .iter()
        .map(|(k, v)| Ok((k.clone(), parse_rational(v)?)))
        .collect::<Result<_, IsomonoError>>()?;
    let x0 = spec.element_from_map(&x0)?;
    let dist = Distribution::new(&spec, case.n, &x0)?;
    let chart = Chart::from_def(&case.chart, &dist)?;
    verify_chart(&chart, &dist, &mut rng(DEFAULT_SEED))?;
    let red = reduce(&dist, &chart)?;
    Ok((spec, red))
}

fn flow_lax(red: &ReducedSystem, r: &Restricted, family: usize, k: usize) -> Result<(LieElement, Vec<RatExpr>), IsomonoError> {
    let (a, field) = hamiltonian_lax(red, family - 1, r.leaf.tensor - 1, k)?;
    Ok((r.restrict_element(&a)?, field))
}

fn sub_all(x: &[RatExpr], maps: &[&BTreeMap<Var, RatExpr>]) -> Result<LieElement, IsomonoError> {
    x.iter()
        .map(|e| {
            let mut e = e.clone();
            for m in maps {
                e = e.substitute(m)?;
            }
            Ok(e)
        })
        .collect()
}

fn golden_polys(reg: &Registry, files: &[String]) -> Result<Vec<Poly>, IsomonoError> {
    files
        .iter()
        .map(|f| {
            let text = reg.golden(f).map_err(|e| IsomonoError::Case(e.to_string()))?;
            Ok(parse_poly(text)?)
        })
        .collect()
}

/// Runs the whole pipeline. Structural errors abort; failed certificates are
/// recorded in `checks`.
pub fn derive(case: &CaseDefinition, reg: &Registry) -> Result<Derivation, IsomonoError> {
    let mut checks = Vec::new();
    let (spec, red) = reduced_system(case)?;
    checks.push(Check::pass("chart certified"));
    let leaf = leaf_spec(case)?;
    let r = restrict_to_leaf(&red, &leaf)?;
    checks.push(Check::pass("leaf levels hold"));

    let mut conditions = Vec::new();
    let mut accepted = Vec::new();
    let mut leaf_as = Vec::new();
    for f in &case.flows {
        let (a, field) = flow_lax(&red, &r, f.family, f.hamiltonian)?;
        let name = psi_name(f.family, f.hamiltonian);
        // The reduced field, restricted, is the leaf Hamiltonian field.
        let h = r.restrict(red.psi(f.family - 1, f.hamiltonian))?;
        let on_leaf = r.flow(&h);
        let mut bad = Vec::new();
        for (c, v) in leaf.coords.iter().zip(&on_leaf) {
            let old = leaf.shifts.iter().find(|s| s.new == *c).map_or(*c, |s| s.old);
            let i = red.coords().iter().position(|x| *x == old).unwrap();
            let d = r.restrict(&field[i])? - v.clone();
            if !d.is_zero() {
                bad.push(format!("{c}: {d}"));
            }
        }
        checks.push(Check::from_bool(format!("{name} field restricts to the leaf"), bad.is_empty(), || bad.join("; ")));
        let p = Var::new(&f.parameter);
        let res = check_condition(&r.x, &a, p, &leaf.params);
        let report = ConditionReport {
            hamiltonian: name.clone(),
            parameter: f.parameter.clone(),
            l: res.as_ref().ok().copied(),
            detail: res.as_ref().err().map(|e| e.to_string()),
        };
        checks.push(Check::from_bool(
            format!("condition {name} / {}", f.parameter),
            res.is_ok(),
            || report.detail.clone().unwrap_or_default(),
        ));
        conditions.push(report);
        let l = res?;
        accepted.push((p, Var::new(&f.time), a.clone(), l));
        leaf_as.push(a);
    }

    let mut probes = Vec::new();
    for pr in &case.probes {
        let (a, _) = flow_lax(&red, &r, pr.family, pr.hamiltonian)?;
        let name = psi_name(pr.family, pr.hamiltonian);
        let scan = leaf
            .params
            .iter()
            .map(|p| {
                let res = check_condition(&r.x, &a, *p, &leaf.params);
                ConditionReport {
                    hamiltonian: name.clone(),
                    parameter: p.to_string(),
                    l: res.as_ref().ok().copied(),
                    detail: res.err().map(|e| e.to_string()),
                }
            })
            .collect();
        probes.push(ProbeReport { hamiltonian: name, scan });
    }

    let leaf_pair = promote(&r.x, &accepted)?;
    let chart = darboux_chart(case)?;
    let darboux = certify_darboux(&r, &chart);
    checks.push(Check::from_bool("Darboux chart canonical", darboux.is_ok(), || {
        darboux.as_ref().unwrap_err().to_string()
    }));
    darboux?;

    let promoted: BTreeSet<Var> = accepted.iter().map(|a| a.0).collect();
    let choices: BTreeMap<Var, RatExpr> = case
        .parameter_choice
        .iter()
        .map(|(k, v)| Ok((Var::new(k), e(v)?)))
        .collect::<Result<_, IsomonoError>>()?;
    let uses_promoted = |x: &RatExpr| x.vars().iter().any(|v| promoted.contains(v));
    if chart.map.values().any(uses_promoted)
        || choices.values().any(uses_promoted)
        || choices.keys().any(|k| promoted.contains(k))
    {
        return Err(IsomonoError::Case("Darboux chart or parameter choice involves a promoted parameter".into()));
    }
    let times: BTreeMap<Var, RatExpr> = accepted.iter().map(|a| (a.0, RatExpr::var(a.1))).collect();

    let mut hamiltonians = Vec::new();
    let mut auto_h = Vec::new();
    for f in &case.flows {
        let psi = red.psi(f.family - 1, f.hamiltonian);
        let name = psi_name(f.family, f.hamiltonian);
        let h = hamiltonian_in_darboux(&r, &chart, psi, &choices, &times);
        checks.push(Check::from_bool(format!("{name} polynomial in Darboux coordinates"), h.is_ok(), || {
            h.as_ref().unwrap_err().to_string()
        }));
        hamiltonians.push(DerivedHamiltonian {
            case: case.id.clone(),
            source: name,
            time: f.time.clone(),
            h: h?,
        });
        auto_h.push(hamiltonian_in_darboux(&r, &chart, psi, &choices, &BTreeMap::new())?);
    }
    let pair = leaf_pair.substitute(&chart.map)?.substitute(&choices)?;
    let pairs = chart.pairs.clone();
    let hs: Vec<RatExpr> = hamiltonians.iter().map(|h| RatExpr::from(h.h.clone())).collect();
    let zc = verify_zero_curvature(&spec, &pair, &pairs, &hs, case.orientation);
    checks.push(Check::from_bool(format!("zero curvature {:?}", case.orientation), zc.is_ok(), || {
        zc.as_ref().unwrap_err().to_string()
    }));

    let auto_x = sub_all(&r.x, &[&chart.map, &choices])?;
    let auto_a: Vec<LieElement> = leaf_as
        .iter()
        .map(|a| sub_all(a, &[&chart.map, &choices]))
        .collect::<Result<_, _>>()?;
    let mut bad = Vec::new();
    for (i, (a, h)) in auto_a.iter().zip(&auto_h).enumerate() {
        if let Err(err) = verify_isospectral(&spec, &auto_x, a, &pairs, &RatExpr::from(h.clone()), case.orientation) {
            bad.push(format!("flow {}: {err}", i + 1));
        }
    }
    checks.push(Check::from_bool("isospectral with parameters frozen", bad.is_empty(), || bad.join("; ")));

    let time_vars: Vec<Var> = accepted.iter().map(|a| a.1).collect();
    let golden = match &case.golden {
        None => None,
        Some(g) => {
            let res = golden_polys(reg, &g.files).and_then(|targets| {
                golden_match(&hamiltonian_polys(&hamiltonians), &targets, &g.normalization, &pairs, &time_vars)
            });
            checks.push(Check::from_bool(format!("golden {}", g.files.join(", ")), res.is_ok(), || {
                res.as_ref().unwrap_err().to_string()
            }));
            Some(res.map_err(|e| e.to_string()))
        }
    };
    let weights = case.weights.as_ref().map(|row| {
        let res = weight_table(row, &hamiltonian_polys(&hamiltonians));
        checks.push(Check::from_bool(format!("weights {}", row.name), res.is_ok(), || {
            res.as_ref().unwrap_err().to_string()
        }));
        res.map_err(|e| e.to_string())
    });
    let odes = ode_checks(case, reg, &mut checks);

    Ok(Derivation {
        case: case.id.clone(),
        spec,
        reduced: red,
        restricted: r,
        conditions,
        probes,
        leaf_pair,
        pair,
        pairs,
        times: time_vars,
        hamiltonians,
        autonomous: (auto_x, auto_a, auto_h),
        golden,
        weights,
        odes,
        checks,
    })
}

fn hamiltonian_polys(h: &[DerivedHamiltonian]) -> Vec<Poly> {
    h.iter().map(|x| x.h.clone()).collect()
}

/// Scalar ODE reductions of the case's listed sources, compared with the
/// target exactly and, when a scaling is recorded, up to that scaling.
pub fn ode_checks(case: &CaseDefinition, reg: &Registry, checks: &mut Vec<Check>) -> Vec<(String, Result<ScalarOde, String>)> {
    let Some(def) = &case.ode else {
        return Vec::new();
    };
    let target = match parse_poly(&def.target) {
        Ok(t) => t,
        Err(err) => {
            checks.push(Check::fail("ode target", err.to_string()));
            return Vec::new();
        }
    };
    let mut out = Vec::new();
    for s in &def.sources {
        let res = golden_polys(reg, std::slice::from_ref(&s.file)).and_then(|h| {
            let pairs: Vec<(Var, Var)> = s.pairs.iter().map(|(q, p)| (Var::new(q), Var::new(p))).collect();
            reduce_to_scalar_ode(&h[0], &pairs, Var::new(&s.time), Var::new(&def.y))
        });
        match &res {
            Ok(ode) => {
                let d = &ode.rhs - &target;
                checks.push(Check::from_bool(format!("ode {} exact", s.file), d.is_zero(), || {
                    format!("derived minus target: {d}")
                }));
                if let Some(sc) = &s.scaling {
                    let ok = scaling_equivalence(ode, &target, sc);
                    checks.push(Check::from_bool(
                        format!("ode {} up to scaling", s.file),
                        matches!(ok, Ok(true)),
                        || format!("{ok:?}"),
                    ));
                }
            }
            Err(err) => checks.push(Check::fail(format!("ode {}", s.file), err.to_string())),
        }
        out.push((s.file.clone(), res.map_err(|e| e.to_string())));
    }
    out
}
