//! Suite runners shared by the command line and the acceptance tests.

use std::collections::{BTreeMap, BTreeSet};

use crate::cases::{CaseDefinition, Registry};
use crate::exactpoly::parse_rational;
use crate::isomono::{derive, reduced_system, IsomonoError};
use crate::liealg::{LieAlgebraSpec, LieError};
use crate::looppoisson::suites::{jacobi_suite, phi_suite, psi_suite};
use crate::looppoisson::{expected_dimension, LoopError};
use crate::reduction::suites::reduced_suite;
use crate::reduction::ReductionError;
use crate::report::{Check, SuiteReport};
use crate::sampling::rng;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown suite {0}")]
    UnknownSuite(String),
    #[error("no built-in case covers {algebra} with n = {n}")]
    NoCase { algebra: String, n: usize },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Isomono(#[from] IsomonoError),
}

pub const SUITES: [&str; 3] = ["propositions", "reduction", "cases"];

fn prefixed(prefix: &str, checks: Vec<Check>) -> impl Iterator<Item = Check> + '_ {
    checks.into_iter().map(move |mut c| {
        c.name = format!("{prefix}: {}", c.name);
        c
    })
}

/// Distinct base points `x0` declared by the registry's cases for `algebra`.
fn base_points(reg: &Registry, algebra: &str) -> Result<Vec<BTreeMap<String, String>>, SuiteError> {
    let mut seen = BTreeSet::new();
    for id in reg.ids() {
        let c = reg.get(id).expect("listed id");
        if c.algebra == algebra {
            seen.insert(c.x0.clone());
        }
    }
    Ok(seen.into_iter().collect())
}

fn x0_label(x0: &BTreeMap<String, String>) -> String {
    x0.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

/// Casimir families, loop pencils and Jacobi identities on `g_n` for every
/// base point the cases use.
pub fn propositions(reg: &Registry, algebra: &str, n: usize, seed: u64) -> Result<SuiteReport, SuiteError> {
    let spec = LieAlgebraSpec::builtin(algebra)?;
    let mut report = SuiteReport::new("propositions", algebra, n);
    let mut r = rng(seed);
    let points = base_points(reg, algebra)?;
    if points.is_empty() {
        return Err(SuiteError::NoCase { algebra: algebra.into(), n });
    }
    report.checks.extend(prefixed("phi", phi_suite(&spec, n)?));
    for x0 in &points {
        let parsed: BTreeMap<String, _> = x0
            .iter()
            .map(|(k, v)| Ok((k.clone(), parse_rational(v).map_err(IsomonoError::from)?)))
            .collect::<Result<_, SuiteError>>()?;
        let x = spec.element_from_map(&parsed)?;
        let label = format!("psi x0 {}", x0_label(x0));
        report.checks.extend(prefixed(&label, psi_suite(&spec, n, &x, &mut r)?));
    }
    report.checks.extend(prefixed("jacobi", jacobi_suite(&spec, n, &mut r)?));
    Ok(report)
}

fn cases_for<'a>(reg: &'a Registry, algebra: &str, n: usize) -> Vec<&'a CaseDefinition> {
    let mut seen = BTreeSet::new();
    reg.ids()
        .into_iter()
        .map(|id| reg.get(id).expect("listed id"))
        .filter(|c| c.algebra == algebra && c.n == n)
        .filter(|c| seen.insert((c.x0.clone(), serde_json::to_string(&c.chart).unwrap_or_default())))
        .collect()
}

/// The reduced system for each distinct chart of the cases on `(algebra, n)`:
/// dimension, distribution and the reduced statements.
pub fn reduction(reg: &Registry, algebra: &str, n: usize, seed: u64) -> Result<SuiteReport, SuiteError> {
    let spec = LieAlgebraSpec::builtin(algebra)?;
    let mut report = SuiteReport::new("reduction", algebra, n);
    let cases = cases_for(reg, algebra, n);
    if cases.is_empty() {
        return Err(SuiteError::NoCase { algebra: algebra.into(), n });
    }
    let mut r = rng(seed);
    let want = expected_dimension(&spec, n);
    for c in cases {
        let (_, red) = reduced_system(c)?;
        let label = format!("chart x0 {}", x0_label(&c.x0));
        let leaf_dim = c.leaf.coordinates.len() as i64;
        report.push(Check::from_bool(format!("{label}: leaf dimension {want}"), leaf_dim == want, || {
            format!("leaf of {} has {leaf_dim} coordinates", c.id)
        }));
        report.checks.extend(prefixed(&label, reduced_suite(&red, &mut r)?));
    }
    Ok(report)
}

/// Derives every case in `ids` and collects its certificates.
pub fn cases(reg: &Registry, ids: &[&str]) -> SuiteReport {
    let mut report = SuiteReport::new("cases", "all", 0);
    for id in ids {
        let outcome = reg.get(id).map_err(|e| e.to_string()).and_then(|c| derive(c, reg).map_err(|e| e.to_string()));
        match outcome {
            Ok(d) => report.checks.extend(prefixed(id, d.checks)),
            Err(e) => report.push(Check::fail(format!("{id}: derive"), e)),
        }
    }
    report
}

pub fn run(reg: &Registry, suite: &str, algebra: &str, n: usize, seed: u64) -> Result<SuiteReport, SuiteError> {
    match suite {
        "propositions" => propositions(reg, algebra, n, seed),
        "reduction" => reduction(reg, algebra, n, seed),
        "cases" => Ok(cases(reg, &reg.ids())),
        other => Err(SuiteError::UnknownSuite(other.into())),
    }
}
