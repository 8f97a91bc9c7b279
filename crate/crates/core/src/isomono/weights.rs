use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exactpoly::{parse_poly, weighted_degree, weighted_part, Poly, Var, WeightVector};

use super::IsomonoError;

/// One row of a weight table: weights for every variable of the listed
/// Hamiltonians (phase variables, times and parameters) and their degrees.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightRow {
    pub name: String,
    pub phase: Vec<String>,
    pub times: Vec<String>,
    pub weights: BTreeMap<String, i64>,
    pub hamiltonians: Vec<String>,
    pub degrees: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightReport {
    pub name: String,
    pub phase_weights: Vec<i64>,
    pub time_weights: Vec<i64>,
    pub degrees: Vec<i64>,
    /// Whether each Hamiltonian is quasihomogeneous rather than only semi-quasihomogeneous.
    pub quasihomogeneous: Vec<bool>,
}

impl WeightRow {
    pub fn weight_vector(&self) -> WeightVector {
        WeightVector::new(self.weights.iter().map(|(k, v)| (Var::new(k), *v)))
    }

    pub fn parsed(&self) -> Result<Vec<Poly>, IsomonoError> {
        Ok(self
            .hamiltonians
            .iter()
            .map(|h| parse_poly(h))
            .collect::<Result<_, _>>()?)
    }
}

/// Every term has weighted degree at most `h`, and the top part is nonzero.
pub fn weight_table(row: &WeightRow, hams: &[Poly]) -> Result<WeightReport, IsomonoError> {
    if hams.len() != row.degrees.len() {
        return Err(IsomonoError::WeightMismatch(format!(
            "{}: {} Hamiltonians, {} degrees",
            row.name,
            hams.len(),
            row.degrees.len()
        )));
    }
    let w = row.weight_vector();
    let mut quasi = Vec::new();
    for (i, (h, d)) in hams.iter().zip(&row.degrees).enumerate() {
        let (homog, top) = weighted_degree(h, &w)?;
        if top != *d || weighted_part(h, &w, *d)?.is_zero() {
            return Err(IsomonoError::WeightMismatch(format!(
                "{} H{}: top weighted degree {top}, table says {d}",
                row.name,
                i + 1
            )));
        }
        quasi.push(homog);
    }
    let get = |names: &[String]| -> Result<Vec<i64>, IsomonoError> {
        names
            .iter()
            .map(|n| {
                row.weights
                    .get(n)
                    .copied()
                    .ok_or_else(|| IsomonoError::WeightMismatch(format!("{}: no weight for {n}", row.name)))
            })
            .collect()
    };
    Ok(WeightReport {
        name: row.name.clone(),
        phase_weights: get(&row.phase)?,
        time_weights: get(&row.times)?,
        degrees: row.degrees.clone(),
        quasihomogeneous: quasi,
    })
}
