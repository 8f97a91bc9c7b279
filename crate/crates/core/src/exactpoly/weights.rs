use std::collections::BTreeMap;

use super::poly::Poly;
use super::var::Var;
use super::PolyError;

/// Integer weights per variable; negative weights are allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightVector {
    pub weights: BTreeMap<Var, i64>,
}

impl WeightVector {
    pub fn new<I: IntoIterator<Item = (Var, i64)>>(it: I) -> WeightVector {
        WeightVector {
            weights: it.into_iter().collect(),
        }
    }

    pub fn get(&self, v: Var) -> Option<i64> {
        self.weights.get(&v).copied()
    }
}

/// Weighted degree of every term. Returns `(true, h)` when all terms share
/// the weight `h`, otherwise `(false, max)`.
pub fn weighted_degree(f: &Poly, w: &WeightVector) -> Result<(bool, i64), PolyError> {
    let mut seen: Option<(i64, i64)> = None;
    for (m, _) in f.terms() {
        let mut d = 0i64;
        for &(v, e) in m.iter() {
            let a = w.get(v).ok_or(PolyError::UnweightedVariable(v.name().to_string()))?;
            d += a * e as i64;
        }
        seen = Some(match seen {
            None => (d, d),
            Some((lo, hi)) => (lo.min(d), hi.max(d)),
        });
    }
    Ok(match seen {
        None => (true, 0),
        Some((lo, hi)) => (lo == hi, hi),
    })
}

/// Part of `f` of weighted degree exactly `h`.
pub fn weighted_part(f: &Poly, w: &WeightVector, h: i64) -> Result<Poly, PolyError> {
    let mut out = Poly::zero();
    for (m, c) in f.terms() {
        let mut d = 0i64;
        for &(v, e) in m.iter() {
            d += w.get(v).ok_or(PolyError::UnweightedVariable(v.name().to_string()))? * e as i64;
        }
        if d == h {
            out.add_term(m.clone(), c.clone());
        }
    }
    Ok(out)
}

/// Coefficients of `lambda^max_deg, ..., lambda^0`.
pub fn collect_lambda(f: &Poly, lambda: Var, max_deg: u32) -> Result<Vec<Poly>, PolyError> {
    let d = f.degree_in(lambda);
    if d > max_deg {
        return Err(PolyError::DegreeOverflow { degree: d, max: max_deg });
    }
    let mut by = f.collect(lambda);
    Ok((0..=max_deg)
        .rev()
        .map(|e| by.remove(&e).unwrap_or_default())
        .collect())
}

/// Inverse of [`collect_lambda`].
pub fn assemble_lambda(coeffs: &[Poly], lambda: Var) -> Poly {
    let n = coeffs.len() as u32;
    let mut out = Poly::zero();
    for (j, c) in coeffs.iter().enumerate() {
        let e = n - 1 - j as u32;
        out = out + c.mul_monomial(&super::Monomial::var_pow(lambda, e));
    }
    out
}
