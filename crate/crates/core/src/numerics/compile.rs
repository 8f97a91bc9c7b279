use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::exactpoly::{Poly, RatExpr, Var};
use crate::matrix::rational_to_f64;

use super::NumericError;

/// A polynomial flattened against a fixed variable layout.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, u32)>)>,
}

fn index_of(layout: &BTreeMap<Var, usize>, v: Var) -> Result<usize, NumericError> {
    layout.get(&v).copied().ok_or_else(|| NumericError::Unbound(v.to_string()))
}

pub fn layout_index(layout: &[Var]) -> BTreeMap<Var, usize> {
    layout.iter().enumerate().map(|(i, v)| (*v, i)).collect()
}

impl CompiledPoly {
    pub fn compile(p: &Poly, layout: &BTreeMap<Var, usize>) -> Result<CompiledPoly, NumericError> {
        let mut terms = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            let vars = m
                .iter()
                .map(|(v, e)| Ok((index_of(layout, *v)?, *e)))
                .collect::<Result<_, NumericError>>()?;
            terms.push((rational_to_f64(c), vars));
        }
        Ok(CompiledPoly { terms })
    }

    pub fn eval(&self, env: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, vars) in &self.terms {
            let mut t = Complex64::new(*c, 0.0);
            for (i, e) in vars {
                t *= env[*i].powu(*e);
            }
            acc += t;
        }
        acc
    }
}

/// `num / den` with a monomial denominator.
#[derive(Clone, Debug)]
pub struct CompiledExpr {
    num: CompiledPoly,
    den: Vec<(usize, u32)>,
}

impl CompiledExpr {
    pub fn compile(e: &RatExpr, layout: &BTreeMap<Var, usize>) -> Result<CompiledExpr, NumericError> {
        Ok(CompiledExpr {
            num: CompiledPoly::compile(e.num(), layout)?,
            den: e
                .den()
                .iter()
                .map(|(v, k)| Ok((index_of(layout, *v)?, *k)))
                .collect::<Result<_, NumericError>>()?,
        })
    }

    pub fn eval(&self, env: &[Complex64]) -> Complex64 {
        let mut d = Complex64::new(1.0, 0.0);
        for (i, e) in &self.den {
            d *= env[*i].powu(*e);
        }
        self.num.eval(env) / d
    }
}

pub fn compile_all(xs: &[RatExpr], layout: &BTreeMap<Var, usize>) -> Result<Vec<CompiledExpr>, NumericError> {
    xs.iter().map(|x| CompiledExpr::compile(x, layout)).collect()
}

/// `q' = dH/dp, p' = -dH/dq` over a layout whose first `2m` slots are
/// `q1, p1, .., qm, pm`.
#[derive(Clone, Debug)]
pub struct HamiltonianField {
    pub h: CompiledPoly,
    dh: Vec<CompiledPoly>,
    pub dim: usize,
}

impl HamiltonianField {
    pub fn eval_into(&self, env: &[Complex64], out: &mut [Complex64]) {
        for (k, d) in self.dh.iter().enumerate() {
            let v = d.eval(env);
            // slot 2a is q_a, slot 2a + 1 is p_a
            if k % 2 == 0 {
                out[k + 1] = -v;
            } else {
                out[k - 1] = v;
            }
        }
    }

    pub fn eval(&self, env: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        self.eval_into(env, &mut out);
        out
    }

    pub fn partials(&self) -> &[CompiledPoly] {
        &self.dh
    }
}

/// Exact partials of `h`, compiled.
pub fn compile_flow(h: &Poly, pairs: &[(Var, Var)], layout: &[Var]) -> Result<HamiltonianField, NumericError> {
    let phase: Vec<Var> = pairs.iter().flat_map(|(q, p)| [*q, *p]).collect();
    if layout.len() < phase.len() || layout[..phase.len()] != phase[..] {
        return Err(NumericError::Layout("phase variables must lead the layout".into()));
    }
    let idx = layout_index(layout);
    Ok(HamiltonianField {
        h: CompiledPoly::compile(h, &idx)?,
        dh: phase
            .iter()
            .map(|v| CompiledPoly::compile(&h.partial(*v), &idx))
            .collect::<Result<_, _>>()?,
        dim: phase.len(),
    })
}
