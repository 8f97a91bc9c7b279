use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use crate::cases::NumericDef;
use crate::exactpoly::{Poly, RatExpr, Var};
use crate::isomono::{Derivation, Orientation};
use crate::liealg::LieAlgebraSpec;
use crate::looppoisson::lambda;
use crate::matrix::{rational_to_f64, Matrix};

use super::compile::{compile_all, compile_flow, layout_index, CompiledExpr, HamiltonianField};
use super::NumericError;

/// One flow of the promoted system, compiled.
#[derive(Clone, Debug)]
pub struct CompiledFlow {
    pub time: Var,
    pub field: HamiltonianField,
    pub a: Vec<CompiledExpr>,
    pub da_dlambda: Vec<CompiledExpr>,
    /// `dL/dt_i` at fixed phase point.
    pub dl_dt: Vec<CompiledExpr>,
    /// The same flow with every parameter frozen.
    pub auto_field: HamiltonianField,
    pub auto_a: Vec<CompiledExpr>,
    pub auto_da_dlambda: Vec<CompiledExpr>,
}

/// A derived case ready for floating point evaluation. The layout is the
/// phase variables, then the times, then every parameter, then `lambda`.
#[derive(Clone, Debug)]
pub struct NumericSystem {
    pub case: String,
    pub spec: LieAlgebraSpec,
    pub orientation: Orientation,
    pub layout: Vec<Var>,
    pub dim: usize,
    pub times: Vec<Var>,
    pub parameters: BTreeMap<String, f64>,
    pub l: u32,
    pub l_coords: Vec<CompiledExpr>,
    /// `dL/dv` per phase variable.
    pub dl_dv: Vec<Vec<CompiledExpr>>,
    pub auto_x: Vec<CompiledExpr>,
    pub auto_dx_dv: Vec<Vec<CompiledExpr>>,
    pub flows: Vec<CompiledFlow>,
    /// `lambda`-degree bound for the curvature identity.
    pub lambda_degree: u32,
    basis: Vec<Matrix<Complex64>>,
    structure: Vec<Vec<Vec<(usize, f64)>>>,
    lambda_slot: usize,
    base_env: Vec<Complex64>,
}

fn lambda_degree(xs: &[RatExpr]) -> u32 {
    let lam = lambda();
    xs.iter().map(|e| e.num().degree_in(lam)).max().unwrap_or(0)
}

impl NumericSystem {
    pub fn new(d: &Derivation, num: &NumericDef, orientation: Orientation) -> Result<NumericSystem, NumericError> {
        let phase: Vec<Var> = d.pairs.iter().flat_map(|(q, p)| [*q, *p]).collect();
        let lam = lambda();
        let mut seen: BTreeSet<Var> = BTreeSet::new();
        let mut note = |e: &RatExpr| seen.extend(e.vars());
        d.pair.l_coords.iter().for_each(&mut note);
        d.autonomous.0.iter().for_each(&mut note);
        for f in &d.pair.flows {
            f.a.iter().for_each(&mut note);
        }
        for a in &d.autonomous.1 {
            a.iter().for_each(&mut note);
        }
        for h in d.hamiltonians.iter().map(|h| &h.h).chain(&d.autonomous.2) {
            seen.extend(h.vars());
        }
        let fixed: BTreeSet<Var> = phase.iter().chain(&d.times).copied().chain([lam]).collect();
        let params: Vec<Var> = seen.into_iter().filter(|v| !fixed.contains(v)).collect();
        let mut values = BTreeMap::new();
        for p in &params {
            let v = num
                .parameters
                .get(p.name())
                .copied()
                .ok_or_else(|| NumericError::Unbound(format!("no numeric value for parameter {p}")))?;
            values.insert(p.name().to_string(), v);
        }
        let mut layout = phase.clone();
        layout.extend(&d.times);
        layout.extend(&params);
        layout.push(lam);
        let idx = layout_index(&layout);
        let mut base_env = vec![Complex64::new(0.0, 0.0); layout.len()];
        for p in &params {
            base_env[idx[p]] = Complex64::new(values[p.name()], 0.0);
        }

        let dl_dv = phase
            .iter()
            .map(|v| {
                let d: Vec<RatExpr> = d.pair.l_coords.iter().map(|e| e.partial(*v)).collect();
                compile_all(&d, &idx)
            })
            .collect::<Result<_, _>>()?;
        let auto_dx_dv = phase
            .iter()
            .map(|v| {
                let d: Vec<RatExpr> = d.autonomous.0.iter().map(|e| e.partial(*v)).collect();
                compile_all(&d, &idx)
            })
            .collect::<Result<_, _>>()?;
        let mut flows = Vec::new();
        let mut deg = 0;
        for (i, f) in d.pair.flows.iter().enumerate() {
            let da: Vec<RatExpr> = f.a.iter().map(|e| e.partial(lam)).collect();
            let dt: Vec<RatExpr> = d.pair.l_coords.iter().map(|e| e.partial(f.time)).collect();
            let auto_a = &d.autonomous.1[i];
            let auto_da: Vec<RatExpr> = auto_a.iter().map(|e| e.partial(lam)).collect();
            deg = deg.max(lambda_degree(&f.a) + lambda_degree(&d.pair.l_coords));
            deg = deg.max(lambda_degree(auto_a) + lambda_degree(&d.autonomous.0));
            flows.push(CompiledFlow {
                time: f.time,
                field: compile_flow(&d.hamiltonians[i].h, &d.pairs, &layout)?,
                a: compile_all(&f.a, &idx)?,
                da_dlambda: compile_all(&da, &idx)?,
                dl_dt: compile_all(&dt, &idx)?,
                auto_field: compile_flow(&d.autonomous.2[i], &d.pairs, &layout)?,
                auto_a: compile_all(auto_a, &idx)?,
                auto_da_dlambda: compile_all(&auto_da, &idx)?,
            });
        }
        let spec = d.spec.clone();
        let basis = spec
            .basis
            .iter()
            .map(|b| b.map(|x| Complex64::new(rational_to_f64(x), 0.0)))
            .collect();
        let structure = spec
            .structure
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cs| {
                        cs.iter()
                            .enumerate()
                            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                            .map(|(e, c)| (e, rational_to_f64(c)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(NumericSystem {
            case: d.case.clone(),
            orientation,
            layout,
            dim: phase.len(),
            times: d.times.clone(),
            parameters: values,
            l: d.pair.l,
            l_coords: compile_all(&d.pair.l_coords, &idx)?,
            dl_dv,
            auto_x: compile_all(&d.autonomous.0, &idx)?,
            auto_dx_dv,
            flows,
            lambda_degree: deg,
            basis,
            structure,
            lambda_slot: idx[&lam],
            base_env,
            spec,
        })
    }

    /// Environment with the parameters filled in and every time at zero.
    pub fn env(&self, state: &[Complex64], times: &[f64], lam: f64) -> Vec<Complex64> {
        let mut env = self.base_env.clone();
        env[..self.dim].copy_from_slice(state);
        for (i, t) in times.iter().enumerate() {
            env[self.dim + i] = Complex64::new(*t, 0.0);
        }
        env[self.lambda_slot] = Complex64::new(lam, 0.0);
        env
    }

    pub fn set_lambda(&self, env: &mut [Complex64], lam: f64) {
        env[self.lambda_slot] = Complex64::new(lam, 0.0);
    }

    pub fn eval(xs: &[CompiledExpr], env: &[Complex64]) -> Vec<Complex64> {
        xs.iter().map(|x| x.eval(env)).collect()
    }

    pub fn bracket(&self, x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
        for (a, xa) in x.iter().enumerate() {
            if *xa == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                for (e, c) in &self.structure[a][b] {
                    out[*e] += xa * yb * *c;
                }
            }
        }
        out
    }

    pub fn matrix(&self, x: &[Complex64]) -> Matrix<Complex64> {
        let n = self.spec.rep_dim;
        let mut m = Matrix::zeros(n, n);
        for (c, b) in x.iter().zip(&self.basis) {
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += c * b[(i, j)];
                }
            }
        }
        m
    }

    /// Largest entry modulus of the representation matrix.
    pub fn matrix_norm(&self, x: &[Complex64]) -> f64 {
        self.matrix(x).entries().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Default samples `-2..=2`, without `0` when `L` has a pole there,
    /// extended until they certify an identity of degree `lambda_degree`.
    pub fn lambda_samples(&self, requested: &[f64]) -> Vec<f64> {
        let mut s: Vec<f64> = requested.iter().copied().filter(|x| self.l == 0 || *x != 0.0).collect();
        let need = (self.lambda_degree + 1) as usize;
        let mut k = 3.0;
        while s.len() < need {
            for c in [k, -k] {
                if !s.contains(&c) {
                    s.push(c);
                }
            }
            k += 1.0;
        }
        s
    }

    pub fn phase_poly_value(&self, p: &Poly, env: &[Complex64]) -> Result<Complex64, NumericError> {
        let c = super::compile::CompiledPoly::compile(p, &layout_index(&self.layout))?;
        Ok(c.eval(env))
    }
}
