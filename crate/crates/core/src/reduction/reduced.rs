use std::collections::BTreeMap;

use crate::exactpoly::{RatExpr, Var};
use crate::liealg::{LieAlgebraSpec, LieElement};
use crate::looppoisson::suites::g_function;
use crate::looppoisson::{add_scaled, field_difference, lambda, pair, CasimirFamily, Covector, Field, LoopElement, LoopPoisson};
use crate::matrix::Matrix;

use super::{Chart, Distribution, ReductionError};

/// The Marsden-Ratiu quotient in chart coordinates.
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    pub spec: LieAlgebraSpec,
    pub n: usize,
    pub chart: Chart,
    pub dist: Distribution,
    /// `X~`: the section point in chart coordinates.
    pub section: LoopElement,
    /// The tensors at the section point.
    pub lp: LoopPoisson,
    /// `psi~_{i,j}`.
    pub psi: CasimirFamily,
    /// `D`-annihilating lift of `d a` for each chart coordinate `a`.
    pub covectors: Vec<Covector>,
    /// The generators of `D` on the section.
    pub generators: Vec<Field>,
    tensors: Vec<Matrix<RatExpr>>,
}

/// Solves `m x = b` by Cramer's rule. The determinant must be a single term.
pub fn solve_single_term(m: &Matrix<RatExpr>, b: &[RatExpr]) -> Result<Vec<RatExpr>, ReductionError> {
    let det = m.det_small();
    let inv = det
        .inv()
        .map_err(|_| ReductionError::DecompositionSingular(format!("determinant {det}")))?;
    Ok(m.adjugate()
        .mul_vec(b)
        .into_iter()
        .map(|x| &x * &inv)
        .collect())
}

fn lam() -> RatExpr {
    RatExpr::var(lambda())
}

fn pencil(k: usize) -> Vec<(usize, RatExpr)> {
    vec![(k + 1, lam()), (k, RatExpr::int(-1))]
}

/// Builds the reduced system. The chart should have passed [`super::verify_chart`].
pub fn reduce(dist: &Distribution, chart: &Chart) -> Result<ReducedSystem, ReductionError> {
    let spec = dist.lp.spec.clone();
    let n = dist.lp.n;
    let inv = &chart.inverse;
    let section = dist.lp.point.substitute(inv)?;
    let lp = LoopPoisson::new(&spec, section.clone());
    let generators: Vec<Field> = dist
        .generators
        .iter()
        .map(|g| {
            g.iter()
                .map(|p| p.iter().map(|x| x.substitute(inv)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;

    let covectors: Vec<Covector> = match &chart.invariants {
        Some(fs) => fs
            .iter()
            .map(|f| {
                dist.lp
                    .differential(f)
                    .into_iter()
                    .enumerate()
                    .map(|(p, part)| {
                        if p == 0 {
                            Ok(vec![RatExpr::zero(); spec.dim])
                        } else {
                            part.iter().map(|x| x.substitute(inv)).collect::<Result<Vec<_>, _>>()
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?,
        None => {
            let h = generators.len();
            let kt = Matrix::from_fn(h, h, |i, s| {
                let (p, a, _) = &chart.slice[s];
                generators[i][*p][*a].clone()
            });
            chart
                .carriers
                .iter()
                .map(|&(p, a)| {
                    let rhs: Vec<RatExpr> = generators.iter().map(|g| -&g[p][a]).collect();
                    let mu = solve_single_term(&kt, &rhs)?;
                    let mut w = lp.zero_field();
                    w[p][a] = RatExpr::one();
                    for ((sp, sa, _), m) in chart.slice.iter().zip(mu) {
                        w[*sp][*sa] = m;
                    }
                    Ok(w)
                })
                .collect::<Result<_, ReductionError>>()?
        }
    };

    let phi = dist
        .family
        .phi
        .iter()
        .map(|row| {
            row.iter()
                .map(|f| {
                    let g = f.substitute(inv)?;
                    g.check_units(&chart.units)?;
                    Ok(g)
                })
                .collect::<Result<Vec<_>, ReductionError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let psi = CasimirFamily {
        n,
        exponents: dist.family.exponents.clone(),
        phi,
    };

    let m = chart.coords.len();
    let mut tensors = Vec::new();
    for k in 1..=n + 1 {
        let images: Vec<Field> = covectors
            .iter()
            .map(|w| lp.apply(k, w))
            .collect::<Result<_, _>>()?;
        let mut t = Matrix::zeros(m, m);
        for a in 0..m {
            for b in 0..m {
                let e = pair(&covectors[a], &images[b]);
                e.check_units(&chart.units)?;
                t[(a, b)] = e;
            }
        }
        tensors.push(t);
    }
    Ok(ReducedSystem {
        spec,
        n,
        chart: chart.clone(),
        dist: dist.clone(),
        section,
        lp,
        psi,
        covectors,
        generators,
        tensors,
    })
}

impl ReducedSystem {
    pub fn coords(&self) -> &[Var] {
        &self.chart.coords
    }

    /// `P~_k` for `k` in `1..=n+1`.
    pub fn tensor(&self, k: usize) -> &Matrix<RatExpr> {
        &self.tensors[k - 1]
    }

    pub fn psi(&self, i: usize, j: usize) -> &RatExpr {
        self.psi.get(i, j)
    }

    pub fn gradient(&self, f: &RatExpr) -> Vec<RatExpr> {
        self.coords().iter().map(|c| f.partial(*c)).collect()
    }

    /// `D`-annihilating covector at the section with the given restriction.
    pub fn lift(&self, f: &RatExpr) -> Covector {
        let mut out = self.lp.zero_field();
        for (g, w) in self.gradient(f).iter().zip(&self.covectors) {
            if !g.is_zero() {
                add_scaled(&mut out, w, g);
            }
        }
        out
    }

    /// `sum c_k P~_k dF` in chart coordinates.
    pub fn field(&self, terms: &[(usize, RatExpr)], f: &RatExpr) -> Vec<RatExpr> {
        let g = self.gradient(f);
        let m = g.len();
        let mut out = vec![RatExpr::zero(); m];
        for (k, c) in terms {
            let v = self.tensor(*k).mul_vec(&g);
            for (o, x) in out.iter_mut().zip(v) {
                if !x.is_zero() {
                    *o = &*o + &(&x * c);
                }
            }
        }
        out
    }

    pub fn bracket(&self, terms: &[(usize, RatExpr)], f: &RatExpr, g: &RatExpr) -> RatExpr {
        let v = self.field(terms, g);
        self.lie_derivative(&v, f)
    }

    pub fn lie_derivative(&self, v: &[RatExpr], f: &RatExpr) -> RatExpr {
        let mut acc = RatExpr::zero();
        for (c, x) in self.coords().iter().zip(v) {
            if !x.is_zero() {
                acc = acc + &f.partial(*c) * x;
            }
        }
        acc
    }

    pub fn field_commutator(&self, x: &[RatExpr], y: &[RatExpr]) -> Vec<RatExpr> {
        (0..x.len())
            .map(|a| self.lie_derivative(x, &y[a]) - self.lie_derivative(y, &x[a]))
            .collect()
    }

    /// Velocity of the section point for a chart velocity `v`.
    pub fn section_velocity(&self, v: &[RatExpr]) -> Field {
        let mut out = self.lp.zero_field();
        for (p, part) in out.iter_mut().enumerate().skip(1) {
            for (a, o) in part.iter_mut().enumerate() {
                *o = self.lie_derivative(v, &self.section.parts[p][a]);
            }
        }
        out
    }

    /// `nabla_1 psi_{i,1}` on the section.
    pub fn nabla1_psi1(&self, i: usize) -> Result<LieElement, ReductionError> {
        let g = self.dist.lp.gradient_part(1, self.dist.family.get(i, 1));
        Ok(g.iter()
            .map(|x| x.substitute(&self.chart.inverse))
            .collect::<Result<_, _>>()?)
    }

    /// The section point `X~_lambda` as a matrix.
    pub fn lax_matrix(&self) -> Matrix<RatExpr> {
        self.section.lambda_matrix(&self.spec)
    }

    /// Values of the chart coordinates as a binding map (identity).
    pub fn identity_bindings(&self) -> BTreeMap<Var, RatExpr> {
        self.coords().iter().map(|c| (*c, RatExpr::var(*c))).collect()
    }
}

/// Decomposition of `(lambda P_{k+1} - P_k) dF` into a tangent part and `D`.
#[derive(Clone, Debug)]
pub struct BetaCorrection {
    pub beta: Vec<RatExpr>,
    /// `nabla_k F - sum beta_i nabla_1 psi_{i,1}` as `lambda`-polynomial coordinates.
    pub corrected: LieElement,
    /// The reduced field `(lambda P~_{k+1} - P~_k) dF~`.
    pub velocity: Vec<RatExpr>,
}

/// Solves for `beta` and certifies that the reduced flow of `F~` is
/// `dX~/dt = [X~, corrected]`, both through the chart and coordinatewise.
pub fn beta_corrections(red: &ReducedSystem, k: usize, f: &RatExpr) -> Result<BetaCorrection, ReductionError> {
    let h = red.generators.len();
    let w = red.lift(f);
    let raw = red.lp.apply_combo(&pencil(k), &w)?;
    let km = Matrix::from_fn(h, h, |s, i| {
        let (p, a, _) = &red.chart.slice[s];
        red.generators[i][*p][*a].clone()
    });
    let rhs: Vec<RatExpr> = red.chart.slice.iter().map(|(p, a, _)| -&raw[*p][*a]).collect();
    let beta = solve_single_term(&km, &rhs)?;
    let mut tangent = raw;
    for (g, b) in red.generators.iter().zip(&beta) {
        add_scaled(&mut tangent, g, b);
    }
    let velocity = red.field(&pencil(k), f);
    let through_chart = red.section_velocity(&velocity);
    if let Some((p, a, r)) = field_difference(&tangent, &through_chart) {
        return Err(ReductionError::Mismatch(format!(
            "tangent field vs chart velocity at {}{p}: {r}",
            red.spec.coords[a]
        )));
    }
    let mut corrected = red.spec.gradient_from_differential(&w[k]);
    for (i, b) in beta.iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let g = red.nabla1_psi1(i)?;
        for (c, x) in corrected.iter_mut().zip(g) {
            *c = &*c - &(&x * b);
        }
    }
    let lhs = LoopElement { n: red.n, parts: tangent }.lambda_coords();
    let rhs = red.spec.bracket(&red.section.lambda_coords(), &corrected);
    for (a, (l, r)) in lhs.iter().zip(&rhs).enumerate() {
        let d = l - r;
        if !d.is_zero() {
            return Err(ReductionError::Mismatch(format!(
                "Lax form at {}: {d}",
                red.spec.coords[a]
            )));
        }
    }
    Ok(BetaCorrection {
        beta,
        corrected,
        velocity,
    })
}

/// Lax data for the Hamiltonian `psi~_{i,big_k}` of `P~_{k+1}`: returns `A`
/// with `dX~/dt = [A, X~]` along `P~_{k+1} d psi~_{i,big_k}`, together with
/// the reduced field.
pub fn hamiltonian_lax(red: &ReducedSystem, i: usize, k: usize, big_k: usize) -> Result<(LieElement, Vec<RatExpr>), ReductionError> {
    if big_k <= k || big_k > red.psi.top(i) {
        return Err(ReductionError::Mismatch(format!("no Lax data for psi_{},{big_k} under P_{}", i + 1, k + 1)));
    }
    let j = big_k - k;
    let g = g_function(&red.psi, i, 1, j);
    let bc = beta_corrections(red, 1, &g)?;
    let field = red.field(&[(k + 1, RatExpr::one())], red.psi(i, big_k));
    for (a, (x, y)) in field.iter().zip(&bc.velocity).enumerate() {
        let d = x - y;
        if !d.is_zero() {
            return Err(ReductionError::Mismatch(format!(
                "Hamiltonian field differs from the pencil field at {}: {d}",
                red.coords()[a]
            )));
        }
    }
    Ok((bc.corrected.into_iter().map(|x| -x).collect(), field))
}
