use std::collections::BTreeMap;

use crate::exactpoly::{collect_lambda, Monomial, Poly, RatExpr, Var};
use crate::liealg::{LieAlgebraSpec, LieElement};
use crate::matrix::Matrix;

use super::LoopError;

/// The spectral parameter.
pub fn lambda() -> Var {
    Var::new("lambda")
}

/// Coordinate variables `{coord}{j}` of the parts `0..=n`.
pub fn loop_vars(spec: &LieAlgebraSpec, n: usize) -> Vec<Vec<Var>> {
    (0..=n).map(|j| spec.coord_vars(&j.to_string())).collect()
}

/// `X_lambda = sum_j X_j lambda^(n-j)`, stored by parts.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopElement {
    pub n: usize,
    pub parts: Vec<LieElement>,
}

impl LoopElement {
    /// Every part symbolic, including `x_0`.
    pub fn generic(spec: &LieAlgebraSpec, n: usize) -> LoopElement {
        LoopElement {
            n,
            parts: (0..=n).map(|j| spec.generic(&j.to_string())).collect(),
        }
    }

    /// Symbolic parts `1..=n` with a fixed leading part.
    pub fn with_x0(spec: &LieAlgebraSpec, n: usize, x0: LieElement) -> LoopElement {
        let mut parts = vec![x0];
        parts.extend((1..=n).map(|j| spec.generic(&j.to_string())));
        LoopElement { n, parts }
    }

    pub fn zero(spec: &LieAlgebraSpec, n: usize) -> LoopElement {
        LoopElement {
            n,
            parts: vec![vec![RatExpr::zero(); spec.dim]; n + 1],
        }
    }

    /// Coordinates of `X_lambda` as polynomials in `lambda`.
    pub fn lambda_coords(&self) -> LieElement {
        let d = self.parts[0].len();
        let lam = lambda();
        (0..d)
            .map(|a| {
                let mut acc = RatExpr::zero();
                for (j, part) in self.parts.iter().enumerate() {
                    let p = Poly::term(
                        num_traits::One::one(),
                        Monomial::var_pow(lam, (self.n - j) as u32),
                    );
                    acc = acc + &part[a] * &RatExpr::from(p);
                }
                acc
            })
            .collect()
    }

    pub fn lambda_matrix(&self, spec: &LieAlgebraSpec) -> Matrix<RatExpr> {
        spec.element(&self.lambda_coords())
    }

    pub fn substitute(&self, b: &BTreeMap<Var, RatExpr>) -> Result<LoopElement, LoopError> {
        let parts = self
            .parts
            .iter()
            .map(|p| p.iter().map(|e| e.substitute(b)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LoopElement { n: self.n, parts })
    }
}

/// The truncated bracket: part `j` is `sum_{a+b=n+j} [X_a, Y_b]`.
pub fn bracket_n(spec: &LieAlgebraSpec, x: &LoopElement, y: &LoopElement) -> LoopElement {
    let n = x.n;
    assert_eq!(n, y.n);
    let mut parts = vec![vec![RatExpr::zero(); spec.dim]; n + 1];
    for (j, part) in parts.iter_mut().enumerate() {
        for a in j..=n {
            let b = n + j - a;
            let br = spec.bracket(&x.parts[a], &y.parts[b]);
            for (o, e) in part.iter_mut().zip(br) {
                *o = &*o + &e;
            }
        }
    }
    LoopElement { n, parts }
}

/// `eta(X, Y) = sum_i form(X_i, Y_{n-i})`.
pub fn eta(spec: &LieAlgebraSpec, x: &LoopElement, y: &LoopElement) -> RatExpr {
    let n = x.n;
    let mut acc = RatExpr::zero();
    for i in 0..=n {
        acc = acc + spec.form(&x.parts[i], &y.parts[n - i]);
    }
    acc
}

/// `n d - n h - 2 h`.
pub fn expected_dimension(spec: &LieAlgebraSpec, n: usize) -> i64 {
    let (n, d, h) = (n as i64, spec.dim as i64, spec.rank as i64);
    n * d - n * h - 2 * h
}

/// `phi[i][j]`, the coefficient of `lambda^((m_i+1)n - j)` in the `i`-th
/// invariant of `X_lambda` (0-based `i`). With a fixed `x_0` these are the
/// functions `psi_{i+1, j}` for `j >= 1`.
#[derive(Clone, Debug)]
pub struct CasimirFamily {
    pub n: usize,
    pub exponents: Vec<u32>,
    pub phi: Vec<Vec<RatExpr>>,
}

impl CasimirFamily {
    /// Top index `(m_i + 1) n` of family `i`.
    pub fn top(&self, i: usize) -> usize {
        (self.exponents[i] as usize + 1) * self.n
    }

    /// `m_i n`.
    pub fn mn(&self, i: usize) -> usize {
        self.exponents[i] as usize * self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &RatExpr {
        &self.phi[i][j]
    }

    pub fn families(&self) -> usize {
        self.phi.len()
    }
}

pub fn casimir_family(spec: &LieAlgebraSpec, x: &LoopElement) -> Result<CasimirFamily, LoopError> {
    let ys = x.lambda_coords();
    let plain = spec.coord_vars("");
    let b: BTreeMap<Var, RatExpr> = plain.into_iter().zip(ys).collect();
    let mut phi = Vec::new();
    for (i, f) in spec.invariant_polynomials().into_iter().enumerate() {
        let top = (spec.exponents[i] as usize + 1) * x.n;
        let g = RatExpr::from(f).substitute(&b)?.into_poly()?;
        let cs = collect_lambda(&g, lambda(), top as u32)?;
        phi.push(cs.into_iter().map(RatExpr::from).collect());
    }
    Ok(CasimirFamily {
        n: x.n,
        exponents: spec.exponents.clone(),
        phi,
    })
}
