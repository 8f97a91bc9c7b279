use crate::exactpoly::{RatExpr, Var};
use crate::liealg::{LieAlgebraSpec, LieElement};
use crate::matrix::Matrix;

use super::element::{lambda, loop_vars, LoopElement};
use super::LoopError;

/// Values of a differential, one block per part `0..=n`.
pub type Covector = Vec<Vec<RatExpr>>;
/// Components of a vector field, one block per part `0..=n`.
pub type Field = Vec<Vec<RatExpr>>;

/// The tensors `P_0 .. P_{n+1}` at a base point.
///
/// The base point may be symbolic in the loop coordinates or a point of a
/// section written in chart coordinates; covectors are supplied by value.
#[derive(Clone, Debug)]
pub struct LoopPoisson {
    pub spec: LieAlgebraSpec,
    pub n: usize,
    pub vars: Vec<Vec<Var>>,
    pub point: LoopElement,
    adj: Vec<Matrix<RatExpr>>,
}

impl LoopPoisson {
    pub fn new(spec: &LieAlgebraSpec, point: LoopElement) -> LoopPoisson {
        let adj = point.parts.iter().map(|p| spec.adjoint_matrix(p)).collect();
        LoopPoisson {
            spec: spec.clone(),
            n: point.n,
            vars: loop_vars(spec, point.n),
            point,
            adj,
        }
    }

    pub fn adjoint(&self, j: usize) -> &Matrix<RatExpr> {
        &self.adj[j]
    }

    pub fn zero_field(&self) -> Field {
        vec![vec![RatExpr::zero(); self.spec.dim]; self.n + 1]
    }

    /// Partial derivatives with respect to the loop coordinates.
    pub fn differential(&self, f: &RatExpr) -> Covector {
        self.vars
            .iter()
            .map(|part| part.iter().map(|v| f.partial(*v)).collect())
            .collect()
    }

    /// `nabla_k F`: the gradient with respect to the part-`k` coordinates.
    pub fn gradient_part(&self, k: usize, f: &RatExpr) -> LieElement {
        self.spec.gradient(f, &self.vars[k])
    }

    fn check_k(&self, k: usize) -> Result<(), LoopError> {
        if k > self.n + 1 {
            Err(LoopError::TensorIndex { k, max: self.n + 1 })
        } else {
            Ok(())
        }
    }

    /// Block `(r, c)` of `P_k` as `(sign, index of A)`, if nonzero.
    fn block(&self, k: usize, r: usize, c: usize) -> Option<(bool, usize)> {
        let n = self.n;
        if k == 0 {
            return (r + c <= n).then_some((false, r + c));
        }
        if r == 0 || c == 0 {
            return None;
        }
        let kk = k - 1;
        if r <= kk && c <= kk {
            let i = r + c;
            (i > kk).then(|| (true, i - kk - 1))
        } else if r > kk && c > kk {
            let i = r + c - kk - 1;
            (i <= n).then_some((false, i))
        } else {
            None
        }
    }

    /// `P_k cov`.
    pub fn apply(&self, k: usize, cov: &Covector) -> Result<Field, LoopError> {
        self.check_k(k)?;
        let mut out = self.zero_field();
        for (r, row) in out.iter_mut().enumerate() {
            for c in 0..=self.n {
                let Some((plus, idx)) = self.block(k, r, c) else {
                    continue;
                };
                if cov[c].iter().all(|x| x.is_zero()) {
                    continue;
                }
                let v = self.adj[idx].mul_vec(&cov[c]);
                for (o, x) in row.iter_mut().zip(v) {
                    *o = if plus { &*o + &x } else { &*o - &x };
                }
            }
        }
        Ok(out)
    }

    /// `sum c_i P_{k_i} cov` for symbolic coefficients (e.g. `lambda`).
    pub fn apply_combo(&self, terms: &[(usize, RatExpr)], cov: &Covector) -> Result<Field, LoopError> {
        let mut out = self.zero_field();
        for (k, c) in terms {
            let f = self.apply(*k, cov)?;
            add_scaled(&mut out, &f, c);
        }
        Ok(out)
    }

    pub fn field(&self, k: usize, f: &RatExpr) -> Result<Field, LoopError> {
        self.apply(k, &self.differential(f))
    }

    pub fn field_combo(&self, terms: &[(usize, RatExpr)], f: &RatExpr) -> Result<Field, LoopError> {
        self.apply_combo(terms, &self.differential(f))
    }

    /// `{F, G}_k = dF . P_k dG`.
    pub fn bracket(&self, k: usize, f: &RatExpr, g: &RatExpr) -> Result<RatExpr, LoopError> {
        Ok(pair(&self.differential(f), &self.field(k, g)?))
    }

    pub fn bracket_combo(&self, terms: &[(usize, RatExpr)], f: &RatExpr, g: &RatExpr) -> Result<RatExpr, LoopError> {
        Ok(pair(&self.differential(f), &self.field_combo(terms, g)?))
    }

    /// Cyclic Jacobi sum for a combination of tensors.
    pub fn jacobiator(&self, terms: &[(usize, RatExpr)], f: &RatExpr, g: &RatExpr, h: &RatExpr) -> Result<RatExpr, LoopError> {
        let b = |x: &RatExpr, y: &RatExpr| self.bracket_combo(terms, x, y);
        Ok(b(f, &b(g, h)?)? + b(g, &b(h, f)?)? + b(h, &b(f, g)?)?)
    }

    /// Derivative of `f` along a field.
    pub fn lie_derivative(&self, field: &Field, f: &RatExpr) -> RatExpr {
        pair(&self.differential(f), field)
    }

    /// Commutator of vector fields, `[X, Y]^a = X(Y^a) - Y(X^a)`.
    pub fn field_commutator(&self, x: &Field, y: &Field) -> Field {
        let mut out = self.zero_field();
        for (p, part) in out.iter_mut().enumerate() {
            for (a, o) in part.iter_mut().enumerate() {
                *o = self.lie_derivative(x, &y[p][a]) - self.lie_derivative(y, &x[p][a]);
            }
        }
        out
    }

    /// Certifies `sum_j lambda^(n-j) ((lambda P_{k+1} - P_k) dF)_j = [X_lambda, nabla_k F]`
    /// coordinatewise and returns `nabla_k F`.
    pub fn lax_form_of(&self, k: usize, f: &RatExpr) -> Result<LieElement, LoopError> {
        let lam = RatExpr::var(lambda());
        let terms = [(k + 1, lam), (k, RatExpr::int(-1))];
        let field = self.field_combo(&terms, f)?;
        let lhs = LoopElement {
            n: self.n,
            parts: field,
        }
        .lambda_coords();
        let grad = self.gradient_part(k, f);
        let rhs = self.spec.bracket(&self.point.lambda_coords(), &grad);
        for (a, (l, r)) in lhs.iter().zip(&rhs).enumerate() {
            let res = l - r;
            if !res.is_zero() {
                return Err(LoopError::Mismatch {
                    coordinate: self.spec.coords[a].clone(),
                    residual: res.to_text(),
                });
            }
        }
        Ok(grad)
    }
}

/// `sum_parts cov . field`.
pub fn pair(cov: &Covector, field: &Field) -> RatExpr {
    let mut acc = RatExpr::zero();
    for (c, f) in cov.iter().zip(field) {
        for (a, b) in c.iter().zip(f) {
            if !a.is_zero() && !b.is_zero() {
                acc = acc + a * b;
            }
        }
    }
    acc
}

pub fn add_scaled(out: &mut Field, f: &Field, c: &RatExpr) {
    for (o, x) in out.iter_mut().zip(f) {
        for (a, b) in o.iter_mut().zip(x) {
            if !b.is_zero() {
                *a = &*a + &(b * c);
            }
        }
    }
}

pub fn field_is_zero(f: &Field) -> bool {
    f.iter().all(|p| p.iter().all(|x| x.is_zero()))
}

/// First nonzero component of `a - b`, as `(part, coord, residual)`.
pub fn field_difference(a: &Field, b: &Field) -> Option<(usize, usize, RatExpr)> {
    for (p, (x, y)) in a.iter().zip(b).enumerate() {
        for (i, (u, v)) in x.iter().zip(y).enumerate() {
            let d = u - v;
            if !d.is_zero() {
                return Some((p, i, d));
            }
        }
    }
    None
}
