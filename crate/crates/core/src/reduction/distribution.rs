use crate::exactpoly::RatExpr;
use crate::liealg::{LieAlgebraSpec, LieElement};
use crate::looppoisson::{casimir_family, field_difference, field_is_zero, CasimirFamily, Field, LoopElement, LoopPoisson};
use crate::report::Check;

use super::ReductionError;

/// The fields `P_1 d psi_{i,1}` on `g_n^0`, i.e. `dx_k/dt = -A_k d psi_{i,1}/dx_1`.
#[derive(Clone, Debug)]
pub struct Distribution {
    pub lp: LoopPoisson,
    pub family: CasimirFamily,
    pub generators: Vec<Field>,
}

impl Distribution {
    pub fn new(spec: &LieAlgebraSpec, n: usize, x0: &LieElement) -> Result<Distribution, ReductionError> {
        let x = LoopElement::with_x0(spec, n, x0.clone());
        let family = casimir_family(spec, &x)?;
        let lp = LoopPoisson::new(spec, x);
        let generators = (0..family.families())
            .map(|i| lp.field(1, family.get(i, 1)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Distribution { lp, family, generators })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Every component is a linear form in the loop coordinates.
    pub fn is_linear(&self) -> bool {
        self.generators.iter().flatten().flatten().all(|c| {
            c.is_poly() && c.num().terms().all(|(m, _)| m.degree() == 1)
        })
    }

    pub fn annihilates(&self, f: &RatExpr) -> bool {
        self.generators
            .iter()
            .all(|g| self.lp.lie_derivative(g, f).is_zero())
    }

    /// Linearity, pairwise commutation, invariance of every `psi_{i,j}` and
    /// the coordinate form `-A_k d psi_{i,1}/dx_1`.
    pub fn suite(&self) -> Vec<Check> {
        let mut out = Vec::new();
        out.push(Check::from_bool("D linear", self.is_linear(), || {
            "a generator has a nonlinear component".into()
        }));
        let mut bad = Vec::new();
        for a in 0..self.rank() {
            for b in a + 1..self.rank() {
                let c = self.lp.field_commutator(&self.generators[a], &self.generators[b]);
                if !field_is_zero(&c) {
                    bad.push(format!("({}, {})", a + 1, b + 1));
                }
            }
        }
        out.push(Check::from_bool("D commuting", bad.is_empty(), || bad.join(", ")));
        let mut bad = Vec::new();
        for i in 0..self.family.families() {
            for j in 1..=self.family.top(i) {
                if !self.annihilates(self.family.get(i, j)) {
                    bad.push(format!("psi_{},{}", i + 1, j));
                }
            }
        }
        out.push(Check::from_bool("D preserves psi", bad.is_empty(), || bad.join(", ")));
        let mut bad = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            let d1: Vec<RatExpr> = self.lp.vars[1]
                .iter()
                .map(|v| self.family.get(i, 1).partial(*v))
                .collect();
            let mut expect = self.lp.zero_field();
            for (k, part) in expect.iter_mut().enumerate().skip(1) {
                *part = self.lp.adjoint(k).mul_vec(&d1).into_iter().map(|x| -x).collect();
            }
            if let Some((p, a, r)) = field_difference(g, &expect) {
                bad.push(format!("generator {}: {}{}: {}", i + 1, self.lp.spec.coords[a], p, r));
            }
        }
        out.push(Check::from_bool("D coordinate form", bad.is_empty(), || bad.join("; ")));
        out
    }
}
