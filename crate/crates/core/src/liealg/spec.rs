use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{LieElement, LieError};
use crate::exactpoly::{parse_rational, rat, Poly, RatExpr, Rational, Var};
use crate::matrix::Matrix;

/// Which coefficient of `det(mu I - X)` gives an invariant, and its sign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantNorm {
    pub mu_power: usize,
    pub scale: String,
}

/// Serialized form of an algebra; all numbers are rational strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieAlgebraDef {
    pub name: String,
    pub dim: usize,
    pub rank: usize,
    pub exponents: Vec<u32>,
    pub rep_dim: usize,
    pub coords: Vec<String>,
    pub basis: Vec<Vec<Vec<String>>>,
    pub form_scale: String,
    pub invariants: Vec<InvariantNorm>,
}

#[derive(Clone, Debug)]
pub struct LieAlgebraSpec {
    pub name: String,
    pub dim: usize,
    pub rank: usize,
    pub exponents: Vec<u32>,
    pub rep_dim: usize,
    pub coords: Vec<String>,
    pub basis: Vec<Matrix<Rational>>,
    /// `eta(X, Y) = form_scale * Tr(XY)`.
    pub form_scale: Rational,
    pub gram: Matrix<Rational>,
    pub gram_inv: Matrix<Rational>,
    /// `structure[a][b][e]`: coefficient of basis `e` in `[B_a, B_b]`.
    pub structure: Vec<Vec<Vec<Rational>>>,
    /// `adj[a]` with `A(X) = sum_a x_a adj[a]`.
    pub adj: Vec<Matrix<Rational>>,
    pub invariants: Vec<(usize, Rational)>,
    def: LieAlgebraDef,
}

fn qmat(rows: &[&[i64]]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect())
        .collect()
}

impl LieAlgebraSpec {
    /// `sl(2)` with `X = [[u, v], [w, -u]]`.
    pub fn sl2() -> LieAlgebraSpec {
        let def = LieAlgebraDef {
            name: "sl2".into(),
            dim: 3,
            rank: 1,
            exponents: vec![1],
            rep_dim: 2,
            coords: vec!["u".into(), "v".into(), "w".into()],
            basis: vec![
                qmat(&[&[1, 0], &[0, -1]]),
                qmat(&[&[0, 1], &[0, 0]]),
                qmat(&[&[0, 0], &[1, 0]]),
            ],
            form_scale: "1".into(),
            invariants: vec![InvariantNorm {
                mu_power: 0,
                scale: "-1".into(),
            }],
        };
        LieAlgebraSpec::from_def(def).expect("sl2 definition")
    }

    /// `so(5)` in the representation
    /// `[[p,q,r,s,0],[t,u,v,0,s],[w,x,0,v,-r],[y,0,x,-u,q],[0,y,-w,t,-p]]`.
    pub fn so5() -> LieAlgebraSpec {
        let names = ["p", "q", "r", "s", "t", "u", "v", "w", "x", "y"];
        // (row, col, sign) positions of each coordinate
        let pos: [&[(usize, usize, i64)]; 10] = [
            &[(0, 0, 1), (4, 4, -1)],
            &[(0, 1, 1), (3, 4, 1)],
            &[(0, 2, 1), (2, 4, -1)],
            &[(0, 3, 1), (1, 4, 1)],
            &[(1, 0, 1), (4, 3, 1)],
            &[(1, 1, 1), (3, 3, -1)],
            &[(1, 2, 1), (2, 3, 1)],
            &[(2, 0, 1), (4, 2, -1)],
            &[(2, 1, 1), (3, 2, 1)],
            &[(3, 0, 1), (4, 1, 1)],
        ];
        let basis = pos
            .iter()
            .map(|ps| {
                let mut m = vec![vec![0i64; 5]; 5];
                for &(r, c, s) in ps.iter() {
                    m[r][c] = s;
                }
                m.iter()
                    .map(|r| r.iter().map(|x| x.to_string()).collect())
                    .collect()
            })
            .collect();
        let def = LieAlgebraDef {
            name: "so5".into(),
            dim: 10,
            rank: 2,
            exponents: vec![1, 3],
            rep_dim: 5,
            coords: names.iter().map(|s| s.to_string()).collect(),
            basis,
            form_scale: "1/2".into(),
            invariants: vec![
                InvariantNorm {
                    mu_power: 3,
                    scale: "1".into(),
                },
                InvariantNorm {
                    mu_power: 1,
                    scale: "1".into(),
                },
            ],
        };
        LieAlgebraSpec::from_def(def).expect("so5 definition")
    }

    pub fn builtin(name: &str) -> Result<LieAlgebraSpec, LieError> {
        match name {
            "sl2" => Ok(LieAlgebraSpec::sl2()),
            "so5" => Ok(LieAlgebraSpec::so5()),
            _ => Err(LieError::UnknownAlgebra(name.to_string())),
        }
    }

    pub fn def(&self) -> &LieAlgebraDef {
        &self.def
    }

    /// Validates a definition: shapes, nondegenerate form, closure.
    pub fn from_def(def: LieAlgebraDef) -> Result<LieAlgebraSpec, LieError> {
        let bad = |m: String| LieError::BadDefinition(m);
        let d = def.dim;
        let nrep = def.rep_dim;
        if def.basis.len() != d || def.coords.len() != d {
            return Err(bad(format!("expected {d} basis matrices and coordinates")));
        }
        if def.exponents.len() != def.rank || def.invariants.len() != def.rank {
            return Err(bad("rank, exponents and invariants disagree".into()));
        }
        let mut basis = Vec::with_capacity(d);
        for b in &def.basis {
            if b.len() != nrep || b.iter().any(|r| r.len() != nrep) {
                return Err(bad(format!("basis matrices must be {nrep}x{nrep}")));
            }
            let rows = b
                .iter()
                .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            basis.push(Matrix::from_rows(rows));
        }
        let form_scale = parse_rational(&def.form_scale)?;
        let gram = Matrix::from_fn(d, d, |a, b| &form_scale * basis[a].mul(&basis[b]).trace());
        let gram_inv = gram
            .inverse()
            .ok_or_else(|| LieError::DegenerateForm(def.name.clone()))?;
        let mut spec = LieAlgebraSpec {
            name: def.name.clone(),
            dim: d,
            rank: def.rank,
            exponents: def.exponents.clone(),
            rep_dim: nrep,
            coords: def.coords.clone(),
            basis,
            form_scale,
            gram,
            gram_inv,
            structure: Vec::new(),
            adj: Vec::new(),
            invariants: def
                .invariants
                .iter()
                .map(|i| Ok((i.mu_power, parse_rational(&i.scale)?)))
                .collect::<Result<_, LieError>>()?,
            def,
        };
        let mut structure = vec![vec![Vec::new(); d]; d];
        for a in 0..d {
            for b in 0..d {
                let c = spec.basis[a].commutator(&spec.basis[b]);
                structure[a][b] = spec
                    .rational_coords(&c)
                    .ok_or(LieError::ClosureViolation(a, b))?;
            }
        }
        // adj[a][e][k] = sum_b c_{a b}^e ginv[b][k]
        let adj = (0..d)
            .map(|a| {
                let ca = Matrix::from_fn(d, d, |e, b| structure[a][b][e].clone());
                ca.mul(&spec.gram_inv)
            })
            .collect();
        spec.structure = structure;
        spec.adj = adj;
        Ok(spec)
    }

    /// Coordinates of a rational matrix, or `None` if it is outside the span.
    pub fn rational_coords(&self, m: &Matrix<Rational>) -> Option<Vec<Rational>> {
        let rhs: Vec<Rational> = self
            .basis
            .iter()
            .map(|b| &self.form_scale * b.mul(m).trace())
            .collect();
        let c = self.gram_inv.mul_vec(&rhs);
        let mut back = Matrix::zeros(self.rep_dim, self.rep_dim);
        for (ci, b) in c.iter().zip(&self.basis) {
            back = back.add(&b.scale(ci));
        }
        (back == *m).then_some(c)
    }

    /// Coordinates of a symbolic matrix, with a membership check.
    pub fn coords_of(&self, m: &Matrix<RatExpr>) -> Result<LieElement, LieError> {
        let rhs: Vec<RatExpr> = self
            .basis
            .iter()
            .map(|b| {
                b.map(|x| RatExpr::constant(x.clone()))
                    .mul(m)
                    .trace()
                    .scale(&self.form_scale)
            })
            .collect();
        let c = self.gram_inv.map(|x| RatExpr::constant(x.clone())).mul_vec(&rhs);
        if self.element(&c) != *m {
            return Err(LieError::NotInAlgebra(format!("{:?}", m.to_text())));
        }
        Ok(c)
    }

    /// Representation matrix of an element.
    pub fn element(&self, coords: &[RatExpr]) -> Matrix<RatExpr> {
        assert_eq!(coords.len(), self.dim);
        let mut out = Matrix::zeros(self.rep_dim, self.rep_dim);
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for i in 0..self.rep_dim {
                for j in 0..self.rep_dim {
                    let x = &b[(i, j)];
                    if !x.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &c.scale(x);
                    }
                }
            }
        }
        out
    }

    /// The generic element with coordinate variables `coords[a] + suffix`.
    pub fn generic(&self, suffix: &str) -> LieElement {
        self.coord_vars(suffix).into_iter().map(RatExpr::var).collect()
    }

    pub fn coord_vars(&self, suffix: &str) -> Vec<Var> {
        self.coords
            .iter()
            .map(|c| Var::new(&format!("{c}{suffix}")))
            .collect()
    }

    pub fn bracket(&self, x: &[RatExpr], y: &[RatExpr]) -> LieElement {
        let d = self.dim;
        let mut out = vec![RatExpr::zero(); d];
        for a in 0..d {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..d {
                if y[b].is_zero() || a == b {
                    continue;
                }
                let xy = &x[a] * &y[b];
                for (e, c) in self.structure[a][b].iter().enumerate() {
                    if !c.is_zero() {
                        out[e] = &out[e] + &xy.scale(c);
                    }
                }
            }
        }
        out
    }

    /// `eta(X, Y)` on coordinates.
    pub fn form(&self, x: &[RatExpr], y: &[RatExpr]) -> RatExpr {
        let mut acc = RatExpr::zero();
        for a in 0..self.dim {
            for b in 0..self.dim {
                let g = &self.gram[(a, b)];
                if !g.is_zero() && !x[a].is_zero() && !y[b].is_zero() {
                    acc = acc + (&x[a] * &y[b]).scale(g);
                }
            }
        }
        acc
    }

    /// Gradient from a differential given in coordinates: `G^{-1} dF`.
    pub fn gradient_from_differential(&self, df: &[RatExpr]) -> LieElement {
        self.gram_inv.map(|x| RatExpr::constant(x.clone())).mul_vec(df)
    }

    /// The element `grad F` with `eta(grad F, Y) = dF(Y)`, differentiating
    /// with respect to `vars` (one per coordinate).
    pub fn gradient(&self, f: &RatExpr, vars: &[Var]) -> LieElement {
        let df: Vec<RatExpr> = vars.iter().map(|v| f.partial(*v)).collect();
        self.gradient_from_differential(&df)
    }

    /// `A(X)`, so that `A(X) dG` are the coordinates of `[X, grad G]`.
    pub fn adjoint_matrix(&self, x: &[RatExpr]) -> Matrix<RatExpr> {
        let d = self.dim;
        let mut out = Matrix::zeros(d, d);
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for i in 0..d {
                for j in 0..d {
                    let c = &self.adj[a][(i, j)];
                    if !c.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &xa.scale(c);
                    }
                }
            }
        }
        out
    }

    /// Coefficients `c_0..c_N` of `det(mu I - X)` for the element `x`.
    pub fn char_poly(&self, x: &[RatExpr]) -> Vec<RatExpr> {
        self.element(x).char_poly()
    }

    /// The normalized invariants evaluated on `x`.
    pub fn invariants_of(&self, x: &[RatExpr]) -> Vec<RatExpr> {
        let cp = self.char_poly(x);
        self.invariants
            .iter()
            .map(|(k, s)| cp[*k].scale(s))
            .collect()
    }

    /// The invariant polynomials in the plain coordinate names.
    pub fn invariant_polynomials(&self) -> Vec<Poly> {
        self.invariants_of(&self.generic(""))
            .into_iter()
            .map(|e| e.into_poly().expect("polynomial invariants"))
            .collect()
    }

    /// Named coordinate values, e.g. for `x0`.
    pub fn element_from_map(&self, m: &BTreeMap<String, Rational>) -> Result<LieElement, LieError> {
        for k in m.keys() {
            if !self.coords.contains(k) {
                return Err(LieError::BadDefinition(format!("unknown coordinate {k}")));
            }
        }
        Ok(self
            .coords
            .iter()
            .map(|c| RatExpr::constant(m.get(c).cloned().unwrap_or_else(Rational::zero)))
            .collect())
    }

    pub fn half() -> Rational {
        rat(1, 2)
    }

    pub fn is_identity_scale(&self) -> bool {
        self.form_scale.is_one()
    }
}
