use std::collections::{BTreeMap, BTreeSet};

use crate::exactpoly::{RatExpr, Var};
use crate::liealg::LieElement;
use crate::matrix::Matrix;
use crate::reduction::ReducedSystem;

use super::IsomonoError;

/// `psi~_{family, index} = value`, `family` counted from zero.
#[derive(Clone, Debug)]
pub struct Level {
    pub family: usize,
    pub index: usize,
    pub value: RatExpr,
}

/// Recentring `old = new + offset` with a parameter-only offset.
#[derive(Clone, Debug)]
pub struct Shift {
    pub old: Var,
    pub new: Var,
    pub offset: RatExpr,
}

#[derive(Clone, Debug)]
pub struct LeafSpec {
    /// Index `k` of the tensor `P~_k` whose leaf this is.
    pub tensor: usize,
    pub levels: Vec<Level>,
    pub shifts: Vec<Shift>,
    /// `coordinate = expression`; expressions may refer to other solved
    /// coordinates as long as no cycle arises.
    pub solves: Vec<(Var, RatExpr)>,
    pub coords: Vec<Var>,
    pub params: Vec<Var>,
    pub units: BTreeSet<Var>,
}

/// A reduced system restricted to a leaf.
#[derive(Clone, Debug)]
pub struct Restricted {
    pub leaf: LeafSpec,
    /// Every reduced chart coordinate as a leaf expression.
    pub bindings: BTreeMap<Var, RatExpr>,
    /// `X~_lambda` on the leaf, as `lambda`-polynomial coordinates.
    pub x: LieElement,
    /// `P~_k` restricted, in the order of `leaf.coords`.
    pub poisson: Matrix<RatExpr>,
}

impl Restricted {
    pub fn restrict(&self, f: &RatExpr) -> Result<RatExpr, IsomonoError> {
        let r = f.substitute(&self.bindings)?;
        r.check_units(&self.leaf.units)?;
        Ok(r)
    }

    pub fn restrict_element(&self, x: &[RatExpr]) -> Result<LieElement, IsomonoError> {
        x.iter().map(|e| self.restrict(e)).collect()
    }

    /// `P dH` on the leaf.
    pub fn flow(&self, h: &RatExpr) -> Vec<RatExpr> {
        let g: Vec<RatExpr> = self.leaf.coords.iter().map(|c| h.partial(*c)).collect();
        self.poisson.mul_vec(&g)
    }
}

pub fn restrict_to_leaf(red: &ReducedSystem, leaf: &LeafSpec) -> Result<Restricted, IsomonoError> {
    let chart: BTreeSet<Var> = red.coords().iter().copied().collect();
    let params: BTreeSet<Var> = leaf.params.iter().copied().collect();
    if leaf.tensor == 0 || leaf.tensor > red.n + 1 {
        return Err(IsomonoError::Leaf(format!("no tensor P~_{}", leaf.tensor)));
    }
    let mut bindings: BTreeMap<Var, RatExpr> = BTreeMap::new();
    let mut rename: BTreeMap<Var, Var> = BTreeMap::new();
    for s in &leaf.shifts {
        if !chart.contains(&s.old) {
            return Err(IsomonoError::Leaf(format!("shift of {}, not a chart coordinate", s.old)));
        }
        if let Some(v) = s.offset.vars().into_iter().find(|v| !params.contains(v)) {
            return Err(IsomonoError::Leaf(format!("shift offset of {} uses {v}", s.old)));
        }
        bindings.insert(s.old, RatExpr::var(s.new) + s.offset.clone());
        rename.insert(s.new, s.old);
    }
    let solved: BTreeSet<Var> = leaf.solves.iter().map(|(v, _)| *v).collect();
    for v in &solved {
        if !chart.contains(v) || bindings.contains_key(v) {
            return Err(IsomonoError::Leaf(format!("{v} cannot be solved for")));
        }
    }
    let expected: BTreeSet<Var> = red
        .coords()
        .iter()
        .filter(|c| !solved.contains(c))
        .map(|c| leaf.shifts.iter().find(|s| s.old == *c).map_or(*c, |s| s.new))
        .collect();
    let given: BTreeSet<Var> = leaf.coords.iter().copied().collect();
    if expected != given || given.len() != leaf.coords.len() {
        return Err(IsomonoError::Leaf(format!(
            "leaf coordinates {:?}, expected {:?}",
            leaf.coords.iter().map(|v| v.name()).collect::<Vec<_>>(),
            expected.iter().map(|v| v.name()).collect::<Vec<_>>()
        )));
    }

    // Resolve solves against each other; a cycle never settles.
    let mut sol: BTreeMap<Var, RatExpr> = BTreeMap::new();
    for (v, e) in &leaf.solves {
        sol.insert(*v, e.substitute(&bindings)?);
    }
    for _ in 0..=sol.len() {
        let pending = sol.values().any(|e| e.vars().iter().any(|x| solved.contains(x)));
        if !pending {
            break;
        }
        let snapshot = sol.clone();
        for e in sol.values_mut() {
            if e.vars().iter().any(|x| solved.contains(x)) {
                *e = e.substitute(&snapshot)?;
            }
        }
    }
    for (v, e) in &sol {
        if let Some(x) = e.vars().into_iter().find(|x| solved.contains(x)) {
            return Err(IsomonoError::NonTriangular(format!("{v} still depends on {x}")));
        }
        if let Some(x) = e.vars().into_iter().find(|x| !given.contains(x) && !params.contains(x)) {
            return Err(IsomonoError::Leaf(format!("solution for {v} uses {x}")));
        }
        e.check_units(&leaf.units)?;
    }
    bindings.extend(sol);

    let r = Restricted {
        leaf: leaf.clone(),
        bindings,
        x: Vec::new(),
        poisson: Matrix::zeros(0, 0),
    };
    for l in &leaf.levels {
        if l.family >= red.psi.families() || l.index == 0 || l.index > red.psi.top(l.family) {
            return Err(IsomonoError::Leaf(format!("no function psi~_{},{}", l.family + 1, l.index)));
        }
        let d = r.restrict(red.psi(l.family, l.index))? - l.value.clone();
        if !d.is_zero() {
            return Err(IsomonoError::LevelMismatch(format!(
                "psi~_{},{} - ({}) = {d}",
                l.family + 1,
                l.index,
                l.value
            )));
        }
    }
    let x = r.restrict_element(&red.section.lambda_coords())?;
    let idx: Vec<usize> = leaf
        .coords
        .iter()
        .map(|c| {
            let old = rename.get(c).copied().unwrap_or(*c);
            red.coords().iter().position(|x| *x == old).unwrap()
        })
        .collect();
    let t = red.tensor(leaf.tensor);
    let m = leaf.coords.len();
    let mut poisson = Matrix::zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            poisson[(a, b)] = r.restrict(&t[(idx[a], idx[b])])?;
        }
    }
    Ok(Restricted { x, poisson, ..r })
}
