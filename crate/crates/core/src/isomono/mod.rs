//! Symplectic leaves, the promotion condition, isomonodromic Lax pairs,
//! Darboux charts, golden matching, scalar ODEs and weights.

mod darboux;
mod golden;
mod lax;
mod leaf;
mod ode;
mod pipeline;
mod weights;

pub use darboux::{certify_darboux, hamiltonian_in_darboux, DarbouxChart, DerivedHamiltonian};
pub use golden::{golden_match, GoldenReport, Normalization, TimeMap};
pub use lax::{check_condition, promote, scan_parameters, verify_isospectral, verify_zero_curvature, LaxPair, Orientation, TimeFlow};
pub use leaf::{restrict_to_leaf, Level, LeafSpec, Restricted, Shift};
pub use ode::{reduce_power, reduce_to_scalar_ode, scaling_equivalence, OdeScaling, ScalarOde};
pub use pipeline::{darboux_chart, derive, leaf_spec, ode_checks, reduced_system, ConditionReport, Derivation, ProbeReport};
pub use weights::{weight_table, WeightReport, WeightRow};

use crate::exactpoly::PolyError;
use crate::liealg::LieError;
use crate::reduction::ReductionError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IsomonoError {
    #[error("leaf definition: {0}")]
    Leaf(String),
    #[error("solve order is not triangular: {0}")]
    NonTriangular(String),
    #[error("level equation fails on the leaf: {0}")]
    LevelMismatch(String),
    #[error("no such parameter: {0}")]
    NoSuchParameter(String),
    #[error("promotion condition fails: {0}")]
    ConditionFailed(String),
    #[error("Darboux chart invalid: {0}")]
    DarbouxInvalid(String),
    #[error("zero curvature residual at {entry}: {residual}")]
    ResidualNonzero { entry: String, residual: String },
    #[error("Hamiltonian is not polynomial: {0}")]
    NotPolynomial(String),
    #[error("golden mismatch: {0}")]
    GoldenMismatch(String),
    #[error("flow is not affine in the momenta: {0}")]
    MomentaNotAffine(String),
    #[error("elimination singular: {0}")]
    EliminationSingular(String),
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("case data: {0}")]
    Case(String),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
