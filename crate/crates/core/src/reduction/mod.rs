//! Restriction to `g_n^0`, the distribution `D`, reduction charts and the
//! reduced tensors `P~_k`.

mod chart;
mod distribution;
mod reduced;
pub mod suites;

pub use chart::{verify_chart, Chart, ChartCertificate, ChartDef};
pub use distribution::Distribution;
pub use reduced::{beta_corrections, hamiltonian_lax, reduce, solve_single_term, BetaCorrection, ReducedSystem};

use crate::exactpoly::PolyError;
use crate::liealg::LieError;
use crate::looppoisson::LoopError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReductionError {
    #[error("chart invalid: {0}")]
    ChartInvalid(String),
    #[error("decomposition singular: {0}")]
    DecompositionSingular(String),
    #[error("reduced identity fails: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
