//! The loop algebra `g_n`, its Casimir families and the compatible Poisson
//! tensors `P_0 .. P_{n+1}`.

mod element;
mod tensor;
pub mod suites;

pub use element::{bracket_n, casimir_family, eta, expected_dimension, lambda, loop_vars, CasimirFamily, LoopElement};
pub use tensor::{add_scaled, field_difference, field_is_zero, pair, Covector, Field, LoopPoisson};

use crate::exactpoly::PolyError;
use crate::liealg::LieError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LoopError {
    #[error("tensor index {k} out of range 0..={max}")]
    TensorIndex { k: usize, max: usize },
    #[error("identity fails at {coordinate}: residual {residual}")]
    Mismatch { coordinate: String, residual: String },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
