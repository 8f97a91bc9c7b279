//! Matrix-represented simple Lie algebras: bracket, trace form, gradient,
//! the adjoint operator `A(X)` and Ad-invariant polynomials.

mod spec;

pub use spec::{InvariantNorm, LieAlgebraDef, LieAlgebraSpec};

use crate::exactpoly::PolyError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LieError {
    #[error("commutator of basis elements {0} and {1} leaves the span")]
    ClosureViolation(usize, usize),
    #[error("trace form is degenerate on {0}")]
    DegenerateForm(String),
    #[error("matrix is not in the algebra {0}")]
    NotInAlgebra(String),
    #[error("invalid algebra definition: {0}")]
    BadDefinition(String),
    #[error("unknown algebra {0}")]
    UnknownAlgebra(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Coordinates of an element in the basis of its algebra.
pub type LieElement = Vec<crate::exactpoly::RatExpr>;
