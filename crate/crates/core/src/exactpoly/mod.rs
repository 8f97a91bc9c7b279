//! Exact multivariate polynomials over the rationals, monomial-denominator
//! expressions and weighted degrees.

mod monomial;
mod parse;
mod poly;
mod ratexpr;
mod var;
mod weights;

pub use monomial::Monomial;
pub use parse::{parse_poly, parse_ratexpr, parse_rational};
pub use poly::{int, rat, Poly};
pub use ratexpr::RatExpr;
pub use var::{is_identifier, var, Var};
pub use weights::{assemble_lambda, collect_lambda, weighted_degree, weighted_part, WeightVector};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("non-unit denominator: {0}")]
    NonUnitDenominator(String),
    #[error("expression is not a polynomial: {0}")]
    NotPolynomial(String),
    #[error("lambda degree {degree} exceeds {max}")]
    DegreeOverflow { degree: u32, max: u32 },
    #[error("variable {0} has no weight")]
    UnweightedVariable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Renders a rational as `n` or `n/d`.
pub fn rational_text(r: &Rational) -> String {
    r.to_string()
}
