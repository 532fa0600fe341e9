//! Exact arithmetic over ℚ: polynomials, rational functions, elimination.

pub mod gcd;
pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod resultant;
pub mod var;

use thiserror::Error;

pub use gcd::poly_gcd;
pub use matrix::{determinant, solve_parametric_linear, LinearSolution, ParametricSolution};
pub use poly::{MPoly, Monomial};
pub use ratfunc::RatFunc;
pub use rational::Rational;
pub use resultant::resultant;
pub use var::Var;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("matrix is not square ({rows} rows, a row of length {cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("{which} polynomial has degree 0 in {var}; nothing to eliminate")]
    NothingToEliminate { var: Var, which: &'static str },
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

/// Looks up a variable by its canonical name.
pub fn var_named(name: &str) -> Result<Var, AlgebraError> {
    Var::from_name(name).ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
}

/// Partial derivative with the variable given by name.
pub fn poly_diff(p: &MPoly, name: &str) -> Result<MPoly, AlgebraError> {
    Ok(p.diff(var_named(name)?))
}
