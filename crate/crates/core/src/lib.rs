//! Classification of two-degree-of-freedom Hamiltonians with the invariant
//! plane `x2 = y2 = 0` by the polynomial degree of their normal variational
//! equation, with an exact certification pipeline for the quartic case.

pub mod algebra;
pub mod certify;
pub mod dynamics;
pub mod jets;
pub mod ode;
pub mod parse;

pub use algebra::{MPoly, Monomial, RatFunc, Rational, Var};
