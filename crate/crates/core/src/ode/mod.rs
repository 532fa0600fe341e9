//! Linear and quadratic ODEs with polynomial coefficients, the quartic
//! specialization, rational solution bases and their Wronskians.

pub mod kernel;
pub mod specialize;
pub mod tabulated;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::rational::{rat, Rational};
use crate::algebra::{AlgebraError, MPoly, RatFunc, Var};
use crate::jets::JetError;

pub use kernel::{
    degeneration_branches, rational_kernel, wronskian, Branch, Degeneration, KernelAnsatz, SolutionBasis,
};
pub use specialize::{center_and_reduce, specialize_quartic, Centered, QuarticAlpha};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OdeError {
    #[error("expected conditions for degree 4, got degree {0}")]
    WrongDegree(usize),
    #[error("alpha is not quartic: its x1^4 coefficient is zero")]
    NotQuartic,
    #[error("condition E_{{5,{0}}} is missing")]
    MissingCondition(usize),
    #[error("E_{{5,5}} does not vanish for a quartic alpha")]
    TopConditionSurvives,
    #[error("the constant term of alpha survives in the specialized equations")]
    ConstantTermPresent,
    #[error("condition is not {0} in the jets of phi")]
    WrongShape(&'static str),
    #[error("leading coefficient is zero")]
    ZeroLeading,
    #[error("the equation involves phi itself; order reduction needs a zero y-free coefficient")]
    CannotReduce,
    #[error("centering by direct translation and by re-specialization disagree")]
    ShiftMismatch,
    #[error("the Wronskian vanishes identically")]
    ZeroWronskian,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Σ_j coefficients[j] · y⁽ʲ⁾ = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearODE {
    pub var: Var,
    pub coefficients: Vec<MPoly>,
}

impl LinearODE {
    pub fn new(var: Var, coefficients: Vec<MPoly>) -> Result<Self, OdeError> {
        if coefficients.last().is_none_or(MPoly::is_zero) {
            return Err(OdeError::ZeroLeading);
        }
        Ok(LinearODE { var, coefficients })
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn leading(&self) -> &MPoly {
        self.coefficients.last().expect("nonempty")
    }

    /// Substitutes parameter values (a branch restriction, say).
    pub fn evaluate(&self, values: &BTreeMap<Var, Rational>) -> Result<LinearODE, OdeError> {
        LinearODE::new(self.var, self.coefficients.iter().map(|c| c.evaluate(values)).collect())
    }

    pub fn rename_var(&self, to: Var) -> LinearODE {
        let from = self.var;
        LinearODE {
            var: to,
            coefficients: self
                .coefficients
                .iter()
                .map(|c| c.map_vars(|v| if v == from { to } else { v }))
                .collect(),
        }
    }

    pub fn residual(&self, candidate: &RatFunc) -> Result<RatFunc, OdeError> {
        let (nums, den) = derivative_numerators(candidate, self.var, self.order());
        let m = self.order();
        let mut total = MPoly::zero();
        for (j, c) in self.coefficients.iter().enumerate() {
            if !c.is_zero() {
                total += &(&(c * &nums[j]) * &den.pow((m - j) as u32));
            }
        }
        Ok(RatFunc::new(total, den.pow(m as u32 + 1))?)
    }
}

/// Σ_{i≤j} terms[(i,j)] · y⁽ⁱ⁾ y⁽ʲ⁾ = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonlinearODE {
    pub var: Var,
    pub terms: BTreeMap<(usize, usize), MPoly>,
}

impl NonlinearODE {
    pub fn new(var: Var, terms: impl IntoIterator<Item = ((usize, usize), MPoly)>) -> Self {
        let mut map: BTreeMap<(usize, usize), MPoly> = BTreeMap::new();
        for ((i, j), c) in terms {
            let key = (i.min(j), i.max(j));
            *map.entry(key).or_default() += &c;
        }
        map.retain(|_, c| !c.is_zero());
        NonlinearODE { var, terms: map }
    }

    pub fn order(&self) -> usize {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn term(&self, i: usize, j: usize) -> MPoly {
        self.terms.get(&(i.min(j), i.max(j))).cloned().unwrap_or_default()
    }

    pub fn evaluate(&self, values: &BTreeMap<Var, Rational>) -> NonlinearODE {
        NonlinearODE::new(self.var, self.terms.iter().map(|(&k, c)| (k, c.evaluate(values))))
    }

    pub fn rename_var(&self, to: Var) -> NonlinearODE {
        let from = self.var;
        NonlinearODE::new(
            to,
            self.terms
                .iter()
                .map(|(&k, c)| (k, c.map_vars(|v| if v == from { to } else { v }))),
        )
    }

    /// Multiplies one coefficient by `factor`.
    pub fn with_scaled_term(&self, key: (usize, usize), factor: &Rational) -> NonlinearODE {
        let mut out = self.clone();
        if let Some(c) = out.terms.get_mut(&key) {
            *c = c.scale(factor);
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn scale(&self, factor: &Rational) -> NonlinearODE {
        NonlinearODE::new(self.var, self.terms.iter().map(|(&k, c)| (k, c.scale(factor))))
    }

    pub fn residual(&self, candidate: &RatFunc) -> Result<RatFunc, OdeError> {
        let m = self.order();
        let (nums, den) = derivative_numerators(candidate, self.var, m);
        let mut total = MPoly::zero();
        for (&(i, j), c) in &self.terms {
            let shift = den.pow((2 * m - i - j) as u32);
            total += &(&(&(c * &nums[i]) * &nums[j]) * &shift);
        }
        Ok(RatFunc::new(total, den.pow(2 * m as u32 + 2))?)
    }
}

/// Numerators n_k with y⁽ᵏ⁾ = n_k / d^(k+1), where y = n/d.
fn derivative_numerators(y: &RatFunc, v: Var, order: usize) -> (Vec<MPoly>, MPoly) {
    let d = y.den().clone();
    let dd = d.diff(v);
    let mut nums = vec![y.num().clone()];
    for k in 0..order {
        let n: &MPoly = &nums[k];
        let next = &(&n.diff(v) * &d) - &((n * &dd).scale(&rat(k as i64 + 1)));
        nums.push(next);
    }
    (nums, d)
}

/// Residual of a candidate solution; zero iff it solves the equation identically.
pub trait Residual {
    fn residual_of(&self, candidate: &RatFunc) -> Result<RatFunc, OdeError>;
}

impl Residual for LinearODE {
    fn residual_of(&self, candidate: &RatFunc) -> Result<RatFunc, OdeError> {
        self.residual(candidate)
    }
}

impl Residual for NonlinearODE {
    fn residual_of(&self, candidate: &RatFunc) -> Result<RatFunc, OdeError> {
        self.residual(candidate)
    }
}

pub fn residual<E: Residual>(ode: &E, candidate: &RatFunc) -> Result<RatFunc, OdeError> {
    ode.residual_of(candidate)
}

fn derivative_name(k: usize) -> String {
    match k {
        0 => "y".into(),
        1..=3 => format!("y{}", "'".repeat(k)),
        _ => format!("y^({k})"),
    }
}

fn wrap(c: &MPoly) -> String {
    if c.num_terms() > 1 {
        format!("({c})")
    } else {
        c.to_string()
    }
}

impl fmt::Display for LinearODE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| format!("{}*{}", wrap(c), derivative_name(j)))
            .collect();
        write!(f, "{} = 0", parts.join(" + "))
    }
}

impl fmt::Display for NonlinearODE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0 = 0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| {
                let product = if i == j {
                    format!("{}^2", derivative_name(i))
                } else {
                    format!("{}*{}", derivative_name(i), derivative_name(j))
                };
                format!("{}*{}", wrap(c), product)
            })
            .collect();
        write!(f, "{} = 0", parts.join(" + "))
    }
}
