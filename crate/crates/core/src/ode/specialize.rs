use std::collections::BTreeMap;

use num_traits::Signed;

use super::{LinearODE, NonlinearODE, OdeError};
use crate::algebra::ratfunc::substitute_ratfunc;
use crate::algebra::rational::rat;
use crate::algebra::{MPoly, RatFunc, Var};
use crate::jets::{generate_conditions, DiffCondition, JetPoly};

/// α = a + b·x₁ + c·x₁² + d·x₁³ + e·x₁⁴ with polynomial (usually symbolic) coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticAlpha {
    pub coeffs: [MPoly; 5],
}

impl QuarticAlpha {
    pub const SYMBOLS: [Var; 5] = [Var::A, Var::B, Var::C, Var::D, Var::E];

    pub fn symbolic() -> Self {
        QuarticAlpha {
            coeffs: Self::SYMBOLS.map(MPoly::var),
        }
    }

    pub fn from_ints(c: [i64; 5]) -> Self {
        QuarticAlpha {
            coeffs: c.map(MPoly::int),
        }
    }

    pub fn poly(&self, x: Var) -> MPoly {
        MPoly::from_univariate(x, &self.coeffs)
    }

    pub fn leading(&self) -> &MPoly {
        &self.coeffs[4]
    }
}

/// Makes the leading term of the highest-order coefficient positive.
fn sign_normalize(ode: LinearODE) -> LinearODE {
    if ode.leading().leading_coefficient().is_negative() {
        LinearODE {
            var: ode.var,
            coefficients: ode.coefficients.iter().map(|c| -c).collect(),
        }
    } else {
        ode
    }
}

fn sign_normalize_nl(ode: NonlinearODE) -> NonlinearODE {
    let top = ode.terms.iter().next_back().map(|(_, c)| c.leading_coefficient());
    if top.is_some_and(|c| c.is_negative()) {
        ode.scale(&rat(-1))
    } else {
        ode
    }
}

/// Substitutes α_r ↦ dʳα/dx₁ʳ, leaving the jets of φ symbolic.
fn substitute_alpha(p: &JetPoly, alpha: &MPoly, x: Var) -> MPoly {
    let mut out = p.poly().clone();
    let mut derivative = alpha.clone();
    for r in 0..=p.max_jet_order() {
        out = out.substitute(Var::Alpha(r), &derivative);
        derivative = derivative.diff(x);
    }
    out
}

/// Specializes E_{5,3} (linear in φ) and E_{5,1} (quadratic in φ′) for a quartic α.
///
/// The nonlinear equation is returned in y = φ′: a product φ_s φ_t becomes
/// the term y⁽ˢ⁻¹⁾y⁽ᵗ⁻¹⁾. Both are sign-normalized.
pub fn specialize_quartic(
    conditions: &DiffCondition,
    alpha: &QuarticAlpha,
) -> Result<(LinearODE, NonlinearODE), OdeError> {
    specialize_in(conditions, alpha, Var::X1)
}

fn specialize_in(
    conditions: &DiffCondition,
    alpha: &QuarticAlpha,
    x: Var,
) -> Result<(LinearODE, NonlinearODE), OdeError> {
    if conditions.degree != 4 {
        return Err(OdeError::WrongDegree(conditions.degree));
    }
    if alpha.leading().is_zero() {
        return Err(OdeError::NotQuartic);
    }
    let alpha_poly = alpha.poly(x);
    let top = conditions.get(5).ok_or(OdeError::MissingCondition(5))?;
    if !substitute_alpha(top, &alpha_poly, x).is_zero() {
        return Err(OdeError::TopConditionSurvives);
    }

    let e53 = substitute_alpha(conditions.get(3).ok_or(OdeError::MissingCondition(3))?, &alpha_poly, x);
    let mut coefficients = vec![MPoly::zero(); 5];
    for (j, slot) in coefficients.iter_mut().enumerate().skip(1) {
        *slot = e53.coefficient(Var::Phi(j as u16), 1);
    }
    let rebuilt = coefficients
        .iter()
        .enumerate()
        .skip(1)
        .fold(MPoly::zero(), |acc, (j, c)| &acc + &(c * &MPoly::var(Var::Phi(j as u16))));
    if rebuilt != e53 {
        return Err(OdeError::WrongShape("linear"));
    }
    let linear = sign_normalize(LinearODE::new(x, coefficients)?);

    let e51 = substitute_alpha(conditions.get(1).ok_or(OdeError::MissingCondition(1))?, &alpha_poly, x);
    let mut terms = Vec::new();
    for (m, c) in e51.terms() {
        let mut jets = Vec::new();
        let mut rest = Vec::new();
        for &(v, e) in m.pairs() {
            match v {
                Var::Phi(s) => jets.extend(std::iter::repeat_n(s as usize, e as usize)),
                other => rest.push((other, e)),
            }
        }
        if jets.len() != 2 || jets.contains(&0) {
            return Err(OdeError::WrongShape("quadratic"));
        }
        let coeff = MPoly::monomial(crate::algebra::Monomial::from_pairs(rest), c.clone());
        terms.push(((jets[0] - 1, jets[1] - 1), coeff));
    }
    let nonlinear = sign_normalize_nl(NonlinearODE::new(x, terms));

    let mentions_a = linear.coefficients.iter().chain(nonlinear.terms.values()).any(|c| c.contains(Var::A));
    if mentions_a {
        return Err(OdeError::ConstantTermPresent);
    }
    Ok((linear, nonlinear))
}

/// Outcome of the order reduction y = φ′ and the centering translation x = x₁ − μ.
#[derive(Clone, Debug)]
pub struct Centered {
    pub linear: LinearODE,
    pub nonlinear: NonlinearODE,
    pub mu: RatFunc,
    /// α(x + μ) with its nonconstant low coefficients renamed back to a, b, c.
    pub shifted_alpha: QuarticAlpha,
    /// Each renamed symbol with the expression it stands for.
    pub relabeling: Vec<(Var, RatFunc)>,
}

/// Reduces (L) to third order in y = φ′ and translates by μ = −d/(4e), which
/// kills the cubic coefficient of α.
///
/// Two routes are compared: translating the coefficients directly, and
/// re-specializing the conditions with the translated α.
pub fn center_and_reduce(
    linear: &LinearODE,
    nonlinear: &NonlinearODE,
    alpha: &QuarticAlpha,
) -> Result<Centered, OdeError> {
    let e = alpha.leading();
    if e.is_zero() {
        return Err(OdeError::NotQuartic);
    }
    if !linear.coefficients[0].is_zero() {
        return Err(OdeError::CannotReduce);
    }
    let x1 = linear.var;
    let reduced = LinearODE::new(x1, linear.coefficients[1..].to_vec())?;

    let mu = RatFunc::new(-&alpha.coeffs[3], e.scale(&rat(4)))?;
    let shift = RatFunc::from_poly(MPoly::var(Var::X)).add(&mu);
    let shifted = substitute_ratfunc(&alpha.poly(x1), x1, &shift);
    let coeff = |k: u32| RatFunc::new(shifted.num().coefficient(Var::X, k), shifted.den().clone());
    if !coeff(3)?.is_zero() || coeff(4)? != RatFunc::from_poly(e.clone()) {
        return Err(OdeError::ShiftMismatch);
    }
    let mut relabeling = Vec::new();
    let mut new_coeffs: [MPoly; 5] = [MPoly::zero(), MPoly::zero(), MPoly::zero(), MPoly::zero(), e.clone()];
    for k in 0..3 {
        let value = coeff(k as u32)?;
        new_coeffs[k] = match value.as_poly().and_then(MPoly::constant_value) {
            Some(c) => MPoly::constant(c),
            None => {
                let symbol = QuarticAlpha::SYMBOLS[k];
                relabeling.push((symbol, value));
                MPoly::var(symbol)
            }
        };
    }
    let shifted_alpha = QuarticAlpha { coeffs: new_coeffs };

    let conditions = generate_conditions(4)?;
    let (l_shifted, nl_shifted) = specialize_in(&conditions, &shifted_alpha, Var::X)?;
    let l2 = LinearODE::new(Var::X, l_shifted.coefficients[1..].to_vec())?;

    let undo = |p: &MPoly| -> Result<RatFunc, OdeError> {
        // ã, b̃, c̃ only involve symbols of equal or higher index, so undoing in
        // reverse order never touches a freshly substituted symbol.
        let mut out = RatFunc::from_poly(p.clone());
        for (symbol, value) in relabeling.iter().rev() {
            out = out.substitute_ratfunc(*symbol, value)?;
        }
        Ok(out)
    };
    let translate = |p: &MPoly| substitute_ratfunc(p, x1, &shift);
    for (direct, respecialized) in reduced.coefficients.iter().zip(&l2.coefficients) {
        if translate(direct) != undo(respecialized)? {
            return Err(OdeError::ShiftMismatch);
        }
    }
    let keys: std::collections::BTreeSet<_> = nonlinear.terms.keys().chain(nl_shifted.terms.keys()).collect();
    for &(i, j) in keys {
        if translate(&nonlinear.term(i, j)) != undo(&nl_shifted.term(i, j))? {
            return Err(OdeError::ShiftMismatch);
        }
    }

    Ok(Centered {
        linear: l2,
        nonlinear: nl_shifted,
        mu,
        shifted_alpha,
        relabeling,
    })
}

/// Restricts an equation pair to parameter values (e.g. b = 0).
pub fn restrict(values: &BTreeMap<Var, crate::Rational>, l: &LinearODE, nl: &NonlinearODE) -> Result<(LinearODE, NonlinearODE), OdeError> {
    Ok((l.evaluate(values)?, nl.evaluate(values)))
}
