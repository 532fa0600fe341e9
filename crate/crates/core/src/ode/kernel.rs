use std::collections::BTreeMap;

use serde::Serialize;

use super::{LinearODE, OdeError};
use crate::algebra::gcd::poly_gcd_all;
use crate::algebra::matrix::{determinant, kernel_basis};
use crate::algebra::rational::{rat, Rational};
use crate::algebra::{MPoly, Monomial, RatFunc, Var};

/// Rational solutions P_i / (xᵖ·Dᵉ) of a linear ODE.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionBasis {
    pub var: Var,
    pub denominator: MPoly,
    pub exponent: u32,
    pub extra_pole: u32,
    pub numerators: Vec<MPoly>,
    /// Wronskian of the basis elements themselves.
    pub wronskian: RatFunc,
}

impl SolutionBasis {
    /// Builds a basis from known numerators. The Wronskian is W(P)/Mⁿ with
    /// M = xᵖ·Dᵉ, reduced by peeling off factors of D and x.
    pub fn from_numerators(
        var: Var,
        denominator: MPoly,
        exponent: u32,
        extra_pole: u32,
        numerators: Vec<MPoly>,
    ) -> Result<Self, OdeError> {
        let mut basis = SolutionBasis {
            var,
            denominator,
            exponent,
            extra_pole,
            numerators,
            wronskian: RatFunc::zero(),
        };
        if !basis.numerators.is_empty() {
            let n = basis.numerators.len() as u32;
            let mut w = basis.numerator_wronskian()?;
            if w.is_zero() {
                return Err(OdeError::ZeroWronskian);
            }
            let mut d_power = basis.exponent * n;
            let mut x_power = basis.extra_pole * n;
            if !basis.denominator.is_constant() {
                while d_power > 0 {
                    match w.div_exact(&basis.denominator) {
                        Some(q) => {
                            w = q;
                            d_power -= 1;
                        }
                        None => break,
                    }
                }
            }
            let xv = MPoly::var(var);
            while x_power > 0 {
                match w.div_exact(&xv) {
                    Some(q) => {
                        w = q;
                        x_power -= 1;
                    }
                    None => break,
                }
            }
            let den = &MPoly::var_pow(var, x_power) * &basis.denominator.pow(d_power);
            basis.wronskian = RatFunc::new(w, den)?;
        }
        Ok(basis)
    }

    pub fn dimension(&self) -> usize {
        self.numerators.len()
    }

    /// xᵖ·Dᵉ.
    pub fn full_denominator(&self) -> MPoly {
        &MPoly::var_pow(self.var, self.extra_pole) * &self.denominator.pow(self.exponent)
    }

    pub fn elements(&self) -> Result<Vec<RatFunc>, OdeError> {
        let den = self.full_denominator();
        self.numerators
            .iter()
            .map(|n| Ok(RatFunc::new(n.clone(), den.clone())?))
            .collect()
    }

    /// W(P_1, …, P_n) of the numerators alone.
    pub fn numerator_wronskian(&self) -> Result<MPoly, OdeError> {
        let n = self.numerators.len();
        let rows: Vec<Vec<MPoly>> = self
            .numerators
            .iter()
            .map(|p| {
                let mut row = vec![p.clone()];
                for k in 1..n {
                    let next = row[k - 1].diff(self.var);
                    row.push(next);
                }
                row
            })
            .collect();
        Ok(determinant(&rows)?)
    }

    /// Σ K_i P_i with the symbols K1, K2, K3.
    pub fn general_numerator(&self) -> MPoly {
        self.numerators
            .iter()
            .zip(Var::K)
            .fold(MPoly::zero(), |acc, (p, k)| &acc + &(p * &MPoly::var(k)))
    }

    pub fn evaluate(&self, values: &BTreeMap<Var, Rational>) -> Result<SolutionBasis, OdeError> {
        SolutionBasis::from_numerators(
            self.var,
            self.denominator.evaluate(values),
            self.exponent,
            self.extra_pole,
            self.numerators.iter().map(|p| p.evaluate(values)).collect(),
        )
    }
}

/// Wronskian determinant of rational functions.
pub fn wronskian(functions: &[RatFunc], var: Var) -> Result<RatFunc, OdeError> {
    let n = functions.len();
    let rows: Vec<Vec<RatFunc>> = functions
        .iter()
        .map(|f| {
            let mut row = vec![f.clone()];
            for k in 1..n {
                let next = row[k - 1].diff(var);
                row.push(next);
            }
            row
        })
        .collect();
    Ok(determinant(&rows)?)
}

/// Denominator ansatz y = P / (xᵖ·denomᵉ) with deg P ≤ degree_bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelAnsatz {
    pub denominator: MPoly,
    pub exponent: u32,
    pub extra_pole: u32,
    pub degree_bound: u32,
}

impl KernelAnsatz {
    /// Exponent 3 on the leading coefficient; when x divides it, the x-power
    /// is split off into an extra pole of order 3.
    pub fn default_for(ode: &LinearODE, degree_bound: u32) -> KernelAnsatz {
        let lead = ode.leading();
        let v = lead.terms().map(|(m, _)| m.exponent(ode.var)).min().unwrap_or(0);
        let stripped = lead
            .div_exact(&MPoly::var_pow(ode.var, v))
            .expect("monomial factor divides");
        KernelAnsatz {
            denominator: stripped.primitive_integer(),
            exponent: 3,
            extra_pole: if v > 0 { 3 } else { 0 },
            degree_bound,
        }
    }
}

/// Numerators R_k with y⁽ᵏ⁾ = R_k / (x^{p_k}·D^{e+k}), where p_k = p + k when
/// p > 0 and 0 otherwise.
pub(crate) fn derivative_chain(r0: &MPoly, x: Var, d: &MPoly, exponent: u32, pole: u32, order: usize) -> Vec<MPoly> {
    let dd = d.diff(x);
    let xv = MPoly::var(x);
    let mut chain = vec![r0.clone()];
    for k in 0..order {
        let r = &chain[k];
        let e_k = rat((exponent as usize + k) as i64);
        let next = if pole > 0 {
            let p_k = rat((pole as usize + k) as i64);
            let xd = &xv * d;
            &(&(&xd * &r.diff(x)) - &(d * r).scale(&p_k)) - &(&(&xv * &dd) * r).scale(&e_k)
        } else {
            &(d * &r.diff(x)) - &(&dd * r).scale(&e_k)
        };
        chain.push(next);
    }
    chain
}

/// `ode` applied to P/(xᵖ·Dᵉ), multiplied by x^{p_m}·D^{e+m}.
pub(crate) fn cleared_image(ode: &LinearODE, p: &MPoly, d: &MPoly, exponent: u32, pole: u32) -> MPoly {
    let m = ode.order();
    let x = ode.var;
    let chain = derivative_chain(p, x, d, exponent, pole, m);
    let p_of = |k: usize| if pole > 0 { pole as usize + k } else { 0 };
    let mut total = MPoly::zero();
    for (j, c) in ode.coefficients.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let factor = &MPoly::var_pow(x, (p_of(m) - p_of(j)) as u32) * &d.pow((m - j) as u32);
        total += &(&(c * &chain[j]) * &factor);
    }
    total
}

/// Rational solutions with the given denominator ansatz, found as the kernel
/// of the linear system on the numerator coefficients.
pub fn rational_kernel(
    ode: &LinearODE,
    denom: &MPoly,
    exponent: u32,
    extra_pole: u32,
    degree_bound: u32,
) -> Result<SolutionBasis, OdeError> {
    let x = ode.var;
    let images: Vec<MPoly> = (0..=degree_bound)
        .map(|i| cleared_image(ode, &MPoly::var_pow(x, i), denom, exponent, extra_pole))
        .collect();
    let top = images.iter().map(|p| p.degree(x)).max().unwrap_or(0);
    let mut rows = Vec::new();
    for k in 0..=top {
        let row: Vec<MPoly> = images.iter().map(|p| p.coefficient(x, k)).collect();
        if row.iter().any(|c| !c.is_zero()) {
            rows.push(row);
        }
    }
    let ncols = images.len();
    let vectors = if rows.is_empty() {
        (0..ncols)
            .map(|i| (0..ncols).map(|j| if i == j { MPoly::one() } else { MPoly::zero() }).collect())
            .collect()
    } else {
        kernel_basis(rows, ncols)
    };
    let numerators: Vec<MPoly> = vectors
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .fold(MPoly::zero(), |acc, (j, c)| &acc + &(c * &MPoly::var_pow(x, j as u32)))
        })
        .collect();
    SolutionBasis::from_numerators(x, denom.clone(), exponent, extra_pole, numerators)
}

/// Parameter branches of the quartic problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Generic,
    BZero,
    CZero,
}

impl Branch {
    pub const ALL: [Branch; 3] = [Branch::Generic, Branch::BZero, Branch::CZero];

    pub fn name(&self) -> &'static str {
        match self {
            Branch::Generic => "generic",
            Branch::BZero => "b_zero",
            Branch::CZero => "c_zero",
        }
    }

    pub fn from_name(name: &str) -> Option<Branch> {
        match name {
            "generic" => Some(Branch::Generic),
            "b_zero" | "b0" => Some(Branch::BZero),
            "c_zero" | "c0" => Some(Branch::CZero),
            _ => None,
        }
    }

    /// Parameters set to zero on this branch.
    pub fn zero_params(&self) -> Vec<Var> {
        match self {
            Branch::Generic => vec![],
            Branch::BZero => vec![Var::B],
            Branch::CZero => vec![Var::C],
        }
    }

    /// Parameters that stay free (and are required to be nonzero).
    pub fn live_params(&self) -> Vec<Var> {
        match self {
            Branch::Generic => vec![Var::B, Var::C, Var::E],
            Branch::BZero => vec![Var::C, Var::E],
            Branch::CZero => vec![Var::B, Var::E],
        }
    }

    pub fn constraint_values(&self) -> BTreeMap<Var, Rational> {
        self.zero_params().into_iter().map(|v| (v, rat(0))).collect()
    }

    pub fn constraints_text(&self) -> Vec<String> {
        self.zero_params().iter().map(|v| format!("{v} = 0")).collect()
    }
}

/// One component of the locus where the Wronskian coefficients all vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degeneration {
    /// Polynomial whose vanishing defines the component.
    pub component: MPoly,
    pub branch: Option<Branch>,
}

/// Components of the common zero set of the x-coefficients of the numerator
/// Wronskian, from their content. The quartic coefficient e is nonzero by
/// assumption and is dropped.
pub fn degeneration_branches(basis: &SolutionBasis) -> Result<Vec<Degeneration>, OdeError> {
    let w = basis.numerator_wronskian()?;
    if w.is_zero() {
        return Err(OdeError::ZeroWronskian);
    }
    let coeffs = w.to_univariate(basis.var);
    let content = poly_gcd_all(coeffs.iter()).expect("nonzero Wronskian");
    Ok(content_components(&content))
}

/// Splits a content polynomial into its monomial variable factors and the rest.
pub fn content_components(content: &MPoly) -> Vec<Degeneration> {
    let mut common: Option<BTreeMap<Var, u32>> = None;
    for (m, _) in content.terms() {
        let here: BTreeMap<Var, u32> = m.pairs().iter().copied().collect();
        common = Some(match common {
            None => here,
            Some(acc) => acc
                .into_iter()
                .filter_map(|(v, e)| here.get(&v).map(|&f| (v, e.min(f))))
                .collect(),
        });
    }
    let common = common.unwrap_or_default();
    let mut out = Vec::new();
    for &v in common.keys() {
        if v == Var::E {
            continue;
        }
        let branch = match v {
            Var::B => Some(Branch::BZero),
            Var::C => Some(Branch::CZero),
            _ => None,
        };
        out.push(Degeneration {
            component: MPoly::var(v),
            branch,
        });
    }
    let monomial = MPoly::monomial(Monomial::from_pairs(common), Rational::from_integer(1.into()));
    let rest = content.div_exact(&monomial).expect("monomial content divides");
    if !rest.is_constant() {
        out.push(Degeneration {
            component: rest.primitive_integer(),
            branch: None,
        });
    }
    out
}
