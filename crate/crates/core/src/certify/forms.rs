use std::collections::BTreeMap;

use super::CertifyError;
use crate::algebra::rational::{ratio, Rational};
use crate::algebra::{MPoly, Monomial, Var};
use crate::ode::kernel::derivative_chain;
use crate::ode::{NonlinearODE, SolutionBasis};

/// Substitutes y = ΣKᵢPᵢ / (xᵖ·Dᵉ) into `nl` and clears denominators.
///
/// Every term of the substituted equation carries one factor of D (and of x
/// when p > 0), either from its coefficient or from the common denominator;
/// that factor is divided out, so on the quartic branches Q sits over D⁷ or
/// x⁷D⁷.
pub fn build_q(nl: &NonlinearODE, basis: &SolutionBasis) -> Result<MPoly, CertifyError> {
    if nl.var != basis.var {
        return Err(CertifyError::VariableMismatch);
    }
    let x = basis.var;
    let d = &basis.denominator;
    let p = basis.extra_pole;
    let s = nl.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0);
    let m = nl.order();
    let chain = derivative_chain(&basis.general_numerator(), x, d, basis.exponent, basis.extra_pole, m);

    let mut total = MPoly::zero();
    for (&(i, j), c) in &nl.terms {
        let shift = (s - i - j) as u32;
        let x_shift = if p > 0 { shift } else { 0 };
        let factor = &MPoly::var_pow(x, x_shift) * &d.pow(shift);
        total += &(&(&(c * &chain[i]) * &chain[j]) * &factor);
    }
    let mut divisor = d.clone();
    if p > 0 {
        divisor = &divisor * &MPoly::var(x);
    }
    if divisor.is_constant() {
        return Ok(total);
    }
    total.div_exact(&divisor).ok_or(CertifyError::InexactClearing)
}

/// Exponent of the common denominator that `build_q` clears: (x-power, D-power).
pub fn cleared_denominator(nl: &NonlinearODE, basis: &SolutionBasis) -> (u32, u32) {
    let s = nl.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0) as u32;
    let xp = if basis.extra_pole > 0 { 2 * basis.extra_pole + s - 1 } else { 0 };
    (xp, 2 * basis.exponent + s - 1)
}

/// The coefficient of xⁱ in Q as Kᵀ·M·K with M symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    pub index: u32,
    pub matrix: [[MPoly; 3]; 3],
}

impl QuadraticForm {
    pub fn zero(index: u32) -> Self {
        QuadraticForm {
            index,
            matrix: Default::default(),
        }
    }

    /// Reads a K-homogeneous quadratic polynomial into a symmetric matrix.
    pub fn from_poly(index: u32, c: &MPoly) -> Result<Self, CertifyError> {
        let mut form = QuadraticForm::zero(index);
        let half = ratio(1, 2);
        for (m, coeff) in c.terms() {
            let mut ks = Vec::new();
            let mut rest = Vec::new();
            for &(v, e) in m.pairs() {
                match Var::K.iter().position(|&k| k == v) {
                    Some(a) => ks.extend(std::iter::repeat_n(a, e as usize)),
                    None => rest.push((v, e)),
                }
            }
            if ks.len() != 2 {
                return Err(CertifyError::NotHomogeneous {
                    index,
                    degree: ks.len(),
                });
            }
            let term = MPoly::monomial(Monomial::from_pairs(rest), coeff.clone());
            let (a, b) = (ks[0], ks[1]);
            if a == b {
                form.matrix[a][a] += &term;
            } else {
                let t = term.scale(&half);
                form.matrix[a][b] += &t;
                form.matrix[b][a] += &t;
            }
        }
        Ok(form)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(MPoly::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|a| (0..3).all(|b| self.matrix[a][b] == self.matrix[b][a]))
    }

    /// C(K) = Kᵀ·M·K.
    pub fn to_poly(&self) -> MPoly {
        let k: Vec<MPoly> = Var::K.iter().map(|&v| MPoly::var(v)).collect();
        let mut out = MPoly::zero();
        for a in 0..3 {
            for b in 0..3 {
                if !self.matrix[a][b].is_zero() {
                    out += &(&(&self.matrix[a][b] * &k[a]) * &k[b]);
                }
            }
        }
        out
    }

    pub fn evaluate(&self, values: &BTreeMap<Var, Rational>) -> QuadraticForm {
        let mut out = QuadraticForm::zero(self.index);
        for a in 0..3 {
            for b in 0..3 {
                out.matrix[a][b] = self.matrix[a][b].evaluate(values);
            }
        }
        out
    }
}

/// One quadratic form per power of x, 0 ≤ i ≤ deg_x Q.
pub fn extract_forms(q: &MPoly, x: Var) -> Result<Vec<QuadraticForm>, CertifyError> {
    let deg = q.degree(x);
    let forms = (0..=deg)
        .map(|i| QuadraticForm::from_poly(i, &q.coefficient(x, i)))
        .collect::<Result<Vec<_>, _>>()?;
    if reassemble(&forms, x) != *q {
        return Err(CertifyError::Reassembly);
    }
    Ok(forms)
}

/// Σ Cᵢ(K)·xⁱ.
pub fn reassemble(forms: &[QuadraticForm], x: Var) -> MPoly {
    forms.iter().fold(MPoly::zero(), |acc, f| {
        &acc + &(&f.to_poly() * &MPoly::var_pow(x, f.index))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, Symbols};

    fn p(s: &str) -> MPoly {
        parse_poly(s, Symbols::Any).unwrap()
    }

    #[test]
    fn single_form() {
        let forms = extract_forms(&p("(K1 + K2)^2*x"), Var::X).unwrap();
        assert_eq!(forms.len(), 2);
        assert!(forms[0].is_zero());
        let one = MPoly::one();
        let zero = MPoly::zero();
        assert_eq!(
            forms[1].matrix,
            [
                [one.clone(), one.clone(), zero.clone()],
                [one.clone(), one.clone(), zero.clone()],
                [zero.clone(), zero.clone(), zero]
            ]
        );
    }

    #[test]
    fn rejects_linear_terms() {
        assert!(matches!(
            extract_forms(&p("K1*K2 + K3*x"), Var::X),
            Err(CertifyError::NotHomogeneous { index: 1, degree: 1 })
        ));
    }

    #[test]
    fn parameters_stay_in_entries() {
        let f = QuadraticForm::from_poly(0, &p("3*b*K1*K3 - e*K2^2")).unwrap();
        assert!(f.is_symmetric());
        assert_eq!(f.matrix[0][2], p("3/2*b"));
        assert_eq!(f.matrix[1][1], p("-e"));
        assert_eq!(f.to_poly(), p("3*b*K1*K3 - e*K2^2"));
    }
}
