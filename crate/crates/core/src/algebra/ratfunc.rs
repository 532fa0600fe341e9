use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::gcd::poly_gcd;
use super::poly::MPoly;
use super::rational::Rational;
use super::var::Var;
use super::AlgebraError;

/// Reduced quotient of polynomials with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(RatFunc::normalize_parts(num, den))
    }

    fn normalize_parts(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = poly_gcd(&num, &den).expect("denominator is nonzero");
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let lc = den.leading_coefficient();
        let inv = Rational::one() / lc;
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    /// Re-reduces an already normalized value (idempotent).
    pub fn normalize(&self) -> Self {
        RatFunc::normalize_parts(self.num.clone(), self.den.clone())
    }

    pub fn zero() -> Self {
        RatFunc {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::from_poly(MPoly::one())
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFunc { num: p, den: MPoly::one() }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&MPoly> {
        self.den.is_one_poly().then_some(&self.num)
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            return RatFunc::normalize_parts(&self.num + &other.num, self.den.clone());
        }
        RatFunc::normalize_parts(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::normalize_parts(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, AlgebraError> {
        if other.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(RatFunc::normalize_parts(&self.num * &other.den, &self.den * &other.num))
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Quotient rule.
    pub fn diff(&self, v: Var) -> RatFunc {
        let dn = self.num.diff(v);
        if !self.den.contains(v) {
            return RatFunc {
                num: dn,
                den: self.den.clone(),
            };
        }
        let dd = self.den.diff(v);
        RatFunc::normalize_parts(&(&dn * &self.den) - &(&self.num * &dd), &self.den * &self.den)
    }

    pub fn substitute(&self, v: Var, value: &MPoly) -> Result<RatFunc, AlgebraError> {
        RatFunc::new(self.num.substitute(v, value), self.den.substitute(v, value))
    }

    /// Evaluation at a full rational point.
    pub fn evaluate_fully(&self, values: &BTreeMap<Var, Rational>) -> Result<Option<Rational>, AlgebraError> {
        let (Some(n), Some(d)) = (self.num.evaluate_fully(values), self.den.evaluate_fully(values)) else {
            return Ok(None);
        };
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Some(n / d))
    }

    pub fn evaluate(&self, values: &BTreeMap<Var, Rational>) -> Result<RatFunc, AlgebraError> {
        RatFunc::new(self.num.evaluate(values), self.den.evaluate(values))
    }
}

/// `p` with `v` replaced by a rational function: Σ c_k r^k s^(n−k) / s^n for value r/s.
pub fn substitute_ratfunc(p: &MPoly, v: Var, value: &RatFunc) -> RatFunc {
    if !p.contains(v) {
        return RatFunc::from_poly(p.clone());
    }
    let coeffs = p.to_univariate(v);
    let n = coeffs.len() - 1;
    let mut num = MPoly::zero();
    let mut r_pow = MPoly::one();
    let s_pows: Vec<MPoly> = (0..=n).map(|k| value.den().pow(k as u32)).collect();
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            num += &(&(c * &r_pow) * &s_pows[n - k]);
        }
        if k < n {
            r_pow = &r_pow * value.num();
        }
    }
    RatFunc::normalize_parts(num, s_pows[n].clone())
}

impl RatFunc {
    pub fn substitute_ratfunc(&self, v: Var, value: &RatFunc) -> Result<RatFunc, AlgebraError> {
        substitute_ratfunc(&self.num, v, value).div(&substitute_ratfunc(&self.den, v, value))
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }
}

impl MPoly {
    fn is_one_poly(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl From<MPoly> for RatFunc {
    fn from(p: MPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn x() -> MPoly {
        MPoly::var(Var::X)
    }

    #[test]
    fn reduces_and_normalizes() {
        let num = &x().pow(2) - &MPoly::one();
        let den = (&x() - &MPoly::one()).scale(&rat(-2));
        let f = RatFunc::new(num, den).unwrap();
        assert_eq!(f.den(), &MPoly::one());
        assert_eq!(f.num(), &(&x() + &MPoly::one()).scale(&crate::algebra::rational::ratio(-1, 2)));
        assert_eq!(f.normalize(), f);
    }

    #[test]
    fn quotient_rule() {
        // d/dx 1/x = -1/x^2
        let f = RatFunc::new(MPoly::one(), x()).unwrap();
        let expected = RatFunc::new(MPoly::int(-1), x().pow(2)).unwrap();
        assert_eq!(f.diff(Var::X), expected);
    }

    #[test]
    fn sum_cancels() {
        let f = RatFunc::new(MPoly::one(), x()).unwrap();
        assert!(f.sub(&f).is_zero());
        assert_eq!(f.add(&f).mul(&RatFunc::from_poly(x())), RatFunc::from_poly(MPoly::int(2)));
    }

    #[test]
    fn zero_denominator() {
        assert!(RatFunc::new(MPoly::one(), MPoly::zero()).is_err());
    }
}
