use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, rat, Rational};
use super::var::Var;

/// Power product with sorted variables and strictly positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, exp)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn with_exponent(&self, v: Var, exp: u32) -> Monomial {
        let mut pairs: Vec<(Var, u32)> = self.0.iter().copied().filter(|&(w, _)| w != v).collect();
        if exp > 0 {
            pairs.push((v, exp));
            pairs.sort_by_key(|&(w, _)| w);
        }
        Monomial(pairs)
    }
}

impl Ord for Monomial {
    /// Lexicographic order along the canonical variable order.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (idx, (v, e)) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial over ℚ.
///
/// Terms are kept in a map ordered by the canonical lexicographic order, so
/// the leading term is the last entry. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        MPoly::monomial(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        MPoly::constant(rat(n))
    }

    pub fn var(v: Var) -> Self {
        MPoly::monomial(Monomial::var(v, 1), Rational::one())
    }

    pub fn var_pow(v: Var, exp: u32) -> Self {
        MPoly::monomial(Monomial::var(v, exp), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Univariate polynomial in `v` from ascending coefficients.
    pub fn univariate(v: Var, coeffs: &[Rational]) -> Self {
        MPoly::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::var(v, k as u32), c.clone())),
        )
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn coefficient_of(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|&(v, _)| v))
            .collect()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(n, k)| (n.mul(m), k * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> MPoly {
        let mut result = MPoly::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative.
    pub fn diff(&self, v: Var) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                out.add_term(m.with_exponent(v, e - 1), c * rat(e as i64));
            }
        }
        out
    }

    /// Coefficient of `v^k`, a polynomial free of `v`.
    pub fn coefficient(&self, v: Var, k: u32) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(v) == k)
                .map(|(m, c)| (m.with_exponent(v, 0), c.clone()))
                .collect(),
        }
    }

    /// Ascending coefficient list in `v`; empty for the zero polynomial.
    pub fn to_univariate(&self, v: Var) -> Vec<MPoly> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut out = vec![MPoly::zero(); self.degree(v) as usize + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            out[e as usize].add_term(m.with_exponent(v, 0), c.clone());
        }
        out
    }

    pub fn from_univariate(v: Var, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let shift = Monomial::var(v, k as u32);
            for (m, a) in &c.terms {
                out.add_term(m.mul(&shift), a.clone());
            }
        }
        out
    }

    /// Replaces `v` by `value` (Horner in `v`).
    pub fn substitute(&self, v: Var, value: &MPoly) -> MPoly {
        if !self.contains(v) {
            return self.clone();
        }
        let coeffs = self.to_univariate(v);
        let mut acc = MPoly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Substitutes rational values for the listed variables.
    pub fn evaluate(&self, values: &BTreeMap<Var, Rational>) -> MPoly {
        let mut out = MPoly::zero();
        let mut powers: BTreeMap<(Var, u32), Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.pairs() {
                match values.get(&v) {
                    Some(val) => {
                        let p = powers
                            .entry((v, e))
                            .or_insert_with(|| num_traits::pow(val.clone(), e as usize));
                        coeff *= &*p;
                    }
                    None => rest.push((v, e)),
                }
            }
            out.add_term(Monomial(rest), coeff);
        }
        out
    }

    /// Value at a point assigning every variable that occurs.
    pub fn evaluate_fully(&self, values: &BTreeMap<Var, Rational>) -> Option<Rational> {
        self.evaluate(values).constant_value()
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> MPoly {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| {
            (
                Monomial::from_pairs(m.pairs().iter().map(|&(v, e)| (f(v), e))),
                c.clone(),
            )
        }))
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        let (lm, lc) = divisor.leading_term()?;
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if lm.is_one() {
            return Some(self.scale(&(Rational::one() / lc)));
        }
        let inv = Rational::one() / lc;
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lm)?;
            let qc = c * &inv;
            for (dm, dc) in &divisor.terms {
                rem.add_term(dm.mul(&qm), -(dc * &qc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Multiplies by the reciprocal of the leading coefficient.
    pub fn monic(&self) -> MPoly {
        match self.leading_term() {
            None => MPoly::zero(),
            Some((_, c)) => self.scale(&(Rational::one() / c)),
        }
    }

    /// Scales to integer coefficients with unit content and positive leading coefficient.
    pub fn primitive_integer(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let content = super::rational::rational_content(self.terms.values());
        let mut p = self.scale(&(Rational::one() / content));
        if p.leading_coefficient().is_negative() {
            p = -p;
        }
        p
    }

    /// Splits into homogeneous parts with respect to the variables in `vars`.
    pub fn homogeneous_parts(&self, vars: &[Var]) -> BTreeMap<u32, MPoly> {
        let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let deg: u32 = vars.iter().map(|&v| m.exponent(v)).sum();
            out.entry(deg).or_default().add_term(m.clone(), c.clone());
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mag = c.abs();
            if m.is_one() {
                f.write_str(&format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

impl From<Rational> for MPoly {
    fn from(c: Rational) -> Self {
        MPoly::constant(c)
    }
}

impl From<Var> for MPoly {
    fn from(v: Var) -> Self {
        MPoly::var(v)
    }
}

impl AddAssign<&MPoly> for MPoly {
    fn add_assign(&mut self, rhs: &MPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&MPoly> for MPoly {
    fn sub_assign(&mut self, rhs: &MPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add<&MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        out += small;
        out
    }
}

impl Sub<&MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        let mut acc: std::collections::HashMap<Monomial, Rational> =
            std::collections::HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Vacant(slot) => {
                        slot.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut slot) => {
                        *slot.get_mut() += c;
                    }
                }
            }
        }
        MPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(mut self) -> MPoly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;

    fn x() -> MPoly {
        MPoly::var(Var::X)
    }

    #[test]
    fn power_rule() {
        let (b, c, e) = (MPoly::var(Var::B), MPoly::var(Var::C), MPoly::var(Var::E));
        let p = &(&(&MPoly::int(4) * &e) * &x().pow(3)) + &(&(&MPoly::int(2) * &c) * &x()) + b.clone();
        let expected = &(&(&MPoly::int(12) * &e) * &x().pow(2)) + &(&MPoly::int(2) * &c);
        assert_eq!(p.diff(Var::X), expected);
        assert!(b.diff(Var::X).is_zero());
    }

    #[test]
    fn product_then_derivative() {
        // d/dx (x(b - 8ex^3)) = b - 32ex^3
        let (b, e) = (MPoly::var(Var::B), MPoly::var(Var::E));
        let p = &x() * &(&b - &(&(&MPoly::int(8) * &e) * &x().pow(3)));
        let expected = &b - &(&(&MPoly::int(32) * &e) * &x().pow(3));
        assert_eq!(p.diff(Var::X), expected);
    }

    #[test]
    fn display_is_canonical() {
        let p = &x().pow(2) + &MPoly::one();
        assert_eq!(p.to_string(), "x^2 + 1");
        assert_eq!(MPoly::zero().to_string(), "0");
        let q = MPoly::var_pow(Var::X2, 2).scale(&ratio(-1, 2));
        assert_eq!(q.to_string(), "-1/2*x2^2");
        let r = &(&MPoly::var(Var::X1) * &MPoly::var(Var::B)) - &MPoly::var_pow(Var::B, 2);
        assert_eq!(r.to_string(), "x1*b - b^2");
    }

    #[test]
    fn exact_division() {
        let p = &(&x() - &MPoly::one()) * &(&x() + &MPoly::var(Var::B));
        let q = p.div_exact(&(&x() - &MPoly::one())).unwrap();
        assert_eq!(q, &x() + &MPoly::var(Var::B));
        assert!(p.div_exact(&(&x() - &MPoly::int(2))).is_none());
    }

    #[test]
    fn substitution_and_evaluation() {
        let p = &x().pow(2) + &MPoly::var(Var::B);
        let shifted = p.substitute(Var::X, &(&x() + &MPoly::one()));
        assert_eq!(shifted, &(&(&x().pow(2) + &x().scale(&rat(2))) + &MPoly::one()) + &MPoly::var(Var::B));
        let mut vals = BTreeMap::new();
        vals.insert(Var::X, rat(3));
        vals.insert(Var::B, ratio(1, 2));
        assert_eq!(p.evaluate_fully(&vals), Some(ratio(19, 2)));
    }

    #[test]
    fn monomial_division() {
        let m = Monomial::from_pairs([(Var::X, 3), (Var::B, 1)]);
        let n = Monomial::from_pairs([(Var::X, 1)]);
        assert_eq!(m.div(&n), Some(Monomial::from_pairs([(Var::X, 2), (Var::B, 1)])));
        assert_eq!(n.div(&m), None);
        assert_eq!(m.div(&Monomial::var(Var::C, 1)), None);
    }
}
