use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::poly::MPoly;
use super::rational::{rat, Rational};
use super::var::Var;
use super::AlgebraError;

/// Greatest common divisor, primitive over ℤ with positive leading coefficient.
pub fn poly_gcd(p: &MPoly, q: &MPoly) -> Result<MPoly, AlgebraError> {
    match (p.is_zero(), q.is_zero()) {
        (true, true) => Err(AlgebraError::GcdOfZeros),
        (true, false) => Ok(q.primitive_integer()),
        (false, true) => Ok(p.primitive_integer()),
        (false, false) => Ok(gcd_nonzero(p, q).primitive_integer()),
    }
}

/// gcd of a list, skipping zeros; `None` when every entry is zero.
pub fn poly_gcd_all<'a>(polys: impl IntoIterator<Item = &'a MPoly>) -> Option<MPoly> {
    let mut acc: Option<MPoly> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.primitive_integer(),
            Some(g) => {
                if g.is_constant() {
                    return Some(MPoly::one());
                }
                gcd_nonzero(&g, p).primitive_integer()
            }
        });
    }
    acc
}

fn gcd_nonzero(p: &MPoly, q: &MPoly) -> MPoly {
    if p.is_constant() || q.is_constant() {
        return MPoly::one();
    }
    let pv = p.vars();
    let qv = q.vars();
    let main = pv
        .intersection(&qv)
        .copied()
        .min_by_key(|&v| (p.degree(v).min(q.degree(v)), p.degree(v).max(q.degree(v))));
    let Some(v) = main else {
        return MPoly::one();
    };
    if p.div_exact(q).is_some() {
        return q.clone();
    }
    if q.div_exact(p).is_some() {
        return p.clone();
    }

    let pc = p.to_univariate(v);
    let qc = q.to_univariate(v);
    let cont_p = content(&pc);
    let cont_q = content(&qc);
    let g_cont = gcd_nonzero(&cont_p, &cont_q);

    let pp: Vec<MPoly> = pc.iter().map(|c| c.div_exact(&cont_p).expect("content divides")).collect();
    let qp: Vec<MPoly> = qc.iter().map(|c| c.div_exact(&cont_q).expect("content divides")).collect();

    if coprime_by_evaluation(&pp, &qp) {
        return g_cont;
    }
    let g = subresultant_gcd(pp, qp);
    let g_prim = primitive_part(&g);
    &g_cont * &MPoly::from_univariate(v, &g_prim)
}

fn content(coeffs: &[MPoly]) -> MPoly {
    let mut g: Option<MPoly> = None;
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = Some(match g {
            None => c.clone(),
            Some(acc) => {
                if acc.is_constant() {
                    return MPoly::one();
                }
                gcd_nonzero(&acc, c)
            }
        });
    }
    match g {
        Some(g) if !g.is_constant() => g.primitive_integer(),
        _ => MPoly::one(),
    }
}

fn primitive_part(coeffs: &[MPoly]) -> Vec<MPoly> {
    let c = content(coeffs);
    coeffs.iter().map(|a| a.div_exact(&c).expect("content divides")).collect()
}

fn trim(v: &mut Vec<MPoly>) {
    while v.last().is_some_and(MPoly::is_zero) {
        v.pop();
    }
}

fn degree(v: &[MPoly]) -> usize {
    v.len() - 1
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`.
fn prem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let db = degree(b);
    let lb = &b[db];
    let mut r: Vec<MPoly> = a.to_vec();
    let mut e = degree(a) as i64 - db as i64 + 1;
    trim(&mut r);
    while !r.is_empty() && degree(&r) >= db {
        let dr = degree(&r);
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &(&lr * bc);
        }
        trim(&mut r);
        e -= 1;
    }
    if e > 0 && !r.is_empty() {
        let f = lb.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

/// Last nonzero member of the subresultant PRS of two primitive polynomials.
fn subresultant_gcd(a: Vec<MPoly>, b: Vec<MPoly>) -> Vec<MPoly> {
    let (mut a, mut b) = if degree(&a) >= degree(&b) { (a, b) } else { (b, a) };
    let mut g = MPoly::one();
    let mut h = MPoly::one();
    loop {
        let delta = (degree(&a) - degree(&b)) as u32;
        let r = prem(&a, &b);
        if r.is_empty() {
            return b;
        }
        if degree(&r) == 0 {
            return vec![MPoly::one()];
        }
        let divisor = &g * &h.pow(delta);
        a = b;
        b = r
            .iter()
            .map(|c| c.div_exact(&divisor).expect("subresultant division is exact"))
            .collect();
        g = a[degree(&a)].clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant division is exact")
        };
    }
}

/// Specializes every variable except the main one; a constant univariate gcd
/// with both leading coefficients surviving proves coprimality.
fn coprime_by_evaluation(a: &[MPoly], b: &[MPoly]) -> bool {
    let mut others: Vec<Var> = a.iter().chain(b.iter()).flat_map(|c| c.vars()).collect();
    others.sort();
    others.dedup();
    for attempt in 0..3i64 {
        let point: BTreeMap<Var, Rational> = others
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, rat(7 + 13 * attempt + 5 * i as i64 + (i as i64 * i as i64) % 11)))
            .collect();
        let ua: Vec<Rational> = a.iter().map(|c| c.evaluate_fully(&point).unwrap()).collect();
        let ub: Vec<Rational> = b.iter().map(|c| c.evaluate_fully(&point).unwrap()).collect();
        if ua.last().unwrap().is_zero() || ub.last().unwrap().is_zero() {
            continue;
        }
        return univariate_gcd(&ua, &ub).len() == 1;
    }
    false
}

/// Monic gcd of dense univariate rational polynomials (ascending coefficients).
pub fn univariate_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut a: Vec<Rational> = a.to_vec();
    let mut b: Vec<Rational> = b.to_vec();
    let trim_r = |v: &mut Vec<Rational>| {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
    };
    trim_r(&mut a);
    trim_r(&mut b);
    while !b.is_empty() {
        let r = univariate_rem(&a, &b);
        a = b;
        b = r;
        trim_r(&mut b);
    }
    if a.is_empty() {
        return a;
    }
    let lc = a.last().unwrap().clone();
    a.iter().map(|c| c / &lc).collect()
}

pub fn univariate_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = Rational::one() / &b[db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let f = &r[dr] * &inv;
        for (i, bc) in b.iter().enumerate() {
            let idx = i + dr - db;
            r[idx] = &r[idx] - &f * bc;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> MPoly {
        MPoly::var(Var::X)
    }

    #[test]
    fn textbook_gcd() {
        let p = &x().pow(2) - &MPoly::one();
        let q = &(&x().pow(2) - &x().scale(&rat(2))) + &MPoly::one();
        assert_eq!(poly_gcd(&p, &q).unwrap(), &x() - &MPoly::one());
        assert_eq!(poly_gcd(&p, &MPoly::one()).unwrap(), MPoly::one());
        assert_eq!(poly_gcd(&p, &MPoly::zero()).unwrap(), p);
        assert!(poly_gcd(&MPoly::zero(), &MPoly::zero()).is_err());
    }

    #[test]
    fn multivariate_common_factor() {
        let (b, c, e) = (MPoly::var(Var::B), MPoly::var(Var::C), MPoly::var(Var::E));
        let g = &(&b * &c) + &(&e * &x());
        let p = &g * &(&b + &x().pow(2));
        let q = &g * &(&c - &(&e * &x()));
        assert_eq!(poly_gcd(&p, &q).unwrap(), g.primitive_integer());
        let r = &(&b.pow(3) * &c.pow(4)) * &x();
        let s = &(&b.pow(5) * &c.pow(3)) * &e;
        assert_eq!(poly_gcd(&r, &s).unwrap(), &b.pow(3) * &c.pow(3));
    }

    #[test]
    fn rational_univariate() {
        let a = [rat(-1), rat(0), rat(1)];
        let b = [rat(1), rat(1)];
        assert_eq!(univariate_gcd(&a, &b), vec![rat(1), rat(1)]);
    }
}
