use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational; always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `n` or `n/d`, matching the canonical text form.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy conversion that survives magnitudes beyond the f64 range of the
/// numerator and denominator taken separately.
pub fn to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 60).max(0) as u64;
    let shift_d = (db - 60).max(0) as u64;
    let n = (r.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(1.0);
    (n / d) * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

/// Best rational approximation with denominator at most `max_den`
/// (continued-fraction convergents).
pub fn rationalize(value: f64, max_den: i64) -> Option<Rational> {
    if !value.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut v = value;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a;
        if frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    Some(Rational::new(BigInt::from(p1), BigInt::from(q1)))
}

/// Exact square root when `r` is the square of a rational.
pub fn sqrt_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// gcd of numerators over lcm of denominators; zero for an empty or all-zero list.
pub fn rational_content<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for v in values {
        if v.is_zero() {
            continue;
        }
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    if num.is_zero() {
        Rational::zero()
    } else {
        Rational::new(num, den)
    }
}
