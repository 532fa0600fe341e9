//! Numeric side: RK4 integration of Hamilton's equations, sampling of the
//! NVE coefficient a(t) = α(x₁(t)) along Γ, a polynomial-degree test for
//! sampled series, and the variational-equation consistency check.

use thiserror::Error;

use crate::algebra::rational::to_f64;
use crate::algebra::{MPoly, Var};
use crate::parse::{parse_potential, Potential, PotentialError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("horizon must be positive and finite, got {0}")]
    InvalidHorizon(f64),
    #[error("initial state is not finite")]
    NonFinite,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("potential does not leave x2 = y2 = 0 invariant")]
    NotInvariant,
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

/// Something with a value and a gradient in (x₁, x₂).
pub trait PotentialField {
    fn value(&self, x1: f64, x2: f64) -> f64;
    fn gradient(&self, x1: f64, x2: f64) -> (f64, f64);
}

/// Polynomial in x₁, x₂ lowered to f64 terms.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericPoly {
    terms: Vec<(f64, i32, i32)>,
}

impl NumericPoly {
    pub fn from_poly(p: &MPoly) -> Self {
        NumericPoly {
            terms: p
                .terms()
                .map(|(m, c)| (to_f64(c), m.exponent(Var::X1) as i32, m.exponent(Var::X2) as i32))
                .collect(),
        }
    }

    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(c, a, b)| c * x1.powi(a) * x2.powi(b))
            .sum()
    }

    pub fn eval1(&self, x1: f64) -> f64 {
        self.eval(x1, 0.0)
    }
}

#[derive(Clone, Debug)]
pub struct NumericPotential {
    pub v: NumericPoly,
    dv1: NumericPoly,
    dv2: NumericPoly,
    /// φ(x₁) = V(x₁, 0).
    pub phi: NumericPoly,
    dphi: NumericPoly,
    /// α(x₁) = −∂²V/∂x₂²(x₁, 0).
    pub alpha: NumericPoly,
    /// The exact potential, when it passed the invariant-plane check.
    pub source: Option<Potential>,
}

impl NumericPotential {
    pub fn from_potential(p: &Potential) -> Self {
        let mut out = NumericPotential::from_poly(&p.v);
        out.source = Some(p.clone());
        out
    }

    pub fn parse(text: &str) -> Result<Self, DynamicsError> {
        Ok(NumericPotential::from_potential(&parse_potential(text)?))
    }

    /// Any polynomial V; the invariant plane is not required.
    pub fn from_poly(v: &MPoly) -> Self {
        let on_plane = |p: &MPoly| p.substitute(Var::X2, &MPoly::zero());
        let phi = on_plane(v);
        let alpha = -&on_plane(&v.diff(Var::X2).diff(Var::X2));
        NumericPotential {
            v: NumericPoly::from_poly(v),
            dv1: NumericPoly::from_poly(&v.diff(Var::X1)),
            dv2: NumericPoly::from_poly(&v.diff(Var::X2)),
            dphi: NumericPoly::from_poly(&phi.diff(Var::X1)),
            phi: NumericPoly::from_poly(&phi),
            alpha: NumericPoly::from_poly(&alpha),
            source: None,
        }
    }

    pub fn energy(&self, s: &[f64; 4]) -> f64 {
        0.5 * (s[1] * s[1] + s[3] * s[3]) + self.v.eval(s[0], s[2])
    }
}

impl PotentialField for NumericPotential {
    fn value(&self, x1: f64, x2: f64) -> f64 {
        self.v.eval(x1, x2)
    }

    fn gradient(&self, x1: f64, x2: f64) -> (f64, f64) {
        (self.dv1.eval(x1, x2), self.dv2.eval(x1, x2))
    }
}

pub const DIVERGENCE_THRESHOLD: f64 = 1e8;

/// Uniform samples of (x₁, y₁, x₂, y₂) with their energies.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<[f64; 4]>,
    pub energies: Vec<f64>,
    /// Integration stopped early because the state blew up.
    pub diverged: bool,
}

impl Trajectory {
    /// max |H − H₀| / |H₀| (absolute when H₀ = 0).
    pub fn energy_drift(&self) -> f64 {
        let h0 = self.energies[0];
        let scale = if h0 == 0.0 { 1.0 } else { h0.abs() };
        self.energies.iter().map(|h| (h - h0).abs() / scale).fold(0.0, f64::max)
    }

    pub fn max_off_plane(&self) -> f64 {
        self.states.iter().map(|s| s[2].abs().max(s[3].abs())).fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

fn rk4<const N: usize>(s: &[f64; N], h: f64, f: &impl Fn(&[f64; N]) -> [f64; N]) -> [f64; N] {
    let add = |a: &[f64; N], k: &[f64; N], c: f64| -> [f64; N] { std::array::from_fn(|i| a[i] + c * k[i]) };
    let k1 = f(s);
    let k2 = f(&add(s, &k1, h / 2.0));
    let k3 = f(&add(s, &k2, h / 2.0));
    let k4 = f(&add(s, &k3, h));
    std::array::from_fn(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

fn check_step(dt: f64, t_end: f64) -> Result<usize, DynamicsError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(DynamicsError::InvalidStep(dt));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(DynamicsError::InvalidHorizon(t_end));
    }
    Ok((t_end / dt).round().max(1.0) as usize)
}

/// Fixed-step RK4 for ẋᵢ = yᵢ, ẏᵢ = −∂V/∂xᵢ.
pub fn integrate_hamilton(
    pot: &NumericPotential,
    init: [f64; 4],
    dt: f64,
    t_end: f64,
) -> Result<Trajectory, DynamicsError> {
    let steps = check_step(dt, t_end)?;
    if init.iter().any(|v| !v.is_finite()) {
        return Err(DynamicsError::NonFinite);
    }
    let field = |s: &[f64; 4]| {
        let (g1, g2) = pot.gradient(s[0], s[2]);
        [s[1], -g1, s[3], -g2]
    };
    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        energies: Vec::with_capacity(steps + 1),
        diverged: false,
    };
    let mut s = init;
    for i in 0..=steps {
        traj.times.push(i as f64 * dt);
        traj.states.push(s);
        traj.energies.push(pot.energy(&s));
        if i == steps {
            break;
        }
        s = rk4(&s, dt, &field);
        if s.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE_THRESHOLD) {
            traj.diverged = true;
            break;
        }
    }
    Ok(traj)
}

/// a(tᵢ) = α(x₁(tᵢ)).
pub fn nve_coefficient_samples(traj: &Trajectory, alpha: &NumericPoly) -> Vec<f64> {
    traj.states.iter().map(|s| alpha.eval1(s[0])).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeTest {
    pub pass: bool,
    /// Largest (d+1)-th divided difference in normalized time, over max |a|.
    pub eta: f64,
    /// RMS of the least-squares degree-d fit over max |a|.
    pub residual: f64,
    pub stride: usize,
}

/// Keeps about 4(d+1) intervals, so the (d+1)-th differences neither drown
/// in rounding nor flatten a genuine degree-(d+1) term.
pub fn default_stride(len: usize, d: usize) -> usize {
    ((len.saturating_sub(1)) / (4 * (d + 1))).max(1)
}

pub fn polynomial_degree_test(samples: &[f64], d: usize, tol: f64) -> Result<DegreeTest, DynamicsError> {
    polynomial_degree_test_with_stride(samples, d, tol, default_stride(samples.len(), d))
}

/// Divided differences on every `stride`-th sample, with t rescaled to [0, 1].
pub fn polynomial_degree_test_with_stride(
    samples: &[f64],
    d: usize,
    tol: f64,
    stride: usize,
) -> Result<DegreeTest, DynamicsError> {
    let stride = stride.max(1);
    let sub: Vec<f64> = samples.iter().step_by(stride).copied().collect();
    if sub.len() < d + 2 {
        return Err(DynamicsError::TooFewSamples {
            needed: (d + 1) * stride + 1,
            got: samples.len(),
        });
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(DynamicsError::NonFinite);
    }
    let scale = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(DegreeTest {
            pass: true,
            eta: 0.0,
            residual: 0.0,
            stride,
        });
    }
    let mut diff = sub.clone();
    for _ in 0..=d {
        diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let h = 1.0 / (sub.len() - 1) as f64;
    let factorial: f64 = (1..=d + 1).map(|k| k as f64).product();
    let norm = factorial * h.powi(d as i32 + 1) * scale;
    let eta = diff.iter().fold(0.0f64, |m, v| m.max(v.abs())) / norm;
    Ok(DegreeTest {
        pass: eta < tol,
        eta,
        residual: least_squares_residual(samples, d) / scale,
        stride,
    })
}

/// RMS residual of the best degree-d fit, using Legendre columns on [−1, 1]
/// and modified Gram–Schmidt.
fn least_squares_residual(samples: &[f64], d: usize) -> f64 {
    let n = samples.len();
    if n <= d + 1 {
        return 0.0;
    }
    let tau = |i: usize| 2.0 * i as f64 / (n - 1) as f64 - 1.0;
    let mut cols: Vec<Vec<f64>> = Vec::new();
    for k in 0..=d {
        let col: Vec<f64> = (0..n)
            .map(|i| {
                let t = tau(i);
                let (mut p0, mut p1) = (1.0, t);
                if k == 0 {
                    return p0;
                }
                for j in 1..k {
                    let p2 = ((2 * j + 1) as f64 * t * p1 - j as f64 * p0) / (j + 1) as f64;
                    p0 = p1;
                    p1 = p2;
                }
                p1
            })
            .collect();
        cols.push(col);
    }
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut q: Vec<Vec<f64>> = Vec::new();
    for mut c in cols {
        for u in &q {
            let r = dot(u, &c);
            c.iter_mut().zip(u).for_each(|(x, y)| *x -= r * y);
        }
        let norm = dot(&c, &c).sqrt();
        if norm > 0.0 {
            q.push(c.into_iter().map(|x| x / norm).collect());
        }
    }
    let mut r = samples.to_vec();
    for u in &q {
        let c = dot(u, &r);
        r.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
    }
    (dot(&r, &r) / n as f64).sqrt()
}

/// max_t |x₂(t) − ξ(t)| / δ, where x₂ comes from the full system started at
/// (x₁, y₁, δ, 0) and ξ solves ξ̈ = α(x₁(t))ξ, ξ(0) = δ, ξ̇(0) = 0 along the
/// trajectory on Γ.
pub fn variational_consistency(
    pot: &NumericPotential,
    init: [f64; 2],
    delta: f64,
    dt: f64,
    t_end: f64,
) -> Result<f64, DynamicsError> {
    let steps = check_step(dt, t_end)?;
    if pot.source.is_none() {
        return Err(DynamicsError::NotInvariant);
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    let field = |s: &[f64; 8]| {
        let (g1, g2) = pot.gradient(s[0], s[2]);
        let a = pot.alpha.eval1(s[4]);
        [s[1], -g1, s[3], -g2, s[5], -pot.dphi.eval1(s[4]), s[7], a * s[6]]
    };
    let mut s = [init[0], init[1], delta, 0.0, init[0], init[1], delta, 0.0];
    let mut worst = 0.0f64;
    for _ in 0..steps {
        s = rk4(&s, dt, &field);
        if s.iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::NonFinite);
        }
        worst = worst.max((s[2] - s[6]).abs());
    }
    Ok(worst / delta)
}
