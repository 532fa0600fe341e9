//! Jet polynomials in α, φ and y₁, the vector field X_h acting on them, and
//! the coefficient table E_{n,k} of X_hⁿα = Σ_k E_{n,k} y₁ᵏ.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::rational::rat;
use crate::algebra::{MPoly, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JetError {
    #[error("symbol `{0}` is not allowed here")]
    ForeignSymbol(Var),
    #[error("phi_0 never occurs: X_h only involves derivatives of phi")]
    UnderivedPhi,
    #[error("degree must be non-negative, got {0}")]
    NegativeDegree(i64),
    #[error("table size must be at least 1, got {0}")]
    EmptyTable(usize),
    #[error("recurrence and operator disagree at E_{{{n},{k}}}")]
    RecurrenceMismatch { n: usize, k: usize },
    #[error("{0} must be a polynomial in x1 alone")]
    NotUnivariate(&'static str),
}

/// Differential polynomial in y₁, α_r (r ≥ 0) and φ_s (s ≥ 1).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct JetPoly(MPoly);

impl JetPoly {
    pub fn new(p: MPoly) -> Result<Self, JetError> {
        for v in p.vars() {
            match v {
                Var::Y1 | Var::Alpha(_) => {}
                Var::Phi(0) => return Err(JetError::UnderivedPhi),
                Var::Phi(_) => {}
                other => return Err(JetError::ForeignSymbol(other)),
            }
        }
        Ok(JetPoly(p))
    }

    pub fn zero() -> Self {
        JetPoly(MPoly::zero())
    }

    pub fn alpha(r: u16) -> Self {
        JetPoly(MPoly::var(Var::Alpha(r)))
    }

    pub fn poly(&self) -> &MPoly {
        &self.0
    }

    pub fn into_poly(self) -> MPoly {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Largest derivative index among α_r and φ_s.
    pub fn max_jet_order(&self) -> u16 {
        self.0
            .vars()
            .into_iter()
            .filter_map(|v| match v {
                Var::Alpha(r) | Var::Phi(r) => Some(r),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Total x₁-derivative: α_r → α_{r+1}, φ_s → φ_{s+1}; y₁ is independent of x₁.
    pub fn total_derivative(&self) -> JetPoly {
        let mut out = MPoly::zero();
        for v in self.0.vars() {
            let next = match v {
                Var::Alpha(r) => Var::Alpha(r + 1),
                Var::Phi(s) => Var::Phi(s + 1),
                _ => continue,
            };
            out += &(&self.0.diff(v) * &MPoly::var(next));
        }
        JetPoly(out)
    }

    /// X_h p = y₁·(d/dx₁)p − φ₁·∂p/∂y₁.
    pub fn lie_derivative(&self) -> JetPoly {
        let transport = &MPoly::var(Var::Y1) * self.total_derivative().poly();
        let force = &MPoly::var(Var::Phi(1)) * &self.0.diff(Var::Y1);
        JetPoly(&transport - &force)
    }

    /// Coefficient of y₁ᵏ.
    pub fn y1_coefficient(&self, k: u32) -> JetPoly {
        JetPoly(self.0.coefficient(Var::Y1, k))
    }
}

impl std::fmt::Display for JetPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// E_{n,k} for 1 ≤ n ≤ max_n, 0 ≤ k ≤ n.
#[derive(Clone, Debug)]
pub struct EnkTable {
    pub max_n: usize,
    entries: BTreeMap<(usize, usize), JetPoly>,
}

impl EnkTable {
    pub fn get(&self, n: usize, k: usize) -> JetPoly {
        self.entries.get(&(n, k)).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &JetPoly)> {
        self.entries.iter()
    }

    /// Compares every row with the y₁-coefficients of X_hⁿα₀.
    pub fn check_against_operator(&self) -> Result<(), JetError> {
        let mut iterate = JetPoly::alpha(0);
        for n in 1..=self.max_n {
            iterate = iterate.lie_derivative();
            let top = iterate.poly().degree(Var::Y1) as usize;
            for k in 0..=n.max(top) {
                if iterate.y1_coefficient(k as u32) != self.get(n, k) {
                    return Err(JetError::RecurrenceMismatch { n, k });
                }
            }
        }
        Ok(())
    }
}

/// Builds the table from E_{n+1,k} = (d/dx₁)E_{n,k−1} − (k+1)·E_{n,k+1}·φ₁, E_{1,1} = α₁.
pub fn enk_table(max_n: usize) -> Result<EnkTable, JetError> {
    if max_n < 1 {
        return Err(JetError::EmptyTable(max_n));
    }
    let mut entries = BTreeMap::new();
    entries.insert((1, 1), JetPoly::alpha(1));
    entries.insert((1, 0), JetPoly::zero());
    let phi1 = MPoly::var(Var::Phi(1));
    for n in 1..max_n {
        for k in 0..=n + 1 {
            let mut value = MPoly::zero();
            if k >= 1 {
                if let Some(prev) = entries.get(&(n, k - 1)) {
                    value += prev.total_derivative().poly();
                }
            }
            if let Some(next) = entries.get(&(n, k + 1)) {
                value -= &(&next.poly().scale(&rat(k as i64 + 1)) * &phi1);
            }
            entries.insert((n + 1, k), JetPoly(value));
        }
    }
    Ok(EnkTable { max_n, entries })
}

/// One member E_{n,k} of a condition set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub n: usize,
    pub k: usize,
    pub poly: JetPoly,
}

/// The nonzero E_{d+1,k}: their joint vanishing on Γ makes every NVE
/// coefficient a(t) a polynomial of degree at most d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffCondition {
    pub degree: usize,
    pub conditions: Vec<Condition>,
}

impl DiffCondition {
    pub fn get(&self, k: usize) -> Option<&JetPoly> {
        self.conditions.iter().find(|c| c.k == k).map(|c| &c.poly)
    }
}

/// Conditions for a degree-d polynomial NVE coefficient, ordered by decreasing k.
pub fn generate_conditions(degree: i64) -> Result<DiffCondition, JetError> {
    if degree < 0 {
        return Err(JetError::NegativeDegree(degree));
    }
    let d = degree as usize;
    let table = enk_table(d + 1)?;
    let conditions = (0..=d + 1)
        .rev()
        .map(|k| Condition {
            n: d + 1,
            k,
            poly: table.get(d + 1, k),
        })
        .filter(|c| !c.poly.is_zero())
        .collect();
    Ok(DiffCondition { degree: d, conditions })
}

/// X_h applied to a concrete polynomial in (x₁, y₁).
pub fn apply_vector_field(f: &MPoly, dphi: &MPoly) -> MPoly {
    &(&MPoly::var(Var::Y1) * &f.diff(Var::X1)) - &(dphi * &f.diff(Var::Y1))
}

/// Substitutes a_k ↦ X_hᵏα for concrete α(x₁), φ(x₁).
pub fn pullback_condition(q: &MPoly, alpha: &MPoly, phi: &MPoly) -> Result<MPoly, JetError> {
    let mut max_k = 0u16;
    for v in q.vars() {
        match v {
            Var::Nve(k) => max_k = max_k.max(k),
            other => return Err(JetError::ForeignSymbol(other)),
        }
    }
    for (name, p) in [("alpha", alpha), ("phi", phi)] {
        if p.vars().iter().any(|&v| v != Var::X1) {
            return Err(JetError::NotUnivariate(name));
        }
    }
    let dphi = phi.diff(Var::X1);
    let mut iterates = vec![alpha.clone()];
    for k in 1..=max_k as usize {
        let next = apply_vector_field(&iterates[k - 1], &dphi);
        iterates.push(next);
    }
    let mut out = q.clone();
    for (k, value) in iterates.iter().enumerate() {
        out = out.substitute(Var::Nve(k as u16), value);
    }
    Ok(out)
}
