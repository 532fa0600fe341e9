//! Common projective zeros of a system of ternary quadratic forms over ℚ.
//!
//! Every common zero with (K₁:K₂) defined is a root of each Res_K₃(Cᵢ, Cⱼ),
//! so a constant gcd of those binary eliminants leaves only (0:0:1) to test.
//! Each step is recorded in a transcript that `verify_transcript` replays
//! from the form texts alone.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::forms::QuadraticForm;
use super::CertifyError;
use crate::algebra::gcd::{poly_gcd_all, univariate_gcd};
use crate::algebra::rational::{format_rational, rat, rationalize, sqrt_exact, to_f64, Rational};
use crate::algebra::resultant::resultant;
use crate::algebra::{MPoly, Var};
use crate::ode::Branch;
use crate::parse::{format_canonical, parse_poly, Symbols};

/// Exact parameter values for one trial, checked against a branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specialization {
    pub branch: Option<Branch>,
    pub values: BTreeMap<Var, Rational>,
}

impl Specialization {
    /// Zero parameters of the branch may be omitted; live ones must be nonzero.
    pub fn new(branch: Branch, mut values: BTreeMap<Var, Rational>) -> Result<Self, CertifyError> {
        for v in branch.zero_params() {
            match values.get(&v) {
                Some(x) if !x.is_zero() => {
                    return Err(CertifyError::BranchConstraint(format!(
                        "{v} must be 0 on branch {}",
                        branch.name()
                    )))
                }
                _ => {
                    values.insert(v, Rational::zero());
                }
            }
        }
        for v in branch.live_params() {
            match values.get(&v) {
                None => return Err(CertifyError::MissingParameter(v)),
                Some(x) if x.is_zero() => {
                    return Err(CertifyError::BranchConstraint(format!(
                        "{v} must be nonzero on branch {}",
                        branch.name()
                    )))
                }
                _ => {}
            }
        }
        if let Some(v) = values
            .keys()
            .find(|v| !branch.zero_params().contains(v) && !branch.live_params().contains(v))
        {
            return Err(CertifyError::BranchConstraint(format!("{v} is not a parameter")));
        }
        Ok(Specialization {
            branch: Some(branch),
            values,
        })
    }

    /// No branch constraints; for forms that are already numeric or ad hoc.
    pub fn unconstrained(values: BTreeMap<Var, Rational>) -> Self {
        Specialization { branch: None, values }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Point([Rational; 3]),
    /// A common zero exists but has irrational coordinates.
    Algebraic(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Point(k) => write!(
                f,
                "({} : {} : {})",
                format_rational(&k[0]),
                format_rational(&k[1]),
                format_rational(&k[2])
            ),
            Witness::Algebraic(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Incompatible,
    Compatible(Witness),
    /// Candidate points exist whose coordinates could not be pinned down.
    Inconclusive(String),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Incompatible => "incompatible",
            Verdict::Compatible(_) => "compatible",
            Verdict::Inconclusive(_) => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    /// gcd of all forms.
    CommonFactor { gcd: String },
    /// A binary form in (K1, K2) from the ideal: a K3-free form or a resultant.
    Eliminant {
        first: usize,
        second: Option<usize>,
        result: String,
    },
    BinaryGcd { gcd: String },
    /// Value of one form at a point; nonzero excludes it.
    PointCheck { point: [String; 3], form: usize, value: String },
    /// Two forms sharing the linear factor `factor`.
    SharedFactor { first: usize, second: usize, factor: String },
    /// gcd of all forms restricted to the line `factor = 0`.
    LineCheck { gcd: String },
    Witness { point: String },
}

impl Step {
    fn render(&self) -> String {
        match self {
            Step::CommonFactor { gcd } => format!("common {gcd}"),
            Step::Eliminant { first, second, result } => match second {
                Some(j) => format!("res {first} {j} {result}"),
                None => format!("direct {first} {result}"),
            },
            Step::BinaryGcd { gcd } => format!("bgcd {gcd}"),
            Step::PointCheck { point, form, value } => {
                format!("point {} {} {} form {form} = {value}", point[0], point[1], point[2])
            }
            Step::SharedFactor { first, second, factor } => format!("shared {first} {second} {factor}"),
            Step::LineCheck { gcd } => format!("line {gcd}"),
            Step::Witness { point } => format!("witness {point}"),
        }
    }
}

/// Replayable record of one incompatibility decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transcript {
    /// Nonzero specialized forms as (x-power, text).
    pub forms: Vec<(u32, String)>,
    pub steps: Vec<Step>,
    pub verdict: String,
    pub digest: String,
}

impl Transcript {
    fn canonical(forms: &[(u32, String)], steps: &[Step], verdict: &str) -> String {
        let mut out = String::new();
        for (i, f) in forms {
            out.push_str(&format!("form {i} {f}\n"));
        }
        for s in steps {
            out.push_str(&s.render());
            out.push('\n');
        }
        out.push_str(verdict);
        out
    }

    fn seal(forms: Vec<(u32, String)>, steps: Vec<Step>, verdict: &Verdict) -> Transcript {
        let verdict = verdict.label().to_string();
        let digest = hex::encode(Sha256::digest(Transcript::canonical(&forms, &steps, &verdict).as_bytes()));
        Transcript {
            forms,
            steps,
            verdict,
            digest,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConicOutcome {
    pub verdict: Verdict,
    pub transcript: Transcript,
}

/// Decides whether the specialized forms have a common zero in P²(ℚ̄).
pub fn conic_incompatibility(forms: &[QuadraticForm], spec: &Specialization) -> Result<ConicOutcome, CertifyError> {
    let mut numeric: Vec<(u32, [[Rational; 3]; 3])> = Vec::new();
    for f in forms {
        let g = f.evaluate(&spec.values);
        let mut m: [[Rational; 3]; 3] = Default::default();
        for a in 0..3 {
            for b in 0..3 {
                m[a][b] = match g.matrix[a][b].constant_value() {
                    Some(c) => c,
                    None => {
                        let v = *g.matrix[a][b].vars().iter().next().expect("nonconstant");
                        return Err(CertifyError::MissingParameter(v));
                    }
                };
            }
        }
        if m.iter().flatten().any(|c| !c.is_zero()) {
            numeric.push((f.index, m));
        }
    }
    if numeric.len() < 2 {
        return Err(CertifyError::TooFewForms(numeric.len()));
    }
    let system = System::new(numeric.iter().map(|(_, m)| m.clone()).collect());
    let mut steps = Vec::new();
    let verdict = system.decide(&mut steps);
    let texts = numeric
        .iter()
        .zip(&system.polys)
        .map(|((i, _), p)| (*i, format_canonical(p)))
        .collect();
    Ok(ConicOutcome {
        transcript: Transcript::seal(texts, steps, &verdict),
        verdict,
    })
}

struct System {
    matrices: Vec<[[Rational; 3]; 3]>,
    polys: Vec<MPoly>,
}

fn k(a: usize) -> MPoly {
    MPoly::var(Var::K[a])
}

fn point_text(p: &[Rational; 3]) -> [String; 3] {
    [format_rational(&p[0]), format_rational(&p[1]), format_rational(&p[2])]
}

impl System {
    fn new(matrices: Vec<[[Rational; 3]; 3]>) -> Self {
        let polys = matrices
            .iter()
            .map(|m| {
                let mut out = MPoly::zero();
                for a in 0..3 {
                    for b in 0..3 {
                        if !m[a][b].is_zero() {
                            out += &(&k(a) * &k(b)).scale(&m[a][b]);
                        }
                    }
                }
                out
            })
            .collect();
        System { matrices, polys }
    }

    fn from_polys(polys: Vec<MPoly>) -> Result<Self, CertifyError> {
        let matrices = polys
            .iter()
            .map(|p| {
                let f = QuadraticForm::from_poly(0, p)?;
                let mut m: [[Rational; 3]; 3] = Default::default();
                for a in 0..3 {
                    for b in 0..3 {
                        m[a][b] = f.matrix[a][b]
                            .constant_value()
                            .ok_or_else(|| CertifyError::Transcript("form has symbolic entries".into()))?;
                    }
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>, CertifyError>>()?;
        Ok(System { matrices, polys })
    }

    fn value_at(&self, i: usize, p: &[Rational; 3]) -> Rational {
        let m = &self.matrices[i];
        let mut s = Rational::zero();
        for a in 0..3 {
            for b in 0..3 {
                s += &m[a][b] * &p[a] * &p[b];
            }
        }
        s
    }

    /// First form not vanishing at `p`, with its value.
    fn separating_form(&self, p: &[Rational; 3]) -> Option<(usize, Rational)> {
        (0..self.matrices.len())
            .map(|i| (i, self.value_at(i, p)))
            .find(|(_, v)| !v.is_zero())
    }

    fn is_common_zero(&self, p: &[Rational; 3]) -> bool {
        self.separating_form(p).is_none()
    }

    fn point_step(&self, p: &[Rational; 3], steps: &mut Vec<Step>) -> bool {
        match self.separating_form(p) {
            Some((form, value)) => {
                steps.push(Step::PointCheck {
                    point: point_text(p),
                    form,
                    value: format_rational(&value),
                });
                true
            }
            None => false,
        }
    }

    fn compatible(p: [Rational; 3], steps: &mut Vec<Step>) -> Verdict {
        let w = Witness::Point(p);
        steps.push(Step::Witness { point: w.to_string() });
        Verdict::Compatible(w)
    }

    fn decide(&self, steps: &mut Vec<Step>) -> Verdict {
        let common = poly_gcd_all(self.polys.iter()).expect("nonzero forms");
        steps.push(Step::CommonFactor {
            gcd: format_canonical(&common),
        });
        if !common.is_constant() {
            return match point_on(&common) {
                Ok(p) => System::compatible(p, steps),
                Err(w) => Verdict::Compatible(w),
            };
        }

        let apex = [rat(0), rat(0), rat(1)];
        if !self.point_step(&apex, steps) {
            return System::compatible(apex, steps);
        }

        let mut bgcd: Option<MPoly> = None;
        let mut shared: Option<(usize, usize, MPoly)> = None;
        let n = self.polys.len();
        let mut record = |first: usize, second: Option<usize>, r: MPoly, steps: &mut Vec<Step>| -> bool {
            steps.push(Step::Eliminant {
                first,
                second,
                result: format_canonical(&r),
            });
            let g = match bgcd.take() {
                None => r.primitive_integer(),
                Some(g) => poly_gcd_all([&g, &r]).expect("nonzero"),
            };
            let done = g.is_constant();
            bgcd = Some(g);
            done
        };
        let mut finished = false;
        for i in 0..n {
            if !self.polys[i].contains(Var::K3) && record(i, None, self.polys[i].clone(), steps) {
                finished = true;
                break;
            }
        }
        'pairs: for i in 0..n {
            if finished {
                break;
            }
            if !self.polys[i].contains(Var::K3) {
                continue;
            }
            for j in i + 1..n {
                if !self.polys[j].contains(Var::K3) {
                    continue;
                }
                let r = resultant(&self.polys[i], &self.polys[j], Var::K3).expect("both involve K3");
                if r.is_zero() {
                    if shared.is_none() {
                        let g = poly_gcd_all([&self.polys[i], &self.polys[j]]).expect("nonzero");
                        if g.total_degree() == 1 {
                            shared = Some((i, j, g));
                        }
                    }
                    continue;
                }
                if record(i, Some(j), r, steps) {
                    break 'pairs;
                }
            }
        }

        match bgcd {
            Some(g) => {
                steps.push(Step::BinaryGcd {
                    gcd: format_canonical(&g),
                });
                if g.is_constant() {
                    return Verdict::Incompatible;
                }
                self.search_binary(&g, steps)
            }
            None => match shared {
                Some((i, j, l)) => self.line_fallback(i, j, &l, steps),
                None => Verdict::Inconclusive("no usable eliminant".into()),
            },
        }
    }

    /// Candidates are (k1 : k2 : t) with (k1 : k2) a root of the binary gcd.
    fn search_binary(&self, g: &MPoly, steps: &mut Vec<Step>) -> Verdict {
        let (roots, complete) = binary_roots(g);
        for (k1, k2) in roots {
            let polys: Vec<Vec<Rational>> = self
                .matrices
                .iter()
                .map(|m| {
                    let c0 = &m[0][0] * &k1 * &k1 + (&m[0][1] + &m[1][0]) * &k1 * &k2 + &m[1][1] * &k2 * &k2;
                    let c1 = (&m[0][2] + &m[2][0]) * &k1 + (&m[1][2] + &m[2][1]) * &k2;
                    vec![c0, c1, m[2][2].clone()]
                })
                .collect();
            let mut gcd: Vec<Rational> = Vec::new();
            for p in &polys {
                gcd = univariate_gcd(&gcd, p);
            }
            match gcd.len() {
                0 => return System::compatible([k1, k2, rat(0)], steps),
                1 => continue,
                2 => {
                    let t = -&gcd[0] / &gcd[1];
                    return System::compatible([k1, k2, t], steps);
                }
                _ => {
                    let disc = &gcd[1] * &gcd[1] - rat(4) * &gcd[0];
                    return match sqrt_exact(&disc) {
                        Some(s) => {
                            let t = (-&gcd[1] + s) / rat(2);
                            System::compatible([k1, k2, t], steps)
                        }
                        None => Verdict::Compatible(Witness::Algebraic(format!(
                            "({} : {} : t) with t^2 + {}*t + {} = 0",
                            format_rational(&k1),
                            format_rational(&k2),
                            format_rational(&gcd[1]),
                            format_rational(&gcd[0])
                        ))),
                    };
                }
            }
        }
        if complete {
            Verdict::Incompatible
        } else {
            Verdict::Inconclusive(format!("binary gcd {} has irrational roots", format_canonical(g)))
        }
    }

    /// Forms i, j share a line l: common zeros lie on l or at the point
    /// where their cofactors meet.
    fn line_fallback(&self, i: usize, j: usize, l: &MPoly, steps: &mut Vec<Step>) -> Verdict {
        steps.push(Step::SharedFactor {
            first: i,
            second: j,
            factor: format_canonical(l),
        });
        let (p, q) = line_span(&linear_coeffs(l));
        let restricted: Vec<MPoly> = self.matrices.iter().map(|m| restrict_to_line(m, &p, &q)).collect();
        let g = poly_gcd_all(restricted.iter());
        steps.push(Step::LineCheck {
            gcd: g.as_ref().map(format_canonical).unwrap_or_else(|| "0".into()),
        });
        match g {
            None => return System::compatible(p, steps),
            Some(g) if !g.is_constant() => {
                let (roots, complete) = binary_roots(&g);
                if let Some((s, t)) = roots.into_iter().next() {
                    let point = [0, 1, 2].map(|a| &s * &p[a] + &t * &q[a]);
                    return System::compatible(point, steps);
                }
                if !complete {
                    return Verdict::Compatible(Witness::Algebraic(format!(
                        "points of the line {} = 0 over a number field",
                        format_canonical(l)
                    )));
                }
            }
            Some(_) => {}
        }
        let fi = self.polys[i].div_exact(l).expect("shared factor divides");
        let fj = self.polys[j].div_exact(l).expect("shared factor divides");
        let point = cross(&linear_coeffs(&fi), &linear_coeffs(&fj));
        if point.iter().all(Zero::is_zero) || self.is_common_zero(&point) {
            return System::compatible(point, steps);
        }
        self.point_step(&point, steps);
        Verdict::Incompatible
    }
}

fn linear_coeffs(l: &MPoly) -> [Rational; 3] {
    [0, 1, 2].map(|a| l.coefficient(Var::K[a], 1).constant_value().unwrap_or_default())
}

fn cross(a: &[Rational; 3], b: &[Rational; 3]) -> [Rational; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Two points spanning the plane a·K = 0.
fn line_span(a: &[Rational; 3]) -> ([Rational; 3], [Rational; 3]) {
    let pivot = (0..3).rev().find(|&i| !a[i].is_zero()).expect("nonzero line");
    let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    let basis = |j: usize| {
        let mut v: [Rational; 3] = Default::default();
        v[j] = rat(1);
        v[pivot] = -&a[j] / &a[pivot];
        v
    };
    (basis(others[0]), basis(others[1]))
}

/// f(s·p + t·q) as a binary form in (K1, K2) standing for (s, t).
fn restrict_to_line(m: &[[Rational; 3]; 3], p: &[Rational; 3], q: &[Rational; 3]) -> MPoly {
    let v: Vec<MPoly> = (0..3)
        .map(|a| &k(0).scale(&p[a]) + &k(1).scale(&q[a]))
        .collect();
    let mut out = MPoly::zero();
    for a in 0..3 {
        for b in 0..3 {
            if !m[a][b].is_zero() {
                out += &(&v[a] * &v[b]).scale(&m[a][b]);
            }
        }
    }
    out
}

/// A rational zero of a linear or quadratic ternary form, or a description
/// of an irrational one.
fn point_on(g: &MPoly) -> Result<[Rational; 3], Witness> {
    if g.total_degree() == 1 {
        let a = linear_coeffs(g);
        if let Some(i) = (0..3).find(|&i| a[i].is_zero()) {
            let mut p: [Rational; 3] = Default::default();
            p[i] = rat(1);
            return Ok(p);
        }
        return Ok([a[1].clone(), -&a[0], rat(0)]);
    }
    let on_line = g.evaluate(&BTreeMap::from([(Var::K3, rat(0))]));
    if on_line.is_zero() {
        return Ok([rat(1), rat(0), rat(0)]);
    }
    let (roots, _) = binary_roots(&on_line);
    if let Some((k1, k2)) = roots.into_iter().next() {
        return Ok([k1, k2, rat(0)]);
    }
    Err(Witness::Algebraic(format!(
        "points of the conic {} = 0 over a quadratic field",
        format_canonical(g)
    )))
}

/// Rational projective roots (K1 : K2) of a binary form in K1, K2, and
/// whether every root was found.
pub(crate) fn binary_roots(h: &MPoly) -> (Vec<(Rational, Rational)>, bool) {
    let mut roots = Vec::new();
    if h.is_zero() {
        return (roots, false);
    }
    let deg = h.total_degree();
    let coeffs: Vec<Rational> = (0..=deg)
        .map(|i| {
            h.coefficient(Var::K1, i)
                .evaluate(&BTreeMap::from([(Var::K2, rat(1))]))
                .constant_value()
                .unwrap_or_default()
        })
        .collect();
    let mut u = coeffs;
    while u.last().is_some_and(Zero::is_zero) {
        u.pop();
    }
    if u.len() - 1 < deg as usize {
        roots.push((rat(1), rat(0)));
    }
    let du: Vec<Rational> = u.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64)).collect();
    let g = univariate_gcd(&u, &du);
    let sf = if g.len() > 1 { divide(&u, &g) } else { u };
    let n = sf.len() - 1;
    let found = match n {
        0 => 0,
        1 => {
            roots.push((-&sf[0] / &sf[1], rat(1)));
            1
        }
        2 => {
            let disc = &sf[1] * &sf[1] - rat(4) * &sf[0] * &sf[2];
            match sqrt_exact(&disc) {
                Some(s) => {
                    let two_a = rat(2) * &sf[2];
                    roots.push(((-&sf[1] + &s) / &two_a, rat(1)));
                    roots.push(((-&sf[1] - &s) / &two_a, rat(1)));
                    2
                }
                None => 0,
            }
        }
        _ => {
            let mut count = 0;
            for z in durand_kerner(&sf) {
                if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
                    continue;
                }
                for max_den in [1_000i64, 1_000_000, 1_000_000_000] {
                    let Some(r) = rationalize(z.re, max_den) else { continue };
                    if horner(&sf, &r).is_zero() && !roots.iter().any(|(a, b): &(Rational, Rational)| b.is_one() && a == &r) {
                        roots.push((r, rat(1)));
                        count += 1;
                        break;
                    }
                }
            }
            count
        }
    };
    (roots, found == n)
}

fn horner(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Exact quotient of ascending coefficient lists.
fn divide(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![Rational::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &b[db];
        for (j, bc) in b.iter().enumerate() {
            r[i + j] = &r[i + j] - &c * bc;
        }
        q[i] = c;
    }
    q
}

fn durand_kerner(p: &[Rational]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let lead = p[n].clone();
    let c: Vec<f64> = p.iter().map(|a| to_f64(&(a / &lead))).collect();
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32) * radius.min(1e6)).collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                continue;
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    z
}

/// Replays a transcript from its form texts; succeeds iff every recorded
/// quantity recomputes exactly and the recorded verdict follows.
pub fn verify_transcript(t: &Transcript) -> Result<(), CertifyError> {
    let bad = |msg: &str| Err(CertifyError::Transcript(msg.to_string()));
    let expected = hex::encode(Sha256::digest(Transcript::canonical(&t.forms, &t.steps, &t.verdict).as_bytes()));
    if expected != t.digest {
        return bad("digest mismatch");
    }
    let parse = |s: &str| parse_poly(s, Symbols::Any).map_err(|e| CertifyError::Transcript(e.to_string()));
    let polys = t.forms.iter().map(|(_, s)| parse(s)).collect::<Result<Vec<_>, _>>()?;
    let system = System::from_polys(polys)?;
    let n = system.polys.len();
    let to_point = |p: &[String; 3]| -> Result<[Rational; 3], CertifyError> {
        let mut out: [Rational; 3] = Default::default();
        for a in 0..3 {
            out[a] = parse(&p[a])?
                .constant_value()
                .ok_or_else(|| CertifyError::Transcript("symbolic point".into()))?;
        }
        Ok(out)
    };

    let mut eliminants = Vec::new();
    let mut binary_gcd_ok = false;
    let mut excluded = Vec::new();
    let mut line: Option<(usize, usize, MPoly)> = None;
    let mut line_ok = false;
    let mut witness = None;
    for step in &t.steps {
        match step {
            Step::CommonFactor { gcd } => {
                if poly_gcd_all(system.polys.iter()) != Some(parse(gcd)?) {
                    return bad("common factor does not recompute");
                }
            }
            Step::Eliminant { first, second, result } => {
                let r = match second {
                    None if *first < n && !system.polys[*first].contains(Var::K3) => system.polys[*first].clone(),
                    Some(j) if *first < n && *j < n => resultant(&system.polys[*first], &system.polys[*j], Var::K3)?,
                    _ => return bad("eliminant source is invalid"),
                };
                if r != parse(result)? || r.is_zero() {
                    return bad("eliminant does not recompute");
                }
                eliminants.push(r);
            }
            Step::BinaryGcd { gcd } => {
                let g = poly_gcd_all(eliminants.iter());
                if g.as_ref() != Some(&parse(gcd)?) {
                    return bad("binary gcd does not recompute");
                }
                binary_gcd_ok = g.is_some_and(|g| g.is_constant());
            }
            Step::PointCheck { point, form, value } => {
                let p = to_point(point)?;
                if *form >= n || system.value_at(*form, &p) != parse(value)?.constant_value().unwrap_or_default() {
                    return bad("point value does not recompute");
                }
                if !system.value_at(*form, &p).is_zero() {
                    excluded.push(p);
                }
            }
            Step::SharedFactor { first, second, factor } => {
                let l = parse(factor)?;
                if *first >= n
                    || *second >= n
                    || l.total_degree() != 1
                    || system.polys[*first].div_exact(&l).is_none()
                    || system.polys[*second].div_exact(&l).is_none()
                {
                    return bad("shared factor does not divide");
                }
                line = Some((*first, *second, l));
            }
            Step::LineCheck { gcd } => {
                let Some((_, _, l)) = &line else { return bad("line check without a line") };
                let (p, q) = line_span(&linear_coeffs(l));
                let restricted: Vec<MPoly> = system.matrices.iter().map(|m| restrict_to_line(m, &p, &q)).collect();
                let g = poly_gcd_all(restricted.iter());
                if g.as_ref().map(format_canonical).unwrap_or_else(|| "0".into()) != *gcd {
                    return bad("line gcd does not recompute");
                }
                line_ok = g.is_some_and(|g| g.is_constant());
            }
            Step::Witness { point } => witness = Some(point.clone()),
        }
    }

    let apex = [rat(0), rat(0), rat(1)];
    match t.verdict.as_str() {
        "incompatible" => {
            let by_eliminants = binary_gcd_ok && excluded.contains(&apex);
            let by_line = line_ok
                && line.as_ref().is_some_and(|(i, j, l)| {
                    let fi = system.polys[*i].div_exact(l).expect("checked");
                    let fj = system.polys[*j].div_exact(l).expect("checked");
                    excluded.contains(&cross(&linear_coeffs(&fi), &linear_coeffs(&fj)))
                });
            if by_eliminants || by_line {
                Ok(())
            } else {
                bad("incompatible verdict does not follow from the steps")
            }
        }
        "compatible" => {
            let Some(w) = witness else { return Ok(()) };
            let coords: Vec<String> = w
                .trim_matches(|c| c == '(' || c == ')')
                .split(':')
                .map(|s| s.trim().to_string())
                .collect();
            if coords.len() != 3 {
                return bad("malformed witness");
            }
            let p = to_point(&[coords[0].clone(), coords[1].clone(), coords[2].clone()])?;
            if p.iter().all(Zero::is_zero) || !system.is_common_zero(&p) {
                return bad("witness is not a common zero");
            }
            Ok(())
        }
        "inconclusive" => Ok(()),
        _ => bad("unknown verdict"),
    }
}
