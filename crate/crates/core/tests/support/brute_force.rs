// Brute-force verdict for the generic branch at b = c = e = 1: intersect C0
// and C1 numerically (resultant in K3, complex roots in K1/K2), then test each
// intersection point against every remaining form. Shared by the oracle test
// and the acceptance run.

use std::collections::BTreeMap;

use hamnve_core::algebra::rational::to_f64;
use hamnve_core::certify::{
    branch_basis, build_q, conic_incompatibility, extract_forms, reduced_equations, QuadraticForm, Specialization,
    Verdict,
};
use hamnve_core::ode::{tabulated, Branch};
use hamnve_core::{Rational, Var};
use num_complex::Complex64 as C;

type Mat = [[f64; 3]; 3];

fn numeric(f: &QuadraticForm, at: &BTreeMap<Var, Rational>) -> Mat {
    let g = f.evaluate(at);
    let mut m = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            m[a][b] = g.matrix[a][b].constant_value().map(|r| to_f64(&r)).unwrap();
        }
    }
    m
}

fn eval(m: &Mat, k: &[C; 3]) -> C {
    let mut s = C::new(0.0, 0.0);
    for a in 0..3 {
        for b in 0..3 {
            s += k[a] * k[b] * m[a][b];
        }
    }
    s
}

fn mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, x) in p.iter().enumerate() {
        for (j, y) in q.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn sub(p: &[f64], q: &[f64]) -> Vec<f64> {
    let n = p.len().max(q.len());
    (0..n).map(|i| p.get(i).unwrap_or(&0.0) - q.get(i).unwrap_or(&0.0)).collect()
}

/// C = a2·K3² + a1·K3 + a0 with K2 = 1, coefficients as polynomials in t = K1.
fn k3_coeffs(m: &Mat) -> [Vec<f64>; 3] {
    [
        vec![m[1][1], 2.0 * m[0][1], m[0][0]],
        vec![2.0 * m[1][2], 2.0 * m[0][2]],
        vec![m[2][2]],
    ]
}

fn resultant(p: &Mat, q: &Mat) -> Vec<f64> {
    let [a0, a1, a2] = k3_coeffs(p);
    let [b0, b1, b2] = k3_coeffs(q);
    let u = sub(&mul(&a2, &b0), &mul(&a0, &b2));
    let v = sub(&mul(&a2, &b1), &mul(&a1, &b2));
    let w = sub(&mul(&a1, &b0), &mul(&a0, &b1));
    sub(&mul(&u, &u), &mul(&v, &w))
}

fn roots(coeffs: &[f64]) -> Vec<C> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.abs() < 1e-12 * coeffs.iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
        c.pop();
    }
    let n = c.len() - 1;
    let lead = c[n];
    let monic: Vec<C> = c.iter().map(|x| C::new(x / lead, 0.0)).collect();
    let horner = |z: C| monic.iter().rev().fold(C::new(0.0, 0.0), |acc, &k| acc * z + k);
    let mut zs: Vec<C> = (0..n).map(|k| C::new(0.4, 0.9).powu(k as u32)).collect();
    for _ in 0..2000 {
        for i in 0..n {
            let mut den = C::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= zs[i] - zs[j];
                }
            }
            let step = horner(zs[i]) / den;
            zs[i] -= step;
        }
    }
    zs
}

/// Incompatible iff every common point of C0, C1 misses some other form.
fn oracle(ms: &[Mat]) -> bool {
    let res = resultant(&ms[0], &ms[1]);
    assert!(res.iter().any(|x| x.abs() > 1e-9), "C0 and C1 share a component");
    let mut points: Vec<[C; 2]> = roots(&res).into_iter().map(|t| [t, C::new(1.0, 0.0)]).collect();
    if res.len() < 5 || res[4].abs() < 1e-12 {
        points.push([C::new(1.0, 0.0), C::new(0.0, 0.0)]);
    }
    for [k1, k2] in points {
        // K3 from C0 (quadratic or linear), keeping the candidate closest to C1 = 0.
        let m = &ms[0];
        let a2 = C::new(m[2][2], 0.0);
        let a1 = (k1 * m[0][2] + k2 * m[1][2]) * 2.0;
        let a0 = k1 * k1 * m[0][0] + k1 * k2 * (2.0 * m[0][1]) + k2 * k2 * m[1][1];
        let cands: Vec<C> = if a2.norm() > 1e-12 {
            let disc = (a1 * a1 - a2 * a0 * 4.0).sqrt();
            vec![(-a1 + disc) / (a2 * 2.0), (-a1 - disc) / (a2 * 2.0)]
        } else {
            vec![-a0 / a1]
        };
        let k = cands
            .into_iter()
            .map(|k3| {
                let v = [k1, k2, k3];
                let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                v.map(|z| z / n)
            })
            .min_by(|x, y| eval(&ms[1], x).norm().total_cmp(&eval(&ms[1], y).norm()))
            .unwrap();
        let misses = ms.iter().skip(2).any(|m| {
            let scale = m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
            scale > 0.0 && eval(m, &k).norm() / scale > 1e-6
        });
        if !misses {
            return false;
        }
    }
    true
}

/// (library says incompatible, oracle says incompatible).
pub fn generic_unit_point(use_tabulated: bool) -> (bool, bool) {
    let (l2, nl2, _) = reduced_equations().unwrap();
    let nl = if use_tabulated {
        tabulated::nonlinear_for(Branch::Generic)
    } else {
        nl2
    };
    let (_, basis) = branch_basis(&l2, Branch::Generic, 8).unwrap();
    let forms = extract_forms(&build_q(&nl, &basis).unwrap(), Var::X).unwrap();
    let at: BTreeMap<Var, Rational> = [Var::B, Var::C, Var::E]
        .into_iter()
        .map(|v| (v, Rational::from_integer(1.into())))
        .collect();
    let ms: Vec<Mat> = forms.iter().map(|f| numeric(f, &at)).collect();
    let expected = oracle(&ms);
    let spec = Specialization::new(Branch::Generic, at).unwrap();
    let got = conic_incompatibility(&forms, &spec).unwrap().verdict;
    (matches!(got, Verdict::Incompatible), expected)
}

