use num_traits::{One, Zero};

use super::gcd::poly_gcd_all;
use super::poly::MPoly;
use super::rational::rational_content;
use super::ratfunc::RatFunc;
use super::rational::Rational;
use super::AlgebraError;

/// Integral-domain operations needed by the elimination routines.
pub trait RingElem: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact quotient; `None` when `other` does not divide `self`.
    fn div_exact(&self, other: &Self) -> Option<Self>;
    /// Rough size, used to prefer cheap pivots.
    fn weight(&self) -> usize;
}

impl RingElem for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        (!Zero::is_zero(other)).then(|| self / other)
    }
    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

impl RingElem for MPoly {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn one() -> Self {
        MPoly::one()
    }
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        MPoly::div_exact(self, other)
    }
    fn weight(&self) -> usize {
        self.num_terms()
    }
}

impl RingElem for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        RatFunc::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RatFunc::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RatFunc::mul(self, other)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        self.div(other).ok()
    }
    fn weight(&self) -> usize {
        self.num().num_terms() + self.den().num_terms()
    }
}

fn check_square<T>(m: &[Vec<T>]) -> Result<usize, AlgebraError> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(AlgebraError::NotSquare { rows: n, cols: row.len() });
        }
    }
    Ok(n)
}

/// Determinant: cofactor expansion up to 3×3, Bareiss elimination above.
pub fn determinant<T: RingElem>(m: &[Vec<T>]) -> Result<T, AlgebraError> {
    let n = check_square(m)?;
    Ok(match n {
        0 => T::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        3 => {
            let minor = |r: usize, s: usize, t: usize, u: usize| m[r][t].mul(&m[s][u]).sub(&m[r][u].mul(&m[s][t]));
            m[0][0]
                .mul(&minor(1, 2, 1, 2))
                .sub(&m[0][1].mul(&minor(1, 2, 0, 2)))
                .add(&m[0][2].mul(&minor(1, 2, 0, 1)))
        }
        _ => bareiss(m.to_vec()),
    })
}

/// Fraction-free Bareiss determinant with row pivoting.
pub fn bareiss<T: RingElem>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n {
        let pivot_row = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| a[i][k].weight());
        let Some(p) = pivot_row else {
            return T::zero();
        };
        if p != k {
            a.swap(p, k);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = T::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        det
    }
}

/// Result of fraction-free Gauss-Jordan elimination over a polynomial ring.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Reduced rows; every pivot entry equals `pivot_value`.
    pub rows: Vec<Vec<MPoly>>,
    pub pivot_cols: Vec<usize>,
    pub pivot_value: MPoly,
    /// Pivot polynomials in elimination order.
    pub pivots: Vec<MPoly>,
}

/// Fraction-free Gauss-Jordan on the first `ncols` columns (extra columns ride along).
pub fn fraction_free_gauss_jordan(mut a: Vec<Vec<MPoly>>, ncols: usize) -> Echelon {
    let nrows = a.len();
    let mut prev = MPoly::one();
    let mut r = 0;
    let mut pivot_cols = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows)
            .filter(|&i| !a[i][col].is_zero())
            .min_by_key(|&i| a[i][col].num_terms())
        else {
            continue;
        };
        a.swap(p, r);
        let pivot = a[r][col].clone();
        let width = a[r].len();
        for i in 0..nrows {
            if i == r {
                continue;
            }
            let factor = a[i][col].clone();
            for j in 0..width {
                let v = &(&pivot * &a[i][j]) - &(&factor * &a[r][j]);
                a[i][j] = v.div_exact(&prev).expect("fraction-free division is exact");
            }
        }
        pivot_cols.push(col);
        pivots.push(pivot.clone());
        prev = pivot;
        r += 1;
    }
    a.truncate(nrows);
    Echelon {
        rows: a,
        pivot_cols,
        pivot_value: prev,
        pivots,
    }
}

/// Kernel basis of a polynomial matrix; each vector is primitive over ℤ[params].
pub fn kernel_basis(a: Vec<Vec<MPoly>>, ncols: usize) -> Vec<Vec<MPoly>> {
    let ech = fraction_free_gauss_jordan(a, ncols);
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !ech.pivot_cols.contains(c)) {
        let mut v = vec![MPoly::zero(); ncols];
        v[f] = ech.pivot_value.clone();
        for (i, &pc) in ech.pivot_cols.iter().enumerate() {
            v[pc] = -&ech.rows[i][f];
        }
        basis.push(make_primitive(v));
    }
    basis
}

fn make_primitive(v: Vec<MPoly>) -> Vec<MPoly> {
    let Some(g) = poly_gcd_all(v.iter()) else {
        return v;
    };
    let lead = v.iter().rev().find(|p| !p.is_zero()).map(|p| p.leading_coefficient());
    let out: Vec<MPoly> = v.iter().map(|p| p.div_exact(&g).expect("gcd divides")).collect();
    let mut scalar = rational_content(out.iter().flat_map(|p| p.terms().map(|(_, c)| c)));
    if lead.is_some_and(|c| c < <Rational as Zero>::zero()) {
        scalar = -scalar;
    }
    let inv = <Rational as One>::one() / scalar;
    out.iter().map(|p| p.scale(&inv)).collect()
}

/// Outcome of a parametric linear solve, valid off the degeneration locus.
#[derive(Clone, Debug)]
pub enum LinearSolution {
    Unique(Vec<RatFunc>),
    /// Particular solution plus kernel directions; `free` lists the free unknowns.
    Family {
        particular: Vec<RatFunc>,
        directions: Vec<Vec<RatFunc>>,
        free: Vec<usize>,
    },
    Inconsistent,
}

#[derive(Clone, Debug)]
pub struct ParametricSolution {
    pub solution: LinearSolution,
    /// Nonconstant pivot polynomials; the generic solution may fail where one vanishes.
    pub degeneration: Vec<MPoly>,
}

/// Solves `Σ_j rows[i][j]·u_j = rhs[i]` over the field of fractions of the parameter ring.
pub fn solve_parametric_linear(rows: &[Vec<MPoly>], rhs: &[MPoly]) -> Result<ParametricSolution, AlgebraError> {
    if rows.len() != rhs.len() {
        return Err(AlgebraError::Malformed(format!(
            "{} equations but {} right-hand sides",
            rows.len(),
            rhs.len()
        )));
    }
    let n = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != n) {
        return Err(AlgebraError::Malformed("rows have different lengths".into()));
    }
    let aug: Vec<Vec<MPoly>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let ech = fraction_free_gauss_jordan(aug, n);
    let mut degeneration: Vec<MPoly> = Vec::new();
    for p in &ech.pivots {
        if !p.is_constant() {
            let q = p.primitive_integer();
            if !degeneration.contains(&q) {
                degeneration.push(q);
            }
        }
    }
    let rank = ech.pivot_cols.len();
    if ech.rows[rank..].iter().any(|r| !r[n].is_zero()) {
        return Ok(ParametricSolution {
            solution: LinearSolution::Inconsistent,
            degeneration,
        });
    }
    let d = &ech.pivot_value;
    let mut particular = vec![RatFunc::zero(); n];
    for (i, &pc) in ech.pivot_cols.iter().enumerate() {
        particular[pc] = RatFunc::new(ech.rows[i][n].clone(), d.clone())?;
    }
    if rank == n {
        return Ok(ParametricSolution {
            solution: LinearSolution::Unique(particular),
            degeneration,
        });
    }
    let free: Vec<usize> = (0..n).filter(|c| !ech.pivot_cols.contains(c)).collect();
    let mut directions = Vec::new();
    for &f in &free {
        let mut v = vec![RatFunc::zero(); n];
        v[f] = RatFunc::one();
        for (i, &pc) in ech.pivot_cols.iter().enumerate() {
            v[pc] = RatFunc::new(-&ech.rows[i][f], d.clone())?;
        }
        directions.push(v);
    }
    Ok(ParametricSolution {
        solution: LinearSolution::Family {
            particular,
            directions,
            free,
        },
        degeneration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, ratio};
    use crate::algebra::var::Var;

    fn x() -> MPoly {
        MPoly::var(Var::X)
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&[vec![rat(1)]]).unwrap(), rat(1));
        let tri = vec![
            vec![RatFunc::one(), RatFunc::from_poly(x())],
            vec![RatFunc::zero(), RatFunc::one()],
        ];
        assert_eq!(determinant(&tri).unwrap(), RatFunc::one());
        let w: Vec<Vec<MPoly>> = [MPoly::one(), x(), x().pow(2)]
            .iter()
            .map(|f| vec![f.clone(), f.diff(Var::X), f.diff(Var::X).diff(Var::X)])
            .collect();
        assert_eq!(determinant(&w).unwrap(), MPoly::int(2));
        assert!(determinant(&[vec![rat(1), rat(2)]]).is_err());
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m: Vec<Vec<Rational>> = vec![
            vec![rat(2), rat(-1), rat(0), rat(3)],
            vec![rat(1), rat(4), ratio(1, 2), rat(0)],
            vec![rat(0), rat(0), rat(5), rat(1)],
            vec![rat(7), rat(1), rat(-2), rat(3)],
        ];
        // Laplace expansion along the first row.
        let mut expected = rat(0);
        for c in 0..4 {
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = &m[0][c] * determinant(&minor).unwrap();
            expected = if c % 2 == 0 { expected + term } else { expected - term };
        }
        assert_eq!(determinant(&m).unwrap(), expected);
    }

    #[test]
    fn unique_with_degeneration() {
        let (e, c) = (MPoly::var(Var::E), MPoly::var(Var::C));
        let rows = vec![vec![e.clone(), MPoly::one()], vec![MPoly::zero(), MPoly::one()]];
        let sol = solve_parametric_linear(&rows, &[MPoly::zero(), c.clone()]).unwrap();
        let LinearSolution::Unique(u) = sol.solution else {
            panic!("expected a unique solution");
        };
        assert_eq!(u[0], RatFunc::new(-&c, e.clone()).unwrap());
        assert_eq!(u[1], RatFunc::from_poly(c));
        assert_eq!(sol.degeneration, vec![e]);
    }

    #[test]
    fn inconsistent_system() {
        let rows = vec![vec![MPoly::one(), MPoly::one()], vec![MPoly::one(), MPoly::one()]];
        let sol = solve_parametric_linear(&rows, &[MPoly::zero(), MPoly::one()]).unwrap();
        assert!(matches!(sol.solution, LinearSolution::Inconsistent));
    }

    #[test]
    fn kernel_of_rank_one() {
        let b = MPoly::var(Var::B);
        let rows = vec![vec![b.clone(), MPoly::int(2), MPoly::zero()]];
        let k = kernel_basis(rows.clone(), 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot = (0..3).fold(MPoly::zero(), |acc, j| &acc + &(&rows[0][j] * &v[j]));
            assert!(dot.is_zero());
        }
    }
}
