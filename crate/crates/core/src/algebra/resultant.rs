use super::matrix::bareiss;
use super::poly::MPoly;
use super::var::Var;
use super::AlgebraError;

/// Sylvester matrix of `p` and `q` viewed as polynomials in `v`.
pub fn sylvester_matrix(p: &MPoly, q: &MPoly, v: Var) -> Result<Vec<Vec<MPoly>>, AlgebraError> {
    let m = p.degree(v) as usize;
    let n = q.degree(v) as usize;
    if m == 0 || p.is_zero() {
        return Err(AlgebraError::NothingToEliminate { var: v, which: "first" });
    }
    if n == 0 || q.is_zero() {
        return Err(AlgebraError::NothingToEliminate { var: v, which: "second" });
    }
    let pc = p.to_univariate(v);
    let qc = q.to_univariate(v);
    let size = m + n;
    let mut rows = vec![vec![MPoly::zero(); size]; size];
    for i in 0..n {
        for (k, c) in pc.iter().enumerate() {
            rows[i][i + m - k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in qc.iter().enumerate() {
            rows[n + i][i + n - k] = c.clone();
        }
    }
    Ok(rows)
}

/// Sylvester resultant eliminating `v`.
pub fn resultant(p: &MPoly, q: &MPoly, v: Var) -> Result<MPoly, AlgebraError> {
    let s = sylvester_matrix(p, q, v)?;
    Ok(bareiss(s))
}
