use super::{Matrix, Scalar};
use crate::error::{Error, Result};

/// `E[i][j] = lambda_j^i` (0-based), so column `j` is an eigenvector of the
/// companion matrix for `lambda_j`.
pub fn vandermonde<T: Scalar>(lambda: &[T]) -> Matrix<T> {
    let n = lambda.len();
    let mut e = Matrix::zeros(n, n);
    for j in 0..n {
        let mut p = T::one();
        for i in 0..n {
            e[(i, j)] = p.clone();
            p = p * lambda[j].clone();
        }
    }
    e
}

/// Companion matrix with ones on the superdiagonal and the last row chosen so
/// its characteristic polynomial is `prod (x - lambda_j)`.
pub fn companion<T: Scalar>(lambda: &[T]) -> Matrix<T> {
    let n = lambda.len();
    // coefficients of prod (x - l), lowest degree first
    let mut poly = vec![T::one()];
    for l in lambda {
        let mut next = vec![T::zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = next[k + 1].clone() + c.clone();
            next[k] = next[k].clone() - c.clone() * l.clone();
        }
        poly = next;
    }
    let mut c = Matrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        c[(i, i + 1)] = T::one();
    }
    for j in 0..n {
        c[(n - 1, j)] = -poly[j].clone();
    }
    c
}

/// Minor on rows `rows` (1-based, increasing) and the first `rows.len()`
/// columns.
pub fn flag_minor<T: Scalar>(g: &Matrix<T>, rows: &[usize]) -> Result<T> {
    let k = rows.len();
    if k == 0 || k > g.cols() || rows.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadIndexSet(rows.to_vec()));
    }
    if rows.iter().any(|&r| r == 0 || r > g.rows()) {
        return Err(Error::BadIndexSet(rows.to_vec()));
    }
    let r0: Vec<usize> = rows.iter().map(|r| r - 1).collect();
    let c0: Vec<usize> = (0..k).collect();
    g.select(&r0, &c0).det()
}
