use super::{Matrix, Scalar};
use crate::error::{Error, Result};

/// Pivots below this magnitude count as zero in the float LU.
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-300;

#[derive(Clone, Copy, Debug)]
pub struct LuOptions {
    pub zero_threshold: f64,
}

impl Default for LuOptions {
    fn default() -> Self {
        Self {
            zero_threshold: DEFAULT_ZERO_THRESHOLD,
        }
    }
}

/// `A = L U` with `L` unit lower triangular.
#[derive(Clone, Debug, PartialEq)]
pub struct LuFactors<T> {
    pub l: Matrix<T>,
    pub u: Matrix<T>,
}

pub fn lu_unipotent<T: Scalar>(a: &Matrix<T>) -> Result<LuFactors<T>> {
    lu_unipotent_with(a, LuOptions::default())
}

/// Doolittle factorization without pivoting. Fails when a leading principal
/// minor vanishes.
pub fn lu_unipotent_with<T: Scalar>(a: &Matrix<T>, opts: LuOptions) -> Result<LuFactors<T>> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let n = a.rows();
    let mut l = Matrix::<T>::identity(n);
    let mut u = Matrix::<T>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut s = a[(i, j)].clone();
            for k in 0..i {
                s = s - l[(i, k)].clone() * u[(k, j)].clone();
            }
            u[(i, j)] = s;
        }
        if u[(i, i)].is_negligible(opts.zero_threshold) {
            return Err(Error::SingularPrincipalMinor(i + 1));
        }
        for j in i + 1..n {
            let mut s = a[(j, i)].clone();
            for k in 0..i {
                s = s - l[(j, k)].clone() * u[(k, i)].clone();
            }
            l[(j, i)] = s / u[(i, i)].clone();
        }
    }
    Ok(LuFactors { l, u })
}

/// Leading principal minors `d_1..d_n`.
pub fn principal_minors<T: Scalar>(a: &Matrix<T>) -> Result<Vec<T>> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    (1..=a.rows())
        .map(|k| {
            let idx: Vec<usize> = (0..k).collect();
            a.select(&idx, &idx).det()
        })
        .collect()
}

/// `A = Q R` with `R` upper triangular with positive diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct QrFactors {
    pub q: Matrix<f64>,
    pub r: Matrix<f64>,
}

/// Householder QR of a square matrix with `Q` in `SO_n`. `diag(R) > 0`
/// except that `R[n-1][n-1]` carries the sign of `det A`.
pub fn qr_special(a: &Matrix<f64>) -> Result<QrFactors> {
    let QrFactors { mut q, mut r } = qr_positive(a)?;
    let n = a.rows();
    if q.det()? < 0.0 {
        for j in 0..n {
            r[(n - 1, j)] = -r[(n - 1, j)];
        }
        for i in 0..n {
            q[(i, n - 1)] = -q[(i, n - 1)];
        }
    }
    Ok(QrFactors { q, r })
}

/// Householder QR with `diag(R) > 0`; `det Q` has the sign of `det A`.
pub fn qr_positive(a: &Matrix<f64>) -> Result<QrFactors> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let n = a.rows();
    let mut r = a.clone();
    let mut q = Matrix::<f64>::identity(n);
    for k in 0..n.saturating_sub(1) {
        let norm = (k..n).map(|i| r[(i, k)] * r[(i, k)]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if r[(k, k)] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (0..n).map(|i| if i < k { 0.0 } else { r[(i, k)] }).collect();
        v[k] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        // r <- H r, q <- q H with H = I - 2 v v^T / (v^T v)
        for j in 0..n {
            let dot: f64 = (k..n).map(|i| v[i] * r[(i, j)]).sum();
            let f = 2.0 * dot / vv;
            for i in k..n {
                r[(i, j)] -= f * v[i];
            }
        }
        for i in 0..n {
            let dot: f64 = (k..n).map(|j| q[(i, j)] * v[j]).sum();
            let f = 2.0 * dot / vv;
            for j in k..n {
                q[(i, j)] -= f * v[j];
            }
        }
    }
    for k in 0..n {
        if r[(k, k)] == 0.0 {
            return Err(Error::Singular);
        }
        if r[(k, k)] < 0.0 {
            for j in 0..n {
                r[(k, j)] = -r[(k, j)];
            }
            for i in 0..n {
                q[(i, k)] = -q[(i, k)];
            }
        }
        for i in k + 1..n {
            r[(i, k)] = 0.0;
        }
    }
    Ok(QrFactors { q, r })
}

/// Upper triangular `B` with positive diagonal and `B B^T = S`.
pub fn cholesky_upper(s: &Matrix<f64>) -> Result<Matrix<f64>> {
    if !s.is_square() {
        return Err(Error::NotSquare(s.rows(), s.cols()));
    }
    let n = s.rows();
    // Reverse rows and columns, factor as L L^T, reverse back.
    let rev = |i: usize| n - 1 - i;
    let js = Matrix::from_fn(n, n, |i, j| s[(rev(i), rev(j))]);
    let mut l = Matrix::<f64>::zeros(n, n);
    for j in 0..n {
        let d = js[(j, j)] - (0..j).map(|k| l[(j, k)] * l[(j, k)]).sum::<f64>();
        if d.is_nan() || d <= 0.0 {
            return Err(Error::NotPositiveDefinite(rev(j) + 1));
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let v = js[(i, j)] - (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum::<f64>();
            l[(i, j)] = v / d;
        }
    }
    Ok(Matrix::from_fn(n, n, |i, j| l[(rev(i), rev(j))]))
}
