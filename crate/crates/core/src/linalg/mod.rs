//! Dense matrices over two scalar regimes: exact rationals for Plücker and
//! polytope data, `f64` for time flows. The regime is the type parameter.

mod factor;
mod special;

pub use factor::{
    cholesky_upper, lu_unipotent, lu_unipotent_with, principal_minors, qr_positive, qr_special,
    LuFactors,
    LuOptions, QrFactors, DEFAULT_ZERO_THRESHOLD,
};
pub use special::{companion, flag_minor, vandermonde};

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Scalar field the matrix kernel works over.
pub trait Scalar: Clone + fmt::Debug + PartialEq + Num + Neg<Output = Self> {
    /// Absolute value as `f64`, used for pivot choice.
    fn magnitude(&self) -> f64;
    /// Exact zero test for rationals; `|x| < tol` for floats.
    fn is_negligible(&self, tol: f64) -> bool;
    fn to_f64(&self) -> f64;
    /// `ln |x|`, `-inf` at zero.
    fn ln_magnitude(&self) -> f64;
}

impl Scalar for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() < tol
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn ln_magnitude(&self) -> f64 {
        self.abs().ln()
    }
}

impl Scalar for Rational {
    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn ln_magnitude(&self) -> f64 {
        ln_abs(self)
    }
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Exact conversion of a finite float.
pub fn rat_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

fn ln_abs_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return ToPrimitive::to_f64(&x.abs()).unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    ToPrimitive::to_f64(&(x.abs() >> shift)).unwrap_or(f64::INFINITY).ln()
        + shift as f64 * std::f64::consts::LN_2
}

/// `ln |x|` without overflow for large numerators or denominators.
pub fn ln_abs(x: &Rational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_abs_bigint(x.numer()) - ln_abs_bigint(x.denom())
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator: {s:?}")));
            }
            Ok(Rational::new(parse_int(p)?, q))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Parse("empty matrix".into()));
        }
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::SizeMismatch(bad.len(), c));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(d: &[T]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols).map(<[T]>::to_vec).collect()
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(Scalar::to_f64)
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    /// Submatrix on the given 0-based rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Leftmost `k` columns.
    pub fn left_columns(&self, k: usize) -> Self {
        let cols: Vec<usize> = (0..k).collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, &cols)
    }

    /// Entries strictly below the diagonal, zeros elsewhere.
    pub fn strictly_lower(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            if i > j {
                self[(i, j)].clone()
            } else {
                T::zero()
            }
        })
    }

    /// Diagonal and above.
    pub fn upper(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            if i <= j {
                self[(i, j)].clone()
            } else {
                T::zero()
            }
        })
    }

    pub fn strictly_upper(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            if i < j {
                self[(i, j)].clone()
            } else {
                T::zero()
            }
        })
    }

    pub fn trace(&self) -> T {
        self.diag().into_iter().fold(T::zero(), |a, b| a + b)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Gaussian elimination into row echelon form; returns the echelon matrix,
    /// the row-swap parity and the pivot columns.
    fn eliminate(&self) -> (Self, bool, Vec<usize>) {
        let mut m = self.clone();
        let mut odd = false;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .filter(|&i| !m[(i, c)].is_zero())
                .max_by(|&a, &b| m[(a, c)].magnitude().total_cmp(&m[(b, c)].magnitude()));
            let Some(p) = best else { continue };
            if p != r {
                m.swap_rows(p, r);
                odd = !odd;
            }
            for i in r + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() / m[(r, c)].clone();
                for j in c..m.cols {
                    let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, odd, pivots)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let (m, odd, pivots) = self.eliminate();
        if pivots.len() < self.rows {
            return Ok(T::zero());
        }
        let d = (0..self.rows).fold(T::one(), |acc, i| acc * m[(i, i)].clone());
        Ok(if odd { -d } else { d })
    }

    pub fn rank(&self) -> usize {
        self.eliminate().2.len()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n)
                .filter(|&i| !a[(i, c)].is_zero())
                .max_by(|&x, &y| a[(x, c)].magnitude().total_cmp(&a[(y, c)].magnitude()))
                .ok_or(Error::Singular)?;
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let piv = a[(c, c)].clone();
            for j in 0..n {
                a[(c, j)] = a[(c, j)].clone() / piv.clone();
                inv[(c, j)] = inv[(c, j)].clone() / piv.clone();
            }
            for i in 0..n {
                if i == c || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in 0..n {
                    let av = a[(i, j)].clone() - f.clone() * a[(c, j)].clone();
                    a[(i, j)] = av;
                    let iv = inv[(i, j)].clone() - f.clone() * inv[(c, j)].clone();
                    inv[(i, j)] = iv;
                }
            }
        }
        Ok(inv)
    }

    /// Solves `self * x = b`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        if b.len() != self.rows {
            return Err(Error::SizeMismatch(b.len(), self.rows));
        }
        let inv = self.inverse()?;
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, j| acc + inv[(i, j)].clone() * b[j].clone())
            })
            .collect())
    }

    /// Coefficients `c_0..c_n` of `det(x I - self) = sum c_i x^(n-i)`, by the
    /// Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> Result<Vec<T>> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut coeffs = vec![T::one()];
        let mut m = Self::zeros(n, n);
        let id = Self::identity(n);
        let mut k_scalar = T::zero();
        for k in 1..=n {
            let prev = coeffs[k - 1].clone();
            m = &(self * &m) + &id.scale(&prev);
            k_scalar = k_scalar + T::one();
            let ck = -((self * &m).trace() / k_scalar.clone());
            coeffs.push(ck);
        }
        Ok(coeffs)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Matrix::<T>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out[(i, j)].clone() + a.clone() * rhs[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl Matrix<Rational> {
    /// Entries as `"p/q"` (or `"p"` for integers) strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.to_rows()
            .into_iter()
            .map(|row| row.iter().map(ToString::to_string).collect())
            .collect()
    }

    pub fn from_strings(rows: &[Vec<String>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }
}

impl Matrix<f64> {
    /// `max |a_ij - b_ij|`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs()
    }
}

/// `prod_i x_i` convenience for exact data.
pub fn product<T: Scalar>(xs: impl IntoIterator<Item = T>) -> T {
    xs.into_iter().fold(T::one(), |a, b| a * b)
}
