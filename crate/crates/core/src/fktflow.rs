//! Full Kostant-Toda hierarchy on Hessenberg matrices, solved by
//! factorization rather than by time stepping.
//!
//! With `E g = u0 b0` and `L0 = u0^{-1} C u0`, the solution at multi-time `t`
//! is `L(t) = U^{-1} C U` where `U` is the unit-lower factor of
//! `E D(t) g` and `D(t) = diag(exp theta_i(t))`. Any invertible upper
//! triangular factor on the right leaves `U` unchanged, which the evaluator
//! uses to keep every float bounded: `g` is brought to a column echelon
//! form adapted to the current weights and each column is rescaled by its
//! dominant entry before leaving exact arithmetic.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    companion, ln_abs, lu_unipotent, vandermonde, Matrix, Rational, Scalar,
};
use crate::symgroup::Permutation;
use crate::tnncell::{flag_minors, Spectrum};

/// Times `(t_1, ..., t_{n-1})` of the hierarchy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiTime(Vec<f64>);

impl MultiTime {
    pub fn new(t: Vec<f64>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::Parse("multi-time needs at least one entry".into()));
        }
        if t.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parse(format!("non-finite time in {t:?}")));
        }
        Ok(Self(t))
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0.0; n - 1])
    }

    /// `(t1, 0, ..., 0)`.
    pub fn t1(n: usize, t1: f64) -> Self {
        let mut t = vec![0.0; n - 1];
        t[0] = t1;
        Self(t)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.iter().map(|x| x * s).collect())
    }

    pub fn with_t1(&self, t1: f64) -> Self {
        let mut t = self.0.clone();
        t[0] = t1;
        Self(t)
    }
}

/// `theta_i(t) = sum_m lambda_i^m t_m`.
pub fn theta(lambda: &[f64], t: &MultiTime) -> Vec<f64> {
    lambda
        .iter()
        .map(|&l| {
            let mut p = 1.0;
            t.0.iter()
                .map(|tm| {
                    p *= l;
                    p * tm
                })
                .sum()
        })
        .collect()
}

pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

pub(crate) fn softmax(xs: &[f64]) -> Vec<f64> {
    let lse = log_sum_exp(xs);
    xs.iter().map(|x| (x - lse).exp()).collect()
}

/// Hessenberg Lax matrix: free entries on and below the diagonal, ones on
/// the superdiagonal, zeros above.
#[derive(Clone, Debug, PartialEq)]
pub struct LaxMatrix(Matrix<f64>);

impl LaxMatrix {
    /// Takes the lower-plus-diagonal part of `m` and imposes the superdiagonal.
    pub fn from_lower(m: &Matrix<f64>) -> Self {
        let n = m.rows();
        Self(Matrix::from_fn(n, n, |i, j| match j {
            j if j <= i => m[(i, j)],
            j if j == i + 1 => 1.0,
            _ => 0.0,
        }))
    }

    pub fn matrix(&self) -> &Matrix<f64> {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn diag(&self) -> Vec<f64> {
        self.0.diag()
    }

    /// `a_{i,j}`, 1-based, `j <= i + 1`.
    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.0[(i - 1, j - 1)]
    }

    /// `max |a_{i,j}|` over `j < i`.
    pub fn max_subdiag(&self) -> f64 {
        self.0.strictly_lower().max_abs()
    }
}

/// `(L)_{>=0}`: diagonal and above.
pub fn upper_part(m: &Matrix<f64>) -> Matrix<f64> {
    m.upper()
}

/// Dominant-term data of `tau_k`: positive weights
/// `d_k Delta_I(A_k) prod_{a<b in I}(lambda_b - lambda_a)` on the index sets
/// with non-vanishing minor.
#[derive(Clone, Debug, PartialEq)]
pub struct TauData {
    lambda: Vec<f64>,
    /// `levels[k-1]` lists `(I, ln weight)` for `tau_k`, `k = 1..n`.
    levels: Vec<Vec<(Vec<usize>, f64)>>,
}

impl TauData {
    pub fn new(g: &Matrix<Rational>, spectrum: &Spectrum, b0: &Matrix<Rational>) -> Result<Self> {
        let n = g.rows();
        let lam = spectrum.exact();
        let mut levels = Vec::with_capacity(n);
        let mut d = Rational::from_integer(1.into());
        for k in 1..=n {
            d /= b0[(k - 1, k - 1)].clone();
            let mut terms = Vec::new();
            for (set, minor) in flag_minors(g, k)? {
                if minor.is_zero() {
                    continue;
                }
                let mut vand = Rational::from_integer(1.into());
                for (a, &ia) in set.iter().enumerate() {
                    for &ib in &set[a + 1..] {
                        vand *= lam[ib - 1].clone() - lam[ia - 1].clone();
                    }
                }
                let w = d.clone() * minor * vand;
                if !w.is_positive() {
                    return Err(Error::InvalidCell(format!(
                        "tau_{k} weight on {set:?} is not positive"
                    )));
                }
                terms.push((set, ln_abs(&w)));
            }
            if terms.is_empty() {
                return Err(Error::EmptyTau(k));
            }
            levels.push(terms);
        }
        Ok(Self {
            lambda: spectrum.to_f64(),
            levels,
        })
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    /// Index sets and log-weights of `tau_k`.
    pub fn terms(&self, k: usize) -> &[(Vec<usize>, f64)] {
        &self.levels[k - 1]
    }

    fn exponents(&self, k: usize, th: &[f64]) -> Vec<f64> {
        self.levels[k - 1]
            .iter()
            .map(|(set, lw)| lw + set.iter().map(|&i| th[i - 1]).sum::<f64>())
            .collect()
    }

    /// `ln tau_k(t)`.
    pub fn log_tau(&self, k: usize, t: &MultiTime) -> f64 {
        if k == 0 {
            return 0.0;
        }
        log_sum_exp(&self.exponents(k, &theta(&self.lambda, t)))
    }

    /// `d/dt_1 ln tau_k(t)` from the softmax weights.
    pub fn dlog_tau_dt1(&self, k: usize, t: &MultiTime) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let alpha = softmax(&self.exponents(k, &theta(&self.lambda, t)));
        self.levels[k - 1]
            .iter()
            .zip(alpha)
            .map(|((set, _), a)| a * set.iter().map(|&i| self.lambda[i - 1]).sum::<f64>())
            .sum()
    }

    /// `a_{k,k} = d/dt_1 ln(tau_k / tau_{k-1})`.
    pub fn diag(&self, t: &MultiTime) -> Vec<f64> {
        let dl: Vec<f64> = (0..=self.n()).map(|k| self.dlog_tau_dt1(k, t)).collect();
        dl.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// Initial data for the flows of one cell point.
#[derive(Clone, Debug)]
pub struct KtFlow {
    g: Matrix<Rational>,
    spectrum: Spectrum,
    e: Matrix<f64>,
    c: Matrix<f64>,
    u0: Matrix<Rational>,
    b0: Matrix<Rational>,
    l0_exact: Matrix<Rational>,
    l0: LaxMatrix,
    tau: TauData,
}

/// `D(t) g b S` for an upper unipotent `b` (chosen per `t`) and positive
/// diagonal `S`. Column `j` is reduced against the rows that dominated the
/// earlier columns and scaled so its dominant entry has magnitude one; the
/// dominant rows then carry a unit triangular block. Right factors like
/// `b S` change neither the unit-lower LU factor nor the flag of `D(t) g`.
pub fn scaled_frame<T: Scalar>(g: &Matrix<T>, lambda: &[f64], t: &MultiTime) -> Matrix<f64> {
    let n = g.rows();
    let th = theta(lambda, t);
    let mut gp = g.clone();
    let mut used = vec![false; n];
    let mut out = Matrix::<f64>::zeros(n, n);
    for j in 0..n {
        let logs: Vec<f64> = (0..n).map(|s| gp[(s, j)].ln_magnitude() + th[s]).collect();
        let Some(p) = (0..n)
            .filter(|&s| !used[s] && !gp[(s, j)].is_zero())
            .max_by(|&a, &b| logs[a].total_cmp(&logs[b]).then(b.cmp(&a)))
        else {
            continue;
        };
        used[p] = true;
        for l in j + 1..n {
            if gp[(p, l)].is_zero() {
                continue;
            }
            let f = gp[(p, l)].clone() / gp[(p, j)].clone();
            for s in 0..n {
                if s == p {
                    gp[(s, l)] = T::zero();
                } else if !gp[(s, j)].is_zero() {
                    let v = gp[(s, l)].clone() - f.clone() * gp[(s, j)].clone();
                    gp[(s, l)] = v;
                }
            }
        }
        for s in 0..n {
            let x = &gp[(s, j)];
            if !x.is_zero() {
                let sign = if x.to_f64() < 0.0 { -1.0 } else { 1.0 };
                out[(s, j)] = sign * (logs[s] - logs[p]).exp();
            }
        }
    }
    out
}

impl KtFlow {
    /// Factors `E g = u0 b0` and sets `L0 = u0^{-1} C u0`.
    pub fn new(g: &Matrix<Rational>, spectrum: &Spectrum) -> Result<Self> {
        if !g.is_square() {
            return Err(Error::NotSquare(g.rows(), g.cols()));
        }
        if g.rows() != spectrum.n() {
            return Err(Error::SizeMismatch(g.rows(), spectrum.n()));
        }
        let e = vandermonde(spectrum.exact());
        let c = companion(spectrum.exact());
        let f = lu_unipotent(&(&e * g))?;
        let l0_exact = &(&f.l.inverse()? * &c) * &f.l;
        let tau = TauData::new(g, spectrum, &f.u)?;
        Ok(Self {
            g: g.clone(),
            spectrum: spectrum.clone(),
            e: e.to_f64(),
            c: c.to_f64(),
            l0: LaxMatrix::from_lower(&l0_exact.to_f64()),
            l0_exact,
            u0: f.l,
            b0: f.u,
            tau,
        })
    }

    pub fn n(&self) -> usize {
        self.g.rows()
    }

    pub fn g(&self) -> &Matrix<Rational> {
        &self.g
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn l0(&self) -> &LaxMatrix {
        &self.l0
    }

    pub fn l0_exact(&self) -> &Matrix<Rational> {
        &self.l0_exact
    }

    pub fn u0(&self) -> &Matrix<Rational> {
        &self.u0
    }

    pub fn b0(&self) -> &Matrix<Rational> {
        &self.b0
    }

    pub fn tau(&self) -> &TauData {
        &self.tau
    }

    pub fn scaled_frame(&self, t: &MultiTime) -> Matrix<f64> {
        scaled_frame(&self.g, &self.spectrum.to_f64(), t)
    }

    /// Unit-lower `U(t)` with `U(t) L(t) = C U(t)`, i.e. `u0 u(t)`.
    pub fn companion_frame(&self, t: &MultiTime) -> Result<Matrix<f64>> {
        let x = &self.e * &self.scaled_frame(t);
        Ok(lu_unipotent(&x)?.l)
    }

    /// `L(t)`.
    pub fn at(&self, t: &MultiTime) -> Result<LaxMatrix> {
        let u = self.companion_frame(t)?;
        let l = &(&u.inverse()? * &self.c) * &u;
        Ok(LaxMatrix::from_lower(&l))
    }

    /// `L(t) = u(t)^{-1} L0 u(t)` with `u(t)` the unit-lower factor of
    /// `u0^{-1} E D(t) g`, `D` normalized by its largest entry. Accurate only
    /// for moderate `|t|`; kept as an independent route.
    pub fn at_direct(&self, t: &MultiTime) -> Result<LaxMatrix> {
        let th = theta(&self.spectrum.to_f64(), t);
        let m = th.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let d: Vec<f64> = th.iter().map(|x| (x - m).exp()).collect();
        let mt = &(&(&self.u0.inverse()?.to_f64() * &self.e) * &Matrix::diagonal(&d))
            * &self.g.to_f64();
        let u = lu_unipotent(&mt)?.l;
        let l = &(&u.inverse()? * self.l0.matrix()) * &u;
        Ok(LaxMatrix::from_lower(&l))
    }

    /// `ln tau_k(t)` for `k = 1..n-1`.
    pub fn log_taus(&self, t: &MultiTime) -> Vec<f64> {
        (1..self.n()).map(|k| self.tau.log_tau(k, t)).collect()
    }

    pub fn diag_via_tau(&self, t: &MultiTime) -> Vec<f64> {
        self.tau.diag(t)
    }
}

pub fn initial_l0(g: &Matrix<Rational>, spectrum: &Spectrum) -> Result<KtFlow> {
    KtFlow::new(g, spectrum)
}

pub fn flow_l(flow: &KtFlow, t: &MultiTime) -> Result<LaxMatrix> {
    flow.at(t)
}

/// `(ln tau_k(t), sign)`; the sign is `+1` on totally non-negative cells.
pub fn tau(flow: &KtFlow, t: &MultiTime, k: usize) -> (f64, i8) {
    (flow.tau().log_tau(k, t), 1)
}

/// `tau_k` at moderate times straight from the leading principal minors of
/// `u0^{-1} E exp(Theta_Lambda(t)) g b0^{-1}`.
pub fn tau_direct(flow: &KtFlow, t: &MultiTime) -> Result<Vec<f64>> {
    let th = theta(&flow.spectrum.to_f64(), t);
    let d: Vec<f64> = th.iter().map(|x| x.exp()).collect();
    let m = &(&(&(&flow.u0.inverse()?.to_f64() * &flow.e) * &Matrix::diagonal(&d))
        * &flow.g.to_f64())
        * &flow.b0.inverse()?.to_f64();
    crate::linalg::principal_minors(&m)
}

/// Traces `tr L^{k+1}`, `k = 1..n-1`.
pub fn chevalley(l: &Matrix<f64>) -> Vec<f64> {
    let n = l.rows();
    let mut p = l.clone();
    (1..n)
        .map(|_| {
            p = &p * l;
            p.trace()
        })
        .collect()
}

/// Unit-lower `u` with `u L = C u`: its rows are `e_1^T L^{i-1}`.
pub fn companion_embed(l: &LaxMatrix, spectrum: &Spectrum, tol: f64) -> Result<Matrix<f64>> {
    let n = l.n();
    if spectrum.n() != n {
        return Err(Error::SizeMismatch(n, spectrum.n()));
    }
    let lm = l.matrix();
    let mut u = Matrix::<f64>::zeros(n, n);
    u[(0, 0)] = 1.0;
    for i in 1..n {
        for j in 0..n {
            u[(i, j)] = (0..n).map(|k| u[(i - 1, k)] * lm[(k, j)]).sum();
        }
    }
    let c = companion(&spectrum.to_f64());
    let resid = (&(&u * lm) - &(&c * &u)).max_abs();
    let scale = 1.0 + u.max_abs() * lm.max_abs();
    if resid > tol * scale {
        return Err(Error::NotIsospectral);
    }
    Ok(u)
}

pub fn fixed_point_test(l: &LaxMatrix, tol: f64) -> bool {
    l.max_subdiag() < tol
}

/// `epsilon + diag(lambda_{z(1)}, ..., lambda_{z(n)})`.
pub fn fixed_point(z: &Permutation, spectrum: &Spectrum) -> LaxMatrix {
    LaxMatrix::from_lower(&Matrix::diagonal(&spectrum.permuted(z)))
}

/// Multi-time `c` with `theta_{z(1)}(c) > ... > theta_{z(n)}(c)`, from
/// `(t_0, c) E = r` with `r_{z(j)} = n - j`.
pub fn direction_to_fixed_point(z: &Permutation, spectrum: &Spectrum) -> Result<MultiTime> {
    let n = z.n();
    if n != spectrum.n() {
        return Err(Error::SizeMismatch(n, spectrum.n()));
    }
    let mut r = vec![Rational::zero(); n];
    for j in 1..=n {
        r[z.at(j) - 1] = Rational::from_integer(((n - j) as i64).into());
    }
    let sol = vandermonde(spectrum.exact()).transpose().solve(&r)?;
    MultiTime::new(sol[1..].iter().map(Scalar::to_f64).collect())
}

/// Limits of the diagonal at `t_1 = -T` and `t_1 = T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub v: Permutation,
    pub w: Permutation,
    pub horizon: f64,
    pub diag_minus: Vec<f64>,
    pub diag_plus: Vec<f64>,
    pub max_subdiag: f64,
    pub max_diag_error: f64,
    pub pass: bool,
}

/// Default horizon `40 / min gap`.
pub fn default_horizon(spectrum: &Spectrum) -> f64 {
    40.0 / spectrum.min_gap()
}

pub fn asymptotic_check(
    flow: &KtFlow,
    v: &Permutation,
    w: &Permutation,
    horizon: f64,
    tol: f64,
) -> Result<AsymptoticReport> {
    let n = flow.n();
    let minus = flow.at(&MultiTime::t1(n, -horizon))?;
    let plus = flow.at(&MultiTime::t1(n, horizon))?;
    let dist = |a: &[f64], b: &[f64]| {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    };
    let err = dist(&minus.diag(), &flow.spectrum.permuted(v))
        .max(dist(&plus.diag(), &flow.spectrum.permuted(w)));
    let sub = minus.max_subdiag().max(plus.max_subdiag());
    Ok(AsymptoticReport {
        v: v.clone(),
        w: w.clone(),
        horizon,
        diag_minus: minus.diag(),
        diag_plus: plus.diag(),
        max_subdiag: sub,
        max_diag_error: err,
        pass: err < tol && sub < tol,
    })
}

/// `max |(L(t1+h) - L(t1-h)) / 2h - [(L)_{>=0}, L]|` along `t_1`.
pub fn lax_residual(flow: &KtFlow, t: &MultiTime, h: f64) -> Result<f64> {
    let t1 = t.as_slice()[0];
    let lp = flow.at(&t.with_t1(t1 + h))?;
    let lm = flow.at(&t.with_t1(t1 - h))?;
    let l = flow.at(t)?;
    let deriv = (lp.matrix() - lm.matrix()).scale(&(0.5 / h));
    let rhs = upper_part(l.matrix()).commutator(l.matrix());
    Ok(deriv.max_diff(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat_int;
    use crate::symgroup::ReducedWord;
    use crate::tnncell::CellPoint;

    fn sl5_flow() -> (KtFlow, Permutation, Permutation) {
        let w = ReducedWord::new(5, vec![2, 3, 1, 4, 3, 2]).unwrap();
        let v = Permutation::from_letters(5, &[2, 4, 3]).unwrap();
        let cell = CellPoint::unit(v.clone(), w.clone()).unwrap();
        let f = KtFlow::new(&cell.build_g(), &Spectrum::default_for(5)).unwrap();
        (f, v, w.target())
    }

    #[test]
    fn two_by_two_initial_matrix() {
        // cell (e, s1) with p = 1: g = [[1,0],[1,1]], E = [[1,1],[-1,1]]
        let cell = CellPoint::unit(Permutation::identity(2), ReducedWord::new(2, vec![1]).unwrap())
            .unwrap();
        let f = KtFlow::new(&cell.build_g(), &Spectrum::from_ints(&[-1, 1]).unwrap()).unwrap();
        // E g = [[2,1],[0,1]] so u0 = I and L0 = C
        assert_eq!(f.u0(), &Matrix::identity(2));
        assert_eq!(f.l0_exact()[(1, 0)], rat_int(1));
        assert_eq!(f.l0_exact()[(0, 0)], rat_int(0));
    }

    #[test]
    fn l0_is_hessenberg_and_isospectral() {
        let (f, _, _) = sl5_flow();
        let l0 = f.l0_exact();
        for i in 0..5 {
            for j in i + 1..5 {
                let expect = if j == i + 1 { rat_int(1) } else { rat_int(0) };
                assert_eq!(l0[(i, j)], expect);
            }
        }
        let cp = l0.char_poly().unwrap();
        let cc = companion(Spectrum::default_for(5).exact()).char_poly().unwrap();
        assert_eq!(cp, cc);
    }

    #[test]
    fn tau_is_one_at_zero_and_matches_minors() {
        let (f, _, _) = sl5_flow();
        let n = f.n();
        for lt in f.log_taus(&MultiTime::zero(n)) {
            assert!(lt.abs() < 1e-12);
        }
        for t1 in [-1.5, 0.3, 2.0] {
            let t = MultiTime::t1(n, t1);
            let direct = tau_direct(&f, &t).unwrap();
            for (k, lt) in f.log_taus(&t).iter().enumerate() {
                assert!((lt - direct[k].ln()).abs() < 1e-9, "k={k} t={t1}");
            }
        }
    }

    #[test]
    fn stable_and_direct_routes_agree() {
        let (f, _, _) = sl5_flow();
        for t1 in [-3.0, -0.5, 0.0, 1.0, 4.0] {
            let t = MultiTime::new(vec![t1, 0.2, -0.1, 0.05]).unwrap();
            let a = f.at(&t).unwrap();
            let b = f.at_direct(&t).unwrap();
            assert!(a.matrix().max_diff(b.matrix()) < 1e-8, "t1={t1}");
        }
        assert!(f.at(&MultiTime::zero(5)).unwrap().matrix().max_diff(f.l0().matrix()) < 1e-12);
    }

    #[test]
    fn diag_two_routes_and_trace() {
        let (f, _, _) = sl5_flow();
        for t1 in [-6.0, -1.0, 0.0, 2.5, 7.0] {
            let t = MultiTime::t1(5, t1);
            let a = f.at(&t).unwrap().diag();
            let b = f.diag_via_tau(&t);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-9);
            }
            assert!(b.iter().sum::<f64>().abs() < 1e-10);
        }
    }

    #[test]
    fn sl5_sorting_example() {
        let (f, v, w) = sl5_flow();
        let rep = asymptotic_check(&f, &v, &w, 40.0, 1e-6).unwrap();
        assert!(rep.pass, "{rep:?}");
        let lam = Spectrum::default_for(5);
        assert_eq!(lam.permuted(&v), vec![-2.0, 0.0, 2.0, -1.0, 1.0]);
        assert_eq!(lam.permuted(&w), vec![0.0, 2.0, -2.0, 1.0, -1.0]);
    }

    #[test]
    fn stationary_cell() {
        let v = Permutation::new(vec![2, 3, 1]).unwrap();
        let cell = CellPoint::unit(v.clone(), v.reduced_word()).unwrap();
        let f = KtFlow::new(&cell.build_g(), &Spectrum::default_for(3)).unwrap();
        assert!(fixed_point_test(f.l0(), 1e-15));
        for t1 in [-50.0, 3.0, 50.0] {
            let l = f.at(&MultiTime::t1(3, t1)).unwrap();
            assert!(l.matrix().max_diff(f.l0().matrix()) < 1e-12);
        }
    }

    #[test]
    fn braid_direction() {
        let lam = Spectrum::default_for(3);
        let z = Permutation::new(vec![3, 1, 2]).unwrap();
        let c = direction_to_fixed_point(&z, &lam).unwrap();
        assert_eq!(c.as_slice(), &[0.5, 1.5]);
        let th = theta(&lam.to_f64(), &c);
        assert!(th[2] > th[0] && th[0] > th[1]);
    }

    #[test]
    fn companion_embed_round_trip() {
        let (f, _, _) = sl5_flow();
        let lam = Spectrum::default_for(5);
        let u = companion_embed(f.l0(), &lam, 1e-12).unwrap();
        assert!(u.max_diff(&f.u0().to_f64()) < 1e-12);
        let c = LaxMatrix::from_lower(&companion(&lam.to_f64()));
        assert!(companion_embed(&c, &lam, 1e-12).unwrap().max_diff(&Matrix::identity(5)) < 1e-15);
        let t = MultiTime::t1(5, 1.7);
        let ut = companion_embed(&f.at(&t).unwrap(), &lam, 1e-9).unwrap();
        assert!(ut.max_diff(&f.companion_frame(&t).unwrap()) < 1e-9);
        let wrong = Spectrum::from_ints(&[-3, -1, 0, 1, 3]).unwrap();
        assert_eq!(companion_embed(f.l0(), &wrong, 1e-9), Err(Error::NotIsospectral));
    }

    #[test]
    fn chevalley_at_fixed_point_is_power_sums() {
        let lam = Spectrum::default_for(4);
        let z = Permutation::new(vec![2, 4, 1, 3]).unwrap();
        let h = chevalley(fixed_point(&z, &lam).matrix());
        assert_eq!(h, vec![20.0, 0.0, 164.0]);
    }
}
