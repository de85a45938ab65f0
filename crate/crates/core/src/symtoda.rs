//! Full symmetric Toda hierarchy: QR-based evolution and the map from the
//! Kostant-Toda flow `L -> beta^{-1} L beta` with `gamma gamma^T = beta beta^T`.
//!
//! With `g = q0 r0` and `calL0 = q0^T Lambda q0`, the solution is
//! `calL(t) = Q^T Lambda Q` where `Q` is the orthogonal factor of `D(t) g r0^{-1}`.
//! The evaluator takes `Q` from the bounded frame of
//! [`scaled_frame`](crate::fktflow::scaled_frame), which spans the same flag
//! as `D(t) g`, and restores the sign pattern of `r0`.

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fktflow::{
    companion_embed, log_sum_exp, scaled_frame, softmax, theta, KtFlow, LaxMatrix, MultiTime,
};
use crate::linalg::{
    cholesky_upper, flag_minor, qr_positive, qr_special, vandermonde, Matrix, Rational, Scalar,
};
use crate::tnncell::{flag_minors, Spectrum};

/// `(I, ln weight)` terms of one tau function.
type Levels = Vec<(Vec<usize>, f64)>;

/// Minors of `Q_k` below this magnitude count as zero when only a float
/// initial point is available.
pub const FLOAT_MINOR_CUTOFF: f64 = 1e-12;

/// Symmetric Lax matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymLaxMatrix(Matrix<f64>);

impl SymLaxMatrix {
    pub fn new(m: Matrix<f64>) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix<f64> {
        &self.0
    }

    pub fn diag(&self) -> Vec<f64> {
        self.0.diag()
    }

    pub fn symmetry_residual(&self) -> f64 {
        self.0.max_diff(&self.0.transpose())
    }

    pub fn max_offdiag(&self) -> f64 {
        self.0.strictly_lower().max_abs().max(self.0.strictly_upper().max_abs())
    }
}

/// `pi_so(M) = M_{>0} - M_{<0}`.
pub fn pi_so(m: &Matrix<f64>) -> Matrix<f64> {
    &m.strictly_upper() - &m.strictly_lower()
}

/// `beta^{-1} L beta` where `gamma = u^{-1} E` and `beta` is the upper
/// Cholesky factor of `gamma gamma^T`.
pub fn psi_map(l: &LaxMatrix, u: &Matrix<f64>, spectrum: &Spectrum) -> Result<SymLaxMatrix> {
    let e = vandermonde(&spectrum.to_f64());
    let gamma = &u.inverse()? * &e;
    let beta = cholesky_upper(&(&gamma * &gamma.transpose()))?;
    Ok(SymLaxMatrix(&(&beta.inverse()? * l.matrix()) * &beta))
}

/// Initial data for the symmetric flow.
#[derive(Clone, Debug)]
pub struct SymFlow {
    g_exact: Option<Matrix<Rational>>,
    g: Matrix<f64>,
    lambda: Vec<f64>,
    q0: Matrix<f64>,
    r0: Matrix<f64>,
    signs: Vec<f64>,
    l0: SymLaxMatrix,
    /// `levels[k-1]`: `(I, Delta_I(Q_k)^2)` over the bases of `M(Q_k)`.
    levels: Vec<Vec<(Vec<usize>, f64)>>,
}

impl SymFlow {
    /// From an exact initial point; the matroid weights are exact:
    /// `Delta_I(Q_k)^2 = Delta_I(A_k)^2 / det(A_k^T A_k)`.
    pub fn new(g: &Matrix<Rational>, spectrum: &Spectrum) -> Result<Self> {
        let n = g.rows();
        let mut levels = Vec::with_capacity(n);
        for k in 1..=n {
            let ak = g.left_columns(k);
            let gram = (&ak.transpose() * &ak).det()?;
            if gram.is_zero() {
                return Err(Error::Singular);
            }
            let terms: Vec<(Vec<usize>, f64)> = flag_minors(g, k)?
                .into_iter()
                .filter(|(_, d)| !d.is_zero())
                .map(|(set, d)| (set, (d.clone() * d / gram.clone()).to_f64()))
                .collect();
            levels.push(terms);
        }
        let mut flow = Self::from_float(&g.to_f64(), spectrum, Some(levels))?;
        flow.g_exact = Some(g.clone());
        Ok(flow)
    }

    /// From any invertible float matrix; there is no Kostant-Toda counterpart
    /// when `g` is not totally non-negative, but the symmetric flow is still
    /// complete.
    pub fn general(g: &Matrix<f64>, spectrum: &Spectrum) -> Result<Self> {
        Self::from_float(g, spectrum, None)
    }

    fn from_float(
        g: &Matrix<f64>,
        spectrum: &Spectrum,
        levels: Option<Vec<Levels>>,
    ) -> Result<Self> {
        if !g.is_square() {
            return Err(Error::NotSquare(g.rows(), g.cols()));
        }
        let n = g.rows();
        if n != spectrum.n() {
            return Err(Error::SizeMismatch(n, spectrum.n()));
        }
        let qr = qr_special(g)?;
        let lambda = spectrum.to_f64();
        let l0 = &(&qr.q.transpose() * &Matrix::diagonal(&lambda)) * &qr.q;
        let levels = match levels {
            Some(l) => l,
            None => (1..=n)
                .map(|k| {
                    (1..=n)
                        .combinations(k)
                        .filter_map(|set| {
                            let d = flag_minor(&qr.q, &set).ok()?;
                            (d.abs() > FLOAT_MINOR_CUTOFF).then_some((set, d * d))
                        })
                        .collect()
                })
                .collect(),
        };
        let signs = qr.r.diag().iter().map(|x| x.signum()).collect();
        Ok(Self {
            g_exact: None,
            g: g.clone(),
            lambda,
            q0: qr.q,
            r0: qr.r,
            signs,
            l0: SymLaxMatrix(l0),
            levels,
        })
    }

    pub fn n(&self) -> usize {
        self.g.rows()
    }

    pub fn l0(&self) -> &SymLaxMatrix {
        &self.l0
    }

    pub fn q0(&self) -> &Matrix<f64> {
        &self.q0
    }

    pub fn r0(&self) -> &Matrix<f64> {
        &self.r0
    }

    /// Bases of `M(Q_k)` with `Delta_I(Q_k)^2`.
    pub fn terms(&self, k: usize) -> &[(Vec<usize>, f64)] {
        &self.levels[k - 1]
    }

    /// Bases of `M(Q_k)`, lexicographically.
    pub fn matroid(&self, k: usize) -> Vec<Vec<usize>> {
        self.levels[k - 1].iter().map(|(s, _)| s.clone()).collect()
    }

    /// Orthogonal `Q(t)` with `calL(t) = Q^T Lambda Q`.
    pub fn frame(&self, t: &MultiTime) -> Result<Matrix<f64>> {
        let y = match &self.g_exact {
            Some(g) => scaled_frame(g, &self.lambda, t),
            None => scaled_frame(&self.g, &self.lambda, t),
        };
        let q = qr_positive(&y)?.q;
        let n = self.n();
        Ok(Matrix::from_fn(n, n, |i, j| q[(i, j)] * self.signs[j]))
    }

    /// `calL(t)`.
    pub fn at(&self, t: &MultiTime) -> Result<SymLaxMatrix> {
        let q = self.frame(t)?;
        let l = &(&q.transpose() * &Matrix::diagonal(&self.lambda)) * &q;
        Ok(SymLaxMatrix(l))
    }

    fn exponents(&self, k: usize, th: &[f64]) -> Vec<f64> {
        self.levels[k - 1]
            .iter()
            .map(|(set, w)| w.ln() + 2.0 * set.iter().map(|&i| th[i - 1]).sum::<f64>())
            .collect()
    }

    /// `ln tau^sym_k(t) = ln sum_I Delta_I(Q_k)^2 exp(2 theta_I(t))`.
    pub fn log_tau(&self, k: usize, t: &MultiTime) -> f64 {
        if k == 0 {
            return 0.0;
        }
        log_sum_exp(&self.exponents(k, &theta(&self.lambda, t)))
    }

    /// Softmax weights `alpha_I^k(t)` over the bases of `M(Q_k)`.
    pub fn weights(&self, k: usize, t: &MultiTime) -> Vec<f64> {
        softmax(&self.exponents(k, &theta(&self.lambda, t)))
    }

    /// `alpha_{k,k} = 1/2 d/dt_1 ln(tau^sym_k / tau^sym_{k-1})`.
    pub fn diag_via_tau(&self, t: &MultiTime) -> Vec<f64> {
        let n = self.n();
        let dl: Vec<f64> = (0..=n)
            .map(|k| {
                if k == 0 {
                    return 0.0;
                }
                let alpha = self.weights(k, t);
                self.levels[k - 1]
                    .iter()
                    .zip(alpha)
                    .map(|((set, _), a)| a * set.iter().map(|&i| self.lambda[i - 1]).sum::<f64>())
                    .sum()
            })
            .collect();
        dl.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

pub fn initial_sym(g: &Matrix<Rational>, spectrum: &Spectrum) -> Result<SymFlow> {
    SymFlow::new(g, spectrum)
}

pub fn initial_sym_general(g: &Matrix<f64>, spectrum: &Spectrum) -> Result<SymFlow> {
    SymFlow::general(g, spectrum)
}

pub fn flow_sym(flow: &SymFlow, t: &MultiTime) -> Result<SymLaxMatrix> {
    flow.at(t)
}

pub fn tau_sym(flow: &SymFlow, t: &MultiTime, k: usize) -> f64 {
    flow.log_tau(k, t)
}

/// `max_t |psi(L(t)) - calL(t)|` over the given times.
pub fn consistency_psi(kt: &KtFlow, sym: &SymFlow, times: &[MultiTime]) -> Result<f64> {
    let mut worst = 0.0f64;
    for t in times {
        let l = kt.at(t)?;
        let u = companion_embed(&l, kt.spectrum(), 1e-6)?;
        let via_psi = psi_map(&l, &u, kt.spectrum())?;
        worst = worst.max(via_psi.matrix().max_diff(sym.at(t)?.matrix()));
    }
    Ok(worst)
}

/// `max |(calL(t1+h) - calL(t1-h)) / 2h - [pi_so(calL), calL]|` along `t_1`.
pub fn lax_residual_sym(flow: &SymFlow, t: &MultiTime, h: f64) -> Result<f64> {
    let t1 = t.as_slice()[0];
    let lp = flow.at(&t.with_t1(t1 + h))?;
    let lm = flow.at(&t.with_t1(t1 - h))?;
    let l = flow.at(t)?;
    let deriv = (lp.matrix() - lm.matrix()).scale(&(0.5 / h));
    let rhs = pi_so(l.matrix()).commutator(l.matrix());
    Ok(deriv.max_diff(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fktflow::companion_embed;
    use crate::linalg::{companion, rat};
    use crate::symgroup::{Permutation, ReducedWord};
    use crate::tnncell::{matroid_of_projection, CellPoint};

    fn sl4_cell() -> CellPoint {
        let v = Permutation::from_letters(4, &[3]).unwrap();
        let w = ReducedWord::new(4, vec![2, 3, 2, 1]).unwrap();
        CellPoint::new(v, w, vec![rat(2, 1), rat(3, 1), rat(1, 2)]).unwrap()
    }

    #[test]
    fn psi_of_companion_is_symmetric_and_isospectral() {
        let lam = Spectrum::default_for(4);
        let c = LaxMatrix::from_lower(&companion(&lam.to_f64()));
        let s = psi_map(&c, &Matrix::identity(4), &lam).unwrap();
        assert!(s.symmetry_residual() < 1e-10);
        let cp = s.matrix().char_poly().unwrap();
        let expect = [1.0, 0.0, -10.0, 0.0, 9.0];
        for (a, b) in cp.iter().zip(expect) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn psi_two_by_two_closed_form() {
        // L = [[a, 1], [b, -a]] with a^2 + b = 1; u = [[1,0],[a,1]]
        let lam = Spectrum::from_ints(&[-1, 1]).unwrap();
        let a = 0.3;
        let l = LaxMatrix::from_lower(
            &Matrix::from_rows(vec![vec![a, 1.0], vec![1.0 - a * a, -a]]).unwrap(),
        );
        let u = companion_embed(&l, &lam, 1e-12).unwrap();
        let s = psi_map(&l, &u, &lam).unwrap();
        // gamma = [[1, 1], [-1 - a, 1 - a]] gives a Cayley-type rotation
        let d = 2.0 * a / (1.0 + a * a);
        let off = (1.0 - a * a) / (1.0 + a * a);
        let expect = Matrix::from_rows(vec![vec![d, off], vec![off, -d]]).unwrap();
        assert!(s.matrix().max_diff(&expect) < 1e-12, "{s:?}");
    }

    #[test]
    fn identity_start_is_fixed() {
        let lam = Spectrum::default_for(3);
        let f = SymFlow::new(&Matrix::identity(3), &lam).unwrap();
        for t1 in [-5.0, 0.0, 5.0] {
            let l = f.at(&MultiTime::t1(3, t1)).unwrap();
            assert!(l.matrix().max_diff(&Matrix::diagonal(&lam.to_f64())) < 1e-14);
        }
    }

    #[test]
    fn flow_symmetric_and_matches_psi() {
        let g = sl4_cell().build_g();
        let lam = Spectrum::default_for(4);
        let kt = KtFlow::new(&g, &lam).unwrap();
        let sym = SymFlow::new(&g, &lam).unwrap();
        assert!(sym.at(&MultiTime::zero(4)).unwrap().matrix().max_diff(sym.l0().matrix()) < 1e-12);
        let times: Vec<MultiTime> =
            (-10..=10).map(|i| MultiTime::t1(4, i as f64)).collect();
        assert!(consistency_psi(&kt, &sym, &times).unwrap() < 1e-8);
        for t in &times {
            let l = sym.at(t).unwrap();
            assert!(l.symmetry_residual() < 1e-10);
            let a = l.diag();
            let b = sym.diag_via_tau(t);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn sym_limits_sort_by_v_and_w() {
        let cell = sl4_cell();
        let lam = Spectrum::default_for(4);
        let sym = SymFlow::new(&cell.build_g(), &lam).unwrap();
        let plus = sym.at(&MultiTime::t1(4, 20.0)).unwrap();
        let minus = sym.at(&MultiTime::t1(4, -20.0)).unwrap();
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-6);
        assert!(close(&plus.diag(), &lam.permuted(&cell.w())));
        assert!(close(&minus.diag(), &lam.permuted(cell.v())));
        assert!(plus.max_offdiag() < 1e-6 && minus.max_offdiag() < 1e-6);
    }

    #[test]
    fn matroids_of_q_and_a_agree() {
        let g = sl4_cell().build_g();
        let sym = SymFlow::new(&g, &Spectrum::default_for(4)).unwrap();
        for k in 1..4 {
            assert_eq!(sym.matroid(k), matroid_of_projection(&g, k).unwrap());
            // float minors of q0 agree with the exact squares
            for (set, w) in sym.terms(k) {
                let d = flag_minor(sym.q0(), set).unwrap();
                assert!((d * d - w).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn general_start_has_positive_tau() {
        let g = Matrix::from_rows(vec![
            vec![0.0, 1.0, 2.0],
            vec![-1.0, 0.5, 0.0],
            vec![3.0, 0.0, -1.0],
        ])
        .unwrap();
        let lam = Spectrum::default_for(3);
        let f = SymFlow::general(&g, &lam).unwrap();
        for t1 in [-30.0, -1.0, 0.0, 2.0, 30.0] {
            let t = MultiTime::t1(3, t1);
            for k in 1..3 {
                assert!(f.log_tau(k, &t).is_finite());
            }
            assert!(f.at(&t).unwrap().symmetry_residual() < 1e-10);
        }
        let t = MultiTime::t1(3, 0.4);
        assert!(lax_residual_sym(&f, &t, 1e-4).unwrap() < 1e-6);
    }
}
