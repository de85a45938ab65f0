//! Marsh-Rietsch parametrization of cells of the totally non-negative flag
//! variety and the flag-minor tests that characterize them.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{flag_minor, parse_rational, rat, rat_from_f64, Matrix, Rational, Scalar};
use crate::symgroup::{pds, Permutation, ReducedWord, Subexpression};

/// Strictly increasing eigenvalues with zero sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Spectrum {
    lambdas: Vec<Rational>,
}

impl Spectrum {
    pub fn new(lambdas: Vec<Rational>) -> Result<Self> {
        if lambdas.len() < 2 {
            return Err(Error::InvalidSpectrum("need at least two eigenvalues".into()));
        }
        if lambdas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpectrum("eigenvalues must be strictly increasing".into()));
        }
        if !lambdas.iter().fold(Rational::zero(), |a, b| a + b).is_zero() {
            return Err(Error::InvalidSpectrum("eigenvalues must sum to zero".into()));
        }
        Ok(Self { lambdas })
    }

    pub fn from_f64(xs: &[f64]) -> Result<Self> {
        let lambdas = xs
            .iter()
            .map(|&x| rat_from_f64(x).ok_or_else(|| Error::InvalidSpectrum(format!("{x}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(lambdas)
    }

    pub fn from_ints(xs: &[i64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| rat(x, 1)).collect())
    }

    /// Evenly spaced integers centred at zero: `-(n-1)/2..=(n-1)/2` for odd
    /// `n`, doubled for even `n`.
    pub fn default_for(n: usize) -> Self {
        let n_i = n as i64;
        let xs: Vec<i64> = (1..=n_i)
            .map(|i| if n % 2 == 1 { i - (n_i + 1) / 2 } else { 2 * i - n_i - 1 })
            .collect();
        Self::from_ints(&xs).expect("default spectrum is valid for n >= 2")
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn exact(&self) -> &[Rational] {
        &self.lambdas
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.lambdas.iter().map(Scalar::to_f64).collect()
    }

    /// `lambda_i`, 1-based.
    pub fn at(&self, i: usize) -> f64 {
        self.lambdas[i - 1].to_f64()
    }

    pub fn min_gap(&self) -> f64 {
        self.lambdas
            .windows(2)
            .map(|w| (w[1].clone() - w[0].clone()).to_f64())
            .fold(f64::INFINITY, f64::min)
    }

    /// `(lambda_{z(1)}, ..., lambda_{z(n)})`.
    pub fn permuted(&self, z: &Permutation) -> Vec<f64> {
        z.word().iter().map(|&i| self.at(i)).collect()
    }
}

impl TryFrom<Vec<String>> for Spectrum {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        Self::new(v.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?)
    }
}

impl From<Spectrum> for Vec<String> {
    fn from(s: Spectrum) -> Self {
        s.lambdas.iter().map(ToString::to_string).collect()
    }
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if i == 0 || i >= n {
        return Err(Error::LetterOutOfRange { index: i, n });
    }
    Ok(())
}

/// Identity with the block at `(i, i)` replaced by `[[1, 0], [p, 1]]`.
pub fn generator_y<T: Scalar>(n: usize, i: usize, p: T) -> Result<Matrix<T>> {
    check_index(n, i)?;
    let mut m = Matrix::identity(n);
    m[(i, i - 1)] = p;
    Ok(m)
}

/// Identity with the block at `(i, i)` replaced by `[[0, -1], [1, 0]]`.
pub fn generator_sdot<T: Scalar>(n: usize, i: usize) -> Result<Matrix<T>> {
    check_index(n, i)?;
    let mut m = Matrix::identity(n);
    m[(i - 1, i - 1)] = T::zero();
    m[(i, i)] = T::zero();
    m[(i - 1, i)] = -T::one();
    m[(i, i - 1)] = T::one();
    Ok(m)
}

/// Parameter values drawn by [`CellPoint::random`].
pub fn default_param_pool() -> Vec<Rational> {
    vec![rat(1, 4), rat(1, 3), rat(1, 2), rat(1, 1), rat(2, 1), rat(3, 1)]
}

/// A point of the cell indexed by `v <= w`: a reduced word for `w` and one
/// positive parameter per position of the positive distinguished
/// subexpression for `v` that carries the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct CellPoint {
    v: Permutation,
    w_word: ReducedWord,
    params: Vec<Rational>,
    pds: Subexpression,
}

#[derive(Serialize, Deserialize)]
struct CellPointRepr {
    v: Permutation,
    w_word: Vec<usize>,
    params: Vec<String>,
}

impl Serialize for CellPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CellPointRepr {
            v: self.v.clone(),
            w_word: self.w_word.letters().to_vec(),
            params: self.params.iter().map(ToString::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CellPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = CellPointRepr::deserialize(d)?;
        let word = ReducedWord::new(r.v.n(), r.w_word).map_err(D::Error::custom)?;
        let params = r
            .params
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        CellPoint::new(r.v, word, params).map_err(D::Error::custom)
    }
}

impl CellPoint {
    pub fn new(v: Permutation, w_word: ReducedWord, params: Vec<Rational>) -> Result<Self> {
        let sub = pds(&v, &w_word)?;
        let need = sub.j_plus().len();
        if params.len() != need {
            return Err(Error::InvalidCell(format!(
                "expected {need} parameters, got {}",
                params.len()
            )));
        }
        if let Some(p) = params.iter().find(|p| !p.is_positive()) {
            return Err(Error::InvalidCell(format!("parameter {p} is not positive")));
        }
        Ok(Self {
            v,
            w_word,
            params,
            pds: sub,
        })
    }

    /// Parameters sampled uniformly from [`default_param_pool`].
    pub fn random<R: Rng + ?Sized>(v: Permutation, w_word: ReducedWord, rng: &mut R) -> Result<Self> {
        let need = pds(&v, &w_word)?.j_plus().len();
        let pool = default_param_pool();
        let params = (0..need)
            .map(|_| pool.choose(rng).expect("pool is non-empty").clone())
            .collect();
        Self::new(v, w_word, params)
    }

    /// All parameters equal to one.
    pub fn unit(v: Permutation, w_word: ReducedWord) -> Result<Self> {
        let need = pds(&v, &w_word)?.j_plus().len();
        Self::new(v, w_word, vec![Rational::one(); need])
    }

    pub fn n(&self) -> usize {
        self.v.n()
    }

    pub fn v(&self) -> &Permutation {
        &self.v
    }

    pub fn w(&self) -> Permutation {
        self.w_word.target()
    }

    pub fn w_word(&self) -> &ReducedWord {
        &self.w_word
    }

    pub fn params(&self) -> &[Rational] {
        &self.params
    }

    pub fn pds(&self) -> &Subexpression {
        &self.pds
    }

    /// The factors `g_1, ..., g_m` whose product is [`CellPoint::build_g`].
    pub fn factors(&self) -> Vec<Matrix<Rational>> {
        let n = self.n();
        let mut params = self.params.iter();
        self.w_word
            .letters()
            .iter()
            .zip(self.pds.mask())
            .map(|(&i, &used)| {
                if used {
                    generator_sdot(n, i)
                } else {
                    let p = params.next().expect("one parameter per identity position");
                    generator_y(n, i, p.clone())
                }
                .expect("letters validated by the reduced word")
            })
            .collect()
    }

    pub fn build_g(&self) -> Matrix<Rational> {
        self.factors()
            .iter()
            .fold(Matrix::identity(self.n()), |acc, f| &acc * f)
    }
}

/// `Delta^k_I(g)` for every `k`-subset `I`, lexicographically, 1-based.
pub fn flag_minors(g: &Matrix<Rational>, k: usize) -> Result<Vec<(Vec<usize>, Rational)>> {
    if k == 0 || k > g.cols() {
        return Err(Error::PrefixOutOfRange { k, n: g.cols() });
    }
    (1..=g.rows())
        .combinations(k)
        .map(|rows| flag_minor(g, &rows).map(|d| (rows, d)))
        .collect()
}

/// Every flag minor of `g` is non-negative.
pub fn flag_minors_nonnegative(g: &Matrix<Rational>) -> Result<bool> {
    for k in 1..g.cols() {
        if flag_minors(g, k)?.iter().any(|(_, d)| d.is_negative()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Delta^k_{z.[k]}(g) > 0` for all `k`; for `g` in the cell of `(v, w)` this
/// holds exactly when `v <= z <= w`.
pub fn interval_by_minors(g: &Matrix<Rational>, z: &Permutation) -> Result<bool> {
    if z.n() != g.rows() {
        return Err(Error::SizeMismatch(z.n(), g.rows()));
    }
    for k in 1..=z.n() {
        if !flag_minor(g, &z.act_prefix(k)?)?.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Bases `{I : Delta^k_I(g) != 0}` of the projection to the `k`-th
/// Grassmannian, lexicographically sorted.
pub fn matroid_of_projection(g: &Matrix<Rational>, k: usize) -> Result<Vec<Vec<usize>>> {
    let bases: Vec<Vec<usize>> = flag_minors(g, k)?
        .into_iter()
        .filter(|(_, d)| !d.is_zero())
        .map(|(i, _)| i)
        .collect();
    if cfg!(debug_assertions) {
        check_exchange(&bases)?;
    }
    Ok(bases)
}

/// Basis exchange: for bases `I, J` and `a` in `I \ J` there is `b` in
/// `J \ I` with `I - a + b` a basis.
pub fn check_exchange(bases: &[Vec<usize>]) -> Result<()> {
    use std::collections::BTreeSet;
    let set: BTreeSet<&Vec<usize>> = bases.iter().collect();
    for i in bases {
        for j in bases {
            for a in i.iter().filter(|a| !j.contains(a)) {
                let ok = j.iter().filter(|b| !i.contains(b)).any(|b| {
                    let mut cand: Vec<usize> =
                        i.iter().copied().filter(|x| x != a).chain([*b]).collect();
                    cand.sort_unstable();
                    set.contains(&cand)
                });
                if !ok {
                    return Err(Error::ExchangeAxiom(i.clone(), j.clone()));
                }
            }
        }
    }
    Ok(())
}
