//! Moment maps of flow trajectories, matroid polytopes, Minkowski sums and
//! Bruhat interval polytopes in exact arithmetic.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fktflow::{direction_to_fixed_point, softmax, theta, MultiTime};
use crate::linalg::{ln_abs, rat, rat_from_f64, Matrix, Rational};
use crate::lp::{edge_certificate, in_hull, in_hull_with_shell, max_weight_outside};
use crate::symgroup::{covers, interval, Permutation};
use crate::symtoda::SymFlow;
use crate::tnncell::{check_exchange, flag_minors, Spectrum};

pub type Point = Vec<Rational>;

/// Containment shell for float trajectory points.
pub fn default_shell() -> Rational {
    rat(1, 100_000_000)
}

/// Exact convex polytope given by its vertices, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    vertices: Vec<Point>,
}

impl Polytope {
    /// Hull of a finite point set.
    pub fn from_points(points: &[Point]) -> Result<Self> {
        Ok(Self {
            vertices: hull_vertices(points)?,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.first().map_or(0, Vec::len)
    }

    pub fn contains(&self, p: &[Rational]) -> Result<bool> {
        in_hull(&self.vertices, p)
    }

    pub fn contains_with_shell(&self, p: &[Rational], eps: &Rational) -> Result<bool> {
        in_hull_with_shell(&self.vertices, p, eps)
    }

    /// Vertex pairs spanning edges.
    pub fn edges(&self) -> Result<Vec<(usize, usize)>> {
        edges(self)
    }

    /// Image under `x -> c 1 - x`.
    pub fn reflect(&self, c: i64) -> Self {
        let c = rat(c, 1);
        let mut vertices: Vec<Point> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| &c - x).collect())
            .collect();
        vertices.sort();
        Self { vertices }
    }
}

/// Points not in the hull of the other points, after removing duplicates.
pub fn hull_vertices(points: &[Point]) -> Result<Vec<Point>> {
    let uniq: Vec<Point> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if let Some(p) = uniq.iter().find(|p| p.len() != uniq[0].len()) {
        return Err(Error::SizeMismatch(p.len(), uniq[0].len()));
    }
    let mut out = Vec::new();
    for (i, p) in uniq.iter().enumerate() {
        let others: Vec<Point> = uniq
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q.clone())
            .collect();
        if others.is_empty() || !in_hull(&others, p)? {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// `{a, b}` is an edge when every convex representation of the midpoint of
/// `a` and `b` puts zero weight on the other vertices.
pub fn edges(p: &Polytope) -> Result<Vec<(usize, usize)>> {
    let vs = p.vertices();
    let mut out = Vec::new();
    for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            let mid: Point = vs[a].iter().zip(&vs[b]).map(|(x, y)| (x + y) / rat(2, 1)).collect();
            let outside = max_weight_outside(vs, &mid, &[a, b])?
                .ok_or_else(|| Error::Lp("midpoint of two vertices outside their hull".into()))?;
            if outside.is_zero() {
                debug_assert!(
                    edge_certificate(vs, a, b)?.is_some(),
                    "edge without supporting functional"
                );
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

/// `e_I` in `R^n`, 1-based `I`.
pub fn indicator(n: usize, set: &[usize]) -> Point {
    let mut p = vec![Rational::zero(); n];
    for &i in set {
        p[i - 1] = Rational::one();
    }
    p
}

/// `conv{e_I : I in M}`.
pub fn matroid_polytope(n: usize, bases: &[Vec<usize>]) -> Result<Polytope> {
    check_exchange(bases)?;
    if let Some(b) = bases.iter().flatten().find(|&&i| i == 0 || i > n) {
        return Err(Error::BadIndexSet(vec![*b]));
    }
    let mut vertices: Vec<Point> = bases.iter().map(|b| indicator(n, b)).collect();
    vertices.sort();
    vertices.dedup();
    Ok(Polytope { vertices })
}

/// Hull of all sums `p_1 + ... + p_r` of vertices.
pub fn minkowski_sum(ps: &[Polytope]) -> Result<Polytope> {
    let Some(first) = ps.first() else {
        return Err(Error::Parse("empty Minkowski sum".into()));
    };
    let mut acc = first.clone();
    for p in &ps[1..] {
        if p.dim() != acc.dim() {
            return Err(Error::SizeMismatch(p.dim(), acc.dim()));
        }
        let mut sums = Vec::new();
        for a in acc.vertices() {
            for b in p.vertices() {
                sums.push(a.iter().zip(b).map(|(x, y)| x + y).collect::<Point>());
            }
        }
        acc = Polytope::from_points(&sums)?;
    }
    Ok(acc)
}

/// Coordinates of the permutation points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Embedding {
    /// `(z(1), ..., z(n))`.
    Appendix,
    /// `p_i = n - z^{-1}(i)`, the limit of the moment map.
    Moment,
}

pub fn permutation_point(z: &Permutation, embedding: Embedding) -> Point {
    let n = z.n();
    match embedding {
        Embedding::Appendix => z.word().iter().map(|&x| rat(x as i64, 1)).collect(),
        Embedding::Moment => {
            let inv = z.inverse();
            (1..=n).map(|i| rat((n - inv.at(i)) as i64, 1)).collect()
        }
    }
}

/// `P_{v,w}` with the permutation labels of its vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct BruhatPolytope {
    pub embedding: Embedding,
    pub polytope: Polytope,
    /// Label of each vertex, aligned with `polytope.vertices()`.
    pub labels: Vec<Permutation>,
    /// Interval elements whose point is not a vertex.
    pub non_vertices: Vec<Permutation>,
}

pub fn bruhat_interval_polytope(
    v: &Permutation,
    w: &Permutation,
    embedding: Embedding,
) -> Result<BruhatPolytope> {
    let zs = interval(v, w)?;
    let pts: Vec<Point> = zs.iter().map(|z| permutation_point(z, embedding)).collect();
    let polytope = Polytope::from_points(&pts)?;
    let label_of = |p: &Point| zs[pts.iter().position(|q| q == p).expect("vertex is an input")].clone();
    let labels = polytope.vertices().iter().map(label_of).collect();
    let non_vertices = zs
        .iter()
        .zip(&pts)
        .filter(|(_, p)| !polytope.vertices().contains(p))
        .map(|(z, _)| z.clone())
        .collect();
    Ok(BruhatPolytope {
        embedding,
        polytope,
        labels,
        non_vertices,
    })
}

/// `(i, j, c)` with `b - a = c (e_i - e_j)`, `c > 0`, 1-based, if any.
pub fn edge_direction(a: &[Rational], b: &[Rational]) -> Option<(usize, usize, Rational)> {
    let d: Vec<Rational> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let nz: Vec<usize> = (0..d.len()).filter(|&i| !d[i].is_zero()).collect();
    if nz.len() != 2 || d[nz[0]] != -d[nz[1]].clone() {
        return None;
    }
    let (i, j) = if d[nz[0]].is_positive() { (nz[0], nz[1]) } else { (nz[1], nz[0]) };
    Some((i + 1, j + 1, d[i].clone()))
}

/// Per-level log-weights `w_I` so that `alpha_I^k(t) = softmax(w_I + 2 theta_I(t))`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentMap {
    n: usize,
    lambda: Vec<f64>,
    levels: Vec<Vec<(Vec<usize>, f64)>>,
}

impl MomentMap {
    /// From exact Plücker coordinates: `w_I = 2 ln |Delta_I(A_k)|`.
    pub fn from_g(g: &Matrix<Rational>, spectrum: &Spectrum) -> Result<Self> {
        let n = g.rows();
        let levels = (1..n)
            .map(|k| {
                Ok(flag_minors(g, k)?
                    .into_iter()
                    .filter(|(_, d)| !d.is_zero())
                    .map(|(set, d)| (set, 2.0 * ln_abs(&d)))
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            lambda: spectrum.to_f64(),
            levels,
        })
    }

    /// From the symmetric flow: `w_I = ln Delta_I(Q_k)^2`.
    pub fn from_sym(sym: &SymFlow, spectrum: &Spectrum) -> Self {
        let n = sym.n();
        let levels = (1..n)
            .map(|k| sym.terms(k).iter().map(|(s, w)| (s.clone(), w.ln())).collect())
            .collect();
        Self {
            n,
            lambda: spectrum.to_f64(),
            levels,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Bases of level `k`.
    pub fn bases(&self, k: usize) -> Vec<Vec<usize>> {
        self.levels[k - 1].iter().map(|(s, _)| s.clone()).collect()
    }

    /// `alpha_I^k(t)` aligned with [`MomentMap::bases`].
    pub fn weights(&self, k: usize, t: &MultiTime) -> Vec<f64> {
        let th = theta(&self.lambda, t);
        let xs: Vec<f64> = self.levels[k - 1]
            .iter()
            .map(|(set, w)| w + 2.0 * set.iter().map(|&i| th[i - 1]).sum::<f64>())
            .collect();
        softmax(&xs)
    }

    /// `phi(t) = sum_k sum_I alpha_I^k e_I`.
    pub fn point(&self, t: &MultiTime) -> Vec<f64> {
        let mut p = vec![0.0; self.n];
        for k in 1..self.n {
            for ((set, _), a) in self.levels[k - 1].iter().zip(self.weights(k, t)) {
                for &i in set {
                    p[i - 1] += a;
                }
            }
        }
        p
    }

    /// `sum_k Gamma_{M(A_k)}`.
    pub fn matroid_sum(&self) -> Result<Polytope> {
        let ps = (1..self.n)
            .map(|k| matroid_polytope(self.n, &self.bases(k)))
            .collect::<Result<Vec<_>>>()?;
        minkowski_sum(&ps)
    }
}

/// Times at which a trajectory is sampled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    /// `t_1` values on the line `(t_1, 0, ..., 0)`.
    pub line: Vec<f64>,
    /// Multiples `s` of each ray direction.
    pub ray_scales: Vec<f64>,
    /// Scale at which the ray limit is read off.
    pub limit_scale: f64,
}

impl SamplePlan {
    /// `t_1 in [-10, 10] / gap` in 41 steps, rays at `{1,2,4,8,16} / gap`,
    /// limits at `40 / gap`.
    pub fn default_for(spectrum: &Spectrum) -> Self {
        let gap = spectrum.min_gap();
        Self {
            line: (-20..=20).map(|i| 0.5 * i as f64 / gap).collect(),
            ray_scales: [1.0, 2.0, 4.0, 8.0, 16.0].iter().map(|s| s / gap).collect(),
            limit_scale: 40.0 / gap,
        }
    }

    /// All sample times for the given interval.
    pub fn times(&self, n: usize, spectrum: &Spectrum, zs: &[Permutation]) -> Result<Vec<MultiTime>> {
        let mut out: Vec<MultiTime> = self.line.iter().map(|&t| MultiTime::t1(n, t)).collect();
        for z in zs {
            let c = direction_to_fixed_point(z, spectrum)?;
            out.extend(self.ray_scales.iter().map(|&s| c.scaled(s)));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayLimit {
    pub z: Permutation,
    pub point: Vec<f64>,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub v: Permutation,
    pub w: Permutation,
    pub samples: usize,
    pub containment_violations: usize,
    pub limits: Vec<RayLimit>,
    pub max_limit_error: f64,
    pub hull_matches: bool,
    pub vertex_count: usize,
    pub non_vertices: Vec<Permutation>,
    pub pass: bool,
}

fn to_exact(p: &[f64]) -> Result<Point> {
    p.iter()
        .map(|&x| rat_from_f64(x).ok_or_else(|| Error::Parse(format!("non-finite coordinate {x}"))))
        .collect()
}

/// Checks that sampled moment points stay inside moment-embedding `P_{v,w}`,
/// that each ray limit reaches its vertex and that the limits span `P_{v,w}`.
pub fn verify_moment_closure(
    mm: &MomentMap,
    spectrum: &Spectrum,
    v: &Permutation,
    w: &Permutation,
    plan: &SamplePlan,
) -> Result<MomentReport> {
    let n = mm.n();
    let target = bruhat_interval_polytope(v, w, Embedding::Moment)?;
    let zs = interval(v, w)?;
    let shell = default_shell();
    let times = plan.times(n, spectrum, &zs)?;
    let mut violations = 0;
    for t in &times {
        if !target.polytope.contains_with_shell(&to_exact(&mm.point(t))?, &shell)? {
            violations += 1;
        }
    }
    let mut limits = Vec::new();
    let mut rounded = Vec::new();
    for z in &zs {
        let c = direction_to_fixed_point(z, spectrum)?;
        let p = mm.point(&c.scaled(plan.limit_scale));
        let vz = permutation_point(z, Embedding::Moment);
        let error = p
            .iter()
            .zip(&vz)
            .map(|(x, y)| (x - crate::linalg::Scalar::to_f64(y)).abs())
            .fold(0.0, f64::max);
        rounded.push(p.iter().map(|x| rat(x.round() as i64, 1)).collect::<Point>());
        limits.push(RayLimit {
            z: z.clone(),
            point: p,
            error,
        });
    }
    let max_limit_error = limits.iter().map(|l| l.error).fold(0.0, f64::max);
    let hull_matches = Polytope::from_points(&rounded)? == target.polytope;
    let pass = violations == 0 && max_limit_error < 1e-6 && hull_matches;
    Ok(MomentReport {
        v: v.clone(),
        w: w.clone(),
        samples: times.len(),
        containment_violations: violations,
        limits,
        max_limit_error,
        hull_matches,
        vertex_count: target.polytope.vertices().len(),
        non_vertices: target.non_vertices,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymMomentReport {
    pub matroids_equal: bool,
    pub max_weight_difference: f64,
    pub max_point_difference: f64,
    pub closure: MomentReport,
    pub pass: bool,
}

/// Moment data from `M(Q_k)` and `Delta_I(Q_k)^2` against the data from
/// `M(A_k)`: same matroids, same weights, same trajectory and closure.
pub fn verify_sym_moment(
    from_a: &MomentMap,
    sym: &SymFlow,
    spectrum: &Spectrum,
    v: &Permutation,
    w: &Permutation,
    plan: &SamplePlan,
) -> Result<SymMomentReport> {
    let n = from_a.n();
    let from_q = MomentMap::from_sym(sym, spectrum);
    let matroids_equal = (1..n).all(|k| from_a.bases(k) == from_q.bases(k));
    let times = plan.times(n, spectrum, &interval(v, w)?)?;
    let mut dw = 0.0f64;
    let mut dp = 0.0f64;
    if matroids_equal {
        for t in &times {
            for k in 1..n {
                for (a, b) in from_a.weights(k, t).iter().zip(from_q.weights(k, t)) {
                    dw = dw.max((a - b).abs());
                }
            }
            for (a, b) in from_a.point(t).iter().zip(from_q.point(t)) {
                dp = dp.max((a - b).abs());
            }
        }
    }
    let closure = verify_moment_closure(&from_q, spectrum, v, w, plan)?;
    let pass = matroids_equal && dw < 1e-8 && dp < 1e-8 && closure.pass;
    Ok(SymMomentReport {
        matroids_equal,
        max_weight_difference: dw,
        max_point_difference: dp,
        closure,
        pass,
    })
}

/// Every edge of appendix-embedding `P_{v,w}` joins a Bruhat cover and is
/// parallel to some `e_i - e_j`. Returns the offending vertex pairs.
pub fn check_edge_theorem(bp: &BruhatPolytope) -> Result<Vec<(Permutation, Permutation)>> {
    let vs = bp.polytope.vertices();
    let mut bad = Vec::new();
    for (a, b) in bp.polytope.edges()? {
        let (x, y) = (&bp.labels[a], &bp.labels[b]);
        let cover = covers(x, y) || covers(y, x);
        if !cover || edge_direction(&vs[a], &vs[b]).is_none() {
            bad.push((x.clone(), y.clone()));
        }
    }
    Ok(bad)
}
