//! Dense two-phase simplex over exact rationals with Bland's rule, plus the
//! convex-hull queries built on it.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.obj.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = &*x / &p;
        }
        let prow = self.rows[r].clone();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x = &*x - &f * y;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }

    /// Minimizes with entering columns restricted to `allowed`. Returns false
    /// when unbounded.
    fn run(&mut self, allowed: &[bool]) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(enter) = (0..rhs).find(|&j| allowed[j] && self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[enter];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

/// Minimizes `c . x` subject to `A x = b`, `x >= 0`.
pub fn minimize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Result<LpOutcome> {
    let m = a.len();
    let n = c.len();
    if b.len() != m {
        return Err(Error::Lp(format!("{m} constraint rows but {} right-hand sides", b.len())));
    }
    if let Some(row) = a.iter().find(|r| r.len() != n) {
        return Err(Error::Lp(format!("row of width {} but {n} variables", row.len())));
    }
    // columns: n structural, m artificial, then rhs
    let width = n + m + 1;
    let mut rows = Vec::with_capacity(m);
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut row = vec![Rational::zero(); width];
        for (j, x) in ai.iter().enumerate() {
            row[j] = if flip { -x } else { x.clone() };
        }
        row[n + i] = Rational::one();
        row[width - 1] = if flip { -bi } else { bi.clone() };
        rows.push(row);
    }
    let mut obj = vec![Rational::zero(); width];
    for row in &rows {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    let mut t = Tableau {
        rows,
        obj,
        basis: (n..n + m).collect(),
    };
    let all = vec![true; n + m];
    t.run(&all);
    if !t.obj[width - 1].is_zero() {
        return Ok(LpOutcome::Infeasible);
    }
    // drive artificials out of the basis, dropping redundant rows
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            match (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                Some(j) => t.pivot(r, j),
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    let mut obj = vec![Rational::zero(); width];
    obj[..n].clone_from_slice(c);
    for (row, &bj) in t.rows.iter().zip(&t.basis) {
        let f = obj[bj].clone();
        if f.is_zero() {
            continue;
        }
        for (x, y) in obj.iter_mut().zip(row) {
            *x -= &f * y;
        }
    }
    t.obj = obj;
    let allowed: Vec<bool> = (0..n + m).map(|j| j < n).collect();
    if !t.run(&allowed) {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &bj) in t.rows.iter().zip(&t.basis) {
        x[bj] = row[width - 1].clone();
    }
    let value = -t.obj[width - 1].clone();
    Ok(LpOutcome::Optimal { x, value })
}

fn check_dims(points: &[Vec<Rational>], target: &[Rational]) -> Result<()> {
    match points.iter().find(|p| p.len() != target.len()) {
        Some(p) => Err(Error::SizeMismatch(p.len(), target.len())),
        None => Ok(()),
    }
}

/// Equality system `sum l_j p_j = target`, `sum l_j = 1`.
fn hull_system(points: &[Vec<Rational>], target: &[Rational]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let d = target.len();
    let mut a: Vec<Vec<Rational>> = (0..d)
        .map(|i| points.iter().map(|p| p[i].clone()).collect())
        .collect();
    a.push(vec![Rational::one(); points.len()]);
    let mut b = target.to_vec();
    b.push(Rational::one());
    (a, b)
}

/// Convex weights expressing `target` in terms of `points`, if any.
pub fn convex_weights(points: &[Vec<Rational>], target: &[Rational]) -> Result<Option<Vec<Rational>>> {
    check_dims(points, target)?;
    if points.is_empty() {
        return Ok(None);
    }
    let (a, b) = hull_system(points, target);
    let c = vec![Rational::zero(); points.len()];
    Ok(match minimize(&a, &b, &c)? {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    })
}

pub fn in_hull(points: &[Vec<Rational>], target: &[Rational]) -> Result<bool> {
    Ok(convex_weights(points, target)?.is_some())
}

/// Largest total weight on points outside `keep` over all convex
/// representations of `target`; `None` if `target` is outside the hull.
pub fn max_weight_outside(
    points: &[Vec<Rational>],
    target: &[Rational],
    keep: &[usize],
) -> Result<Option<Rational>> {
    check_dims(points, target)?;
    let (a, b) = hull_system(points, target);
    let c: Vec<Rational> = (0..points.len())
        .map(|j| if keep.contains(&j) { Rational::zero() } else { -Rational::one() })
        .collect();
    Ok(match minimize(&a, &b, &c)? {
        LpOutcome::Optimal { value, .. } => Some(-value),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => return Err(Error::Lp("bounded program reported unbounded".into())),
    })
}

/// Whether `target` lies within `eps` (in the max norm) of the hull.
pub fn in_hull_with_shell(points: &[Vec<Rational>], target: &[Rational], eps: &Rational) -> Result<bool> {
    check_dims(points, target)?;
    if points.is_empty() {
        return Ok(false);
    }
    let d = target.len();
    let m = points.len();
    // variables: l (m), dp (d), dm (d), sp (d), sm (d)
    let nv = m + 4 * d;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..d {
        let mut row = vec![Rational::zero(); nv];
        for (j, p) in points.iter().enumerate() {
            row[j] = p[i].clone();
        }
        row[m + i] = Rational::one();
        row[m + d + i] = -Rational::one();
        a.push(row);
        b.push(target[i].clone());
    }
    let mut row = vec![Rational::zero(); nv];
    for x in row.iter_mut().take(m) {
        *x = Rational::one();
    }
    a.push(row);
    b.push(Rational::one());
    for i in 0..d {
        for (delta, slack) in [(m + i, m + 2 * d + i), (m + d + i, m + 3 * d + i)] {
            let mut row = vec![Rational::zero(); nv];
            row[delta] = Rational::one();
            row[slack] = Rational::one();
            a.push(row);
            b.push(eps.clone());
        }
    }
    let c = vec![Rational::zero(); nv];
    Ok(matches!(minimize(&a, &b, &c)?, LpOutcome::Optimal { .. }))
}

/// A linear functional `y` with `y.a = y.b = beta` and `y.p <= beta - 1` for
/// every other point, certifying that `[a, b]` is an edge.
pub fn edge_certificate(points: &[Vec<Rational>], ia: usize, ib: usize) -> Result<Option<Vec<Rational>>> {
    let d = points.first().map_or(0, Vec::len);
    let m = points.len();
    // variables: y+ (d), y- (d), beta+, beta-, slack per other point
    let others: Vec<usize> = (0..m).filter(|&j| j != ia && j != ib).collect();
    let nv = 2 * d + 2 + others.len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    let functional_row = |p: &[Rational]| {
        let mut row = vec![Rational::zero(); nv];
        for i in 0..d {
            row[i] = p[i].clone();
            row[d + i] = -p[i].clone();
        }
        row[2 * d] = -Rational::one();
        row[2 * d + 1] = Rational::one();
        row
    };
    for &j in &[ia, ib] {
        a.push(functional_row(&points[j]));
        b.push(Rational::zero());
    }
    for (s, &j) in others.iter().enumerate() {
        let mut row = functional_row(&points[j]);
        row[2 * d + 2 + s] = Rational::one();
        a.push(row);
        b.push(-Rational::one());
    }
    let c = vec![Rational::zero(); nv];
    Ok(match minimize(&a, &b, &c)? {
        LpOutcome::Optimal { x, .. } => Some((0..d).map(|i| &x[i] - &x[d + i]).collect()),
        _ => None,
    })
}
