use itertools::Itertools;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toda_core::linalg::rat;
use toda_core::momentpoly::{
    bruhat_interval_polytope, check_edge_theorem, edge_direction, hull_vertices, matroid_polytope,
    permutation_point, Point,
};
use toda_core::tnncell::matroid_of_projection;
use toda_core::{
    BruhatPolytope, CellPoint, Embedding, MomentMap, MultiTime, Permutation, Polytope, Rational,
    Spectrum,
};

fn bruhat_pairs(n: usize) -> Vec<(Permutation, Permutation)> {
    let all = Permutation::all(n);
    all.iter()
        .cartesian_product(all.iter())
        .filter(|(v, w)| v.bruhat_leq(w).unwrap())
        .map(|(v, w)| (v.clone(), w.clone()))
        .collect()
}

fn pt(xs: &[i64]) -> Point {
    xs.iter().map(|&x| rat(x, 1)).collect()
}

/// Twice the signed area of a triangle.
fn cross(a: &Point, b: &Point, c: &Point) -> Rational {
    (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0])
}

/// Planar vertex oracle: `p` is not a vertex iff it lies in a triangle (or on
/// a segment) spanned by other points.
fn planar_vertices(points: &[Point]) -> Vec<Point> {
    let uniq: Vec<Point> = points.iter().cloned().sorted().dedup().collect();
    let zero = rat(0, 1);
    let mut out = Vec::new();
    for (i, p) in uniq.iter().enumerate() {
        let others: Vec<&Point> = uniq.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q).collect();
        let on_segment = others.iter().tuple_combinations().any(|(a, b)| {
            cross(a, b, p) == zero
                && (0..2).all(|d| (&p[d] - &a[d]) * (&p[d] - &b[d]) <= zero)
        });
        let in_triangle = others.iter().tuple_combinations().any(|(a, b, c)| {
            if cross(a, b, c) == zero {
                return false;
            }
            let s = [cross(a, b, p), cross(b, c, p), cross(c, a, p)];
            s.iter().all(|x| *x >= zero) || s.iter().all(|x| *x <= zero)
        });
        if !on_segment && !in_triangle {
            out.push(p.clone());
        }
    }
    out
}

proptest! {
    #[test]
    fn planar_hulls_match_triangle_oracle(raw in prop::collection::vec((0i64..5, 0i64..5), 1..9)) {
        let points: Vec<Point> = raw.iter().map(|&(x, y)| pt(&[x, y])).collect();
        prop_assert_eq!(hull_vertices(&points).unwrap(), planar_vertices(&points));
    }
}

#[test]
fn permutohedron_edges_are_adjacent_value_swaps() {
    for n in 3..=4 {
        let perm = Polytope::from_points(
            &Permutation::all(n).iter().map(|z| permutation_point(z, Embedding::Appendix)).collect::<Vec<_>>(),
        )
        .unwrap();
        let vs = perm.vertices();
        let edges = perm.edges().unwrap();
        let oracle: Vec<(usize, usize)> = (0..vs.len())
            .tuple_combinations()
            .filter(|&(a, b)| {
                let diff: Vec<usize> = (0..n).filter(|&i| vs[a][i] != vs[b][i]).collect();
                diff.len() == 2 && {
                        let d = &vs[a][diff[0]] - &vs[a][diff[1]];
                        d == rat(1, 1) || d == rat(-1, 1)
                    }
            })
            .collect();
        assert_eq!(edges, oracle);
        let fact: usize = (1..=n).product();
        assert_eq!(edges.len(), fact * (n - 1) / 2);
    }
}

#[test]
fn matroid_polytope_edges_are_unit_moves() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for (v, w) in bruhat_pairs(4) {
        let g = CellPoint::random(v, w.reduced_word(), &mut rng).unwrap().build_g();
        for k in 1..4 {
            let p = matroid_polytope(4, &matroid_of_projection(&g, k).unwrap()).unwrap();
            let vs = p.vertices();
            for (a, b) in p.edges().unwrap() {
                let (_, _, c) = edge_direction(&vs[a], &vs[b]).expect("edge parallel to e_i - e_j");
                assert_eq!(c, rat(1, 1));
            }
        }
    }
}

fn check_minkowski(v: &Permutation, w: &Permutation, rng: &mut ChaCha8Rng) {
    let n = v.n();
    let lam = Spectrum::default_for(n);
    let g = CellPoint::random(v.clone(), w.reduced_word(), rng).unwrap().build_g();
    let mm = MomentMap::from_g(&g, &lam).unwrap();
    let target = bruhat_interval_polytope(v, w, Embedding::Moment).unwrap();
    assert_eq!(mm.matroid_sum().unwrap(), target.polytope, "v={v} w={w}");
}

#[test]
fn minkowski_identity_on_all_s3_cells() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (v, w) in bruhat_pairs(3) {
        check_minkowski(&v, &w, &mut rng);
    }
}

#[test]
fn minkowski_identity_on_sampled_s4_cells() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pairs = bruhat_pairs(4);
    for (v, w) in pairs.choose_multiple(&mut rng.clone(), 10) {
        check_minkowski(v, w, &mut rng);
    }
}

#[test]
fn embeddings_are_bridged_by_reflection() {
    for n in 3..=4 {
        for (v, w) in bruhat_pairs(n) {
            let m = bruhat_interval_polytope(&v, &w, Embedding::Moment).unwrap();
            let a = bruhat_interval_polytope(&v.inverse(), &w.inverse(), Embedding::Appendix).unwrap();
            assert_eq!(a.polytope.reflect(n as i64), m.polytope, "v={v} w={w}");
            // permutation points are vertices of the permutohedron, hence of any sub-polytope
            assert!(m.non_vertices.is_empty() && a.non_vertices.is_empty());
        }
    }
}

#[test]
fn softmax_weights_form_a_distribution() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let lam = Spectrum::default_for(4);
    for (v, w) in bruhat_pairs(4).choose_multiple(&mut rng.clone(), 15) {
        let g = CellPoint::random(v.clone(), w.reduced_word(), &mut rng).unwrap().build_g();
        let mm = MomentMap::from_g(&g, &lam).unwrap();
        for t1 in [-6.0, -0.5, 0.0, 2.0, 5.0] {
            let t = MultiTime::t1(4, t1);
            for k in 1..4 {
                let a = mm.weights(k, &t);
                assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                // the largest weight rounds to 1 once the others drop below ulp
                assert!(a.iter().all(|&x| x > 0.0 && x <= 1.0), "{a:?}");
                if a.len() > 1 {
                    let top = a.iter().cloned().fold(0.0, f64::max);
                    let rest: f64 = a.iter().sum::<f64>() - top;
                    assert!(top < 1.0 || rest < 1e-15, "{a:?}");
                }
            }
            let p = mm.point(&t);
            assert!((p.iter().sum::<f64>() - 6.0).abs() < 1e-12);
        }
    }
}

fn edge_theorem_holds(bp: &BruhatPolytope) -> bool {
    check_edge_theorem(bp).unwrap().is_empty()
}

#[test]
fn s3_edges_are_covers() {
    for (v, w) in bruhat_pairs(3) {
        let bp = bruhat_interval_polytope(&v, &w, Embedding::Appendix).unwrap();
        assert!(edge_theorem_holds(&bp), "v={v} w={w}");
        assert!(bp.non_vertices.is_empty());
    }
}

#[test]
fn sampled_s5_edges_are_covers() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let all = Permutation::all(5);
    let mut done = 0;
    while done < 4 {
        let v = all.choose(&mut rng).unwrap();
        let w = all.choose(&mut rng).unwrap();
        if !v.bruhat_leq(w).unwrap() || w.length() - v.length() > 5 {
            continue;
        }
        let bp = bruhat_interval_polytope(v, w, Embedding::Appendix).unwrap();
        assert!(edge_theorem_holds(&bp), "v={v} w={w}");
        done += 1;
    }
}
