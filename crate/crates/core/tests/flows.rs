use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toda_core::fktflow::{
    asymptotic_check, chevalley, companion_embed, default_horizon, direction_to_fixed_point,
    fixed_point, lax_residual, theta, upper_part,
};
use toda_core::linalg::{companion, rat};
use toda_core::symgroup::interval;
use toda_core::{CellPoint, KtFlow, Matrix, MultiTime, Permutation, ReducedWord, Spectrum};

fn random_cell(n: usize, rng: &mut ChaCha8Rng) -> (CellPoint, Permutation, Permutation) {
    let all = Permutation::all(n);
    loop {
        let v = all.choose(rng).unwrap().clone();
        let w = all.choose(rng).unwrap().clone();
        if v != w && v.bruhat_leq(&w).unwrap() {
            let cell = CellPoint::random(v.clone(), w.reduced_word(), rng).unwrap();
            return (cell, v, w);
        }
    }
}

fn sl4_example() -> (KtFlow, Permutation, Permutation) {
    let v = Permutation::from_letters(4, &[3]).unwrap();
    let w = ReducedWord::new(4, vec![2, 3, 2, 1]).unwrap();
    let cell = CellPoint::new(v.clone(), w.clone(), vec![rat(2, 1), rat(3, 1), rat(1, 2)]).unwrap();
    let flow = KtFlow::new(&cell.build_g(), &Spectrum::default_for(4)).unwrap();
    (flow, v, w.target())
}

#[test]
fn sl5_example_sorts_by_v_and_w() {
    let w = ReducedWord::new(5, vec![2, 3, 1, 4, 3, 2]).unwrap();
    let v = Permutation::from_letters(5, &[2, 4, 3]).unwrap();
    let cell = CellPoint::new(v.clone(), w.clone(), vec![rat(1, 1), rat(2, 1), rat(1, 3)]).unwrap();
    let lam = Spectrum::default_for(5);
    let flow = KtFlow::new(&cell.build_g(), &lam).unwrap();
    let rep = asymptotic_check(&flow, &v, &w.target(), 40.0, 1e-6).unwrap();
    assert!(rep.pass, "{rep:?}");
    // (l1, l3, l5, l2, l4) and (l3, l5, l1, l4, l2)
    let expect_minus = [-2.0, 0.0, 2.0, -1.0, 1.0];
    let expect_plus = [0.0, 2.0, -2.0, 1.0, -1.0];
    for i in 0..5 {
        assert!((rep.diag_minus[i] - expect_minus[i]).abs() < 1e-6);
        assert!((rep.diag_plus[i] - expect_plus[i]).abs() < 1e-6);
    }
}

#[test]
fn big_cell_sorts_ascending_then_descending() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 2..=5 {
        let e = Permutation::identity(n);
        let w0 = Permutation::longest(n);
        let cell = CellPoint::random(e.clone(), w0.reduced_word(), &mut rng).unwrap();
        let lam = Spectrum::default_for(n);
        let flow = KtFlow::new(&cell.build_g(), &lam).unwrap();
        let rep = asymptotic_check(&flow, &e, &w0, default_horizon(&lam), 1e-6).unwrap();
        assert!(rep.pass, "n={n} {rep:?}");
        let mut asc = rep.diag_minus.clone();
        asc.sort_by(f64::total_cmp);
        assert!(rep.diag_minus.iter().zip(&asc).all(|(a, b)| (a - b).abs() < 1e-6));
        assert!(rep.diag_plus.windows(2).all(|p| p[0] > p[1]));
    }
}

#[test]
fn lax_residual_is_second_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let lam = Spectrum::default_for(4);
    for _ in 0..20 {
        let (cell, v, w) = random_cell(4, &mut rng);
        let flow = KtFlow::new(&cell.build_g(), &lam).unwrap();
        let t = MultiTime::t1(4, 0.3);
        let r3 = lax_residual(&flow, &t, 1e-3).unwrap();
        let r4 = lax_residual(&flow, &t, 1e-4).unwrap();
        assert!(r4 < 1e-5, "v={v} w={w} r4={r4}");
        let ratio = r3 / r4;
        assert!((80.0..=120.0).contains(&ratio), "v={v} w={w} ratio={ratio}");
    }
}

#[test]
fn higher_time_matches_its_own_lax_equation() {
    // dL/dt_2 = [(L^2)_{>=0}, L]
    let (flow, _, _) = sl4_example();
    let h = 1e-4;
    let t = MultiTime::new(vec![0.2, 0.1, 0.0]).unwrap();
    let shifted = |d: f64| MultiTime::new(vec![0.2, 0.1 + d, 0.0]).unwrap();
    let lp = flow.at(&shifted(h)).unwrap();
    let lm = flow.at(&shifted(-h)).unwrap();
    let l = flow.at(&t).unwrap();
    let deriv = (lp.matrix() - lm.matrix()).scale(&(0.5 / h));
    let l2 = l.matrix() * l.matrix();
    let rhs = upper_part(&l2).commutator(l.matrix());
    assert!(deriv.max_diff(&rhs) < 1e-5);
}

#[test]
fn isospectral_and_conserved_along_the_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let lam = Spectrum::default_for(4);
    let power_sums: Vec<f64> = (2..=4)
        .map(|k| lam.to_f64().iter().map(|x| x.powi(k)).sum())
        .collect();
    // odd power sums vanish, so compare against the absolute moments
    let scales: Vec<f64> = (2..=4)
        .map(|k| lam.to_f64().iter().map(|x| x.abs().powi(k)).sum())
        .collect();
    for _ in 0..10 {
        let (cell, _, _) = random_cell(4, &mut rng);
        let flow = KtFlow::new(&cell.build_g(), &lam).unwrap();
        for i in -20..=20 {
            let t = MultiTime::t1(4, 0.5 * i as f64);
            let l = flow.at(&t).unwrap();
            for ((got, want), scale) in chevalley(l.matrix()).iter().zip(&power_sums).zip(&scales) {
                assert!((got - want).abs() <= 1e-9 * scale, "{got} {want} t={t:?}");
            }
            for lt in flow.log_taus(&t) {
                assert!(lt.is_finite());
            }
            // superdiagonal ones, zeros above
            for r in 0..4 {
                for c in r + 1..4 {
                    let want = if c == r + 1 { 1.0 } else { 0.0 };
                    assert_eq!(l.matrix()[(r, c)], want);
                }
            }
        }
    }
}

#[test]
fn companion_embedding_conjugates_to_companion() {
    let (flow, _, _) = sl4_example();
    let c = companion(&flow.spectrum().to_f64());
    for t1 in [-3.0, 0.0, 2.5] {
        let l = flow.at(&MultiTime::t1(4, t1)).unwrap();
        let u = companion_embed(&l, flow.spectrum(), 1e-9).unwrap();
        assert!(u.strictly_upper().max_abs() == 0.0);
        assert!(u.diag().iter().all(|&d| d == 1.0));
        let lhs = &u * l.matrix();
        let rhs = &c * &u;
        assert!(lhs.max_diff(&rhs) < 1e-8 * (1.0 + lhs.max_abs()));
    }
}

#[test]
fn directions_order_the_exponents() {
    let lam = Spectrum::default_for(4);
    for z in Permutation::all(4) {
        let c = direction_to_fixed_point(&z, &lam).unwrap();
        let th = theta(&lam.to_f64(), &c);
        for j in 1..4 {
            assert!(th[z.at(j) - 1] > th[z.at(j + 1) - 1] + 0.5, "z={z}");
        }
    }
}

#[test]
fn rays_reach_every_fixed_point_of_the_sl4_cell() {
    let (flow, v, w) = sl4_example();
    let lam = flow.spectrum().clone();
    let zs = interval(&v, &w).unwrap();
    assert_eq!(zs.len(), 8);
    let s = 40.0 / lam.min_gap();
    for z in zs {
        let c = direction_to_fixed_point(&z, &lam).unwrap();
        let l = flow.at(&c.scaled(s)).unwrap();
        let err = l.matrix().max_diff(fixed_point(&z, &lam).matrix());
        assert!(err < 1e-6, "z={z} err={err}");
    }
}

#[test]
fn rays_outside_the_interval_do_not_reach_their_target() {
    let (flow, v, w) = sl4_example();
    let lam = flow.spectrum().clone();
    let zs = interval(&v, &w).unwrap();
    let s = 40.0 / lam.min_gap();
    for z in Permutation::all(4).into_iter().filter(|z| !zs.contains(z)) {
        let l = flow.at(&direction_to_fixed_point(&z, &lam).unwrap().scaled(s)).unwrap();
        assert!(l.matrix().max_diff(fixed_point(&z, &lam).matrix()) > 0.5, "z={z}");
    }
}

#[test]
fn stable_route_agrees_with_direct_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let lam = Spectrum::default_for(4);
    for _ in 0..10 {
        let (cell, _, _) = random_cell(4, &mut rng);
        let flow = KtFlow::new(&cell.build_g(), &lam).unwrap();
        // the direct route loses digits as exp(gap * |t1|) grows
        for t1 in [-1.5, -0.5, 0.5, 1.5] {
            let t = MultiTime::t1(4, t1);
            let a = flow.at(&t).unwrap();
            let b = flow.at_direct(&t).unwrap();
            assert!(a.matrix().max_diff(b.matrix()) < 1e-8);
            let d = flow.diag_via_tau(&t);
            for (x, y) in d.iter().zip(a.diag()) {
                assert!((x - y).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn initial_matrix_is_hessenberg_with_given_spectrum() {
    let (flow, _, _) = sl4_example();
    let l0: Matrix<f64> = flow.l0_exact().to_f64();
    assert_eq!(&l0, flow.l0().matrix());
    let cp = flow.l0_exact().char_poly().unwrap();
    // (x^2-9)(x^2-1)
    let want = [1, 0, -10, 0, 9];
    for (a, b) in cp.iter().zip(want) {
        assert_eq!(a, &rat(b, 1));
    }
}
