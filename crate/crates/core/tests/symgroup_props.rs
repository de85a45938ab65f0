use proptest::prelude::*;
use toda_core::symgroup::{covers, interval, pds};
use toda_core::{Permutation, ReducedWord};

/// `x <= y` iff some subword of a reduced word of `y` is a reduced word of `x`.
fn subword_leq(x: &Permutation, y: &Permutation) -> bool {
    let word = y.reduced_word();
    let letters = word.letters();
    let m = letters.len();
    (0u32..1 << m).any(|mask| {
        let sub: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| letters[i]).collect();
        sub.len() == x.length() && Permutation::from_letters(x.n(), &sub).unwrap() == *x
    })
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|w| Permutation::new(w).unwrap())
}

fn pair_strategy(n: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
    (perm_strategy(n), perm_strategy(n))
}

#[test]
fn tableau_criterion_matches_subwords_in_s4() {
    let all = Permutation::all(4);
    for x in &all {
        for y in &all {
            assert_eq!(x.bruhat_leq(y).unwrap(), subword_leq(x, y), "{x} vs {y}");
        }
    }
}

#[test]
fn pds_agrees_with_exhaustive_search_in_s4() {
    for w in Permutation::all(4) {
        let word = w.reduced_word();
        let m = word.len();
        for v in Permutation::all(4) {
            if !v.bruhat_leq(&w).unwrap() {
                assert!(pds(&v, &word).is_err());
                continue;
            }
            let found: Vec<Vec<bool>> = (0u32..1 << m)
                .map(|mask| (0..m).map(|i| mask >> i & 1 == 1).collect::<Vec<bool>>())
                .filter(|mask| {
                    let sub = toda_core::Subexpression::from_mask(word.clone(), mask.clone()).unwrap();
                    sub.value() == v && sub.is_positive_distinguished()
                })
                .collect();
            assert_eq!(found.len(), 1, "v={v} w={w}");
            assert_eq!(pds(&v, &word).unwrap().mask(), &found[0][..]);
        }
    }
}

proptest! {
    #[test]
    fn tableau_criterion_matches_subwords_in_s5((x, y) in pair_strategy(5)) {
        prop_assert_eq!(x.bruhat_leq(&y).unwrap(), subword_leq(&x, &y));
    }

    #[test]
    fn pds_prefixes_never_decrease((v, w) in pair_strategy(5)) {
        prop_assume!(v.bruhat_leq(&w).unwrap());
        let sub = pds(&v, &w.reduced_word()).unwrap();
        prop_assert!(sub.j_bullet().is_empty());
        let pre = sub.prefixes();
        for p in pre.windows(2) {
            prop_assert!(p[1].length() >= p[0].length());
        }
        prop_assert_eq!(sub.value(), v);
    }

    #[test]
    fn covers_are_length_one_steps((y, z) in pair_strategy(4)) {
        if covers(&y, &z) {
            prop_assert!(y.bruhat_leq(&z).unwrap());
            prop_assert_eq!(z.length(), y.length() + 1);
        }
    }

    #[test]
    fn intervals_are_order_convex((v, w) in pair_strategy(4)) {
        prop_assume!(v.bruhat_leq(&w).unwrap());
        let iv = interval(&v, &w).unwrap();
        for z in &iv {
            for y in Permutation::all(4) {
                if v.bruhat_leq(&y).unwrap() && y.bruhat_leq(z).unwrap() {
                    prop_assert!(iv.contains(&y));
                }
            }
        }
    }

    #[test]
    fn act_prefix_is_sorted_slice(z in perm_strategy(6), k in 1usize..=6) {
        let mut direct = z.word()[..k].to_vec();
        direct.sort_unstable();
        prop_assert_eq!(z.act_prefix(k).unwrap(), direct);
    }

    #[test]
    fn reduced_words_multiply_back(z in perm_strategy(6)) {
        let w = z.reduced_word();
        prop_assert_eq!(w.len(), z.length());
        prop_assert_eq!(ReducedWord::new(6, w.letters().to_vec()).unwrap().target(), z);
    }
}
