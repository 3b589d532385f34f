use num_rational::BigRational;
use orchard_core::audits::group::{almost_group_recover, FiniteAbelianGroup};
use orchard_core::audits::sumset::{difference_set, restricted_sumset, sumset_bound_check, Mode, Op, PairSet};
use orchard_core::audits::{ngon_chord_multiplicity, Region};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

fn distinct(v: Vec<i64>) -> Vec<BigRational> {
    let mut v = v;
    v.sort_unstable();
    v.dedup();
    v.into_iter().map(rat).collect()
}

fn thin(r: usize, s: usize, keep: &[bool]) -> PairSet {
    PairSet::new((0..r).flat_map(|i| (0..s).map(move |j| (i, j))).filter(|&(i, j)| keep[(i * s + j) % keep.len()]))
}

proptest! {
    #[test]
    fn additive_bound(u in prop::collection::vec(-30i64..30, 1..12), v in prop::collection::vec(-30i64..30, 1..12), keep in prop::collection::vec(prop::bool::weighted(0.9), 1..50)) {
        let (u, v) = (distinct(u), distinct(v));
        let g = thin(u.len(), v.len(), &keep);
        prop_assert!(sumset_bound_check(&u, &v, &g, Mode::Additive).unwrap().holds);
    }

    #[test]
    fn multiplicative_bound(u in prop::collection::vec(-30i64..30, 1..12), v in prop::collection::vec(-30i64..30, 1..12), keep in prop::collection::vec(prop::bool::weighted(0.9), 1..50)) {
        let nz = |x: Vec<i64>| distinct(x.into_iter().filter(|&t| t != 0).collect());
        let (u, v) = (nz(u), nz(v));
        prop_assume!(!u.is_empty() && !v.is_empty());
        let g = thin(u.len(), v.len(), &keep);
        prop_assert!(sumset_bound_check(&u, &v, &g, Mode::Multiplicative).unwrap().holds);
    }

    #[test]
    fn ruzsa_triangle(u in prop::collection::vec(-20i64..20, 1..8), v in prop::collection::vec(-20i64..20, 1..8), w in prop::collection::vec(-20i64..20, 1..8)) {
        let (u, v, w) = (distinct(u), distinct(v), distinct(w));
        let lhs = u.len() * difference_set(&v, &w).len();
        let rhs = difference_set(&u, &v).len() * difference_set(&u, &w).len();
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn restricted_sumset_is_monotone(a in prop::collection::vec(-20i64..20, 1..8), keep in prop::collection::vec(any::<bool>(), 1..30)) {
        let a = distinct(a);
        let full = restricted_sumset(&a, &a, &PairSet::full(a.len(), a.len()), Op::Add).unwrap();
        let all: std::collections::BTreeSet<_> = a.iter().flat_map(|x| a.iter().map(move |y| x + y)).collect();
        prop_assert_eq!(&full, &all);
        let part = restricted_sumset(&a, &a, &thin(a.len(), a.len(), &keep), Op::Add).unwrap();
        prop_assert!(part.is_subset(&full));
    }
}

/// Plant x+H, y+H, x+y+H in a random group and move one element of A.
fn planted(rng: &mut ChaCha8Rng, perturb: bool) -> (FiniteAbelianGroup, [Vec<usize>; 3], Vec<usize>) {
    let shapes: [&[u64]; 5] = [&[100, 100], &[10_000], &[12, 60], &[2, 4, 8, 16], &[36, 36]];
    let g = FiniteAbelianGroup::new(shapes[rng.gen_range(0..shapes.len())].to_vec()).unwrap();
    let subs: Vec<Vec<usize>> = g.subgroups().unwrap().into_iter().filter(|h| h.len() >= 8 && h.len() * 2 <= g.order()).collect();
    let h = subs.choose(rng).unwrap().clone();
    let x = rng.gen_range(0..g.order());
    let y = rng.gen_range(0..g.order());
    let coset = |s: usize| -> Vec<usize> { h.iter().map(|&e| g.add(s, e)).collect() };
    let mut a = coset(x);
    if perturb {
        let out = loop {
            let t = rng.gen_range(0..g.order());
            if !a.contains(&t) {
                break t;
            }
        };
        a[0] = out;
    }
    let sets = [a, coset(y), coset(g.add(x, y))];
    (g, sets, h)
}

#[test]
fn planted_cosets_are_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let (g, [a, b, c], h) = planted(&mut rng, false);
        let r = almost_group_recover(&g, &a, &b, &c, None).unwrap().unwrap();
        assert_eq!(r.max_sym_diff, 0);
        assert_eq!(r.subgroup_order, h.len());
    }
}

#[test]
fn perturbed_instances_meet_the_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let (g, [a, b, c], _) = planted(&mut rng, true);
        let r = almost_group_recover(&g, &a, &b, &c, None).unwrap().unwrap();
        assert!(r.bound_holds, "{r:?}");
        assert!(r.max_sym_diff <= 2);
    }
}

#[test]
fn interior_chords_at_most_seven() {
    for n in 3..=30 {
        let r = ngon_chord_multiplicity(n, Region::Interior).unwrap();
        assert!(r.max <= 7, "n = {n}: {}", r.max);
        if n % 2 == 1 {
            // odd n: no three diagonals meet
            assert!(r.max <= 2, "n = {n}");
        }
    }
}

#[test]
fn chords_are_deterministic() {
    let a = ngon_chord_multiplicity(18, Region::All).unwrap();
    let b = ngon_chord_multiplicity(18, Region::All).unwrap();
    assert_eq!(a, b);
}
