mod common;

use std::collections::BTreeSet;

use anosov_type::geomtype::{all_equivalences, validate};
use anosov_type::{equivalence_class, is_equal, is_equivalent, orientation_double_cover, EquivalenceWitness};
use common::{random_type, t1, tcat};
use itertools::Itertools;
use proptest::prelude::*;

/// Every type reachable by some witness, enumerated directly rather than by generators.
fn class_by_witnesses(g: &anosov_type::GeometricType) -> BTreeSet<anosov_type::GeometricType> {
    let n = g.n();
    let mut out = BTreeSet::new();
    for p in (1..=n).permutations(n) {
        if !(1..=n).all(|i| g.h(i) == g.h(p[i - 1]) && g.v(i) == g.v(p[i - 1])) {
            continue;
        }
        for mask in 0..(1u32 << n) {
            for t in [1i8, -1] {
                let eps: Vec<i8> = (0..n).map(|b| if mask >> b & 1 == 1 { -1 } else { 1 }).collect();
                let eps_prime = eps.iter().map(|e| e * t).collect();
                out.insert(EquivalenceWitness { sigma: p.clone(), eps, eps_prime }.apply(g));
            }
        }
    }
    out
}

#[test]
fn t1_examples() {
    assert!(is_equal(&t1(1), &t1(1)));
    assert!(is_equivalent(&t1(1), &tcat()).is_none());
    assert_eq!(equivalence_class(&t1(1)).len(), 1);
}

#[test]
fn tcat_double_flip_is_equivalent() {
    let g = tcat();
    let f = g.flip_unstable_orientation().flip_stable_orientation();
    let w = is_equivalent(&g, &f).expect("equivalent");
    assert_eq!(w.apply(&g), f);
}

#[test]
fn tcat_relabelings_are_equivalences() {
    let g = tcat();
    let swapped = g.relabel(&[2, 1]).unwrap();
    assert_eq!(swapped.hs(), &[2, 3]);
    let w = is_equivalent(&g, &swapped).expect("a relabeling is an equivalence");
    assert_eq!(w, EquivalenceWitness { sigma: vec![2, 1], eps: vec![1, 1], eps_prime: vec![1, 1] });
    assert!(is_equal(&g, &swapped));
    let same = g.relabel(&[1, 2]).unwrap();
    assert_eq!(is_equivalent(&g, &same), Some(EquivalenceWitness::identity(2)));
}

#[test]
fn tcat_class_matches_direct_enumeration() {
    let g = tcat();
    let class = equivalence_class(&g);
    assert_eq!(class, class_by_witnesses(&g));
    for e in &class {
        assert!(is_equivalent(e, &g).is_some());
        assert_eq!(equivalence_class(e), class);
    }
}

#[test]
fn tcat_has_only_trivial_symmetry() {
    assert_eq!(all_equivalences(&tcat(), &tcat()), vec![EquivalenceWitness::identity(2)]);
}

#[test]
fn double_cover_of_reversed_t1() {
    let d = orientation_double_cover(&t1(-1));
    assert_eq!((d.n(), d.hs(), d.vs()), (2, &[1usize, 1][..], &[1usize, 1][..]));
    assert_eq!((d.phi(1, 1), d.phi(2, 1)), ((2, 1), (1, 1)));
    assert!(d.is_orientation_positive());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn class_generators_match_witnesses(seed in any::<u64>()) {
        let g = random_type(seed, 3);
        prop_assert_eq!(equivalence_class(&g), class_by_witnesses(&g));
    }

    #[test]
    fn equivalence_is_an_equivalence_relation(seed in any::<u64>(), picks in prop::collection::vec(any::<prop::sample::Index>(), 2)) {
        let g = random_type(seed, 3);
        let class: Vec<_> = equivalence_class(&g).into_iter().collect();
        let a = picks[0].get(&class);
        let b = picks[1].get(&class);
        prop_assert!(is_equivalent(&g, &g).is_some());
        let ab = is_equivalent(a, b);
        prop_assert!(ab.is_some());
        prop_assert!(is_equivalent(b, a).is_some());
        // Transitivity through g.
        prop_assert!(is_equivalent(a, &g).is_some() && is_equivalent(&g, b).is_some());
        let w = ab.unwrap();
        prop_assert_eq!(&w.apply(a), b);
        prop_assert_eq!(&w.inverse().apply(b), a);
    }

    #[test]
    fn flips_preserve_sums_and_validity(seed in any::<u64>(), i in 1usize..4) {
        let g = random_type(seed, 3);
        let i = (i - 1) % g.n() + 1;
        for f in [g.flip_stable_orientation(), g.flip_unstable_orientation(), g.flip_rectangle(i).unwrap()] {
            prop_assert_eq!(f.hs().iter().sum::<usize>(), f.vs().iter().sum::<usize>());
            prop_assert_eq!(validate(&f.to_raw()).unwrap(), f.clone());
            prop_assert!(is_equivalent(&g, &f).is_some());
        }
    }

    #[test]
    fn equal_implies_equivalent(seed in any::<u64>()) {
        let g = random_type(seed, 3);
        let s: Vec<usize> = (1..=g.n()).rev().collect();
        let r = g.relabel(&s).unwrap();
        if is_equal(&g, &r) {
            prop_assert!(is_equivalent(&g, &r).is_some());
        }
        prop_assert!(is_equal(&g, &g));
    }

    #[test]
    fn double_cover_is_oriented_and_valid(seed in any::<u64>()) {
        let g = random_type(seed, 3);
        let d = orientation_double_cover(&g);
        prop_assert!(d.is_orientation_positive());
        prop_assert_eq!(validate(&d.to_raw()).unwrap(), d.clone());
        let expect = if g.is_orientation_positive() { 1 } else { 2 };
        prop_assert_eq!(d.handle_count(), expect * g.handle_count());
    }
}
