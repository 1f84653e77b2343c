mod common;

use hfs_core::algebra::{compose, map_union};
use hfs_core::corpus::corpus;
use hfs_core::numerals::{vn, zermelo};
use hfs_core::structure::*;
use hfs_core::tuples::diamond;
use hfs_core::SetHandle;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Membership reachability computed from element lists alone.
fn strictly_below(a: SetHandle, b: SetHandle) -> bool {
    a != b && common::constituents(&b.text()).contains(&a.text())
}

#[test]
fn hasse_edges_are_exactly_the_covers() {
    for s in corpus(31, 250, 4) {
        let g = structure_of(s);
        let verts: Vec<SetHandle> = (0..g.len()).map(|v| g.tag(v).unwrap()).collect();
        let mut covers = Vec::new();
        for (i, &a) in verts.iter().enumerate() {
            for (j, &b) in verts.iter().enumerate() {
                let between = verts
                    .iter()
                    .any(|&c| strictly_below(a, c) && strictly_below(c, b));
                if strictly_below(a, b) && !between {
                    covers.push((i, j));
                }
            }
        }
        covers.sort();
        assert_eq!(g.edges(), covers.as_slice(), "{s}");
    }
}

#[test]
fn cert_agrees_with_brute_force_on_small_graphs() {
    let mut graphs: Vec<StructureGraph> = Vec::new();
    for s in corpus(32, 1500, 5) {
        let g = structure_of(s).forget_tags();
        if g.len() <= 8 && !graphs.contains(&g) {
            graphs.push(g);
        }
    }
    assert!(graphs.len() > 20);
    for (i, a) in graphs.iter().enumerate() {
        for b in &graphs[i..] {
            let brute =
                a.len() == b.len() && common::brute_isomorphic(a.len(), a.edges(), b.edges());
            assert_eq!(canonical_cert(a) == canonical_cert(b), brute);
            assert_eq!(isomorphic(a, b).is_some(), brute);
        }
    }
}

#[test]
fn cert_is_invariant_under_relabeling() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for s in corpus(33, 150, 5) {
        let g = structure_of(s);
        let mut perm: Vec<usize> = (0..g.len()).collect();
        perm.shuffle(&mut rng);
        let p = g.permuted(&perm).unwrap();
        assert_eq!(canonical_cert(&g), canonical_cert(&p));
        let w = isomorphic(&g, &p).unwrap();
        assert!(w.is_valid(&g, &p));
        for a in 0..g.len() {
            for b in 0..g.len() {
                assert_eq!(g.is_below(a, b), p.is_below(w.map(a), w.map(b)));
            }
        }
    }
}

#[test]
fn realization_is_a_fixpoint() {
    for s in corpus(34, 300, 4).into_iter().chain(corpus(501, 1000, 5)) {
        let g = structure_of(s);
        let r = simplest_set(&g).unwrap();
        assert!(isomorphic(&structure_of(r), &g).is_some(), "{s} -> {r}");
        assert_eq!(simplest_set(&structure_of(r)).unwrap(), r);
    }
}

#[test]
fn joins_agree_structurally() {
    let sets = corpus(35, 400, 3);
    for w in sets.chunks(2) {
        let (a, b) = (w[0], w[1]);
        let c = structure_of(compose(a, b));
        assert!(
            isomorphic(&c, &structure_of(map_union(a, b))).is_some(),
            "{a} {b}"
        );
        assert!(isomorphic(&c, &graph_sum(&structure_of(a), &structure_of(b))).is_some());
    }
}

#[test]
fn numeral_structures() {
    for n in 0..=8 {
        let w = isomorphic(&structure_of(zermelo(n)), &structure_of(vn(n))).unwrap();
        assert!(w.is_valid(&structure_of(zermelo(n)), &structure_of(vn(n))));
    }
    let d = structure_of(diamond());
    for k in 0..=10 {
        assert!(isomorphic(&d, &chain(k)).is_none());
    }
}

#[test]
fn product_of_chains_multiplies() {
    for n in 0..6 {
        for m in 0..6 {
            let p = graph_product(&chain(n), &chain(m));
            assert!(isomorphic(&p, &chain(n * m)).is_some(), "{n}*{m}");
        }
    }
}

#[test]
fn json_round_trips_corpus() {
    for s in corpus(36, 100, 4) {
        let g = structure_of(s);
        assert_eq!(from_json(&to_json(&g)).unwrap(), g);
        assert_eq!(to_dot(&g), to_dot(&g.clone()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sum_matches_composition(seed in any::<u64>()) {
        let s = corpus(seed, 2, 4);
        let lhs = graph_sum(&structure_of(s[0]), &structure_of(s[1]));
        prop_assert!(isomorphic(&lhs, &structure_of(compose(s[0], s[1]))).is_some());
    }

    #[test]
    fn structure_is_valid_and_tagged(seed in any::<u64>()) {
        for s in corpus(seed, 3, 5) {
            let g = structure_of(s);
            prop_assert_eq!(g.tag(g.top()), Some(s));
            prop_assert_eq!(g.tag(g.bottom()), Some(SetHandle::empty()));
            prop_assert_eq!(g.len(), s.constituents().len());
        }
    }
}
