mod common;

use hfs_core::algebra::compose;
use hfs_core::corpus::corpus;
use hfs_core::numerals::{vn, zermelo};
use hfs_core::tuples::*;
use hfs_core::SetHandle;
use proptest::prelude::*;

/// Entries chosen to break the Kuratowski encoding: a set together with its
/// own constituents, a set containing another's singleton, positions and
/// the diamond itself.
fn adversarial(seed: u64) -> Vec<Vec<SetHandle>> {
    let e = SetHandle::empty();
    let d = diamond();
    let mut lists = vec![
        vec![e],
        vec![e, e],
        vec![d, e],
        vec![vn(3), zermelo(1)],
        vec![vn(3), vn(2), vn(1), vn(0)],
        vec![zermelo(2), zermelo(2).singleton().singleton()],
        vec![position(1), position(0)],
        vec![position(2), d, kuratowski_pair(d, e)],
        vec![kuratowski_pair(zermelo(3), vn(3)), zermelo(3)],
    ];
    let sets = corpus(seed, 40, 4);
    for w in sets.chunks(4) {
        let a = w[0];
        let cons = a.constituents();
        let sub = cons[cons.len() / 2];
        lists.push(vec![a, sub]);
        lists.push(vec![sub, a.singleton().singleton(), w[1]]);
        lists.push(w.to_vec());
    }
    lists
}

#[test]
fn positional_round_trip() {
    for list in adversarial(51) {
        let t = make_tuple(&list).unwrap();
        for (i, &x) in list.iter().enumerate() {
            assert_eq!(
                get_at(t, &PositionPath::single(i)).unwrap(),
                x,
                "{list:?} at {i}"
            );
        }
        assert!(!contains_position(t, &PositionPath::single(list.len())));
    }
}

#[test]
fn nested_round_trip_depth_three() {
    let sets = corpus(52, 60, 3);
    for w in sets.chunks(6) {
        let inner = make_tuple(&[w[0], w[1]]).unwrap();
        let middle = make_tuple(&[w[2], inner, w[3]]).unwrap();
        let outer = make_tuple(&[middle, w[4], w[5]]).unwrap();
        let at = |s: &str| get_at(outer, &s.parse().unwrap()).unwrap();
        assert_eq!(at("0,1,0"), w[0]);
        assert_eq!(at("1,1,0"), w[1]);
        assert_eq!(at("0,0"), w[2]);
        assert_eq!(at("2,0"), w[3]);
        assert_eq!(at("1"), w[4]);
        assert_eq!(at("1,0"), inner);
    }
}

#[test]
fn padded_entries_never_contain_each_other() {
    for list in adversarial(53) {
        let padded: Vec<SetHandle> = list
            .iter()
            .enumerate()
            .map(|(n, &x)| compose(x, position(n)))
            .collect();
        for (i, &a) in padded.iter().enumerate() {
            for (j, &b) in padded.iter().enumerate() {
                if i != j {
                    assert!(!a.is_constituent_of(b));
                }
            }
        }
    }
}

#[test]
fn positions_match_text_construction() {
    assert_eq!(diamond().text(), common::diamond());
    for n in 0..6 {
        assert_eq!(position(n).text(), common::position(n));
    }
}

#[test]
fn kuratowski_failure_scenarios() {
    // b a constituent of a: the pair encoding loses b, positions do not.
    let (a, b) = (vn(3), zermelo(1));
    assert_eq!(
        decode_kuratowski(kuratowski_pair(a, b)).diagnosis,
        KuratowskiDiagnosis::AmbiguousSecond
    );
    let t = make_tuple(&[a, b]).unwrap();
    assert_eq!(get_at(t, &PositionPath::single(1)).unwrap(), b);
    // {a} a constituent of b.
    let (a, b) = (zermelo(2), zermelo(2).singleton().singleton());
    assert_eq!(
        decode_kuratowski(kuratowski_pair(a, b)).diagnosis,
        KuratowskiDiagnosis::NotAPairShape
    );
    let t = make_tuple(&[a, b]).unwrap();
    assert_eq!(get_at(t, &PositionPath::single(0)).unwrap(), a);
    assert_eq!(get_at(t, &PositionPath::single(1)).unwrap(), b);
    let d = decode_kuratowski(diamond());
    assert_eq!((d.first, d.second), (Some(zermelo(1)), Some(zermelo(0))));
}

#[test]
fn kuratowski_decodes_generic_pairs() {
    let sets = corpus(54, 200, 4);
    for w in sets.chunks(2) {
        let (a, b) = (w[0], w[1]);
        let d = decode_kuratowski(kuratowski_pair(a, b));
        if a == b {
            assert_eq!(d.diagnosis, KuratowskiDiagnosis::Collapsed);
        } else if !a.is_constituent_of(b) && !b.is_constituent_of(a) {
            assert_eq!(d.diagnosis, KuratowskiDiagnosis::Ok);
            assert_eq!((d.first, d.second), (Some(a), Some(b)));
        }
        if d.diagnosis == KuratowskiDiagnosis::Ok {
            assert_eq!((d.first, d.second), (Some(a), Some(b)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn path_composition(p in prop::collection::vec(0usize..4, 1..4), q in prop::collection::vec(0usize..4, 1..4)) {
        let (pp, qq) = (PositionPath::new(p.clone()).unwrap(), PositionPath::new(q).unwrap());
        prop_assert_eq!(position_path(&pp.concat(&qq)), compose(position_path(&pp), position_path(&qq)));
        prop_assert_eq!(position_path(&PositionPath::single(p[0])), position(p[0]));
        prop_assert_eq!(pp.to_string().parse::<PositionPath>().unwrap(), pp);
    }

    #[test]
    fn random_round_trip(seed in any::<u64>(), len in 1usize..=4) {
        let list = corpus(seed, len, 4);
        let t = make_tuple(&list).unwrap();
        for (i, &x) in list.iter().enumerate() {
            prop_assert_eq!(get_at(t, &PositionPath::single(i)).unwrap(), x);
            prop_assert!(constituent_at(t, &PositionPath::single(i), x));
        }
    }
}
