use proptest::prelude::*;

use tracklab_core::classify::{
    apply_symmetry, classify_weights, enumerate_and_verify, tetra_symmetries, EnumerationOptions,
};
use tracklab_core::complex::EdgeId;
use tracklab_core::random::{random_permutation, random_singular_state, random_spattern, seeded};
use tracklab_core::spattern::{
    apply_edge_permutation, crossing_signs, find_plus_minus_pairs, find_removable_pairs, graph_stats, remove_pair,
    strack_decomposition, uncross, underlying_of_state, underlying_pattern, validate_state, PairKind, Spattern,
};

fn strack_weights(s: &tracklab_core::spattern::SingularState) -> Vec<usize> {
    let mut v: Vec<usize> = strack_decomposition(s).iter().map(|t| t.weight()).collect();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutation_preserves_invariants(seed in any::<u64>(), edge in 0usize..6) {
        let mut rng = seeded(seed);
        let s = random_spattern(&mut rng, 30);
        let e = EdgeId(edge);
        let nu = random_permutation(&mut rng, e, s.edge_points(e).len());
        let t = apply_edge_permutation(&s, &nu).unwrap();
        prop_assert_eq!(t.weights(), s.weights());
        prop_assert_eq!(underlying_pattern(&t), underlying_pattern(&s));
        prop_assert_eq!(strack_weights(&t), strack_weights(&s));
        prop_assert_eq!(graph_stats(&t), graph_stats(&s));
    }

    #[test]
    fn removal_drops_weight_by_two(seed in any::<u64>()) {
        let s = random_singular_state(&mut seeded(seed), 30);
        for pair in find_removable_pairs(&s) {
            let r = remove_pair(&s, &pair).unwrap();
            prop_assert_eq!(r.total_weight() + 2, s.total_weight());
            prop_assert!(validate_state(&r).is_empty());
        }
    }

    #[test]
    fn plus_minus_pair_gives_clean_pair_on_its_edge(seed in any::<u64>()) {
        let s = random_spattern(&mut seeded(seed), 30);
        let removable = find_removable_pairs(&s);
        for pm in find_plus_minus_pairs(&s).unwrap() {
            prop_assert!(removable.iter().any(|r| r.edge == pm.edge && r.kind == PairKind::PlusMinus));
        }
    }

    #[test]
    fn underlying_pattern_is_idempotent(seed in any::<u64>()) {
        let s = random_spattern(&mut seeded(seed), 30);
        let p = underlying_pattern(&s);
        prop_assert_eq!(underlying_pattern(&Spattern::from_pattern(&p)), p.clone());
        prop_assert_eq!(underlying_of_state(&s).unwrap(), p);
    }

    #[test]
    fn successful_uncross_matches_underlying(seed in any::<u64>()) {
        let s = random_spattern(&mut seeded(seed), 24);
        if let Ok(out) = uncross(&s) {
            prop_assert_eq!(out.result.crossing_count(), 0);
            prop_assert_eq!(out.result.shape(), underlying_pattern(&s).shape());
            let mut t = s.clone();
            for nu in &out.mu {
                t = apply_edge_permutation(&t, nu).unwrap();
            }
            prop_assert_eq!(t, out.result);
        }
    }

    #[test]
    fn graph_edges_equal_weight(seed in any::<u64>()) {
        let s = random_singular_state(&mut seeded(seed), 40);
        prop_assert_eq!(graph_stats(&s).edges as u64, s.total_weight());
        prop_assert_eq!(graph_stats(&s).vertices, s.line_count());
    }

    #[test]
    fn reversed_strack_flips_every_sign(seed in any::<u64>()) {
        let s = random_spattern(&mut seeded(seed), 30);
        for t in strack_decomposition(&s) {
            let fwd = crossing_signs(&s, &t).unwrap();
            let mut back = crossing_signs(&s, &t.reversed()).unwrap();
            back.sort_by_key(|&(p, _)| p);
            let mut fwd_sorted = fwd.clone();
            fwd_sorted.sort_by_key(|&(p, _)| p);
            for ((p, a), (q, b)) in fwd_sorted.iter().zip(&back) {
                prop_assert_eq!(p, q);
                prop_assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn classification_respects_symmetry(w in proptest::array::uniform6(0u32..6), k in 0usize..24) {
        let map = tetra_symmetries()[k];
        let a = classify_weights(&w).map(|c| c.total_weight());
        let b = classify_weights(&apply_symmetry(&map, &w)).map(|c| c.total_weight());
        prop_assert_eq!(a.is_ok(), b.is_ok());
        if let (Ok(x), Ok(y)) = (a, b) {
            prop_assert_eq!(x, y);
        }
    }
}

#[test]
fn enumeration_modes_agree() {
    let plain = enumerate_and_verify(16, EnumerationOptions::default());
    let fast = enumerate_and_verify(16, EnumerationOptions { symmetry_reduction: true, parallel: true });
    let key = |r: &tracklab_core::classify::EnumerationReport| {
        let mut v: Vec<_> = r.tracks.iter().map(|t| t.weights).collect();
        v.sort();
        v
    };
    assert_eq!(key(&plain), key(&fast));
    assert!(plain.violations.is_empty() && fast.violations.is_empty());
}

#[test]
fn every_track_weight_is_realized_on_the_tetrahedron() {
    let report = enumerate_and_verify(24, EnumerationOptions { symmetry_reduction: true, parallel: true });
    for total in [3u64, 4, 8, 12, 16, 20, 24] {
        assert!(report.count_with_weight(total) > 0, "no track of weight {total}");
    }
}
