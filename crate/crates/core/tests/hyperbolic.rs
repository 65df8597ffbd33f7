use halfspace_core::hyperbolic::generate::{
    all_trees, cycle_graph, farey_ball, path_graph, random_connected,
};
use halfspace_core::hyperbolic::{
    constants, delta_four_point, delta_interval_slim, equidistant_set, halfspace,
    nearest_point_projection, verify_propositions, FiniteSpace, Proposition, VerifyOptions,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = FiniteSpace> {
    (2..=max_n, 0.0..0.4f64, any::<u64>())
        .prop_map(|(n, p, seed)| random_connected(n, p, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Four-point constant by the definition, over ordered quadruples.
fn four_point_oracle(s: &FiniteSpace) -> f64 {
    let n = s.len();
    let mut best = 0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let mut sums = [
                        s.d(x, y) + s.d(z, w),
                        s.d(x, z) + s.d(y, w),
                        s.d(x, w) + s.d(y, z),
                    ];
                    sums.sort_unstable();
                    best = best.max(sums[2] - sums[1]);
                }
            }
        }
    }
    f64::from(best) / 2.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distances_form_a_metric(g in graph_strategy(14)) {
        let n = g.len();
        for x in 0..n {
            prop_assert_eq!(g.d(x, x), 0);
            for y in 0..n {
                prop_assert_eq!(g.d(x, y), g.d(y, x));
                let geo = g.geodesic(x, y);
                prop_assert_eq!(geo.len() as u32, g.d(x, y) + 1);
                let interval = g.interval(x, y);
                prop_assert!(interval.contains(x) && interval.contains(y));
                prop_assert!(geo.iter().all(|&v| interval.contains(v)));
                for z in 0..n {
                    prop_assert!(g.d(x, z) <= g.d(x, y) + g.d(y, z));
                }
            }
        }
    }

    #[test]
    fn halfspaces_cover_and_meet_in_the_equidistant_set(g in graph_strategy(14), a in 0usize..14, b in 0usize..14) {
        let (a, b) = (a % g.len(), b % g.len());
        let ab = halfspace(&g, a, b, 0);
        let ba = halfspace(&g, b, a, 0);
        for v in 0..g.len() {
            prop_assert!(ab.contains(v) || ba.contains(v));
        }
        if a != b {
            let both: Vec<usize> = ab.members.iter().copied().filter(|&v| ba.contains(v)).collect();
            prop_assert_eq!(both, equidistant_set(&g, a, b).unwrap());
        }
    }

    #[test]
    fn halfspaces_grow_with_slack(g in graph_strategy(14), a in 0usize..14, b in 0usize..14, c in -4i64..4) {
        let (a, b) = (a % g.len(), b % g.len());
        let small = halfspace(&g, a, b, c);
        let large = halfspace(&g, a, b, c + 1);
        prop_assert!(small.members.iter().all(|&v| large.contains(v)));
    }

    #[test]
    fn projection_is_the_argmin(g in graph_strategy(14), z in 0usize..14, mask in any::<u16>()) {
        let z = z % g.len();
        let set: Vec<usize> = (0..g.len()).filter(|&v| mask & (1 << v) != 0).collect();
        if set.is_empty() {
            prop_assert!(nearest_point_projection(&g, z, &set).is_err());
        } else {
            let best = set.iter().map(|&v| g.d(z, v)).min().unwrap();
            let expected: Vec<usize> = set.iter().copied().filter(|&v| g.d(z, v) == best).collect();
            prop_assert_eq!(nearest_point_projection(&g, z, &set).unwrap(), expected);
        }
    }

    #[test]
    fn delta_matches_definition_and_ignores_labels(g in graph_strategy(11), seed in any::<u64>()) {
        let fp = delta_four_point(&g);
        prop_assert_eq!(fp, four_point_oracle(&g));
        let mut perm: Vec<usize> = (0..g.len()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let h = g.relabel(&perm).unwrap();
        prop_assert_eq!(delta_four_point(&h), fp);
        prop_assert_eq!(delta_interval_slim(&h), delta_interval_slim(&g));
    }

    #[test]
    fn edge_list_round_trip(g in graph_strategy(20)) {
        let h = FiniteSpace::from_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(h.edges(), g.edges());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn propositions_hold_on_small_random_graphs(g in graph_strategy(12)) {
        for r in verify_propositions(&g, "prop", &VerifyOptions::default()) {
            prop_assert!(r.passed(), "{:?}", r);
        }
    }
}

#[test]
fn coarse_inequality_on_paths_and_cycles() {
    // The projection bound inside the coarse containment argument, checked
    // directly on spaces whose geometry is known in closed form.
    // On cycles 9δ exceeds the diameter and the statement is vacuous.
    for (g, vacuous) in [
        (path_graph(12), false),
        (cycle_graph(9), true),
        (cycle_graph(12), true),
    ] {
        let r = verify_propositions(&g, "shape", &VerifyOptions::default());
        let coarse = r
            .iter()
            .find(|r| r.proposition == Proposition::Coarse)
            .unwrap();
        assert!(coarse.passed(), "{coarse:?}");
        assert_eq!(coarse.checked == 0, vacuous);
    }
}

#[test]
fn half_example_on_a_path() {
    let p = path_graph(11);
    // z = 7 in H(0, 10) projects to itself, 3 <= 5 + 3δ.
    assert_eq!(
        nearest_point_projection(&p, 7, &p.geodesic(0, 10)).unwrap(),
        vec![7]
    );
    let r = verify_propositions(&p, "path", &VerifyOptions::default());
    assert!(r.iter().all(|r| r.passed()));
    assert_eq!(r[0].delta, 0.0);
}

#[test]
fn npp_on_trees_is_trivial() {
    for t in all_trees(7) {
        let r = verify_propositions(&t, "tree", &VerifyOptions::default());
        let npp = r
            .iter()
            .find(|r| r.proposition == Proposition::Npp)
            .unwrap();
        assert!(npp.passed());
    }
}

#[test]
fn farey_ball_delta_is_stable() {
    let (a, _) = farey_ball(20);
    let (b, _) = farey_ball(21);
    assert_eq!(delta_four_point(&a), delta_four_point(&b));
    assert_eq!(delta_interval_slim(&a), delta_interval_slim(&b));
}

#[test]
fn six_cycle_constants() {
    let c6 = cycle_graph(6);
    assert_eq!(delta_four_point(&c6), four_point_oracle(&c6));
    let k = constants(delta_four_point(&c6), None, 1).unwrap();
    assert_eq!(k.k1, 7.0);
}
