use std::collections::HashMap;

use halfspace_core::seed::child_seed;
use halfspace_core::torus::{relative_length, GroupElement};
use halfspace_core::walk::*;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

type M = [i64; 4];

fn mat(g: &GroupElement) -> M {
    [g.a(), g.b(), g.c(), g.d()].map(|x| x.to_i64().unwrap())
}

fn mul(x: M, y: M) -> M {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

fn inv(x: M) -> M {
    [x[3], -x[1], -x[2], x[0]]
}

/// `mu^(n)` by enumerating every word of length `n` in small integers.
fn convolution_oracle(mu: &StepDistribution, n: usize) -> HashMap<M, BigRational> {
    let mut out = HashMap::new();
    let atoms: Vec<(M, BigRational)> = mu
        .atoms()
        .iter()
        .map(|(g, p)| (mat(g), p.clone()))
        .collect();
    let s = atoms.len();
    for word in 0..s.pow(n as u32) {
        let (mut w, mut g, mut p) = (word, [1, 0, 0, 1], BigRational::one());
        for _ in 0..n {
            let (h, q) = &atoms[w % s];
            g = mul(g, *h);
            p *= q;
            w /= s;
        }
        *out.entry(g).or_insert_with(BigRational::zero) += p;
    }
    out
}

fn as_map(t: &ConvolutionTable) -> HashMap<M, BigRational> {
    t.entries().map(|(g, p)| (mat(g), p.clone())).collect()
}

fn pool() -> Vec<GroupElement> {
    let (l, r) = (GroupElement::l(), GroupElement::r());
    vec![
        l.clone(),
        l.inverse(),
        r.clone(),
        r.inverse(),
        GroupElement::from_i64([[2, 1], [1, 1]]),
        GroupElement::from_i64([[0, -1], [1, 0]]),
    ]
}

fn distribution_strategy() -> impl Strategy<Value = StepDistribution> {
    (
        proptest::sample::subsequence(pool(), 1..=4),
        proptest::collection::vec(1u32..6, 4),
    )
        .prop_map(|(atoms, weights)| {
            let total: u32 = weights[..atoms.len()].iter().sum();
            StepDistribution::new(
                atoms
                    .into_iter()
                    .zip(weights)
                    .map(|(g, w)| (g, BigRational::new(w.into(), total.into())))
                    .collect(),
            )
            .unwrap()
        })
}

fn rational(x: &BigRational) -> f64 {
    x.to_f64().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convolutions_are_exact_and_match_enumeration(mu in distribution_strategy(), n in 0usize..5) {
        let t = convolution(&mu, n).unwrap();
        prop_assert!(t.total().is_one());
        prop_assert!(t.len() as u128 <= required_budget(&mu, n));
        prop_assert_eq!(as_map(&t), convolution_oracle(&mu, n));
        prop_assert_eq!(t.step(&mu), convolution(&mu, n + 1).unwrap());
    }

    #[test]
    fn reflection_duality(mu in distribution_strategy(), n in 0usize..5) {
        let t = convolution(&mu, n).unwrap();
        let r = convolution(&mu.reflected(), n).unwrap();
        prop_assert_eq!(r.len(), t.len());
        for (g, p) in t.entries() {
            prop_assert_eq!(&r.get(&g.inverse()), p);
        }
        prop_assert_eq!(mu.reflected().reflected(), mu);
    }

    #[test]
    fn expected_lengths_are_subadditive(mu in distribution_strategy(), n in 0usize..4, k in 0usize..4) {
        let e = |j| convolution(&mu, j).unwrap().expected_length();
        prop_assert!(e(n + k) <= e(n) + e(k));
    }

    #[test]
    fn paths_are_deterministic_products(seed in any::<u64>(), n in 0usize..40) {
        let mu = StepDistribution::uniform_lr();
        let p = sample_path(&mu, n, seed);
        prop_assert_eq!(&p, &sample_path(&mu, n, seed));
        prop_assert_eq!(p.positions.len(), n + 1);
        prop_assert!(p.positions[0].is_identity());
        let mut g = [1, 0, 0, 1];
        for k in 1..=n {
            g = mul(g, mat(&p.increments[k - 1]));
            prop_assert_eq!(mat(&p.positions[k]), g);
        }
    }

    #[test]
    fn shift_preserves_distances(seed in any::<u64>(), n in 0usize..15, k in 0usize..15) {
        let p = sample_path(&StepDistribution::uniform_lr(), n + k, seed);
        let mut s = p.clone();
        for _ in 0..n {
            s = shift(&s).unwrap();
        }
        prop_assert_eq!(s.len(), k);
        let direct = inv(mat(&p.positions[n]));
        prop_assert_eq!(mat(&s.positions[k]), mul(direct, mat(&p.positions[n + k])));
        prop_assert_eq!(
            relative_length(&s.positions[k]),
            halfspace_core::torus::farey_distance(
                &p.positions[n].basepoint_image(),
                &p.positions[n + k].basepoint_image()
            )
        );
    }
}

#[test]
fn two_steps_of_l_and_r_are_four_distinct_quarters() {
    let mu = StepDistribution::uniform(&[GroupElement::l(), GroupElement::r()]).unwrap();
    let t = convolution(&mu, 2).unwrap();
    let quarter = BigRational::new(1.into(), 4.into());
    let (l, r) = (mat(&GroupElement::l()), mat(&GroupElement::r()));
    let products = [mul(l, l), mul(l, r), mul(r, l), mul(r, r)];
    let map = as_map(&t);
    assert_eq!(map.len(), 4);
    for g in products {
        assert_eq!(map[&g], quarter);
    }
    assert!(convolution(&mu, 0)
        .unwrap()
        .get(&GroupElement::identity())
        .is_one());
}

#[test]
fn one_step_frequencies_match_the_weights() {
    let mu =
        StepDistribution::parse("[[1,0],[1,1]]:1/2;[[1,1],[0,1]]:1/3;[[1,-1],[0,1]]:1/6").unwrap();
    let paths = 100_000u64;
    let mut counts = [0u64; 3];
    for r in 0..paths {
        counts[sample_indices(&mu, 1, child_seed(3, r))[0]] += 1;
    }
    for (i, (_, p)) in mu.atoms().iter().enumerate() {
        let p = rational(p);
        let se = (p * (1.0 - p) / paths as f64).sqrt();
        let freq = counts[i] as f64 / paths as f64;
        assert!((freq - p).abs() < 4.0 * se, "atom {i}: {freq} vs {p}");
    }
}

#[test]
fn point_mass_has_zero_drift() {
    let mu = StepDistribution::point_mass(GroupElement::identity());
    let r = drift_estimate(&mu, &Metric::FareyDisplacement, 50, 4, 1).unwrap();
    assert_eq!(r.record.estimate, 0.0);
    assert_eq!((r.record.ci_low, r.record.ci_high), (0.0, 0.0));
}

/// `E|w_n|` for the simple walk on the 4-regular tree: the distance to the
/// root steps up with probability 3/4 away from the root.
fn tree_mean_distance(n: usize) -> f64 {
    let mut law = vec![0.0f64; n + 2];
    law[0] = 1.0;
    for _ in 0..n {
        let mut next = vec![0.0; n + 2];
        next[1] += law[0];
        for k in 1..=n {
            next[k + 1] += 0.75 * law[k];
            next[k - 1] += 0.25 * law[k];
        }
        law = next;
    }
    law.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
}

#[test]
fn sanov_drift_matches_the_birth_death_chain() {
    let n = 2000;
    let r = drift_estimate(
        &StepDistribution::sanov(),
        &Metric::ReducedWord(FreeBasis::sanov()),
        n,
        100,
        5,
    )
    .unwrap();
    let exact = tree_mean_distance(n) / n as f64;
    assert!(
        (r.record.estimate - exact).abs() < 4.0 * r.record.stderr,
        "{:?} vs {exact}",
        r.record
    );
    assert!((exact - 0.5).abs() < 0.002);
}

#[test]
fn reduced_word_lengths_agree_with_exact_tables() {
    // Small words in a free basis: the reduced length is a function of the
    // element, so the exact law follows from the table of words.
    let mu = StepDistribution::sanov();
    let basis = FreeBasis::sanov();
    let metric = Metric::ReducedWord(basis);
    let exact = tree_mean_distance(4);
    let r = drift_estimate(&mu, &metric, 4, 20_000, 9).unwrap();
    assert!((r.record.estimate * 4.0 - exact).abs() < 4.0 * 4.0 * r.record.stderr);
}

#[test]
fn farey_drift_is_positive() {
    let r = drift_estimate(
        &StepDistribution::uniform_lr(),
        &Metric::FareyDisplacement,
        1000,
        40,
        7,
    )
    .unwrap();
    assert!(r.record.ci_low > 0.0, "{:?}", r.record);
    assert!(r.record.ci_low <= r.record.estimate && r.record.estimate <= r.record.ci_high);
    assert_eq!(r.terminal_distances.len(), 40);
}

#[test]
fn drift_curve_and_seeds() {
    let opts = DriftOptions {
        level: 0.95,
        checkpoints: vec![10, 100],
    };
    let mu = StepDistribution::uniform_lr();
    let a = drift_estimate_with(&mu, &Metric::FareyDisplacement, 200, 8, 3, &opts).unwrap();
    let b = drift_estimate_with(&mu, &Metric::FareyDisplacement, 200, 8, 3, &opts).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        a.curve.iter().map(|c| c.step).collect::<Vec<_>>(),
        vec![10, 100]
    );
    // Replica r is the path with seed child_seed(3, r).
    let p = sample_path(&mu, 200, child_seed(3, 5));
    assert_eq!(a.terminal_distances[5], relative_length(p.endpoint()));
}

#[test]
fn word_metric_drift_on_short_walks() {
    let mu = StepDistribution::uniform_lr();
    let r = drift_estimate(&mu, &Metric::Word { max_radius: 8 }, 3, 10, 2).unwrap();
    assert!(r.terminal_distances.iter().all(|&d| d <= 3 && d % 2 == 1));
}

#[test]
fn kingman_audit_has_no_violations() {
    let pairs = [(0, 5), (1, 1), (3, 7), (10, 20), (25, 25)];
    let mu = StepDistribution::uniform_lr();
    let report = audit_paths(&mu, &Metric::FareyDisplacement, 50, 200, &pairs, 1).unwrap();
    assert_eq!(report.violations(), 0);
    assert_eq!(report.paths, 200);
    assert_eq!(report.pairs[0].min_slack, Some(0));
    let sanov = audit_paths(
        &StepDistribution::sanov(),
        &Metric::ReducedWord(FreeBasis::sanov()),
        50,
        50,
        &pairs,
        2,
    )
    .unwrap();
    assert_eq!(sanov.violations(), 0);
    let p = sample_path(&mu, 5, 0);
    assert!(subadditivity_audit(&p, &Metric::FareyDisplacement, &[(3, 3)]).is_err());
}

#[test]
fn delta_exact_edge_cases() {
    let mu = StepDistribution::uniform_lr();
    for n in 0..4 {
        assert!(delta_nm_exact(&mu, n, 0).unwrap().is_zero());
        assert_eq!(
            delta_nm_exact(&mu, 0, n).unwrap(),
            convolution(&mu, n).unwrap().expected_length()
        );
    }
    // One L-type step moves 1/0 to a neighbour, an R-type step fixes it.
    assert_eq!(
        delta_nm_exact(&mu, 0, 1).unwrap(),
        BigRational::new(1.into(), 2.into())
    );
    assert!(matches!(
        delta_nm_exact_with_budget(&mu, 4, 4, 100),
        Err(halfspace_core::Error::BudgetExceeded {
            required: 65536,
            budget: 100
        })
    ));
}

#[test]
fn delta_two_two_monte_carlo_matches_exact() {
    let mu = StepDistribution::uniform_lr();
    let exact = rational(&delta_nm_exact(&mu, 2, 2).unwrap());
    let mc = delta_nm(&mu, 2, 2, 20_000, 4, 0.99).unwrap();
    assert!(
        (mc.estimate - exact).abs() < 3.0 * mc.stderr,
        "{mc:?} vs {exact}"
    );
}

#[test]
fn delta_scan_finds_an_onset() {
    let mu = StepDistribution::uniform_lr();
    let s = delta_scan(&mu, 20, &[5, 10, 20], 2000, 8, 0.99).unwrap();
    assert_eq!(s.points.len(), 3);
    assert!(s.onset.is_some() && s.delta0.unwrap() > 0.0);
}

#[test]
fn halfrate_is_one_half() {
    let r = halfrate_statistic(100_000, 1, 1).unwrap();
    assert!((r.frequency - 0.5).abs() < 0.01);
    assert!((r.frequency - 0.5).abs() < 4.0 * r.stderr);
    for seed in 0..8 {
        let r = halfrate_statistic(2, 1, seed).unwrap();
        assert!(r.frequency == 0.0 || r.frequency == 1.0);
    }
    assert!(halfrate_statistic(1, 1, 0).is_err());
}

#[test]
fn records_serialize_flat() {
    let r = drift_estimate(
        &StepDistribution::uniform_lr(),
        &Metric::FareyDisplacement,
        10,
        3,
        0,
    )
    .unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    for key in [
        "experiment",
        "metric",
        "n",
        "m",
        "replicas",
        "seed",
        "estimate",
        "stderr",
        "ci_low",
        "ci_high",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
}
