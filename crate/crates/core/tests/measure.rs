use halfspace_core::measure::*;
use halfspace_core::torus::{bfs_oracle, relative_length, GroupElement};
use halfspace_core::walk::{convolution, sample_path, StepDistribution};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

fn cat_map() -> GroupElement {
    GroupElement::from_i64([[2, 1], [1, 1]])
}

fn element_strategy() -> impl Strategy<Value = GroupElement> {
    (any::<u64>(), 0usize..12).prop_map(|(seed, n)| {
        sample_path(&StepDistribution::uniform_lr(), n, seed)
            .endpoint()
            .clone()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn halfspaces_cover_the_group(x in element_strategy(), g in element_strategy()) {
        let h = HalfspaceQuery::new(x, 0);
        prop_assert!(h.contains(&g) || h.reversed().contains(&g));
    }

    #[test]
    fn membership_matches_breadth_first_distances(x in element_strategy(), g in element_strategy(), c in -2i64..3) {
        let (sx, sg) = (x.basepoint_image(), g.basepoint_image());
        let inf = GroupElement::identity().basepoint_image();
        // Slopes reached by short walks have small entries.
        prop_assume!([&sx, &sg].iter().all(|s| s.p().bits() < 8 && s.q().bits() < 8));
        let to_x = bfs_oracle(&sg, &sx, 200).unwrap() as i64;
        let to_1 = bfs_oracle(&sg, &inf, 200).unwrap() as i64;
        prop_assert_eq!(HalfspaceQuery::new(x, c).contains(&g), to_x <= to_1 + c);
    }

    #[test]
    fn slack_enlarges_halfspaces(x in element_strategy(), g in element_strategy(), c in -3i64..3) {
        if HalfspaceQuery::new(x.clone(), c).contains(&g) {
            prop_assert!(HalfspaceQuery::new(x, c + 1).contains(&g));
        }
    }

    #[test]
    fn geometric_data_is_fitted_exactly(l in 0.05f64..0.95, q in 0.1f64..5.0, n in 3usize..8) {
        let pts: Vec<DecayPoint> = (1..=n)
            .map(|r| DecayPoint { r: r as f64, estimate: q * l.powi(r as i32), stderr: 0.0, trials: None })
            .collect();
        let f = decay_fit(&pts).unwrap();
        prop_assert!((f.l_hat - l).abs() < 1e-9 && (f.q_hat - q).abs() < 1e-9 * q.max(1.0));
        prop_assert!(f.decaying && !f.non_monotone);
    }
}

#[test]
fn exact_and_monte_carlo_convolution_measures_agree() {
    let mu = StepDistribution::uniform_lr();
    let reps = 20_000;
    for x in [
        GroupElement::l(),
        cat_map(),
        GroupElement::l().pow(-2),
        cat_map().pow(2),
    ] {
        for n in 1..=4 {
            for h in [
                HalfspaceQuery::new(x.clone(), 0),
                HalfspaceQuery::new(x.clone(), 0).reversed(),
            ] {
                let exact = mu_n_halfspace_exact(&mu, n, &h).unwrap();
                let mc = mu_n_halfspace(&mu, n, &h, reps, n as u64).unwrap();
                let e = exact.to_f64().unwrap();
                assert!(
                    (mc.estimate - e).abs() <= 3.0 * mc.stderr.max(1.0 / reps as f64),
                    "n={n} {x}: {} vs {e}",
                    mc.estimate
                );
            }
        }
    }
}

#[test]
fn covering_holds_exactly_and_empirically() {
    let mu = StepDistribution::uniform_lr();
    let x = cat_map();
    for n in 1..=4 {
        let h = HalfspaceQuery::new(x.clone(), 0);
        let total = mu_n_halfspace_exact(&mu, n, &h).unwrap()
            + mu_n_halfspace_exact(&mu, n, &h.reversed()).unwrap();
        assert!(total >= BigRational::one());
        assert!(convolution(&mu, n).unwrap().total().is_one());
    }
    let h = HalfspaceQuery::new(x, 0);
    let both = mu_n_halfspaces(&mu, 20, &[h.clone(), h.reversed()], 5000, 2).unwrap();
    assert!(both[0].estimate + both[1].estimate >= 1.0 - 3.0 * both[0].stderr.max(both[1].stderr));
}

#[test]
fn far_halfspaces_are_unreachable_in_few_steps() {
    let mu = StepDistribution::uniform_lr();
    let far = HalfspaceQuery::new(cat_map().pow(30), 0);
    assert!(far.radius() > 8);
    assert_eq!(mu_n_halfspace(&mu, 3, &far, 2000, 1).unwrap().hits, 0);
    assert_eq!(
        mu_n_halfspace_exact(&mu, 3, &far).unwrap(),
        BigRational::from_integer(0.into())
    );
}

#[test]
fn nested_families_grow_and_nest() {
    let fam = nested_family(&cat_map(), 1, 2).unwrap();
    assert_eq!(fam.centers.len(), 2);
    assert!(fam.relative_lengths[1] > fam.relative_lengths[0]);
    let fam = nested_family(&cat_map(), 2, 5).unwrap();
    assert!(fam.relative_lengths.windows(2).all(|w| w[1] >= w[0] + 2));
    for (c, x) in fam.exponents.iter().zip(&fam.centers) {
        assert_eq!(&cat_map().pow(i64::from(*c)), x);
    }
    assert_eq!(nesting_scan(&fam, &word_ball(6)).violations, 0);
    let later = nested_family_from(&cat_map(), 1, 3, 4).unwrap();
    assert!(later.relative_lengths[0] >= 4);
    assert!(nested_family(&GroupElement::r(), 1, 3).is_err());
    assert!(nested_family(&cat_map(), 0, 3).is_err());
}

#[test]
fn word_ball_sizes() {
    // Spheres of the Cayley graph: 1, 4, 12 elements at radius 0, 1, 2
    // before relations intervene.
    assert_eq!(word_ball(0).len(), 1);
    assert_eq!(word_ball(1).len(), 5);
    assert_eq!(word_ball(2).len(), 17);
}

#[test]
fn first_hits() {
    let path = sample_path(&StepDistribution::uniform_lr(), 30, 4);
    // R fixes 1/0, so every element is in H(1, R).
    let everywhere = HalfspaceQuery::new(GroupElement::r(), 0);
    assert_eq!(first_hit(&path, &everywhere).unwrap().0, 0);
    let short = sample_path(&StepDistribution::uniform_lr(), 3, 4);
    assert!(first_hit(&short, &HalfspaceQuery::new(cat_map().pow(20), 0)).is_none());
    let h = HalfspaceQuery::new(GroupElement::l(), 0);
    if let Some((k, g)) = first_hit(&path, &h) {
        assert!(h.contains(&g) && path.positions[..k].iter().all(|w| !h.contains(w)));
        assert_eq!(&path.positions[k], &g);
    }
}

#[test]
fn harmonic_proxy_is_stable_and_decays() {
    let mu = StepDistribution::uniform_lr();
    let fam = nested_family(&cat_map(), 1, 4).unwrap();
    let horizon = default_horizon(*fam.relative_lengths.last().unwrap());
    let est = harmonic_halfspaces(&mu, &fam.halfspaces(), horizon, 4000, 6).unwrap();
    assert!(est.iter().all(|e| e.stable), "{est:?}");
    for w in est.windows(2) {
        let combined = (w[0].at_horizon.stderr.powi(2) + w[1].at_horizon.stderr.powi(2)).sqrt();
        assert!(w[1].at_horizon.estimate <= w[0].at_horizon.estimate + 3.0 * combined);
    }
    let cond = conditional_decay(&mu, &fam.halfspaces(), horizon, 4000, 8).unwrap();
    assert!(cond.epsilon_hat > 0.0, "{cond:?}");
    assert!(relative_length(&fam.centers[0]) >= 1);
}
