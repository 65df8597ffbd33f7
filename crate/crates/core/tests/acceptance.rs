//! Acceptance suite. Runs every criterion, prints one line per criterion
//! and exits with status 1 if any failed.

use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rayon::prelude::*;

use halfspace_core::hyperbolic::generate::{all_trees, farey_ball, random_family};
use halfspace_core::hyperbolic::{constants, verify_propositions, FiniteSpace, VerifyOptions};
use halfspace_core::measure::{
    decay_fit, default_horizon, harmonic_halfspaces, harmonic_sets, mu_n_halfspaces,
    nested_family_from, nesting_scan, word_ball, DecayPoint,
};
use halfspace_core::schottky::{certify_schottky, free_group_audit, PingPongCertificate};
use halfspace_core::seed::child_seed;
use halfspace_core::torus::{farey_distance, FareyBall, GroupElement, Slope};
use halfspace_core::walk::{
    audit_paths, delta_nm, delta_nm_exact, delta_scan, drift_estimate, halfrate_statistic,
    FreeBasis, Metric, StepDistribution, DEFAULT_LEVEL,
};

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn within(elapsed: Duration, minutes: u64) -> bool {
    elapsed < Duration::from_secs(60 * minutes)
}

fn propositions() -> Verdict {
    let start = Instant::now();
    let mut spaces: Vec<(String, FiniteSpace)> = all_trees(9)
        .into_iter()
        .enumerate()
        .map(|(i, t)| (format!("tree-{i}"), t))
        .collect();
    let trees = spaces.len();
    spaces.extend(
        random_family(200, 2024)
            .into_iter()
            .enumerate()
            .map(|(i, g)| (format!("random-{i}"), g)),
    );
    spaces.push(("farey-30".into(), farey_ball(30).0));
    let options = VerifyOptions {
        seed: 2024,
        ..VerifyOptions::default()
    };
    let reports: Vec<_> = spaces
        .iter()
        .flat_map(|(id, g)| verify_propositions(g, id, &options))
        .collect();
    let violations: u64 = reports.iter().map(|r| r.violations).sum();
    let checked: u64 = reports.iter().map(|r| r.checked).sum();
    let elapsed = start.elapsed();
    verdict(
        violations == 0 && within(elapsed, 10),
        format!(
            "{trees} trees, 200 random graphs, Farey ball 30: {} reports, {checked} tuples, {violations} violations, {:.1?}",
            reports.len(),
            elapsed
        ),
    )
}

fn constant_ledger() -> Verdict {
    let k = constants(1.0, None, 1).expect("ledger");
    let got = [k.k1, k.k2, k.k3, k.k4, k.k5, k.k7, k.k6];
    let want = [7.0, 27.0, 18.0, 114.0, 24.0, 112.0, 230.0];
    verdict(
        got == want,
        format!("K1..K7 at delta = 1: {got:?} (K6 last)"),
    )
}

fn farey_distance_oracle() -> Verdict {
    let start = Instant::now();
    let mut slopes = vec![Slope::infinity()];
    for q in 1..=12i64 {
        for p in -12..=12i64 {
            if num_integer::gcd(p, q) == 1 {
                slopes.push(Slope::reduce(p, q).unwrap());
            }
        }
    }
    let (small, large) = (FareyBall::new(500), FareyBall::new(1000));
    let (mismatches, unstable) = slopes
        .par_iter()
        .map(|s| {
            let a = small.distances(s, &slopes);
            let b = large.distances(s, &slopes);
            let mut out = (0u64, 0u64);
            for ((t, x), y) in slopes.iter().zip(a).zip(b) {
                match x {
                    Some(d) if x == y => out.0 += u64::from(u64::from(d) != farey_distance(s, t)),
                    _ => out.1 += 1,
                }
            }
            out
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let pairs = slopes.len() * slopes.len();
    let elapsed = start.elapsed();
    verdict(
        mismatches == 0 && unstable == 0 && within(elapsed, 2),
        format!(
            "{pairs} ordered pairs of {} slopes with |p|, q <= 12: {mismatches} mismatches, {unstable} unstable between bounds 500 and 1000, {:.1?}",
            slopes.len(),
            elapsed
        ),
    )
}

fn halfrate() -> Verdict {
    let r = halfrate_statistic(100_000, 1, 4).expect("halfrate");
    verdict(
        (r.frequency - 0.5).abs() <= 0.01,
        format!(
            "turn changes {}/{} = {:.5} (target 0.5 +- 0.01)",
            r.changes, r.comparisons, r.frequency
        ),
    )
}

fn free_group_drift() -> Verdict {
    let mu = StepDistribution::sanov();
    let r =
        drift_estimate(&mu, &Metric::ReducedWord(FreeBasis::sanov()), 5000, 200, 5).expect("drift");
    let e = r.record.estimate;
    verdict(
        (e - 0.5).abs() <= 0.02,
        format!(
            "reduced-word drift {e:.5} +- {:.5} (target 0.5 +- 0.02)",
            r.record.stderr
        ),
    )
}

fn farey_drift() -> Verdict {
    let start = Instant::now();
    let r = drift_estimate(
        &StepDistribution::uniform_lr(),
        &Metric::FareyDisplacement,
        5000,
        200,
        6,
    )
    .expect("drift");
    let elapsed = start.elapsed();
    let rec = &r.record;
    verdict(
        rec.ci_low > 0.0 && within(elapsed, 5),
        format!(
            "Farey drift {:.5}, {}% CI [{:.5}, {:.5}], {:.1?}",
            rec.estimate,
            r.level * 100.0,
            rec.ci_low,
            rec.ci_high,
            elapsed
        ),
    )
}

fn kingman() -> Verdict {
    let len = 400;
    let sizes = [1, 2, 3, 5, 10, 20, 50, 100, 200];
    let pairs: Vec<(usize, usize)> = sizes
        .iter()
        .flat_map(|&n| sizes.iter().map(move |&k| (n, k)))
        .filter(|&(n, k)| n + k <= len)
        .collect();
    let runs = [
        (
            StepDistribution::uniform_lr(),
            Metric::FareyDisplacement,
            7u64,
        ),
        (
            StepDistribution::sanov(),
            Metric::ReducedWord(FreeBasis::sanov()),
            8,
        ),
    ];
    let mut checked = 0;
    let mut violations = 0;
    for (mu, metric, seed) in &runs {
        let a = audit_paths(mu, metric, len, 1000, &pairs, *seed).expect("audit");
        checked += a.pairs.iter().map(|p| p.checked).sum::<u64>();
        violations += a.violations();
    }
    verdict(
        violations == 0,
        format!(
            "1000 paths x {} (n, k) pairs x 2 metrics: {checked} checks, {violations} violations",
            pairs.len()
        ),
    )
}

fn delta_progress() -> Verdict {
    let mu = StepDistribution::uniform_lr();
    let mut worst = 0.0f64;
    let mut cases = 0;
    let mut pass = true;
    for n in 0..=4 {
        for m in 1..=4 {
            let exact = delta_nm_exact(&mu, n, m).expect("exact").to_f64().unwrap();
            let mc = delta_nm(
                &mu,
                n,
                m,
                20_000,
                child_seed(8, (10 * n + m) as u64),
                DEFAULT_LEVEL,
            )
            .expect("delta");
            let z = (mc.estimate - exact).abs() / mc.stderr;
            worst = worst.max(z);
            pass &= z <= 3.0;
            cases += 1;
        }
    }
    let ms: Vec<usize> = (1..=40).collect();
    let scan = delta_scan(&mu, 50, &ms, 4000, 80, DEFAULT_LEVEL).expect("scan");
    let found = scan.onset.is_some() && scan.delta0.is_some_and(|d| d > 0.0);
    verdict(
        pass && found,
        format!(
            "{cases} exact cases, worst |MC - exact| = {worst:.2} se; n = 50 scan onset m = {:?}, delta0 = {:?}",
            scan.onset,
            scan.delta0.map(|d| (d * 1e4).round() / 1e4)
        ),
    )
}

fn decay() -> Verdict {
    let mu = StepDistribution::uniform_lr();
    let a = GroupElement::from_i64([[2, 1], [1, 1]]);
    let family = nested_family_from(&a, 1, 6, 2).expect("family");
    let scan = nesting_scan(&family, &word_ball(7));
    let hs = family.halfspaces();
    let r_max = *family.relative_lengths.last().unwrap();
    let horizon = default_horizon(r_max);
    let replicas = 20_000;
    let harmonic = harmonic_halfspaces(&mu, &hs, horizon, replicas, 9).expect("harmonic");
    let stable = harmonic.iter().all(|h| h.stable);
    let points: Vec<DecayPoint> = family
        .relative_lengths
        .iter()
        .zip(&harmonic)
        .map(|(&r, h)| DecayPoint {
            r: r as f64,
            estimate: h.at_horizon.estimate,
            stderr: h.at_horizon.stderr,
            trials: Some(h.at_horizon.trials),
        })
        .collect();
    let fit = match decay_fit(&points) {
        Ok(f) => f,
        Err(e) => return verdict(false, format!("no fit: {e}")),
    };
    let mut bounded = true;
    let mut worst = f64::NEG_INFINITY;
    for (k, n) in [10usize, 20, 40].into_iter().enumerate() {
        let est =
            mu_n_halfspaces(&mu, n, &hs, replicas, child_seed(9, k as u64 + 1)).expect("mu_n");
        for (p, &r) in est.iter().zip(&family.relative_lengths) {
            let excess = p.estimate - fit.bound(r as f64) - 3.0 * p.stderr;
            worst = worst.max(excess);
            bounded &= excess <= 0.0;
        }
    }
    verdict(
        stable && fit.slope_ci_high < 0.0 && bounded && scan.violations == 0,
        format!(
            "r = {:?}, N = {horizon}, gate {}, L = {:.4}, Q = {:.4}, slope CI [{:.4}, {:.4}], max mu_n - bound - 3se = {worst:.4}, nesting violations {}",
            family.relative_lengths,
            if stable { "passed" } else { "failed" },
            fit.l_hat,
            fit.q_hat,
            fit.slope_ci_low,
            fit.slope_ci_high,
            scan.violations
        ),
    )
}

fn schottky() -> Verdict {
    let a = GroupElement::from_i64([[2, 1], [1, 1]]);
    let b = GroupElement::from_i64([[1, 1], [1, 2]]);
    let search = certify_schottky(&a, &b, 10).expect("certify");
    let Some(cert) = search.certificate else {
        return verdict(false, "no certificate with p, q <= 10".into());
    };
    let stored = serde_json::to_string(&cert).expect("serialize");
    let reloaded: PingPongCertificate = serde_json::from_str(&stored).expect("deserialize");
    let reverified = reloaded == cert && reloaded.verify().valid();
    let audit = free_group_audit(&reloaded, 6);
    let regions: Vec<_> = cert
        .intervals
        .iter()
        .map(|iv| move |g: &GroupElement| iv.contains_slope(&g.basepoint_image()))
        .collect();
    let nu =
        harmonic_sets(&StepDistribution::uniform_lr(), &regions, 200, 20_000, 10).expect("regions");
    let positive = nu.iter().all(|h| h.at_horizon.hits > 0);
    verdict(
        cert.p <= 10 && cert.q <= 10 && reverified && audit.passed() && positive,
        format!(
            "p = {}, q = {}, re-verified {reverified}, audit {} words {}, region nu = [{}]",
            cert.p,
            cert.q,
            audit.words_by_length.iter().sum::<u64>(),
            if audit.passed() { "passed" } else { "failed" },
            nu.iter()
                .map(|h| format!("{:.4}", h.at_horizon.estimate))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("proposition suite", propositions),
        ("constant ledger", constant_ledger),
        ("Farey distance vs BFS", farey_distance_oracle),
        ("half-rate heuristic", halfrate),
        ("free-group drift", free_group_drift),
        ("Farey drift positive", farey_drift),
        ("Kingman audit", kingman),
        ("Delta(n, m)", delta_progress),
        ("exponential decay", decay),
        ("Schottky certificate", schottky),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {} [{:.1?}]",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
