use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::distribution::StepDistribution;
use super::metric::Metric;
use super::path::{sample_indices, WalkPath};
use super::record::{EstimateRecord, DEFAULT_LEVEL};
use crate::error::{Error, Result};
use crate::seed::child_seed;
use crate::stats::summarize;
use crate::torus::farey_distance;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub step: usize,
    pub mean_rate: f64,
    pub stderr: f64,
}

/// Estimate of the rate of escape `lim |w_n| / n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    #[serde(flatten)]
    pub record: EstimateRecord,
    pub level: f64,
    /// `|w_n|` for each replica, in replica order.
    pub terminal_distances: Vec<u64>,
    /// Mean of `|w_k| / k` at the requested checkpoints.
    pub curve: Vec<CurvePoint>,
}

#[derive(Clone, Debug)]
pub struct DriftOptions {
    pub level: f64,
    /// Steps at which `|w_k| / k` is also recorded.
    pub checkpoints: Vec<usize>,
}

impl Default for DriftOptions {
    fn default() -> DriftOptions {
        DriftOptions {
            level: DEFAULT_LEVEL,
            checkpoints: Vec::new(),
        }
    }
}

/// Lengths `|w_k|` at each step listed in `at` (ascending), along the
/// walk whose increments are drawn with `seed`.
pub fn lengths_along(
    mu: &StepDistribution,
    metric: &Metric,
    at: &[usize],
    seed: u64,
) -> Result<Vec<u64>> {
    let n = at.iter().copied().max().unwrap_or(0);
    let mut tracker = metric.tracker(mu)?;
    let mut out = Vec::with_capacity(at.len());
    let mut next = 0;
    for (k, idx) in std::iter::once(None)
        .chain(sample_indices(mu, n, seed).into_iter().map(Some))
        .enumerate()
    {
        if let Some(i) = idx {
            tracker.step(i, &mu.atoms()[i].0);
        }
        while next < at.len() && at[next] == k {
            out.push(tracker.length()?);
            next += 1;
        }
    }
    Ok(out)
}

/// `replicas` independent walks of `n` steps; replica `r` uses
/// `child_seed(seed, r)`.
pub fn drift_estimate(
    mu: &StepDistribution,
    metric: &Metric,
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<DriftReport> {
    drift_estimate_with(mu, metric, n, replicas, seed, &DriftOptions::default())
}

pub fn drift_estimate_with(
    mu: &StepDistribution,
    metric: &Metric,
    n: usize,
    replicas: usize,
    seed: u64,
    opts: &DriftOptions,
) -> Result<DriftReport> {
    if n == 0 || replicas < 2 {
        return Err(Error::InvalidArgument(
            "drift needs n >= 1 and at least two replicas".into(),
        ));
    }
    let mut at: Vec<usize> = opts
        .checkpoints
        .iter()
        .copied()
        .filter(|&k| k >= 1 && k < n)
        .collect();
    at.push(n);
    at.sort_unstable();
    at.dedup();
    let lengths = (0..replicas)
        .into_par_iter()
        .map(|r| lengths_along(mu, metric, &at, child_seed(seed, r as u64)))
        .collect::<Result<Vec<_>>>()?;
    let rate =
        |j: usize| -> Vec<f64> { lengths.iter().map(|l| l[j] as f64 / at[j] as f64).collect() };
    let last = at.len() - 1;
    let record = EstimateRecord::from_samples(
        "drift",
        metric.label(),
        n,
        None,
        seed,
        &rate(last),
        opts.level,
    );
    let curve = (0..last)
        .map(|j| {
            let s = summarize(&rate(j));
            CurvePoint {
                step: at[j],
                mean_rate: s.mean,
                stderr: s.stderr,
            }
        })
        .collect();
    Ok(DriftReport {
        record,
        level: opts.level,
        terminal_distances: lengths.iter().map(|l| l[last]).collect(),
        curve,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairAudit {
    pub n: usize,
    pub k: usize,
    pub checked: u64,
    pub violations: u64,
    /// Least `|w_n| + d(w_n, w_{n+k}) - |w_{n+k}|` seen.
    pub min_slack: Option<i64>,
}

/// Pathwise check of `|w_{n+k}| <= |w_n| + d(w_n, w_{n+k})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub metric: String,
    pub paths: u64,
    pub pairs: Vec<PairAudit>,
}

impl AuditReport {
    pub fn violations(&self) -> u64 {
        self.pairs.iter().map(|p| p.violations).sum()
    }

    /// Adds the tallies of another audit over the same pairs.
    pub fn absorb(&mut self, other: &AuditReport) {
        self.paths += other.paths;
        for (a, b) in self.pairs.iter_mut().zip(&other.pairs) {
            debug_assert_eq!((a.n, a.k), (b.n, b.k));
            a.checked += b.checked;
            a.violations += b.violations;
            a.min_slack = match (a.min_slack, b.min_slack) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
        }
    }
}

/// Distance between positions `i` and `j` of a path: the length of the
/// increments in between, which is `d(1, (U^i w)_{j-i})`.
fn path_distance(path: &WalkPath, metric: &Metric, i: usize, j: usize) -> Result<u64> {
    match metric {
        Metric::FareyDisplacement => Ok(farey_distance(
            &path.positions[i].basepoint_image(),
            &path.positions[j].basepoint_image(),
        )),
        _ => metric.word_length(&path.increments[i..j]),
    }
}

pub fn subadditivity_audit(
    path: &WalkPath,
    metric: &Metric,
    pairs: &[(usize, usize)],
) -> Result<AuditReport> {
    let mut out = Vec::with_capacity(pairs.len());
    for &(n, k) in pairs {
        if n + k > path.len() {
            return Err(Error::InvalidArgument(format!(
                "pair ({n}, {k}) exceeds the path length {}",
                path.len()
            )));
        }
        let whole = path_distance(path, metric, 0, n + k)? as i64;
        let head = path_distance(path, metric, 0, n)? as i64;
        let tail = path_distance(path, metric, n, n + k)? as i64;
        let slack = head + tail - whole;
        out.push(PairAudit {
            n,
            k,
            checked: 1,
            violations: u64::from(slack < 0),
            min_slack: Some(slack),
        });
    }
    Ok(AuditReport {
        metric: metric.label().to_string(),
        paths: 1,
        pairs: out,
    })
}

/// The audit over `count` paths of `len` steps; path `r` has seed
/// `child_seed(seed, r)`.
pub fn audit_paths(
    mu: &StepDistribution,
    metric: &Metric,
    len: usize,
    count: usize,
    pairs: &[(usize, usize)],
    seed: u64,
) -> Result<AuditReport> {
    let reports = (0..count)
        .into_par_iter()
        .map(|r| {
            let path = super::path::sample_path(mu, len, child_seed(seed, r as u64));
            subadditivity_audit(&path, metric, pairs)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = AuditReport {
        metric: metric.label().to_string(),
        paths: 0,
        pairs: pairs
            .iter()
            .map(|&(n, k)| PairAudit {
                n,
                k,
                checked: 0,
                violations: 0,
                min_slack: None,
            })
            .collect(),
    };
    for r in &reports {
        total.absorb(r);
    }
    Ok(total)
}
