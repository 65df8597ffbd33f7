use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::halfspace::HalfspaceQuery;
use crate::error::{Error, Result};
use crate::seed::child_seed;
use crate::stats::binomial_stderr;
use crate::torus::GroupElement;
use crate::walk::{convolution, StepDistribution, WalkPath};

/// Fraction of replicas in a set, with its binomial standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Proportion {
    pub hits: u64,
    pub trials: u64,
    pub estimate: f64,
    pub stderr: f64,
}

impl Proportion {
    pub fn new(hits: u64, trials: u64) -> Proportion {
        Proportion {
            hits,
            trials,
            estimate: hits as f64 / trials as f64,
            stderr: binomial_stderr(hits, trials),
        }
    }
}

/// Positions of the walk at the given ascending steps.
pub(crate) fn positions_at(mu: &StepDistribution, at: &[usize], seed: u64) -> Vec<GroupElement> {
    let n = at.iter().copied().max().unwrap_or(0);
    let sampler = mu.sampler();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = GroupElement::identity();
    let mut out = Vec::with_capacity(at.len());
    let mut next = 0;
    for k in 0..=n {
        if k > 0 {
            w = &w * &mu.atoms()[sampler.sample(&mut rng)].0;
        }
        while next < at.len() && at[next] == k {
            out.push(w.clone());
            next += 1;
        }
    }
    out
}

/// Replica `r` of every estimator walks with seed `child_seed(seed, r)`.
fn endpoints(
    mu: &StepDistribution,
    at: &[usize],
    replicas: usize,
    seed: u64,
) -> Vec<Vec<GroupElement>> {
    (0..replicas)
        .into_par_iter()
        .map(|r| positions_at(mu, at, child_seed(seed, r as u64)))
        .collect()
}

/// Monte-Carlo `mu^(n)(H)`.
pub fn mu_n_halfspace(
    mu: &StepDistribution,
    n: usize,
    h: &HalfspaceQuery,
    replicas: usize,
    seed: u64,
) -> Result<Proportion> {
    Ok(mu_n_halfspaces(mu, n, std::slice::from_ref(h), replicas, seed)?.remove(0))
}

/// Monte-Carlo `mu^(n)(H)` for several halfspaces on common paths.
pub fn mu_n_halfspaces(
    mu: &StepDistribution,
    n: usize,
    hs: &[HalfspaceQuery],
    replicas: usize,
    seed: u64,
) -> Result<Vec<Proportion>> {
    if n == 0 || replicas == 0 {
        return Err(Error::InvalidArgument("need n >= 1 and a replica".into()));
    }
    let ends = endpoints(mu, &[n], replicas, seed);
    Ok(hs
        .iter()
        .map(|h| {
            let hits = ends.iter().filter(|e| h.contains(&e[0])).count() as u64;
            Proportion::new(hits, replicas as u64)
        })
        .collect())
}

/// `mu^(n)(H)` from the convolution table.
pub fn mu_n_halfspace_exact(
    mu: &StepDistribution,
    n: usize,
    h: &HalfspaceQuery,
) -> Result<BigRational> {
    Ok(convolution(mu, n)?.mass_where(|g| h.contains(g)))
}

/// Endpoint proxy for the harmonic measure of a set at horizons `N` and
/// `2N`, along the same paths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicEstimate {
    pub horizon: usize,
    pub at_horizon: Proportion,
    pub at_double: Proportion,
    /// `|p_N - p_2N| / sqrt(se_N^2 + se_2N^2)`.
    pub gap: f64,
    pub stable: bool,
}

/// Gate on the two-horizon gap, in combined standard errors.
pub const STABILITY_GATE: f64 = 3.0;

impl HarmonicEstimate {
    fn new(horizon: usize, a: Proportion, b: Proportion) -> HarmonicEstimate {
        let combined = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        let diff = (a.estimate - b.estimate).abs();
        let gap = if combined > 0.0 {
            diff / combined
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        HarmonicEstimate {
            horizon,
            at_horizon: a,
            at_double: b,
            gap,
            stable: gap < STABILITY_GATE,
        }
    }
}

/// Harmonic proxies for several sets given by predicates on positions.
pub fn harmonic_sets<F>(
    mu: &StepDistribution,
    sets: &[F],
    horizon: usize,
    replicas: usize,
    seed: u64,
) -> Result<Vec<HarmonicEstimate>>
where
    F: Fn(&GroupElement) -> bool + Sync,
{
    if horizon == 0 || replicas == 0 {
        return Err(Error::InvalidArgument(
            "need a positive horizon and a replica".into(),
        ));
    }
    let ends = endpoints(mu, &[horizon, 2 * horizon], replicas, seed);
    Ok(sets
        .iter()
        .map(|f| {
            let a = ends.iter().filter(|e| f(&e[0])).count() as u64;
            let b = ends.iter().filter(|e| f(&e[1])).count() as u64;
            HarmonicEstimate::new(
                horizon,
                Proportion::new(a, replicas as u64),
                Proportion::new(b, replicas as u64),
            )
        })
        .collect())
}

/// Harmonic proxy for `closure H`.
pub fn harmonic_halfspace(
    mu: &StepDistribution,
    h: &HalfspaceQuery,
    horizon: usize,
    replicas: usize,
    seed: u64,
) -> Result<HarmonicEstimate> {
    Ok(harmonic_halfspaces(mu, std::slice::from_ref(h), horizon, replicas, seed)?.remove(0))
}

pub fn harmonic_halfspaces(
    mu: &StepDistribution,
    hs: &[HalfspaceQuery],
    horizon: usize,
    replicas: usize,
    seed: u64,
) -> Result<Vec<HarmonicEstimate>> {
    let sets: Vec<_> = hs
        .iter()
        .map(|h| move |g: &GroupElement| h.contains(g))
        .collect();
    harmonic_sets(mu, &sets, horizon, replicas, seed)
}

/// Default horizon for a halfspace centred at relative length `r`.
pub fn default_horizon(r: u64) -> usize {
    (20 * r.max(1)) as usize
}

/// First index at which the path lies in `H`.
pub fn first_hit(path: &WalkPath, h: &HalfspaceQuery) -> Option<(usize, GroupElement)> {
    path.positions
        .iter()
        .enumerate()
        .find(|(_, g)| h.contains(g))
        .map(|(k, g)| (k, g.clone()))
}

/// Among paths that hit `H_i` within the horizon, the fraction whose
/// endpoint lies in `H_{i+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalStep {
    pub index: usize,
    pub conditional: Proportion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalDecay {
    pub horizon: usize,
    pub steps: Vec<ConditionalStep>,
    /// `1 -` the largest conditional estimate plus three standard errors.
    pub epsilon_hat: f64,
}

pub fn conditional_decay(
    mu: &StepDistribution,
    hs: &[HalfspaceQuery],
    horizon: usize,
    replicas: usize,
    seed: u64,
) -> Result<ConditionalDecay> {
    if hs.len() < 2 || horizon == 0 || replicas == 0 {
        return Err(Error::InvalidArgument(
            "need two halfspaces, a horizon and a replica".into(),
        ));
    }
    // Per path: did it hit H_i, and is its endpoint in H_i.
    let flags: Vec<(Vec<bool>, Vec<bool>)> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let path = crate::walk::sample_path(mu, horizon, child_seed(seed, r as u64));
            let hit = hs.iter().map(|h| first_hit(&path, h).is_some()).collect();
            let end = hs.iter().map(|h| h.contains(path.endpoint())).collect();
            (hit, end)
        })
        .collect();
    let steps: Vec<ConditionalStep> = (0..hs.len() - 1)
        .map(|i| {
            let hitting = flags.iter().filter(|(hit, _)| hit[i]);
            let trials = hitting.clone().count() as u64;
            let hits = hitting.filter(|(_, end)| end[i + 1]).count() as u64;
            ConditionalStep {
                index: i,
                conditional: Proportion::new(hits, trials),
            }
        })
        .collect();
    let worst = steps
        .iter()
        .filter(|s| s.conditional.trials > 0)
        .map(|s| s.conditional.estimate + 3.0 * s.conditional.stderr)
        .fold(0.0, f64::max);
    Ok(ConditionalDecay {
        horizon,
        steps,
        epsilon_hat: 1.0 - worst,
    })
}
