use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::convolution::{convolution_with_budget, required_budget, DEFAULT_BUDGET};
use super::distribution::StepDistribution;
use super::drift::lengths_along;
use super::metric::Metric;
use super::record::EstimateRecord;
use crate::error::{Error, Result};
use crate::seed::child_seed;
use crate::torus::{relative_length, FAREY_DISPLACEMENT};

/// Monte-Carlo estimate of `E(|w_{n+m}| - |w_n|)` in the Farey
/// displacement.
pub fn delta_nm(
    mu: &StepDistribution,
    n: usize,
    m: usize,
    replicas: usize,
    seed: u64,
    level: f64,
) -> Result<EstimateRecord> {
    let scan = delta_scan(mu, n, &[m], replicas, seed, level)?;
    Ok(scan.points.into_iter().next().expect("one point"))
}

/// `sum_x mu^(n)(x) sum_y mu^(m)(y) (|xy| - |x|)`, exactly.
pub fn delta_nm_exact(mu: &StepDistribution, n: usize, m: usize) -> Result<BigRational> {
    delta_nm_exact_with_budget(mu, n, m, DEFAULT_BUDGET)
}

pub fn delta_nm_exact_with_budget(
    mu: &StepDistribution,
    n: usize,
    m: usize,
    budget: u128,
) -> Result<BigRational> {
    let required = required_budget(mu, n + m);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let tn = convolution_with_budget(mu, n, budget)?;
    let tm = convolution_with_budget(mu, m, budget)?;
    let len = |l: u64| BigRational::from_integer(BigInt::from(l));
    let mut total = BigRational::from_integer(BigInt::from(0));
    for (x, px) in tn.entries() {
        let lx = relative_length(x);
        let inner: BigRational = tm
            .entries()
            .map(|(y, py)| py * len(relative_length(&(x * y))))
            .sum();
        total += px * (inner - len(lx));
    }
    Ok(total)
}

/// `Delta_{n,m}` for several `m` on common paths, with the onset of a
/// positive lower bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaScan {
    pub n: usize,
    pub level: f64,
    pub points: Vec<EstimateRecord>,
    /// Least scanned `m0` with a positive interval lower bound at every
    /// scanned `m >= m0`.
    pub onset: Option<usize>,
    /// Least lower bound over the scanned `m >= onset`.
    pub delta0: Option<f64>,
}

pub fn delta_scan(
    mu: &StepDistribution,
    n: usize,
    ms: &[usize],
    replicas: usize,
    seed: u64,
    level: f64,
) -> Result<DeltaScan> {
    if replicas < 2 {
        return Err(Error::InvalidArgument("need at least two replicas".into()));
    }
    let mut ms = ms.to_vec();
    ms.sort_unstable();
    ms.dedup();
    let mut at: Vec<usize> = std::iter::once(n).chain(ms.iter().map(|m| n + m)).collect();
    at.sort_unstable();
    at.dedup();
    let lengths = (0..replicas)
        .into_par_iter()
        .map(|r| {
            lengths_along(
                mu,
                &Metric::FareyDisplacement,
                &at,
                child_seed(seed, r as u64),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let pos = |k: usize| at.binary_search(&k).expect("checkpoint");
    let base = pos(n);
    let points: Vec<EstimateRecord> = ms
        .iter()
        .map(|&m| {
            let j = pos(n + m);
            let diffs: Vec<f64> = lengths
                .iter()
                .map(|l| l[j] as f64 - l[base] as f64)
                .collect();
            EstimateRecord::from_samples(
                "delta-nm",
                FAREY_DISPLACEMENT,
                n,
                Some(m),
                seed,
                &diffs,
                level,
            )
        })
        .collect();
    let mut onset = None;
    for (i, p) in points.iter().enumerate().rev() {
        if p.ci_low > 0.0 {
            onset = Some(i);
        } else {
            break;
        }
    }
    let delta0 = onset.map(|i| {
        points[i..]
            .iter()
            .map(|p| p.ci_low)
            .fold(f64::INFINITY, f64::min)
    });
    Ok(DeltaScan {
        n,
        level,
        onset: onset.map(|i| ms[i]),
        delta0,
        points,
    })
}
