use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::child_rng;
use crate::stats::binomial_stderr;

/// Frequency of letter changes in the turn sequence of the
/// non-backtracking walk on the trivalent tree dual to the Farey
/// tessellation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfrateReport {
    pub experiment: String,
    pub n: usize,
    pub replicas: usize,
    pub seed: u64,
    pub changes: u64,
    pub comparisons: u64,
    pub frequency: f64,
    pub stderr: f64,
}

/// Each step of the walk leaves the current edge of the tree through one
/// of the two other edges at its far vertex, turning left (`L`) or right
/// (`R`) with equal probability; a change of letter marks progress in the
/// Farey graph.
pub fn halfrate_statistic(n: usize, replicas: usize, seed: u64) -> Result<HalfrateReport> {
    if n < 2 || replicas == 0 {
        return Err(Error::InvalidArgument(
            "half-rate needs n >= 2 and a replica".into(),
        ));
    }
    let changes: u64 = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let mut rng = child_rng(seed, r as u64);
            let mut prev: bool = rng.gen();
            let mut count = 0u64;
            for _ in 1..n {
                let turn: bool = rng.gen();
                count += u64::from(turn != prev);
                prev = turn;
            }
            count
        })
        .sum();
    let comparisons = (replicas * (n - 1)) as u64;
    Ok(HalfrateReport {
        experiment: "halfrate".into(),
        n,
        replicas,
        seed,
        changes,
        comparisons,
        frequency: changes as f64 / comparisons as f64,
        // Change indicators of i.i.d. fair letters are i.i.d. fair bits.
        stderr: binomial_stderr(changes, comparisons),
    })
}
