use serde::{Deserialize, Serialize};

use crate::stats::{mean_interval, summarize};

/// Default confidence level for walk experiments.
pub const DEFAULT_LEVEL: f64 = 0.99;

/// One line of a walk experiment report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub experiment: String,
    pub metric: String,
    pub n: usize,
    pub m: Option<usize>,
    pub replicas: usize,
    pub seed: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl EstimateRecord {
    /// Mean of the per-replica values with a two-sided interval at `level`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_samples(
        experiment: &str,
        metric: &str,
        n: usize,
        m: Option<usize>,
        seed: u64,
        samples: &[f64],
        level: f64,
    ) -> EstimateRecord {
        let s = summarize(samples);
        let (ci_low, ci_high) = mean_interval(&s, level);
        EstimateRecord {
            experiment: experiment.to_string(),
            metric: metric.to_string(),
            n,
            m,
            replicas: samples.len(),
            seed,
            estimate: s.mean,
            stderr: s.stderr,
            ci_low,
            ci_high,
        }
    }

    /// Column names of [`EstimateRecord::csv_row`].
    pub const CSV_HEADER: &'static str =
        "experiment,metric,n,m,replicas,seed,estimate,stderr,ci_low,ci_high";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.experiment,
            self.metric,
            self.n,
            self.m.map(|m| m.to_string()).unwrap_or_default(),
            self.replicas,
            self.seed,
            self.estimate,
            self.stderr,
            self.ci_low,
            self.ci_high
        )
    }
}
