use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{clopper_pearson_upper, critical_value, weighted_line_fit, LineFit};

/// A measure estimate at relative length `r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayPoint {
    pub r: f64,
    pub estimate: f64,
    pub stderr: f64,
    /// Replica count behind a Monte-Carlo estimate.
    pub trials: Option<u64>,
}

/// A zero estimate, kept out of the log fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BelowResolution {
    pub r: f64,
    pub trials: Option<u64>,
    /// Clopper-Pearson upper bound at the fit level, when `trials` is known.
    pub upper_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub points: Vec<DecayPoint>,
    pub below_resolution: Vec<BelowResolution>,
    pub fit: LineFit,
    pub level: f64,
    #[serde(rename = "L_hat")]
    pub l_hat: f64,
    #[serde(rename = "Q_hat")]
    pub q_hat: f64,
    pub slope_ci_low: f64,
    pub slope_ci_high: f64,
    /// Some estimate exceeds the one before it (in increasing `r`).
    pub non_monotone: bool,
    /// The slope interval lies strictly below zero.
    pub decaying: bool,
    /// Largest two-horizon gap of the underlying estimates, if any.
    pub horizon_gap: Option<f64>,
}

/// Fit level for decay slopes.
pub const FIT_LEVEL: f64 = 0.95;

/// Weighted least squares of `log estimate` on `r`, with the delta-method
/// errors `stderr / estimate`; `L = exp(slope)`, `Q = exp(intercept)`.
pub fn decay_fit(points: &[DecayPoint]) -> Result<DecayReport> {
    decay_fit_at(points, FIT_LEVEL)
}

pub fn decay_fit_at(points: &[DecayPoint], level: f64) -> Result<DecayReport> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.r.total_cmp(&b.r));
    let (kept, zeros): (Vec<DecayPoint>, Vec<DecayPoint>) =
        sorted.iter().cloned().partition(|p| p.estimate > 0.0);
    let mut rs: Vec<f64> = kept.iter().map(|p| p.r).collect();
    rs.dedup();
    if rs.len() < 3 {
        return Err(Error::Fit(format!(
            "need three distinct r with positive estimates, have {}",
            rs.len()
        )));
    }
    let xs: Vec<f64> = kept.iter().map(|p| p.r).collect();
    let ys: Vec<f64> = kept.iter().map(|p| p.estimate.ln()).collect();
    let sigmas: Vec<f64> = kept.iter().map(|p| p.stderr / p.estimate).collect();
    let fit = weighted_line_fit(&xs, &ys, &sigmas)?;
    let t = critical_value(level, fit.dof + 1);
    let (slope_ci_low, slope_ci_high) =
        (fit.slope - t * fit.slope_se, fit.slope + t * fit.slope_se);
    let non_monotone = sorted.windows(2).any(|w| w[1].estimate > w[0].estimate);
    let below_resolution = zeros
        .iter()
        .map(|p| BelowResolution {
            r: p.r,
            trials: p.trials,
            upper_bound: p.trials.map(|n| clopper_pearson_upper(0, n, level)),
        })
        .collect();
    Ok(DecayReport {
        points: sorted,
        below_resolution,
        l_hat: fit.slope.exp(),
        q_hat: fit.intercept.exp(),
        slope_ci_low,
        slope_ci_high,
        non_monotone,
        decaying: slope_ci_high < 0.0,
        horizon_gap: None,
        level,
        fit,
    })
}

impl DecayReport {
    /// `Q L^r`.
    pub fn bound(&self, r: f64) -> f64 {
        self.q_hat * self.l_hat.powf(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(points: &[(f64, f64)]) -> Vec<DecayPoint> {
        points
            .iter()
            .map(|&(r, e)| DecayPoint {
                r,
                estimate: e,
                stderr: 0.0,
                trials: None,
            })
            .collect()
    }

    #[test]
    fn geometric_data() {
        let f = decay_fit(&exact(&[(1.0, 0.5), (2.0, 0.25), (3.0, 0.125)])).unwrap();
        assert!((f.l_hat - 0.5).abs() < 1e-12);
        assert!((f.q_hat - 1.0).abs() < 1e-12);
        assert!(f.fit.slope_se.abs() < 1e-7);
        assert!(f.decaying && !f.non_monotone);
    }

    #[test]
    fn constant_data_does_not_decay() {
        let f = decay_fit(&exact(&[(1.0, 0.3), (2.0, 0.3), (3.0, 0.3)])).unwrap();
        assert!((f.l_hat - 1.0).abs() < 1e-12);
        assert!(!f.decaying);
    }

    #[test]
    fn zeros_are_set_aside() {
        let mut pts = exact(&[(1.0, 0.5), (2.0, 0.25), (3.0, 0.125), (4.0, 0.0)]);
        pts[3].trials = Some(1000);
        let f = decay_fit(&pts).unwrap();
        assert_eq!(f.below_resolution.len(), 1);
        assert!(f.below_resolution[0].upper_bound.unwrap() > 0.0);
        assert!(decay_fit(&pts[1..]).is_err());
    }
}
