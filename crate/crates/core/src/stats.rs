//! Summary statistics, confidence intervals and weighted fits.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

/// Below this many observations, intervals use Student's t.
pub const STUDENT_BELOW: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (divisor `count - 1`).
    pub sd: f64,
    /// Standard error of the mean.
    pub stderr: f64,
}

pub fn summarize(xs: &[f64]) -> Summary {
    let count = xs.len();
    if count == 0 {
        return Summary {
            count,
            mean: f64::NAN,
            sd: f64::NAN,
            stderr: f64::NAN,
        };
    }
    let mean = xs.iter().sum::<f64>() / count as f64;
    let sd = if count > 1 {
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
    } else {
        0.0
    };
    Summary {
        count,
        mean,
        sd,
        stderr: sd / (count as f64).sqrt(),
    }
}

/// Two-sided critical value at `level` for a mean of `count`
/// observations: normal from [`STUDENT_BELOW`] on, Student's t with
/// `count - 1` degrees of freedom below.
pub fn critical_value(level: f64, count: usize) -> f64 {
    let p = 0.5 + level / 2.0;
    if !(2..STUDENT_BELOW).contains(&count) {
        Normal::new(0.0, 1.0)
            .expect("standard normal")
            .inverse_cdf(p)
    } else {
        StudentsT::new(0.0, 1.0, (count - 1) as f64)
            .expect("positive degrees of freedom")
            .inverse_cdf(p)
    }
}

/// Two-sided confidence interval for the mean.
pub fn mean_interval(summary: &Summary, level: f64) -> (f64, f64) {
    let h = critical_value(level, summary.count) * summary.stderr;
    (summary.mean - h, summary.mean + h)
}

/// Standard error of a binomial proportion estimate.
pub fn binomial_stderr(successes: u64, trials: u64) -> f64 {
    if trials == 0 {
        return f64::NAN;
    }
    let p = successes as f64 / trials as f64;
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Upper end of the two-sided Clopper-Pearson interval at `level`.
pub fn clopper_pearson_upper(successes: u64, trials: u64, level: f64) -> f64 {
    if successes >= trials {
        return 1.0;
    }
    let target = 1.0 - (1.0 - level) / 2.0;
    let (a, b) = (successes as f64 + 1.0, (trials - successes) as f64);
    // Bisection on the regularized incomplete beta function.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if beta_reg(a, b, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Result of a weighted straight-line fit `y = intercept + slope x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub intercept_se: f64,
    /// Weighted residual sum of squares.
    pub chi2: f64,
    pub dof: usize,
}

/// Weighted least squares with weights `1 / sigma_i^2`.
///
/// Parameter errors come from the weighted normal equations, scaled by
/// the reduced chi-square when it exceeds one, so that scatter beyond the
/// stated errors widens the errors rather than being ignored. Zero
/// `sigma` entries are allowed only when all of them are zero, in which
/// case the fit is unweighted.
pub fn weighted_line_fit(xs: &[f64], ys: &[f64], sigmas: &[f64]) -> Result<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n || sigmas.len() != n {
        return Err(Error::Fit(
            "need at least two points of matching length".into(),
        ));
    }
    let exact = sigmas.iter().all(|&s| s == 0.0);
    if !exact && sigmas.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
        return Err(Error::Fit("standard errors must be positive".into()));
    }
    let w: Vec<f64> = sigmas
        .iter()
        .map(|&s| if exact { 1.0 } else { 1.0 / (s * s) })
        .collect();
    let sw: f64 = w.iter().sum();
    let sx: f64 = w.iter().zip(xs).map(|(w, x)| w * x).sum();
    let sy: f64 = w.iter().zip(ys).map(|(w, y)| w * y).sum();
    let sxx: f64 = w.iter().zip(xs).map(|(w, x)| w * x * x).sum();
    let sxy: f64 = w.iter().zip(xs).zip(ys).map(|((w, x), y)| w * x * y).sum();
    let det = sw * sxx - sx * sx;
    if det.abs() <= f64::EPSILON * sw * sxx {
        return Err(Error::Fit("abscissae must not all coincide".into()));
    }
    let slope = (sw * sxy - sx * sy) / det;
    let intercept = (sxx * sy - sx * sxy) / det;
    let chi2: f64 = w
        .iter()
        .zip(xs)
        .zip(ys)
        .map(|((w, x), y)| w * (y - intercept - slope * x).powi(2))
        .sum();
    let dof = n - 2;
    let scale = if exact {
        if dof > 0 {
            chi2 / dof as f64
        } else {
            0.0
        }
    } else if dof > 0 {
        (chi2 / dof as f64).max(1.0)
    } else {
        1.0
    };
    Ok(LineFit {
        slope,
        intercept,
        slope_se: (sw / det * scale).sqrt(),
        intercept_se: (sxx / det * scale).sqrt(),
        chi2,
        dof,
    })
}
