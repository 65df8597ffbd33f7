use serde::Serialize;

use crate::error::{Error, Result};

/// The explicit constants used by the halfspace propositions and the
/// decay lemmas, as functions of `δ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstantsLedger {
    pub delta: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub k5: f64,
    pub k6: f64,
    pub k7: f64,
    /// Present when the distance from the basepoint to the axis of the
    /// Schottky pair is known.
    pub k8: Option<f64>,
    pub k9: Option<f64>,
    pub k10: Option<f64>,
    pub k: u32,
}

impl ConstantsLedger {
    pub fn new(delta: f64) -> Result<ConstantsLedger> {
        constants(delta, None, 1)
    }

    /// `K8 = 2 d(1, [a, b]) + K5`.
    pub fn k8_for(&self, pair_distance: f64) -> f64 {
        2.0 * pair_distance + self.k5
    }

    /// `K9 = k (2 K8 + K6)`.
    pub fn k9_for(&self, k8: f64, k: u32) -> f64 {
        f64::from(k) * (2.0 * k8 + self.k6)
    }

    /// `K10 = K6 + 2 K8 + K9`.
    pub fn k10_for(&self, k8: f64, k9: f64) -> f64 {
        self.k6 + 2.0 * k8 + k9
    }
}

/// Builds the ledger for `δ`, optionally with the pair data
/// `d(1, [a, b])` and spacing multiplier `k`.
pub fn constants(delta: f64, pair_distance: Option<f64>, k: u32) -> Result<ConstantsLedger> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "delta must be a non-negative number, got {delta}"
        )));
    }
    if k < 1 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if let Some(d) = pair_distance {
        if !(d >= 0.0 && d.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "pair distance must be non-negative, got {d}"
            )));
        }
    }
    let k1 = 7.0 * delta;
    let k2 = 27.0 * delta;
    let k3 = 18.0 * delta;
    let k4 = 2.0 * k2 + k3 + 42.0 * delta;
    let k5 = 24.0 * delta;
    let k7 = 98.0 * delta + 2.0 * k1;
    let k6 = 2.0 * k7 + 6.0 * delta;
    let mut ledger = ConstantsLedger {
        delta,
        k1,
        k2,
        k3,
        k4,
        k5,
        k6,
        k7,
        k8: None,
        k9: None,
        k10: None,
        k,
    };
    if let Some(d) = pair_distance {
        let k8 = ledger.k8_for(d);
        let k9 = ledger.k9_for(k8, k);
        ledger.k8 = Some(k8);
        ledger.k9 = Some(k9);
        ledger.k10 = Some(ledger.k10_for(k8, k9));
    }
    Ok(ledger)
}
