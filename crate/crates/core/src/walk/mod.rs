//! Random walks on `SL(2, Z)`: step distributions, sample paths, exact
//! convolutions and drift experiments.

mod convolution;
mod delta;
mod distribution;
mod drift;
mod halfrate;
mod metric;
mod path;
mod record;

pub use convolution::{
    convolution, convolution_with_budget, required_budget, ConvolutionTable, DEFAULT_BUDGET,
};
pub use delta::{delta_nm, delta_nm_exact, delta_nm_exact_with_budget, delta_scan, DeltaScan};
pub use distribution::{AtomSampler, StepDistribution};
pub use drift::{
    audit_paths, drift_estimate, drift_estimate_with, lengths_along, subadditivity_audit,
    AuditReport, CurvePoint, DriftOptions, DriftReport, PairAudit,
};
pub use halfrate::{halfrate_statistic, HalfrateReport};
pub use metric::{FreeBasis, Metric, ReducedWord, Tracker};
pub use path::{sample_indices, sample_path, shift, WalkPath};
pub use record::{EstimateRecord, DEFAULT_LEVEL};
