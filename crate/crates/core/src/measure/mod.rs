//! Halfspace measures for walks on `SL(2, Z)`: convolution measures,
//! an endpoint proxy for harmonic measure, and exponential decay fits.
//!
//! Harmonic estimates are endpoint frequencies at a finite horizon and
//! ignore any mass the limit measure may put on halfspace boundaries.

mod estimate;
mod fit;
mod halfspace;

pub use estimate::{
    conditional_decay, default_horizon, first_hit, harmonic_halfspace, harmonic_halfspaces,
    harmonic_sets, mu_n_halfspace, mu_n_halfspace_exact, mu_n_halfspaces, ConditionalDecay,
    ConditionalStep, HarmonicEstimate, Proportion, STABILITY_GATE,
};
pub use fit::{decay_fit, decay_fit_at, BelowResolution, DecayPoint, DecayReport, FIT_LEVEL};
pub use halfspace::{
    nested_family, nested_family_from, nesting_scan, word_ball, HalfspaceQuery, NestedFamily,
    NestingReport, NestingViolation,
};
