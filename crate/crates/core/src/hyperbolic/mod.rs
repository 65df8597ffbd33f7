//! Geometry of finite geodesic graphs: hyperbolicity constants,
//! nearest-point projections, halfspaces and the halfspace propositions.

pub mod constants;
pub mod delta;
pub mod generate;
pub mod halfspace;
pub mod space;
pub mod verify;

pub use constants::{constants, ConstantsLedger};
pub use delta::{delta_four_point, delta_interval_slim, hyperbolicity, working_delta, DeltaReport};
pub use halfspace::{equidistant_set, halfspace, Halfspace};
pub use space::{nearest_point_projection, FiniteSpace};
pub use verify::{
    verify_one, verify_propositions, Proposition, PropositionReport, VerifyOptions,
    COARSE_HALFSPACE_CONVENTION,
};
