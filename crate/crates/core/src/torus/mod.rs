//! The torus model: slopes, `SL(2, Z)` and the Farey graph.

mod element;
mod farey;
mod oracle;
mod slope;
mod word;

pub use element::{mobius, GroupElement};
pub use farey::{
    cutting_sequence, distance_from_infinity, farey_distance, farey_geodesic, relative_length,
    FareyGeodesic,
};
pub use oracle::{bfs_oracle, FareyBall};
pub use slope::{intersection_number, reduce, Slope};
pub use word::{word_length, WordMetric};

/// Label carried by every report that measures lengths by displacing the
/// basepoint slope `1/0` in the Farey graph.
pub const FAREY_DISPLACEMENT: &str = "farey-displacement";
