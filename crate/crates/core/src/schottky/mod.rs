//! Pseudo-Anosov torus maps, their fixed slopes, and exact ping-pong
//! certificates for Schottky pairs on the projective line.

mod fixed;
mod pingpong;
mod quadratic;

pub use fixed::{fixed_points, independent, is_hyperbolic, resultant, FixedPointData};
pub use pingpong::{
    certify_schottky, free_group_audit, maps_complement_into, search_schottky_pair,
    CertificateCheck, FreeGroupAudit, Interval, PingPongCertificate, SchottkySearch, SearchStep,
    SemigroupWitness, WordFinding, MAX_DEPTH,
};
pub use quadratic::QuadraticRoot;

/// Big integers as decimal strings in JSON.
pub(crate) mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}
