use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::space::FiniteSpace;
use crate::error::{Error, Result};

/// The coarse halfspace `H(a, b; C) = {x : d(x, b) <= d(x, a) + C}`.
/// `C = 0` is the halfspace of points at least as close to `b` as to `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Halfspace {
    pub anchor: usize,
    pub target: usize,
    pub slack: i64,
    pub members: Vec<usize>,
}

impl Halfspace {
    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

#[inline]
pub(crate) fn in_halfspace(space: &FiniteSpace, v: usize, a: usize, b: usize, c: i64) -> bool {
    i64::from(space.d(v, b)) <= i64::from(space.d(v, a)) + c
}

pub fn halfspace(space: &FiniteSpace, a: usize, b: usize, c: i64) -> Halfspace {
    Halfspace {
        anchor: a,
        target: b,
        slack: c,
        members: (0..space.len())
            .filter(|&v| in_halfspace(space, v, a, b, c))
            .collect(),
    }
}

/// Membership bitset of `H(a, b; c)`.
pub(crate) fn halfspace_bits(space: &FiniteSpace, a: usize, b: usize, c: i64) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(space.len());
    for v in 0..space.len() {
        if in_halfspace(space, v, a, b, c) {
            out.insert(v);
        }
    }
    out
}

/// `E(a, b) = {x : d(x, a) = d(x, b)}`. Empty whenever every vertex has
/// distances of different parity to `a` and `b`.
pub fn equidistant_set(space: &FiniteSpace, a: usize, b: usize) -> Result<Vec<usize>> {
    if a == b {
        return Err(Error::InvalidArgument(
            "equidistant set needs two distinct points".into(),
        ));
    }
    Ok((0..space.len())
        .filter(|&v| space.d(v, a) == space.d(v, b))
        .collect())
}
