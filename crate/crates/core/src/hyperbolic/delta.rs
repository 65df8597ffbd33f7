use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use super::space::FiniteSpace;

/// Hyperbolicity constants of a finite space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeltaReport {
    pub four_point: f64,
    pub interval_slim: f64,
    /// The value fed to the constant ledger: the larger of the two, and at
    /// least `1/2` when the graph has a cycle.
    pub working: f64,
}

/// Lower bound for graphs with a cycle. Only metric trees are
/// 0-hyperbolic as geodesic spaces, and in the geometric realisation of a
/// shortest cycle the midpoint of an edge is already `1/2` away from the
/// other two sides of a triangle, although the vertex set alone may have
/// both constants equal to zero (as for complete graphs).
pub const CYCLE_FLOOR: f64 = 0.5;

/// Least `δ` such that for every quadruple the largest of the three pair
/// sums exceeds the median by at most `2δ`.
pub fn delta_four_point(space: &FiniteSpace) -> f64 {
    let n = space.len();
    let twice = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut best = 0u32;
            for y in x + 1..n {
                let dxy = space.d(x, y);
                for z in y + 1..n {
                    let (dxz, dyz) = (space.d(x, z), space.d(y, z));
                    for w in z + 1..n {
                        let s1 = dxy + space.d(z, w);
                        let s2 = dxz + space.d(y, w);
                        let s3 = space.d(x, w) + dyz;
                        let (hi, mid) = top_two(s1, s2, s3);
                        best = best.max(hi - mid);
                    }
                }
            }
            best
        })
        .max()
        .unwrap_or(0);
    f64::from(twice) / 2.0
}

fn top_two(a: u32, b: u32, c: u32) -> (u32, u32) {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if c >= hi {
        (c, hi)
    } else {
        (hi, lo.max(c))
    }
}

/// Interval slimness: the maximum over triples `(x, y, z)` and
/// `v ∈ I(x, y)` of `d(v, I(x, z) ∪ I(z, y))`.
pub fn delta_interval_slim(space: &FiniteSpace) -> f64 {
    let tables = IntervalTables::new(space);
    f64::from(tables.slimness())
}

/// Both constants and their maximum.
pub fn hyperbolicity(space: &FiniteSpace) -> DeltaReport {
    let four_point = delta_four_point(space);
    let interval_slim = delta_interval_slim(space);
    let floor = if space.is_tree() { 0.0 } else { CYCLE_FLOOR };
    DeltaReport {
        four_point,
        interval_slim,
        working: four_point.max(interval_slim).max(floor),
    }
}

/// Working `δ`: the larger of the four-point and interval-slim constants,
/// raised to [`CYCLE_FLOOR`] on graphs that are not trees.
pub fn working_delta(space: &FiniteSpace) -> f64 {
    hyperbolicity(space).working
}

/// All intervals and metric balls as bitsets.
struct IntervalTables<'a> {
    space: &'a FiniteSpace,
    intervals: Vec<FixedBitSet>,
    /// `balls[r * n + v]` is the closed ball of radius `r` about `v`.
    balls: Vec<FixedBitSet>,
}

impl<'a> IntervalTables<'a> {
    fn new(space: &'a FiniteSpace) -> IntervalTables<'a> {
        let n = space.len();
        let intervals = (0..n * n)
            .into_par_iter()
            .map(|i| space.interval(i / n, i % n))
            .collect();
        let radii = space.diameter() as usize + 1;
        let balls = (0..radii * n)
            .into_par_iter()
            .map(|i| {
                let (r, v) = ((i / n) as u32, i % n);
                let mut b = FixedBitSet::with_capacity(n);
                for u in 0..n {
                    if space.d(v, u) <= r {
                        b.insert(u);
                    }
                }
                b
            })
            .collect();
        IntervalTables {
            space,
            intervals,
            balls,
        }
    }

    fn interval(&self, x: usize, y: usize) -> &FixedBitSet {
        &self.intervals[x * self.space.len() + y]
    }

    fn ball(&self, v: usize, r: u32) -> &FixedBitSet {
        let r = r.min(self.space.diameter()) as usize;
        &self.balls[r * self.space.len() + v]
    }

    fn slimness(&self) -> u32 {
        let n = self.space.len();
        // The quantity is symmetric in x and y, so x < y suffices.
        (0..n)
            .into_par_iter()
            .map(|x| {
                let mut best = 0u32;
                let mut union = FixedBitSet::with_capacity(n);
                for y in x + 1..n {
                    let side = self.interval(x, y);
                    for z in 0..n {
                        union.clone_from(self.interval(x, z));
                        union.union_with(self.interval(z, y));
                        for v in side.ones() {
                            // Only a strict improvement matters.
                            if self.ball(v, best).is_disjoint(&union) {
                                let mut r = best + 1;
                                while self.ball(v, r).is_disjoint(&union) {
                                    r += 1;
                                }
                                best = r;
                            }
                        }
                    }
                }
                best
            })
            .max()
            .unwrap_or(0)
    }
}
