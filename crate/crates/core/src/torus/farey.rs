//! Exact distances and geodesics in the Farey graph.
//!
//! Every computation is first transported so that one endpoint is the
//! slope `1/0`. The hyperbolic geodesic from infinity to a rational `x`
//! is the vertical line over `x`; the Farey triangles it crosses are the
//! triangle `(1/0, n, n+1)` with `n = floor(x)` followed by the
//! Stern-Brocot descent towards `x`. Shortest paths are computed inside
//! the subgraph induced on the vertices of those triangles.
//!
//! The induced subgraph is a strip of triangles glued along edges, so
//! each crossed edge `{l, r}` separates what comes before it from what
//! comes after. A shortest path to a vertex beyond the edge passes
//! through `l` or `r`, and the distances to `l` and `r` differ by at most
//! one. Hence a single forward sweep computes exact distances. Long runs
//! in the same direction reach a fixed point after two steps, which makes
//! the sweep logarithmic in the size of the entries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::element::GroupElement;
use super::slope::Slope;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Turn {
    /// Target lies left of the mediant: the right endpoint is replaced.
    Left,
    /// Target lies right of the mediant: the left endpoint is replaced.
    Right,
}

/// Stern-Brocot descent from the edge `(n, n+1)` to a non-integer
/// rational `num/den`, as runs of identical turns. The final mediant of
/// the descent is the target itself.
struct Descent {
    floor: BigInt,
    runs: Vec<(Turn, BigInt)>,
}

impl Descent {
    /// `den > 1`, `gcd(num, den) = 1`.
    fn new(num: &BigInt, den: &BigInt) -> Descent {
        let (floor, mut rem) = num.div_mod_floor(den);
        let mut quotients = Vec::new();
        let mut a = den.clone();
        while !rem.is_zero() {
            let (q, r) = a.div_rem(&rem);
            quotients.push(q);
            a = std::mem::replace(&mut rem, r);
        }
        let k = quotients.len();
        let runs = quotients
            .into_iter()
            .enumerate()
            .map(|(i, mut e)| {
                if i == 0 {
                    e -= 1;
                }
                if i + 1 == k {
                    e -= 1;
                }
                let turn = if i % 2 == 0 { Turn::Left } else { Turn::Right };
                (turn, e)
            })
            .collect();
        Descent { floor, runs }
    }
}

/// Distance from `1/0` to `s`.
pub fn distance_from_infinity(s: &Slope) -> u64 {
    if s.is_infinity() {
        return 0;
    }
    if s.q().is_one() {
        return 1;
    }
    let descent = Descent::new(s.p(), s.q());
    let (mut dl, mut dr) = (1u64, 1u64);
    for (turn, count) in &descent.runs {
        // Two steps reach the fixed point of `d -> min(d, other) + 1`.
        let steps = count.to_u64().map_or(2, |c| c.min(2));
        for _ in 0..steps {
            let dm = dl.min(dr) + 1;
            match turn {
                Turn::Left => dr = dm,
                Turn::Right => dl = dm,
            }
        }
    }
    dl.min(dr) + 1
}

/// Element mapping `s` to `1/0`.
fn normaliser(s: &Slope) -> GroupElement {
    GroupElement::sending_infinity_to(s).inverse()
}

/// Exact Farey-graph distance between two slopes.
pub fn farey_distance(s: &Slope, t: &Slope) -> u64 {
    if s == t {
        return 0;
    }
    distance_from_infinity(&normaliser(s).act(t))
}

/// Relative length of `g`: the Farey displacement `d(1/0, g(1/0))`.
pub fn relative_length(g: &GroupElement) -> u64 {
    distance_from_infinity(&g.basepoint_image())
}

/// Vertices of the Farey triangles crossed by the hyperbolic geodesic
/// from `s` to `t`, in order of first appearance. Starts with `s` and
/// ends with `t`.
///
/// The list has one entry per crossed triangle (plus two), so it can be
/// long when the continued fraction of the transported endpoint has large
/// partial quotients; [`farey_distance`] does not materialise it.
pub fn cutting_sequence(s: &Slope, t: &Slope) -> Result<Vec<Slope>> {
    if s == t {
        return Err(Error::IdenticalSlopes);
    }
    let back = GroupElement::sending_infinity_to(s);
    let x = back.inverse().act(t);
    Ok(cutting_sequence_from_infinity(&x)
        .into_iter()
        .map(|v| back.act(&v))
        .collect())
}

fn cutting_sequence_from_infinity(x: &Slope) -> Vec<Slope> {
    debug_assert!(!x.is_infinity());
    if x.q().is_one() {
        return vec![Slope::infinity(), x.clone()];
    }
    let descent = Descent::new(x.p(), x.q());
    let mut l = Slope::integer(descent.floor.clone());
    let mut r = Slope::integer(descent.floor + 1);
    let mut out = vec![Slope::infinity(), l.clone(), r.clone()];
    for (turn, count) in descent.runs {
        let mut i = BigInt::zero();
        while i < count {
            let m = l.mediant(&r);
            out.push(m.clone());
            match turn {
                Turn::Left => r = m,
                Turn::Right => l = m,
            }
            i += 1;
        }
    }
    let last = l.mediant(&r);
    debug_assert_eq!(&last, x);
    out.push(last);
    out
}

/// A shortest path in the Farey graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FareyGeodesic {
    pub vertices: Vec<Slope>,
    pub length: u64,
}

/// A shortest path from `s` to `t` through the vertices of their cutting
/// sequence. Ties prefer the left endpoint of the crossed edge.
pub fn farey_geodesic(s: &Slope, t: &Slope) -> FareyGeodesic {
    if s == t {
        return FareyGeodesic {
            vertices: vec![s.clone()],
            length: 0,
        };
    }
    let back = GroupElement::sending_infinity_to(s);
    let x = back.inverse().act(t);
    let seq = cutting_sequence_from_infinity(&x);
    // Index 0 is infinity; 1 and 2 are floor(x) and floor(x)+1.
    let mut dist = vec![0u64; seq.len()];
    let mut pred = vec![0usize; seq.len()];
    if seq.len() > 2 {
        dist[1] = 1;
        dist[2] = 1;
        let (mut l, mut r) = (1usize, 2usize);
        for m in 3..seq.len() {
            let via = if dist[l] <= dist[r] { l } else { r };
            dist[m] = dist[via] + 1;
            pred[m] = via;
            if m + 1 < seq.len() {
                // Which endpoint the mediant replaces depends on where the
                // target sits relative to it.
                if slope_lt(&x, &seq[m]) {
                    r = m;
                } else {
                    l = m;
                }
            }
        }
    } else {
        dist[1] = 1;
    }
    let mut path = vec![seq.len() - 1];
    while *path.last().unwrap() != 0 {
        let v = *path.last().unwrap();
        path.push(pred[v]);
    }
    path.reverse();
    let length = (path.len() - 1) as u64;
    debug_assert_eq!(length, dist[seq.len() - 1]);
    FareyGeodesic {
        vertices: path.into_iter().map(|i| back.act(&seq[i])).collect(),
        length,
    }
}

/// Order on finite slopes.
fn slope_lt(a: &Slope, b: &Slope) -> bool {
    debug_assert!(a.q().is_positive() && b.q().is_positive());
    a.p() * b.q() < b.p() * a.q()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64) -> Slope {
        Slope::reduce(p, q).unwrap()
    }

    #[test]
    fn distance_examples() {
        let inf = Slope::infinity();
        assert_eq!(farey_distance(&s(3, 7), &s(3, 7)), 0);
        for n in -5..=5 {
            assert_eq!(farey_distance(&inf, &s(n, 1)), 1);
        }
        assert_eq!(farey_distance(&inf, &s(1, 2)), 2);
        assert_eq!(farey_distance(&s(0, 1), &s(1, 1)), 1);
    }

    #[test]
    fn cutting_sequence_examples() {
        let inf = Slope::infinity();
        assert_eq!(
            cutting_sequence(&inf, &s(0, 1)).unwrap(),
            vec![inf.clone(), s(0, 1)]
        );
        let seq = cutting_sequence(&inf, &s(1, 2)).unwrap();
        assert!(seq.contains(&s(0, 1)) && seq.contains(&s(1, 1)));
        assert_eq!(seq.first(), Some(&inf));
        assert_eq!(seq.last(), Some(&s(1, 2)));
        assert_eq!(cutting_sequence(&inf, &inf), Err(Error::IdenticalSlopes));
    }

    #[test]
    fn cutting_sequence_is_a_triangle_strip() {
        // Each new vertex is adjacent to two earlier ones.
        for (a, b) in [(5, 8), (-13, 7), (1, 100), (21, 34)] {
            let seq = cutting_sequence(&Slope::infinity(), &s(a, b)).unwrap();
            for (i, v) in seq.iter().enumerate().skip(3) {
                let adj = seq[..i].iter().filter(|u| u.is_adjacent(v)).count();
                assert_eq!(adj, 2, "{v} in sequence to {a}/{b}");
            }
        }
    }

    #[test]
    fn geodesic_is_a_path_of_the_right_length() {
        for (a, b, c, d) in [(0, 1, 5, 8), (1, 0, 13, 8), (2, 3, -7, 5), (1, 3, 1, 4)] {
            let (u, v) = (s(a, b), s(c, d));
            let g = farey_geodesic(&u, &v);
            assert_eq!(g.vertices.first(), Some(&u));
            assert_eq!(g.vertices.last(), Some(&v));
            assert_eq!(g.length as usize + 1, g.vertices.len());
            assert_eq!(g.length, farey_distance(&u, &v));
            for w in g.vertices.windows(2) {
                assert!(w[0].is_adjacent(&w[1]));
            }
        }
    }

    #[test]
    fn huge_partial_quotients_are_cheap() {
        let big: BigInt = BigInt::from(10).pow(40);
        let x = Slope::reduce(BigInt::one(), big.clone()).unwrap();
        // 1/N is adjacent to 0/1, which is adjacent to infinity.
        assert_eq!(distance_from_infinity(&x), 2);
        let y = Slope::reduce(big.clone() + 1, big).unwrap();
        assert_eq!(distance_from_infinity(&y), 2);
    }

    #[test]
    fn relative_length_examples() {
        assert_eq!(relative_length(&GroupElement::identity()), 0);
        for k in [-7, -1, 1, 3, 50] {
            assert_eq!(relative_length(&GroupElement::r().pow(k)), 0);
        }
        assert_eq!(relative_length(&GroupElement::l()), 1);
    }
}
