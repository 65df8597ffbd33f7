//! Breadth-first distances in a finite piece of the Farey graph.
//!
//! The Farey graph is not locally finite, so the oracle works inside the
//! box of slopes `p/q` with `|p| <= bound` and `q <= bound`. Distances in
//! the box can only overestimate true distances; a value that does not
//! change between two bounds is treated as settled.

use std::collections::VecDeque;

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::slope::Slope;

/// Adjacency of the box of slopes with numerators and denominators
/// bounded by `bound`, in compressed-row form.
pub struct FareyBall {
    bound: i64,
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

const UNSEEN: u8 = u8::MAX;

impl FareyBall {
    pub fn new(bound: u32) -> FareyBall {
        let bound = i64::from(bound.max(1));
        let cells = ((2 * bound + 1) * (bound + 1)) as usize;
        let mut offsets = Vec::with_capacity(cells + 1);
        let mut targets = Vec::new();
        let mut scratch = Vec::new();
        offsets.push(0u32);
        for cell in 0..cells {
            let (p, q) = Self::decode(bound, cell);
            if Self::is_vertex(p, q) {
                scratch.clear();
                Self::neighbours(bound, p, q, &mut scratch);
                targets.extend(scratch.iter().map(|&(r, s)| Self::encode(bound, r, s)));
            }
            offsets.push(u32::try_from(targets.len()).expect("ball too large"));
        }
        FareyBall {
            bound,
            offsets,
            targets,
        }
    }

    pub fn bound(&self) -> u32 {
        self.bound as u32
    }

    pub fn vertex_count(&self) -> usize {
        (0..self.offsets.len() - 1)
            .filter(|&c| {
                let (p, q) = Self::decode(self.bound, c);
                Self::is_vertex(p, q)
            })
            .count()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn contains(&self, s: &Slope) -> bool {
        self.index(s).is_some()
    }

    fn index(&self, s: &Slope) -> Option<u32> {
        let p = s.p().to_i64()?;
        let q = s.q().to_i64()?;
        (p.abs() <= self.bound && q <= self.bound).then(|| Self::encode(self.bound, p, q))
    }

    fn is_vertex(p: i64, q: i64) -> bool {
        if q == 0 {
            p == 1
        } else {
            p.gcd(&q) == 1
        }
    }

    fn encode(bound: i64, p: i64, q: i64) -> u32 {
        ((p + bound) * (bound + 1) + q) as u32
    }

    fn decode(bound: i64, cell: usize) -> (i64, i64) {
        let cell = cell as i64;
        (cell / (bound + 1) - bound, cell % (bound + 1))
    }

    /// Slopes `r/s` in the box with `|p s - q r| = 1`.
    fn neighbours(bound: i64, p: i64, q: i64, out: &mut Vec<(i64, i64)>) {
        if q == 0 {
            out.extend((-bound..=bound).map(|r| (r, 1)));
            return;
        }
        // 1/0 is adjacent exactly to the integers.
        if q == 1 {
            out.push((1, 0));
        }
        for e in [1i64, -1] {
            // p s - q r = e  <=>  r = (p s - e) / q with p s = e (mod q).
            let s0 = if q == 1 {
                0
            } else {
                let inv = mod_inverse(p.rem_euclid(q), q);
                (e.rem_euclid(q) * inv).rem_euclid(q)
            };
            // Range of s for which |r| <= bound.
            let (mut lo, mut hi) = (1i64, bound);
            if p != 0 {
                let a = (e - bound * q) as f64 / p as f64;
                let b = (e + bound * q) as f64 / p as f64;
                lo = lo.max(a.min(b).floor() as i64 - 1);
                hi = hi.min(a.max(b).ceil() as i64 + 1);
            }
            if lo > hi {
                continue;
            }
            let mut s = lo + (s0 - lo).rem_euclid(q);
            while s <= hi {
                let num = p * s - e;
                debug_assert_eq!(num % q, 0);
                let r = num / q;
                if r.abs() <= bound {
                    out.push((r, s));
                }
                s += q;
            }
        }
    }

    /// Breadth-first distances from `source` to each of `targets`.
    /// `None` marks a slope outside the box or unreachable inside it.
    pub fn distances(&self, source: &Slope, targets: &[Slope]) -> Vec<Option<u32>> {
        let Some(src) = self.index(source) else {
            return vec![None; targets.len()];
        };
        let want: Vec<Option<u32>> = targets.iter().map(|t| self.index(t)).collect();
        let mut pending = vec![false; self.offsets.len() - 1];
        let mut remaining = 0usize;
        for &w in want.iter().flatten() {
            if !pending[w as usize] {
                pending[w as usize] = true;
                remaining += 1;
            }
        }
        let mut dist = vec![UNSEEN; self.offsets.len() - 1];
        let mut queue = VecDeque::new();
        dist[src as usize] = 0;
        queue.push_back(src);
        while let Some(v) = queue.pop_front() {
            if pending[v as usize] {
                pending[v as usize] = false;
                remaining -= 1;
            }
            if remaining == 0 {
                break;
            }
            let dv = dist[v as usize];
            let (a, b) = (
                self.offsets[v as usize] as usize,
                self.offsets[v as usize + 1] as usize,
            );
            for &w in &self.targets[a..b] {
                if dist[w as usize] == UNSEEN {
                    dist[w as usize] = dv + 1;
                    queue.push_back(w);
                }
            }
        }
        want.iter()
            .map(|w| {
                let d = dist[(*w)? as usize];
                (d != UNSEEN).then_some(u32::from(d))
            })
            .collect()
    }
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let e = a.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

/// Breadth-first distance from `s` to `t` among slopes with `|p|, q`
/// bounded by `denom_bound`.
pub fn bfs_oracle(s: &Slope, t: &Slope, denom_bound: u32) -> Option<u32> {
    FareyBall::new(denom_bound).distances(s, std::slice::from_ref(t))[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64) -> Slope {
        Slope::reduce(p, q).unwrap()
    }

    #[test]
    fn adjacency_is_symmetric_and_exact() {
        let ball = FareyBall::new(9);
        let mut edges = std::collections::HashSet::new();
        for cell in 0..ball.offsets.len() - 1 {
            let (p, q) = FareyBall::decode(9, cell);
            if !FareyBall::is_vertex(p, q) {
                continue;
            }
            let (a, b) = (ball.offsets[cell] as usize, ball.offsets[cell + 1] as usize);
            for &w in &ball.targets[a..b] {
                let (r, t) = FareyBall::decode(9, w as usize);
                assert_eq!((p * t - q * r).abs(), 1, "{p}/{q} ~ {r}/{t}");
                edges.insert((cell as u32, w));
            }
        }
        for &(u, v) in &edges {
            assert!(edges.contains(&(v, u)));
        }
        // Brute-force edge count.
        let verts: Vec<(i64, i64)> = (0..ball.offsets.len() - 1)
            .map(|c| FareyBall::decode(9, c))
            .filter(|&(p, q)| FareyBall::is_vertex(p, q))
            .collect();
        let mut brute = 0;
        for (i, &(p, q)) in verts.iter().enumerate() {
            for &(r, t) in &verts[i + 1..] {
                if (p * t - q * r).abs() == 1 {
                    brute += 1;
                }
            }
        }
        assert_eq!(ball.edge_count(), brute);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(bfs_oracle(&Slope::infinity(), &s(2, 1), 10), Some(1));
        assert_eq!(bfs_oracle(&Slope::infinity(), &s(1, 2), 10), Some(2));
        assert_eq!(bfs_oracle(&s(3, 7), &s(3, 7), 10), Some(0));
        assert_eq!(bfs_oracle(&s(0, 1), &s(5, 8), 4), None);
    }
}
