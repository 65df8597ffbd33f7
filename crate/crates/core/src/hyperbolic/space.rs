use std::collections::VecDeque;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A finite connected graph with unit edge lengths, viewed as a metric
/// space on its vertices. Vertex 0 is the basepoint.
///
/// All-pairs distances and canonical geodesics are computed once at
/// construction. The canonical geodesic from `x` to `y` follows the
/// breadth-first tree rooted at `x`, in which each vertex's parent is its
/// smallest-index neighbour one step closer to `x`.
#[derive(Clone, Debug)]
pub struct FiniteSpace {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    dist: Vec<u32>,
    parent: Vec<u32>,
    diameter: u32,
}

impl FiniteSpace {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<FiniteSpace> {
        if n == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        let mut adj = vec![Vec::new(); n];
        let mut clean = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !adj[e.0].contains(&e.1) {
                adj[e.0].push(e.1);
                adj[e.1].push(e.0);
                clean.push(e);
            }
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        clean.sort_unstable();

        let mut dist = vec![u32::MAX; n * n];
        let mut parent = vec![u32::MAX; n * n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            let row = s * n;
            dist[row + s] = 0;
            parent[row + s] = s as u32;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                // Neighbours are sorted, so the first discoverer of a vertex
                // is not necessarily its smallest-index parent; fix that below.
                for &w in &adj[v] {
                    if dist[row + w] == u32::MAX {
                        dist[row + w] = dist[row + v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            for v in 0..n {
                if v == s {
                    continue;
                }
                if dist[row + v] == u32::MAX {
                    return Err(Error::InvalidGraph(format!(
                        "disconnected: no path from {s} to {v}"
                    )));
                }
                let want = dist[row + v] - 1;
                let p = adj[v]
                    .iter()
                    .copied()
                    .find(|&u| dist[row + u] == want)
                    .expect("bfs layer");
                parent[row + v] = p as u32;
            }
        }
        let diameter = dist.iter().copied().max().unwrap_or(0);
        Ok(FiniteSpace {
            n,
            edges: clean,
            adj,
            dist,
            parent,
            diameter,
        })
    }

    /// Parses the edge-list format: a header line `n m`, then `m` lines
    /// `u v` with 0-based vertices. Blank lines and `#` comments are
    /// ignored.
    pub fn from_edge_list(text: &str) -> Result<FiniteSpace> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidGraph("missing header line".into()))?;
        let nums = parse_pair(header)?;
        let (n, m) = nums;
        let mut edges = Vec::with_capacity(m);
        for (i, line) in lines.enumerate() {
            if i >= m {
                return Err(Error::InvalidGraph(format!(
                    "more than the declared {m} edges"
                )));
            }
            edges.push(parse_pair(line)?);
        }
        if edges.len() != m {
            return Err(Error::InvalidGraph(format!(
                "declared {m} edges, found {}",
                edges.len()
            )));
        }
        FiniteSpace::new(n, &edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n
    }

    #[inline]
    pub fn d(&self, x: usize, y: usize) -> u32 {
        self.dist[x * self.n + y]
    }

    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    /// Canonical geodesic from `x` to `y`, both endpoints included.
    pub fn geodesic(&self, x: usize, y: usize) -> Vec<usize> {
        let row = x * self.n;
        let mut path = Vec::with_capacity(self.d(x, y) as usize + 1);
        let mut v = y;
        path.push(v);
        while v != x {
            v = self.parent[row + v] as usize;
            path.push(v);
        }
        path.reverse();
        path
    }

    /// `I(x, y)`: vertices lying on some geodesic from `x` to `y`.
    pub fn interval(&self, x: usize, y: usize) -> FixedBitSet {
        let dxy = self.d(x, y);
        let mut out = FixedBitSet::with_capacity(self.n);
        for v in 0..self.n {
            if self.d(x, v) + self.d(v, y) == dxy {
                out.insert(v);
            }
        }
        out
    }

    /// Distance from `v` to the nearest member of `set`.
    pub fn dist_to_set<I: IntoIterator<Item = usize>>(&self, v: usize, set: I) -> Option<u32> {
        set.into_iter().map(|u| self.d(v, u)).min()
    }

    /// Points of `set` nearest to `z`, in increasing order.
    pub fn projection(&self, z: usize, set: &[usize]) -> Result<Vec<usize>> {
        let best = self
            .dist_to_set(z, set.iter().copied())
            .ok_or(Error::EmptySet)?;
        let mut out: Vec<usize> = set
            .iter()
            .copied()
            .filter(|&u| self.d(z, u) == best)
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// The same graph with vertex `v` renamed `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<FiniteSpace> {
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        FiniteSpace::new(self.n, &edges)
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidGraph(format!("expected two non-negative integers, got {line:?}"));
    let mut it = line.split_whitespace();
    let a = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let b = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((a, b))
}

/// Nearest points of `set` to `z`.
pub fn nearest_point_projection(
    space: &FiniteSpace,
    z: usize,
    set: &[usize],
) -> Result<Vec<usize>> {
    if z >= space.len() {
        return Err(Error::VertexOutOfRange {
            vertex: z,
            n: space.len(),
        });
    }
    space.projection(z, set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> FiniteSpace {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FiniteSpace::new(n, &edges).unwrap()
    }

    #[test]
    fn distances_on_a_path() {
        let p = path(11);
        assert_eq!(p.d(0, 10), 10);
        assert_eq!(p.diameter(), 10);
        assert_eq!(p.geodesic(2, 6), vec![2, 3, 4, 5, 6]);
        assert_eq!(p.geodesic(6, 2), vec![6, 5, 4, 3, 2]);
        assert!(p.is_tree());
    }

    #[test]
    fn canonical_geodesic_prefers_small_indices() {
        // Square 0-1-3-2-0: two geodesics from 0 to 3.
        let sq = FiniteSpace::new(4, &[(0, 1), (1, 3), (3, 2), (2, 0)]).unwrap();
        assert_eq!(sq.geodesic(0, 3), vec![0, 1, 3]);
        assert_eq!(sq.geodesic(3, 0), vec![3, 1, 0]);
        let i = sq.interval(0, 3);
        assert_eq!(i.ones().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn projection_examples() {
        let p = path(11);
        let target: Vec<usize> = (7..=10).collect();
        assert_eq!(nearest_point_projection(&p, 3, &target).unwrap(), vec![7]);
        assert_eq!(nearest_point_projection(&p, 8, &target).unwrap(), vec![8]);
        assert_eq!(nearest_point_projection(&p, 3, &[]), Err(Error::EmptySet));
        let c4 = FiniteSpace::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(
            nearest_point_projection(&c4, 0, &[1, 2, 3]).unwrap(),
            vec![1, 3]
        );
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let text = "4 3\n0 1\n1 2\n# comment\n2 3\n";
        let s = FiniteSpace::from_edge_list(text).unwrap();
        assert_eq!(s.d(0, 3), 3);
        assert_eq!(
            FiniteSpace::from_edge_list(&s.to_edge_list())
                .unwrap()
                .edges(),
            s.edges()
        );
        assert!(FiniteSpace::from_edge_list("3 1\n0 1\n").is_err());
        assert!(FiniteSpace::from_edge_list("3 2\n0 1\n").is_err());
        assert!(FiniteSpace::from_edge_list("2 1\n0 5\n").is_err());
        assert!(FiniteSpace::from_edge_list("2 1\n0 x\n").is_err());
        assert!(FiniteSpace::from_edge_list("").is_err());
    }
}
