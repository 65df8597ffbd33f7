//! Families of test spaces.

use std::collections::HashSet;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::space::FiniteSpace;
use crate::torus::Slope;

pub fn path_graph(n: usize) -> FiniteSpace {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    FiniteSpace::new(n, &edges).expect("path")
}

pub fn cycle_graph(n: usize) -> FiniteSpace {
    assert!(n >= 3, "cycles need three vertices");
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    FiniteSpace::new(n, &edges).expect("cycle")
}

pub fn complete_graph(n: usize) -> FiniteSpace {
    let edges: Vec<_> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    FiniteSpace::new(n, &edges).expect("complete graph")
}

/// One representative of every isomorphism class of trees with
/// `1..=max_n` vertices.
pub fn all_trees(max_n: usize) -> Vec<FiniteSpace> {
    let mut out = Vec::new();
    if max_n == 0 {
        return out;
    }
    // Parent lists: vertex i > 0 hangs off parent[i - 1] < i.
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for n in 1..=max_n {
        if n > 1 {
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for parents in &layer {
                for v in 0..n - 1 {
                    let mut grown = parents.clone();
                    grown.push(v);
                    if seen.insert(tree_canonical_form(&grown)) {
                        next.push(grown);
                    }
                }
            }
            layer = next;
        }
        for parents in &layer {
            let edges: Vec<_> = parents
                .iter()
                .enumerate()
                .map(|(i, &p)| (p, i + 1))
                .collect();
            out.push(FiniteSpace::new(n, &edges).expect("tree"));
        }
    }
    out
}

/// Isomorphism-invariant encoding of the tree described by a parent list:
/// the smaller of the rooted encodings at its centre or centres.
fn tree_canonical_form(parents: &[usize]) -> String {
    let n = parents.len() + 1;
    let mut adj = vec![Vec::new(); n];
    for (i, &p) in parents.iter().enumerate() {
        adj[p].push(i + 1);
        adj[i + 1].push(p);
    }
    // Strip leaves until one or two vertices remain.
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut leaves: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= leaves.len();
        let mut next = Vec::new();
        for &v in &leaves {
            degree[v] = 0;
        }
        for &v in &leaves {
            for &w in &adj[v] {
                if degree[w] > 0 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        leaves = next;
    }
    leaves
        .iter()
        .map(|&c| rooted_form(&adj, c, usize::MAX))
        .min()
        .expect("a tree has a centre")
}

fn rooted_form(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut children: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| rooted_form(adj, w, v))
        .collect();
    children.sort();
    format!("({})", children.concat())
}

/// A random connected graph on `n` vertices: a random recursive tree under
/// a random labelling, plus each remaining pair as an edge with
/// probability `extra`.
pub fn random_connected<R: Rng>(n: usize, extra: f64, rng: &mut R) -> FiniteSpace {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let mut present = HashSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        present.insert(ordered(labels[i], labels[j]));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present.contains(&(u, v)) && rng.gen_bool(extra) {
                present.insert((u, v));
            }
        }
    }
    let mut edges: Vec<_> = present.into_iter().collect();
    edges.sort_unstable();
    FiniteSpace::new(n, &edges).expect("connected by construction")
}

/// `count` graphs from [`random_connected`] with `n` uniform in `4..=30`
/// and extra-edge probability uniform in `[0, 0.15]`, all drawn from one
/// generator seeded with `seed`.
pub fn random_family(count: usize, seed: u64) -> Vec<FiniteSpace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(4..=30);
            let p = rng.gen_range(0.0..=0.15);
            random_connected(n, p, &mut rng)
        })
        .collect()
}

fn ordered(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// The Farey graph induced on `1/0` and the fractions in `[0, 1]` with
/// denominator at most `max_den`. Vertex 0 is `1/0`; the remaining
/// vertices are in increasing order.
pub fn farey_ball(max_den: u32) -> (FiniteSpace, Vec<Slope>) {
    let max_den = i64::from(max_den.max(1));
    let mut fracs: Vec<(i64, i64)> = (1..=max_den)
        .flat_map(|q| (0..=q).map(move |p| (p, q)))
        .filter(|&(p, q)| p.gcd(&q) == 1)
        .collect();
    fracs.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    let mut verts = vec![(1i64, 0i64)];
    verts.extend(fracs);
    let mut edges = Vec::new();
    for (i, &(p, q)) in verts.iter().enumerate() {
        for (j, &(r, s)) in verts.iter().enumerate().skip(i + 1) {
            if (p * s - q * r).abs() == 1 {
                edges.push((i, j));
            }
        }
    }
    let space = FiniteSpace::new(verts.len(), &edges).expect("Farey ball is connected");
    let slopes = verts
        .into_iter()
        .map(|(p, q)| Slope::reduce(p, q).expect("slope"))
        .collect();
    (space, slopes)
}
