use std::collections::HashMap;

use super::element::GroupElement;
use crate::error::{Error, Result};

/// Word metric on `SL(2, Z)` for a finite generating set.
///
/// Lengths are found by meeting in the middle: a cached ball of radius
/// `forward_radius` around the identity, and a fresh breadth-first search
/// backwards from the target of depth `max_radius - forward_radius`.
/// The cache belongs to this value; share it across threads only behind
/// a lock or give each worker its own.
pub struct WordMetric {
    gens: Vec<GroupElement>,
    forward_radius: usize,
    max_radius: usize,
    ball: HashMap<GroupElement, usize>,
    frontier: Vec<GroupElement>,
    built_radius: usize,
}

impl WordMetric {
    /// The generating set is closed under inverses before use.
    pub fn new(gens: &[GroupElement], max_radius: usize) -> WordMetric {
        let mut closed: Vec<GroupElement> = Vec::new();
        for g in gens.iter().flat_map(|g| [g.clone(), g.inverse()]) {
            if !g.is_identity() && !closed.contains(&g) {
                closed.push(g);
            }
        }
        let mut ball = HashMap::new();
        ball.insert(GroupElement::identity(), 0);
        WordMetric {
            gens: closed,
            forward_radius: max_radius.div_ceil(2),
            max_radius,
            ball,
            frontier: vec![GroupElement::identity()],
            built_radius: 0,
        }
    }

    /// `{L, R}` and their inverses.
    pub fn standard(max_radius: usize) -> WordMetric {
        WordMetric::new(&[GroupElement::l(), GroupElement::r()], max_radius)
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.gens
    }

    fn grow_to(&mut self, radius: usize) {
        while self.built_radius < radius {
            let mut next = Vec::new();
            for h in &self.frontier {
                for s in &self.gens {
                    let w = h * s;
                    if !self.ball.contains_key(&w) {
                        self.ball.insert(w.clone(), self.built_radius + 1);
                        next.push(w);
                    }
                }
            }
            self.frontier = next;
            self.built_radius += 1;
        }
    }

    /// Length of a shortest word in the generators equal to `g`.
    pub fn length(&mut self, g: &GroupElement) -> Result<usize> {
        if let Some(&d) = self.ball.get(g) {
            return Ok(d);
        }
        self.grow_to(self.forward_radius);
        if let Some(&d) = self.ball.get(g) {
            return Ok(d);
        }
        let back_radius = self.max_radius - self.forward_radius;
        let mut best: Option<usize> = None;
        let mut seen: HashMap<GroupElement, ()> = HashMap::new();
        seen.insert(g.clone(), ());
        let mut layer = vec![g.clone()];
        for j in 1..=back_radius {
            let mut next = Vec::new();
            for w in &layer {
                for s in &self.gens {
                    let v = w * s;
                    if seen.insert(v.clone(), ()).is_some() {
                        continue;
                    }
                    if let Some(&i) = self.ball.get(&v) {
                        best = Some(best.map_or(i + j, |b| b.min(i + j)));
                    }
                    next.push(v);
                }
            }
            if let Some(b) = best {
                // Later layers only add to j.
                if b <= j + 1 {
                    break;
                }
            }
            layer = next;
        }
        best.ok_or(Error::SearchRadiusExceeded {
            radius: self.max_radius,
        })
    }
}

/// Word length of `g` over `gens` (closed under inverses), searching up
/// to `max_radius`.
pub fn word_length(g: &GroupElement, gens: &[GroupElement], max_radius: usize) -> Result<usize> {
    WordMetric::new(gens, max_radius).length(g)
}
