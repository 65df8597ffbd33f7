use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::distribution::StepDistribution;
use crate::error::{Error, Result};
use crate::torus::GroupElement;

/// A finite sample path `w_0 = 1, w_k = w_{k-1} m_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkPath {
    pub seed: u64,
    pub increments: Vec<GroupElement>,
    pub positions: Vec<GroupElement>,
}

impl WalkPath {
    /// Builds the positions from the increments.
    pub fn from_increments(seed: u64, increments: Vec<GroupElement>) -> WalkPath {
        let mut positions = Vec::with_capacity(increments.len() + 1);
        positions.push(GroupElement::identity());
        for m in &increments {
            let next = positions.last().expect("non-empty") * m;
            positions.push(next);
        }
        WalkPath {
            seed,
            increments,
            positions,
        }
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    pub fn endpoint(&self) -> &GroupElement {
        self.positions
            .last()
            .expect("positions start at the identity")
    }
}

/// Atom indices of `n` independent draws from `mu`, from the generator
/// seeded with `seed`.
pub fn sample_indices(mu: &StepDistribution, n: usize, seed: u64) -> Vec<usize> {
    let sampler = mu.sampler();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sampler.sample(&mut rng)).collect()
}

/// `n` steps of the walk driven by `mu`. A pure function of its inputs.
pub fn sample_path(mu: &StepDistribution, n: usize, seed: u64) -> WalkPath {
    let increments = sample_indices(mu, n, seed)
        .into_iter()
        .map(|i| mu.atoms()[i].0.clone())
        .collect();
    WalkPath::from_increments(seed, increments)
}

/// The Bernoulli shift: positions `w_1^-1 w_{k+1}`.
pub fn shift(path: &WalkPath) -> Result<WalkPath> {
    if path.is_empty() {
        return Err(Error::EmptyPath);
    }
    let back = path.positions[1].inverse();
    Ok(WalkPath {
        seed: path.seed,
        increments: path.increments[1..].to_vec(),
        positions: path.positions[1..].iter().map(|w| &back * w).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_of_two_steps() {
        let (g, h) = (GroupElement::l(), GroupElement::r());
        let p = WalkPath::from_increments(0, vec![g.clone(), h.clone()]);
        assert_eq!(
            p.positions,
            vec![GroupElement::identity(), g.clone(), &g * &h]
        );
        let s = shift(&p).unwrap();
        assert_eq!(s.positions, vec![GroupElement::identity(), h]);
        assert!(shift(&shift(&s).unwrap()).is_err());
    }

    #[test]
    fn zero_steps() {
        let p = sample_path(&StepDistribution::uniform_lr(), 0, 5);
        assert_eq!(p.positions, vec![GroupElement::identity()]);
    }
}
