use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::torus::GroupElement;

/// A finitely supported probability measure on `SL(2, Z)` with exact
/// rational weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepDistribution {
    atoms: Vec<(GroupElement, BigRational)>,
}

impl StepDistribution {
    /// Merges repeated elements, drops nothing, and insists on positive
    /// weights summing to exactly one.
    pub fn new(atoms: Vec<(GroupElement, BigRational)>) -> Result<StepDistribution> {
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution("no atoms".into()));
        }
        let mut merged: Vec<(GroupElement, BigRational)> = Vec::with_capacity(atoms.len());
        for (g, p) in atoms {
            if !p.is_positive() {
                return Err(Error::InvalidDistribution(format!(
                    "weight {p} of {g} is not positive"
                )));
            }
            match merged.iter_mut().find(|(h, _)| *h == g) {
                Some((_, q)) => *q += p,
                None => merged.push((g, p)),
            }
        }
        let total: BigRational = merged.iter().map(|(_, p)| p.clone()).sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(StepDistribution { atoms: merged })
    }

    /// Equal weights on the given elements.
    pub fn uniform(elements: &[GroupElement]) -> Result<StepDistribution> {
        let w = BigRational::new(BigInt::one(), BigInt::from(elements.len().max(1)));
        StepDistribution::new(elements.iter().map(|g| (g.clone(), w.clone())).collect())
    }

    pub fn point_mass(g: GroupElement) -> StepDistribution {
        StepDistribution {
            atoms: vec![(g, BigRational::one())],
        }
    }

    /// Uniform on `L, L^-1, R, R^-1`.
    pub fn uniform_lr() -> StepDistribution {
        let (l, r) = (GroupElement::l(), GroupElement::r());
        StepDistribution::uniform(&[l.clone(), l.inverse(), r.clone(), r.inverse()])
            .expect("four distinct atoms")
    }

    /// The free generators `a = L^2`, `b = R^2` of the Sanov subgroup.
    pub fn sanov_generators() -> [GroupElement; 2] {
        [GroupElement::l().pow(2), GroupElement::r().pow(2)]
    }

    /// Uniform on `a, a^-1, b, b^-1` for the Sanov pair.
    pub fn sanov() -> StepDistribution {
        let [a, b] = StepDistribution::sanov_generators();
        StepDistribution::uniform(&[a.clone(), a.inverse(), b.clone(), b.inverse()])
            .expect("four distinct atoms")
    }

    /// A preset name (`uniform-LR`, `sanov`, `identity`) or an atom list
    /// `matrix:weight;matrix:weight;...` with rational weights.
    pub fn parse(spec: &str) -> Result<StepDistribution> {
        spec.parse()
    }

    pub fn atoms(&self) -> &[(GroupElement, BigRational)] {
        &self.atoms
    }

    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    pub fn probability(&self, g: &GroupElement) -> BigRational {
        self.atoms
            .iter()
            .find(|(h, _)| h == g)
            .map_or_else(BigRational::zero, |(_, p)| p.clone())
    }

    /// The reflected measure `g -> mu(g^-1)`.
    pub fn reflected(&self) -> StepDistribution {
        StepDistribution {
            atoms: self
                .atoms
                .iter()
                .map(|(g, p)| (g.inverse(), p.clone()))
                .collect(),
        }
    }

    /// Sampler for atom indices.
    pub fn sampler(&self) -> AtomSampler {
        let denom = self
            .atoms
            .iter()
            .fold(BigInt::one(), |acc, (_, p)| acc.lcm(p.denom()));
        let integer: Option<Vec<u64>> = self
            .atoms
            .iter()
            .map(|(_, p)| (p.numer() * (&denom / p.denom())).to_u64())
            .collect();
        let inner = match integer {
            Some(w) if denom.to_u64().is_some() => {
                Weights::Exact(WeightedIndex::new(w).expect("positive weights"))
            }
            _ => Weights::Float(
                WeightedIndex::new(
                    self.atoms
                        .iter()
                        .map(|(_, p)| p.to_f64().unwrap_or(0.0).max(f64::MIN_POSITIVE)),
                )
                .expect("positive weights"),
            ),
        };
        AtomSampler { inner }
    }
}

enum Weights {
    Exact(WeightedIndex<u64>),
    Float(WeightedIndex<f64>),
}

/// Draws atom indices of a [`StepDistribution`]. Exact when the common
/// denominator of the weights fits in 64 bits.
pub struct AtomSampler {
    inner: Weights,
}

impl AtomSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.inner {
            Weights::Exact(w) => w.sample(rng),
            Weights::Float(w) => w.sample(rng),
        }
    }
}

impl fmt::Display for StepDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (g, p)) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{g}:{p}")?;
        }
        Ok(())
    }
}

impl FromStr for StepDistribution {
    type Err = Error;

    fn from_str(spec: &str) -> Result<StepDistribution> {
        match spec.trim() {
            "uniform-LR" => return Ok(StepDistribution::uniform_lr()),
            "sanov" => return Ok(StepDistribution::sanov()),
            "identity" => return Ok(StepDistribution::point_mass(GroupElement::identity())),
            _ => {}
        }
        let mut atoms = Vec::new();
        for part in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (m, w) = part.rsplit_once(':').ok_or_else(|| {
                Error::InvalidDistribution(format!("atom {part:?} is not \"matrix:weight\""))
            })?;
            let g: GroupElement = m.trim().parse()?;
            let p: BigRational = w.trim().parse().map_err(|_| {
                Error::InvalidDistribution(format!("weight {w:?} is not a rational number"))
            })?;
            atoms.push((g, p));
        }
        StepDistribution::new(atoms)
    }
}

impl Serialize for StepDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for StepDistribution {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
