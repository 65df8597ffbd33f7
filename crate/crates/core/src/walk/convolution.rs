use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::distribution::StepDistribution;
use crate::error::{Error, Result};
use crate::torus::{relative_length, GroupElement};

/// Default cap on `(support size)^n`, the number of products formed.
pub const DEFAULT_BUDGET: u128 = 1 << 20;

/// The exact law of `w_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvolutionTable {
    n: usize,
    entries: HashMap<GroupElement, BigRational>,
}

impl ConvolutionTable {
    /// The law of `w_0`.
    pub fn identity() -> ConvolutionTable {
        let mut entries = HashMap::new();
        entries.insert(GroupElement::identity(), BigRational::one());
        ConvolutionTable { n: 0, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, g: &GroupElement) -> BigRational {
        self.entries
            .get(g)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&GroupElement, &BigRational)> {
        self.entries.iter()
    }

    /// Entries ordered by their display form.
    pub fn sorted_entries(&self) -> Vec<(GroupElement, BigRational)> {
        let mut v: Vec<_> = self
            .entries
            .iter()
            .map(|(g, p)| (g.clone(), p.clone()))
            .collect();
        v.sort_by_cached_key(|(g, _)| g.to_string());
        v
    }

    pub fn total(&self) -> BigRational {
        self.entries.values().cloned().sum()
    }

    /// The law of `w_{n+1}`: this table convolved with `mu` on the right.
    pub fn step(&self, mu: &StepDistribution) -> ConvolutionTable {
        let mut entries: HashMap<GroupElement, BigRational> = HashMap::new();
        for (x, px) in &self.entries {
            for (s, ps) in mu.atoms() {
                *entries.entry(x * s).or_insert_with(BigRational::zero) += px * ps;
            }
        }
        ConvolutionTable {
            n: self.n + 1,
            entries,
        }
    }

    /// `E |w_n|` in the Farey displacement.
    pub fn expected_length(&self) -> BigRational {
        self.entries
            .iter()
            .map(|(g, p)| p * BigRational::from_integer(BigInt::from(relative_length(g))))
            .sum()
    }

    /// `mu^(n)(set)` for a membership predicate.
    pub fn mass_where(&self, mut pred: impl FnMut(&GroupElement) -> bool) -> BigRational {
        self.entries
            .iter()
            .filter(|(g, _)| pred(g))
            .map(|(_, p)| p.clone())
            .sum()
    }
}

/// `support^n`, saturating.
pub fn required_budget(mu: &StepDistribution, n: usize) -> u128 {
    let s = mu.support_size() as u128;
    u32::try_from(n)
        .ok()
        .and_then(|n| s.checked_pow(n))
        .unwrap_or(u128::MAX)
}

/// `mu^(n)` within [`DEFAULT_BUDGET`].
pub fn convolution(mu: &StepDistribution, n: usize) -> Result<ConvolutionTable> {
    convolution_with_budget(mu, n, DEFAULT_BUDGET)
}

pub fn convolution_with_budget(
    mu: &StepDistribution,
    n: usize,
    budget: u128,
) -> Result<ConvolutionTable> {
    let required = required_budget(mu, n);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let mut table = ConvolutionTable::identity();
    for _ in 0..n {
        table = table.step(mu);
    }
    Ok(table)
}
