use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::torus::{relative_length, GroupElement, WordMetric, FAREY_DISPLACEMENT};

use super::distribution::StepDistribution;

/// Letters of a free basis: code `2i` is generator `i`, `2i + 1` its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeBasis {
    generators: Vec<GroupElement>,
    codes: HashMap<GroupElement, u32>,
}

impl FreeBasis {
    /// The caller asserts that `generators` freely generate the subgroup
    /// they span (for instance the Sanov pair `L^2, R^2`); reduced-word
    /// length is only a metric under that hypothesis.
    pub fn new(generators: Vec<GroupElement>) -> Result<FreeBasis> {
        let mut codes = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            for (code, h) in [(2 * i as u32, g.clone()), (2 * i as u32 + 1, g.inverse())] {
                if h.is_identity() || codes.insert(h, code).is_some() {
                    return Err(Error::InvalidArgument(format!(
                        "generator {g} repeats a letter of the basis"
                    )));
                }
            }
        }
        Ok(FreeBasis { generators, codes })
    }

    pub fn sanov() -> FreeBasis {
        FreeBasis::new(StepDistribution::sanov_generators().to_vec()).expect("distinct letters")
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn code(&self, g: &GroupElement) -> Option<u32> {
        self.codes.get(g).copied()
    }

    fn code_or_err(&self, g: &GroupElement) -> Result<u32> {
        self.code(g)
            .ok_or_else(|| Error::InvalidArgument(format!("{g} is not a letter of the free basis")))
    }
}

/// Free reduction of a word of letter codes.
#[derive(Clone, Debug, Default)]
pub struct ReducedWord {
    stack: Vec<u32>,
}

impl ReducedWord {
    pub fn push(&mut self, code: u32) {
        if self.stack.last() == Some(&(code ^ 1)) {
            self.stack.pop();
        } else {
            self.stack.push(code);
        }
    }

    pub fn len(&self) -> usize {
        self.stack.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stack.is_empty()
    }
}

/// How the length `|w|` of a walk position is measured.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Metric {
    /// `d(1/0, w(1/0))` in the Farey graph.
    FareyDisplacement,
    /// Length of the freely reduced word in a free basis; the increments
    /// must be basis letters.
    ReducedWord(FreeBasis),
    /// Word length in `L, R` and their inverses, searched up to the radius.
    Word { max_radius: usize },
}

impl Metric {
    pub fn label(&self) -> &'static str {
        match self {
            Metric::FareyDisplacement => FAREY_DISPLACEMENT,
            Metric::ReducedWord(_) => "reduced-word",
            Metric::Word { .. } => "word",
        }
    }

    /// Length of the product of `word`. Only the reduced-word metric looks
    /// at the letters themselves.
    pub fn word_length(&self, word: &[GroupElement]) -> Result<u64> {
        match self {
            Metric::ReducedWord(basis) => {
                let mut r = ReducedWord::default();
                for g in word {
                    r.push(basis.code_or_err(g)?);
                }
                Ok(r.len() as u64)
            }
            _ => {
                let product = word
                    .iter()
                    .fold(GroupElement::identity(), |acc, g| &acc * g);
                self.element_length(&product)
            }
        }
    }

    /// Length of an element; unavailable for the reduced-word metric,
    /// which needs the word.
    pub fn element_length(&self, g: &GroupElement) -> Result<u64> {
        match self {
            Metric::FareyDisplacement => Ok(relative_length(g)),
            Metric::Word { max_radius } => Ok(WordMetric::standard(*max_radius).length(g)? as u64),
            Metric::ReducedWord(_) => Err(Error::InvalidArgument(
                "reduced-word length is defined on words, not elements".into(),
            )),
        }
    }

    /// Incremental length tracker for walks driven by `mu`.
    pub fn tracker(&self, mu: &StepDistribution) -> Result<Tracker> {
        Ok(match self {
            Metric::FareyDisplacement => Tracker::Farey(GroupElement::identity()),
            Metric::ReducedWord(basis) => Tracker::Reduced {
                codes: mu
                    .atoms()
                    .iter()
                    .map(|(g, _)| basis.code_or_err(g))
                    .collect::<Result<_>>()?,
                word: ReducedWord::default(),
            },
            Metric::Word { max_radius } => Tracker::Word {
                position: GroupElement::identity(),
                metric: Box::new(WordMetric::standard(*max_radius)),
            },
        })
    }
}

/// Follows a walk one atom at a time and reports `|w_k|` on demand.
pub enum Tracker {
    Farey(GroupElement),
    Reduced {
        codes: Vec<u32>,
        word: ReducedWord,
    },
    Word {
        position: GroupElement,
        metric: Box<WordMetric>,
    },
}

impl Tracker {
    pub fn step(&mut self, atom: usize, element: &GroupElement) {
        match self {
            Tracker::Farey(w) => *w = &*w * element,
            Tracker::Reduced { codes, word } => word.push(codes[atom]),
            Tracker::Word { position, .. } => *position = &*position * element,
        }
    }

    pub fn length(&mut self) -> Result<u64> {
        match self {
            Tracker::Farey(w) => Ok(relative_length(w)),
            Tracker::Reduced { word, .. } => Ok(word.len() as u64),
            Tracker::Word { position, metric } => Ok(metric.length(position)? as u64),
        }
    }
}
