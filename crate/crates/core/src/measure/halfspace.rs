use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schottky::is_hyperbolic;
use crate::torus::{farey_distance, relative_length, GroupElement, Slope};

/// The coarse halfspace `H(a, b; C)` of group elements `g` whose basepoint
/// image is at least as close to `b(1/0)` as to `a(1/0)`, up to `C`:
/// `d(g 1/0, b 1/0) <= d(g 1/0, a 1/0) + C` in the Farey graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfspaceQuery {
    pub anchor: GroupElement,
    pub target: GroupElement,
    pub slack: i64,
}

impl HalfspaceQuery {
    /// `H(1, x; C)`.
    pub fn new(center: GroupElement, slack: i64) -> HalfspaceQuery {
        HalfspaceQuery {
            anchor: GroupElement::identity(),
            target: center,
            slack,
        }
    }

    /// `H(b, a; C)`.
    pub fn reversed(&self) -> HalfspaceQuery {
        HalfspaceQuery {
            anchor: self.target.clone(),
            target: self.anchor.clone(),
            slack: self.slack,
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.contains_slope(&g.basepoint_image())
    }

    pub fn contains_slope(&self, s: &Slope) -> bool {
        let to_target = farey_distance(s, &self.target.basepoint_image()) as i64;
        let to_anchor = farey_distance(s, &self.anchor.basepoint_image()) as i64;
        to_target <= to_anchor + self.slack
    }

    /// `d(a 1/0, b 1/0)`, the relative length of the centre for `H(1, x)`.
    pub fn radius(&self) -> u64 {
        farey_distance(
            &self.anchor.basepoint_image(),
            &self.target.basepoint_image(),
        )
    }
}

/// Halfspaces `H(1, a^{c_i})` with relative lengths at least `spacing`
/// apart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NestedFamily {
    pub direction: GroupElement,
    pub spacing: u64,
    pub exponents: Vec<u32>,
    pub centers: Vec<GroupElement>,
    pub relative_lengths: Vec<u64>,
}

impl NestedFamily {
    pub fn halfspaces(&self) -> Vec<HalfspaceQuery> {
        self.centers
            .iter()
            .map(|x| HalfspaceQuery::new(x.clone(), 0))
            .collect()
    }
}

/// Exponents `c_1 < c_2 < ...` chosen greedily: `c_1` is the least
/// positive exponent with `|a^c| >= 1`, and each next one is the least
/// with `|a^c| >= |a^{c_i}| + spacing`.
pub fn nested_family(direction: &GroupElement, spacing: u64, count: usize) -> Result<NestedFamily> {
    nested_family_from(direction, spacing, count, 1)
}

/// As [`nested_family`], with `c_1` the least exponent reaching relative
/// length `min_length`.
pub fn nested_family_from(
    direction: &GroupElement,
    spacing: u64,
    count: usize,
    min_length: u64,
) -> Result<NestedFamily> {
    if !is_hyperbolic(direction) {
        return Err(Error::NotHyperbolic {
            trace: direction.trace().to_string(),
        });
    }
    if spacing == 0 || count < 2 {
        return Err(Error::InvalidArgument(
            "a nested family needs spacing >= 1 and at least two members".into(),
        ));
    }
    let (mut exponents, mut centers, mut lengths) = (Vec::new(), Vec::new(), Vec::new());
    let mut power = GroupElement::identity();
    let mut c = 0u32;
    let mut need = min_length.max(1);
    while centers.len() < count {
        power = &power * direction;
        c += 1;
        let r = relative_length(&power);
        if r >= need {
            exponents.push(c);
            centers.push(power.clone());
            lengths.push(r);
            need = r + spacing;
        }
    }
    Ok(NestedFamily {
        direction: direction.clone(),
        spacing,
        exponents,
        centers,
        relative_lengths: lengths,
    })
}

/// Every element of word length at most `radius` in `L, R` and inverses.
pub fn word_ball(radius: usize) -> Vec<GroupElement> {
    let (l, r) = (GroupElement::l(), GroupElement::r());
    let gens = [l.clone(), l.inverse(), r.clone(), r.inverse()];
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let mut out = vec![GroupElement::identity()];
    seen.insert(GroupElement::identity());
    let mut frontier = out.clone();
    for _ in 0..radius {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &gens {
                let h = g * s;
                if seen.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestingViolation {
    /// Family index `i`: the element lies in `H_{i+1}` but not in `H_i`.
    pub index: usize,
    pub element: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestingReport {
    pub checked: u64,
    pub violations: u64,
    pub witnesses: Vec<NestingViolation>,
}

/// Checks `H_{i+1} ⊆ H_i` for consecutive members on the given elements.
pub fn nesting_scan(family: &NestedFamily, elements: &[GroupElement]) -> NestingReport {
    let hs = family.halfspaces();
    let mut report = NestingReport {
        checked: 0,
        violations: 0,
        witnesses: Vec::new(),
    };
    let mut slopes: Vec<Slope> = elements.iter().map(|g| g.basepoint_image()).collect();
    slopes.sort();
    slopes.dedup();
    for s in &slopes {
        for i in 0..hs.len() - 1 {
            report.checked += 1;
            if hs[i + 1].contains_slope(s) && !hs[i].contains_slope(s) {
                report.violations += 1;
                if report.witnesses.len() < 16 {
                    report.witnesses.push(NestingViolation {
                        index: i,
                        element: GroupElement::sending_infinity_to(s),
                    });
                }
            }
        }
    }
    report
}
