use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::fixed::{fixed_points, independent, is_hyperbolic};
use super::quadratic::QuadraticRoot;
use crate::error::{Error, Result};
use crate::torus::{GroupElement, Slope};

/// A closed interval `[lo, hi]` of the real line with `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[String; 2]", into = "[String; 2]")]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Interval> {
        if lo >= hi {
            return Err(Error::InvalidArgument(format!(
                "interval [{lo}, {hi}] is empty or degenerate"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains_slope(&self, s: &Slope) -> bool {
        s.to_rational()
            .is_some_and(|x| self.lo <= x && x <= self.hi)
    }

    fn contains_root(&self, x: &QuadraticRoot) -> bool {
        x.cmp_rational(&self.lo) == Ordering::Greater && x.cmp_rational(&self.hi) == Ordering::Less
    }
}

impl TryFrom<[String; 2]> for Interval {
    type Error = String;

    fn try_from(v: [String; 2]) -> std::result::Result<Interval, String> {
        let parse = |s: &str| {
            s.trim()
                .parse::<BigRational>()
                .map_err(|_| format!("{s:?} is not a fraction"))
        };
        Interval::new(parse(&v[0])?, parse(&v[1])?).map_err(|e| e.to_string())
    }
}

impl From<Interval> for [String; 2] {
    fn from(i: Interval) -> [String; 2] {
        [i.lo.to_string(), i.hi.to_string()]
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Ping-pong data on the projective line: `a^p` maps the complement of
/// `A^-` into `A^+`, `a^-p` the complement of `A^+` into `A^-`, and
/// likewise for `b^q` with `B^+`, `B^-`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PingPongCertificate {
    pub a: GroupElement,
    pub b: GroupElement,
    pub p: u32,
    pub q: u32,
    /// `A^+, A^-, B^+, B^-`.
    pub intervals: [Interval; 4],
}

/// Outcome of checking a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub disjoint: bool,
    /// `a^p`, `a^-p`, `b^q`, `b^-q` in that order.
    pub containments: [bool; 4],
}

impl CertificateCheck {
    pub fn valid(&self) -> bool {
        self.disjoint && self.containments.iter().all(|&c| c)
    }
}

/// Order on the projective line with `1/0` above every real.
fn linear_key(s: &Slope) -> (bool, Option<BigRational>) {
    (s.is_infinity(), s.to_rational())
}

/// Compares `x` and `y` by their position read counterclockwise from
/// `from`: reals increasing, then `1/0`, then around again.
fn ordered(from: &Slope, x: &Slope, y: &Slope) -> Ordering {
    let f = linear_key(from);
    let key = |s: &Slope| {
        let k = linear_key(s);
        (k < f, k)
    };
    key(x).cmp(&key(y))
}

fn slope_of(r: &BigRational) -> Slope {
    Slope::reduce(r.numer().clone(), r.denom().clone()).expect("finite rational")
}

/// Whether `g` maps the open complement of `source` into `target`.
pub fn maps_complement_into(g: &GroupElement, source: &Interval, target: &Interval) -> bool {
    // The complement runs counterclockwise from hi to lo, and Mobius maps
    // of determinant one preserve the cyclic order.
    let start = g.act(&slope_of(&source.hi));
    let end = g.act(&slope_of(&source.lo));
    let (lo, hi) = (slope_of(&target.lo), slope_of(&target.hi));
    ordered(&lo, &start, &end) == Ordering::Less && ordered(&lo, &end, &hi) != Ordering::Greater
}

fn pairwise_disjoint(intervals: &[Interval]) -> bool {
    let mut v: Vec<&Interval> = intervals.iter().collect();
    v.sort_by(|x, y| x.lo.cmp(&y.lo));
    v.windows(2).all(|w| w[0].hi < w[1].lo)
}

impl PingPongCertificate {
    /// Exact re-verification.
    pub fn verify(&self) -> CertificateCheck {
        let [ap, am, bp, bm] = &self.intervals;
        let a = self.a.pow(i64::from(self.p));
        let b = self.b.pow(i64::from(self.q));
        CertificateCheck {
            disjoint: pairwise_disjoint(&self.intervals),
            containments: [
                maps_complement_into(&a, am, ap),
                maps_complement_into(&a.inverse(), ap, am),
                maps_complement_into(&b, bm, bp),
                maps_complement_into(&b.inverse(), bp, bm),
            ],
        }
    }

    /// The four generators `a^p, a^-p, b^q, b^-q`.
    pub fn letters(&self) -> [GroupElement; 4] {
        let a = self.a.pow(i64::from(self.p));
        let b = self.b.pow(i64::from(self.q));
        [a.clone(), a.inverse(), b.clone(), b.inverse()]
    }
}

/// One rejected candidate of the search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStep {
    pub p: u32,
    pub q: u32,
    pub depth: usize,
    pub check: CertificateCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchottkySearch {
    pub certificate: Option<PingPongCertificate>,
    pub transcript: Vec<SearchStep>,
}

/// Deepest convergent pair tried around each fixed point.
pub const MAX_DEPTH: usize = 24;

/// Interval between the convergents of depth `k` and `k + 1`.
fn bracket(x: &QuadraticRoot, k: usize) -> Interval {
    let c = x.convergents(k + 2);
    let (u, v) = (c[k].clone(), c[k + 1].clone());
    let iv = if u < v {
        Interval::new(u, v)
    } else {
        Interval::new(v, u)
    }
    .expect("distinct convergents");
    debug_assert!(iv.contains_root(x));
    iv
}

/// Searches `p, q <= max_power` in the order of `(p + q, p)`, and for each
/// pair the convergent brackets of increasing depth around the four fixed
/// points, returning the first exact certificate.
pub fn certify_schottky(
    a: &GroupElement,
    b: &GroupElement,
    max_power: u32,
) -> Result<SchottkySearch> {
    if !is_hyperbolic(a) || !is_hyperbolic(b) {
        let bad = if is_hyperbolic(a) { b } else { a };
        return Err(Error::NotHyperbolic {
            trace: bad.trace().to_string(),
        });
    }
    if !independent(a, b)? {
        return Err(Error::DependentPair);
    }
    let (fa, fb) = (fixed_points(a)?, fixed_points(b)?);
    let roots = [&fa.attracting, &fa.repelling, &fb.attracting, &fb.repelling];
    let brackets: Vec<[Interval; 4]> = (0..MAX_DEPTH)
        .map(|k| roots.map(|x| bracket(x, k)))
        .collect();
    let mut transcript = Vec::new();
    for total in 2..=2 * max_power {
        for p in 1..total.min(max_power + 1) {
            let q = total - p;
            if q == 0 || q > max_power {
                continue;
            }
            for (depth, intervals) in brackets.iter().enumerate() {
                let cert = PingPongCertificate {
                    a: a.clone(),
                    b: b.clone(),
                    p,
                    q,
                    intervals: intervals.clone(),
                };
                let check = cert.verify();
                if check.valid() {
                    return Ok(SchottkySearch {
                        certificate: Some(cert),
                        transcript,
                    });
                }
                transcript.push(SearchStep { p, q, depth, check });
            }
        }
    }
    Ok(SchottkySearch {
        certificate: None,
        transcript,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordFinding {
    /// Letter indices into `a^p, a^-p, b^q, b^-q`.
    pub word: Vec<u8>,
    pub element: GroupElement,
    pub identity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeGroupAudit {
    pub max_len: usize,
    /// Reduced words of each length `1..=max_len`.
    pub words_by_length: Vec<u64>,
    pub identity_words: u64,
    pub non_hyperbolic_words: u64,
    pub counterexamples: Vec<WordFinding>,
}

impl FreeGroupAudit {
    pub fn passed(&self) -> bool {
        self.identity_words == 0 && self.non_hyperbolic_words == 0
    }
}

/// Every non-empty reduced word of length at most `max_len` in the
/// certified powers: it must be a hyperbolic, non-identity element.
pub fn free_group_audit(cert: &PingPongCertificate, max_len: usize) -> FreeGroupAudit {
    let letters = cert.letters();
    let inverse = |i: u8| i ^ 1;
    let mut audit = FreeGroupAudit {
        max_len,
        words_by_length: Vec::new(),
        identity_words: 0,
        non_hyperbolic_words: 0,
        counterexamples: Vec::new(),
    };
    let mut layer: Vec<(Vec<u8>, GroupElement)> = vec![(Vec::new(), GroupElement::identity())];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * 3);
        for (word, g) in &layer {
            for i in 0..4u8 {
                if word.last().is_some_and(|&j| inverse(j) == i) {
                    continue;
                }
                let mut w = word.clone();
                w.push(i);
                next.push((w, g * &letters[usize::from(i)]));
            }
        }
        for (w, g) in &next {
            let identity = g.is_identity();
            let hyperbolic = is_hyperbolic(g);
            audit.identity_words += u64::from(identity);
            audit.non_hyperbolic_words += u64::from(!hyperbolic);
            if (identity || !hyperbolic) && audit.counterexamples.len() < 16 {
                audit.counterexamples.push(WordFinding {
                    word: w.clone(),
                    element: g.clone(),
                    identity,
                });
            }
        }
        audit.words_by_length.push(next.len() as u64);
        layer = next;
    }
    audit
}

/// A certified pair found among products of the support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupWitness {
    pub first_word: Vec<usize>,
    pub second_word: Vec<usize>,
    pub certificate: PingPongCertificate,
}

/// Searches products of at most `max_len` support elements for an
/// independent hyperbolic pair with a ping-pong certificate.
pub fn search_schottky_pair(
    support: &[GroupElement],
    max_len: usize,
    max_power: u32,
) -> Result<Option<SemigroupWitness>> {
    let mut products: Vec<(Vec<usize>, GroupElement)> = Vec::new();
    let mut layer: Vec<(Vec<usize>, GroupElement)> = vec![(Vec::new(), GroupElement::identity())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, g) in &layer {
            for (i, s) in support.iter().enumerate() {
                let mut v = w.clone();
                v.push(i);
                next.push((v, g * s));
            }
        }
        products.extend(next.iter().filter(|(_, g)| is_hyperbolic(g)).cloned());
        layer = next;
    }
    for (i, (wa, a)) in products.iter().enumerate() {
        for (wb, b) in &products[i + 1..] {
            if !independent(a, b)? {
                continue;
            }
            if let Some(certificate) = certify_schottky(a, b, max_power)?.certificate {
                return Ok(Some(SemigroupWitness {
                    first_word: wa.clone(),
                    second_word: wb.clone(),
                    certificate,
                }));
            }
        }
    }
    Ok(None)
}
