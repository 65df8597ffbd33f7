use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::slope::Slope;
use crate::error::{Error, Result};

/// A mapping class of the torus: a matrix `[a b; c d]` in `SL(2, Z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl GroupElement {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<GroupElement> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        if !(&a * &d - &b * &c).is_one() {
            return Err(Error::NotUnimodular {
                a: a.to_string(),
                b: b.to_string(),
                c: c.to_string(),
                d: d.to_string(),
            });
        }
        Ok(GroupElement { a, b, c, d })
    }

    /// Panics if the determinant is not 1. Meant for literal constants.
    pub fn from_i64(m: [[i64; 2]; 2]) -> GroupElement {
        GroupElement::new(m[0][0], m[0][1], m[1][0], m[1][1]).expect("determinant must be 1")
    }

    pub fn identity() -> GroupElement {
        GroupElement::from_i64([[1, 0], [0, 1]])
    }

    /// `L = [1 0; 1 1]`.
    pub fn l() -> GroupElement {
        GroupElement::from_i64([[1, 0], [1, 1]])
    }

    /// `R = [1 1; 0 1]`; fixes the basepoint slope `1/0`.
    pub fn r() -> GroupElement {
        GroupElement::from_i64([[1, 1], [0, 1]])
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    /// `self^k` for any integer `k`, by repeated squaring.
    pub fn pow(&self, k: i64) -> GroupElement {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = GroupElement::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Mobius action on slopes, `(p, q) -> (a p + b q, c p + d q)`.
    pub fn act(&self, s: &Slope) -> Slope {
        let p = &self.a * s.p() + &self.b * s.q();
        let q = &self.c * s.p() + &self.d * s.q();
        // Unimodular maps send primitive vectors to primitive vectors.
        Slope::from_coprime(p, q)
    }

    /// Image of the basepoint `1/0`, i.e. the slope `a/c`.
    pub fn basepoint_image(&self) -> Slope {
        Slope::from_coprime(self.a.clone(), self.c.clone())
    }

    /// Some element sending `1/0` to `s`.
    pub fn sending_infinity_to(s: &Slope) -> GroupElement {
        // Need p d - b q = 1.
        let (p, q) = (s.p(), s.q());
        let e = p.extended_gcd(q);
        debug_assert!(e.gcd.is_one());
        // e.x * p + e.y * q = 1, so d = e.x, b = -e.y.
        GroupElement {
            a: p.clone(),
            b: -e.y,
            c: q.clone(),
            d: e.x,
        }
    }

    /// Largest absolute entry, as a bit count.
    pub fn bits(&self) -> u64 {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|x| x.bits())
            .max()
            .unwrap_or(0)
    }

    /// Entries bounded by `bound` in absolute value.
    pub fn entries_within(&self, bound: i64) -> bool {
        let bound = BigInt::from(bound);
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .all(|x| x.abs() <= bound)
    }
}

/// Mobius action of `g` on `s`.
pub fn mobius(g: &GroupElement, s: &Slope) -> Slope {
    g.act(s)
}

impl Mul for &GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: &GroupElement) -> GroupElement {
        GroupElement {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: GroupElement) -> GroupElement {
        &self * &rhs
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupElement> {
        let bad = || Error::ParseMatrix(s.to_string());
        let cleaned: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '[' && *c != ']')
            .collect();
        let entries = cleaned
            .split(',')
            .map(|t| t.parse::<BigInt>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let opens = s.chars().filter(|&c| c == '[').count();
        let closes = s.chars().filter(|&c| c == ']').count();
        if entries.len() != 4 || opens != 3 || closes != 3 {
            return Err(bad());
        }
        let mut it = entries.into_iter();
        let (a, b, c, d) = (
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        );
        GroupElement::new(a, b, c, d)
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
