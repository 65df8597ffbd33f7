use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A vertex of the Farey graph: an essential simple closed curve on the
/// torus, written as a reduced fraction `p/q` with `q >= 0`. The slope
/// `1/0` is the point at infinity and serves as the basepoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    p: BigInt,
    q: BigInt,
}

impl Slope {
    /// Canonical representative of the projective class of `(p, q)`.
    pub fn reduce(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Slope> {
        let (mut p, mut q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(Error::NotASlope);
        }
        let g = p.gcd(&q);
        p /= &g;
        q /= &g;
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    /// Builds a slope from components already known to be coprime and
    /// not both zero; only the sign is normalised.
    pub(crate) fn from_coprime(p: BigInt, q: BigInt) -> Slope {
        debug_assert!(p.gcd(&q).is_one());
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            Slope { p: -p, q: -q }
        } else {
            Slope { p, q }
        }
    }

    pub fn infinity() -> Slope {
        Slope {
            p: BigInt::one(),
            q: BigInt::zero(),
        }
    }

    pub fn integer(n: impl Into<BigInt>) -> Slope {
        Slope {
            p: n.into(),
            q: BigInt::one(),
        }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn is_infinity(&self) -> bool {
        self.q.is_zero()
    }

    /// `None` for the slope at infinity.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_infinity() {
            None
        } else {
            Some(BigRational::new(self.p.clone(), self.q.clone()))
        }
    }

    /// Geometric intersection number `|p q' - q p'|` of the two curves.
    pub fn intersection_number(&self, other: &Slope) -> BigInt {
        (&self.p * &other.q - &self.q * &other.p).abs()
    }

    /// Farey adjacency: the curves meet exactly once.
    pub fn is_adjacent(&self, other: &Slope) -> bool {
        self.intersection_number(other).is_one()
    }

    /// Farey sum `(p + p') / (q + q')` of two adjacent slopes.
    pub(crate) fn mediant(&self, other: &Slope) -> Slope {
        Slope::from_coprime(&self.p + &other.p, &self.q + &other.q)
    }
}

/// Canonical slope for `(p, q)`.
pub fn reduce(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Slope> {
    Slope::reduce(p, q)
}

/// Intersection number of the curves with slopes `s` and `t`.
pub fn intersection_number(s: &Slope, t: &Slope) -> BigInt {
    s.intersection_number(t)
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Slope> {
        let bad = || Error::ParseSlope(s.to_string());
        let t = s.trim();
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (t, "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        Slope::reduce(p, q).map_err(|_| bad())
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
