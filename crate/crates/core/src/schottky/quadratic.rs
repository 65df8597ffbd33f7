use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Sign of `alpha + beta sqrt(d)` for a non-square `d > 0`.
pub(crate) fn sign_surd(alpha: &BigInt, beta: &BigInt, d: &BigInt) -> Ordering {
    let (sa, sb) = (alpha.sign(), beta.sign());
    use num_bigint::Sign::*;
    match (sa, sb) {
        (NoSign, NoSign) => Ordering::Equal,
        (Plus | NoSign, Plus | NoSign) => Ordering::Greater,
        (Minus | NoSign, Minus | NoSign) => Ordering::Less,
        _ => {
            let lhs = alpha * alpha;
            let rhs = beta * beta * d;
            // The term with the larger square decides.
            let alpha_wins = lhs > rhs;
            match (alpha_wins, sa) {
                (true, Plus) | (false, Minus) => Ordering::Greater,
                _ => Ordering::Less,
            }
        }
    }
}

/// The real quadratic irrational `(p + sqrt(d)) / q`, normalised so that
/// `q` divides `d - p^2`; `d` is positive and not a square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticRoot {
    #[serde(with = "crate::schottky::bigint_string")]
    pub p: BigInt,
    #[serde(with = "crate::schottky::bigint_string")]
    pub q: BigInt,
    #[serde(with = "crate::schottky::bigint_string")]
    pub d: BigInt,
}

impl QuadraticRoot {
    pub fn new(p: BigInt, q: BigInt, d: BigInt) -> QuadraticRoot {
        assert!(!q.is_zero() && d.is_positive());
        assert!((&d - &p * &p).is_multiple_of(&q), "q must divide d - p^2");
        assert!(&d.sqrt() * &d.sqrt() != d, "d must not be a square");
        QuadraticRoot { p, q, d }
    }

    pub fn to_f64(&self) -> f64 {
        (self.p.to_f64().unwrap_or(f64::NAN) + self.d.to_f64().unwrap_or(f64::NAN).sqrt())
            / self.q.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact comparison of this number with a rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        // (p + sqrt d)/q - u/v has the sign of (p v - u q + v sqrt d) q.
        let (u, v) = (r.numer(), r.denom());
        let s = sign_surd(&(&self.p * v - u * &self.q), v, &self.d);
        if self.q.is_negative() {
            s.reverse()
        } else {
            s
        }
    }

    /// Partial quotients of the continued fraction.
    pub fn partial_quotients(&self, count: usize) -> Vec<BigInt> {
        let s = self.d.sqrt();
        let (mut p, mut q) = (self.p.clone(), self.q.clone());
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let a = if q.is_positive() {
                (&p + &s).div_floor(&q)
            } else {
                -((&p + &s).div_floor(&-&q) + BigInt::one())
            };
            p = &a * &q - &p;
            q = (&self.d - &p * &p) / &q;
            out.push(a);
        }
        out
    }

    /// Convergents `h_k / k_k` for `k < count`; consecutive ones lie on
    /// opposite sides of the number.
    pub fn convergents(&self, count: usize) -> Vec<BigRational> {
        let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
        let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
        self.partial_quotients(count)
            .into_iter()
            .map(|a| {
                let h = &a * &h1 + &h0;
                let k = &a * &k1 + &k0;
                (h0, h1) = (h1.clone(), h.clone());
                (k0, k1) = (k1.clone(), k.clone());
                BigRational::new(h, k)
            })
            .collect()
    }
}
