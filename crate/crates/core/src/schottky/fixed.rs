use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::quadratic::{sign_surd, QuadraticRoot};
use crate::error::{Error, Result};
use crate::torus::GroupElement;

/// `|trace| > 2`: the torus mapping classes that are pseudo-Anosov.
pub fn is_hyperbolic(g: &GroupElement) -> bool {
    g.trace().abs() > BigInt::from(2)
}

fn require_hyperbolic(g: &GroupElement) -> Result<()> {
    if is_hyperbolic(g) {
        Ok(())
    } else {
        Err(Error::NotHyperbolic {
            trace: g.trace().to_string(),
        })
    }
}

/// Fixed slopes of a hyperbolic element: the roots of
/// `A x^2 + B x + C`, a primitive multiple of `c x^2 + (d - a) x - b`
/// with `A > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointData {
    #[serde(with = "crate::schottky::bigint_string")]
    pub qa: BigInt,
    #[serde(with = "crate::schottky::bigint_string")]
    pub qb: BigInt,
    #[serde(with = "crate::schottky::bigint_string")]
    pub qc: BigInt,
    #[serde(with = "crate::schottky::bigint_string")]
    pub discriminant: BigInt,
    /// `lambda^+`.
    pub attracting: QuadraticRoot,
    /// `lambda^-`.
    pub repelling: QuadraticRoot,
}

/// Primitive form with positive leading coefficient.
pub(crate) fn normalise(a: BigInt, b: BigInt, c: BigInt) -> (BigInt, BigInt, BigInt) {
    let g = a.gcd(&b).gcd(&c);
    let g = if a.is_negative() { -g } else { g };
    (a / &g, b / &g, c / &g)
}

pub fn fixed_points(g: &GroupElement) -> Result<FixedPointData> {
    require_hyperbolic(g)?;
    let (qa, qb, qc) = normalise(g.c().clone(), g.d() - g.a(), -g.b().clone());
    let disc = &qb * &qb - BigInt::from(4) * &qa * &qc;
    // Roots (-B + sqrt D) / 2A and (B + sqrt D) / -2A.
    let plus = QuadraticRoot::new(-qb.clone(), BigInt::from(2) * &qa, disc.clone());
    let minus = QuadraticRoot::new(qb.clone(), BigInt::from(-2) * &qa, disc.clone());
    let (attracting, repelling) = if expands_derivative(g, &plus) {
        (minus, plus)
    } else {
        (plus, minus)
    };
    Ok(FixedPointData {
        qa,
        qb,
        qc,
        discriminant: disc,
        attracting,
        repelling,
    })
}

/// Whether `|c x + d| < 1` at the fixed point `x`, i.e. the derivative
/// `1 / (c x + d)^2` of the Mobius map exceeds one there.
fn expands_derivative(g: &GroupElement, x: &QuadraticRoot) -> bool {
    // c x + d = (c p + d q + c sqrt D) / q.
    let alpha = g.c() * &x.p + g.d() * &x.q;
    let beta = g.c().clone();
    let qa = x.q.abs();
    let below = sign_surd(&(&alpha - &qa), &beta, &x.d) == Ordering::Less;
    let above = sign_surd(&(&alpha + &qa), &beta, &x.d) == Ordering::Greater;
    below && above
}

/// `true` iff the fixed-point sets are disjoint.
pub fn independent(f: &GroupElement, g: &GroupElement) -> Result<bool> {
    let (p, q) = (fixed_points(f)?, fixed_points(g)?);
    let proportional = p.qa == q.qa && p.qb == q.qb && p.qc == q.qc;
    Ok(!proportional && !resultant(&p, &q).is_zero())
}

/// Resultant of the two fixed-point quadratics.
pub fn resultant(p: &FixedPointData, q: &FixedPointData) -> BigInt {
    let ac = &p.qa * &q.qc - &q.qa * &p.qc;
    let ab = &p.qa * &q.qb - &q.qa * &p.qb;
    let bc = &p.qb * &q.qc - &q.qb * &p.qc;
    &ac * &ac - ab * bc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        assert!(is_hyperbolic(&GroupElement::from_i64([[2, 1], [1, 1]])));
        assert!(!is_hyperbolic(&GroupElement::r()));
        assert!(!is_hyperbolic(&GroupElement::from_i64([[0, -1], [1, 0]])));
        assert!(fixed_points(&GroupElement::r()).is_err());
    }

    #[test]
    fn cat_map() {
        let a = GroupElement::from_i64([[2, 1], [1, 1]]);
        let f = fixed_points(&a).unwrap();
        assert_eq!((f.qa, f.qb, f.qc), (1.into(), (-1).into(), (-1).into()));
        // Expanding eigenvector direction: the golden ratio attracts.
        assert!((f.attracting.to_f64() - 1.618_033_988_749_895).abs() < 1e-12);
        assert!((f.repelling.to_f64() + 0.618_033_988_749_895).abs() < 1e-12);
        let inv = fixed_points(&a.inverse()).unwrap();
        assert_eq!(inv.attracting, f.repelling);
    }
}
