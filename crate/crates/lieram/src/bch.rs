//! The Campbell-Hausdorff group law on a Lie algebra of class < p,
//! computed as log(exp(x) exp(y)) in the truncated free associative algebra.

use serde::Serialize;

use crate::coeffring::{truncated_exp, truncated_log};
use crate::nilpotentlie::{LieAlgebra, LieElement};

/// An element of the group G(L): the underlying set is L.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub underlying: LieElement,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement {
            underlying: LieElement::default(),
        }
    }

    pub fn inverse(&self, lie: &LieAlgebra) -> Self {
        GroupElement {
            underlying: lie.neg(&self.underlying),
        }
    }

    pub fn compose(&self, lie: &LieAlgebra, other: &GroupElement) -> Self {
        GroupElement {
            underlying: circle(lie, &self.underlying, &other.underlying),
        }
    }
}

/// x o y = log(exp(x) exp(y)), exact because words of length >= p vanish.
pub fn circle(lie: &LieAlgebra, x: &LieElement, y: &LieElement) -> LieElement {
    let fa = &lie.fa;
    let ex = truncated_exp(fa, &lie.to_assoc(x));
    let ey = truncated_exp(fa, &lie.to_assoc(y));
    let z = truncated_log(fa, &fa.mul(&ex, &ey));
    debug_assert!(fa.is_lie(&z));
    lie.from_assoc(&z)
        .expect("Campbell-Hausdorff product is a Lie element")
}

/// e-fold composition of x with itself.
pub fn power(lie: &LieAlgebra, x: &LieElement, e: u64) -> LieElement {
    let mut acc = lie.zero();
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = circle(lie, &acc, &base);
        }
        base = circle(lie, &base, &base);
        e >>= 1;
    }
    acc
}

/// Outcome of the group-law battery on one random triple.
#[derive(Clone, Debug, Default, Serialize)]
pub struct GroupCheck {
    pub associative: bool,
    pub identity: bool,
    pub inverse: bool,
    pub exponent: bool,
    pub lie_valued: bool,
}

impl GroupCheck {
    pub fn all(&self) -> bool {
        self.associative && self.identity && self.inverse && self.exponent && self.lie_valued
    }
}

pub fn check_triple(
    lie: &LieAlgebra,
    x: &LieElement,
    y: &LieElement,
    z: &LieElement,
) -> GroupCheck {
    let xy = circle(lie, x, y);
    let q = lie.ring().zm.q;
    GroupCheck {
        associative: circle(lie, &xy, z) == circle(lie, x, &circle(lie, y, z)),
        identity: circle(lie, x, &lie.zero()) == *x && circle(lie, &lie.zero(), x) == *x,
        inverse: circle(lie, x, &lie.neg(x)).is_zero() && circle(lie, &lie.neg(x), x).is_zero(),
        exponent: power(lie, x, q).is_zero(),
        lie_valued: lie.fa.is_lie(&lie.to_assoc(&xy)),
    }
}
