//! Exact coefficient arithmetic.
//!
//! The coefficient field is a tower of algebraic extensions of the rationals,
//! optionally with free transcendental parameters adjoined ([`FieldScalar`]).
//! On top of it sit multivariate Laurent polynomials ([`LaurentPoly`]) in the
//! torsion variables and their fractions ([`RatFunc`]).

mod cyclotomic;
pub mod expr;
pub mod laurent;
pub mod matrix;
pub mod ratfunc;
pub(crate) mod rational;
pub mod scalar;
pub mod tower;

use std::fmt;

pub use cyclotomic::{cyclotomic_polynomial, UniPoly};
pub use laurent::{LaurentPoly, Monomial, Substitution, UnitClass};
pub use matrix::Matrix;
pub use ratfunc::RatFunc;
pub use rational::Rational;
pub use scalar::FieldScalar;
pub use tower::{FieldTower, TowerNum};

/// Commutative ring with unit.
///
/// Elements carry whatever context they need (the field tower, the variable
/// set), so `zero_like`/`one_like` build constants from an existing value.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn is_one(&self) -> bool {
        self.sub(&self.one_like()).is_zero()
    }

    fn from_i64_like(&self, n: i64) -> Self {
        let one = self.one_like();
        let mut acc = self.zero_like();
        let mut base = one;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&base);
            }
            base = base.add(&base);
            k >>= 1;
        }
        if n < 0 {
            acc.neg()
        } else {
            acc
        }
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Integral domain with a computable exact quotient.
pub trait Domain: Ring {
    /// `Some(q)` with `self = q * divisor`, `None` when the quotient does not exist.
    fn divide_exact(&self, divisor: &Self) -> Option<Self>;

    /// Whether Bareiss-style elimination (one exact division per step) is
    /// cheap for this ring; otherwise division-free algorithms are used.
    fn prefers_exact_division(&self) -> bool {
        true
    }
}

/// Field, together with a fraction-free representation over a domain.
pub trait Field: Domain {
    type Integral: Domain;

    fn inv(&self) -> Option<Self>;

    /// `(numerator, denominator)` over the integral ring.
    fn split_fraction(&self) -> (Self::Integral, Self::Integral);

    fn from_integral(x: &Self::Integral) -> Self;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|inv| self.mul(&inv))
    }

    fn pow_i(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow_u(e as u64))
        } else {
            self.inv().map(|inv| inv.pow_u(e.unsigned_abs()))
        }
    }
}
