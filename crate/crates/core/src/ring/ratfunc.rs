//! Fractions of Laurent polynomials.

use std::fmt;
use std::sync::Arc;

use super::laurent::LaurentPoly;
use super::scalar::FieldScalar;
use super::tower::FieldTower;
use super::{Domain, Field, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let den = p.one_like();
        RatFunc { num: p, den }
    }

    pub fn zero(tower: &Arc<FieldTower>, vars: &Arc<Vec<String>>) -> Self {
        Self::from_poly(LaurentPoly::zero(tower, vars))
    }

    pub fn constant(vars: &Arc<Vec<String>>, c: FieldScalar) -> Self {
        Self::from_poly(LaurentPoly::constant(vars, c))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        self.num.vars()
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        self.num.tower()
    }

    /// The Laurent polynomial equal to this fraction, if there is one.
    pub fn as_poly(&self) -> Option<LaurentPoly> {
        self.num.divide_exact(&self.den).ok()
    }

    pub fn map_polys(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Result<Self> {
        Self::new(f(&self.num), f(&self.den))
    }

    /// Best-effort simplification: monomial content, a univariate gcd when
    /// there is one variable, and exact-division probes otherwise.
    fn reduced(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            let one = den.one_like();
            return RatFunc { num, den: one };
        }
        // Move every monomial into the numerator shift.
        let dmin = den.min_exponents();
        let neg: Vec<i32> = dmin.iter().map(|e| -e).collect();
        let mut num = num.shift(&neg);
        let mut den = den.shift(&neg);
        if den.is_monomial() {
            let (m, c) = den.leading_term().map(|(m, c)| (m.0.clone(), c.clone())).unwrap();
            if let Some(inv) = c.inv() {
                let neg: Vec<i32> = m.iter().map(|e| -e).collect();
                return RatFunc { num: num.shift(&neg).scale(&inv), den: den.one_like() };
            }
        }
        if num.nvars() == 1 {
            if let Some(g) = univariate_gcd(&num, &den) {
                if g.as_constant().is_none() {
                    if let (Ok(n), Ok(d)) = (num.divide_exact(&g), den.divide_exact(&g)) {
                        num = n;
                        den = d;
                    }
                }
            }
        } else if let Ok(q) = num.divide_exact(&den) {
            return RatFunc { num: q, den: den.one_like() };
        }
        // Monic denominator.
        if let Some(inv) = den.leading_term().and_then(|(_, c)| c.inv()) {
            if !inv.is_one() {
                num = num.scale(&inv);
                den = den.scale(&inv);
            }
        }
        RatFunc { num, den }
    }

    pub fn format(&self) -> String {
        if self.den.is_one() {
            return self.num.format();
        }
        format!("({})/({})", self.num.format(), self.den.format())
    }
}

fn univariate_gcd(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    let mut x = a.normalized();
    let mut y = b.normalized();
    while !y.is_zero() {
        let (_, r) = x.div_rem_univariate(&y).ok()?;
        x = y;
        y = r;
    }
    Some(x)
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl Ring for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::from_poly(self.num.zero_like())
    }

    fn one_like(&self) -> Self {
        RatFunc::from_poly(self.num.one_like())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::reduced(self.num.add(&other.num), self.den.clone());
        }
        Self::reduced(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_poly(self.num.mul(&other.num));
        }
        Self::reduced(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Domain for RatFunc {
    fn divide_exact(&self, divisor: &Self) -> Option<Self> {
        self.div(divisor)
    }
}

impl Field for RatFunc {
    type Integral = LaurentPoly;

    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(Self::reduced(self.den.clone(), self.num.clone()))
    }

    fn split_fraction(&self) -> (LaurentPoly, LaurentPoly) {
        (self.num.clone(), self.den.clone())
    }

    fn from_integral(x: &LaurentPoly) -> Self {
        RatFunc::from_poly(x.clone())
    }
}
