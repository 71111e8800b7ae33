use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::tower::TowerNum;
use crate::error::{Error, Result};

/// Dense univariate polynomial over the rationals, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<BigRational>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.0.is_empty() || other.0.is_empty() {
            return UniPoly(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    /// Quotient and remainder; `None` for a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> Option<(UniPoly, UniPoly)> {
        let dd = d.degree()?;
        let lead = d.0[dd].clone();
        let mut rem = self.0.clone();
        let mut quot = vec![BigRational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = &rem[rem.len() - 1] / &lead;
            for (j, dc) in d.0.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Some((UniPoly::new(quot), UniPoly::new(rem)))
    }

    /// Coefficients as base-field tower numbers (for use as a minimal polynomial).
    pub fn to_tower(&self) -> Vec<TowerNum> {
        self.0.iter().cloned().map(TowerNum::from_rational).collect()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{k}"),
            };
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{abs}{mono}")?;
            }
        }
        Ok(())
    }
}

/// The `m`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(m: u32) -> Result<UniPoly> {
    if m == 0 {
        return Err(Error::InvalidInput("cyclotomic index must be positive".into()));
    }
    let mut xm = vec![BigRational::zero(); m as usize + 1];
    xm[0] = -BigRational::one();
    xm[m as usize] = BigRational::one();
    let mut p = UniPoly::new(xm);
    for d in (1..m).filter(|d| m % d == 0) {
        let (q, r) = p.div_rem(&cyclotomic_polynomial(d)?).expect("nonzero divisor");
        debug_assert!(r.0.is_empty());
        p = q;
    }
    Ok(p)
}
