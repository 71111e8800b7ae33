//! Multivariate Laurent polynomials over [`FieldScalar`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::scalar::FieldScalar;
use super::tower::FieldTower;
use super::{Domain, Field, Ring};
use crate::error::{Error, Result};

/// Exponent vector, ordered graded-lexicographically with `t1 < t2 < ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    fn add(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn sub(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A unit `±t^shift`; `sign` is `None` when only the monomial part is known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitClass {
    pub sign: Option<i32>,
    pub shift: Vec<i32>,
}

impl UnitClass {
    pub fn identity(nvars: usize) -> Self {
        UnitClass { sign: Some(1), shift: vec![0; nvars] }
    }

    pub fn compose(&self, other: &UnitClass) -> UnitClass {
        UnitClass {
            sign: self.sign.zip(other.sign).map(|(a, b)| a * b),
            shift: self.shift.iter().zip(&other.shift).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inverse(&self) -> UnitClass {
        UnitClass { sign: self.sign, shift: self.shift.iter().map(|e| -e).collect() }
    }
}

/// Per-variable images `t_i -> c_i * s^{e_i}` in a (possibly different)
/// set of target variables.
#[derive(Clone, Debug)]
pub struct Substitution {
    target_vars: Arc<Vec<String>>,
    images: Vec<(FieldScalar, Vec<i32>)>,
}

impl Substitution {
    pub fn new(target_vars: Arc<Vec<String>>, images: Vec<(FieldScalar, Vec<i32>)>) -> Result<Self> {
        for (c, e) in &images {
            if c.is_zero() {
                return Err(Error::InvalidSubstitution("substitution target is zero".into()));
            }
            if e.len() != target_vars.len() {
                return Err(Error::InvalidSubstitution("exponent vector has the wrong length".into()));
            }
        }
        Ok(Substitution { target_vars, images })
    }

    /// `t_i -> s^{exps[i]}` with unit coefficients.
    pub fn monomials(tower: &Arc<FieldTower>, target_vars: Arc<Vec<String>>, exps: Vec<Vec<i32>>) -> Result<Self> {
        let one = FieldScalar::one(tower);
        Self::new(target_vars, exps.into_iter().map(|e| (one.clone(), e)).collect())
    }

    /// Evaluation `t_i -> values[i]`; the result has no variables.
    pub fn constants(values: Vec<FieldScalar>) -> Result<Self> {
        Self::new(Arc::new(Vec::new()), values.into_iter().map(|c| (c, Vec::new())).collect())
    }
}

#[derive(Clone, Debug)]
pub struct LaurentPoly {
    tower: Arc<FieldTower>,
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Monomial, FieldScalar>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl LaurentPoly {
    pub fn zero(tower: &Arc<FieldTower>, vars: &Arc<Vec<String>>) -> Self {
        LaurentPoly { tower: tower.clone(), vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Arc<Vec<String>>, c: FieldScalar) -> Self {
        let mut p = Self::zero(c.tower(), vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; vars.len()]), c);
        }
        p
    }

    pub fn one(tower: &Arc<FieldTower>, vars: &Arc<Vec<String>>) -> Self {
        Self::constant(vars, FieldScalar::one(tower))
    }

    pub fn from_i64(tower: &Arc<FieldTower>, vars: &Arc<Vec<String>>, n: i64) -> Self {
        Self::constant(vars, FieldScalar::from_i64(tower, n))
    }

    /// `c * t^exps`.
    pub fn monomial(vars: &Arc<Vec<String>>, c: FieldScalar, exps: Vec<i32>) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(c.tower(), vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(exps), c);
        }
        p
    }

    /// The variable `t_index`.
    pub fn var(tower: &Arc<FieldTower>, vars: &Arc<Vec<String>>, index: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[index] = 1;
        Self::monomial(vars, FieldScalar::one(tower), e)
    }

    pub fn from_terms(
        tower: &Arc<FieldTower>,
        vars: &Arc<Vec<String>>,
        terms: impl IntoIterator<Item = (Vec<i32>, FieldScalar)>,
    ) -> Self {
        let mut p = Self::zero(tower, vars);
        for (e, c) in terms {
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Univariate polynomial with integer coefficients, lowest degree first.
    pub fn from_i64_coeffs(tower: &Arc<FieldTower>, vars: &Arc<Vec<String>>, coeffs: &[i64]) -> Self {
        assert_eq!(vars.len(), 1);
        Self::from_terms(
            tower,
            vars,
            coeffs.iter().enumerate().map(|(k, &c)| (vec![k as i32], FieldScalar::from_i64(tower, c))),
        )
    }

    fn add_term(&mut self, m: Monomial, c: FieldScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn with_terms(&self, terms: BTreeMap<Monomial, FieldScalar>) -> Self {
        LaurentPoly { tower: self.tower.clone(), vars: self.vars.clone(), terms }
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Terms in increasing graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[i32]) -> FieldScalar {
        self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_else(|| FieldScalar::zero(&self.tower))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &FieldScalar)> {
        self.terms.iter().next_back()
    }

    /// The constant value when the polynomial has no variable dependence.
    pub fn as_constant(&self) -> Option<FieldScalar> {
        match self.terms.len() {
            0 => Some(FieldScalar::zero(&self.tower)),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.0.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Componentwise minimum exponents (zeros for the zero polynomial).
    pub fn min_exponents(&self) -> Vec<i32> {
        self.fold_exponents(i32::min)
    }

    pub fn max_exponents(&self) -> Vec<i32> {
        self.fold_exponents(i32::max)
    }

    fn fold_exponents(&self, f: fn(i32, i32) -> i32) -> Vec<i32> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.nvars()];
        };
        let mut acc = first.0.clone();
        for m in it {
            for (a, &b) in acc.iter_mut().zip(&m.0) {
                *a = f(*a, b);
            }
        }
        acc
    }

    /// Multiplies by `t^exps`.
    pub fn shift(&self, exps: &[i32]) -> Self {
        let s = Monomial(exps.to_vec());
        self.with_terms(self.terms.iter().map(|(m, c)| (m.add(&s), c.clone())).collect())
    }

    /// The representative with minimum exponent zero in every variable.
    pub fn normalized(&self) -> Self {
        let min: Vec<i32> = self.min_exponents().iter().map(|e| -e).collect();
        self.shift(&min)
    }

    /// Representative with minimum exponents zero and a leading
    /// coefficient that does not print with a minus sign.
    pub fn canonical(&self) -> (Self, i32) {
        let p = self.normalized();
        match p.leading_term() {
            Some((_, c)) if c.looks_negative() => (p.neg(), -1),
            _ => (p, 1),
        }
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        if c.is_zero() {
            return self.zero_like();
        }
        self.with_terms(self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))).filter(|(_, x)| !x.is_zero()).collect())
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, tower: &Arc<FieldTower>, f: impl Fn(&FieldScalar) -> FieldScalar) -> Self {
        let mut p = LaurentPoly::zero(tower, &self.vars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }

    /// The same polynomial over a larger tower.
    pub fn embed(&self, tower: &Arc<FieldTower>) -> Self {
        self.map_coeffs(tower, |c| c.embed(tower))
    }

    /// The same polynomial over a subtower, when every coefficient lies in it.
    pub fn restrict(&self, base: &Arc<FieldTower>) -> Option<Self> {
        let mut p = LaurentPoly::zero(base, &self.vars);
        for (m, c) in &self.terms {
            p.terms.insert(m.clone(), c.restrict(base)?);
        }
        Some(p)
    }

    /// Renames the variables; the count must match.
    pub fn with_vars(&self, vars: &Arc<Vec<String>>) -> Self {
        assert_eq!(vars.len(), self.nvars());
        LaurentPoly { tower: self.tower.clone(), vars: vars.clone(), terms: self.terms.clone() }
    }

    pub fn substitute(&self, sub: &Substitution) -> Result<Self> {
        if sub.images.len() != self.nvars() {
            return Err(Error::InvalidSubstitution(format!(
                "{} images for {} variables",
                sub.images.len(),
                self.nvars()
            )));
        }
        let mut out = LaurentPoly::zero(&self.tower, &sub.target_vars);
        let n = sub.target_vars.len();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = vec![0i32; n];
            for (&k, (ic, ie)) in m.0.iter().zip(&sub.images) {
                if k == 0 {
                    continue;
                }
                let f = ic.pow_i(k as i64).ok_or_else(|| Error::NotInvertible(ic.to_string()))?;
                coeff = coeff.mul(&f);
                for (e, &d) in exps.iter_mut().zip(ie) {
                    *e += k * d;
                }
            }
            out.add_term(Monomial(exps), coeff);
        }
        Ok(out)
    }

    /// `p(t_1^{-1}, ..., t_n^{-1})`.
    pub fn invert_variables(&self) -> Self {
        self.with_terms(
            self.terms.iter().map(|(m, c)| (Monomial(m.0.iter().map(|e| -e).collect()), c.clone())).collect(),
        )
    }

    /// Value at `t_1 = ... = t_n = 1`.
    pub fn eval_at_one(&self) -> FieldScalar {
        self.terms.values().fold(FieldScalar::zero(&self.tower), |acc, c| acc.add(c))
    }

    /// Exact quotient in the Laurent ring.
    pub fn divide_exact(&self, q: &LaurentPoly) -> Result<LaurentPoly> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(self.zero_like());
        }
        let pmin = self.min_exponents();
        let qmin = q.min_exponents();
        let num = self.shift(&pmin.iter().map(|e| -e).collect::<Vec<_>>());
        let den = q.shift(&qmin.iter().map(|e| -e).collect::<Vec<_>>());
        let (lm, lc) = den.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let lc_inv = lc.inv().ok_or_else(|| Error::NotInvertible(lc.to_string()))?;
        let mut rem = num;
        let mut quot = self.zero_like();
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return Err(Error::NonDivisible { remainder: rem.to_string() });
            }
            let qm = m.sub(&lm);
            let qc = c.mul(&lc_inv);
            for (dm, dc) in &den.terms {
                rem.add_term(dm.add(&qm), dc.mul(&qc).neg());
            }
            debug_assert!(!rem.terms.contains_key(&m));
            quot.add_term(qm, qc);
        }
        let back: Vec<i32> = pmin.iter().zip(&qmin).map(|(a, b)| a - b).collect();
        Ok(quot.shift(&back))
    }

    /// Division with remainder for polynomials in one variable, after
    /// shifting both to ordinary polynomials.
    pub fn div_rem_univariate(&self, q: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly)> {
        assert_eq!(self.nvars(), 1, "univariate division");
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self.normalized();
        let den = q.normalized();
        let (lm, lc) = den.leading_term().map(|(m, c)| (m.0[0], c.clone())).unwrap();
        let lc_inv = lc.inv().ok_or_else(|| Error::NotInvertible(lc.to_string()))?;
        let mut rem = num;
        let mut quot = self.zero_like();
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.0[0], c.clone())) {
            if m < lm {
                break;
            }
            let qm = Monomial(vec![m - lm]);
            let qc = c.mul(&lc_inv);
            for (dm, dc) in &den.terms {
                rem.add_term(dm.add(&qm), dc.mul(&qc).neg());
            }
            quot.add_term(qm, qc);
        }
        Ok((quot, rem))
    }

    /// The unit `u = ±t^m` with `self = u * q`, if one exists.
    pub fn unit_equivalent(&self, q: &LaurentPoly) -> Option<UnitClass> {
        if self.is_zero() || q.is_zero() {
            return (self.is_zero() && q.is_zero()).then(|| UnitClass::identity(self.nvars()));
        }
        if self.terms.len() != q.terms.len() {
            return None;
        }
        let (pm, pc) = self.leading_term().unwrap();
        let (qm, qc) = q.leading_term().unwrap();
        let ratio = pc.div(qc)?;
        let sign = if ratio.is_one() {
            1
        } else if ratio.neg().is_one() {
            -1
        } else {
            return None;
        };
        let shift = pm.sub(qm);
        let candidate = q.shift(&shift.0);
        let candidate = if sign < 0 { candidate.neg() } else { candidate };
        (candidate == *self).then_some(UnitClass { sign: Some(sign), shift: shift.0 })
    }

    /// Human-readable form in decreasing graded-lexicographic order.
    pub fn format(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let mono = format_monomial(&self.vars, &m.0);
            let (neg, body) = format_coeff(c, mono.is_empty());
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
            if !mono.is_empty() {
                if !body.chars().all(|ch| ch.is_ascii_digit()) {
                    out.push('*');
                }
                out.push_str(&mono);
            }
        }
        out
    }
}

/// Monomial text such as `t1^2*t2^-1`; empty for the unit monomial.
pub(crate) fn format_monomial(vars: &[String], exps: &[i32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e != 0)
        .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    parts.join("*")
}

/// Sign and magnitude text of a coefficient; the magnitude is empty for a
/// unit coefficient in front of a nontrivial monomial.
pub(crate) fn format_coeff(c: &FieldScalar, bare: bool) -> (bool, String) {
    let s = c.format(true);
    if c.is_compound() {
        return (false, format!("({s})"));
    }
    let (neg, abs) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.to_string()),
        None => (false, s),
    };
    if abs == "1" && !bare {
        (neg, String::new())
    } else {
        (neg, abs)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl Ring for LaurentPoly {
    fn zero_like(&self) -> Self {
        LaurentPoly::zero(&self.tower, &self.vars)
    }

    fn one_like(&self) -> Self {
        LaurentPoly::one(&self.tower, &self.vars)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = self.zero_like();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.add(mb), ca.mul(cb));
            }
        }
        out
    }

    fn neg(&self) -> Self {
        self.with_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect())
    }

    fn from_i64_like(&self, n: i64) -> Self {
        LaurentPoly::from_i64(&self.tower, &self.vars, n)
    }
}

impl Domain for LaurentPoly {
    fn divide_exact(&self, divisor: &Self) -> Option<Self> {
        LaurentPoly::divide_exact(self, divisor).ok()
    }

    fn prefers_exact_division(&self) -> bool {
        self.tower.params().is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Arc<FieldTower>, Arc<Vec<String>>) {
        (Arc::new(FieldTower::rationals()), Arc::new(vec!["t".to_string()]))
    }

    #[test]
    fn grlex_order() {
        let a = Monomial(vec![2, 0]);
        let b = Monomial(vec![0, 1]);
        let c = Monomial(vec![1, 1]);
        let d = Monomial(vec![0, 2]);
        assert!(b < a);
        assert!(a < c);
        assert!(c < d);
    }

    #[test]
    fn divide_and_remainder_witness() {
        let (k, v) = setup();
        let p = LaurentPoly::from_i64_coeffs(&k, &v, &[-1, 0, 1]);
        let q = LaurentPoly::from_i64_coeffs(&k, &v, &[-1, 1]);
        assert_eq!(p.divide_exact(&q).unwrap(), LaurentPoly::from_i64_coeffs(&k, &v, &[1, 1]));
        let t = LaurentPoly::var(&k, &v, 0);
        assert!(matches!(t.divide_exact(&q), Err(Error::NonDivisible { .. })));
        assert_eq!(LaurentPoly::one(&k, &v).divide_exact(&t).unwrap(), t.invert_variables());
        assert!(matches!(p.divide_exact(&p.zero_like()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn formatting() {
        let (k, v) = setup();
        let p = LaurentPoly::from_i64_coeffs(&k, &v, &[1, -5, 1]);
        assert_eq!(p.to_string(), "t^2 - 5t + 1");
        assert_eq!(p.neg().to_string(), "-t^2 + 5t - 1");
        assert_eq!(p.zero_like().to_string(), "0");
    }

    #[test]
    fn unit_classes() {
        let (k, v) = setup();
        let p = LaurentPoly::from_i64_coeffs(&k, &v, &[1, -5, 1]);
        let q = p.shift(&[3]).neg();
        let u = q.unit_equivalent(&p).unwrap();
        assert_eq!(u, UnitClass { sign: Some(-1), shift: vec![3] });
        assert!(p.scale(&FieldScalar::from_i64(&k, 2)).unit_equivalent(&p).is_none());
        let z = p.zero_like();
        assert_eq!(z.unit_equivalent(&z), Some(UnitClass::identity(1)));
    }
}
