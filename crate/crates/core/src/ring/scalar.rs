//! Elements of the coefficient field: fractions of parameter polynomials
//! with tower-number coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::tower::{FieldTower, TowerNum};
use super::{Domain, Field, Ring};

/// Polynomial in the tower's parameters: exponent vector -> coefficient.
type ParamPoly = BTreeMap<Vec<u32>, TowerNum>;

#[derive(Clone, Debug)]
enum Repr {
    /// Parameter-free value.
    Const(TowerNum),
    /// `num / den`, `den` normalized to leading coefficient one.
    Frac { num: ParamPoly, den: ParamPoly },
}

#[derive(Clone, Debug)]
pub struct FieldScalar {
    tower: Arc<FieldTower>,
    repr: Repr,
}

impl FieldScalar {
    pub fn from_tower_num(tower: &Arc<FieldTower>, value: TowerNum) -> Self {
        FieldScalar { tower: tower.clone(), repr: Repr::Const(value) }
    }

    pub fn from_i64(tower: &Arc<FieldTower>, n: i64) -> Self {
        Self::from_tower_num(tower, TowerNum::from_i64(n))
    }

    pub fn from_rational(tower: &Arc<FieldTower>, q: BigRational) -> Self {
        Self::from_tower_num(tower, TowerNum::from_rational(q))
    }

    pub fn zero(tower: &Arc<FieldTower>) -> Self {
        Self::from_tower_num(tower, TowerNum::zero())
    }

    pub fn one(tower: &Arc<FieldTower>) -> Self {
        Self::from_tower_num(tower, TowerNum::one())
    }

    /// Generator of the extension at `level`.
    pub fn generator(tower: &Arc<FieldTower>, level: usize) -> Self {
        Self::from_tower_num(tower, tower.generator(level))
    }

    /// The free parameter with the given index.
    pub fn param(tower: &Arc<FieldTower>, index: usize) -> Self {
        let n = tower.params().len();
        let mut e = vec![0u32; n];
        e[index] = 1;
        let num: ParamPoly = [(e, TowerNum::one())].into_iter().collect();
        FieldScalar { tower: tower.clone(), repr: Repr::Frac { num, den: const_poly(n, TowerNum::one()) } }
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    /// The tower number when the value does not involve parameters.
    pub fn as_tower_num(&self) -> Option<&TowerNum> {
        match &self.repr {
            Repr::Const(c) => Some(c),
            Repr::Frac { .. } => None,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_tower_num().and_then(|c| c.as_rational())
    }

    /// Re-homes a value into a larger tower that extends this one.
    pub fn embed(&self, tower: &Arc<FieldTower>) -> Self {
        FieldScalar { tower: tower.clone(), repr: self.repr.clone() }
    }

    /// The same value in a subtower `base` of this tower, when all
    /// coordinates fit.
    pub fn restrict(&self, base: &Arc<FieldTower>) -> Option<Self> {
        let dim = base.dim();
        let fits = |c: &TowerNum| c.coords().len() <= dim;
        let ok = match &self.repr {
            Repr::Const(c) => fits(c),
            Repr::Frac { num, den } => num.values().chain(den.values()).all(fits),
        };
        ok.then(|| FieldScalar { tower: base.clone(), repr: self.repr.clone() })
    }

    /// Whether the printed form needs parentheses when used as a factor.
    pub fn is_compound(&self) -> bool {
        match &self.repr {
            Repr::Const(c) => !self.tower.is_single_term(c),
            Repr::Frac { num, den } => {
                !(is_one_poly(den) && num.len() == 1 && self.tower.is_single_term(num.values().next().unwrap()))
            }
        }
    }

    /// Sign of the leading rational coordinate; used only to pick a
    /// presentation sign when normalizing polynomials for display.
    pub fn looks_negative(&self) -> bool {
        match &self.repr {
            Repr::Const(c) => {
                c.coords().iter().find(|q| !num_traits::Zero::is_zero(*q)).is_some_and(|q| q.is_negative())
            }
            Repr::Frac { num, .. } => num
                .values()
                .next_back()
                .and_then(|c| c.coords().iter().find(|q| !num_traits::Zero::is_zero(*q)))
                .is_some_and(|q| q.is_negative()),
        }
    }

    pub fn format(&self, explicit_mul: bool) -> String {
        match &self.repr {
            Repr::Const(c) => self.tower.format(c, explicit_mul),
            Repr::Frac { num, den } => {
                let n = self.format_poly(num, explicit_mul);
                if is_one_poly(den) {
                    n
                } else {
                    format!("({n})/({})", self.format_poly(den, explicit_mul))
                }
            }
        }
    }

    fn format_poly(&self, p: &ParamPoly, explicit_mul: bool) -> String {
        if p.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in p.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = &self.tower.params()[i];
                    if k == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            let mono = mono.join("*");
            let mut coeff = self.tower.format(c, explicit_mul);
            let single = self.tower.is_single_term(c);
            let neg = single && coeff.starts_with('-');
            if neg {
                coeff.remove(0);
            }
            if !out.is_empty() {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            let coeff = if single { coeff } else { format!("({coeff})") };
            if mono.is_empty() {
                out.push_str(&coeff);
            } else if coeff == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{coeff}*{mono}"));
            }
        }
        out
    }

    fn nparams(&self) -> usize {
        self.tower.params().len()
    }

    fn as_frac(&self) -> (ParamPoly, ParamPoly) {
        let n = self.nparams();
        match &self.repr {
            Repr::Const(c) => (const_poly(n, c.clone()), const_poly(n, TowerNum::one())),
            Repr::Frac { num, den } => (num.clone(), den.clone()),
        }
    }

    fn from_frac(&self, num: ParamPoly, den: ParamPoly) -> Self {
        FieldScalar { tower: self.tower.clone(), repr: normalize(&self.tower, num, den) }
    }
}

fn const_poly(n: usize, c: TowerNum) -> ParamPoly {
    if c.is_zero() {
        return ParamPoly::new();
    }
    [(vec![0u32; n], c)].into_iter().collect()
}

fn is_one_poly(p: &ParamPoly) -> bool {
    p.len() == 1 && p.iter().next().is_some_and(|(e, c)| e.iter().all(|&k| k == 0) && *c == TowerNum::one())
}

fn is_const_poly(p: &ParamPoly) -> bool {
    p.len() <= 1 && p.keys().all(|e| e.iter().all(|&k| k == 0))
}

fn poly_add(t: &FieldTower, a: &ParamPoly, b: &ParamPoly, negate_b: bool) -> ParamPoly {
    let mut out = a.clone();
    for (e, c) in b {
        if let (Some(x), Some(y)) = (out.get(e).and_then(as_integer), as_integer(c)) {
            let sum = if negate_b { x - y } else { x + y };
            if sum.is_zero() {
                out.remove(e);
            } else {
                out.insert(e.clone(), TowerNum::from_rational(BigRational::from_integer(sum)));
            }
            continue;
        }
        let c = if negate_b { t.neg(c) } else { c.clone() };
        match out.get_mut(e) {
            Some(x) => {
                *x = t.add(x, &c);
                if x.is_zero() {
                    out.remove(e);
                }
            }
            None => {
                out.insert(e.clone(), c);
            }
        }
    }
    out
}

/// The integer value of a coefficient, if it is one.
fn as_integer(c: &TowerNum) -> Option<&BigInt> {
    match c.coords() {
        [q] if q.is_integer() => Some(q.numer()),
        _ => None,
    }
}

fn poly_mul(t: &FieldTower, a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
    if a.values().chain(b.values()).all(|c| as_integer(c).is_some()) {
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::with_capacity(a.len() * b.len());
        for (ea, ca) in a {
            let ca = as_integer(ca).unwrap();
            for (eb, cb) in b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = ca * as_integer(cb).unwrap();
                match acc.get_mut(&e) {
                    Some(x) => *x += c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        return acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, TowerNum::from_rational(BigRational::from_integer(c))))
            .collect();
    }
    let mut out = ParamPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let c = t.mul(ca, cb);
            match out.get_mut(&e) {
                Some(x) => {
                    *x = t.add(x, &c);
                }
                None => {
                    out.insert(e, c);
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_scale(t: &FieldTower, a: &ParamPoly, c: &TowerNum) -> ParamPoly {
    let mut out: ParamPoly = a.iter().map(|(e, x)| (e.clone(), t.mul(x, c))).collect();
    out.retain(|_, c| !c.is_zero());
    out
}

/// Exact quotient by the lexicographic division algorithm.
fn poly_divide_exact(t: &FieldTower, num: &ParamPoly, den: &ParamPoly) -> Option<ParamPoly> {
    let (lead_e, lead_c) = den.iter().next_back()?;
    let lead_inv = t.inv(lead_c)?;
    let mut rem = num.clone();
    let mut quot = ParamPoly::new();
    while let Some((e, c)) = rem.iter().next_back() {
        if e.iter().zip(lead_e).any(|(a, b)| a < b) {
            return None;
        }
        let qe: Vec<u32> = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
        let qc = t.mul(c, &lead_inv);
        let term: ParamPoly = [(qe.clone(), qc.clone())].into_iter().collect();
        let sub = poly_mul(t, &term, den);
        rem = poly_add(t, &rem, &sub, true);
        quot.insert(qe, qc);
    }
    Some(quot)
}

fn normalize(t: &FieldTower, mut num: ParamPoly, mut den: ParamPoly) -> Repr {
    let n = t.params().len();
    if num.is_empty() {
        return Repr::Const(TowerNum::zero());
    }
    // Leading coefficient of the denominator becomes one.
    if let Some(inv) = den.values().next_back().and_then(|c| t.inv(c)) {
        if inv != TowerNum::one() {
            num = poly_scale(t, &num, &inv);
            den = poly_scale(t, &den, &inv);
        }
    }
    // Common monomial content.
    if n > 0 {
        let mut content = vec![u32::MAX; n];
        for e in num.keys().chain(den.keys()) {
            for (m, &k) in content.iter_mut().zip(e) {
                *m = (*m).min(k);
            }
        }
        if content.iter().any(|&k| k > 0) {
            let shift = |p: ParamPoly| -> ParamPoly {
                p.into_iter().map(|(e, c)| (e.iter().zip(&content).map(|(a, b)| a - b).collect(), c)).collect()
            };
            num = shift(num);
            den = shift(den);
        }
    }
    if den.len() > 1 {
        if let Some(q) = poly_divide_exact(t, &num, &den) {
            num = q;
            den = const_poly(n, TowerNum::one());
        } else if num.len() > 1 {
            if let Some(q) = poly_divide_exact(t, &den, &num) {
                let lead = q.values().next_back().cloned().unwrap();
                match t.inv(&lead) {
                    Some(inv) => {
                        num = const_poly(n, inv.clone());
                        den = poly_scale(t, &q, &inv);
                    }
                    None => {
                        num = const_poly(n, TowerNum::one());
                        den = q;
                    }
                }
            }
        }
    }
    if is_one_poly(&den) && is_const_poly(&num) {
        return Repr::Const(num.into_values().next().unwrap_or_default());
    }
    Repr::Frac { num, den }
}

impl PartialEq for FieldScalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.repr, &other.repr) {
            (Repr::Const(a), Repr::Const(b)) => a == b,
            _ => {
                let (n1, d1) = self.as_frac();
                let (n2, d2) = other.as_frac();
                let t = &self.tower;
                poly_add(t, &poly_mul(t, &n1, &d2), &poly_mul(t, &n2, &d1), true).is_empty()
            }
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(true))
    }
}

impl Ring for FieldScalar {
    fn zero_like(&self) -> Self {
        FieldScalar::zero(&self.tower)
    }

    fn one_like(&self) -> Self {
        FieldScalar::one(&self.tower)
    }

    fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Const(c) => c.is_zero(),
            Repr::Frac { num, .. } => num.is_empty(),
        }
    }

    fn is_one(&self) -> bool {
        matches!(&self.repr, Repr::Const(c) if *c == TowerNum::one())
    }

    fn add(&self, other: &Self) -> Self {
        if let (Repr::Const(a), Repr::Const(b)) = (&self.repr, &other.repr) {
            return FieldScalar::from_tower_num(&self.tower, self.tower.add(a, b));
        }
        let t = &self.tower;
        let (n1, d1) = self.as_frac();
        let (n2, d2) = other.as_frac();
        if d1 == d2 {
            return self.from_frac(poly_add(t, &n1, &n2, false), d1);
        }
        let num = poly_add(t, &poly_mul(t, &n1, &d2), &poly_mul(t, &n2, &d1), false);
        self.from_frac(num, poly_mul(t, &d1, &d2))
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        if let (Repr::Const(a), Repr::Const(b)) = (&self.repr, &other.repr) {
            return FieldScalar::from_tower_num(&self.tower, self.tower.mul(a, b));
        }
        let t = &self.tower;
        let (n1, d1) = self.as_frac();
        let (n2, d2) = other.as_frac();
        self.from_frac(poly_mul(t, &n1, &n2), poly_mul(t, &d1, &d2))
    }

    fn neg(&self) -> Self {
        let t = &self.tower;
        let repr = match &self.repr {
            Repr::Const(c) => Repr::Const(t.neg(c)),
            Repr::Frac { num, den } => {
                Repr::Frac { num: poly_scale(t, num, &TowerNum::from_i64(-1)), den: den.clone() }
            }
        };
        FieldScalar { tower: self.tower.clone(), repr }
    }

    fn from_i64_like(&self, n: i64) -> Self {
        FieldScalar::from_i64(&self.tower, n)
    }
}

impl Domain for FieldScalar {
    fn divide_exact(&self, divisor: &Self) -> Option<Self> {
        self.div(divisor)
    }
}

impl Field for FieldScalar {
    type Integral = FieldScalar;

    fn inv(&self) -> Option<Self> {
        match &self.repr {
            Repr::Const(c) => self.tower.inv(c).map(|c| FieldScalar::from_tower_num(&self.tower, c)),
            Repr::Frac { num, den } => {
                if num.is_empty() {
                    return None;
                }
                if is_const_poly(num) && self.tower.inv(num.values().next().unwrap()).is_none() {
                    return None;
                }
                Some(self.from_frac(den.clone(), num.clone()))
            }
        }
    }

    fn split_fraction(&self) -> (Self, Self) {
        (self.clone(), self.one_like())
    }

    fn from_integral(x: &Self) -> Self {
        x.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params_field() -> Arc<FieldTower> {
        Arc::new(FieldTower::rationals().with_params(&["a", "b"]).unwrap())
    }

    #[test]
    fn parameter_fractions_simplify() {
        let k = params_field();
        let a = FieldScalar::param(&k, 0);
        let b = FieldScalar::param(&k, 1);
        let one = FieldScalar::one(&k);
        // (a^2 - b^2) / (a - b) = a + b
        let num = a.mul(&a).sub(&b.mul(&b));
        let q = num.div(&a.sub(&b)).unwrap();
        assert_eq!(q, a.add(&b));
        assert_eq!(q.format(true), "a + b");
        // a * a^-1 = 1 collapses to a constant
        let r = a.mul(&a.inv().unwrap());
        assert!(r.is_one());
        assert_eq!(one.div(&a).unwrap().format(true), "(1)/(a)");
    }

    #[test]
    fn equality_by_cross_multiplication() {
        let k = params_field();
        let a = FieldScalar::param(&k, 0);
        let b = FieldScalar::param(&k, 1);
        let x = a.add(&b).div(&a.mul(&b)).unwrap();
        let y = a.inv().unwrap().add(&b.inv().unwrap());
        assert_eq!(x, y);
    }

    #[test]
    fn zero_is_canonical() {
        let k = params_field();
        let a = FieldScalar::param(&k, 0);
        let z = a.sub(&a);
        assert!(z.is_zero());
        assert!(z.as_tower_num().is_some());
        assert!(z.inv().is_none());
    }
}
