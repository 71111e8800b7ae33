//! Towers of simple algebraic extensions of the rationals.
//!
//! A number in a tower with extension degrees `d_1, ..., d_K` is stored as a
//! flat vector of rationals of length `d_1 * ... * d_K`: the element of level
//! `k` is a polynomial of degree `< d_k` in the `k`-th generator whose
//! coefficients are level `k - 1` elements, laid out contiguously. Level 1 is
//! the least significant digit, so numbers from a smaller tower embed by zero
//! padding. Trailing zeros are trimmed.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A tower number; meaningless without the [`FieldTower`] it was built in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TowerNum(Vec<BigRational>);

impl TowerNum {
    pub fn zero() -> Self {
        TowerNum(Vec::new())
    }

    pub fn one() -> Self {
        TowerNum(vec![BigRational::one()])
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut v = TowerNum(vec![q]);
        v.trim();
        v
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// The rational value when the number lies in the base field.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.0.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.0[0].clone()),
            _ => None,
        }
    }

    /// Flat coordinates (trailing zeros trimmed).
    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn from_coords(coords: Vec<BigRational>) -> Self {
        let mut v = TowerNum(coords);
        v.trim();
        v
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    fn padded(&self, len: usize) -> Vec<BigRational> {
        let mut v = self.0.clone();
        v.resize(len, BigRational::zero());
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Extension {
    name: String,
    degree: usize,
    /// Monic minimal polynomial, coefficients from low to high degree, each a
    /// number of the level below.
    minpoly: Vec<TowerNum>,
}

/// A tower `Q(g_1)(g_2)...(g_K)` plus a set of free parameter symbols.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FieldTower {
    levels: Vec<Extension>,
    params: Vec<String>,
}

impl FieldTower {
    /// The rationals, without parameters.
    pub fn rationals() -> Self {
        Self::default()
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Dimension over the rationals of the field with the first `k` extensions.
    pub fn dim_at(&self, k: usize) -> usize {
        self.levels[..k].iter().map(|l| l.degree).product()
    }

    pub fn dim(&self) -> usize {
        self.dim_at(self.levels.len())
    }

    pub fn generator_names(&self) -> impl Iterator<Item = &str> {
        self.levels.iter().map(|l| l.name.as_str())
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p == name)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.levels.iter().position(|l| l.name == name)
    }

    pub fn minpoly(&self, level: usize) -> &[TowerNum] {
        &self.levels[level].minpoly
    }

    fn symbol_taken(&self, name: &str) -> bool {
        self.generator_index(name).is_some() || self.param_index(name).is_some()
    }

    /// Adjoins a root `name` of the monic polynomial with coefficients
    /// `minpoly` (low to high degree) taken from the current top field.
    ///
    /// Irreducibility is not checked; a reducible polynomial produces a ring
    /// with zero divisors, where inversion can fail with `NotInvertible`.
    pub fn adjoin_extension(&self, name: &str, minpoly: &[TowerNum]) -> Result<FieldTower> {
        if self.symbol_taken(name) {
            return Err(Error::InvalidExtension(format!("symbol `{name}` already declared")));
        }
        if minpoly.len() < 3 {
            return Err(Error::InvalidExtension(format!(
                "minimal polynomial for `{name}` must have degree at least 2"
            )));
        }
        if minpoly.last() != Some(&TowerNum::one()) {
            return Err(Error::InvalidExtension(format!("minimal polynomial for `{name}` must be monic")));
        }
        let top = self.dim();
        if let Some(bad) = minpoly.iter().find(|c| c.0.len() > top) {
            return Err(Error::InvalidExtension(format!(
                "coefficient {} of the minimal polynomial for `{name}` is not in the current field",
                self.format(bad, true)
            )));
        }
        let mut next = self.clone();
        next.levels.push(Extension { name: name.to_string(), degree: minpoly.len() - 1, minpoly: minpoly.to_vec() });
        Ok(next)
    }

    /// Declares free transcendental parameters.
    pub fn with_params<S: AsRef<str>>(&self, names: &[S]) -> Result<FieldTower> {
        let mut next = self.clone();
        for n in names {
            let n = n.as_ref();
            if next.symbol_taken(n) {
                return Err(Error::InvalidExtension(format!("symbol `{n}` already declared")));
            }
            next.params.push(n.to_string());
        }
        Ok(next)
    }

    /// The generator of extension `level` (0-based).
    pub fn generator(&self, level: usize) -> TowerNum {
        let stride = self.dim_at(level);
        let mut v = vec![BigRational::zero(); stride + 1];
        v[stride] = BigRational::one();
        TowerNum(v)
    }

    pub fn add(&self, a: &TowerNum, b: &TowerNum) -> TowerNum {
        let n = a.0.len().max(b.0.len());
        let mut v = a.padded(n);
        for (x, y) in v.iter_mut().zip(&b.0) {
            *x += y;
        }
        TowerNum::from_coords(v)
    }

    pub fn sub(&self, a: &TowerNum, b: &TowerNum) -> TowerNum {
        let n = a.0.len().max(b.0.len());
        let mut v = a.padded(n);
        for (x, y) in v.iter_mut().zip(&b.0) {
            *x -= y;
        }
        TowerNum::from_coords(v)
    }

    pub fn neg(&self, a: &TowerNum) -> TowerNum {
        TowerNum(a.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, a: &TowerNum, q: &BigRational) -> TowerNum {
        if q.is_zero() {
            return TowerNum::zero();
        }
        TowerNum(a.0.iter().map(|c| c * q).collect())
    }

    pub fn mul(&self, a: &TowerNum, b: &TowerNum) -> TowerNum {
        if a.is_zero() || b.is_zero() {
            return TowerNum::zero();
        }
        if let Some(q) = a.as_rational() {
            return self.scale(b, &q);
        }
        if let Some(q) = b.as_rational() {
            return self.scale(a, &q);
        }
        let k = self.levels.len();
        let n = self.dim();
        TowerNum::from_coords(self.mul_at(k, &a.padded(n), &b.padded(n)))
    }

    pub fn inv(&self, a: &TowerNum) -> Option<TowerNum> {
        if a.is_zero() {
            return None;
        }
        if let Some(q) = a.as_rational() {
            return Some(TowerNum::from_rational(q.recip()));
        }
        let k = self.levels.len();
        let n = self.dim();
        self.inv_at(k, &a.padded(n)).map(TowerNum::from_coords)
    }

    pub fn pow(&self, a: &TowerNum, e: u64) -> TowerNum {
        let mut acc = TowerNum::one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    // Level arithmetic on padded slices of length `dim_at(k)`.

    fn mul_at(&self, k: usize, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        if k == 0 {
            return vec![&a[0] * &b[0]];
        }
        let stride = self.dim_at(k - 1);
        let ext = &self.levels[k - 1];
        let d = ext.degree;
        let ca: Vec<&[BigRational]> = a.chunks(stride).collect();
        let cb: Vec<&[BigRational]> = b.chunks(stride).collect();
        let mut prod = vec![vec![BigRational::zero(); stride]; 2 * d - 1];
        for (i, x) in ca.iter().enumerate() {
            if is_zero_slice(x) {
                continue;
            }
            for (j, y) in cb.iter().enumerate() {
                if is_zero_slice(y) {
                    continue;
                }
                let p = self.mul_at(k - 1, x, y);
                add_assign(&mut prod[i + j], &p);
            }
        }
        let minpoly: Vec<Vec<BigRational>> = ext.minpoly.iter().map(|c| c.padded(stride)).collect();
        for e in (d..2 * d - 1).rev() {
            if is_zero_slice(&prod[e]) {
                continue;
            }
            let lead = std::mem::replace(&mut prod[e], vec![BigRational::zero(); stride]);
            for (j, m) in minpoly.iter().enumerate().take(d) {
                if is_zero_slice(m) {
                    continue;
                }
                let p = self.mul_at(k - 1, &lead, m);
                sub_assign(&mut prod[e - d + j], &p);
            }
        }
        prod.truncate(d);
        prod.concat()
    }

    fn inv_at(&self, k: usize, a: &[BigRational]) -> Option<Vec<BigRational>> {
        if is_zero_slice(a) {
            return None;
        }
        if k == 0 {
            return Some(vec![a[0].recip()]);
        }
        let stride = self.dim_at(k - 1);
        let ext = &self.levels[k - 1];
        // Extended Euclid over the level below: s * a = r (mod minpoly).
        let mut r0: Vec<Vec<BigRational>> = ext.minpoly.iter().map(|c| c.padded(stride)).collect();
        let mut r1: Vec<Vec<BigRational>> = a.chunks(stride).map(|c| c.to_vec()).collect();
        trim_poly(&mut r1);
        let mut s0: Vec<Vec<BigRational>> = Vec::new();
        let mut s1: Vec<Vec<BigRational>> = vec![one_slice(stride)];
        while r1.len() > 1 {
            let (q, r) = self.poly_divmod(k - 1, &r0, &r1)?;
            let qs1 = self.poly_mul(k - 1, &q, &s1);
            let s2 = poly_sub(&s0, &qs1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r1.is_empty() {
            return None;
        }
        let c = self.inv_at(k - 1, &r1[0])?;
        let mut out = vec![BigRational::zero(); stride * ext.degree];
        for (i, coeff) in s1.iter().enumerate().take(ext.degree) {
            let p = self.mul_at(k - 1, coeff, &c);
            out[i * stride..(i + 1) * stride].clone_from_slice(&p);
        }
        Some(out)
    }

    fn poly_mul(&self, k: usize, a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let stride = self.dim_at(k);
        let mut out = vec![vec![BigRational::zero(); stride]; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let p = self.mul_at(k, x, y);
                add_assign(&mut out[i + j], &p);
            }
        }
        trim_poly(&mut out);
        out
    }

    #[allow(clippy::type_complexity)]
    fn poly_divmod(
        &self,
        k: usize,
        num: &[Vec<BigRational>],
        den: &[Vec<BigRational>],
    ) -> Option<(Vec<Vec<BigRational>>, Vec<Vec<BigRational>>)> {
        let stride = self.dim_at(k);
        let lead_inv = self.inv_at(k, den.last()?)?;
        let mut rem = num.to_vec();
        trim_poly(&mut rem);
        if rem.len() < den.len() {
            return Some((Vec::new(), rem));
        }
        let mut quot = vec![vec![BigRational::zero(); stride]; rem.len() - den.len() + 1];
        while rem.len() >= den.len() {
            let shift = rem.len() - den.len();
            let c = self.mul_at(k, rem.last().unwrap(), &lead_inv);
            for (j, d) in den.iter().enumerate() {
                let p = self.mul_at(k, &c, d);
                sub_assign(&mut rem[shift + j], &p);
            }
            quot[shift] = c;
            rem.pop();
            trim_poly(&mut rem);
        }
        trim_poly(&mut quot);
        Some((quot, rem))
    }

    /// Human-readable form. With `explicit_mul` a `*` separates every
    /// coefficient from its generator power (parseable form).
    pub fn format(&self, a: &TowerNum, explicit_mul: bool) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, c) in a.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = self.index_monomial(idx);
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                let _ = write!(out, "{abs}");
            } else if abs.is_one() {
                out.push_str(&mono);
            } else if abs.is_integer() && !explicit_mul {
                let _ = write!(out, "{abs}{mono}");
            } else {
                let _ = write!(out, "{abs}*{mono}");
            }
        }
        out
    }

    /// Whether the formatted number is a single term (no `+`/`-` between terms).
    pub fn is_single_term(&self, a: &TowerNum) -> bool {
        a.0.iter().filter(|c| !c.is_zero()).count() <= 1
    }

    fn index_monomial(&self, mut idx: usize) -> String {
        let mut parts = Vec::new();
        for ext in &self.levels {
            let e = idx % ext.degree;
            idx /= ext.degree;
            match e {
                0 => {}
                1 => parts.push(ext.name.clone()),
                _ => parts.push(format!("{}^{}", ext.name, e)),
            }
        }
        parts.join("*")
    }
}

fn is_zero_slice(a: &[BigRational]) -> bool {
    a.iter().all(|c| c.is_zero())
}

fn one_slice(n: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[0] = BigRational::one();
    v
}

fn add_assign(a: &mut [BigRational], b: &[BigRational]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

fn sub_assign(a: &mut [BigRational], b: &[BigRational]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x -= y;
    }
}

fn trim_poly(p: &mut Vec<Vec<BigRational>>) {
    while p.last().is_some_and(|c| is_zero_slice(c)) {
        p.pop();
    }
}

fn poly_sub(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let stride = a.first().or(b.first()).map_or(0, |c| c.len());
    let n = a.len().max(b.len());
    let mut out: Vec<Vec<BigRational>> =
        (0..n).map(|i| a.get(i).cloned().unwrap_or_else(|| vec![BigRational::zero(); stride])).collect();
    for (x, y) in out.iter_mut().zip(b) {
        sub_assign(x, y);
    }
    trim_poly(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian() -> FieldTower {
        FieldTower::rationals().adjoin_extension("i", &[TowerNum::one(), TowerNum::zero(), TowerNum::one()]).unwrap()
    }

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        let k = gaussian();
        let i = k.generator(0);
        assert_eq!(k.mul(&i, &i), TowerNum::from_i64(-1));
    }

    #[test]
    fn sqrt_minus_three() {
        let k = FieldTower::rationals()
            .adjoin_extension("s", &[TowerNum::from_i64(3), TowerNum::zero(), TowerNum::one()])
            .unwrap();
        let s = k.generator(0);
        assert_eq!(k.mul(&s, &s), TowerNum::from_i64(-3));
    }

    #[test]
    fn reducible_minpoly_is_accepted_but_has_zero_divisors() {
        let k = FieldTower::rationals()
            .adjoin_extension("r", &[TowerNum::from_i64(-4), TowerNum::zero(), TowerNum::one()])
            .unwrap();
        let r = k.generator(0);
        let two = TowerNum::from_i64(2);
        let a = k.sub(&r, &two);
        let b = k.add(&r, &two);
        assert!(k.mul(&a, &b).is_zero());
        assert!(k.inv(&a).is_none());
    }

    #[test]
    fn rejects_bad_minpolys() {
        let q = FieldTower::rationals();
        assert!(q.adjoin_extension("x", &[TowerNum::one(), TowerNum::one()]).is_err());
        assert!(q.adjoin_extension("x", &[TowerNum::one(), TowerNum::zero(), TowerNum::from_i64(2)]).is_err());
        let k = gaussian();
        // coefficient living above the current top field
        let foreign =
            TowerNum::from_coords(vec![BigRational::zero(); 3].into_iter().chain([BigRational::one()]).collect());
        assert!(k.adjoin_extension("y", &[foreign, TowerNum::zero(), TowerNum::one()]).is_err());
    }

    #[test]
    fn two_level_tower_inverse() {
        let k = gaussian();
        let i = k.generator(0);
        // sqrt(2) over Q(i)
        let k2 = k.adjoin_extension("r", &[TowerNum::from_i64(-2), TowerNum::zero(), TowerNum::one()]).unwrap();
        let r = k2.generator(1);
        assert_eq!(k2.mul(&r, &r), TowerNum::from_i64(2));
        let x = k2.add(&k2.add(&r, &i), &TowerNum::from_i64(3));
        let y = k2.inv(&x).unwrap();
        assert_eq!(k2.mul(&x, &y), TowerNum::one());
        assert_eq!(k2.format(&x, true), "3 + i + r");
    }
}
