//! Identities satisfied by the polynomial torsion: reciprocity, the
//! derivative formula, products over finite abelian covers, fibered
//! manifolds and closed-form signs.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::RatFunc;
use crate::ring::{cyclotomic_polynomial, FieldScalar, FieldTower, LaurentPoly, Matrix, Ring, Substitution, UnitClass};
use crate::torsion::{naturality_substitute, Ambiguity, TorsionResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ManifoldClass {
    KnotExterior,
    LinkExterior,
    FiberedKnot,
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignContext {
    /// Number of boundary components.
    pub b: usize,
    pub class: ManifoldClass,
    /// Sign of `det(1 - phi_1)` for fibered manifolds.
    pub monodromy_sign: Option<i32>,
}

impl SignContext {
    pub fn new(b: usize, class: ManifoldClass) -> Self {
        SignContext { b, class, monodromy_sign: None }
    }
}

/// `((-1)^{b(b-1)/2}, (-1)^{b(b+1)/2})`.
pub fn sign_helpers(ctx: &SignContext) -> Result<(i32, i32)> {
    if ctx.b == 0 {
        return Err(Error::InvalidInput("the number of boundary components must be positive".into()));
    }
    let b = ctx.b;
    let sign = |e: usize| if e % 2 == 0 { 1 } else { -1 };
    Ok((sign(b * (b - 1) / 2), sign(b * (b + 1) / 2)))
}

#[derive(Clone, Debug)]
pub struct ReciprocityReport {
    pub inverted: LaurentPoly,
    /// `Delta(t^-1) = unit * Delta(t)`.
    pub unit: UnitClass,
    pub observed_sign: i32,
    /// `(-1)^{b(b+1)/2}` for knot and link exteriors.
    pub expected_sign: Option<i32>,
}

impl ReciprocityReport {
    pub fn sign_matches(&self) -> Option<bool> {
        self.expected_sign.map(|s| s == self.observed_sign)
    }
}

pub fn reciprocity(delta: &LaurentPoly, ctx: &SignContext) -> Result<ReciprocityReport> {
    if delta.is_zero() {
        return Err(Error::InvalidInput("reciprocity of the zero polynomial".into()));
    }
    let inverted = delta.invert_variables();
    let unit = inverted
        .unit_equivalent(delta)
        .ok_or_else(|| Error::NotUnitEquivalent { lhs: inverted.to_string(), rhs: delta.to_string() })?;
    let expected_sign = match ctx.class {
        ManifoldClass::KnotExterior | ManifoldClass::LinkExterior | ManifoldClass::FiberedKnot if ctx.b > 0 => {
            Some(sign_helpers(ctx)?.1)
        }
        _ => None,
    };
    Ok(ReciprocityReport { inverted, observed_sign: unit.sign.unwrap_or(1), unit, expected_sign })
}

#[derive(Clone, Debug)]
pub struct DerivativeResult {
    /// The one-variable reduction of the input.
    pub reduced: LaurentPoly,
    /// `reduced / prod (t^{a_l} - 1)`.
    pub quotient: LaurentPoly,
    /// `(-1)^b quotient(1)`.
    pub value: FieldScalar,
}

/// `(-1)^b lim_{t -> 1} Delta(t) / prod_l (t^{a_l} - 1)`, after reducing a
/// multivariable `Delta` to one variable by `t_i -> t^{c_i}`.
pub fn derivative_formula(delta: &LaurentPoly, a: &[i32], reduce: Option<&[i32]>) -> Result<DerivativeResult> {
    if a.iter().any(|&x| x <= 0) {
        return Err(Error::InvalidInput("boundary exponents must be positive".into()));
    }
    let reduced = match (delta.nvars(), reduce) {
        (1, None) => delta.clone(),
        (n, c) => {
            let ones = vec![1; n];
            let c = c.unwrap_or(&ones);
            if c.iter().any(|&x| x <= 0) {
                return Err(Error::InvalidInput("reduction exponents must be positive".into()));
            }
            naturality_substitute(delta, c, "t")?
        }
    };
    let tower = reduced.tower().clone();
    let vars = reduced.vars().clone();
    let one = LaurentPoly::one(&tower, &vars);
    let divisor = a.iter().fold(one.clone(), |acc, &k| {
        let tk = LaurentPoly::monomial(&vars, FieldScalar::one(&tower), vec![k]);
        acc.mul(&tk.sub(&one))
    });
    let quotient = reduced.divide_exact(&divisor)?;
    let mut value = quotient.eval_at_one();
    if a.len() % 2 == 1 {
        value = value.neg();
    }
    Ok(DerivativeResult { reduced, quotient, value })
}

/// Characters of a finite abelian quotient `Z^n / L` of the torsion
/// variables, given as exponent tuples of a primitive `order`-th root of
/// unity: the character sends `t_i` to `zeta^{k_i}`.
#[derive(Clone, Debug)]
pub struct CharacterSet {
    /// Columns generate the lattice `L`.
    pub lattice: Vec<Vec<i64>>,
    pub order: u32,
    pub characters: Vec<Vec<i64>>,
}

impl CharacterSet {
    /// All characters of `Z / m`.
    pub fn cyclic(m: u32) -> Self {
        CharacterSet { lattice: vec![vec![m as i64]], order: m, characters: (0..m as i64).map(|k| vec![k]).collect() }
    }

    fn validate(&self, nvars: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidCharacters(msg));
        if self.order == 0 {
            return bad("root of unity order must be positive".into());
        }
        if self.lattice.len() != nvars || self.lattice.iter().any(|r| r.len() != nvars) {
            return bad(format!("lattice must be a {nvars}x{nvars} integer matrix"));
        }
        let n = self.order as i64;
        let det = int_det(&self.lattice);
        if det.is_zero() {
            return bad("lattice has infinite index".into());
        }
        let size = det.abs();
        if BigInt::from(self.characters.len()) != size {
            return bad(format!("{} characters for a group of order {size}", self.characters.len()));
        }
        let mut seen = Vec::new();
        for ch in &self.characters {
            if ch.len() != nvars {
                return bad("character has the wrong length".into());
            }
            let red: Vec<i64> = ch.iter().map(|k| k.mod_floor(&n)).collect();
            if seen.contains(&red) {
                return bad(format!("character {ch:?} listed twice"));
            }
            for j in 0..nvars {
                let s: i64 = (0..nvars).map(|i| red[i] * self.lattice[i][j]).sum();
                if s.mod_floor(&n) != 0 {
                    return bad(format!("character {ch:?} does not vanish on the lattice"));
                }
            }
            seen.push(red);
        }
        Ok(())
    }
}

fn int_det(m: &[Vec<i64>]) -> BigInt {
    let q: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let mat = Matrix::from_rows(q, &BigRational::zero());
    mat.det().to_integer()
}

#[derive(Clone, Debug)]
pub struct CoveringResult {
    /// Product over characters, in the original variables.
    pub product: LaurentPoly,
    /// The same polynomial in the lattice coordinates `s_j = t^{L_j}`.
    pub in_lattice: LaurentPoly,
    pub ambiguity: Ambiguity,
    pub notes: Vec<String>,
}

/// Product of `Delta` over the characters of a finite abelian quotient;
/// the roots of unity are adjoined on top of the coefficient field and the
/// product must collapse back into it.
pub fn covering_formula(
    delta: &LaurentPoly,
    chars: &CharacterSet,
    new_vars: &Arc<Vec<String>>,
) -> Result<CoveringResult> {
    let nvars = delta.nvars();
    chars.validate(nvars)?;
    if new_vars.len() != nvars {
        return Err(Error::InvalidInput("one lattice variable per torsion variable is needed".into()));
    }
    let base = delta.tower().clone();
    let n = chars.order;
    let (tower, zeta) = adjoin_root_of_unity(&base, n)?;
    let d = delta.embed(&tower);
    let vars = d.vars().clone();
    let factors: Vec<LaurentPoly> = crate::par::par_map(chars.characters.clone(), |ch| {
        let images = (0..nvars)
            .map(|i| {
                let mut e = vec![0; nvars];
                e[i] = 1;
                (zeta.pow_u(ch[i].rem_euclid(n as i64) as u64), e)
            })
            .collect();
        let sub = Substitution::new(vars.clone(), images).expect("roots of unity are nonzero");
        d.substitute(&sub).expect("monomial substitution")
    });
    let product = factors.iter().fold(LaurentPoly::one(&tower, &vars), |acc, f| acc.mul(f));
    let product = product.restrict(&base).ok_or_else(|| Error::CoefficientsDoNotCollapse(product.to_string()))?;
    // Re-express exponents in lattice coordinates.
    let lat: Vec<Vec<BigRational>> =
        chars.lattice.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let lat = Matrix::from_rows(lat, &BigRational::zero());
    let mut terms = Vec::new();
    for (m, c) in product.terms() {
        let rhs: Vec<BigRational> = m.0.iter().map(|&e| BigRational::from_integer(e.into())).collect();
        let x = lat.solve(&rhs).filter(|x| x.iter().all(|q| q.is_integer())).ok_or_else(|| {
            Error::InvalidCharacters(format!("exponent {:?} of the product is not in the lattice", m.0))
        })?;
        let x: Vec<i32> = x.iter().map(|q| i32::try_from(q.to_integer()).expect("small exponent")).collect();
        terms.push((x, c.clone()));
    }
    let in_lattice = LaurentPoly::from_terms(&base, new_vars, terms);
    Ok(CoveringResult {
        product,
        in_lattice,
        ambiguity: Ambiguity::UpToSignAndMonomial,
        notes: vec!["the covering sign is not determined".into()],
    })
}

/// A tower containing a primitive `n`-th root of unity, and that root.
/// For `n > 2` the cyclotomic polynomial is adjoined even when the base
/// field already contains such roots; the product computation only
/// multiplies, so the resulting ring is still adequate.
pub fn adjoin_root_of_unity(base: &Arc<FieldTower>, n: u32) -> Result<(Arc<FieldTower>, FieldScalar)> {
    match n {
        0 => Err(Error::InvalidInput("root of unity order must be positive".into())),
        1 => Ok((base.clone(), FieldScalar::one(base))),
        2 => Ok((base.clone(), FieldScalar::from_i64(base, -1))),
        _ => {
            let mut name = format!("zeta{n}");
            while base.generator_index(&name).is_some() || base.param_index(&name).is_some() {
                name.push('_');
            }
            let tower = Arc::new(base.adjoin_extension(&name, &cyclotomic_polynomial(n)?.to_tower())?);
            let zeta = FieldScalar::generator(&tower, tower.num_levels() - 1);
            Ok((tower, zeta))
        }
    }
}

/// `sgn det(1 - phi_1) * det(t 1 - A)`.
pub fn fibered_torsion(a: &Matrix<FieldScalar>, phi1: &[Vec<i64>], var: &str) -> Result<TorsionResult> {
    if !a.is_square() {
        return Err(Error::InvalidInput("monodromy matrix must be square".into()));
    }
    if phi1.iter().any(|r| r.len() != phi1.len()) {
        return Err(Error::InvalidInput("phi1 must be square".into()));
    }
    let tower = a.proto().tower().clone();
    let vars = Arc::new(vec![var.to_string()]);
    let t = LaurentPoly::var(&tower, &vars, 0);
    let zero = LaurentPoly::zero(&tower, &vars);
    let m = Matrix::from_fn(a.rows(), a.cols(), &zero, |i, j| {
        let x = LaurentPoly::constant(&vars, a[(i, j)].neg());
        if i == j {
            x.add(&t)
        } else {
            x
        }
    });
    let charpoly = m.det();
    let k = phi1.len();
    let id_minus: Vec<Vec<i64>> =
        (0..k).map(|i| (0..k).map(|j| if i == j { 1 } else { 0 } - phi1[i][j]).collect()).collect();
    let d = int_det(&id_minus);
    let mut notes = vec![format!("det(1 - phi_1) = {d}")];
    let (value, ambiguity) = if d.is_zero() {
        notes.push("det(1 - phi_1) vanishes; sign undetermined".into());
        (charpoly, Ambiguity::UpToSign)
    } else if d.is_negative() {
        (charpoly.neg(), Ambiguity::Exact)
    } else {
        (charpoly, Ambiguity::Exact)
    };
    Ok(TorsionResult { value: RatFunc::from_poly(value), ambiguity, notes })
}
