//! Polynomial torsion of a presented group: the twisted chain complex of
//! the presentation 2-complex and the Fox-Jacobian determinant ratio.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::BasedChainComplex;
use crate::error::{Error, Result};
use crate::group::{fox_derivative, GroupRingElement, Presentation, Word};
use crate::par::par_range;
use crate::rep::{abelian_rep_build, AbelianizationMap, SL2Rep, TwistedMap};
use crate::ring::{Field, FieldScalar, FieldTower, LaurentPoly, Matrix, RatFunc, Ring, Substitution, UnitClass};

/// What a reported value is defined up to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambiguity {
    /// Up to `±t^m`.
    UpToSignAndMonomial,
    /// Sign known, monomial factor `t^m` free.
    UpToMonomial,
    UpToSign,
    Exact,
}

impl Ambiguity {
    pub fn describe(self) -> &'static str {
        match self {
            Ambiguity::UpToSignAndMonomial => "up to ± t^m",
            Ambiguity::UpToMonomial => "up to t^m",
            Ambiguity::UpToSign => "up to sign",
            Ambiguity::Exact => "exact",
        }
    }

    /// The same ambiguity once the sign is pinned down.
    pub fn with_sign(self) -> Self {
        match self {
            Ambiguity::UpToSignAndMonomial => Ambiguity::UpToMonomial,
            Ambiguity::UpToSign => Ambiguity::Exact,
            a => a,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TorsionResult {
    pub value: RatFunc,
    pub ambiguity: Ambiguity,
    pub notes: Vec<String>,
}

impl TorsionResult {
    /// The value as a Laurent polynomial, when it is one.
    pub fn as_poly(&self) -> Option<LaurentPoly> {
        self.value.as_poly()
    }
}

/// Fox Jacobian block matrix: block `(r, x)` is `Phi(d r / d x)`.
pub fn fox_jacobian(map: &TwistedMap) -> Vec<Vec<Matrix<LaurentPoly>>> {
    let pres = map.presentation();
    let g = pres.num_generators();
    pres.relators.iter().map(|r| par_range(g, |x| map.apply(&fox_derivative(r, x)))).collect()
}

/// `Phi(x - 1)` for generator `x`.
pub fn generator_minus_one(map: &TwistedMap, x: usize) -> Matrix<LaurentPoly> {
    map.apply(&GroupRingElement::from_word(Word::generator(x)).sub(&GroupRingElement::one()))
}

/// The twisted chain complex `C_2 -> C_1 -> C_0` of the presentation
/// 2-complex over the fraction field, in coordinate bases.
pub fn build_complex_from_presentation(map: &TwistedMap) -> Result<BasedChainComplex<RatFunc>> {
    let pres = map.presentation();
    let n = map.dim();
    let g = pres.num_generators();
    let r = pres.relators.len();
    let zero = RatFunc::zero(map.tower(), map.vars());
    let jac = fox_jacobian(map);
    let d1_blocks: Vec<Matrix<LaurentPoly>> = par_range(g, |x| generator_minus_one(map, x));
    // Column convention: d_2 is the transpose of the Jacobian, d_1 the
    // transpose of the column of Phi(x - 1) blocks.
    let d2 = Matrix::from_fn(n * g, n * r, &zero, |i, j| RatFunc::from_poly(jac[j / n][i / n][(j % n, i % n)].clone()));
    let d1 = Matrix::from_fn(n, n * g, &zero, |i, j| RatFunc::from_poly(d1_blocks[j / n][(j % n, i)].clone()));
    BasedChainComplex::new(vec![n, n * g, n * r], vec![d1, d2], &zero)
        .map_err(|e| Error::InvalidRepresentation(format!("inconsistent representation and abelianization: {e}")))
}

/// Options for [`wada_torsion`].
#[derive(Clone, Debug, Default)]
pub struct WadaOptions {
    /// Generator whose column is removed; the last one by default.
    pub remove: Option<usize>,
    /// Sign correction, when known.
    pub tau0: Option<i32>,
}

/// `det Phi(Jacobian without column k) / det Phi(x_k - 1)` for a
/// deficiency-one presentation. On a vanishing denominator the remaining
/// generators are tried in turn.
pub fn wada_torsion(map: &TwistedMap, opts: &WadaOptions) -> Result<TorsionResult> {
    let pres = map.presentation();
    if pres.deficiency() != 1 {
        return Err(Error::WrongDeficiency(pres.deficiency()));
    }
    let g = pres.num_generators();
    let first = opts.remove.unwrap_or(g - 1);
    if first >= g {
        return Err(Error::InvalidInput(format!("no generator with index {first}")));
    }
    let order: Vec<usize> = std::iter::once(first).chain((0..g).rev().filter(|&k| k != first)).collect();
    let jac = fox_jacobian(map);
    let n = map.dim();
    let zero = LaurentPoly::zero(map.tower(), map.vars());
    let mut notes = Vec::new();
    for &k in &order {
        let den = generator_minus_one(map, k).det();
        let name = &pres.generators[k];
        if den.is_zero() {
            notes.push(format!("det Phi({name} - 1) vanishes, trying another generator"));
            continue;
        }
        let cols: Vec<usize> = (0..g).filter(|&x| x != k).collect();
        let minor = Matrix::from_fn(n * jac.len(), n * cols.len(), &zero, |i, j| {
            jac[i / n][cols[j / n]][(i % n, j % n)].clone()
        });
        let num = minor.det();
        if num.is_zero() {
            return Err(Error::InvalidComplex(
                "Fox Jacobian minor vanishes; the twisted complex is not acyclic".into(),
            ));
        }
        notes.push(format!("removed generator {name}"));
        let mut value = RatFunc::new(num, den)?;
        let ambiguity = match opts.tau0 {
            Some(s) => {
                if s < 0 {
                    value = value.neg();
                }
                notes.push(format!("sign fixed by tau0 = {s}"));
                Ambiguity::UpToMonomial
            }
            None => Ambiguity::UpToSignAndMonomial,
        };
        return Ok(TorsionResult { value, ambiguity, notes });
    }
    Err(Error::DegenerateDenominator(
        order.iter().map(|&k| format!("Phi({} - 1)", pres.generators[k])).collect::<Vec<_>>().join(", "),
    ))
}

/// Torsion of the twisted complex by the alternating determinant product.
pub fn complex_torsion(map: &TwistedMap) -> Result<TorsionResult> {
    let c = build_complex_from_presentation(map)?;
    let value = c.torsion()?;
    Ok(TorsionResult {
        value,
        ambiguity: Ambiguity::UpToSignAndMonomial,
        notes: vec![format!("chain groups of dimensions {:?}", c.dims())],
    })
}

/// The quotient when `r` is a Laurent polynomial.
pub fn is_polynomial(r: &RatFunc) -> Option<LaurentPoly> {
    r.as_poly()
}

/// Alexander polynomial of a one-variable abelianization, with minimum
/// degree zero.
pub fn classical_alexander(
    pres: &Presentation,
    phi: &AbelianizationMap,
    tower: &Arc<FieldTower>,
    vars: &Arc<Vec<String>>,
) -> Result<LaurentPoly> {
    if phi.nvars() != 1 {
        return Err(Error::InvalidInput("the Alexander polynomial needs one variable".into()));
    }
    let map = TwistedMap::abelian(pres, phi, tower, vars)?;
    let tors = wada_torsion(&map, &WadaOptions::default())?;
    let t_minus_1 = LaurentPoly::var(tower, vars, 0).sub(&LaurentPoly::one(tower, vars));
    let p = tors
        .value
        .mul(&RatFunc::from_poly(t_minus_1))
        .as_poly()
        .ok_or_else(|| Error::NonDivisible { remainder: tors.value.to_string() })?;
    Ok(p.canonical().0)
}

/// `p(c t)` for a one-variable polynomial.
pub fn rescale_variable(p: &LaurentPoly, c: &FieldScalar) -> Result<LaurentPoly> {
    let sub = Substitution::new(p.vars().clone(), vec![(c.clone(), vec![1])])?;
    p.substitute(&sub)
}

#[derive(Clone, Debug)]
pub struct AbelianFactorization {
    pub torsion: RatFunc,
    pub alexander: LaurentPoly,
    /// `Delta(xi^2 t) Delta(t) Delta(xi^-2 t) / ((t - xi^2)(t - 1)(t - xi^-2))`.
    pub product: RatFunc,
    /// Unit relating the two sides, when they agree.
    pub unit: Option<UnitClass>,
}

/// Compares the torsion at the diagonal representation (or at `rep`, a
/// representation with the same diagonal part) with the product of
/// rescaled Alexander polynomials.
pub fn abelian_factorization(
    pres: &Presentation,
    phi: &AbelianizationMap,
    xi: &FieldScalar,
    vars: &Arc<Vec<String>>,
    rep: Option<&SL2Rep>,
) -> Result<AbelianFactorization> {
    let tower = xi.tower();
    let built;
    let rho = match rep {
        Some(r) => r,
        None => {
            built = abelian_rep_build(phi, xi)?;
            &built
        }
    };
    let map = TwistedMap::adjoint(pres, rho, phi, vars)?;
    let torsion = wada_torsion(&map, &WadaOptions::default())?.value;
    let alexander = classical_alexander(pres, phi, tower, vars)?;
    let xi2 = xi.mul(xi);
    let xi2_inv = xi2.inv().ok_or_else(|| Error::NotInvertible(xi.to_string()))?;
    let num = rescale_variable(&alexander, &xi2)?.mul(&alexander).mul(&rescale_variable(&alexander, &xi2_inv)?);
    let t = LaurentPoly::var(tower, vars, 0);
    let lin = |c: &FieldScalar| t.sub(&LaurentPoly::constant(vars, c.clone()));
    let den = lin(&xi2).mul(&lin(&FieldScalar::one(tower))).mul(&lin(&xi2_inv));
    let product = RatFunc::new(num, den)?;
    let unit = ratfunc_unit(&torsion, &product);
    Ok(AbelianFactorization { torsion, alexander, product, unit })
}

/// The unit `u` with `a = u b` for fractions, if there is one.
pub fn ratfunc_unit(a: &RatFunc, b: &RatFunc) -> Option<UnitClass> {
    a.num().mul(b.den()).unit_equivalent(&b.num().mul(a.den()))
}

/// `Delta(t^{a_1}, ..., t^{a_n})` in the single variable `var`.
pub fn naturality_substitute(delta: &LaurentPoly, exps: &[i32], var: &str) -> Result<LaurentPoly> {
    if exps.len() != delta.nvars() {
        return Err(Error::InvalidSubstitution(format!("{} exponents for {} variables", exps.len(), delta.nvars())));
    }
    let target = Arc::new(vec![var.to_string()]);
    let sub = Substitution::monomials(delta.tower(), target, exps.iter().map(|&a| vec![a]).collect())?;
    delta.substitute(&sub)
}

#[derive(Clone, Debug)]
pub struct NaturalityCheck {
    pub substituted: RatFunc,
    pub recomputed: RatFunc,
    pub unit: Option<UnitClass>,
}

/// Substitutes into the multivariable torsion and recomputes the torsion
/// for the composed abelianization; both should agree up to a unit.
pub fn naturality_check(map: &TwistedMap, exps: &[i32], var: &str) -> Result<NaturalityCheck> {
    let full = wada_torsion(map, &WadaOptions::default())?.value;
    let target = Arc::new(vec![var.to_string()]);
    let sub = Substitution::monomials(map.tower(), target.clone(), exps.iter().map(|&a| vec![a]).collect())?;
    let substituted = full.map_polys(|p| p.substitute(&sub).expect("monomial substitution"))?;
    let phi = map.phi().compose(&exps.iter().map(|&a| vec![a]).collect::<Vec<_>>())?;
    let composed = TwistedMap::new(map.presentation(), &phi, map.coefficients().clone(), &target)?;
    let recomputed = wada_torsion(&composed, &WadaOptions::default())?.value;
    let unit = ratfunc_unit(&substituted, &recomputed);
    Ok(NaturalityCheck { substituted, recomputed, unit })
}
