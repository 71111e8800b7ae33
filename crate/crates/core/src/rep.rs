//! SL(2) representations, abelianization maps and the twisted map from the
//! group ring to matrices over Laurent polynomials.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{GroupRingElement, Presentation, Word};
use crate::ring::{Field, FieldScalar, FieldTower, LaurentPoly, Matrix, Ring};

/// One 2x2 matrix per generator.
#[derive(Clone, Debug, PartialEq)]
pub struct SL2Rep {
    matrices: Vec<Matrix<FieldScalar>>,
}

impl SL2Rep {
    pub fn new(matrices: Vec<Matrix<FieldScalar>>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::InvalidRepresentation("no generator matrices".into()));
        }
        for m in &matrices {
            if m.rows() != 2 || m.cols() != 2 {
                return Err(Error::InvalidRepresentation("generator matrices must be 2x2".into()));
            }
        }
        Ok(SL2Rep { matrices })
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        self.matrices[0].proto().tower()
    }

    pub fn matrices(&self) -> &[Matrix<FieldScalar>] {
        &self.matrices
    }

    pub fn generator(&self, g: usize) -> &Matrix<FieldScalar> {
        &self.matrices[g]
    }

    pub fn of_word(&self, w: &Word) -> Matrix<FieldScalar> {
        let proto = self.matrices[0].proto().clone();
        let mut acc = Matrix::identity(2, &proto.one_like());
        for &(g, e) in w.letters() {
            let m = if e > 0 { self.matrices[g].clone() } else { sl2_inverse(&self.matrices[g]) };
            acc = acc.mul(&m);
        }
        acc
    }

    /// `P rho P^-1` generator-wise.
    pub fn conjugate(&self, p: &Matrix<FieldScalar>) -> Result<Self> {
        let inv = p.inverse().ok_or_else(|| Error::InvalidRepresentation("conjugator is singular".into()))?;
        Ok(SL2Rep { matrices: self.matrices.iter().map(|m| p.mul(m).mul(&inv)).collect() })
    }

    /// Re-homes all entries into an extension of their tower.
    pub fn embed(&self, tower: &Arc<FieldTower>) -> Self {
        let proto = FieldScalar::zero(tower);
        SL2Rep { matrices: self.matrices.iter().map(|m| m.map(&proto, |x| x.embed(tower))).collect() }
    }
}

/// Inverse of a 2x2 matrix of determinant one.
pub fn sl2_inverse(m: &Matrix<FieldScalar>) -> Matrix<FieldScalar> {
    Matrix::from_rows(
        vec![vec![m[(1, 1)].clone(), m[(0, 1)].neg()], vec![m[(1, 0)].neg(), m[(0, 0)].clone()]],
        m.proto(),
    )
}

pub fn det2(m: &Matrix<FieldScalar>) -> FieldScalar {
    m[(0, 0)].mul(&m[(1, 1)]).sub(&m[(0, 1)].mul(&m[(1, 0)]))
}

/// Matrix of `X -> A X A^-1` on sl2 in the ordered basis `E, H, F`
/// (columns are images of basis vectors).
pub fn adjoint(a: &Matrix<FieldScalar>) -> Result<Matrix<FieldScalar>> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::InvalidRepresentation("adjoint needs a 2x2 matrix".into()));
    }
    if !det2(a).is_one() {
        return Err(Error::InvalidRepresentation(format!("determinant of {a} is not 1")));
    }
    let (p, q, r, s) = (&a[(0, 0)], &a[(0, 1)], &a[(1, 0)], &a[(1, 1)]);
    let two = p.from_i64_like(2);
    Ok(Matrix::from_rows(
        vec![
            vec![p.mul(p), two.mul(p).mul(q).neg(), q.mul(q).neg()],
            vec![p.mul(r).neg(), p.mul(s).add(&q.mul(r)), q.mul(s)],
            vec![r.mul(r).neg(), two.mul(r).mul(s), s.mul(s)],
        ],
        p,
    ))
}

/// Exponent vectors of the generators' images in `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianizationMap {
    images: Vec<Vec<i32>>,
    nvars: usize,
}

impl AbelianizationMap {
    pub fn new(images: Vec<Vec<i32>>, nvars: usize) -> Result<Self> {
        if images.iter().any(|v| v.len() != nvars) {
            return Err(Error::InvalidInput("abelianization images have the wrong length".into()));
        }
        Ok(AbelianizationMap { images, nvars })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn image(&self, g: usize) -> &[i32] {
        &self.images[g]
    }

    pub fn images(&self) -> &[Vec<i32>] {
        &self.images
    }

    pub fn of_word(&self, w: &Word) -> Vec<i32> {
        let mut v = vec![0; self.nvars];
        for &(g, e) in w.letters() {
            for (x, &y) in v.iter_mut().zip(&self.images[g]) {
                *x += e * y;
            }
        }
        v
    }

    /// `phi` followed by `Z^n -> Z^m`, `t_i -> s^{a[i]}` (`a[i]` has length `m`).
    pub fn compose(&self, a: &[Vec<i32>]) -> Result<Self> {
        if a.len() != self.nvars {
            return Err(Error::InvalidInput("composition matrix has the wrong size".into()));
        }
        let m = a.first().map_or(0, |r| r.len());
        let images = self
            .images
            .iter()
            .map(|v| (0..m).map(|j| v.iter().zip(a).map(|(x, row)| x * row[j]).sum()).collect())
            .collect();
        AbelianizationMap::new(images, m)
    }
}

/// Problems found by [`validate_representation`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn validate_representation(rho: &SL2Rep, phi: &AbelianizationMap, pres: &Presentation) -> ValidationReport {
    let mut failures = Vec::new();
    let n = pres.num_generators();
    if rho.matrices.len() != n {
        failures.push(format!("{} matrices for {} generators", rho.matrices.len(), n));
    }
    if phi.images.len() != n {
        failures.push(format!("{} abelianization images for {} generators", phi.images.len(), n));
    }
    if !failures.is_empty() {
        return ValidationReport { failures };
    }
    for (g, m) in rho.matrices.iter().enumerate() {
        let d = det2(m);
        if !d.is_one() {
            failures.push(format!("det rho({}) = {d}, not 1", pres.generators[g]));
        }
    }
    let id = Matrix::identity(2, &FieldScalar::one(rho.tower()));
    for (k, r) in pres.relators.iter().enumerate() {
        if rho.of_word(r) != id {
            failures.push(format!("rho(relator {}) is not the identity", k + 1));
        }
        if phi.of_word(r).iter().any(|&e| e != 0) {
            failures.push(format!("phi(relator {}) is not zero", k + 1));
        }
    }
    ValidationReport { failures }
}

/// `g -> diag(xi^{phi(g)}, xi^{-phi(g)})` for a one-variable `phi`.
pub fn abelian_rep_build(phi: &AbelianizationMap, xi: &FieldScalar) -> Result<SL2Rep> {
    if phi.nvars != 1 {
        return Err(Error::InvalidInput("abelian representation needs one variable".into()));
    }
    if xi.is_zero() {
        return Err(Error::InvalidRepresentation("xi must be nonzero".into()));
    }
    let zero = xi.zero_like();
    let matrices = phi
        .images
        .iter()
        .map(|v| {
            let k = v[0] as i64;
            let a = xi.pow_i(k).ok_or_else(|| Error::NotInvertible(xi.to_string()))?;
            let b = xi.pow_i(-k).ok_or_else(|| Error::NotInvertible(xi.to_string()))?;
            Ok(Matrix::from_rows(vec![vec![a, zero.clone()], vec![zero.clone(), b]], xi))
        })
        .collect::<Result<Vec<_>>>()?;
    SL2Rep::new(matrices)
}

/// Coefficient system of the twisted complex.
#[derive(Clone, Debug)]
pub enum Coefficients {
    /// `g -> t^{phi(g)} Ad(rho(g))` on the 3-dimensional sl2.
    Adjoint(SL2Rep),
    /// `g -> t^{phi(g)}` on a line.
    Abelian(Arc<FieldTower>),
}

/// The ring map from the group ring to matrices over Laurent polynomials.
///
/// Generators act by `t^{phi(g)}` times the adjoint of `rho(g)`, so that
/// the map is multiplicative in the usual order: `Phi(uv) = Phi(u) Phi(v)`.
#[derive(Clone, Debug)]
pub struct TwistedMap {
    pres: Presentation,
    phi: AbelianizationMap,
    coeffs: Coefficients,
    vars: Arc<Vec<String>>,
    /// Scalar part of each letter: `[g, g^-1]`.
    letters: Vec<[Matrix<FieldScalar>; 2]>,
}

impl TwistedMap {
    pub fn new(
        pres: &Presentation,
        phi: &AbelianizationMap,
        coeffs: Coefficients,
        vars: &Arc<Vec<String>>,
    ) -> Result<Self> {
        if phi.nvars != vars.len() {
            return Err(Error::InvalidInput(format!(
                "abelianization has {} coordinates but there are {} variables",
                phi.nvars,
                vars.len()
            )));
        }
        if phi.images.len() != pres.num_generators() {
            return Err(Error::InvalidInput("abelianization does not match the generators".into()));
        }
        let letters = match &coeffs {
            Coefficients::Adjoint(rho) => {
                if rho.matrices.len() != pres.num_generators() {
                    return Err(Error::InvalidRepresentation("representation does not match the generators".into()));
                }
                rho.matrices.iter().map(|m| Ok([adjoint(m)?, adjoint(&sl2_inverse(m))?])).collect::<Result<Vec<_>>>()?
            }
            Coefficients::Abelian(tower) => {
                let one = Matrix::identity(1, &FieldScalar::one(tower));
                vec![[one.clone(), one]; pres.num_generators()]
            }
        };
        Ok(TwistedMap { pres: pres.clone(), phi: phi.clone(), coeffs, vars: vars.clone(), letters })
    }

    pub fn adjoint(
        pres: &Presentation,
        rho: &SL2Rep,
        phi: &AbelianizationMap,
        vars: &Arc<Vec<String>>,
    ) -> Result<Self> {
        Self::new(pres, phi, Coefficients::Adjoint(rho.clone()), vars)
    }

    pub fn abelian(
        pres: &Presentation,
        phi: &AbelianizationMap,
        tower: &Arc<FieldTower>,
        vars: &Arc<Vec<String>>,
    ) -> Result<Self> {
        Self::new(pres, phi, Coefficients::Abelian(tower.clone()), vars)
    }

    /// Dimension of the coefficient module (3 or 1).
    pub fn dim(&self) -> usize {
        self.letters[0][0].rows()
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn phi(&self) -> &AbelianizationMap {
        &self.phi
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coeffs
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        self.letters[0][0].proto().tower()
    }

    fn scalar_part(&self, w: &Word) -> Matrix<FieldScalar> {
        let mut acc = Matrix::identity(self.dim(), &FieldScalar::one(self.tower()));
        for &(g, e) in w.letters() {
            acc = acc.mul(&self.letters[g][if e > 0 { 0 } else { 1 }]);
        }
        acc
    }

    pub fn apply_word(&self, w: &Word) -> Matrix<LaurentPoly> {
        self.apply(&GroupRingElement::from_word(w.clone()))
    }

    pub fn apply(&self, x: &GroupRingElement) -> Matrix<LaurentPoly> {
        let n = self.dim();
        let zero = LaurentPoly::zero(self.tower(), &self.vars);
        let mut out = Matrix::zeros(n, n, &zero);
        for (w, c) in x.terms() {
            let s = self.scalar_part(w);
            let shift = self.phi.of_word(w);
            let c = FieldScalar::from_i64(self.tower(), c);
            for i in 0..n {
                for j in 0..n {
                    let v = &s[(i, j)];
                    if !v.is_zero() {
                        let term = LaurentPoly::monomial(&self.vars, v.mul(&c), shift.clone());
                        out[(i, j)] = out[(i, j)].add(&term);
                    }
                }
            }
        }
        out
    }
}
