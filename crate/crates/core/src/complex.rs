//! Based chain complexes over a field, their sign-determined torsion, and a
//! checker for the multiplicativity of torsion along short exact sequences.

use crate::error::{Error, Result};
use crate::par::par_range;
use crate::ring::matrix::PivotRule;
use crate::ring::{Field, Matrix};

/// `0 -> C_n -> ... -> C_0 -> 0` with coordinate bases, boundaries given as
/// matrices acting on column vectors, and optional homology bases.
#[derive(Clone, Debug)]
pub struct BasedChainComplex<T> {
    dims: Vec<usize>,
    /// `boundaries[i - 1]` is `d_i : C_i -> C_{i-1}`, a `dims[i-1] x dims[i]` matrix.
    boundaries: Vec<Matrix<T>>,
    homology_bases: Option<Vec<Vec<Vec<T>>>>,
    proto: T,
}

impl<T: Field> BasedChainComplex<T> {
    pub fn new(dims: Vec<usize>, boundaries: Vec<Matrix<T>>, proto: &T) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidComplex("a complex needs at least one chain group".into()));
        }
        if boundaries.len() + 1 != dims.len() {
            return Err(Error::InvalidComplex(format!(
                "{} chain groups need {} boundary maps, got {}",
                dims.len(),
                dims.len() - 1,
                boundaries.len()
            )));
        }
        for (k, d) in boundaries.iter().enumerate() {
            let i = k + 1;
            if d.rows() != dims[i - 1] || d.cols() != dims[i] {
                return Err(Error::InvalidComplex(format!(
                    "d_{i} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    dims[i - 1],
                    dims[i]
                )));
            }
        }
        for k in 1..boundaries.len() {
            if !boundaries[k - 1].mul(&boundaries[k]).is_zero() {
                return Err(Error::InvalidComplex(format!("d_{} d_{} is not zero", k, k + 1)));
            }
        }
        Ok(BasedChainComplex { dims, boundaries, homology_bases: None, proto: proto.zero_like() })
    }

    /// Attaches homology bases (one list of cycles per degree), checking
    /// that they are cycles representing a basis of homology.
    pub fn with_homology_bases(mut self, bases: Vec<Vec<Vec<T>>>) -> Result<Self> {
        if bases.len() != self.dims.len() {
            return Err(Error::InvalidHomologyBasis { degree: 0, reason: "one list per degree is required".into() });
        }
        let ranks = self.homology_ranks();
        for (i, hs) in bases.iter().enumerate() {
            if hs.len() != ranks[i] {
                return Err(Error::InvalidHomologyBasis {
                    degree: i,
                    reason: format!("{} vectors given, homology has rank {}", hs.len(), ranks[i]),
                });
            }
            for h in hs {
                if h.len() != self.dims[i] {
                    return Err(Error::InvalidHomologyBasis { degree: i, reason: "wrong vector length".into() });
                }
                if let Some(d) = self.boundary(i) {
                    if d.mul_vec(h).iter().any(|x| !x.is_zero()) {
                        return Err(Error::InvalidHomologyBasis { degree: i, reason: "not a cycle".into() });
                    }
                }
            }
            if !hs.is_empty() {
                let img = self.image_basis(i + 1, PivotRule::Leftmost);
                let m = self.columns(i, img.iter().chain(hs.iter()));
                if m.rank() != img.len() + hs.len() {
                    return Err(Error::InvalidHomologyBasis { degree: i, reason: "classes are dependent".into() });
                }
            }
        }
        self.homology_bases = Some(bases);
        Ok(self)
    }

    pub fn length(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn proto(&self) -> &T {
        &self.proto
    }

    /// `d_i` for `1 <= i <= n`.
    pub fn boundary(&self, i: usize) -> Option<&Matrix<T>> {
        if i == 0 {
            None
        } else {
            self.boundaries.get(i - 1)
        }
    }

    pub fn homology_bases(&self) -> Option<&Vec<Vec<Vec<T>>>> {
        self.homology_bases.as_ref()
    }

    fn rank_of(&self, i: usize) -> usize {
        self.boundary(i).map_or(0, |d| d.rank())
    }

    /// `dim H_i = dim ker d_i - rank d_{i+1}`.
    pub fn homology_ranks(&self) -> Vec<usize> {
        let ranks = par_range(self.dims.len() + 1, |i| self.rank_of(i));
        (0..self.dims.len()).map(|i| self.dims[i] - ranks[i] - ranks[i + 1]).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology_ranks().iter().all(|&r| r == 0)
    }

    /// Columns `d_i e_j` for the pivot columns `j` of `d_i`: a basis of the
    /// image of `d_i` inside `C_{i-1}`.
    fn image_basis(&self, i: usize, rule: PivotRule) -> Vec<Vec<T>> {
        match self.boundary(i) {
            Some(d) => d.pivot_columns(rule).into_iter().map(|j| d.col(j)).collect(),
            None => Vec::new(),
        }
    }

    fn columns<'a>(&self, i: usize, cols: impl Iterator<Item = &'a Vec<T>>) -> Matrix<T> {
        let cols: Vec<&Vec<T>> = cols.collect();
        Matrix::from_fn(self.dims[i], cols.len(), &self.proto, |r, c| cols[c][r].clone())
    }

    /// A deterministic choice of homology bases: cycles completing the
    /// image of the next boundary to a basis of the cycles.
    pub fn standard_homology_bases(&self) -> Vec<Vec<Vec<T>>> {
        (0..self.dims.len())
            .map(|i| {
                let img = self.image_basis(i + 1, PivotRule::Leftmost);
                let cycles = match self.boundary(i) {
                    Some(d) => d.nullspace(),
                    None => (0..self.dims[i]).map(|j| unit(self.dims[i], j, &self.proto)).collect(),
                };
                let m = self.columns(i, img.iter().chain(cycles.iter()));
                m.pivot_columns(PivotRule::Leftmost)
                    .into_iter()
                    .filter(|&c| c >= img.len())
                    .map(|c| cycles[c - img.len()].clone())
                    .collect()
            })
            .collect()
    }

    /// `alpha_i = sum_{k <= i} dim C_k` (constant past the top degree).
    pub fn alpha(&self, i: isize) -> usize {
        if i < 0 {
            return 0;
        }
        self.dims.iter().take(i as usize + 1).sum()
    }

    /// `beta_i = sum_{k <= i} dim H_k`, from the given ranks.
    pub fn beta(ranks: &[usize], i: isize) -> usize {
        if i < 0 {
            return 0;
        }
        ranks.iter().take(i as usize + 1).sum()
    }

    /// `|C| = sum_k alpha_k beta_k`.
    pub fn sign_exponent(&self) -> usize {
        let ranks = self.homology_ranks();
        (0..self.dims.len() as isize).map(|k| self.alpha(k) * Self::beta(&ranks, k)).sum()
    }

    /// The sign-determined torsion with the leftmost pivot rule.
    pub fn torsion(&self) -> Result<T> {
        self.torsion_with(PivotRule::Leftmost)
    }

    /// The sign-determined torsion, choosing the vectors `b^(i)` as the
    /// pivot columns of `d_i` under `rule`.
    pub fn torsion_with(&self, rule: PivotRule) -> Result<T> {
        let n = self.length();
        let ranks = self.homology_ranks();
        let empty: Vec<Vec<Vec<T>>>;
        let hb = match &self.homology_bases {
            Some(h) => h,
            None => {
                if ranks.iter().any(|&r| r > 0) {
                    return Err(Error::NotAcyclicWithoutBases(ranks));
                }
                empty = vec![Vec::new(); n + 1];
                &empty
            }
        };
        let pivots: Vec<Vec<usize>> =
            (0..=n + 1).map(|i| self.boundary(i).map_or(Vec::new(), |d| d.pivot_columns(rule))).collect();
        let dets = par_range(n + 1, |i| -> Result<T> {
            let mut cols: Vec<Vec<T>> = Vec::with_capacity(self.dims[i]);
            if let Some(d) = self.boundary(i + 1) {
                cols.extend(pivots[i + 1].iter().map(|&j| d.col(j)));
            }
            cols.extend(hb[i].iter().cloned());
            cols.extend(pivots[i].iter().map(|&j| unit(self.dims[i], j, &self.proto)));
            if cols.len() != self.dims[i] {
                return Err(Error::InvalidHomologyBasis {
                    degree: i,
                    reason: format!(
                        "{} vectors do not form a basis of a {}-dimensional space",
                        cols.len(),
                        self.dims[i]
                    ),
                });
            }
            let m = self.columns(i, cols.iter());
            let det = m.det_field();
            if det.is_zero() {
                return Err(Error::InvalidHomologyBasis { degree: i, reason: "transition matrix is singular".into() });
            }
            Ok(det)
        });
        let mut acc = self.proto.one_like();
        for (i, det) in dets.into_iter().enumerate() {
            let det = det?;
            acc = if i % 2 == 1 { acc.mul(&det) } else { acc.div(&det).expect("nonzero determinant") };
        }
        let sign: usize = (0..=n as isize).map(|k| self.alpha(k) * Self::beta(&ranks, k)).sum();
        Ok(if sign % 2 == 1 { acc.neg() } else { acc })
    }

    /// Coordinates of the class of the cycle `z` in degree `i` with respect
    /// to the attached homology basis.
    pub fn homology_coordinates(&self, i: usize, z: &[T]) -> Result<Vec<T>> {
        let hb = self.homology_bases.as_ref().ok_or(Error::NotAcyclicWithoutBases(self.homology_ranks()))?;
        let img = self.image_basis(i + 1, PivotRule::Leftmost);
        let m = self.columns(i, img.iter().chain(hb[i].iter()));
        let x = m
            .solve(z)
            .ok_or_else(|| Error::InvalidHomologyBasis { degree: i, reason: "vector is not a cycle".into() })?;
        Ok(x[img.len()..].to_vec())
    }
}

fn unit<T: Field>(n: usize, j: usize, proto: &T) -> Vec<T> {
    let mut v = vec![proto.zero_like(); n];
    v[j] = proto.one_like();
    v
}

/// Both sides of the multiplicativity identity for `0 -> C' -> C -> C'' -> 0`.
#[derive(Clone, Debug)]
pub struct MultiplicativityReport<T> {
    pub torsion: T,
    pub torsion_sub: T,
    pub torsion_quotient: T,
    pub torsion_homology: T,
    pub alpha: usize,
    pub epsilon: usize,
    /// `(-1)^{alpha + epsilon} tor(C') tor(C'') tor(H)`.
    pub rhs: T,
    pub holds: bool,
}

/// Checks the multiplicativity of torsion. `inclusions[i]` and
/// `projections[i]` are the degree-`i` maps `C'_i -> C_i` and `C_i -> C''_i`.
/// All three complexes must carry homology bases (or be acyclic).
pub fn multiplicativity_check<T: Field>(
    sub: &BasedChainComplex<T>,
    total: &BasedChainComplex<T>,
    quotient: &BasedChainComplex<T>,
    inclusions: &[Matrix<T>],
    projections: &[Matrix<T>],
) -> Result<MultiplicativityReport<T>> {
    let len = sub.length().max(total.length()).max(quotient.length());
    let proto = total.proto.clone();
    let dim = |c: &BasedChainComplex<T>, i: usize| c.dims.get(i).copied().unwrap_or(0);
    let zero_map = |r: usize, c: usize| Matrix::zeros(r, c, &proto);
    let inc = |i: usize| inclusions.get(i).cloned().unwrap_or_else(|| zero_map(dim(total, i), dim(sub, i)));
    let proj = |i: usize| projections.get(i).cloned().unwrap_or_else(|| zero_map(dim(quotient, i), dim(total, i)));
    let bd = |c: &BasedChainComplex<T>, i: usize| {
        c.boundary(i).cloned().unwrap_or_else(|| zero_map(dim(c, i.saturating_sub(1)), dim(c, i)))
    };

    // Exactness and chain-map checks.
    for i in 0..=len {
        let (a, b) = (inc(i), proj(i));
        if a.rows() != dim(total, i)
            || a.cols() != dim(sub, i)
            || b.rows() != dim(quotient, i)
            || b.cols() != dim(total, i)
        {
            return Err(Error::NotExact(format!("maps in degree {i} have the wrong shape")));
        }
        if dim(total, i) != dim(sub, i) + dim(quotient, i) {
            return Err(Error::NotExact(format!("dimensions do not add up in degree {i}")));
        }
        if a.rank() != dim(sub, i) {
            return Err(Error::NotExact(format!("inclusion has rank {} in degree {i}", a.rank())));
        }
        if b.rank() != dim(quotient, i) {
            return Err(Error::NotExact(format!("projection has rank {} in degree {i}", b.rank())));
        }
        if dim(sub, i) > 0 && dim(quotient, i) > 0 && !b.mul(&a).is_zero() {
            return Err(Error::NotExact(format!("projection after inclusion is not zero in degree {i}")));
        }
        if i >= 1 {
            if !bd(total, i).mul(&a).sub(&inc(i - 1).mul(&bd(sub, i))).is_zero() {
                return Err(Error::NotExact(format!("inclusion is not a chain map in degree {i}")));
            }
            if !bd(quotient, i).mul(&b).sub(&proj(i - 1).mul(&bd(total, i))).is_zero() {
                return Err(Error::NotExact(format!("projection is not a chain map in degree {i}")));
            }
        }
    }

    // Lifts of the quotient basis; compatibility of the bases.
    let lifts: Vec<Vec<Vec<T>>> = (0..=len)
        .map(|i| {
            (0..dim(quotient, i))
                .map(|j| proj(i).solve(&unit(dim(quotient, i), j, &proto)).expect("projection is onto"))
                .collect()
        })
        .collect();
    for i in 0..=len {
        if dim(total, i) == 0 {
            continue;
        }
        let a = inc(i);
        let cols: Vec<Vec<T>> = (0..a.cols()).map(|j| a.col(j)).chain(lifts[i].iter().cloned()).collect();
        let m = Matrix::from_fn(dim(total, i), cols.len(), &proto, |r, c| cols[c][r].clone());
        let det = m.det_field();
        if !det.is_one() {
            return Err(Error::IncompatibleBases(format!("transition determinant {det} in degree {i}")));
        }
    }

    let with_bases = |c: &BasedChainComplex<T>| -> BasedChainComplex<T> {
        if c.homology_bases.is_some() {
            c.clone()
        } else {
            let b = c.standard_homology_bases();
            c.clone().with_homology_bases(b).expect("standard bases are valid")
        }
    };
    let (sub, total, quotient) = (with_bases(sub), with_bases(total), with_bases(quotient));
    let hb = |c: &BasedChainComplex<T>, i: usize| -> Vec<Vec<T>> {
        c.homology_bases.as_ref().unwrap().get(i).cloned().unwrap_or_default()
    };

    // The long exact sequence as an acyclic complex:
    // H_{3i+2} = H_i(C'), H_{3i+1} = H_i(C), H_{3i} = H_i(C'').
    let top = 3 * len + 2;
    let mut hdims = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let i = k / 3;
        hdims.push(match k % 3 {
            2 => hb(&sub, i).len(),
            1 => hb(&total, i).len(),
            _ => hb(&quotient, i).len(),
        });
    }
    let mut hbd = Vec::with_capacity(top);
    for k in 1..=top {
        let i = k / 3;
        let cols: Vec<Vec<T>> = match k % 3 {
            // H_i(C') -> H_i(C)
            2 => {
                hb(&sub, i).iter().map(|h| total.homology_coordinates(i, &inc(i).mul_vec(h))).collect::<Result<_>>()?
            }
            // H_i(C) -> H_i(C'')
            1 => hb(&total, i)
                .iter()
                .map(|h| quotient.homology_coordinates(i, &proj(i).mul_vec(h)))
                .collect::<Result<_>>()?,
            // connecting map H_i(C'') -> H_{i-1}(C')
            _ => hb(&quotient, i)
                .iter()
                .map(|h| {
                    let lift = proj(i).solve(h).expect("projection is onto");
                    let dl = bd(&total, i).mul_vec(&lift);
                    let z = inc(i - 1)
                        .solve(&dl)
                        .ok_or_else(|| Error::NotExact("boundary of a lift is not in the subcomplex".into()))?;
                    sub.homology_coordinates(i - 1, &z)
                })
                .collect::<Result<_>>()?,
        };
        hbd.push(Matrix::from_fn(hdims[k - 1], hdims[k], &proto, |r, c| cols[c][r].clone()));
    }
    let hcx = BasedChainComplex::new(hdims, hbd, &proto)?;
    if !hcx.is_acyclic() {
        return Err(Error::NotExact("homology sequence is not exact".into()));
    }

    let ts = sub.torsion()?;
    let t = total.torsion()?;
    let tq = quotient.torsion()?;
    let th = hcx.torsion()?;

    let (rs, r, rq) = (sub.homology_ranks(), total.homology_ranks(), quotient.homology_ranks());
    let beta = BasedChainComplex::<T>::beta;
    let mut alpha = 0;
    let mut epsilon = 0;
    for i in 0..=len as isize {
        alpha += sub.alpha(i - 1) * quotient.alpha(i);
        epsilon += (beta(&r, i) + 1) * (beta(&rs, i) + beta(&rq, i)) + beta(&rs, i - 1) * beta(&rq, i);
    }
    let mut rhs = ts.mul(&tq).mul(&th);
    if (alpha + epsilon) % 2 == 1 {
        rhs = rhs.neg();
    }
    let holds = rhs == t;
    Ok(MultiplicativityReport {
        torsion: t,
        torsion_sub: ts,
        torsion_quotient: tq,
        torsion_homology: th,
        alpha,
        epsilon,
        rhs,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational::rat;
    use num_rational::BigRational;

    fn q(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), &rat(0))
    }

    #[test]
    fn two_term_complex() {
        let c = BasedChainComplex::new(vec![1, 1], vec![q(&[&[2]])], &rat(0)).unwrap();
        assert_eq!(c.homology_ranks(), vec![0, 0]);
        assert_eq!(c.torsion().unwrap(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn degree_zero_with_homology() {
        let c = BasedChainComplex::new(vec![1], vec![], &rat(0)).unwrap();
        assert!(matches!(c.torsion(), Err(Error::NotAcyclicWithoutBases(_))));
        let c = c.with_homology_bases(vec![vec![vec![rat(2)]]]).unwrap();
        assert_eq!(c.torsion().unwrap(), BigRational::new((-1).into(), 2.into()));
    }

    #[test]
    fn rejects_non_complexes() {
        assert!(BasedChainComplex::new(vec![1, 1, 1], vec![q(&[&[1]]), q(&[&[1]])], &rat(0)).is_err());
        assert!(BasedChainComplex::new(vec![1, 2], vec![q(&[&[1]])], &rat(0)).is_err());
    }

    #[test]
    fn direct_sum_sequence() {
        let c1 = BasedChainComplex::new(vec![1, 1], vec![q(&[&[2]])], &rat(0)).unwrap();
        let c2 = BasedChainComplex::new(vec![1, 1], vec![q(&[&[3]])], &rat(0)).unwrap();
        let c = BasedChainComplex::new(vec![2, 2], vec![q(&[&[2, 0], &[0, 3]])], &rat(0)).unwrap();
        let inc = vec![q(&[&[1], &[0]]), q(&[&[1], &[0]])];
        let proj = vec![q(&[&[0, 1]]), q(&[&[0, 1]])];
        let r = multiplicativity_check(&c1, &c, &c2, &inc, &proj).unwrap();
        assert!(r.holds);
        assert_eq!(r.torsion, BigRational::new(1.into(), 6.into()));
    }
}
