//! Seeded random inputs for the property checks: based complexes and short
//! exact sequences over `Q(t)`, and `SL_2` conjugators.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{multiplicativity_check, BasedChainComplex, MultiplicativityReport};
use crate::error::Result;
use crate::ring::{FieldScalar, FieldTower, LaurentPoly, Matrix, RatFunc, Ring};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The field `Q(t)` in which the random complexes live.
#[derive(Clone, Debug)]
pub struct RationalFunctions {
    pub tower: Arc<FieldTower>,
    pub vars: Arc<Vec<String>>,
}

impl Default for RationalFunctions {
    fn default() -> Self {
        RationalFunctions { tower: Arc::new(FieldTower::rationals()), vars: Arc::new(vec!["t".to_string()]) }
    }
}

impl RationalFunctions {
    pub fn zero(&self) -> RatFunc {
        RatFunc::zero(&self.tower, &self.vars)
    }

    pub fn one(&self) -> RatFunc {
        self.zero().one_like()
    }

    /// Polynomial of degree at most `deg` with coefficients in `-2..=2`.
    pub fn poly<R: Rng>(&self, rng: &mut R, deg: usize) -> RatFunc {
        let terms: Vec<(Vec<i32>, FieldScalar)> =
            (0..=deg).map(|k| (vec![k as i32], FieldScalar::from_i64(&self.tower, rng.gen_range(-2..=2)))).collect();
        RatFunc::from_poly(LaurentPoly::from_terms(&self.tower, &self.vars, terms))
    }

    fn nonzero_poly<R: Rng>(&self, rng: &mut R, deg: usize) -> RatFunc {
        loop {
            let p = self.poly(rng, deg);
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// Product of random elementary matrices with polynomial entries, and
    /// its inverse.
    pub fn unimodular<R: Rng>(&self, rng: &mut R, n: usize) -> (Matrix<RatFunc>, Matrix<RatFunc>) {
        let mut m = Matrix::identity(n, &self.zero());
        let mut inv = m.clone();
        if n < 2 {
            return (m, inv);
        }
        for _ in 0..n + 1 {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let c = self.poly(rng, 1);
            let mut e = Matrix::identity(n, &self.zero());
            e[(i, j)] = c.clone();
            let mut e_inv = Matrix::identity(n, &self.zero());
            e_inv[(i, j)] = c.neg();
            m = m.mul(&e);
            inv = e_inv.mul(&inv);
        }
        (m, inv)
    }

    /// A complex in degrees `0..dims.len()`, conjugate to a normal form in
    /// which each boundary is diagonal on a block of basis vectors.
    pub fn complex<R: Rng>(&self, rng: &mut R, dims: &[usize], acyclic: bool) -> BasedChainComplex<RatFunc> {
        let n = dims.len();
        // rank of d_i for i = 1..n-1, with rank(d_i) + rank(d_{i+1}) <= dims[i]
        let mut ranks = vec![0usize; n + 1];
        for i in 1..n {
            let room = dims[i - 1] - ranks[i - 1];
            let cap = room.min(dims[i]);
            ranks[i] = if acyclic { room } else { rng.gen_range(0..=cap) };
        }
        if acyclic {
            assert_eq!(ranks[n - 1], dims[n - 1], "dimensions admit no acyclic complex");
        }
        let zero = self.zero();
        let mut normal: Vec<Matrix<RatFunc>> = Vec::new();
        for i in 1..n {
            // d_i maps the first ranks[i] basis vectors of C_i onto the last
            // ranks[i] basis vectors of C_{i-1}.
            let mut d = Matrix::zeros(dims[i - 1], dims[i], &zero);
            let off = dims[i - 1] - ranks[i];
            for k in 0..ranks[i] {
                d[(off + k, k)] = self.nonzero_poly(rng, 1);
            }
            normal.push(d);
        }
        let changes: Vec<_> = dims.iter().map(|&d| self.unimodular(rng, d)).collect();
        let boundaries = (1..n).map(|i| changes[i - 1].1.mul(&normal[i - 1]).mul(&changes[i].0)).collect();
        BasedChainComplex::new(dims.to_vec(), boundaries, &zero).expect("conjugated normal form is a complex")
    }

    /// Dimensions admitting an acyclic complex, with entries at most `max`.
    pub fn acyclic_dims<R: Rng>(&self, rng: &mut R, len: usize, max: usize) -> Vec<usize> {
        loop {
            let ranks: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=max)).collect();
            let dims: Vec<usize> =
                (0..=len).map(|i| if i == 0 { 0 } else { ranks[i - 1] } + ranks.get(i).copied().unwrap_or(0)).collect();
            if dims.iter().all(|&d| d <= max) && dims.iter().any(|&d| d > 0) {
                return dims;
            }
        }
    }
}

/// A short exact sequence `0 -> C' -> C -> C'' -> 0` with its maps.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub sub: BasedChainComplex<RatFunc>,
    pub total: BasedChainComplex<RatFunc>,
    pub quotient: BasedChainComplex<RatFunc>,
    pub inclusions: Vec<Matrix<RatFunc>>,
    pub projections: Vec<Matrix<RatFunc>>,
}

impl ShortExactSequence {
    pub fn check(&self) -> Result<MultiplicativityReport<RatFunc>> {
        multiplicativity_check(&self.sub, &self.total, &self.quotient, &self.inclusions, &self.projections)
    }
}

fn with_standard_bases(c: BasedChainComplex<RatFunc>) -> BasedChainComplex<RatFunc> {
    let bases = c.standard_homology_bases();
    c.with_homology_bases(bases).expect("standard bases are valid")
}

/// A random short exact sequence of complexes of length at most 3 with
/// chain groups of dimension at most `max_dim`.
///
/// `C` is an extension of `C''` by `C'` whose off-diagonal block is a
/// null-homotopic part plus a cycle-cocycle product, so the connecting map
/// is usually nonzero; its basis is then changed by a determinant-one
/// matrix.
pub fn random_short_exact_sequence<R: Rng>(q: &RationalFunctions, rng: &mut R, max_dim: usize) -> ShortExactSequence {
    let len = rng.gen_range(1..=3);
    let top = max_dim / 2;
    let dims_s: Vec<usize> = (0..=len).map(|_| rng.gen_range(0..=top)).collect();
    let dims_q: Vec<usize> = (0..=len).map(|_| rng.gen_range(0..=max_dim - top)).collect();
    let sub = q.complex(rng, &dims_s, false);
    let quotient = q.complex(rng, &dims_q, false);
    let zero = q.zero();
    let bd = |c: &BasedChainComplex<RatFunc>, i: usize| c.boundary(i).cloned().expect("degree in range");

    let ys: Vec<Matrix<RatFunc>> = (0..=len)
        .map(|i| {
            let entries: Vec<Vec<RatFunc>> =
                (0..dims_s[i]).map(|_| (0..dims_q[i]).map(|_| q.poly(rng, 1)).collect()).collect();
            Matrix::from_fn(dims_s[i], dims_q[i], &zero, |a, b| entries[a][b].clone())
        })
        .collect();
    let cycles_s: Vec<Vec<Vec<RatFunc>>> = (0..=len)
        .map(|i| match sub.boundary(i) {
            Some(d) => d.nullspace(),
            None => (0..dims_s[i]).map(|j| unit(dims_s[i], j, &zero)).collect(),
        })
        .collect();
    let cocycles_q: Vec<Vec<Vec<RatFunc>>> = (0..=len)
        .map(|i| match quotient.boundary(i + 1) {
            Some(d) => d.transpose().nullspace(),
            None => (0..dims_q[i]).map(|j| unit(dims_q[i], j, &zero)).collect(),
        })
        .collect();

    let mut total_bd = Vec::new();
    for i in 1..=len {
        // X_i : C''_i -> C'_{i-1}
        let mut x = bd(&sub, i).mul(&ys[i]).sub(&ys[i - 1].mul(&bd(&quotient, i)));
        if !cycles_s[i - 1].is_empty() && !cocycles_q[i].is_empty() && rng.gen_bool(0.7) {
            let z = &cycles_s[i - 1][rng.gen_range(0..cycles_s[i - 1].len())];
            let w = &cocycles_q[i][rng.gen_range(0..cocycles_q[i].len())];
            x = x.add(&Matrix::from_fn(z.len(), w.len(), &zero, |a, b| z[a].mul(&w[b])));
        }
        let top_row = bd(&sub, i).hstack(&x);
        let bottom = Matrix::zeros(dims_q[i - 1], dims_s[i], &zero).hstack(&bd(&quotient, i));
        total_bd.push(top_row.vstack(&bottom));
    }
    let dims: Vec<usize> = (0..=len).map(|i| dims_s[i] + dims_q[i]).collect();

    // Determinant-one base change on each C_i.
    let changes: Vec<_> = dims.iter().map(|&d| q.unimodular(rng, d)).collect();
    let total_bd = (1..=len).map(|i| changes[i - 1].1.mul(&total_bd[i - 1]).mul(&changes[i].0)).collect();
    let inclusions = (0..=len)
        .map(|i| {
            let block = Matrix::identity(dims_s[i], &zero).vstack(&Matrix::zeros(dims_q[i], dims_s[i], &zero));
            changes[i].1.mul(&block)
        })
        .collect();
    let projections = (0..=len)
        .map(|i| {
            let block = Matrix::zeros(dims_q[i], dims_s[i], &zero).hstack(&Matrix::identity(dims_q[i], &zero));
            block.mul(&changes[i].0)
        })
        .collect();
    let total = BasedChainComplex::new(dims, total_bd, &zero).expect("extension is a complex");
    ShortExactSequence {
        sub: with_standard_bases(sub),
        total: with_standard_bases(total),
        quotient: with_standard_bases(quotient),
        inclusions,
        projections,
    }
}

fn unit(n: usize, j: usize, zero: &RatFunc) -> Vec<RatFunc> {
    (0..n).map(|k| if k == j { zero.one_like() } else { zero.clone() }).collect()
}

/// A random element of `SL_2(Z)`, a product of elementary matrices.
pub fn random_sl2<R: Rng>(tower: &Arc<FieldTower>, rng: &mut R) -> Matrix<FieldScalar> {
    let one = FieldScalar::one(tower);
    let zero = FieldScalar::zero(tower);
    let mut m = Matrix::identity(2, &one);
    for k in 0..rng.gen_range(2..=4) {
        let c = FieldScalar::from_i64(tower, rng.gen_range(-3..=3));
        let e = if k % 2 == 0 {
            Matrix::from_rows(vec![vec![one.clone(), c], vec![zero.clone(), one.clone()]], &one)
        } else {
            Matrix::from_rows(vec![vec![one.clone(), zero.clone()], vec![c, one.clone()]], &one)
        };
        m = m.mul(&e);
    }
    m
}
