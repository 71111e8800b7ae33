//! Dense matrices over the coefficient rings, with exact determinants and
//! linear algebra over fields.

use std::fmt;

use super::{Domain, Field, Ring};
use crate::par::par_range;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
    /// Prototype used to build constants, needed for empty matrices.
    zero: T,
}

/// Which pivot to take when several columns qualify.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotRule {
    Leftmost,
    Rightmost,
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, zero: &T) -> Self {
        let zero = zero.zero_like();
        Matrix { rows, cols, data: vec![zero.clone(); rows * cols], zero }
    }

    pub fn identity(n: usize, proto: &T) -> Self {
        let mut m = Self::zeros(n, n, proto);
        for i in 0..n {
            m[(i, i)] = proto.one_like();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>, proto: &T) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect(), zero: proto.zero_like() }
    }

    pub fn from_fn(rows: usize, cols: usize, proto: &T, f: impl Fn(usize, usize) -> T) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { rows, cols, data, zero: proto.zero_like() }
    }

    /// A column vector.
    pub fn column(v: Vec<T>, proto: &T) -> Self {
        let n = v.len();
        Matrix { rows: n, cols: 1, data: v, zero: proto.zero_like() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn proto(&self) -> &T {
        &self.zero
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, &self.zero, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Ring>(&self, proto: &U, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect(), zero: proto.zero_like() }
    }

    pub fn try_map<U: Ring, E>(&self, proto: &U, f: impl Fn(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>, E>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data, zero: proto.zero_like() })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data, zero: self.zero.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data, zero: self.zero.clone() }
    }

    pub fn neg(&self) -> Self {
        self.map(&self.zero, |x| x.neg())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(&self.zero, |x| x.mul(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let (n, m) = (self.rows, other.cols);
        let data = par_range(n * m, |k| {
            let (i, j) = (k / m, k % m);
            let mut acc = self.zero.clone();
            for l in 0..self.cols {
                let a = &self[(i, l)];
                let b = &other[(l, j)];
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        });
        Matrix { rows: n, cols: m, data, zero: self.zero.clone() }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.zero.clone(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), &self.zero, |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "shape mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, &self.zero, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "shape mismatch");
        Self::from_fn(self.rows + other.rows, self.cols, &self.zero, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    /// Matrix assembled from a grid of equally sized blocks.
    pub fn from_blocks(blocks: &[Vec<Matrix<T>>], block_rows: usize, block_cols: usize, proto: &T) -> Self {
        let br = blocks.len();
        let bc = blocks.first().map_or(0, |r| r.len());
        Self::from_fn(br * block_rows, bc * block_cols, proto, |i, j| {
            blocks[i / block_rows][j / block_cols][(i % block_rows, j % block_cols)].clone()
        })
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(self.zero.clone(), |acc, i| acc.add(&self[(i, i)]))
    }

    /// Determinant by the division-free Berkowitz algorithm.
    pub fn det_berkowitz(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let one = self.zero.one_like();
        if n == 0 {
            return one;
        }
        let mut c = vec![one.clone(), self[(0, 0)].neg()];
        for r in 1..n {
            let mut t = vec![one.clone(), self[(r, r)].neg()];
            let mut v: Vec<T> = (0..r).map(|i| self[(i, r)].clone()).collect();
            for k in 0..r {
                let rv = (0..r).fold(self.zero.clone(), |acc, j| acc.add(&self[(r, j)].mul(&v[j])));
                t.push(rv.neg());
                if k + 1 < r {
                    v = par_range(r, |i| (0..r).fold(self.zero.clone(), |acc, j| acc.add(&self[(i, j)].mul(&v[j]))));
                }
            }
            c = (0..r + 2)
                .map(|i| {
                    (0..=i.min(r))
                        .filter(|&j| j < c.len())
                        .fold(self.zero.clone(), |acc, j| acc.add(&t[i - j].mul(&c[j])))
                })
                .collect();
        }
        if n % 2 == 0 {
            c[n].clone()
        } else {
            c[n].neg()
        }
    }

    /// Determinant by Laplace expansion along the first row (exponential;
    /// meant as an independent check).
    pub fn det_cofactor(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return self.zero.one_like();
        }
        if n == 1 {
            return self[(0, 0)].clone();
        }
        let terms = par_range(n, |j| {
            if self[(0, j)].is_zero() {
                return self.zero.clone();
            }
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let term = self[(0, j)].mul(&self.select(&rows, &cols).det_cofactor());
            if j % 2 == 0 {
                term
            } else {
                term.neg()
            }
        });
        terms.iter().fold(self.zero.clone(), |acc, t| acc.add(t))
    }
}

impl<T: Domain> Matrix<T> {
    /// Determinant by fraction-free Bareiss elimination.
    pub fn det_bareiss(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return self.zero.one_like();
        }
        let mut m: Vec<Vec<T>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = self.zero.one_like();
        for k in 0..n - 1 {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return self.zero.clone();
            };
            if p != k {
                m.swap(p, k);
                negate = !negate;
            }
            let pivot_row = m[k].clone();
            let lower: Vec<Vec<T>> = m.drain(k + 1..).collect();
            let updated = crate::par::par_map(lower, |row| {
                let mut out = row.clone();
                for j in k + 1..n {
                    let v = row[j].mul(&pivot_row[k]).sub(&row[k].mul(&pivot_row[j]));
                    out[j] = v.divide_exact(&prev).expect("Bareiss division is exact");
                }
                out[k] = row[k].zero_like();
                out
            });
            m.extend(updated);
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if negate {
            d.neg()
        } else {
            d
        }
    }

    /// Determinant: Bareiss when the ring prefers exact division, Laplace
    /// expansion for tiny matrices, Berkowitz otherwise.
    pub fn det(&self) -> T {
        if self.zero.prefers_exact_division() {
            self.det_bareiss()
        } else if self.rows <= 3 {
            self.det_cofactor()
        } else {
            self.det_berkowitz()
        }
    }
}

impl<T: Field> Matrix<T> {
    /// Determinant computed over the integral ring: denominators are cleared
    /// row by row, the integral determinant is taken, and the row factors
    /// are divided back out.
    pub fn det_field(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return self.zero.one_like();
        }
        let split: Vec<Vec<(T::Integral, T::Integral)>> =
            (0..n).map(|i| self.row(i).iter().map(|x| x.split_fraction()).collect()).collect();
        let iproto = split[0][0].0.zero_like();
        let mut factors = iproto.one_like();
        let mut rows = Vec::with_capacity(n);
        for row in split {
            let mut dens: Vec<T::Integral> = Vec::new();
            for (num, den) in &row {
                if !num.is_zero() && !den.is_one() && !dens.contains(den) {
                    dens.push(den.clone());
                }
            }
            let d = dens.iter().fold(iproto.one_like(), |acc, x| acc.mul(x));
            let cleared: Vec<T::Integral> = row
                .iter()
                .map(|(num, den)| {
                    if num.is_zero() {
                        iproto.clone()
                    } else {
                        num.mul(&d.divide_exact(den).expect("row denominator divides the product"))
                    }
                })
                .collect();
            factors = factors.mul(&d);
            rows.push(cleared);
        }
        let det = Matrix::from_rows(rows, &iproto).det();
        T::from_integral(&det).div(&T::from_integral(&factors)).expect("nonzero denominators")
    }

    /// Reduced row echelon form and its pivot columns. With
    /// [`PivotRule::Rightmost`] columns are scanned from the right.
    pub fn rref(&self, rule: PivotRule) -> (Matrix<T>, Vec<usize>) {
        let order: Vec<usize> = match rule {
            PivotRule::Leftmost => (0..self.cols).collect(),
            PivotRule::Rightmost => (0..self.cols).rev().collect(),
        };
        let mut m: Vec<Vec<T>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for &c in &order {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(p, r);
            let inv = m[r][c].inv().expect("nonzero pivot in a field");
            m[r] = m[r].iter().map(|x| x.mul(&inv)).collect();
            let pivot_row = m[r].clone();
            let others: Vec<Vec<T>> = std::mem::take(&mut m);
            m = crate::par::par_map(others.into_iter().enumerate().collect(), |(i, row)| {
                if i == r || row[c].is_zero() {
                    return row;
                }
                let f = row[c].clone();
                row.iter()
                    .zip(&pivot_row)
                    .map(|(x, y)| if y.is_zero() { x.clone() } else { x.sub(&f.mul(y)) })
                    .collect()
            });
            pivots.push(c);
            r += 1;
        }
        let rows = m;
        let proto = self.zero.clone();
        let out = if rows.is_empty() { Matrix::zeros(0, self.cols, &proto) } else { Matrix::from_rows(rows, &proto) };
        (out, pivots)
    }

    pub fn pivot_columns(&self, rule: PivotRule) -> Vec<usize> {
        let mut p = self.rref(rule).1;
        p.sort_unstable();
        p
    }

    pub fn rank(&self) -> usize {
        self.rref(PivotRule::Leftmost).1.len()
    }

    /// A basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref(PivotRule::Leftmost);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.zero.clone(); self.cols];
                v[f] = self.zero.one_like();
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = r[(k, f)].neg();
                }
                v
            })
            .collect()
    }

    /// Some solution of `self * x = b`, if the system is consistent.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows, "shape mismatch");
        let aug = self.hstack(&Matrix::column(b.to_vec(), &self.zero));
        let (r, pivots) = aug.rref(PivotRule::Leftmost);
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![self.zero.clone(); self.cols];
        for (k, &p) in pivots.iter().enumerate() {
            x[p] = r[(k, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix<T>> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n, &self.zero));
        let (r, pivots) = aug.rref(PivotRule::Leftmost);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(r.select(&rows, &cols))
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Ring> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}
