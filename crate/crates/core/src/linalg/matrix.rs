use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::integer;
use super::rational::{common_denominator, format_rational, rat, Rational};
use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Result of [`RationalMatrix::row_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReduction {
    pub rank: usize,
    /// Linearly independent column vectors spanning the kernel.
    pub kernel_basis: Vec<Vec<Rational>>,
    /// Pivot columns of the input; they span the column space.
    pub image_basis: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics if the rows are ragged; intended for literals and tests.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rat(rows[i][j]))
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
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

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let (r0, c0) = (rows.start, cols.start);
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn hstack(blocks: &[&RationalMatrix], rows: usize) -> Self {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut c0 = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, c0 + j, b.get(i, j).clone());
                }
            }
            c0 += b.cols;
        }
        out
    }

    pub fn vstack(blocks: &[&RationalMatrix], cols: usize) -> Self {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Self { rows, cols, data }
    }

    /// Block-diagonal matrix.
    pub fn block_diagonal(blocks: &[RationalMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Rows scaled to integers, one positive scale per row.
    pub fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut rows = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let d = common_denominator(self.row(i));
            rows.push(
                self.row(i)
                    .iter()
                    .map(|q| (q * Rational::from_integer(d.clone())).to_integer())
                    .collect(),
            );
            scales.push(d);
        }
        (rows, scales)
    }

    /// Rank via fraction-free elimination.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        integer::rank_bigint(self.integer_rows().0)
    }

    /// Exact determinant by fraction-free elimination; the 0x0 matrix has determinant 1.
    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let (rows, scales) = self.integer_rows();
        let det = integer::det_bigint(rows);
        let scale = scales.into_iter().fold(BigInt::one(), |a, b| a * b);
        Ok(Rational::new(det, scale))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    if m.get(r, j).is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn row_reduce(&self) -> RowReduction {
        let (reduced, pivots) = self.rref();
        let kernel_basis = kernel_from_rref(&reduced, &pivots);
        let image_basis = pivots.iter().map(|&c| self.column(c)).collect();
        RowReduction {
            rank: pivots.len(),
            kernel_basis,
            image_basis,
        }
    }

    /// Kernel basis as the columns of a `cols x k` matrix.
    pub fn kernel(&self) -> Self {
        let (reduced, pivots) = self.rref();
        Self::from_columns(self.cols, &kernel_from_rref(&reduced, &pivots))
    }

    /// Basis of the column space (pivot columns) as a matrix.
    pub fn column_space(&self) -> Self {
        let (_, pivots) = self.rref();
        Self::from_columns(self.rows, &pivots.iter().map(|&c| self.column(c)).collect::<Vec<_>>())
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let aug = Self::hstack(&[self, &Self::identity(n)], n);
        let (reduced, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(reduced.submatrix(0..n, n..2 * n))
    }

    /// Some `X` with `self * X = rhs`, if one exists.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows);
        let aug = Self::hstack(&[self, rhs], self.rows);
        let (reduced, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, rhs.cols);
        for (r, &c) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(c, j, reduced.get(r, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

fn kernel_from_rref(reduced: &RationalMatrix, pivots: &[usize]) -> Vec<Vec<Rational>> {
    let cols = reduced.cols;
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -reduced.get(r, free).clone();
            }
            v
        })
        .collect()
}

impl<'a> Mul<&'a RationalMatrix> for &'a RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &'a RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + a * b;
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a RationalMatrix> for &'a RationalMatrix {
    type Output = RationalMatrix;

    fn add(self, rhs: &'a RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a RationalMatrix> for &'a RationalMatrix {
    type Output = RationalMatrix;

    fn sub(self, rhs: &'a RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &RationalMatrix {
    type Output = RationalMatrix;

    fn neg(self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_has_full_rank_and_empty_kernel() {
        let r = RationalMatrix::identity(2).row_reduce();
        assert_eq!(r.rank, 2);
        assert!(r.kernel_basis.is_empty());
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let r = RationalMatrix::zeros(2, 3).row_reduce();
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel_basis.len(), 3);
    }

    #[test]
    fn rank_one_example() {
        let m = RationalMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        let r = m.row_reduce();
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel_basis.len(), 2);
        for v in &r.kernel_basis {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(RationalMatrix::identity(3).determinant().unwrap(), rat(1));
        let rot = RationalMatrix::from_i64_rows(&[&[0, 1], &[-1, 0]]);
        assert_eq!(rot.determinant().unwrap(), rat(1));
        let skew = RationalMatrix::from_i64_rows(&[&[0, 2, -5], &[-2, 0, 7], &[5, -7, 0]]);
        assert_eq!(skew.determinant().unwrap(), rat(0));
        assert_eq!(RationalMatrix::zeros(0, 0).determinant().unwrap(), rat(1));
        assert!(RationalMatrix::zeros(2, 3).determinant().is_err());
    }

    #[test]
    fn determinant_with_fractions() {
        let m = RationalMatrix::new(
            2,
            2,
            vec![
                Rational::new(1.into(), 2.into()),
                rat(1),
                rat(3),
                Rational::new(1.into(), 3.into()),
            ],
        )
        .unwrap();
        // 1/6 - 3
        assert_eq!(m.determinant().unwrap(), Rational::new((-17).into(), 6.into()));
    }

    #[test]
    fn solve_and_inverse() {
        let a = RationalMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, RationalMatrix::identity(2));
        let b = RationalMatrix::from_i64_rows(&[&[3], &[2]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(&a * &x, b);
        let singular = RationalMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&RationalMatrix::from_i64_rows(&[&[1], &[0]])).is_none());
    }

    fn small_matrix(max: usize) -> impl Strategy<Value = RationalMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            prop::collection::vec(-3i64..=3, r * c)
                .prop_map(move |v| RationalMatrix::from_fn(r, c, |i, j| rat(v[i * c + j])))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix(6)) {
            let r = m.row_reduce();
            prop_assert_eq!(r.rank + r.kernel_basis.len(), m.cols());
            prop_assert_eq!(r.rank, m.rank());
            for v in &r.kernel_basis {
                prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
            }
            prop_assert_eq!(RationalMatrix::from_columns(m.cols(), &r.kernel_basis).rank(), r.kernel_basis.len());
            prop_assert_eq!(RationalMatrix::from_columns(m.rows(), &r.image_basis).rank(), r.rank);
        }

        #[test]
        fn determinant_nonzero_iff_full_rank(n in 1usize..6, v in prop::collection::vec(-2i64..=2, 36)) {
            let m = RationalMatrix::from_fn(n, n, |i, j| rat(v[i * 6 + j]));
            let det = m.determinant().unwrap();
            prop_assert_eq!(!det.is_zero(), m.rank() == n);
        }
    }
}
