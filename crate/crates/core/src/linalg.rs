//! Exact rational scalars and dense matrices.
//!
//! Ranks are computed by clearing denominators row by row and running
//! fraction-free (Bareiss) elimination over the integers. A probabilistic
//! rank over the prime field `2^61 - 1` is available as a prefilter; it never
//! exceeds the exact rank.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Mersenne prime used by [`Matrix::rank_mod_prime`].
pub const FAST_PRIME: u64 = (1 << 61) - 1;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(&'static str),
    #[error("scalar at position {0} is zero")]
    ZeroScalar(usize),
    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("system has no solution")]
    Inconsistent,
    #[error("system has no unique solution")]
    Underdetermined,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, " [")?;
            for (c, x) in self.row(r).iter().enumerate() {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Text form: `rows cols` on the first line, then one row per line.
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for (c, x) in self.row(r).iter().enumerate() {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`Matrix::from_rows`] but keeps the column count when there are no rows.
    pub fn from_rows_with_cols(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Ragged { row: i, found: row.len(), expected: cols });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged integer rows");
            for (c, &x) in row.iter().enumerate() {
                m.set(r, c, int(x));
            }
        }
        m
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Rational] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Matrix { rows: rows.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, cols: core::ops::Range<usize>) -> Matrix {
        let width = cols.len();
        let mut data = Vec::with_capacity(self.rows * width);
        for r in 0..self.rows {
            data.extend_from_slice(&self.row(r)[cols.clone()]);
        }
        Matrix { rows: self.rows, cols: width, data }
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        bareiss_rank(self.integer_rows(), self.cols)
    }

    pub fn left_nullspace_dim(&self) -> usize {
        self.rows - self.rank()
    }

    /// Rank modulo [`FAST_PRIME`]. A lower bound for [`Matrix::rank`];
    /// `None` when some denominator vanishes modulo the prime.
    pub fn rank_mod_prime(&self) -> Option<usize> {
        let p = FAST_PRIME;
        let bp = BigInt::from(p);
        let reduce = |x: &BigInt| -> u64 { x.mod_floor(&bp).to_u64().unwrap_or(0) };
        let mut a: Vec<Vec<u64>> = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for x in self.row(r) {
                let den = reduce(x.denom());
                if den == 0 {
                    return None;
                }
                row.push(mul_mod(reduce(x.numer()), pow_mod(den, p - 2, p), p));
            }
            a.push(row);
        }
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(piv) = (rank..self.rows).find(|&r| a[r][col] != 0) else { continue };
            a.swap(rank, piv);
            let inv = pow_mod(a[rank][col], p - 2, p);
            let (top, bottom) = a.split_at_mut(rank + 1);
            let pivot = &top[rank];
            for row in bottom.iter_mut().filter(|row| row[col] != 0) {
                let factor = mul_mod(row[col], inv, p);
                for (x, &y) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x = (*x + p - mul_mod(factor, y, p)) % p;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        Some(rank)
    }

    pub fn scale_rows(&self, s: &[Rational]) -> Result<Matrix, LinalgError> {
        if s.len() != self.rows {
            return Err(LinalgError::Shape("one scalar per row required"));
        }
        if let Some(i) = s.iter().position(Zero::is_zero) {
            return Err(LinalgError::ZeroScalar(i));
        }
        let mut out = self.clone();
        for (r, k) in s.iter().enumerate() {
            for x in out.row_mut(r) {
                *x *= k;
            }
        }
        Ok(out)
    }

    /// Multiplies every column of block `b` (columns `b*width..(b+1)*width`)
    /// by `s[b]`.
    pub fn scale_col_blocks(&self, width: usize, s: &[Rational]) -> Result<Matrix, LinalgError> {
        if width == 0 || s.len() * width != self.cols {
            return Err(LinalgError::Shape("blocks must tile the columns"));
        }
        if let Some(i) = s.iter().position(Zero::is_zero) {
            return Err(LinalgError::ZeroScalar(i));
        }
        let mut out = self.clone();
        for r in 0..self.rows {
            for (c, x) in out.row_mut(r).iter_mut().enumerate() {
                *x *= &s[c / width];
            }
        }
        Ok(out)
    }

    pub fn multiply(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape("inner dimensions differ"));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for (k, a) in self.row(r).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn block_diagonal(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(Matrix::rows).sum();
        let cols = blocks.iter().map(Matrix::cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else { continue };
            m.swap_rows(row, piv);
            let inv = m.get(row, col).recip();
            for x in m.row_mut(row) {
                *x *= &inv;
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let delta = &factor * m.get(row, c);
                    m.data[r * m.cols + c] -= delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    /// The unique `X` with `self * X = rhs`.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if rhs.rows != self.rows {
            return Err(LinalgError::Shape("right-hand side row count differs"));
        }
        let mut aug = Matrix::zeros(self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            aug.row_mut(r)[..self.cols].clone_from_slice(self.row(r));
            aug.row_mut(r)[self.cols..].clone_from_slice(rhs.row(r));
        }
        let (red, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(LinalgError::Inconsistent);
        }
        if pivots.len() < self.cols {
            return Err(LinalgError::Underdetermined);
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(p, c, red.get(i, self.cols + c).clone());
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Shape("inverse of a non-square matrix"));
        }
        self.solve(&Matrix::identity(self.rows)).map_err(|_| LinalgError::Singular)
    }

    pub fn determinant(&self) -> Result<Rational, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Shape("determinant of a non-square matrix"));
        }
        let mut m = self.clone();
        let mut det = Rational::one();
        for col in 0..m.cols {
            let Some(piv) = (col..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(Rational::zero());
            };
            if piv != col {
                m.swap_rows(col, piv);
                det = -det;
            }
            let p = m.get(col, col).clone();
            det *= &p;
            for r in col + 1..m.rows {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col) / &p;
                for c in col..m.cols {
                    let delta = &factor * m.get(col, c);
                    m.data[r * m.cols + c] -= delta;
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Each row multiplied by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
            })
            .collect()
    }
}

/// Fraction-free elimination with partial pivoting by absolute value. Every
/// intermediate entry is a minor of the input, so each division is exact.
fn bareiss_rank(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = a.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let mut best: Option<usize> = None;
        for r in rank..rows {
            if a[r][col].is_zero() {
                continue;
            }
            if best.is_none_or(|b| a[r][col].abs() > a[b][col].abs()) {
                best = Some(r);
            }
        }
        let Some(piv) = best else { continue };
        a.swap(rank, piv);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = &pivot_row[col];
        for row in rest.iter_mut() {
            let lead = core::mem::take(&mut row[col]);
            for c in col + 1..cols {
                let num = pivot * &row[c] - &lead * &pivot_row[c];
                row[c] = if prev.is_one() { num } else { num / &prev };
            }
        }
        prev = pivot.clone();
        rank += 1;
    }
    rank
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}
