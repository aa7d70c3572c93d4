//! Dense matrices over the rationals with exact Gauss-Jordan elimination.
//!
//! Pivoting is deterministic: in each column the first row (from the top of
//! the unreduced part) holding a nonzero entry becomes the pivot.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::scalar::{self, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
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

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Matrix product. Panics when the inner dimensions differ.
    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "vector length differs from column count");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Reduced row echelon form together with the invertible transform that
    /// produces it, i.e. `transform * self == rref`.
    pub fn rref_with_transform(&self) -> Rref {
        let mut r = self.clone();
        let mut t = Self::identity(self.rows);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&i| !r[(i, col)].is_zero()) else {
                continue;
            };
            r.swap_rows(row, p);
            t.swap_rows(row, p);
            let inv = r[(row, col)].recip();
            r.scale_row(row, &inv);
            t.scale_row(row, &inv);
            for i in 0..self.rows {
                if i != row && !r[(i, col)].is_zero() {
                    let factor = r[(i, col)].clone();
                    r.sub_row_multiple(i, row, &factor);
                    t.sub_row_multiple(i, row, &factor);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref {
            reduced: r,
            transform: t,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref_with_transform().pivots.len()
    }

    /// Exact inverse, or `None` when the matrix is singular or not square.
    pub fn inverse(&self) -> Option<RatMatrix> {
        if !self.is_square() {
            return None;
        }
        let rref = self.rref_with_transform();
        (rref.pivots.len() == self.rows).then_some(rref.transform)
    }

    /// Solves `self * x = rhs` exactly.
    pub fn solve(&self, rhs: &[Scalar]) -> LinearSolution {
        assert_eq!(rhs.len(), self.rows, "rhs length differs from row count");
        self.rref_with_transform().solve(rhs)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, s: &Scalar) {
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x *= s;
        }
    }

    // row[target] -= factor * row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, factor: &Scalar) {
        for j in 0..self.cols {
            let s = &self.data[source * self.cols + j];
            if !s.is_zero() {
                let d = factor * s;
                self.data[target * self.cols + j] -= d;
            }
        }
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(scalar::format).collect())
            .collect();
        write!(f, "RatMatrix{rows:?}")
    }
}

/// Result of [`RatMatrix::rref_with_transform`].
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: RatMatrix,
    pub transform: RatMatrix,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Solves the original system for one right-hand side, reusing the
    /// stored transform.
    pub fn solve(&self, rhs: &[Scalar]) -> LinearSolution {
        let cols = self.reduced.cols();
        let y = self.transform.mul_vec(rhs);
        let rank = self.rank();
        let consistent = y[rank..].iter().all(Zero::is_zero);
        let particular = consistent.then(|| {
            let mut x = vec![Scalar::zero(); cols];
            for (r, &c) in self.pivots.iter().enumerate() {
                x[c] = y[r].clone();
            }
            x
        });
        let free: Vec<usize> = (0..cols).filter(|c| !self.pivots.contains(c)).collect();
        let nullspace = free
            .iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); cols];
                v[f] = Scalar::one();
                for (r, &c) in self.pivots.iter().enumerate() {
                    v[c] = -self.reduced[(r, f)].clone();
                }
                v
            })
            .collect();
        LinearSolution {
            rank,
            particular,
            nullspace,
        }
    }
}

/// Exact solution set of a linear system `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution {
    pub rank: usize,
    /// The solution with every free variable set to zero, if the system is
    /// consistent.
    pub particular: Option<Vec<Scalar>>,
    /// Basis of the null space of `A`.
    pub nullspace: Vec<Vec<Scalar>>,
}
