//! Matrices whose entries are linear mappings of one algebra.
//!
//! Entry `(i, j)` sits in row `i` and column `j`; indices are zero-based.
//! In the RC-product, `(A B)[i][j] = sum_k A[i][k] o B[k][j]` with each entry
//! composed in the written order ("left after right"), so that
//! `(A B)(x) = A(B(x))` for column vectors of algebra elements.

use std::fmt;
use std::sync::Arc;

use log::warn;

use crate::algebra::{same_algebra, AlgElement, Algebra};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::linmap::LinMap;

#[derive(Clone, PartialEq, Eq)]
pub struct MapMatrix {
    algebra: Arc<Algebra>,
    rows: usize,
    cols: usize,
    entries: Vec<LinMap>,
}

impl MapMatrix {
    /// Row-major entries.
    pub fn new(algebra: &Arc<Algebra>, rows: usize, cols: usize, entries: Vec<LinMap>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch("matrix must have at least one row and column".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, found {}",
                rows * cols,
                entries.len()
            )));
        }
        for e in &entries {
            same_algebra(algebra, e.algebra())?;
        }
        Ok(MapMatrix {
            algebra: Arc::clone(algebra),
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(algebra: &Arc<Algebra>, rows: Vec<Vec<LinMap>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::new(algebra, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(
        algebra: &Arc<Algebra>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> LinMap,
    ) -> Result<Self> {
        let entries = (0..rows * cols).map(|ij| f(ij / cols, ij % cols)).collect();
        Self::new(algebra, rows, cols, entries)
    }

    pub fn zeros(algebra: &Arc<Algebra>, rows: usize, cols: usize) -> Result<Self> {
        Self::from_fn(algebra, rows, cols, |_, _| LinMap::zero(algebra))
    }

    /// Identity mappings `e_0 (x) e_0` on the diagonal, zero mappings elsewhere.
    pub fn identity(algebra: &Arc<Algebra>, m: usize) -> Result<Self> {
        Self::from_fn(algebra, m, m, |i, j| {
            if i == j {
                LinMap::identity(algebra)
            } else {
                LinMap::zero(algebra)
            }
        })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
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

    pub fn get(&self, i: usize, j: usize) -> &LinMap {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) out of range");
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[LinMap] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<LinMap>> {
        self.entries.chunks(self.cols).map(<[LinMap]>::to_vec).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_identity()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// Swaps rows and columns; the entries themselves are unchanged.
    pub fn transpose(&self) -> MapMatrix {
        let entries = (0..self.rows * self.cols)
            .map(|ji| self.get(ji % self.rows, ji / self.rows).clone())
            .collect();
        MapMatrix {
            algebra: Arc::clone(&self.algebra),
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    fn check_product(&self, other: &MapMatrix) -> Result<()> {
        same_algebra(&self.algebra, &other.algebra)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// `(A B)[i][j] = sum_k A[i][k] o B[k][j]`.
    pub fn rc_product(&self, other: &MapMatrix) -> Result<MapMatrix> {
        self.check_product(other)?;
        self.product_with(other, |a, b| a.compose(b))
    }

    /// `(A B)[i][j] = sum_k B[k][j] o A[i][k]`: the row-by-column pattern with
    /// each entry composed in reverse order. Equivalently
    /// `transpose(rc_product(transpose(B), transpose(A)))`.
    pub fn cr_product(&self, other: &MapMatrix) -> Result<MapMatrix> {
        self.check_product(other)?;
        self.product_with(other, |a, b| b.compose(a))
    }

    fn product_with(
        &self,
        other: &MapMatrix,
        compose: impl Fn(&LinMap, &LinMap) -> Result<LinMap>,
    ) -> Result<MapMatrix> {
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = LinMap::zero(&self.algebra);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&compose(a, b)?)?;
                }
                entries.push(acc);
            }
        }
        MapMatrix::new(&self.algebra, self.rows, other.cols, entries)
    }

    pub fn add(&self, other: &MapMatrix) -> Result<MapMatrix> {
        same_algebra(&self.algebra, &other.algebra)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch("cannot add matrices of different shapes".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        MapMatrix::new(&self.algebra, self.rows, self.cols, entries)
    }

    pub fn sub(&self, other: &MapMatrix) -> Result<MapMatrix> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MapMatrix {
        MapMatrix {
            algebra: Arc::clone(&self.algebra),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(LinMap::neg).collect(),
        }
    }

    /// `y[i] = sum_j A[i][j](x[j])`.
    pub fn apply(&self, x: &[AlgElement]) -> Result<Vec<AlgElement>> {
        if x.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} applied to a matrix with {} columns",
                x.len(),
                self.cols
            )));
        }
        (0..self.rows)
            .map(|i| {
                let mut acc = AlgElement::zero(&self.algebra);
                for (j, xj) in x.iter().enumerate() {
                    acc = acc.add(&self.get(i, j).apply(xj)?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    /// Submatrix keeping the listed rows and columns, in the listed order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<MapMatrix> {
        if let Some(bad) = rows.iter().find(|&&r| r >= self.rows) {
            return Err(Error::InvalidIndex(format!("row {bad} of {}", self.rows)));
        }
        if let Some(bad) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::InvalidIndex(format!("column {bad} of {}", self.cols)));
        }
        let entries = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| (r, c)))
            .map(|(r, c)| self.get(r, c).clone())
            .collect();
        MapMatrix::new(&self.algebra, rows.len(), cols.len(), entries)
    }

    /// Submatrix with the listed rows and columns removed, order preserved.
    pub fn minor(&self, drop_rows: &[usize], drop_cols: &[usize]) -> Result<MapMatrix> {
        if let Some(bad) = drop_rows.iter().find(|&&r| r >= self.rows) {
            return Err(Error::InvalidIndex(format!("row {bad} of {}", self.rows)));
        }
        if let Some(bad) = drop_cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::InvalidIndex(format!("column {bad} of {}", self.cols)));
        }
        let rows = complement(self.rows, drop_rows);
        let cols = complement(self.cols, drop_cols);
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::ShapeMismatch("minor would be empty".into()));
        }
        self.select(&rows, &cols)
    }

    /// The `(rows * n) x (cols * n)` scalar matrix whose `(i, j)` block is the
    /// operator matrix of entry `(i, j)`.
    pub fn operator_matrix(&self) -> RatMatrix {
        let n = self.algebra.dim();
        let mut big = RatMatrix::zeros(self.rows * n, self.cols * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let block = self.get(i, j).operator_matrix();
                for a in 0..n {
                    for b in 0..n {
                        big[(i * n + a, j * n + b)] = block[(a, b)].clone();
                    }
                }
            }
        }
        big
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "expected a square matrix, found {}x{}",
                self.rows, self.cols
            )))
        }
    }

    /// The `(p, q)` RC-quasideterminant
    /// `A[p][q] - sum_{k,l} A[p][k] o inv(M)[k][l] o A[l][q]`, where `M` is `A`
    /// without row `p` and column `q`; for a 1x1 matrix, the single entry.
    pub fn quasideterminant(&self, p: usize, q: usize) -> Result<QuasidetResult> {
        self.require_square()?;
        let n = self.rows;
        if p >= n || q >= n {
            return Err(Error::InvalidIndex(format!("pivot ({p}, {q}) in a {n}x{n} matrix")));
        }
        if n == 1 {
            return Ok(QuasidetResult {
                pivot_row: p,
                pivot_col: q,
                value: self.get(0, 0).clone(),
                row_perm: vec![0],
                col_perm: vec![0],
            });
        }
        let rows = complement(n, &[p]);
        let cols = complement(n, &[q]);
        let minor = self.select(&rows, &cols)?;
        let inv = minor.rc_inverse().map_err(|e| match e {
            Error::Singular(_) | Error::PivotSearchFailed => Error::NotDefined(format!(
                "minor without row {p} and column {q} has no RC-inverse"
            )),
            other => other,
        })?;
        // inv has rows indexed by `cols` and columns indexed by `rows`
        let mut value = self.get(p, q).clone();
        for (k, &ck) in cols.iter().enumerate() {
            let head = self.get(p, ck);
            if head.is_zero() {
                continue;
            }
            for (l, &rl) in rows.iter().enumerate() {
                let (mid, tail) = (inv.inverse.get(k, l), self.get(rl, q));
                if mid.is_zero() || tail.is_zero() {
                    continue;
                }
                value = value.sub(&head.compose(&mid.compose(tail)?)?)?;
            }
        }
        // the minor's pivot order in our index space, then (p, q)
        let mut row_perm: Vec<usize> = inv.col_perm.iter().map(|&l| rows[l]).collect();
        let mut col_perm: Vec<usize> = inv.row_perm.iter().map(|&k| cols[k]).collect();
        row_perm.push(p);
        col_perm.push(q);
        Ok(QuasidetResult {
            pivot_row: p,
            pivot_col: q,
            value,
            row_perm,
            col_perm,
        })
    }

    /// All `(p, q)` quasideterminants, with undefined entries marked.
    pub fn quasideterminant_matrix(&self) -> Result<QuasidetMatrix> {
        self.require_square()?;
        let n = self.rows;
        let mut entries = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                entries.push(match self.quasideterminant(p, q) {
                    Ok(r) => Some(r.value),
                    Err(Error::NotDefined(_)) => None,
                    Err(e) => return Err(e),
                });
            }
        }
        Ok(QuasidetMatrix {
            algebra: Arc::clone(&self.algebra),
            order: n,
            entries,
        })
    }

    /// RC-inverse: `A X = X A = I`.
    ///
    /// Entries are first computed as `X[i][j] = inv(quasideterminant(A, j, i))`.
    /// If a quasideterminant is undefined or not invertible, the matrix is
    /// inverted instead by Schur-complement elimination, taking as pivot the
    /// first entry in lexicographic order that is invertible and whose
    /// complement is again invertible. The pivot order is recorded in the
    /// result. [`Error::Singular`] is returned only when the block operator
    /// matrix confirms that no inverse exists.
    pub fn rc_inverse(&self) -> Result<RcInverse> {
        self.require_square()?;
        match self.rc_inverse_entrywise() {
            Ok(inverse) => return Ok(inverse),
            Err(Error::NotRepresentable) => return Err(Error::NotRepresentable),
            Err(_) => {}
        }
        match self.rc_inverse_pivoted() {
            Ok(inverse) => return Ok(inverse),
            Err(Error::NotRepresentable) => return Err(Error::NotRepresentable),
            Err(_) => {}
        }
        let big = self.operator_matrix();
        let rank = big.rank();
        if rank < big.rows() {
            Err(Error::Singular(format!(
                "block operator matrix has rank {rank} of {}",
                big.rows()
            )))
        } else {
            warn!(
                "counter-example: {}x{} matrix over {} is nonsingular but no pivot sequence works",
                self.rows,
                self.cols,
                self.algebra.name()
            );
            Err(Error::PivotSearchFailed)
        }
    }

    fn rc_inverse_entrywise(&self) -> Result<RcInverse> {
        let n = self.rows;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let qd = self.quasideterminant(j, i)?;
                entries.push(qd.value.invert()?);
            }
        }
        Ok(RcInverse {
            inverse: MapMatrix::new(&self.algebra, n, n, entries)?,
            row_perm: (0..n).collect(),
            col_perm: (0..n).collect(),
            method: InverseMethod::Entrywise,
        })
    }

    fn rc_inverse_pivoted(&self) -> Result<RcInverse> {
        let n = self.rows;
        if n == 1 {
            return self.rc_inverse_entrywise();
        }
        let mut last_err = Error::PivotSearchFailed;
        for p in 0..n {
            for q in 0..n {
                let pivot_inv = match self.get(p, q).invert() {
                    Ok(inv) => inv,
                    Err(Error::Singular(_)) => continue,
                    Err(e) => return Err(e),
                };
                match self.eliminate(p, q, &pivot_inv) {
                    Ok(inverse) => return Ok(inverse),
                    // an invertible pivot with a singular complement means A is singular
                    Err(e @ (Error::NotRepresentable | Error::Singular(_))) => return Err(e),
                    Err(e) => last_err = e,
                }
            }
        }
        Err(last_err)
    }

    // Inverse via the Schur complement of the invertible entry (p, q).
    fn eliminate(&self, p: usize, q: usize, pivot_inv: &LinMap) -> Result<RcInverse> {
        let n = self.rows;
        let rows = complement(n, &[p]);
        let cols = complement(n, &[q]);
        // S = D - C a^-1 R
        let schur = MapMatrix::from_fn(&self.algebra, n - 1, n - 1, |r, c| {
            let d = self.get(rows[r], cols[c]);
            let term = self
                .get(rows[r], q)
                .compose(pivot_inv)
                .and_then(|ca| ca.compose(self.get(p, cols[c])));
            term.and_then(|t| d.sub(&t)).expect("entries share one algebra")
        })?;
        let s_inv = schur.rc_inverse()?;
        let sinv = &s_inv.inverse;
        // a^-1 R S^-1 (row vector indexed like rows) and S^-1 C a^-1 (column indexed like cols)
        let mut top = Vec::with_capacity(n - 1);
        for l in 0..n - 1 {
            let mut acc = LinMap::zero(&self.algebra);
            for (k, &ck) in cols.iter().enumerate() {
                acc = acc.add(&pivot_inv.compose(&self.get(p, ck).compose(sinv.get(k, l))?)?)?;
            }
            top.push(acc);
        }
        let mut left = Vec::with_capacity(n - 1);
        for k in 0..n - 1 {
            let mut acc = LinMap::zero(&self.algebra);
            for (l, &rl) in rows.iter().enumerate() {
                acc = acc.add(&sinv.get(k, l).compose(&self.get(rl, q).compose(pivot_inv)?)?)?;
            }
            left.push(acc);
        }
        // corner = a^-1 + a^-1 R S^-1 C a^-1
        let mut corner = pivot_inv.clone();
        for (l, &rl) in rows.iter().enumerate() {
            corner = corner.add(&top[l].compose(&self.get(rl, q).compose(pivot_inv)?)?)?;
        }

        let mut x = vec![LinMap::zero(&self.algebra); n * n];
        x[q * n + p] = corner;
        for (l, &rl) in rows.iter().enumerate() {
            x[q * n + rl] = top[l].neg();
        }
        for (k, &ck) in cols.iter().enumerate() {
            x[ck * n + p] = left[k].neg();
            for (l, &rl) in rows.iter().enumerate() {
                x[ck * n + rl] = sinv.get(k, l).clone();
            }
        }
        // pivot rows of A in elimination order
        let mut row_perm = vec![p];
        row_perm.extend(s_inv.row_perm.iter().map(|&r| rows[r]));
        let mut col_perm = vec![q];
        col_perm.extend(s_inv.col_perm.iter().map(|&c| cols[c]));
        Ok(RcInverse {
            inverse: MapMatrix::new(&self.algebra, n, n, x)?,
            row_perm,
            col_perm,
            method: InverseMethod::Pivoted,
        })
    }

    /// The minor of the RC-inverse on rows `inv_rows` and columns `inv_cols`,
    /// computed from blocks of `A` without forming the whole inverse.
    ///
    /// Rows of the inverse correspond to columns of `A` and vice versa. With
    /// `I = inv_rows`, `J = inv_cols` and primes for complements, the result is
    /// `(A[J][I] - A[J][I'] inv(A[J'][I']) A[J'][I])^-1`.
    pub fn block_inverse_minor(&self, inv_rows: &[usize], inv_cols: &[usize]) -> Result<MapMatrix> {
        self.require_square()?;
        let n = self.rows;
        let k = inv_rows.len();
        if k == 0 || k != inv_cols.len() {
            return Err(Error::ShapeMismatch(format!(
                "minor index sets must be nonempty and of equal size, found {k} and {}",
                inv_cols.len()
            )));
        }
        for set in [inv_rows, inv_cols] {
            if let Some(bad) = set.iter().find(|&&i| i >= n) {
                return Err(Error::InvalidIndex(format!("{bad} in a {n}x{n} matrix")));
            }
            let mut sorted = set.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != set.len() {
                return Err(Error::InvalidIndex("repeated index in minor".into()));
            }
        }
        fn undefined(what: &'static str) -> impl Fn(Error) -> Error {
            move |e: Error| match e {
                Error::Singular(_) | Error::PivotSearchFailed => {
                    Error::NotDefined(format!("{what} has no RC-inverse"))
                }
                other => other,
            }
        }
        let (a_cols, a_rows) = (inv_rows, inv_cols);
        let mut block = self.select(a_rows, a_cols)?;
        if k < n {
            let rows_c = complement(n, a_rows);
            let cols_c = complement(n, a_cols);
            let comp_inv = self
                .select(&rows_c, &cols_c)?
                .rc_inverse()
                .map_err(undefined("complementary block"))?;
            let correction = self
                .select(a_rows, &cols_c)?
                .rc_product(&comp_inv.inverse)?
                .rc_product(&self.select(&rows_c, a_cols)?)?;
            block = block.sub(&correction)?;
        }
        Ok(block.rc_inverse().map_err(undefined("block quasideterminant"))?.inverse)
    }
}

fn complement(n: usize, drop: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !drop.contains(i)).collect()
}

impl fmt::Debug for MapMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// A quasideterminant together with the pivot order used to invert the
/// complementary minor (in the matrix's own row/column indices, ending with
/// `pivot_row` / `pivot_col`).
#[derive(Clone, Debug, PartialEq)]
pub struct QuasidetResult {
    pub pivot_row: usize,
    pub pivot_col: usize,
    pub value: LinMap,
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
}

/// Matrix of all quasideterminants; `None` where undefined.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasidetMatrix {
    algebra: Arc<Algebra>,
    order: usize,
    entries: Vec<Option<LinMap>>,
}

impl QuasidetMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn get(&self, p: usize, q: usize) -> Option<&LinMap> {
        self.entries[p * self.order + q].as_ref()
    }

    /// The quasideterminants as a matrix, if every one is defined.
    pub fn to_matrix(&self) -> Option<MapMatrix> {
        let entries = self.entries.iter().cloned().collect::<Option<Vec<_>>>()?;
        MapMatrix::new(&self.algebra, self.order, self.order, entries).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InverseMethod {
    /// Every entry came from inverting a quasideterminant.
    Entrywise,
    /// Schur-complement elimination along the recorded pivots.
    Pivoted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RcInverse {
    pub inverse: MapMatrix,
    /// Pivot rows in elimination order (identity for [`InverseMethod::Entrywise`]).
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub method: InverseMethod,
}
