//! Finite-dimensional unital associative algebras over the rationals, given
//! by structure constants, and their elements.
//!
//! Basis vector `e_0` is always the unit. The product of basis vectors is
//! `e_i * e_j = sum_k C[i][j][k] e_k`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{RatMatrix, Rref};
use crate::scalar::{self, Scalar};

/// Dense `n x n x n` grid of structure constants; `get(i, j, k)` is the
/// coefficient of `e_k` in `e_i * e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    data: Vec<Scalar>,
}

impl StructureConstants {
    /// `data` is laid out as `[i][j][k]`, row-major.
    pub fn new(dim: usize, data: Vec<Scalar>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ShapeMismatch("algebra dimension must be at least 1".into()));
        }
        if data.len() != dim * dim * dim {
            return Err(Error::ShapeMismatch(format!(
                "expected {} structure constants for dim {dim}, found {}",
                dim * dim * dim,
                data.len()
            )));
        }
        Ok(StructureConstants { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> Scalar) -> Result<Self> {
        let mut data = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    data.push(f(i, j, k));
                }
            }
        }
        Self::new(dim, data)
    }

    /// Table where `e_i * e_j` is listed as a sparse list of `(k, coefficient)`.
    pub fn from_products(dim: usize, table: &[((usize, usize), &[(usize, Scalar)])]) -> Result<Self> {
        let mut data = vec![Scalar::zero(); dim * dim * dim];
        for ((i, j), terms) in table {
            for (k, c) in terms.iter() {
                if *i >= dim || *j >= dim || *k >= dim {
                    return Err(Error::InvalidIndex(format!("({i}, {j}, {k}) for dim {dim}")));
                }
                data[(i * dim + j) * dim + k] += c;
            }
        }
        Self::new(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.data[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Scalar) {
        let n = self.dim;
        self.data[(i * n + j) * n + k] = value;
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| self.get(i, j, k) == self.get(j, i, k))))
    }
}

/// One failed identity found by [`validate_algebra`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Violation {
    /// Coefficient of `e_p` differs between `(e_i e_j) e_k` and `e_i (e_j e_k)`.
    Associativity { i: usize, j: usize, k: usize, p: usize },
    /// `e_0 * e_i` has the wrong coefficient at `e_k`.
    LeftUnit { i: usize, k: usize },
    /// `e_i * e_0` has the wrong coefficient at `e_k`.
    RightUnit { i: usize, k: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(first) = self.violations.first() else {
            return write!(f, "ok");
        };
        write!(f, "{} violation(s), first: ", self.violations.len())?;
        match first {
            Violation::Associativity { i, j, k, p } => {
                write!(f, "associativity at (i,j,k)=({i},{j},{k}), component {p}")
            }
            Violation::LeftUnit { i, k } => write!(f, "left unit e_0*e_{i}, component {k}"),
            Violation::RightUnit { i, k } => write!(f, "right unit e_{i}*e_0, component {k}"),
        }
    }
}

/// Checks associativity and that `e_0` is a two-sided unit, listing every
/// violated index tuple.
pub fn validate_algebra(c: &StructureConstants) -> ValidationReport {
    let n = c.dim();
    let mut violations = Vec::new();
    for i in 0..n {
        for k in 0..n {
            let delta = if i == k { Scalar::one() } else { Scalar::zero() };
            if *c.get(0, i, k) != delta {
                violations.push(Violation::LeftUnit { i, k });
            }
            if *c.get(i, 0, k) != delta {
                violations.push(Violation::RightUnit { i, k });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for p in 0..n {
                    let mut lhs = Scalar::zero();
                    let mut rhs = Scalar::zero();
                    for m in 0..n {
                        lhs += c.get(i, j, m) * c.get(m, k, p);
                        rhs += c.get(i, m, p) * c.get(j, k, m);
                    }
                    if lhs != rhs {
                        violations.push(Violation::Associativity { i, j, k, p });
                    }
                }
            }
        }
    }
    ValidationReport { violations }
}

/// A validated unital associative algebra.
///
/// Construct through [`Algebra::new`] or [`builtin_algebra`]; both hand out
/// an `Arc` since every element and mapping keeps a reference to its algebra.
pub struct Algebra {
    name: String,
    constants: StructureConstants,
    commutative: bool,
    // products[i * n + j] = nonzero terms of e_i * e_j
    products: Vec<Vec<(usize, Scalar)>>,
    representation: OnceLock<Representation>,
}

/// Operator matrices of the basis maps `x -> e_k x e_l` and the row reduction
/// of the system that recovers standard coefficients from an operator matrix.
pub(crate) struct Representation {
    pub(crate) basis_operators: Vec<RatMatrix>,
    pub(crate) system: Rref,
}

impl Algebra {
    pub fn new(name: impl Into<String>, constants: StructureConstants) -> Result<Arc<Algebra>> {
        let report = validate_algebra(&constants);
        if !report.is_ok() {
            return Err(Error::InvalidAlgebra(report));
        }
        let n = constants.dim();
        let products = (0..n * n)
            .map(|ij| {
                (0..n)
                    .filter_map(|k| {
                        let c = constants.get(ij / n, ij % n, k);
                        (!c.is_zero()).then(|| (k, c.clone()))
                    })
                    .collect()
            })
            .collect();
        Ok(Arc::new(Algebra {
            name: name.into(),
            commutative: constants.is_commutative(),
            constants,
            products,
            representation: OnceLock::new(),
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.constants.dim()
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    /// Nonzero terms of `e_i * e_j`.
    pub(crate) fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.products[i * self.dim() + j]
    }

    /// Coordinates of `x * y`.
    pub(crate) fn mul_coords(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let xy = xi * yj;
                for (k, c) in self.basis_product(i, j) {
                    out[*k] += &xy * c;
                }
            }
        }
        out
    }

    /// Matrix of `y -> x * y` acting on coordinate columns.
    pub fn left_mul_matrix(&self, x: &[Scalar]) -> RatMatrix {
        let n = self.dim();
        let mut m = RatMatrix::zeros(n, n);
        for j in 0..n {
            for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                for (k, c) in self.basis_product(i, j) {
                    m[(*k, j)] += xi * c;
                }
            }
        }
        m
    }

    pub(crate) fn representation(&self) -> &Representation {
        self.representation.get_or_init(|| {
            let n = self.dim();
            let mut basis_operators = Vec::with_capacity(n * n);
            for k in 0..n {
                for l in 0..n {
                    // column i holds the coordinates of e_k e_i e_l
                    let mut t = RatMatrix::zeros(n, n);
                    for i in 0..n {
                        for (m, c1) in self.basis_product(k, i) {
                            for (j, c2) in self.basis_product(*m, l) {
                                t[(*j, i)] += c1 * c2;
                            }
                        }
                    }
                    basis_operators.push(t);
                }
            }
            // unknown kl is column k*n+l; equation (j, i) is row j*n+i
            let system = RatMatrix::from_fn(n * n, n * n, |row, col| {
                basis_operators[col][(row / n, row % n)].clone()
            })
            .rref_with_transform();
            Representation {
                basis_operators,
                system,
            }
        })
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || self.constants == other.constants
    }
}

impl Eq for Algebra {}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .field("commutative", &self.commutative)
            .finish()
    }
}

pub(crate) fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch)
    }
}

/// Names accepted by [`builtin_algebra`].
pub const BUILTIN_NAMES: [&str; 5] = ["quaternion", "complex", "mat2", "dual", "field"];

/// The catalog of small algebras used throughout tests and examples.
///
/// * `quaternion`: basis `1, i, j, k` with Hamilton's table.
/// * `complex`: basis `1, i` with `i^2 = -1`.
/// * `mat2`: 2x2 rational matrices in the basis `I, E12, E21, E11`
///   (so that the unit sits at index 0; `E22 = I - E11`).
/// * `dual`: basis `1, eps` with `eps^2 = 0`.
/// * `field`: the rationals as a one-dimensional algebra.
pub fn builtin_algebra(name: &str) -> Result<Arc<Algebra>> {
    let s = scalar::int;
    let unit_rows = |n: usize| -> Vec<((usize, usize), Vec<(usize, Scalar)>)> {
        (0..n)
            .flat_map(|i| [((0, i), vec![(i, s(1))]), ((i, 0), vec![(i, s(1))])])
            .collect()
    };
    let (dim, mut table) = match name {
        "field" => (1, Vec::new()),
        "complex" => (2, vec![((1, 1), vec![(0, s(-1))])]),
        "dual" => (2, Vec::new()),
        "quaternion" => (
            4,
            vec![
                ((1, 1), vec![(0, s(-1))]),
                ((2, 2), vec![(0, s(-1))]),
                ((3, 3), vec![(0, s(-1))]),
                ((1, 2), vec![(3, s(1))]),
                ((2, 1), vec![(3, s(-1))]),
                ((2, 3), vec![(1, s(1))]),
                ((3, 2), vec![(1, s(-1))]),
                ((3, 1), vec![(2, s(1))]),
                ((1, 3), vec![(2, s(-1))]),
            ],
        ),
        "mat2" => (
            4,
            vec![
                // e1 = E12, e2 = E21, e3 = E11
                ((1, 2), vec![(3, s(1))]),
                ((2, 1), vec![(0, s(1)), (3, s(-1))]),
                ((2, 3), vec![(2, s(1))]),
                ((3, 1), vec![(1, s(1))]),
                ((3, 3), vec![(3, s(1))]),
            ],
        ),
        other => return Err(Error::UnknownAlgebra(other.to_string())),
    };
    let mut rows = unit_rows(dim);
    // e_0 * e_0 appears twice in unit_rows
    rows.remove(1);
    table.extend(rows);
    let table: Vec<((usize, usize), &[(usize, Scalar)])> =
        table.iter().map(|(ij, terms)| (*ij, terms.as_slice())).collect();
    Algebra::new(name, StructureConstants::from_products(dim, &table)?)
}

/// An element of an algebra, stored as its coordinates in the basis.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgElement {
    algebra: Arc<Algebra>,
    coords: Vec<Scalar>,
}

impl AlgElement {
    pub fn new(algebra: &Arc<Algebra>, coords: Vec<Scalar>) -> Result<Self> {
        if coords.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                found: coords.len(),
            });
        }
        Ok(AlgElement {
            algebra: Arc::clone(algebra),
            coords,
        })
    }

    pub fn from_ints(algebra: &Arc<Algebra>, coords: &[i64]) -> Result<Self> {
        Self::new(algebra, coords.iter().map(|&c| scalar::int(c)).collect())
    }

    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        AlgElement {
            algebra: Arc::clone(algebra),
            coords: vec![Scalar::zero(); algebra.dim()],
        }
    }

    /// The unit `e_0`.
    pub fn one(algebra: &Arc<Algebra>) -> Self {
        Self::basis(algebra, 0)
    }

    /// Basis vector `e_i`. Panics if `i` is out of range.
    pub fn basis(algebra: &Arc<Algebra>, i: usize) -> Self {
        assert!(i < algebra.dim(), "basis index {i} out of range");
        let mut e = Self::zero(algebra);
        e.coords[i] = Scalar::one();
        e
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &AlgElement) -> Result<()> {
        same_algebra(&self.algebra, &other.algebra)
    }

    /// `self * other` via the structure constants.
    pub fn mul(&self, other: &AlgElement) -> Result<AlgElement> {
        self.check(other)?;
        Ok(self.with_coords(self.algebra.mul_coords(&self.coords, &other.coords)))
    }

    pub fn add(&self, other: &AlgElement) -> Result<AlgElement> {
        self.check(other)?;
        Ok(self.with_coords(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &AlgElement) -> Result<AlgElement> {
        self.check(other)?;
        Ok(self.with_coords(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect()))
    }

    pub fn neg(&self) -> AlgElement {
        self.with_coords(self.coords.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, s: &Scalar) -> AlgElement {
        self.with_coords(self.coords.iter().map(|a| a * s).collect())
    }

    /// Two-sided inverse, found by inverting the left multiplication operator
    /// and applying it to the unit.
    pub fn inverse(&self) -> Result<AlgElement> {
        let l = self.algebra.left_mul_matrix(&self.coords);
        let inv = l.inverse().ok_or(Error::NotInvertible)?;
        let one = AlgElement::one(&self.algebra);
        let y = self.with_coords(inv.mul_vec(one.coords()));
        // a one-sided inverse is two-sided in a finite-dimensional algebra
        debug_assert_eq!(y.mul(self).ok().as_ref(), Some(&one));
        Ok(y)
    }

    fn with_coords(&self, coords: Vec<Scalar>) -> AlgElement {
        AlgElement {
            algebra: Arc::clone(&self.algebra),
            coords,
        }
    }
}

impl fmt::Debug for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(scalar::format).collect();
        write!(f, "{}{:?}", self.algebra.name, c)
    }
}

impl fmt::Display for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", scalar::format(c))?;
        }
        write!(f, ")")
    }
}
