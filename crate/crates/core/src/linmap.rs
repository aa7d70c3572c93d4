//! Linear mappings of an algebra in the standard representation
//! `f = sum_{k,l} f^{kl} e_k (x) e_l`, acting by `x -> sum f^{kl} e_k x e_l`.
//!
//! The coefficient grid is the canonical form: two mappings are equal iff
//! their grids are equal, and term lists are normalized on construction.
//! Composition `f.compose(g)` is "f after g".

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{same_algebra, AlgElement, Algebra};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::scalar::{self, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct LinMap {
    algebra: Arc<Algebra>,
    // f^{kl} at k * n + l
    coeffs: Vec<Scalar>,
}

impl LinMap {
    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        let n = algebra.dim();
        LinMap {
            algebra: Arc::clone(algebra),
            coeffs: vec![Scalar::zero(); n * n],
        }
    }

    /// `e_0 (x) e_0`.
    pub fn identity(algebra: &Arc<Algebra>) -> Self {
        Self::scalar(algebra, Scalar::one())
    }

    /// `s e_0 (x) e_0`, i.e. `x -> s x`.
    pub fn scalar(algebra: &Arc<Algebra>, s: Scalar) -> Self {
        let mut f = Self::zero(algebra);
        f.coeffs[0] = s;
        f
    }

    /// Builds a mapping from a flat `n * n` coefficient list, `f^{kl}` at
    /// position `k * n + l`.
    pub fn from_coeffs(algebra: &Arc<Algebra>, coeffs: Vec<Scalar>) -> Result<Self> {
        let n = algebra.dim();
        if coeffs.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: coeffs.len(),
            });
        }
        Ok(LinMap {
            algebra: Arc::clone(algebra),
            coeffs,
        })
    }

    pub fn from_coeff_rows(algebra: &Arc<Algebra>, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = algebra.dim();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!(
                "coefficient grid of a mapping must be {n}x{n}"
            )));
        }
        Self::from_coeffs(algebra, rows.into_iter().flatten().collect())
    }

    /// `sum_s a_s (x) b_s`. An empty list gives the zero mapping.
    pub fn from_terms(algebra: &Arc<Algebra>, terms: &[(AlgElement, AlgElement)]) -> Result<Self> {
        let n = algebra.dim();
        let mut f = Self::zero(algebra);
        for (a, b) in terms {
            same_algebra(algebra, a.algebra())?;
            same_algebra(algebra, b.algebra())?;
            for (k, ak) in a.coords().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                for (l, bl) in b.coords().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    f.coeffs[k * n + l] += ak * bl;
                }
            }
        }
        Ok(f)
    }

    /// The rank-one mapping `x -> a x b`.
    pub fn tensor(a: &AlgElement, b: &AlgElement) -> Result<Self> {
        Self::from_terms(a.algebra(), &[(a.clone(), b.clone())])
    }

    /// `x -> a x`.
    pub fn left_mul(a: &AlgElement) -> Self {
        let one = AlgElement::one(a.algebra());
        Self::tensor(a, &one).expect("same algebra")
    }

    /// `x -> x b`.
    pub fn right_mul(b: &AlgElement) -> Self {
        let one = AlgElement::one(b.algebra());
        Self::tensor(&one, b).expect("same algebra")
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn coeff(&self, k: usize, l: usize) -> &Scalar {
        &self.coeffs[k * self.dim() + l]
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff_rows(&self) -> Vec<Vec<Scalar>> {
        self.coeffs.chunks(self.dim()).map(<[Scalar]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.algebra)
    }

    /// `sum f^{kl} (e_k x) e_l`, multiplied out through the structure constants.
    pub fn apply(&self, x: &AlgElement) -> Result<AlgElement> {
        same_algebra(&self.algebra, x.algebra())?;
        let n = self.dim();
        let alg = &self.algebra;
        let mut out = vec![Scalar::zero(); n];
        for k in 0..n {
            let row = &self.coeffs[k * n..(k + 1) * n];
            if row.iter().all(Zero::is_zero) {
                continue;
            }
            let ek = AlgElement::basis(alg, k);
            let ekx = alg.mul_coords(ek.coords(), x.coords());
            for (l, f) in row.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let el = AlgElement::basis(alg, l);
                for (o, v) in out.iter_mut().zip(alg.mul_coords(&ekx, el.coords())) {
                    *o += f * v;
                }
            }
        }
        AlgElement::new(alg, out)
    }

    /// `self` after `other`: on rank-one terms
    /// `(a (x) b) o (c (x) d) = (a c) (x) (d b)`.
    pub fn compose(&self, other: &LinMap) -> Result<LinMap> {
        same_algebra(&self.algebra, other.algebra())?;
        let n = self.dim();
        let alg = &self.algebra;
        let mut out = Self::zero(alg);
        for k in 0..n {
            for l in 0..n {
                let f = &self.coeffs[k * n + l];
                if f.is_zero() {
                    continue;
                }
                for p in 0..n {
                    for q in 0..n {
                        let g = &other.coeffs[p * n + q];
                        if g.is_zero() {
                            continue;
                        }
                        let fg = f * g;
                        // (e_k e_p) (x) (e_q e_l)
                        for (r, c1) in alg.basis_product(k, p) {
                            let fgc = &fg * c1;
                            for (s, c2) in alg.basis_product(q, l) {
                                out.coeffs[r * n + s] += &fgc * c2;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &LinMap) -> Result<LinMap> {
        same_algebra(&self.algebra, other.algebra())?;
        Ok(self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &LinMap) -> Result<LinMap> {
        same_algebra(&self.algebra, other.algebra())?;
        Ok(self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect()))
    }

    pub fn neg(&self) -> LinMap {
        self.with_coeffs(self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, s: &Scalar) -> LinMap {
        self.with_coeffs(self.coeffs.iter().map(|a| a * s).collect())
    }

    /// Matrix of the mapping acting on coordinate columns:
    /// `coords(f(x)) = M * coords(x)`.
    pub fn operator_matrix(&self) -> RatMatrix {
        let n = self.dim();
        let ops = &self.algebra.representation().basis_operators;
        let mut m = RatMatrix::zeros(n, n);
        for (kl, f) in self.coeffs.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            let t = &ops[kl];
            for j in 0..n {
                for i in 0..n {
                    let v = &t[(j, i)];
                    if !v.is_zero() {
                        m[(j, i)] += f * v;
                    }
                }
            }
        }
        m
    }

    /// Recovers standard coefficients from an operator matrix.
    ///
    /// When several coefficient grids give the same operator (commutative
    /// algebras), free unknowns are set to zero, so the answer is
    /// deterministic. Fails with [`Error::NotRepresentable`] when no grid
    /// produces `m`.
    pub fn from_operator_matrix(algebra: &Arc<Algebra>, m: &RatMatrix) -> Result<LinMap> {
        let n = algebra.dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "operator matrix must be {n}x{n}, found {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let rhs: Vec<Scalar> = (0..n * n).map(|r| m[(r / n, r % n)].clone()).collect();
        let solution = algebra.representation().system.solve(&rhs);
        let coeffs = solution.particular.ok_or(Error::NotRepresentable)?;
        Self::from_coeffs(algebra, coeffs)
    }

    /// Inverse mapping, via the inverse of the operator matrix.
    pub fn invert(&self) -> Result<LinMap> {
        let m = self.operator_matrix();
        let inv = m.inverse().ok_or_else(|| {
            Error::Singular(format!(
                "operator matrix has rank {} of {}",
                m.rank(),
                self.dim()
            ))
        })?;
        Self::from_operator_matrix(&self.algebra, &inv)
    }

    fn with_coeffs(&self, coeffs: Vec<Scalar>) -> LinMap {
        LinMap {
            algebra: Arc::clone(&self.algebra),
            coeffs,
        }
    }
}

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinMap[")?;
        let mut first = true;
        let n = self.dim();
        for (kl, c) in self.coeffs.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{} e{}(x)e{}", scalar::format(c), kl / n, kl % n)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin_algebra;
    use crate::scalar::int;

    fn quat() -> Arc<Algebra> {
        builtin_algebra("quaternion").unwrap()
    }

    fn e(a: &Arc<Algebra>, i: usize) -> AlgElement {
        AlgElement::basis(a, i)
    }

    #[test]
    fn from_terms_examples() {
        let a = quat();
        let id = LinMap::from_terms(&a, &[(e(&a, 0), e(&a, 0))]).unwrap();
        assert!(id.is_identity());
        assert!(LinMap::from_terms(&a, &[]).unwrap().is_zero());

        let ij = (e(&a, 1), e(&a, 2));
        let f = LinMap::from_terms(&a, &[ij.clone(), ij]).unwrap();
        assert_eq!(*f.coeff(1, 2), int(2));
        assert_eq!(f.coeffs().iter().filter(|c| !c.is_zero()).count(), 1);
        for b in 0..4 {
            let x = e(&a, b);
            let expected = e(&a, 1).mul(&x).unwrap().mul(&e(&a, 2)).unwrap().scale(&int(2));
            assert_eq!(f.apply(&x).unwrap(), expected);
        }

        let c = builtin_algebra("complex").unwrap();
        assert_eq!(
            LinMap::from_terms(&a, &[(e(&a, 0), e(&c, 0))]).unwrap_err(),
            Error::AlgebraMismatch
        );
    }

    #[test]
    fn apply_examples() {
        let a = quat();
        let x = AlgElement::from_ints(&a, &[3, -1, 2, 5]).unwrap();
        assert_eq!(LinMap::identity(&a).apply(&x).unwrap(), x);
        let f = LinMap::tensor(&e(&a, 1), &e(&a, 2)).unwrap();
        assert_eq!(f.apply(&e(&a, 0)).unwrap(), e(&a, 3));
        assert_eq!(f.apply(&e(&a, 3)).unwrap(), e(&a, 0));
    }

    #[test]
    fn compose_examples() {
        let a = quat();
        let g = LinMap::tensor(&e(&a, 2), &e(&a, 3)).unwrap();
        assert_eq!(LinMap::identity(&a).compose(&g).unwrap(), g);
        let f = LinMap::tensor(&e(&a, 1), &e(&a, 2)).unwrap();
        let fg = f.compose(&g).unwrap();
        let mut expected = LinMap::zero(&a);
        expected.coeffs[3 * 4 + 1] = int(-1);
        assert_eq!(fg, expected);
        for b in 0..4 {
            let x = e(&a, b);
            assert_eq!(fg.apply(&x).unwrap(), f.apply(&g.apply(&x).unwrap()).unwrap());
        }

        let field = builtin_algebra("field").unwrap();
        let two = LinMap::scalar(&field, int(2));
        let three = LinMap::scalar(&field, int(3));
        assert_eq!(two.compose(&three).unwrap(), LinMap::scalar(&field, int(6)));
    }

    #[test]
    fn plumbing_examples() {
        let a = quat();
        assert!(LinMap::left_mul(&e(&a, 0)).is_identity());
        assert_eq!(LinMap::left_mul(&e(&a, 1)).apply(&e(&a, 2)).unwrap(), e(&a, 3));
        assert_eq!(LinMap::right_mul(&e(&a, 1)).apply(&e(&a, 2)).unwrap(), e(&a, 3).neg());
        let f = LinMap::tensor(&e(&a, 1), &e(&a, 2)).unwrap();
        assert!(f.add(&f.neg()).unwrap().is_zero());
        assert_eq!(f.scale(&int(3)).sub(&f).unwrap(), f.scale(&int(2)));
    }

    #[test]
    fn operator_matrix_examples() {
        let a = quat();
        assert_eq!(LinMap::identity(&a).operator_matrix(), RatMatrix::identity(4));
        let field = builtin_algebra("field").unwrap();
        assert_eq!(
            LinMap::scalar(&field, int(5)).operator_matrix(),
            RatMatrix::from_rows(vec![vec![int(5)]])
        );
        let i = e(&a, 1);
        let m = LinMap::tensor(&i, &e(&a, 0)).unwrap().operator_matrix();
        for col in 0..4 {
            let image = i.mul(&e(&a, col)).unwrap();
            for row in 0..4 {
                assert_eq!(m[(row, col)], image.coords()[row]);
            }
        }
    }

    #[test]
    fn from_operator_matrix_examples() {
        let a = quat();
        assert!(LinMap::from_operator_matrix(&a, &RatMatrix::identity(4))
            .unwrap()
            .is_identity());
        assert_eq!(a.representation().system.rank(), 16);

        let c = builtin_algebra("complex").unwrap();
        assert_eq!(c.representation().system.rank(), 2);
        let conj = RatMatrix::from_rows(vec![vec![int(1), int(0)], vec![int(0), int(-1)]]);
        assert_eq!(
            LinMap::from_operator_matrix(&c, &conj).unwrap_err(),
            Error::NotRepresentable
        );
        // multiplication by 2 + 3i is representable; free unknowns are zero
        let f = LinMap::left_mul(&AlgElement::from_ints(&c, &[2, 3]).unwrap());
        let back = LinMap::from_operator_matrix(&c, &f.operator_matrix()).unwrap();
        assert_eq!(back.operator_matrix(), f.operator_matrix());
        assert_eq!(back.coeffs(), &[int(2), int(3), int(0), int(0)]);
    }

    #[test]
    fn invert_examples() {
        let a = quat();
        let li = LinMap::tensor(&e(&a, 1), &e(&a, 0)).unwrap();
        assert_eq!(li.invert().unwrap(), LinMap::tensor(&e(&a, 1).neg(), &e(&a, 0)).unwrap());
        assert!(matches!(LinMap::zero(&a).invert(), Err(Error::Singular(_))));

        let f = LinMap::tensor(&e(&a, 1), &e(&a, 2)).unwrap();
        let inv = f.invert().unwrap();
        assert_eq!(inv, LinMap::tensor(&e(&a, 1).neg(), &e(&a, 2).neg()).unwrap());
        assert!(f.compose(&inv).unwrap().is_identity());
        assert!(inv.compose(&f).unwrap().is_identity());

        let d = builtin_algebra("dual").unwrap();
        let eps = LinMap::left_mul(&e(&d, 1));
        assert!(matches!(eps.invert(), Err(Error::Singular(_))));
    }
}
