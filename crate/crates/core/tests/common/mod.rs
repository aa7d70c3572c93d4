//! Seeded random generators shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use quasidet::{AlgElement, Algebra, LinMap, MapMatrix, Scalar};
use quasidet::scalar::int;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small(rng: &mut ChaCha8Rng) -> Scalar {
    int(rng.gen_range(-3..=3))
}

pub fn element(rng: &mut ChaCha8Rng, alg: &Arc<Algebra>) -> AlgElement {
    let coords = (0..alg.dim()).map(|_| small(rng)).collect();
    AlgElement::new(alg, coords).unwrap()
}

pub fn nonzero_element(rng: &mut ChaCha8Rng, alg: &Arc<Algebra>) -> AlgElement {
    loop {
        let x = element(rng, alg);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Mapping with every coefficient drawn from -3..=3.
pub fn linmap(rng: &mut ChaCha8Rng, alg: &Arc<Algebra>) -> LinMap {
    let n = alg.dim();
    LinMap::from_coeffs(alg, (0..n * n).map(|_| small(rng)).collect()).unwrap()
}

/// Sum of at most `max_terms` rank-one terms `a (x) b`.
pub fn tensor_map(rng: &mut ChaCha8Rng, alg: &Arc<Algebra>, max_terms: usize) -> LinMap {
    let terms: Vec<_> = (0..rng.gen_range(0..=max_terms))
        .map(|_| (element(rng, alg), element(rng, alg)))
        .collect();
    LinMap::from_terms(alg, &terms).unwrap()
}

pub fn tensor_matrix(rng: &mut ChaCha8Rng, alg: &Arc<Algebra>, order: usize, max_terms: usize) -> MapMatrix {
    MapMatrix::from_fn(alg, order, order, |_, _| tensor_map(rng, alg, max_terms)).unwrap()
}

pub fn field_matrix(rng: &mut ChaCha8Rng, alg: &Arc<Algebra>, rows: usize, cols: usize, range: i64) -> MapMatrix {
    MapMatrix::from_fn(alg, rows, cols, |_, _| LinMap::scalar(alg, int(rng.gen_range(-range..=range)))).unwrap()
}

/// Associativity and unit check written out term by term from the table,
/// independent of `validate_algebra`.
pub fn brute_force_is_algebra(c: &quasidet::StructureConstants) -> bool {
    use num_traits::{One, Zero};
    let n = c.dim();
    let mul = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out[k] += &x[i] * &y[j] * c.get(i, j, k);
                }
            }
        }
        out
    };
    let basis = |i: usize| -> Vec<Scalar> {
        (0..n).map(|k| if k == i { Scalar::one() } else { Scalar::zero() }).collect()
    };
    for i in 0..n {
        let ei = basis(i);
        if mul(&basis(0), &ei) != ei || mul(&ei, &basis(0)) != ei {
            return false;
        }
        for j in 0..n {
            for k in 0..n {
                let (ej, ek) = (basis(j), basis(k));
                if mul(&mul(&ei, &ej), &ek) != mul(&ei, &mul(&ej, &ek)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<Scalar>]) -> Scalar {
    use num_traits::Zero;
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = Scalar::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let sub = drop_row_col(m, 0, j);
        let term = &m[0][j] * cofactor_det(&sub);
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

pub fn drop_row_col(m: &[Vec<Scalar>], r: usize, c: usize) -> Vec<Vec<Scalar>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// Inverse through the adjugate; `None` when the determinant vanishes.
pub fn adjugate_inverse(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    use num_traits::Zero;
    let n = m.len();
    let det = cofactor_det(m);
    if det.is_zero() {
        return None;
    }
    if n == 1 {
        return Some(vec![vec![det.recip()]]);
    }
    Some(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = cofactor_det(&drop_row_col(m, j, i)) / &det;
                        if (i + j) % 2 == 0 { c } else { -c }
                    })
                    .collect()
            })
            .collect(),
    )
}

/// The scalar entries of a matrix over the one-dimensional field algebra.
pub fn field_entries(m: &MapMatrix) -> Vec<Vec<Scalar>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|f| f.coeff(0, 0).clone()).collect())
        .collect()
}
