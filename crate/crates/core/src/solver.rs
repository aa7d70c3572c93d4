//! Systems `A x = b` where `A` is a square matrix of linear mappings and `x`,
//! `b` are columns of algebra elements.
//!
//! Two independent routes are provided. The reduction route expands
//! everything in the basis and row-reduces an `(m n) x (m n)` rational
//! system; it is the authority on singularity. The quasideterminant route
//! solves through the RC-inverse, and checks its matrix form against the
//! componentwise quasideterminant form on every call.

use std::sync::Arc;

use crate::algebra::{same_algebra, AlgElement, Algebra};
use crate::error::{Error, Result};
use crate::funmatrix::MapMatrix;
use crate::linalg::RatMatrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem {
    matrix: MapMatrix,
    rhs: Vec<AlgElement>,
}

impl LinearSystem {
    pub fn new(matrix: MapMatrix, rhs: Vec<AlgElement>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "system matrix must be square, found {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if rhs.len() != matrix.rows() {
            return Err(Error::ShapeMismatch(format!(
                "right-hand side has {} entries for {} equations",
                rhs.len(),
                matrix.rows()
            )));
        }
        for b in &rhs {
            same_algebra(matrix.algebra(), b.algebra())?;
        }
        Ok(LinearSystem { matrix, rhs })
    }

    pub fn matrix(&self) -> &MapMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &[AlgElement] {
        &self.rhs
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.matrix.algebra()
    }

    /// Number of equations.
    pub fn order(&self) -> usize {
        self.matrix.rows()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Nonsingular,
    Singular { rank: usize, nullity: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Quasidet,
    Reduction,
    Both,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Quasidet => "quasidet",
            Method::Reduction => "reduction",
            Method::Both => "both",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quasidet" => Ok(Method::Quasidet),
            "reduction" => Ok(Method::Reduction),
            "both" => Ok(Method::Both),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub method: Method,
    pub status: Classification,
    /// False only for singular systems without solutions.
    pub consistent: bool,
    /// The unique solution of a nonsingular system.
    pub solution: Option<Vec<AlgElement>>,
    /// For singular consistent systems: the solution with free coordinates
    /// set to zero.
    pub particular: Option<Vec<AlgElement>>,
    /// Null space basis of the reduced system, in concatenated coordinates.
    pub nullspace: Vec<Vec<Scalar>>,
    pub residual_zero: bool,
    /// Whether the componentwise quasideterminant form was defined (and
    /// therefore checked against the matrix form).
    pub componentwise_checked: bool,
    /// `Some(true)` when both routes ran and returned the same vector.
    pub methods_agree: Option<bool>,
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
}

/// Expands the system over the basis: block `(i, k)` of the grid is the
/// operator matrix of `A[i][k]`, and the right-hand side is the concatenated
/// coordinates of `b`.
pub fn field_reduction(system: &LinearSystem) -> (RatMatrix, Vec<Scalar>) {
    let grid = system.matrix.operator_matrix();
    let rhs = system.rhs.iter().flat_map(|b| b.coords().iter().cloned()).collect();
    (grid, rhs)
}

/// Nonsingular iff the reduced grid is invertible.
pub fn classify(system: &LinearSystem) -> Classification {
    classify_matrix(&system.matrix)
}

pub fn classify_matrix(matrix: &MapMatrix) -> Classification {
    let grid = matrix.operator_matrix();
    let rank = grid.rank();
    if rank == grid.cols() {
        Classification::Nonsingular
    } else {
        Classification::Singular {
            rank,
            nullity: grid.cols() - rank,
        }
    }
}

/// `A x - b`, componentwise.
pub fn residual(system: &LinearSystem, x: &[AlgElement]) -> Result<Vec<AlgElement>> {
    system
        .matrix
        .apply(x)?
        .iter()
        .zip(&system.rhs)
        .map(|(ax, b)| ax.sub(b))
        .collect()
}

fn split_coords(alg: &Arc<Algebra>, coords: &[Scalar]) -> Result<Vec<AlgElement>> {
    coords
        .chunks(alg.dim())
        .map(|c| AlgElement::new(alg, c.to_vec()))
        .collect()
}

fn residual_is_zero(system: &LinearSystem, x: &[AlgElement]) -> Result<bool> {
    Ok(residual(system, x)?.iter().all(AlgElement::is_zero))
}

/// Exact row reduction of the expanded system.
pub fn solve_reduction(system: &LinearSystem) -> Result<SolveReport> {
    let (grid, rhs) = field_reduction(system);
    let size = grid.cols();
    let solution = grid.solve(&rhs);
    let alg = system.algebra();
    let particular = solution
        .particular
        .as_deref()
        .map(|p| split_coords(alg, p))
        .transpose()?;
    let residual_zero = match &particular {
        Some(x) => residual_is_zero(system, x)?,
        None => false,
    };
    let mut report = SolveReport {
        method: Method::Reduction,
        status: Classification::Nonsingular,
        consistent: particular.is_some(),
        solution: None,
        particular: None,
        nullspace: solution.nullspace,
        residual_zero,
        componentwise_checked: false,
        methods_agree: None,
        row_perm: Vec::new(),
        col_perm: Vec::new(),
    };
    if solution.rank == size {
        report.solution = particular;
    } else {
        report.status = Classification::Singular {
            rank: solution.rank,
            nullity: size - solution.rank,
        };
        report.particular = particular;
    }
    Ok(report)
}

/// Solves through the RC-inverse: `x = inv(A) b`, cross-checked against
/// `x[i] = sum_j inv(quasideterminant(A, j, i))(b[j])` whenever every
/// quasideterminant involved is defined and invertible.
pub fn solve_quasidet(system: &LinearSystem) -> Result<SolveReport> {
    if let Classification::Singular { rank, nullity } = classify(system) {
        return Err(Error::Singular(format!(
            "system is singular (rank {rank}, nullity {nullity})"
        )));
    }
    let a = &system.matrix;
    let inv = a.rc_inverse()?;
    let x = inv.inverse.apply(&system.rhs)?;

    let componentwise = componentwise_solution(system)?;
    if let Some(y) = &componentwise {
        if *y != x {
            return Err(Error::FormsDisagree(
                "matrix form and quasideterminant form of the solution differ".into(),
            ));
        }
    }
    let residual_zero = residual_is_zero(system, &x)?;
    Ok(SolveReport {
        method: Method::Quasidet,
        status: Classification::Nonsingular,
        consistent: true,
        solution: Some(x),
        particular: None,
        nullspace: Vec::new(),
        residual_zero,
        componentwise_checked: componentwise.is_some(),
        methods_agree: None,
        row_perm: inv.row_perm,
        col_perm: inv.col_perm,
    })
}

fn componentwise_solution(system: &LinearSystem) -> Result<Option<Vec<AlgElement>>> {
    let a = &system.matrix;
    let m = system.order();
    let mut x = Vec::with_capacity(m);
    for i in 0..m {
        let mut acc = AlgElement::zero(system.algebra());
        for (j, bj) in system.rhs.iter().enumerate() {
            let qd = match a.quasideterminant(j, i) {
                Ok(qd) => qd.value,
                Err(Error::NotDefined(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            let entry = match qd.invert() {
                Ok(f) => f,
                Err(Error::Singular(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            acc = acc.add(&entry.apply(bj)?)?;
        }
        x.push(acc);
    }
    Ok(Some(x))
}

/// Runs the requested route(s). With [`Method::Both`], a nonsingular system
/// is solved both ways and the answers must coincide.
pub fn solve(system: &LinearSystem, method: Method) -> Result<SolveReport> {
    match method {
        Method::Reduction => solve_reduction(system),
        Method::Quasidet => solve_quasidet(system),
        Method::Both => {
            let mut report = solve_reduction(system)?;
            report.method = Method::Both;
            if report.status == Classification::Nonsingular {
                let q = solve_quasidet(system)?;
                if q.solution != report.solution {
                    return Err(Error::FormsDisagree(
                        "quasideterminant and reduction solutions differ".into(),
                    ));
                }
                report.methods_agree = Some(true);
                report.componentwise_checked = q.componentwise_checked;
                report.row_perm = q.row_perm;
                report.col_perm = q.col_perm;
            }
            Ok(report)
        }
    }
}
