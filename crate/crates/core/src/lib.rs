pub mod algebra;
pub mod cli;
pub mod error;
pub mod format;
pub mod funmatrix;
pub mod linalg;
pub mod linmap;
pub mod scalar;
pub mod solver;

pub use algebra::{builtin_algebra, validate_algebra, AlgElement, Algebra, StructureConstants};
pub use error::{Error, Result};
pub use funmatrix::{MapMatrix, QuasidetResult, RcInverse};
pub use linalg::RatMatrix;
pub use linmap::LinMap;
pub use scalar::Scalar;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/linear-mappings.md")]
    mod linear_mappings {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    mod matrices {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
