//! Exact linear algebra over ℚ and ℤ.

mod qmatrix;
mod snf;
mod space;
mod subquotient;
mod zmatrix;

pub use qmatrix::{rref_solve, QMatrix, Quotient, Rref, RrefSolve};
pub use snf::{snf, snf_with, SnfResult};
pub use space::QSpace;
pub use subquotient::Subquotient;
pub use zmatrix::ZMatrix;
