pub mod complex;
pub mod eigen;
pub mod lp;
pub mod matrix;

pub use complex::{cdot, cnorm, CMatrix};
pub use eigen::{
    hermitian_eigen, least_squares, orthonormalize, orthonormalize_with_tol, symmetric_eigen, SymmetricEigen,
};
pub use lp::{lp_solve, lp_solve_lazy, lp_solve_with, LinearProgram, LpOptions, LpOutcome, LpSolution};
pub use matrix::{dot, norm, scale_vec, sub_vec, RealMatrix};
