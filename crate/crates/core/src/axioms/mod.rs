//! Residual checks of the pseudo-bosonic statements, one report per check.

mod checks;
mod report;

pub use checks::{
    check_biorthogonality, check_commutator, check_duality, check_eigenvalues, check_ladder, check_nlpb,
    check_pathology, check_quadrature, check_quasi_basis, check_theta, grid, riesz_diagnostic, QUAD_MASS_CAP,
};
pub use report::{CheckReport, Index, ResidualRow, Tolerances, TraceRow};
