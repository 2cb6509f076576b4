#![allow(clippy::needless_range_loop)]

pub mod axioms;
pub mod error;
pub mod linalg;
pub mod scalar;
pub mod models;
pub mod operators;
pub mod quadrature;
pub mod symfun;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};
pub use symfun::{gauss_moment, gram, inner_product, norm, CPoly, GaussSum, GaussSum1, GaussSum2, GaussTerm, Poly};
pub use axioms::{CheckReport, Index, ResidualRow, Tolerances, TraceRow};
pub use models::{make_model, AnyModel, ModelRecord, ModelSpec, PbModel, PbModel1, PbModel2};
pub use operators::{DiffOp, SpecialOp};
