//! Normal-ordered differential operators and the exp-quadratic / dilation
//! maps that play the role of metric operators.

mod diffop;
mod special;

pub use diffop::{commutator, DiffOp, DiffOp1, DiffOp2, OpKey};
pub use special::{apply_special, SpecialKind, SpecialOp};
