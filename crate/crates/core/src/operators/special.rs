use crate::error::Result;
use crate::scalar::{cone, Scalar};
use crate::symfun::GaussSum;

/// One elementary non-polynomial map.
#[derive(Clone, Debug, PartialEq)]
pub enum SpecialKind<const D: usize> {
    /// Multiplication by `exp(Σ −q2_d x_d²/2 + q1_d x_d)`.
    MultiplyExp { q2: [Scalar; D], q1: [Scalar; D] },
    /// `f ↦ f(λ x)` coordinate-wise.
    Dilation { lambda: [Scalar; D] },
}

impl<const D: usize> SpecialKind<D> {
    fn inverse(&self) -> Self {
        match self {
            Self::MultiplyExp { q2, q1 } => Self::MultiplyExp { q2: q2.map(|v| -v), q1: q1.map(|v| -v) },
            Self::Dilation { lambda } => Self::Dilation { lambda: lambda.map(|l| cone() / l) },
        }
    }
}

/// Composition of exp-quadratic multiplications and complex dilations with a
/// scalar prefactor. `factors[0]` acts first.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialOp<const D: usize> {
    pub factors: Vec<SpecialKind<D>>,
    pub prefactor: Scalar,
}

impl<const D: usize> SpecialOp<D> {
    pub fn identity() -> Self {
        Self { factors: Vec::new(), prefactor: cone() }
    }

    pub fn multiply_exp(q2: [Scalar; D], q1: [Scalar; D], prefactor: Scalar) -> Self {
        Self { factors: vec![SpecialKind::MultiplyExp { q2, q1 }], prefactor }
    }

    pub fn dilation(lambda: [Scalar; D], prefactor: Scalar) -> Self {
        Self { factors: vec![SpecialKind::Dilation { lambda }], prefactor }
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &Self) -> Self {
        let mut factors = other.factors.clone();
        factors.extend(self.factors.iter().cloned());
        Self { factors, prefactor: self.prefactor * other.prefactor }
    }

    pub fn inverse(&self) -> Self {
        Self {
            factors: self.factors.iter().rev().map(SpecialKind::inverse).collect(),
            prefactor: cone() / self.prefactor,
        }
    }

    pub fn scaled(&self, s: Scalar) -> Self {
        Self { factors: self.factors.clone(), prefactor: self.prefactor * s }
    }

    /// Image of `f`; fails with a domain exit when a curvature leaves the
    /// right half-plane.
    pub fn apply(&self, f: &GaussSum<D>) -> Result<GaussSum<D>> {
        let mut g = f.clone();
        for k in &self.factors {
            g = match k {
                SpecialKind::MultiplyExp { q2, q1 } => g.mul_exp(*q2, *q1, cone())?,
                SpecialKind::Dilation { lambda } => g.dilate(*lambda, cone())?,
            };
        }
        Ok(g.scale(self.prefactor))
    }
}

pub fn apply_special<const D: usize>(op: &SpecialOp<D>, f: &GaussSum<D>) -> Result<GaussSum<D>> {
    op.apply(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::scalar::{c, real, to_f64, unit_phase};
    use crate::symfun::{distance, hermite_function};

    #[test]
    fn identity_is_neutral() {
        let f = hermite_function(4).unwrap();
        assert_eq!(SpecialOp::identity().apply(&f).unwrap(), f);
    }

    #[test]
    fn inverse_round_trip() {
        let op = SpecialOp::<1>::multiply_exp([c(0.1, 0.2)], [c(0.5, -0.3)], c(2.0, 1.0))
            .compose(&SpecialOp::dilation([unit_phase(real(0.3))], c(0.0, 1.0)));
        let f = hermite_function(5).unwrap();
        let back = op.inverse().apply(&op.apply(&f).unwrap()).unwrap();
        assert!(to_f64(distance(&back, &f).unwrap()) < 1e-28);
        let twice = op.inverse().inverse().apply(&f).unwrap();
        assert!(to_f64(distance(&twice, &op.apply(&f).unwrap()).unwrap()) < 1e-28);
    }

    #[test]
    fn domain_exit_is_reported() {
        let op = SpecialOp::<1>::multiply_exp([c(-3.0, 0.0)], [c(0.0, 0.0)], cone());
        let f = hermite_function(0).unwrap();
        assert!(matches!(op.apply(&f), Err(Error::DomainExit { .. })));
    }
}
