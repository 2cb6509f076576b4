use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

type CMat = DMatrix<Complex64>;
type CVec = DVector<Complex64>;

/// Truncated matrix realization of non-linear pseudo-bosons.
///
/// With `Θ = L L†` (Cholesky), the columns of `L^{−†}` form the family Φ and
/// `b`, `a` act on it as the weighted shifts `√ε_{n+1}` up and `√ε_n` down.
#[derive(Clone, Debug)]
pub struct NlpbModel {
    pub epsilon: Vec<f64>,
    pub n: usize,
    pub theta: CMat,
    pub a: CMat,
    pub b: CMat,
    /// `Φ_n = b^n Φ₀ / √(ε_n!)`.
    pub phi: Vec<CVec>,
    /// `η_n = (a†)^n η₀ / √(ε_n!)`.
    pub eta: Vec<CVec>,
}

/// `ε_n! = ε₁ ⋯ ε_n`, with `ε₀! = 1`.
pub fn generalized_factorial(epsilon: &[f64], n: usize) -> f64 {
    epsilon[1..=n].iter().product()
}

fn validate(epsilon: &[f64], theta: &CMat) -> Result<()> {
    if epsilon.len() < 2 {
        return Err(Error::InvalidParameter("need at least two levels".into()));
    }
    if epsilon[0] != 0.0 {
        return Err(Error::InvalidParameter(format!("epsilon_0 = {} must be 0", epsilon[0])));
    }
    if let Some(w) = epsilon.windows(2).find(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be strictly increasing: {} is followed by {}",
            w[0], w[1]
        )));
    }
    let n = epsilon.len();
    if theta.nrows() != n || theta.ncols() != n {
        return Err(Error::Dimension(format!(
            "metric is {}x{}, expected {n}x{n}",
            theta.nrows(),
            theta.ncols()
        )));
    }
    let scale = theta.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let asym = (theta - theta.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if asym > 1e-12 * scale {
        return Err(Error::InvalidParameter(format!("metric is not Hermitian (deviation {asym:e})")));
    }
    Ok(())
}

pub fn make_nlpb(epsilon: &[f64], theta: CMat) -> Result<NlpbModel> {
    validate(epsilon, &theta)?;
    let n = epsilon.len();
    let hermitian = (&theta + theta.adjoint()) * Complex64::new(0.5, 0.0);
    // Complex Cholesky in nalgebra does not reject indefinite input.
    let spectrum = hermitian.clone().symmetric_eigenvalues();
    let top = spectrum.iter().cloned().fold(0.0, f64::max);
    let bottom = spectrum.iter().cloned().fold(f64::INFINITY, f64::min);
    if bottom.is_nan() || bottom <= 1e-14 * top {
        return Err(Error::InvalidParameter(format!("metric is not positive definite (smallest eigenvalue {bottom:e})")));
    }
    let chol = hermitian
        .clone()
        .cholesky()
        .ok_or_else(|| Error::InvalidParameter("metric is not positive definite".into()))?;
    let l = chol.l();
    let l_dag = l.adjoint();
    let phi_mat = l_dag
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidParameter("metric is singular".into()))?;
    let mut up = CMat::zeros(n, n);
    let mut down = CMat::zeros(n, n);
    for k in 0..n - 1 {
        up[(k + 1, k)] = Complex64::new(epsilon[k + 1].sqrt(), 0.0);
        down[(k, k + 1)] = Complex64::new(epsilon[k + 1].sqrt(), 0.0);
    }
    // Φ^{−1} = L†.
    let b = &phi_mat * up * &l_dag;
    let a = &phi_mat * down * &l_dag;

    let phi0: CVec = phi_mat.column(0).into_owned();
    let eta0: CVec = &hermitian * &phi0;
    let a_dag = a.adjoint();
    let mut phi = vec![phi0];
    let mut eta = vec![eta0];
    for k in 1..n {
        let s = Complex64::new(1.0 / epsilon[k].sqrt(), 0.0);
        let next_phi = &b * &phi[k - 1] * s;
        let next_eta = &a_dag * &eta[k - 1] * s;
        phi.push(next_phi);
        eta.push(next_eta);
    }
    Ok(NlpbModel { epsilon: epsilon.to_vec(), n, theta: hermitian, a, b, phi, eta })
}

impl NlpbModel {
    /// `M = ba`.
    pub fn m(&self) -> CMat {
        &self.b * &self.a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_spectrum_with_identity_metric_is_the_oscillator() {
        let eps: Vec<f64> = (0..6).map(|k| k as f64).collect();
        let m = make_nlpb(&eps, CMat::identity(6, 6)).unwrap();
        for k in 0..5 {
            assert!((m.b[(k + 1, k)] - Complex64::new(((k + 1) as f64).sqrt(), 0.0)).norm() < 1e-15);
        }
        for k in 0..6 {
            assert!((&m.eta[k] - &m.phi[k]).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(make_nlpb(&[0.0, 2.0, 1.0], CMat::identity(3, 3)).is_err());
        assert!(make_nlpb(&[0.1, 1.0, 2.0], CMat::identity(3, 3)).is_err());
        let mut neg = CMat::identity(3, 3);
        neg[(2, 2)] = Complex64::new(-1.0, 0.0);
        assert!(make_nlpb(&[0.0, 1.0, 2.0], neg).is_err());
        assert_eq!(generalized_factorial(&[0.0, 1.0, 3.0, 6.0], 3), 18.0);
        assert_eq!(generalized_factorial(&[0.0, 1.0], 0), 1.0);
    }
}
