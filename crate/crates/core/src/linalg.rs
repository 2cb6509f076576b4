//! Double-double dense Hermitian eigenvalues (cyclic Jacobi).
//!
//! Gram matrices of the non-orthogonal families have condition numbers far
//! beyond `1/f64::EPSILON`, so they are diagonalized without leaving
//! double-double arithmetic.

use crate::scalar::{abs, cr, real, rone, rzero, Real, Scalar};

/// Eigenvalues of a Hermitian matrix, ascending. Only the upper triangle's
/// Hermitian part is used.
pub fn hermitian_eigenvalues(m: &[Vec<Scalar>]) -> Vec<Real> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..n).map(|j| (m[i][j] + m[j][i].conj()) * cr(real(0.5))).collect())
        .collect();
    let frob = a.iter().flatten().fold(rzero(), |s, z| s + z.re * z.re + z.im * z.im);
    let stop = frob * real(1e-64);
    for _sweep in 0..100 {
        let mut off = rzero();
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j].re * a[i][j].re + a[i][j].im * a[i][j].im;
            }
        }
        if off.0 <= stop.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let beta = abs(a[p][q]);
                if beta.0 == 0.0 {
                    continue;
                }
                // A_pq = β w with |w| = 1; D = diag(1, w̄) makes the block real.
                let w = a[p][q] / cr(beta);
                let alpha = a[p][p].re;
                let gamma = a[q][q].re;
                let tau = (gamma - alpha) / (real(2.0) * beta);
                let t = if tau.0.abs() > 1e100 {
                    // τ² would overflow; t → 1/(2τ).
                    rone() / (real(2.0) * tau)
                } else {
                    let r = (rone() + tau * tau).sqrt();
                    if tau.0 >= 0.0 {
                        rone() / (tau + r)
                    } else {
                        -rone() / (-tau + r)
                    }
                };
                let c = rone() / (rone() + t * t).sqrt();
                let s = t * c;
                let (cc, ss) = (cr(c), cr(s));
                let wb = w.conj();
                // Columns: A ← A V with V = D R.
                for row in a.iter_mut() {
                    let kp = row[p];
                    let kq = row[q];
                    row[p] = kp * cc - kq * ss * wb;
                    row[q] = kp * ss + kq * cc * wb;
                }
                // Rows: A ← V† A.
                for k in 0..n {
                    let pk = a[p][k];
                    let qk = a[q][k];
                    a[p][k] = pk * cc - qk * ss * w;
                    a[q][k] = pk * ss + qk * cc * w;
                }
                a[p][q] = cr(rzero());
                a[q][p] = cr(rzero());
                a[p][p] = cr(alpha - t * beta);
                a[q][q] = cr(gamma + t * beta);
            }
        }
    }
    let mut ev: Vec<Real> = (0..n).map(|i| a[i][i].re).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    ev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, to_f64};

    #[test]
    fn two_by_two() {
        // [[2, i], [−i, 2]] has eigenvalues 1 and 3.
        let m = vec![vec![c(2.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(2.0, 0.0)]];
        let ev = hermitian_eigenvalues(&m);
        assert!((to_f64(ev[0]) - 1.0).abs() < 1e-30);
        assert!((to_f64(ev[1]) - 3.0).abs() < 1e-30);
    }

    #[test]
    fn hilbert_matrix_extremes() {
        // The 8×8 Hilbert matrix: λ_min ≈ 1.111538966e−10, λ_max ≈ 1.695938996.
        let n = 8;
        let m: Vec<Vec<Scalar>> =
            (0..n).map(|i| (0..n).map(|j| cr(rone() / real((i + j + 1) as f64))).collect()).collect();
        let ev = hermitian_eigenvalues(&m);
        assert!((to_f64(ev[0]) / 1.111538966e-10 - 1.0).abs() < 1e-9);
        assert!((to_f64(ev[n - 1]) / 1.695938996 - 1.0).abs() < 1e-9);
        let trace: f64 = (0..n).map(|i| 1.0 / (2 * i + 1) as f64).sum();
        let sum: f64 = ev.iter().map(|v| to_f64(*v)).sum();
        assert!((sum - trace).abs() < 1e-14);
    }
}
