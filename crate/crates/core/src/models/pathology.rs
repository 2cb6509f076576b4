use crate::error::{Error, Result};

/// Truncation of `ẽ_n = e_n + e₁` (n ≥ 2) and its biorthogonal partner
/// `ĝ_n = e_n` in the coordinates of `e₁, …, e_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathologyModel {
    pub n: usize,
    /// `tilde_e[k]` is ẽ_{k+2}.
    pub tilde_e: Vec<Vec<f64>>,
    /// `hat_g[k]` is ĝ_{k+2}.
    pub hat_g: Vec<Vec<f64>>,
}

/// Basis vector `e_k` (1-based) of length `n`.
pub fn unit(n: usize, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[k - 1] = 1.0;
    v
}

pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn make_pathology(n: usize) -> Result<PathologyModel> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("pathology truncation N = {n} must be at least 3")));
    }
    let tilde_e = (2..=n)
        .map(|k| {
            let mut v = unit(n, k);
            v[0] += 1.0;
            v
        })
        .collect();
    let hat_g = (2..=n).map(|k| unit(n, k)).collect();
    Ok(PathologyModel { n, tilde_e, hat_g })
}

impl PathologyModel {
    /// `Σ_n ⟨ĝ_n, v⟩ ẽ_n`.
    pub fn expand(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (g, e) in self.hat_g.iter().zip(&self.tilde_e) {
            let w = dot(g, v);
            for (o, x) in out.iter_mut().zip(e) {
                *o += w * x;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_truncation() {
        let m = make_pathology(4).unwrap();
        assert_eq!(m.tilde_e[0], vec![1.0, 1.0, 0.0, 0.0]);
        assert_eq!(dot(&m.hat_g[1], &m.tilde_e[0]), 0.0);
        let e1 = unit(4, 1);
        assert!(m.hat_g.iter().all(|g| dot(&e1, g) == 0.0));
        assert!(make_pathology(2).is_err());
    }
}
