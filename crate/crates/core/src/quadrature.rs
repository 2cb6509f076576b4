//! Gauss–Hermite quadrature, used as an oracle independent of the closed-form
//! moment kernel.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symfun::GaussSum;

pub const MAX_ORDER: usize = 200;

/// Nodes and weights for `∫ h(t) e^{−t²} dt ≈ Σ w_i h(t_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// Orthonormal Hermite recurrence: returns `(p_n(x), p_{n−1}(x))`.
fn orthonormal_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    for j in 0..n {
        let next = x * (2.0 / (j + 1) as f64).sqrt() * cur - (j as f64 / (j + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Golub–Welsch eigenvalues, then Newton polishing on the recurrence and
/// symmetrization about the origin.
pub fn hermite_rule(n: usize) -> Result<QuadRule> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::InvalidParameter(format!("quadrature order {n} outside 1..={MAX_ORDER}")));
    }
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let v = (k as f64 / 2.0).sqrt();
        jac[(k - 1, k)] = v;
        jac[(k, k - 1)] = v;
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(jac).eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite nodes"));
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, q) = orthonormal_pair(n, *x);
            let dp = (2.0 * n as f64).sqrt() * q;
            if dp == 0.0 {
                break;
            }
            *x -= p / dp;
        }
    }
    for i in 0..n / 2 {
        let m = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[i] = -m;
        nodes[n - 1 - i] = m;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (_, q) = orthonormal_pair(n, x);
            1.0 / (n as f64 * q * q)
        })
        .collect();
    Ok(QuadRule { nodes, weights })
}

/// Smallest curvature modulus among the envelopes of `conj(f)·g`.
fn min_curvature<const D: usize>(f: &GaussSum<D>, g: &GaussSum<D>, d: usize) -> f64 {
    let mut m = f64::INFINITY;
    for tf in f.terms() {
        for tg in g.terms() {
            let a = tf.curv[d].conj() + tg.curv[d];
            m = m.min(crate::scalar::abs_f64(a));
        }
    }
    if m.is_finite() {
        m
    } else {
        2.0
    }
}

/// Default per-dimension scale `√(2 / min |A|)`. For real curvatures the
/// slowest envelope becomes the rule's weight `e^{−t²}`; for chirped ones
/// using the modulus keeps the residual phase `e^{−i Im A x²/2}` resolvable.
pub fn default_scale<const D: usize>(f: &GaussSum<D>, g: &GaussSum<D>) -> [f64; D] {
    std::array::from_fn(|d| (2.0 / min_curvature(f, g, d)).sqrt())
}

/// `∫ conj(f) g` by substitution `x = s t` and a tensor-product rule.
pub fn quad_inner<const D: usize>(
    f: &GaussSum<D>,
    g: &GaussSum<D>,
    rule: &QuadRule,
    scale: Option<[f64; D]>,
) -> Complex64 {
    let s = scale.unwrap_or_else(|| default_scale(f, g));
    // w_i e^{t_i²} split in two halves to keep intermediates finite.
    let factors: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(t, w)| {
            let h = (0.5 * t * t).exp();
            w * h * h
        })
        .collect();
    let n = rule.order();
    let mut idx = [0usize; D];
    let mut total = Complex64::new(0.0, 0.0);
    if f.is_zero() || g.is_zero() {
        return total;
    }
    loop {
        let mut x = [0.0; D];
        let mut w = 1.0;
        for d in 0..D {
            x[d] = s[d] * rule.nodes[idx[d]];
            w *= s[d] * factors[idx[d]];
        }
        total += f.eval(x).conj() * g.eval(x) * w;
        let mut d = 0;
        loop {
            if d == D {
                return total;
            }
            idx[d] += 1;
            if idx[d] < n {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// Quadrature Gram matrix `∫ conj(f_i) g_j` on one common grid, together
/// with the integrand masses `∫ |f_i g_j|`.
///
/// The scale follows the slowest envelope over all pairs unless given.
pub fn quad_gram<const D: usize>(
    left: &[&GaussSum<D>],
    right: &[&GaussSum<D>],
    rule: &QuadRule,
    scale: Option<[f64; D]>,
) -> (Vec<Vec<Complex64>>, Vec<Vec<f64>>) {
    let s = scale.unwrap_or_else(|| {
        std::array::from_fn(|d| {
            let mut m = f64::INFINITY;
            for f in left {
                for g in right {
                    m = m.min(min_curvature(f, g, d));
                }
            }
            (2.0 / if m.is_finite() { m } else { 2.0 }).sqrt()
        })
    });
    let factors: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(t, w)| {
            let h = (0.5 * t * t).exp();
            w * h * h
        })
        .collect();
    let n = rule.order();
    let mut points = Vec::new();
    let mut wts = Vec::new();
    let mut idx = [0usize; D];
    'grid: loop {
        let mut x = [0.0; D];
        let mut w = 1.0;
        for d in 0..D {
            x[d] = s[d] * rule.nodes[idx[d]];
            w *= s[d] * factors[idx[d]];
        }
        points.push(x);
        wts.push(w);
        let mut d = 0;
        loop {
            if d == D {
                break 'grid;
            }
            idx[d] += 1;
            if idx[d] < n {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
    // Left values carry the weight and the conjugation.
    let lv: Vec<Vec<Complex64>> =
        left.iter().map(|f| points.iter().zip(&wts).map(|(x, w)| f.eval(*x).conj() * *w).collect()).collect();
    let rv: Vec<Vec<Complex64>> = right.iter().map(|g| points.iter().map(|x| g.eval(*x)).collect()).collect();
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); right.len()]; left.len()];
    let mut mass = vec![vec![0.0; right.len()]; left.len()];
    for (i, a) in lv.iter().enumerate() {
        for (j, b) in rv.iter().enumerate() {
            let mut z = Complex64::new(0.0, 0.0);
            let mut m = 0.0;
            for (p, q) in a.iter().zip(b) {
                let v = p * q;
                z += v;
                m += v.norm();
            }
            gram[i][j] = z;
            mass[i][j] = m;
        }
    }
    (gram, mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfun::hermite_function;

    #[test]
    fn low_orders() {
        let r1 = hermite_rule(1).unwrap();
        assert_eq!(r1.nodes, vec![0.0]);
        assert!((r1.weights[0] - std::f64::consts::PI.sqrt()).abs() < 1e-15);
        let r2 = hermite_rule(2).unwrap();
        let h = 0.5f64.sqrt();
        assert!((r2.nodes[1] - h).abs() < 1e-15 && (r2.nodes[0] + h).abs() < 1e-15);
        for w in &r2.weights {
            assert!((w - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-15);
        }
        assert!(hermite_rule(0).is_err());
        assert!(hermite_rule(MAX_ORDER + 1).is_err());
    }

    #[test]
    fn rule_invariants() {
        for &n in &[5usize, 64, 96, 192, 200] {
            let r = hermite_rule(n).unwrap();
            let sum: f64 = r.weights.iter().sum();
            assert!((sum - std::f64::consts::PI.sqrt()).abs() < 1e-12, "{n}");
            for i in 0..n {
                assert_eq!(r.nodes[i], -r.nodes[n - 1 - i]);
                assert!(r.weights[i] > 0.0);
            }
        }
    }

    #[test]
    fn tenth_moment() {
        // ∫ x^10 e^{−x²} = Γ(11/2) = 945 √π / 32
        let r = hermite_rule(64).unwrap();
        let got: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(10)).sum();
        let want = 945.0 * std::f64::consts::PI.sqrt() / 32.0;
        assert!((got - want).abs() < 1e-12 * want);
    }

    #[test]
    fn exact_up_to_twice_the_order() {
        // Odd moments vanish by symmetry; even ones follow (k−1)!!√π/2^{k/2}.
        let n = 12;
        let r = hermite_rule(n).unwrap();
        let mut want = std::f64::consts::PI.sqrt();
        for k in (0..2 * n).step_by(2) {
            if k > 0 {
                want *= (k - 1) as f64 / 2.0;
            }
            let got: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(k as i32)).sum();
            assert!((got - want).abs() < 1e-12 * want.max(1.0), "{k}");
        }
    }

    #[test]
    fn ground_state_norm() {
        let e0 = hermite_function(0).unwrap();
        let r = hermite_rule(64).unwrap();
        assert!((quad_inner(&e0, &e0, &r, None) - 1.0).norm() < 1e-10);
    }
}
