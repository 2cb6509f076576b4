use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{abs_f64, cone, cr, czero, is_zero, real, Accum, Scalar};
use crate::symfun::{GaussSum, DEGREE_CAP};

/// Multi-index `(j, k)` of the monomial `x^j ∂^k`.
pub type OpKey<const D: usize> = ([u32; D], [u32; D]);

/// Linear differential operator with polynomial coefficients, kept in normal
/// order: a finite sum of `c · x^j ∂^k` with every derivative to the right.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DiffOp<const D: usize> {
    terms: BTreeMap<OpKey<D>, Scalar>,
}

pub type DiffOp1 = DiffOp<1>;
pub type DiffOp2 = DiffOp<2>;

struct OpAccum<const D: usize>(BTreeMap<OpKey<D>, Accum>);

impl<const D: usize> OpAccum<D> {
    fn new() -> Self {
        Self(BTreeMap::new())
    }

    fn add(&mut self, key: OpKey<D>, v: Scalar) {
        if !is_zero(&v) {
            self.0.entry(key).or_default().add(v);
        }
    }

    fn finish(self) -> DiffOp<D> {
        DiffOp {
            terms: self.0.into_iter().filter_map(|(k, a)| a.settle().map(|v| (k, v))).collect(),
        }
    }
}

/// Falling factorial `m (m−1) ⋯ (m−i+1)`.
fn falling(m: u32, i: u32) -> f64 {
    (0..i).fold(1.0, |acc, t| acc * (m - t) as f64)
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, t| acc * (n - t) as f64 / (t + 1) as f64)
}

/// `∂^k x^m = Σ_i C(k,i) m!/(m−i)! x^{m−i} ∂^{k−i}`, as `(i, weight)` pairs.
fn reorder_weights(k: u32, m: u32) -> Vec<(u32, f64)> {
    (0..=k.min(m)).map(|i| (i, binomial(k, i) * falling(m, i))).collect()
}

/// Cartesian product of per-dimension reorderings.
fn for_each_reorder<const D: usize>(k: [u32; D], m: [u32; D], mut f: impl FnMut([u32; D], f64)) {
    let per_dim: Vec<Vec<(u32, f64)>> = (0..D).map(|d| reorder_weights(k[d], m[d])).collect();
    let mut idx = [0usize; D];
    loop {
        let mut i = [0u32; D];
        let mut w = 1.0;
        for d in 0..D {
            let (id, wd) = per_dim[d][idx[d]];
            i[d] = id;
            w *= wd;
        }
        f(i, w);
        let mut d = 0;
        loop {
            if d == D {
                return;
            }
            idx[d] += 1;
            if idx[d] < per_dim[d].len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

impl<const D: usize> DiffOp<D> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn identity() -> Self {
        Self::scalar(cone())
    }

    pub fn scalar(c: Scalar) -> Self {
        Self::monomial([0; D], [0; D], c)
    }

    pub fn monomial(x_pow: [u32; D], d_pow: [u32; D], c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !is_zero(&c) {
            terms.insert((x_pow, d_pow), c);
        }
        Self { terms }
    }

    /// Multiplication by the coordinate `x_dim`.
    pub fn coord(dim: usize) -> Self {
        let mut j = [0; D];
        j[dim] = 1;
        Self::monomial(j, [0; D], cone())
    }

    /// `∂/∂x_dim`.
    pub fn deriv(dim: usize) -> Self {
        let mut k = [0; D];
        k[dim] = 1;
        Self::monomial([0; D], k, cone())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (OpKey<D>, Scalar)>) -> Self {
        let mut acc = OpAccum::new();
        for (k, v) in terms {
            acc.add(k, v);
        }
        acc.finish()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpKey<D>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, x_pow: [u32; D], d_pow: [u32; D]) -> Scalar {
        self.terms.get(&(x_pow, d_pow)).copied().unwrap_or_else(czero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut acc = OpAccum::new();
        for (k, v) in self.terms.iter().chain(other.terms.iter()) {
            acc.add(*k, *v);
        }
        acc.finish()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-cone()))
    }

    pub fn scale(&self, s: Scalar) -> Self {
        if is_zero(&s) {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, v)| (*k, *v * s)).collect() }
    }

    /// Normal-ordered product `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let mut acc = OpAccum::new();
        for ((j1, k1), c1) in &self.terms {
            for ((j2, k2), c2) in &other.terms {
                let c12 = *c1 * *c2;
                let mut err = None;
                for_each_reorder(*k1, *j2, |i, w| {
                    let mut j = [0u32; D];
                    let mut k = [0u32; D];
                    for d in 0..D {
                        j[d] = j1[d] + j2[d] - i[d];
                        k[d] = k1[d] - i[d] + k2[d];
                        if j[d] as usize > DEGREE_CAP {
                            err = Some(Error::DegreeCap { degree: j[d] as usize, cap: DEGREE_CAP });
                        }
                    }
                    acc.add((j, k), c12 * cr(real(w)));
                });
                if let Some(e) = err {
                    return Err(e);
                }
            }
        }
        Ok(acc.finish())
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut out = Self::identity();
        for _ in 0..n {
            out = out.compose(self)?;
        }
        Ok(out)
    }

    /// Formal adjoint: `(c x^j ∂^k)† = c̄ (−∂)^k x^j`, renormal-ordered.
    pub fn formal_adjoint(&self) -> Self {
        let mut acc = OpAccum::new();
        for ((j, k), c) in &self.terms {
            let parity: u32 = k.iter().sum();
            let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
            let base = c.conj() * cr(real(sign));
            for_each_reorder(*k, *j, |i, w| {
                let jj: [u32; D] = std::array::from_fn(|d| j[d] - i[d]);
                let kk: [u32; D] = std::array::from_fn(|d| k[d] - i[d]);
                acc.add((jj, kk), base * cr(real(w)));
            });
        }
        acc.finish()
    }

    /// Largest coefficient magnitude of `self − other` in normal form.
    pub fn normal_form_distance(&self, other: &Self) -> f64 {
        self.sub(other).terms.values().map(|v| abs_f64(*v)).fold(0.0, f64::max)
    }

    /// Exact action on a polynomial × Gaussian sum.
    pub fn apply(&self, f: &GaussSum<D>) -> Result<GaussSum<D>> {
        let mut derivs: BTreeMap<[u32; D], GaussSum<D>> = BTreeMap::new();
        derivs.insert([0; D], f.clone());
        let mut out = GaussSum::zero();
        for ((j, k), c) in &self.terms {
            let dk = derivative_multi(&mut derivs, *k)?;
            let mut g = dk;
            for d in 0..D {
                for _ in 0..j[d] {
                    g = g.mul_coordinate(d)?;
                }
            }
            out = out.add(&g.scale(*c));
        }
        Ok(out)
    }
}

/// `∂^k f`, memoized along a path that raises one coordinate at a time.
fn derivative_multi<const D: usize>(
    cache: &mut BTreeMap<[u32; D], GaussSum<D>>,
    k: [u32; D],
) -> Result<GaussSum<D>> {
    if let Some(g) = cache.get(&k) {
        return Ok(g.clone());
    }
    let d = (0..D).rev().find(|&d| k[d] > 0).expect("k = 0 is always cached");
    let mut lower = k;
    lower[d] -= 1;
    let g = derivative_multi(cache, lower)?.derivative(d)?;
    cache.insert(k, g.clone());
    Ok(g)
}

/// `op1 op2 − op2 op1`.
pub fn commutator<const D: usize>(a: &DiffOp<D>, b: &DiffOp<D>) -> Result<DiffOp<D>> {
    Ok(a.compose(b)?.sub(&b.compose(a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use crate::symfun::{hermite_function, inner_product, GaussSum1};

    fn a_std() -> DiffOp1 {
        let s = cr(real(0.5).sqrt());
        DiffOp1::coord(0).add(&DiffOp1::deriv(0)).scale(s)
    }

    #[test]
    fn weyl_relation() {
        let dx = DiffOp1::deriv(0).compose(&DiffOp1::coord(0)).unwrap();
        let want = DiffOp1::monomial([1], [1], cone()).add(&DiffOp1::identity());
        assert_eq!(dx, want);
    }

    #[test]
    fn standard_ccr_is_exact() {
        let a = a_std();
        let ad = a.formal_adjoint();
        let comm = commutator(&a, &ad).unwrap();
        assert_eq!(comm.normal_form_distance(&DiffOp1::identity()), 0.0);
    }

    #[test]
    fn adjoint_of_derivative() {
        assert_eq!(DiffOp1::deriv(0).formal_adjoint(), DiffOp1::deriv(0).scale(-cone()));
        let x2d = DiffOp1::monomial([2], [1], c(0.0, 1.0));
        // (i x² ∂)† = −i (−∂) x² = i (x² ∂ + 2x)
        let want = DiffOp1::from_terms([(([2], [1]), c(0.0, 1.0)), (([1], [0]), c(0.0, 2.0))]);
        assert_eq!(x2d.formal_adjoint(), want);
    }

    #[test]
    fn annihilator_kills_ground_state() {
        let e0 = hermite_function(0).unwrap();
        assert!(a_std().apply(&e0).unwrap().is_zero());
    }

    #[test]
    fn coordinate_action() {
        let g = GaussSum1::gaussian(cone(), [cone()], [czero()]).unwrap();
        let xg = DiffOp1::coord(0).apply(&g).unwrap();
        assert_eq!(xg.terms()[0].poly.coeffs_dense(), vec![czero(), cone()]);
    }

    #[test]
    fn raising_operator_on_hermite_functions() {
        let ad = a_std().formal_adjoint();
        for n in 0..6 {
            let lhs = ad.apply(&hermite_function(n).unwrap()).unwrap();
            let rhs = hermite_function(n + 1).unwrap().scale(cr(real((n + 1) as f64).sqrt()));
            let d = crate::symfun::distance(&lhs, &rhs).unwrap();
            assert!(crate::scalar::to_f64(d) < 1e-28, "{n}");
        }
    }

    #[test]
    fn two_dimensional_reordering() {
        // ∂x ∂y ∘ x y = xy ∂x∂y + x ∂x + y ∂y + 1
        let dxy = DiffOp2::monomial([0, 0], [1, 1], cone());
        let xy = DiffOp2::monomial([1, 1], [0, 0], cone());
        let got = dxy.compose(&xy).unwrap();
        let want = DiffOp2::from_terms([
            (([1, 1], [1, 1]), cone()),
            (([1, 0], [1, 0]), cone()),
            (([0, 1], [0, 1]), cone()),
            (([0, 0], [0, 0]), cone()),
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn adjoint_pairing_on_gaussians() {
        let op = DiffOp1::from_terms([(([1], [2]), c(0.3, -0.2)), (([0], [1]), c(1.0, 0.5))]);
        let f = hermite_function(3).unwrap();
        let g = hermite_function(2).unwrap().mul_exp([c(0.2, 0.1)], [c(0.1, 0.0)], cone()).unwrap();
        let lhs = inner_product(&op.apply(&f).unwrap(), &g).unwrap();
        let rhs = inner_product(&f, &op.formal_adjoint().apply(&g).unwrap()).unwrap();
        assert!(abs_f64(lhs - rhs) < 1e-28);
    }
}
