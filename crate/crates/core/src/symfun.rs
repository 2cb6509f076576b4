//! Exact algebra of polynomial × Gaussian functions.
//!
//! A [`GaussSum`] is a finite sum of terms `p(x) · exp(Σ_d −A_d x_d²/2 + B_d x_d)`
//! with complex polynomial `p` and complex, diagonal Gaussian parameters.
//! The class is closed under everything the ladder operators, the metric
//! operators and the inner product need, so all identities between members
//! of the biorthogonal families are decided by coefficient arithmetic.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{
    abs, cexp, cone, cr, csqrt, czero, is_zero, powi, real, rone, rzero, to_c64, to_f64, Accum, Real,
    Scalar, PI,
};

/// Maximum exponent allowed in any single coordinate.
pub const DEGREE_CAP: usize = 256;

/// Moments are needed up to the degree of a product of two capped polynomials.
pub const MOMENT_CAP: usize = 2 * DEGREE_CAP;

/// Multivariate complex polynomial, sparse in the monomial basis.
///
/// Zero coefficients are never stored, so the empty map is the zero
/// polynomial and the highest stored degree always carries a nonzero
/// coefficient.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly<const D: usize> {
    coeffs: BTreeMap<[u32; D], Scalar>,
}

pub type CPoly = Poly<1>;

impl<const D: usize> Poly<D> {
    pub fn zero() -> Self {
        Self { coeffs: BTreeMap::new() }
    }

    pub fn constant(v: Scalar) -> Self {
        Self::monomial([0; D], v)
    }

    pub fn monomial(exp: [u32; D], v: Scalar) -> Self {
        let mut coeffs = BTreeMap::new();
        if !is_zero(&v) {
            coeffs.insert(exp, v);
        }
        Self { coeffs }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ([u32; D], Scalar)>) -> Result<Self> {
        let mut acc = PolyAccum::new();
        for (e, v) in terms {
            acc.add(e, v);
        }
        let p = acc.finish();
        p.check_cap()?;
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: [u32; D]) -> Scalar {
        self.coeffs.get(&exp).copied().unwrap_or_else(czero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u32; D], &Scalar)> {
        self.coeffs.iter()
    }

    /// Highest exponent of coordinate `dim`, `None` for the zero polynomial.
    pub fn degree_in(&self, dim: usize) -> Option<usize> {
        self.coeffs.keys().map(|e| e[dim] as usize).max()
    }

    pub fn max_degree(&self) -> Option<usize> {
        (0..D).filter_map(|d| self.degree_in(d)).max()
    }

    fn check_cap(&self) -> Result<()> {
        match self.max_degree() {
            Some(d) if d > DEGREE_CAP => Err(Error::DegreeCap { degree: d, cap: DEGREE_CAP }),
            _ => Ok(()),
        }
    }

    pub fn scale(&self, s: Scalar) -> Self {
        if is_zero(&s) {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|(e, v)| (*e, *v * s)).collect() }
    }

    pub fn conj(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(e, v)| (*e, v.conj())).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut acc = PolyAccum::new();
        acc.add_poly(self, cone());
        acc.add_poly(other, cone());
        acc.finish()
    }

    pub fn mul_coordinate(&self, dim: usize) -> Result<Self> {
        let out = Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, v)| {
                    let mut e = *e;
                    e[dim] += 1;
                    (e, *v)
                })
                .collect(),
        };
        out.check_cap()?;
        Ok(out)
    }

    pub fn derivative(&self, dim: usize) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| e[dim] > 0)
                .map(|(e, v)| {
                    let mut e2 = *e;
                    e2[dim] -= 1;
                    (e2, *v * cr(real(e[dim] as f64)))
                })
                .collect(),
        }
    }

    pub fn eval(&self, point: [Scalar; D]) -> Scalar {
        let mut powers: Vec<Vec<Scalar>> = Vec::with_capacity(D);
        for (d, x) in point.iter().enumerate() {
            let deg = self.degree_in(d).unwrap_or(0);
            let mut row = Vec::with_capacity(deg + 1);
            let mut p = cone();
            for _ in 0..=deg {
                row.push(p);
                p *= *x;
            }
            powers.push(row);
        }
        let mut s = czero();
        for (e, v) in &self.coeffs {
            let mut t = *v;
            for d in 0..D {
                t *= powers[d][e[d] as usize];
            }
            s += t;
        }
        s
    }
}

impl CPoly {
    /// Dense coefficient vector, index = degree.
    pub fn coeffs_dense(&self) -> Vec<Scalar> {
        let n = self.degree_in(0).map_or(0, |d| d + 1);
        let mut v = vec![czero(); n];
        for (e, c) in &self.coeffs {
            v[e[0] as usize] = *c;
        }
        v
    }

    pub fn from_dense(coeffs: &[Scalar]) -> Result<Self> {
        Self::from_terms(coeffs.iter().enumerate().map(|(k, v)| ([k as u32], *v)))
    }
}

/// Cancellation-aware coefficient accumulator.
#[derive(Debug, Default)]
pub struct PolyAccum<const D: usize> {
    slots: BTreeMap<[u32; D], Accum>,
}

impl<const D: usize> PolyAccum<D> {
    pub fn new() -> Self {
        Self { slots: BTreeMap::new() }
    }

    #[inline]
    pub fn add(&mut self, exp: [u32; D], v: Scalar) {
        if !is_zero(&v) {
            self.slots.entry(exp).or_default().add(v);
        }
    }

    pub fn add_poly(&mut self, p: &Poly<D>, s: Scalar) {
        for (e, v) in &p.coeffs {
            self.add(*e, *v * s);
        }
    }

    pub fn finish(self) -> Poly<D> {
        Poly {
            coeffs: self.slots.into_iter().filter_map(|(e, a)| a.settle().map(|v| (e, v))).collect(),
        }
    }
}

/// One polynomial × Gaussian term.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussTerm<const D: usize> {
    pub poly: Poly<D>,
    /// Curvature `A_d` of `exp(−A_d x_d²/2)`; real part is positive.
    pub curv: [Scalar; D],
    /// Linear tilt `B_d` of `exp(B_d x_d)`.
    pub tilt: [Scalar; D],
}

impl<const D: usize> GaussTerm<D> {
    pub fn new(poly: Poly<D>, curv: [Scalar; D], tilt: [Scalar; D]) -> Result<Self> {
        for a in &curv {
            if a.re.0 <= 0.0 {
                return Err(Error::DivergentIntegral { re_curvature: to_f64(a.re) });
            }
        }
        Ok(Self { poly, curv, tilt })
    }

    #[inline]
    fn same_envelope(&self, other: &Self) -> bool {
        self.curv == other.curv && self.tilt == other.tilt
    }

    pub fn eval(&self, point: [f64; D]) -> Complex64 {
        to_c64(self.eval_dd(point.map(|x| cr(real(x)))))
    }

    fn eval_dd(&self, x: [Scalar; D]) -> Scalar {
        let mut exponent = czero();
        for d in 0..D {
            exponent += -self.curv[d] * x[d] * x[d] * cr(real(0.5)) + self.tilt[d] * x[d];
        }
        self.poly.eval(x) * cexp(exponent)
    }

    /// ∂/∂x_d of the term: `(∂p + (B − A x) p) · envelope`.
    fn derivative(&self, dim: usize) -> Result<Self> {
        let mut acc = PolyAccum::new();
        acc.add_poly(&self.poly.derivative(dim), cone());
        acc.add_poly(&self.poly, self.tilt[dim]);
        acc.add_poly(&self.poly.mul_coordinate(dim)?, -self.curv[dim]);
        Ok(Self { poly: acc.finish(), curv: self.curv, tilt: self.tilt })
    }
}

/// Finite sum of [`GaussTerm`]s; terms with identical `(A, B)` are merged.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct GaussSum<const D: usize> {
    terms: Vec<GaussTerm<D>>,
}

pub type GaussSum1 = GaussSum<1>;
pub type GaussSum2 = GaussSum<2>;

impl<const D: usize> GaussSum<D> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn from_term(t: GaussTerm<D>) -> Self {
        let mut s = Self::zero();
        s.push(t);
        s
    }

    /// `coeff · exp(Σ −A_d x_d²/2 + B_d x_d)`.
    pub fn gaussian(coeff: Scalar, curv: [Scalar; D], tilt: [Scalar; D]) -> Result<Self> {
        Ok(Self::from_term(GaussTerm::new(Poly::constant(coeff), curv, tilt)?))
    }

    pub fn with_poly(poly: Poly<D>, curv: [Scalar; D], tilt: [Scalar; D]) -> Result<Self> {
        Ok(Self::from_term(GaussTerm::new(poly, curv, tilt)?))
    }

    pub fn terms(&self) -> &[GaussTerm<D>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.terms.iter().filter_map(|t| t.poly.max_degree()).max().unwrap_or(0)
    }

    fn push(&mut self, t: GaussTerm<D>) {
        if t.poly.is_zero() {
            return;
        }
        if let Some(pos) = self.terms.iter().position(|u| u.same_envelope(&t)) {
            let merged = self.terms[pos].poly.add(&t.poly);
            if merged.is_zero() {
                self.terms.remove(pos);
            } else {
                self.terms[pos].poly = merged;
            }
        } else {
            self.terms.push(t);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for t in &other.terms {
            s.push(t.clone());
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-cone()))
    }

    pub fn scale(&self, s: Scalar) -> Self {
        if is_zero(&s) {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| GaussTerm { poly: t.poly.scale(s), curv: t.curv, tilt: t.tilt })
                .collect(),
        }
    }

    /// Pointwise complex conjugate on the real line.
    pub fn conjugate(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| GaussTerm {
                    poly: t.poly.conj(),
                    curv: t.curv.map(|a| a.conj()),
                    tilt: t.tilt.map(|b| b.conj()),
                })
                .collect(),
        }
    }

    pub fn mul_coordinate(&self, dim: usize) -> Result<Self> {
        let mut s = Self::zero();
        for t in &self.terms {
            s.push(GaussTerm { poly: t.poly.mul_coordinate(dim)?, curv: t.curv, tilt: t.tilt });
        }
        Ok(s)
    }

    pub fn derivative(&self, dim: usize) -> Result<Self> {
        let mut s = Self::zero();
        for t in &self.terms {
            s.push(t.derivative(dim)?);
        }
        Ok(s)
    }

    /// Multiplication by `prefactor · exp(Σ −q2_d x_d²/2 + q1_d x_d)`.
    pub fn mul_exp(&self, q2: [Scalar; D], q1: [Scalar; D], prefactor: Scalar) -> Result<Self> {
        let mut s = Self::zero();
        for t in &self.terms {
            let curv: [Scalar; D] = std::array::from_fn(|d| t.curv[d] + q2[d]);
            let tilt: [Scalar; D] = std::array::from_fn(|d| t.tilt[d] + q1[d]);
            for a in &curv {
                if a.re.0 <= 0.0 {
                    return Err(Error::DomainExit {
                        op: "exp-quadratic multiplication".into(),
                        re_curvature: to_f64(a.re),
                    });
                }
            }
            s.push(GaussTerm { poly: t.poly.scale(prefactor), curv, tilt });
        }
        Ok(s)
    }

    /// `x ↦ prefactor · f(λ x)` coordinate-wise.
    pub fn dilate(&self, lambda: [Scalar; D], prefactor: Scalar) -> Result<Self> {
        let mut s = Self::zero();
        for t in &self.terms {
            let curv: [Scalar; D] = std::array::from_fn(|d| t.curv[d] * lambda[d] * lambda[d]);
            let tilt: [Scalar; D] = std::array::from_fn(|d| t.tilt[d] * lambda[d]);
            for a in &curv {
                if a.re.0 <= 0.0 {
                    return Err(Error::DomainExit {
                        op: "complex dilation".into(),
                        re_curvature: to_f64(a.re),
                    });
                }
            }
            let poly = Poly {
                coeffs: t
                    .poly
                    .iter()
                    .map(|(e, v)| {
                        let mut w = *v * prefactor;
                        for d in 0..D {
                            w *= powi(lambda[d], e[d]);
                        }
                        (*e, w)
                    })
                    .collect(),
            };
            s.push(GaussTerm { poly, curv, tilt });
        }
        Ok(s)
    }

    pub fn eval(&self, point: [f64; D]) -> Complex64 {
        let x = point.map(|v| cr(real(v)));
        to_c64(self.terms.iter().fold(czero(), |acc, t| acc + t.eval_dd(x)))
    }

    /// Sum of |term values| at a point: scale of the cancellation in `eval`.
    pub fn eval_mass(&self, point: [f64; D]) -> f64 {
        let x = point.map(|v| cr(real(v)));
        self.terms.iter().map(|t| to_f64(abs(t.eval_dd(x)))).sum()
    }
}

/// `∫ℝ x^k exp(−A x²/2 + B x) dx`.
pub fn gauss_moment(a: Scalar, b: Scalar, k: usize) -> Result<Scalar> {
    Ok(moments(a, b, k)?[k])
}

/// All moments `M_0..=M_kmax` from the two-term recurrence
/// `M_{k+1} = (k M_{k−1} + B M_k) / A`.
pub fn moments(a: Scalar, b: Scalar, kmax: usize) -> Result<Vec<Scalar>> {
    if a.re.0 <= 0.0 {
        return Err(Error::DivergentIntegral { re_curvature: to_f64(a.re) });
    }
    if kmax > MOMENT_CAP {
        return Err(Error::DegreeCap { degree: kmax, cap: MOMENT_CAP });
    }
    let two = real(2.0);
    let m0 = csqrt(cr(two * PI) / a) * cexp(b * b / (a * cr(two)));
    let inv_a = cone() / a;
    let mut m = Vec::with_capacity(kmax + 1);
    m.push(m0);
    if kmax >= 1 {
        m.push(b * inv_a * m0);
    }
    for k in 1..kmax {
        let next = (cr(real(k as f64)) * m[k - 1] + b * m[k]) * inv_a;
        m.push(next);
    }
    Ok(m)
}

fn pair_moments<const D: usize>(
    f: &GaussTerm<D>,
    g: &GaussTerm<D>,
    kmax: [usize; D],
) -> Result<[Vec<Scalar>; D]> {
    let mut out: [Vec<Scalar>; D] = std::array::from_fn(|_| Vec::new());
    for d in 0..D {
        let a = f.curv[d].conj() + g.curv[d];
        let b = f.tilt[d].conj() + g.tilt[d];
        out[d] = moments(a, b, kmax[d])?;
    }
    Ok(out)
}

/// `⟨f, g⟩ = ∫ conj(f) g`, conjugate-linear in `f`.
pub fn inner_product<const D: usize>(f: &GaussSum<D>, g: &GaussSum<D>) -> Result<Scalar> {
    let mut total = czero();
    for tf in &f.terms {
        for tg in &g.terms {
            let kmax: [usize; D] = std::array::from_fn(|d| {
                tf.poly.degree_in(d).unwrap_or(0) + tg.poly.degree_in(d).unwrap_or(0)
            });
            let m = pair_moments(tf, tg, kmax)?;
            for (ef, vf) in tf.poly.iter() {
                let cf = vf.conj();
                for (eg, vg) in tg.poly.iter() {
                    let mut w = cf * *vg;
                    for d in 0..D {
                        w *= m[d][(ef[d] + eg[d]) as usize];
                    }
                    total += w;
                }
            }
        }
    }
    Ok(total)
}

pub fn norm<const D: usize>(f: &GaussSum<D>) -> Result<Real> {
    let v = inner_product(f, f)?.re;
    Ok(if v.0 > 0.0 { v.sqrt() } else { rzero() })
}

/// ‖f − g‖, computed on the merged difference.
pub fn distance<const D: usize>(f: &GaussSum<D>, g: &GaussSum<D>) -> Result<Real> {
    norm(&f.sub(g))
}

#[derive(Clone, PartialEq)]
struct Envelope<const D: usize> {
    curv: [Scalar; D],
    tilt: [Scalar; D],
}

/// Matrix of inner products `⟨left_i, right_j⟩`.
///
/// Families generated by ladder operators share a handful of envelopes, so
/// each right-hand function is contracted against the moment tables once per
/// left envelope; every entry is then a single dot product.
pub fn gram<const D: usize>(left: &[&GaussSum<D>], right: &[&GaussSum<D>]) -> Result<Vec<Vec<Scalar>>> {
    // Distinct left envelopes with the union of their monomials.
    let mut envs: Vec<(Envelope<D>, BTreeMap<[u32; D], usize>)> = Vec::new();
    for f in left {
        for t in &f.terms {
            let env = Envelope { curv: t.curv, tilt: t.tilt };
            let idx = match envs.iter().position(|(e, _)| *e == env) {
                Some(i) => i,
                None => {
                    envs.push((env, BTreeMap::new()));
                    envs.len() - 1
                }
            };
            for (e, _) in t.poly.iter() {
                let n = envs[idx].1.len();
                envs[idx].1.entry(*e).or_insert(n);
            }
        }
    }
    let left_deg: Vec<[usize; D]> = envs
        .iter()
        .map(|(_, set)| std::array::from_fn(|d| set.keys().map(|e| e[d] as usize).max().unwrap_or(0)))
        .collect();

    // contracted[j][env] = Σ_{a'} g_{a'} Π_d M_d[a_d + a'_d] for each monomial a of env.
    let mut contracted: Vec<Vec<Vec<Scalar>>> = Vec::with_capacity(right.len());
    for g in right {
        let mut per_env = Vec::with_capacity(envs.len());
        for (k, (env, set)) in envs.iter().enumerate() {
            let mut v = vec![czero(); set.len()];
            for tg in &g.terms {
                let probe = GaussTerm { poly: Poly::zero(), curv: env.curv, tilt: env.tilt };
                let kmax: [usize; D] =
                    std::array::from_fn(|d| left_deg[k][d] + tg.poly.degree_in(d).unwrap_or(0));
                let m = pair_moments(&probe, tg, kmax)?;
                for (a, &pos) in set {
                    let mut s = czero();
                    for (eg, vg) in tg.poly.iter() {
                        let mut w = *vg;
                        for d in 0..D {
                            w *= m[d][(a[d] + eg[d]) as usize];
                        }
                        s += w;
                    }
                    v[pos] += s;
                }
            }
            per_env.push(v);
        }
        contracted.push(per_env);
    }

    let mut out = vec![vec![czero(); right.len()]; left.len()];
    for (i, f) in left.iter().enumerate() {
        for t in &f.terms {
            let k = envs
                .iter()
                .position(|(e, _)| e.curv == t.curv && e.tilt == t.tilt)
                .expect("envelope registered above");
            let positions: Vec<(usize, Scalar)> =
                t.poly.iter().map(|(e, v)| (envs[k].1[e], v.conj())).collect();
            for (j, row) in contracted.iter().enumerate() {
                let v = &row[k];
                let mut s = czero();
                for (pos, cf) in &positions {
                    s += *cf * v[*pos];
                }
                out[i][j] += s;
            }
        }
    }
    Ok(out)
}

/// Monomial coefficients of the physicists' Hermite polynomial `H_n`.
pub fn hermite_coeffs(n: usize) -> Vec<Real> {
    let mut prev = vec![rone()];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![rzero(), real(2.0)];
    for k in 1..n {
        let mut next = vec![rzero(); k + 2];
        for (j, v) in cur.iter().enumerate() {
            next[j + 1] += *v * real(2.0);
        }
        for (j, v) in prev.iter().enumerate() {
            next[j] -= *v * real(2.0 * k as f64);
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Orthonormal Hermite function `e_n(x) = H_n(x) e^{−x²/2} / √(2^n n! √π)`.
pub fn hermite_function(n: usize) -> Result<GaussSum1> {
    let mut norm2 = PI.sqrt();
    for k in 1..=n {
        norm2 *= real(2.0 * k as f64);
    }
    let scale = rone() / norm2.sqrt();
    let coeffs: Vec<Scalar> = hermite_coeffs(n).into_iter().map(|v| cr(v * scale)).collect();
    GaussSum::with_poly(CPoly::from_dense(&coeffs)?, [cone()], [czero()])
}
