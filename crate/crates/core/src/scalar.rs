//! Double-double scalars used by the symbolic layer.
//!
//! Ladder-generated families reach L² norms of order 1e15 at n = 20, and
//! inner products between them cancel by that factor. Plain `f64` cannot
//! resolve biorthogonality at that scale, so every coefficient, Gaussian
//! parameter and moment is carried in ~106-bit double-double arithmetic.
//! Values leave this layer as `f64` only for reporting and pointwise
//! evaluation.

use num_complex::{Complex, Complex64};
use qd::Quad;

/// Double-double real (the `qd` crate names it `Quad`).
pub type Real = Quad;
pub type Scalar = Complex<Real>;

/// Unit roundoff of the double-double format.
pub const DD_EPSILON: f64 = 1.232_595_164_407_831e-32;

/// Coefficients whose accumulated value is below this fraction of the sum of
/// the magnitudes that produced it are rounding residue and are dropped.
pub const CANCELLATION_REL: f64 = 1e-26;

pub const PI: Real = Quad::PI;
const FRAC_PI_2: Real = Quad(std::f64::consts::FRAC_PI_2, 6.123233995736766e-17);

#[inline]
pub fn real(x: f64) -> Real {
    Quad::from(x)
}

#[inline]
pub fn rzero() -> Real {
    Quad::ZERO
}

#[inline]
pub fn rone() -> Real {
    Quad::ONE
}

#[inline]
pub fn c(re: f64, im: f64) -> Scalar {
    Complex::new(real(re), real(im))
}

#[inline]
pub fn cr(re: Real) -> Scalar {
    Complex::new(re, rzero())
}

#[inline]
pub fn czero() -> Scalar {
    Complex::new(rzero(), rzero())
}

#[inline]
pub fn cone() -> Scalar {
    Complex::new(rone(), rzero())
}

#[inline]
pub fn ci() -> Scalar {
    Complex::new(rzero(), rone())
}

#[inline]
pub fn from_c64(z: Complex64) -> Scalar {
    Complex::new(real(z.re), real(z.im))
}

#[inline]
pub fn to_c64(z: Scalar) -> Complex64 {
    Complex64::new(z.re.0 + z.re.1, z.im.0 + z.im.1)
}

#[inline]
pub fn to_f64(x: Real) -> f64 {
    x.0 + x.1
}

#[inline]
pub fn is_zero(z: &Scalar) -> bool {
    z.re.0 == 0.0 && z.im.0 == 0.0
}

/// Modulus without the `hypot` detour, which is exact enough here.
#[inline]
pub fn abs(z: Scalar) -> Real {
    (z.re * z.re + z.im * z.im).sqrt()
}

#[inline]
pub fn abs_f64(z: Scalar) -> f64 {
    to_f64(abs(z))
}

#[inline]
pub fn rabs(x: Real) -> Real {
    if x.0 < 0.0 {
        -x
    } else {
        x
    }
}

/// Principal square root (branch cut on the negative real axis).
///
/// Built from real square roots only, so it keeps full double-double
/// accuracy.
pub fn csqrt(z: Scalar) -> Scalar {
    let r = abs(z);
    if r.0 == 0.0 {
        return czero();
    }
    let half = real(0.5);
    if z.re.0 >= 0.0 {
        let t = ((r + z.re) * half).sqrt();
        Complex::new(t, z.im / (t * real(2.0)))
    } else {
        let t = ((r - z.re) * half).sqrt();
        let t = if z.im.0 < 0.0 { -t } else { t };
        Complex::new(z.im / (t * real(2.0)), t)
    }
}

#[inline]
pub fn cexp(z: Scalar) -> Scalar {
    let m = z.re.exp();
    let (s, co) = sin_cos(z.im);
    Complex::new(m * co, m * s)
}

/// Sine and cosine by quadrant reduction and Taylor series on |r| ≤ π/4.
pub fn sin_cos(x: Real) -> (Real, Real) {
    let k = (x.0 / FRAC_PI_2.0).round();
    let r = x - FRAC_PI_2 * real(k);
    let r2 = r * r;
    let mut s = r;
    let mut c = rone();
    let mut ts = r;
    let mut tc = rone();
    for j in 1..=16u32 {
        let j = j as f64;
        ts = -ts * r2 / real((2.0 * j) * (2.0 * j + 1.0));
        tc = -tc * r2 / real((2.0 * j - 1.0) * (2.0 * j));
        s += ts;
        c += tc;
        if tc.0.abs() < 1e-34 && ts.0.abs() < 1e-34 {
            break;
        }
    }
    match (k as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

/// e^{iθ}, renormalized so that |e^{iθ}| = 1 to working precision.
pub fn unit_phase(theta: Real) -> Scalar {
    let (s, co) = sin_cos(theta);
    let n = (s * s + co * co).sqrt();
    Complex::new(co / n, s / n)
}

pub fn powi(z: Scalar, k: u32) -> Scalar {
    let mut acc = cone();
    let mut base = z;
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

pub fn factorial(n: u32) -> Real {
    (1..=n).fold(rone(), |acc, k| acc * real(k as f64))
}

/// Exact-as-possible sum that remembers the magnitude of what went into it.
#[derive(Clone, Copy, Debug)]
pub struct Accum {
    pub sum: Scalar,
    pub mass: Real,
}

impl Default for Accum {
    fn default() -> Self {
        Self { sum: czero(), mass: rzero() }
    }
}

impl Accum {
    #[inline]
    pub fn add(&mut self, z: Scalar) {
        self.sum += z;
        self.mass += abs(z);
    }

    /// `None` when the sum is zero up to cancellation noise.
    #[inline]
    pub fn settle(self) -> Option<Scalar> {
        if is_zero(&self.sum) {
            return None;
        }
        let tiny = self.mass * real(CANCELLATION_REL);
        if abs(self.sum) <= tiny {
            None
        } else {
            Some(self.sum)
        }
    }
}
