//! Concrete biorthogonal families, the matrix realization of non-linear
//! pseudo-bosons, and the complete-but-not-a-basis example.

mod nlpb;
mod pathology;
mod pb;

pub use nlpb::{generalized_factorial, make_nlpb, NlpbModel};
pub use pathology::{dot, make_pathology, unit, PathologyModel};
pub use pb::{
    gamma_beta, make_model, omega_theta, AffineLaw, AnyModel, Hamiltonian, Ladder, ModelRecord, ModelSpec,
    PbModel, PbModel1, PbModel2, INDEX_CAP_1D, INDEX_CAP_2D,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{c, Scalar};
use crate::symfun::{GaussSum, Poly};

/// Highest degree of a random sample polynomial (total degree in 2D).
pub const SAMPLE_DEGREE: u32 = 6;

fn unit_disc(rng: &mut ChaCha8Rng) -> Scalar {
    let r = rng.gen::<f64>().sqrt();
    let phi = std::f64::consts::TAU * rng.gen::<f64>();
    c(r * phi.cos(), r * phi.sin())
}

/// Deterministic random elements of the function class: polynomials of
/// degree ≤ 6 with coefficients in the complex unit disc, times the given
/// envelope.
pub fn random_samples<const D: usize>(
    count: usize,
    seed: u64,
    curv: [Scalar; D],
    tilt: [Scalar; D],
) -> Vec<GaussSum<D>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut exps: Vec<[u32; D]> = Vec::new();
    let mut e = [0u32; D];
    loop {
        if e.iter().sum::<u32>() <= SAMPLE_DEGREE {
            exps.push(e);
        }
        let mut d = 0;
        loop {
            if d == D {
                break;
            }
            e[d] += 1;
            if e[d] <= SAMPLE_DEGREE {
                break;
            }
            e[d] = 0;
            d += 1;
        }
        if d == D {
            break;
        }
    }
    (0..count)
        .map(|_| {
            let poly = Poly::from_terms(exps.iter().map(|e| (*e, unit_disc(&mut rng))))
                .expect("sample degree is far below the cap");
            GaussSum::with_poly(poly, curv, tilt).expect("sample envelopes are square integrable")
        })
        .collect()
}

/// Samples with the standard envelope `exp(−|x|²/2)`.
pub fn standard_samples<const D: usize>(count: usize, seed: u64) -> Vec<GaussSum<D>> {
    random_samples(count, seed, [c(1.0, 0.0); D], [c(0.0, 0.0); D])
}
