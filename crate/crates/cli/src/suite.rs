use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use pseudoboson::axioms::{
    check_biorthogonality, check_commutator, check_duality, check_eigenvalues, check_ladder, check_nlpb,
    check_pathology, check_quadrature, check_quasi_basis, check_theta, riesz_diagnostic,
};
use pseudoboson::models::{
    make_model, make_nlpb, make_pathology, random_samples, standard_samples, AnyModel, ModelRecord, NlpbModel,
    PbModel,
};
use pseudoboson::scalar::c;
use pseudoboson::{CheckReport, GaussSum, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Caps, ConfigError, Metric, Structure, SuiteConfig};

/// Truncation orders for one dimensionality.
#[derive(Clone, Debug)]
struct Orders {
    ladder: usize,
    gram: usize,
    quadrature: usize,
    quadrature_order: usize,
    eigen: usize,
    theta: usize,
    quasi_basis: usize,
    riesz: Vec<usize>,
}

impl Orders {
    fn for_dim(caps: &Caps, dim: usize) -> Self {
        if dim == 1 {
            Self {
                ladder: caps.ladder,
                gram: caps.gram,
                quadrature: caps.quadrature,
                quadrature_order: caps.quadrature_order,
                eigen: caps.eigen,
                theta: caps.theta,
                quasi_basis: caps.quasi_basis,
                riesz: caps.riesz.clone(),
            }
        } else {
            Self {
                ladder: caps.ladder_2d,
                gram: caps.gram_2d,
                quadrature: caps.quadrature_2d,
                quadrature_order: caps.quadrature_order_2d,
                eigen: caps.eigen_2d,
                theta: caps.theta_2d,
                quasi_basis: caps.quasi_basis_2d,
                riesz: caps.riesz_2d.clone(),
            }
        }
    }
}

/// Random positive-definite metric `I + G G†` with `G` entries in the unit square.
pub fn random_metric(n: usize, seed: u64) -> DMatrix<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (n as f64).sqrt();
    let g = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale
    });
    DMatrix::identity(n, n) + &g * g.adjoint()
}

pub fn build_nlpb(s: &Structure) -> pseudoboson::Result<NlpbModel> {
    match s {
        Structure::Nlpb { epsilon, metric, metric_seed } => {
            let theta = match metric {
                Metric::Identity => DMatrix::identity(epsilon.len(), epsilon.len()),
                Metric::Random => random_metric(epsilon.len(), *metric_seed),
            };
            make_nlpb(epsilon, theta)
        }
        _ => Err(pseudoboson::Error::InvalidParameter("not a matrix structure".into())),
    }
}

fn record_of(s: &Structure) -> ModelRecord {
    match s {
        Structure::Pb(spec) => ModelRecord::from(spec),
        Structure::Pathology { n } => {
            ModelRecord { kind: "pathology".into(), params: BTreeMap::from([("n".into(), *n as f64)]) }
        }
        Structure::Nlpb { epsilon, metric, metric_seed } => {
            let mut params = BTreeMap::from([("levels".into(), epsilon.len() as f64)]);
            if *metric == Metric::Random {
                params.insert("metric_seed".into(), *metric_seed as f64);
            }
            ModelRecord { kind: "nlpb".into(), params }
        }
    }
}

/// Normalized ground state `π^{−D/4} e^{−|x|²/2}`.
fn ground_state<const D: usize>() -> GaussSum<D> {
    let norm = std::f64::consts::PI.powf(-(D as f64) / 4.0);
    GaussSum::gaussian(c(norm, 0.0), [c(1.0, 0.0); D], [c(0.0, 0.0); D]).expect("positive curvature")
}

fn run_pb<const D: usize>(
    m: &PbModel<D>,
    check: &str,
    orders: &Orders,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> CheckReport {
    match check {
        "commutator" => check_commutator(m, &standard_samples::<D>(samples, seed), tol),
        "duality" => check_duality(m, &standard_samples::<D>(samples, seed), tol),
        "ladder" => check_ladder(m, orders.ladder, tol),
        "biorthogonality" => check_biorthogonality(m, orders.gram, tol),
        "quadrature" => check_quadrature(m, orders.quadrature, orders.quadrature_order, tol),
        "eigenvalues" => check_eigenvalues(m, orders.eigen, tol),
        "quasi_basis" => {
            let e0 = ground_state::<D>();
            check_quasi_basis(m, &e0, &e0, orders.quasi_basis, tol)
        }
        "theta" => {
            let (pc, pt) = m.phi_envelope();
            let (qc, qt) = m.psi_envelope();
            let forward = random_samples::<D>(samples, seed.wrapping_add(1), pc, pt);
            let backward = random_samples::<D>(samples, seed.wrapping_add(2), qc, qt);
            check_theta(m, orders.theta, &forward, &backward, tol)
        }
        "riesz_diagnostic" => riesz_diagnostic(m, &orders.riesz),
        other => unreachable!("check {other} is not applicable to biorthogonal families"),
    }
}

#[allow(clippy::large_enum_variant)]
enum Built {
    Pb(AnyModel),
    Pathology(pseudoboson::models::PathologyModel),
    Nlpb(NlpbModel),
    Failed(String),
}

fn build(s: &Structure) -> Built {
    let r = match s {
        Structure::Pb(spec) => make_model(*spec).map(Built::Pb),
        Structure::Pathology { n } => make_pathology(*n).map(Built::Pathology),
        Structure::Nlpb { .. } => build_nlpb(s).map(Built::Nlpb),
    };
    r.unwrap_or_else(|e| Built::Failed(e.to_string()))
}

/// One (structure, check) outcome; `order` fixes the output position.
#[derive(Clone, Debug)]
pub struct Cell {
    pub order: (usize, usize),
    pub label: String,
    pub report: CheckReport,
}

/// Run every applicable (structure × check) cell and return them sorted.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<Cell>, ConfigError> {
    let structures = cfg.structures()?;
    let checks = cfg.check_list()?;
    let tol = cfg.tolerances();
    let threads = cfg
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ConfigError::Invalid(format!("cannot start worker pool: {e}")))?;

    let mut jobs = Vec::new();
    for (si, s) in structures.iter().enumerate() {
        for (ci, check) in checks.iter().enumerate() {
            if s.applicable(check) {
                jobs.push((si, ci));
            }
        }
    }
    let mut cells = pool.install(|| {
        let built: Vec<Arc<Built>> = structures.par_iter().map(|s| Arc::new(build(s))).collect();
        jobs.par_iter()
            .map(|&(si, ci)| {
                let s = &structures[si];
                let check = checks[ci];
                let mut report = match &*built[si] {
                    Built::Pb(AnyModel::One(m)) => {
                        run_pb(m, check, &Orders::for_dim(&cfg.caps, 1), cfg.caps.samples, cfg.seed, &tol)
                    }
                    Built::Pb(AnyModel::Two(m)) => {
                        run_pb(m, check, &Orders::for_dim(&cfg.caps, 2), cfg.caps.samples, cfg.seed, &tol)
                    }
                    Built::Pathology(p) => check_pathology(p),
                    Built::Nlpb(n) => check_nlpb(n, tol.nlpb),
                    Built::Failed(e) => {
                        let mut r = CheckReport::new(check, None, f64::NAN);
                        r.fail("construction", e);
                        r.finish()
                    }
                };
                report.model = Some(record_of(s));
                Cell { order: (si, ci), label: s.label(), report }
            })
            .collect::<Vec<_>>()
    });
    cells.sort_by_key(|c| c.order);
    Ok(cells)
}

/// 0 when every non-diagnostic report passes, 1 otherwise.
pub fn exit_status(cells: &[Cell]) -> i32 {
    if cells.iter().all(|c| c.report.diagnostic || c.report.pass) {
        0
    } else {
        1
    }
}
