use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{DiffOp, SpecialOp};
use crate::scalar::{ci, cone, cr, czero, real, rone, sin_cos, to_f64, unit_phase, Real, Scalar, PI};
use crate::symfun::{inner_product, norm, GaussSum};

/// Which concrete family to build, with its parameters in double-double.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelSpec {
    /// `H_β = (β/2)(p² + x²) + i√2 p`, β > 0.
    Extended { beta: Real },
    /// `H_θ = ½(p² + x²) − (i/2) tan 2θ (p² − x²)`, θ ∈ (−π/4, π/4)∖{0}.
    Swanson { theta: Real },
    /// Two-dimensional deformed Landau levels, k₁, k₂ ∈ (−½, ½).
    Landau { k1: Real, k2: Real },
    /// Ordinary oscillator, `b = a†`; the self-adjoint reference.
    StandardHo,
}

impl ModelSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Extended { .. } => "extended",
            Self::Swanson { .. } => "swanson",
            Self::Landau { .. } => "landau",
            Self::StandardHo => "standard_ho",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Landau { .. } => 2,
            _ => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let open = |v: Real, lo: f64, hi: f64| to_f64(v) > lo && to_f64(v) < hi;
        match *self {
            Self::Extended { beta } => {
                if !(to_f64(beta) > 0.0 && to_f64(beta).is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "beta = {} must be strictly positive",
                        to_f64(beta)
                    )));
                }
            }
            Self::Swanson { theta } => {
                let quarter = to_f64(PI) / 4.0;
                if !open(theta, -quarter, quarter) || theta.0 == 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "theta = {} must lie in (-pi/4, pi/4) \\ {{0}}",
                        to_f64(theta)
                    )));
                }
            }
            Self::Landau { k1, k2 } => {
                for (name, v) in [("k1", k1), ("k2", k2)] {
                    if !open(v, -0.5, 0.5) {
                        return Err(Error::InvalidParameter(format!(
                            "{name} = {} must lie in (-1/2, 1/2)",
                            to_f64(v)
                        )));
                    }
                }
            }
            Self::StandardHo => {}
        }
        Ok(())
    }

    /// Parameter record for reports.
    pub fn params(&self) -> Vec<(String, f64)> {
        match *self {
            Self::Extended { beta } => vec![("beta".into(), to_f64(beta))],
            Self::Swanson { theta } => vec![("theta".into(), to_f64(theta))],
            Self::Landau { k1, k2 } => vec![("k1".into(), to_f64(k1)), ("k2".into(), to_f64(k2))],
            Self::StandardHo => Vec::new(),
        }
    }

    /// Short stable label such as `swanson(theta=0.5235987755982988)`.
    pub fn label(&self) -> String {
        let inner: Vec<String> = self.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}({})", self.kind(), inner.join(","))
    }
}

/// `γ_β = (2 + β²) / (2β²)`.
pub fn gamma_beta(beta: Real) -> Real {
    (real(2.0) + beta * beta) / (real(2.0) * beta * beta)
}

/// `ω_θ = 1 / cos 2θ`.
pub fn omega_theta(theta: Real) -> Real {
    rone() / sin_cos(real(2.0) * theta).1
}

/// Eigenvalue law `λ(n) = offset + Σ_d slope_d n_d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineLaw<const D: usize> {
    pub offset: Scalar,
    pub slopes: [Scalar; D],
}

impl<const D: usize> AffineLaw<D> {
    pub fn eval(&self, n: [usize; D]) -> Scalar {
        let mut v = self.offset;
        for d in 0..D {
            v += self.slopes[d] * cr(real(n[d] as f64));
        }
        v
    }
}

/// One mode's pseudo-bosonic pair with cached adjoints.
#[derive(Clone, Debug)]
pub struct Ladder<const D: usize> {
    pub a: DiffOp<D>,
    pub b: DiffOp<D>,
    pub a_dag: DiffOp<D>,
    pub b_dag: DiffOp<D>,
}

impl<const D: usize> Ladder<D> {
    fn new(a: DiffOp<D>, b: DiffOp<D>) -> Self {
        let a_dag = a.formal_adjoint();
        let b_dag = b.formal_adjoint();
        Self { a, b, a_dag, b_dag }
    }

    /// `N = ba`.
    pub fn number(&self) -> Result<DiffOp<D>> {
        self.b.compose(&self.a)
    }

    /// `N† = a†b†`.
    pub fn number_dag(&self) -> Result<DiffOp<D>> {
        self.a_dag.compose(&self.b_dag)
    }
}

#[derive(Clone, Debug)]
pub struct Hamiltonian<const D: usize> {
    pub name: &'static str,
    pub op: DiffOp<D>,
    pub law: AffineLaw<D>,
}

type Memo<const D: usize> = Mutex<HashMap<[usize; D], Arc<OnceLock<Result<Arc<GaussSum<D>>>>>>>;

/// A packaged biorthogonal family: one ladder pair per coordinate, vacua,
/// metric and Hamiltonians.
pub struct PbModel<const D: usize> {
    pub spec: ModelSpec,
    pub ladders: [Ladder<D>; D],
    pub phi0: GaussSum<D>,
    pub psi0: GaussSum<D>,
    /// `T` with `φ_n = T e_n` up to the vacuum normalization.
    pub t: SpecialOp<D>,
    /// `Θ = T^{−2}` rescaled so that `⟨φ₀, Θφ₀⟩ = 1`.
    pub theta: SpecialOp<D>,
    pub hamiltonians: Vec<Hamiltonian<D>>,
    phi_memo: Memo<D>,
    psi_memo: Memo<D>,
}

pub type PbModel1 = PbModel<1>;
pub type PbModel2 = PbModel<2>;

impl<const D: usize> std::fmt::Debug for PbModel<D> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PbModel").field("spec", &self.spec).finish_non_exhaustive()
    }
}

/// Upper bound on ladder indices per coordinate.
pub const INDEX_CAP_1D: usize = 60;
pub const INDEX_CAP_2D: usize = 40;

impl<const D: usize> PbModel<D> {
    fn assemble(
        spec: ModelSpec,
        ladders: [Ladder<D>; D],
        phi0_raw: GaussSum<D>,
        psi0_raw: GaussSum<D>,
        t: SpecialOp<D>,
        theta_raw: SpecialOp<D>,
        hamiltonians: Vec<Hamiltonian<D>>,
    ) -> Result<Self> {
        let phi0 = phi0_raw.scale(cr(rone() / norm(&phi0_raw)?));
        let pairing = inner_product(&phi0, &psi0_raw)?;
        let psi0 = psi0_raw.scale(cone() / pairing);
        let th = inner_product(&phi0, &theta_raw.apply(&phi0)?)?;
        let theta = theta_raw.scaled(cone() / th);
        Ok(Self {
            spec,
            ladders,
            phi0,
            psi0,
            t,
            theta,
            hamiltonians,
            phi_memo: Mutex::new(HashMap::new()),
            psi_memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn index_cap(&self) -> usize {
        if D == 1 {
            INDEX_CAP_1D
        } else {
            INDEX_CAP_2D
        }
    }

    fn check_index(&self, n: [usize; D]) -> Result<()> {
        let m = n.iter().copied().max().unwrap_or(0);
        if m > self.index_cap() {
            return Err(Error::DegreeCap { degree: m, cap: self.index_cap() });
        }
        Ok(())
    }

    fn memo_cell(memo: &Memo<D>, n: [usize; D]) -> Arc<OnceLock<Result<Arc<GaussSum<D>>>>> {
        memo.lock().expect("memo lock").entry(n).or_default().clone()
    }

    /// `φ_n = Π_d b_d^{n_d} φ₀ / √(n_d!)`, memoized per index.
    pub fn phi(&self, n: [usize; D]) -> Result<Arc<GaussSum<D>>> {
        self.check_index(n)?;
        if n.iter().all(|&k| k == 0) {
            return Ok(Arc::new(self.phi0.clone()));
        }
        let cell = Self::memo_cell(&self.phi_memo, n);
        cell.get_or_init(|| {
            // Raise the last nonzero coordinate: φ_n = b_d φ_{n − e_d} / √n_d.
            let d = (0..D).rev().find(|&d| n[d] > 0).expect("n nonzero");
            let mut lower = n;
            lower[d] -= 1;
            let prev = self.phi(lower)?;
            let g = self.ladders[d].b.apply(&prev)?;
            Ok(Arc::new(g.scale(cr(rone() / real(n[d] as f64).sqrt()))))
        })
        .clone()
    }

    /// `Ψ_n = Π_d (a_d†)^{n_d} Ψ₀ / √(n_d!)`, memoized per index.
    pub fn psi(&self, n: [usize; D]) -> Result<Arc<GaussSum<D>>> {
        self.check_index(n)?;
        if n.iter().all(|&k| k == 0) {
            return Ok(Arc::new(self.psi0.clone()));
        }
        let cell = Self::memo_cell(&self.psi_memo, n);
        cell.get_or_init(|| {
            let d = (0..D).rev().find(|&d| n[d] > 0).expect("n nonzero");
            let mut lower = n;
            lower[d] -= 1;
            let prev = self.psi(lower)?;
            let g = self.ladders[d].a_dag.apply(&prev)?;
            Ok(Arc::new(g.scale(cr(rone() / real(n[d] as f64).sqrt()))))
        })
        .clone()
    }

    pub fn theta_of(&self) -> &SpecialOp<D> {
        &self.theta
    }

    /// Envelope `(A, B)` of the vacuum φ₀.
    pub fn phi_envelope(&self) -> ([Scalar; D], [Scalar; D]) {
        let t = &self.phi0.terms()[0];
        (t.curv, t.tilt)
    }

    pub fn psi_envelope(&self) -> ([Scalar; D], [Scalar; D]) {
        let t = &self.psi0.terms()[0];
        (t.curv, t.tilt)
    }
}

fn sqrt_half() -> Real {
    real(0.5).sqrt()
}

impl PbModel<1> {
    pub fn extended(beta: Real) -> Result<Self> {
        let spec = ModelSpec::Extended { beta };
        spec.validate()?;
        let s = cr(sqrt_half());
        let x = DiffOp::coord(0);
        let dx = DiffOp::deriv(0);
        let inv_beta = cr(rone() / beta);
        let a_std = x.add(&dx).scale(s);
        let a_std_dag = x.sub(&dx).scale(s);
        let a = a_std.sub(&DiffOp::scalar(inv_beta));
        let b = a_std_dag.add(&DiffOp::scalar(inv_beta));
        // Vacuum centre √2/β.
        let shift = real(2.0).sqrt() / beta;
        let quarter = rone() / PI.sqrt().sqrt();
        let half_sq = shift * shift * real(0.5);
        let phi0 = GaussSum::gaussian(cr(quarter * (-half_sq).exp()), [cone()], [cr(shift)])?;
        let psi0 = GaussSum::gaussian(cr(quarter * (-half_sq).exp()), [cone()], [cr(-shift)])?;
        let t = SpecialOp::multiply_exp([czero()], [cr(shift)], cr((-(rone() / (beta * beta))).exp()));
        let theta = SpecialOp::multiply_exp(
            [czero()],
            [cr(real(-2.0) * shift)],
            cr((real(2.0) / (beta * beta)).exp()),
        );
        // (β/2)(−∂² + x²) + √2 ∂, built from coordinates rather than the ladder pair.
        let half_beta = cr(beta * real(0.5));
        let h = DiffOp::monomial([0], [2], -half_beta)
            .add(&DiffOp::monomial([2], [0], half_beta))
            .add(&dx.scale(cr(real(2.0).sqrt())));
        let law = AffineLaw { offset: cr(beta * gamma_beta(beta)), slopes: [cr(beta)] };
        Self::assemble(
            spec,
            [Ladder::new(a, b)],
            phi0,
            psi0,
            t,
            theta,
            vec![Hamiltonian { name: "H_beta", op: h, law }],
        )
    }

    pub fn swanson(theta_param: Real) -> Result<Self> {
        let spec = ModelSpec::Swanson { theta: theta_param };
        spec.validate()?;
        let s = cr(sqrt_half());
        let u = unit_phase(theta_param);
        let v = u.conj();
        let a = DiffOp::monomial([1], [0], u * s).add(&DiffOp::monomial([0], [1], v * s));
        let b = DiffOp::monomial([1], [0], u * s).sub(&DiffOp::monomial([0], [1], v * s));
        let curv = u * u;
        let phi0 = GaussSum::gaussian(cone(), [curv], [czero()])?;
        let psi0 = GaussSum::gaussian(cone(), [curv.conj()], [czero()])?;
        let t = SpecialOp::dilation([u], unit_phase(theta_param * real(0.5)));
        let theta = SpecialOp::dilation([v * v], unit_phase(-theta_param));
        let (s2, c2) = sin_cos(real(2.0) * theta_param);
        let tan2 = s2 / c2;
        // ½(−∂² + x²) + (i/2) tan 2θ (∂² + x²)
        let half = cr(real(0.5));
        let itan = ci() * cr(tan2 * real(0.5));
        let h = DiffOp::monomial([0], [2], itan - half).add(&DiffOp::monomial([2], [0], itan + half));
        let omega = omega_theta(theta_param);
        let law = AffineLaw { offset: cr(omega * real(0.5)), slopes: [cr(omega)] };
        Self::assemble(
            spec,
            [Ladder::new(a, b)],
            phi0,
            psi0,
            t,
            theta,
            vec![Hamiltonian { name: "H_theta", op: h, law }],
        )
    }

    pub fn standard_ho() -> Result<Self> {
        let s = cr(sqrt_half());
        let x = DiffOp::coord(0);
        let dx = DiffOp::deriv(0);
        let a = x.add(&dx).scale(s);
        let b = x.sub(&dx).scale(s);
        let e0 = GaussSum::gaussian(cone(), [cone()], [czero()])?;
        let half = cr(real(0.5));
        let h = DiffOp::monomial([0], [2], -half).add(&DiffOp::monomial([2], [0], half));
        let law = AffineLaw { offset: half, slopes: [cone()] };
        Self::assemble(
            ModelSpec::StandardHo,
            [Ladder::new(a, b)],
            e0.clone(),
            e0,
            SpecialOp::identity(),
            SpecialOp::identity(),
            vec![Hamiltonian { name: "H_ho", op: h, law }],
        )
    }
}

impl PbModel<2> {
    /// Coordinate 0 is `x`, 1 is `y`. Mode 0 is the primed pair `(A', B')`
    /// with index `n`, mode 1 the unprimed pair `(A, B)` with index `l`.
    pub fn landau(k1: Real, k2: Real) -> Result<Self> {
        let spec = ModelSpec::Landau { k1, k2 };
        spec.validate()?;
        let two = real(2.0);
        let half = cr(real(0.5));
        let i = ci();
        let dx = DiffOp::<2>::deriv(0);
        let dy = DiffOp::<2>::deriv(1);
        let x = DiffOp::<2>::coord(0);
        let y = DiffOp::<2>::coord(1);
        let p2 = cr(rone() + two * k2) * half; // (1 + 2k₂)/2
        let m2 = cr(rone() - two * k2) * half;
        let p1 = cr(rone() + two * k1) * half;
        let m1 = cr(rone() - two * k1) * half;
        let kappa = cr(sqrt_half());
        // A' with the x coefficient (1 + 2k₂)/2 so that it annihilates φ₀₀.
        let a_p = dx
            .sub(&dy.scale(i))
            .add(&x.scale(p2))
            .sub(&y.scale(i * m1))
            .scale(kappa);
        let b_p = dx
            .scale(-cone())
            .sub(&dy.scale(i))
            .add(&x.scale(m2))
            .add(&y.scale(i * p1))
            .scale(kappa);
        let a_u = dx
            .scale(-i)
            .add(&dy)
            .sub(&x.scale(i * p2))
            .add(&y.scale(m1))
            .scale(kappa);
        let b_u = dx
            .scale(-i)
            .sub(&dy)
            .add(&x.scale(i * m2))
            .add(&y.scale(p1))
            .scale(kappa);
        let phi0 = GaussSum::gaussian(cone(), [p2, m1], [czero(), czero()])?;
        let psi0 = GaussSum::gaussian(cone(), [m2, p1], [czero(), czero()])?;
        let t = SpecialOp::multiply_exp([cr(k2), cr(-k1)], [czero(), czero()], cone());
        let theta = SpecialOp::multiply_exp([cr(real(-2.0) * k2), cr(two * k1)], [czero(), czero()], cone());
        let primed = Ladder::new(a_p, b_p);
        let unprimed = Ladder::new(a_u, b_u);
        let h_p = primed.number()?.sub(&DiffOp::scalar(half));
        let h_u = unprimed.number()?.sub(&DiffOp::scalar(half));
        let hams = vec![
            Hamiltonian {
                name: "h_prime",
                op: h_p,
                law: AffineLaw { offset: -half, slopes: [cone(), czero()] },
            },
            Hamiltonian { name: "h", op: h_u, law: AffineLaw { offset: -half, slopes: [czero(), cone()] } },
        ];
        Self::assemble(spec, [primed, unprimed], phi0, psi0, t, theta, hams)
    }
}

/// A model of either dimension.
#[derive(Debug)]
pub enum AnyModel {
    One(PbModel<1>),
    Two(PbModel<2>),
}

impl AnyModel {
    pub fn spec(&self) -> ModelSpec {
        match self {
            Self::One(m) => m.spec,
            Self::Two(m) => m.spec,
        }
    }
}

/// Build any model from its spec.
pub fn make_model(spec: ModelSpec) -> Result<AnyModel> {
    Ok(match spec {
        ModelSpec::Extended { beta } => AnyModel::One(PbModel::extended(beta)?),
        ModelSpec::Swanson { theta } => AnyModel::One(PbModel::swanson(theta)?),
        ModelSpec::StandardHo => AnyModel::One(PbModel::standard_ho()?),
        ModelSpec::Landau { k1, k2 } => AnyModel::Two(PbModel::landau(k1, k2)?),
    })
}

/// Serializable view of a spec for reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelRecord {
    pub kind: String,
    pub params: std::collections::BTreeMap<String, f64>,
}

impl From<&ModelSpec> for ModelRecord {
    fn from(s: &ModelSpec) -> Self {
        Self { kind: s.kind().into(), params: s.params().into_iter().collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::commutator;
    use crate::scalar::{abs_f64, powi};
    use crate::symfun::{distance, hermite_coeffs, hermite_function, CPoly};

    fn close(a: Scalar, b: f64) -> bool {
        abs_f64(a - cr(real(b))) < 1e-28
    }

    #[test]
    fn spot_constants() {
        assert_eq!(to_f64(gamma_beta(real(1.0))), 1.5);
        assert_eq!(to_f64(omega_theta(PI / real(6.0))), 2.0);
    }

    #[test]
    fn extended_vacuum_matches_closed_form() {
        let m = PbModel::extended(real(1.0)).unwrap();
        let r2 = 2f64.sqrt();
        for &x0 in &[-1.3, 0.0, 0.4, 1.414, 2.7] {
            let want = std::f64::consts::PI.powf(-0.25) * (-(x0 - r2) * (x0 - r2) / 2.0).exp();
            assert!((m.phi0.eval([x0]).re - want).abs() < 1e-15);
        }
        assert!(m.ladders[0].a.apply(&m.phi0).unwrap().is_zero());
        assert!(m.ladders[0].b_dag.apply(&m.psi0).unwrap().is_zero());
        assert!(close(inner_product(&m.phi0, &m.psi0).unwrap(), 1.0));
    }

    #[test]
    fn extended_phi1_closed_form() {
        // φ₁ = π^{−1/4} √2 x e^{−(x − √2/β)²/2}; the ladder shift cancels the centre.
        let beta = 0.7;
        let m = PbModel::extended(real(beta)).unwrap();
        let phi1 = m.phi([1]).unwrap();
        let c0 = 2f64.sqrt() / beta;
        for &x0 in &[-0.8, 0.3, 1.1, 2.0, 3.3] {
            let want = std::f64::consts::PI.powf(-0.25) * 2f64.sqrt() * x0 * (-(x0 - c0) * (x0 - c0) / 2.0).exp();
            assert!((phi1.eval([x0]).re - want).abs() < 1e-13 * (1.0 + want.abs()), "{x0}");
        }
    }

    #[test]
    fn t_maps_hermite_functions_to_phi() {
        let m = PbModel::extended(real(1.0)).unwrap();
        for n in 0..=5 {
            let tn = m.t.apply(&hermite_function(n).unwrap()).unwrap();
            let d = distance(&tn, &m.phi([n]).unwrap()).unwrap();
            assert!(to_f64(d) < 1e-26, "{n}");
        }
    }

    #[test]
    fn swanson_phi2_closed_form() {
        let theta = PI / real(8.0);
        let m = PbModel::swanson(theta).unwrap();
        let u = unit_phase(theta);
        let n1 = (sin_cos(real(2.0) * theta).1 / PI).sqrt().sqrt();
        let h2 = hermite_coeffs(2);
        let coeffs: Vec<Scalar> = h2
            .iter()
            .enumerate()
            .map(|(k, v)| cr(*v * n1 / real(8.0).sqrt()) * powi(u, k as u32))
            .collect();
        let want = GaussSum::with_poly(CPoly::from_dense(&coeffs).unwrap(), [u * u], [czero()]).unwrap();
        let d = distance(&m.phi([2]).unwrap(), &want).unwrap();
        assert!(to_f64(d) < 1e-26);
        assert_eq!(m.phi0.conjugate().terms()[0].curv[0], (u * u).conj());
    }

    #[test]
    fn swanson_theta_to_zero_approaches_hermite_functions() {
        let e3 = hermite_function(3).unwrap();
        let mut last = f64::INFINITY;
        for &th in &[0.2, 0.05, 0.01, 0.001] {
            let m = PbModel::swanson(real(th)).unwrap();
            let phi = m.phi([3]).unwrap();
            let got = phi.terms()[0].poly.coeffs_dense();
            let want = e3.terms()[0].poly.coeffs_dense();
            let dev = got.iter().zip(&want).map(|(a, b)| abs_f64(*a - *b)).fold(0.0, f64::max);
            assert!(dev < last);
            last = dev;
        }
        assert!(last < 1e-2);
    }

    #[test]
    fn landau_reduces_to_oscillator_pair_at_zero_deformation() {
        let m = PbModel::landau(real(0.0), real(0.0)).unwrap();
        for l in &m.ladders {
            assert_eq!(l.b.normal_form_distance(&l.a_dag), 0.0);
        }
        assert!(to_f64(distance(&m.phi0, &m.psi0).unwrap()) < 1e-30);
    }

    #[test]
    fn landau_commutators() {
        let m = PbModel::landau(real(0.1), real(-0.2)).unwrap();
        let id = DiffOp::<2>::identity();
        for l in &m.ladders {
            assert_eq!(commutator(&l.a, &l.b).unwrap().normal_form_distance(&id), 0.0);
            assert!(l.a.apply(&m.phi0).unwrap().is_zero());
            assert!(l.b_dag.apply(&m.psi0).unwrap().is_zero());
        }
        let (p, u) = (&m.ladders[0], &m.ladders[1]);
        for x in [&p.a, &p.b] {
            for y in [&u.a, &u.b] {
                assert!(commutator(x, y).unwrap().is_zero());
            }
        }
        // Unit constants give [A, B] = 2.
        let s = cr(real(2.0).sqrt());
        let two = commutator(&u.a.scale(s), &u.b.scale(s)).unwrap();
        assert_eq!(two.normal_form_distance(&id.scale(cr(real(2.0)))), 0.0);
    }

    #[test]
    fn parameter_ranges_are_enforced() {
        assert!(PbModel::swanson(real(0.0)).is_err());
        assert!(PbModel::swanson(PI / real(4.0)).is_err());
        assert!(PbModel::extended(real(-1.0)).is_err());
        assert!(PbModel::landau(real(0.5), real(0.0)).is_err());
    }

    #[test]
    fn theta_normalization() {
        for m in [PbModel::extended(real(1.0)).unwrap(), PbModel::swanson(PI / real(6.0)).unwrap()] {
            let v = inner_product(&m.phi0, &m.theta.apply(&m.phi0).unwrap()).unwrap();
            assert!(close(v, 1.0));
        }
        let m = PbModel::landau(real(0.0), real(0.0)).unwrap();
        let f = m.phi([1, 2]).unwrap();
        let d = distance(&m.theta.apply(&f).unwrap(), &f).unwrap();
        assert!(to_f64(d) < 1e-28);
    }
}
