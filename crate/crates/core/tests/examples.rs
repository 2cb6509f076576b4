use pseudoboson::axioms::{
    check_biorthogonality, check_eigenvalues, check_nlpb, check_pathology, check_quasi_basis, check_theta,
    riesz_diagnostic, Tolerances,
};
use pseudoboson::models::{make_nlpb, make_pathology, random_samples, PbModel};
use pseudoboson::operators::{DiffOp1, SpecialKind};
use pseudoboson::quadrature::{hermite_rule, quad_inner};
use pseudoboson::scalar::{abs_f64, c, cr, real, to_f64, PI};
use pseudoboson::symfun::{distance, hermite_function, inner_product, norm, GaussSum1};

use nalgebra::DMatrix;
use num_complex::Complex64;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn gaussian(curv: f64) -> GaussSum1 {
    GaussSum1::gaussian(c(1.0, 0.0), [c(curv, 0.0)], [c(0.0, 0.0)]).unwrap()
}

#[test]
fn extended_ground_state_energy() {
    let m = PbModel::extended(real(1.0)).unwrap();
    let h = &m.hamiltonians[0];
    assert_eq!(to_f64(h.law.eval([0]).re), 1.5);
    let hphi = h.op.apply(&m.phi0).unwrap();
    assert!(to_f64(distance(&hphi, &m.phi0.scale(c(1.5, 0.0))).unwrap()) < 1e-28);
}

#[test]
fn swanson_first_excited_level() {
    let m = PbModel::swanson(PI / real(6.0)).unwrap();
    let h = &m.hamiltonians[0];
    assert_eq!(to_f64(h.law.eval([1]).re), 3.0);
    let phi1 = m.phi([1]).unwrap();
    let r = distance(&h.op.apply(&phi1).unwrap(), &phi1.scale(c(3.0, 0.0))).unwrap() / norm(&*phi1).unwrap();
    assert!(to_f64(r) < 1e-25);
}

#[test]
fn number_operator_on_second_level() {
    let m = PbModel::extended(real(1.0)).unwrap();
    let phi2 = m.phi([2]).unwrap();
    let n = m.ladders[0].b.compose(&m.ladders[0].a).unwrap();
    assert!(to_f64(distance(&n.apply(&phi2).unwrap(), &phi2.scale(c(2.0, 0.0))).unwrap()) < 1e-25);
}

#[test]
fn adjoint_of_the_extended_lowering_operator() {
    let beta = 0.8;
    let m = PbModel::extended(real(beta)).unwrap();
    let s = real(0.5).sqrt();
    let want = DiffOp1::coord(0)
        .scale(cr(s))
        .sub(&DiffOp1::deriv(0).scale(cr(s)))
        .sub(&DiffOp1::scalar(cr(real(1.0) / real(beta))));
    assert!(m.ladders[0].a_dag.normal_form_distance(&want) < 1e-30);
}

#[test]
fn extended_metric_is_an_exponential_weight() {
    // Θ ∝ e^{−2√2 x} at β = 1.
    let m = PbModel::extended(real(1.0)).unwrap();
    let th = m.theta_of();
    assert_eq!(th.factors.len(), 1);
    match th.factors[0] {
        SpecialKind::MultiplyExp { q2, q1 } => {
            assert!(abs_f64(q2[0]) == 0.0);
            assert!((to_f64(q1[0].re) + 2.0 * 2f64.sqrt()).abs() < 1e-15);
        }
        _ => panic!("expected a multiplication operator"),
    }
    let psi3 = m.psi([3]).unwrap();
    let r = distance(&th.apply(&*m.phi([3]).unwrap()).unwrap(), &psi3).unwrap() / norm(&*psi3).unwrap();
    assert!(to_f64(r) < 1e-9);
}

#[test]
fn swanson_metric_maps_the_vacuum_curvature() {
    let theta = PI / real(8.0);
    let m = PbModel::swanson(theta).unwrap();
    let out = m.theta_of().apply(&m.phi0).unwrap();
    let a = out.terms()[0].curv[0];
    let want = Complex64::from_polar(1.0, -2.0 * to_f64(theta));
    assert!((Complex64::new(to_f64(a.re), to_f64(a.im)) - want).norm() < 1e-15);
    assert!(to_f64(distance(&out, &m.psi0).unwrap()) < 1e-28);
}

#[test]
fn landau_metric_is_trivial_without_deformation() {
    let m = PbModel::landau(real(0.0), real(0.0)).unwrap();
    let f = &random_samples::<2>(1, 9, [c(1.0, 0.0); 2], [c(0.0, 0.0); 2])[0];
    assert!(to_f64(distance(&m.theta_of().apply(f).unwrap(), f).unwrap()) < 1e-28);
}

#[test]
fn quadrature_cross_checks_gram_entries() {
    let rule = hermite_rule(96).unwrap();
    let e = PbModel::extended(real(1.0)).unwrap();
    let q = quad_inner(&*e.phi([3]).unwrap(), &*e.psi([3]).unwrap(), &rule, None);
    assert!((q - 1.0).norm() < 1e-8);
    let s = PbModel::swanson(PI / real(8.0)).unwrap();
    let q = quad_inner(&*s.phi([2]).unwrap(), &*s.psi([5]).unwrap(), &rule, None);
    assert!(q.norm() < 1e-8);
}

#[test]
fn biorthogonality_blocks() {
    let r = check_biorthogonality(&PbModel::extended(real(2.0)).unwrap(), 20, &tol());
    assert!(r.pass && r.max_residual <= 1e-8, "{}", r.max_residual);
    let r = check_biorthogonality(&PbModel::swanson(PI / real(6.0)).unwrap(), 15, &tol());
    assert!(r.pass && r.max_residual <= 1e-8, "{}", r.max_residual);
}

#[test]
fn landau_levels_are_simultaneously_diagonal() {
    let m = PbModel::landau(real(0.1), real(-0.2)).unwrap();
    let r = check_eigenvalues(&m, 8, &tol());
    assert!(r.pass, "{}", r.max_residual);
    assert!(r.family_max("h").unwrap() <= 1e-9 && r.family_max("h_prime").unwrap() <= 1e-9);
}

#[test]
fn finite_expansion_is_exact() {
    let m = PbModel::extended(real(1.0)).unwrap();
    // f = φ_2 pairs exactly with Ψ_n on the left; g = φ_5 pairs with Ψ_n on the right.
    let f = m.phi([2]).unwrap();
    let g = m.psi([5]).unwrap();
    let r = check_quasi_basis(&m, &f, &g, 8, &tol());
    let h = m.psi([2]).unwrap();
    let k = m.phi([5]).unwrap();
    let s = check_quasi_basis(&m, &h, &k, 8, &tol());
    for n in 5..=8 {
        let at = |rep: &pseudoboson::CheckReport, fam: &str| {
            rep.trace
                .iter()
                .find(|t| t.family == fam && t.index == pseudoboson::Index::Truncation(n))
                .unwrap()
                .value
        };
        assert!(at(&r, "r_psi_phi") < 1e-25);
        assert!(at(&s, "r_phi_psi") < 1e-25);
    }
}

#[test]
fn truncated_span_is_reproduced() {
    // f ∈ span{φ_0..φ_N}: the φ/Ψ partial sum at N is exact for any g.
    let m = PbModel::swanson(PI / real(6.0)).unwrap();
    let n = 7;
    let coeffs = [c(0.3, -0.2), c(-1.0, 0.5), c(0.0, 0.7), c(0.25, 0.0)];
    let f = coeffs
        .iter()
        .enumerate()
        .fold(GaussSum1::zero(), |s, (k, a)| s.add(&m.phi([2 * k]).unwrap().scale(*a)));
    let g = GaussSum1::gaussian(c(1.0, 0.0), [c(1.3, 0.4)], [c(0.2, -0.1)]).unwrap();
    let target = inner_product(&f, &g).unwrap();
    let mut partial = c(0.0, 0.0);
    for k in 0..=n {
        partial += inner_product(&f, &*m.psi([k]).unwrap()).unwrap() * inner_product(&*m.phi([k]).unwrap(), &g).unwrap();
    }
    assert!(abs_f64(partial - target) <= 1e-10 * abs_f64(target).max(1.0));
}

#[test]
fn swanson_orderings_agree_for_a_narrow_gaussian() {
    let m = PbModel::swanson(PI / real(8.0)).unwrap();
    let g = gaussian(2.0);
    let r = check_quasi_basis(&m, &g, &g, 40, &tol());
    let gap = r.family_max("ordering_gap").unwrap();
    assert!(gap <= 1e-6, "{gap}");
}

#[test]
fn theta_intertwines_number_operators_on_phi2() {
    let m = PbModel::extended(real(1.0)).unwrap();
    let l = &m.ladders[0];
    let phi2 = m.phi([2]).unwrap();
    let two_psi2 = m.psi([2]).unwrap().scale(c(2.0, 0.0));
    let th = m.theta_of();
    let lhs = th.apply(&l.number().unwrap().apply(&phi2).unwrap()).unwrap();
    let rhs = l.number_dag().unwrap().apply(&th.apply(&phi2).unwrap()).unwrap();
    assert!(to_f64(distance(&lhs, &two_psi2).unwrap() / norm(&two_psi2).unwrap()) < 1e-9);
    assert!(to_f64(distance(&rhs, &two_psi2).unwrap() / norm(&two_psi2).unwrap()) < 1e-9);
}

#[test]
fn theta_suite_on_swanson() {
    let m = PbModel::swanson(real(-0.6)).unwrap();
    let (pc, pt) = m.phi_envelope();
    let (qc, qt) = m.psi_envelope();
    let fw = random_samples::<1>(8, 11, pc, pt);
    let bw = random_samples::<1>(8, 12, qc, qt);
    let r = check_theta(&m, 10, &fw, &bw, &tol());
    assert!(r.pass, "{:?}", r.notes);
    assert_eq!(r.metadata["domain_exits"], "0");
}

#[test]
fn riesz_condition_numbers() {
    // β = 10: κ(10) is the spread of e^{2√2x/10} over the span of e_0..e_10.
    let near = riesz_diagnostic(&PbModel::extended(real(10.0)).unwrap(), &[10]);
    assert!((near.rows[0].residual - 7.939439526992948).abs() < 1e-6, "{}", near.rows[0].residual);
    let far = riesz_diagnostic(&PbModel::extended(real(2.0)).unwrap(), &[10]);
    assert!(far.rows[0].residual > 100.0 * near.rows[0].residual);
    let ho = riesz_diagnostic(&PbModel::standard_ho().unwrap(), &[1, 2, 5, 20]);
    for row in &ho.rows {
        assert!((row.residual - 1.0).abs() <= 1e-10);
    }
    let sw = riesz_diagnostic(&PbModel::swanson(PI / real(6.0)).unwrap(), &[10, 20]);
    assert!(sw.rows[1].residual > sw.rows[0].residual);
    assert!(sw.pass && sw.diagnostic);
}

#[test]
fn pathology_of_size_ten() {
    let p = make_pathology(10).unwrap();
    assert_eq!(p.tilde_e[0], vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let r = check_pathology(&p);
    assert!(r.pass);
    assert_eq!(r.trace[0].value, 1.0);
    assert_eq!(r.family_max("biorthogonality"), Some(0.0));
}

#[test]
fn nlpb_examples() {
    let eps = [0.0, 1.0, 3.0, 6.0];
    let m = make_nlpb(&eps, DMatrix::identity(4, 4)).unwrap();
    let r = check_nlpb(&m, 1e-12);
    assert!(r.pass);
    let mut theta = DMatrix::<Complex64>::identity(5, 5);
    theta[(0, 1)] = Complex64::new(0.3, 0.2);
    theta[(1, 0)] = Complex64::new(0.3, -0.2);
    theta[(3, 4)] = Complex64::new(-0.1, 0.4);
    theta[(4, 3)] = Complex64::new(-0.1, -0.4);
    let m = make_nlpb(&[0.0, 1.0, 2.5, 4.1, 7.0], theta).unwrap();
    let r = check_nlpb(&m, 1e-10);
    assert!(r.pass, "{}", r.max_residual);
    assert!(r.family_max("spectrum").unwrap() <= 1e-10);
}

#[test]
fn hermite_functions_survive_the_oscillator_metric() {
    let m = PbModel::standard_ho().unwrap();
    for n in 0..5 {
        let e = hermite_function(n).unwrap();
        assert!(to_f64(distance(&*m.phi([n]).unwrap(), &e).unwrap()) < 1e-28);
        assert!(to_f64(distance(&*m.psi([n]).unwrap(), &e).unwrap()) < 1e-28);
    }
}
