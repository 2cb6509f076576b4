use nalgebra::DMatrix;
use num_complex::Complex64;

use super::report::{CheckReport, Index, Tolerances};
use crate::error::Result;
use crate::linalg::hermitian_eigenvalues;
use crate::models::{dot, unit, NlpbModel, PathologyModel, PbModel};
use crate::operators::{commutator, DiffOp};
use crate::quadrature::{hermite_rule, quad_gram};
use crate::scalar::{abs_f64, cone, cr, real, to_f64, Real, Scalar};
use crate::symfun::{distance, gram, inner_product, norm, GaussSum};

/// Pairs whose `∫|f̄ g|` exceeds this are outside the quadrature oracle's
/// validity envelope: f64 summation cannot resolve 1e-8 beneath that mass.
pub const QUAD_MASS_CAP: f64 = 1e6;

fn ratio(num: Real, den: Real) -> f64 {
    if den.0 == 0.0 {
        to_f64(num)
    } else {
        to_f64(num / den)
    }
}

/// `‖lhs − rhs‖ / ‖rhs‖`, or the absolute distance when `rhs = 0`.
fn rel_residual<const D: usize>(lhs: &GaussSum<D>, rhs: &GaussSum<D>) -> Result<f64> {
    Ok(ratio(distance(lhs, rhs)?, norm(rhs)?))
}

/// `‖lhs − rhs‖ / ‖scale‖`.
fn residual_over<const D: usize>(lhs: &GaussSum<D>, rhs: &GaussSum<D>, scale: &GaussSum<D>) -> Result<f64> {
    Ok(ratio(distance(lhs, rhs)?, norm(scale)?))
}

/// Family name with a mode suffix for multi-mode models.
fn fam<const D: usize>(base: &str, d: usize) -> String {
    if D == 1 {
        base.to_string()
    } else {
        format!("{base}_mode{d}")
    }
}

/// All indices with every coordinate ≤ `nmax`, lexicographic.
pub fn grid<const D: usize>(nmax: usize) -> Vec<[usize; D]> {
    let mut out = Vec::new();
    let mut n = [0usize; D];
    loop {
        out.push(n);
        let mut d = D;
        loop {
            if d == 0 {
                return out;
            }
            d -= 1;
            n[d] += 1;
            if n[d] <= nmax {
                break;
            }
            n[d] = 0;
        }
    }
}

fn shift<const D: usize>(n: [usize; D], d: usize, up: bool) -> [usize; D] {
    let mut m = n;
    if up {
        m[d] += 1;
    } else {
        m[d] -= 1;
    }
    m
}

fn sqrt_f(k: usize) -> Scalar {
    cr(real(k as f64).sqrt())
}

/// Record `value` or, on error, a failing row with the error in the notes.
fn record(r: &mut CheckReport, family: String, index: Index, value: Result<f64>, tol: f64) {
    match value {
        Ok(v) => r.push(family, index, v, tol),
        Err(e) => {
            r.note(format!("{family} {}: {e}", index.label()));
            r.push(family, index, f64::MAX, tol);
        }
    }
}

fn commutator_rows<const D: usize>(
    r: &mut CheckReport,
    pairs: &[(DiffOp<D>, DiffOp<D>)],
    samples: &[GaussSum<D>],
    tol: &Tolerances,
) {
    let id = DiffOp::<D>::identity();
    for (d, (x, y)) in pairs.iter().enumerate() {
        let dist = commutator(x, y).map(|c| c.normal_form_distance(&id));
        record(r, "normal_form".into(), Index::Mode(d), dist, tol.exact);
        for (i, f) in samples.iter().enumerate() {
            let res = (|| {
                let xy = x.apply(&y.apply(f)?)?;
                let yx = y.apply(&x.apply(f)?)?;
                rel_residual(&xy.sub(&yx), f)
            })();
            record(r, fam::<D>("action", d), Index::Sample(i), res, tol.action);
        }
    }
}

/// `[a, b] = 1` in normal form and on samples; for several modes also the
/// vanishing of every cross-mode commutator.
pub fn check_commutator<const D: usize>(
    model: &PbModel<D>,
    samples: &[GaussSum<D>],
    tol: &Tolerances,
) -> CheckReport {
    let mut r = CheckReport::new("commutator", Some(&model.spec), tol.exact);
    let pairs: Vec<_> = model.ladders.iter().map(|l| (l.a.clone(), l.b.clone())).collect();
    commutator_rows(&mut r, &pairs, samples, tol);
    for d in 0..D {
        for e in d + 1..D {
            let (p, q) = (&model.ladders[d], &model.ladders[e]);
            for (xn, x) in [("a", &p.a), ("b", &p.b)] {
                for (yn, y) in [("a", &q.a), ("b", &q.b)] {
                    let v = commutator(x, y).map(|c| c.normal_form_distance(&DiffOp::zero()));
                    record(&mut r, format!("cross_{xn}{d}_{yn}{e}"), Index::Whole, v, tol.exact);
                }
            }
        }
    }
    r.meta("samples", samples.len());
    r.finish()
}

/// `[b†, a†] = 1`, with both adjoints taken formally.
pub fn check_duality<const D: usize>(model: &PbModel<D>, samples: &[GaussSum<D>], tol: &Tolerances) -> CheckReport {
    let mut r = CheckReport::new("duality", Some(&model.spec), tol.exact);
    let pairs: Vec<_> = model.ladders.iter().map(|l| (l.b_dag.clone(), l.a_dag.clone())).collect();
    commutator_rows(&mut r, &pairs, samples, tol);
    r.meta("samples", samples.len());
    r.finish()
}

/// Residual 0 for the empty sum, otherwise its norm (never passes a zero tolerance).
fn vacuum_residual<const D: usize>(g: &GaussSum<D>) -> Result<f64> {
    if g.is_zero() {
        Ok(0.0)
    } else {
        Ok(to_f64(norm(g)?).max(f64::MIN_POSITIVE))
    }
}

/// The four lowering and raising relations for every index up to `nmax`.
pub fn check_ladder<const D: usize>(model: &PbModel<D>, nmax: usize, tol: &Tolerances) -> CheckReport {
    let mut r = CheckReport::new("ladder", Some(&model.spec), tol.ladder);
    let origin = [0usize; D];
    for (d, l) in model.ladders.iter().enumerate() {
        let v = model.phi(origin).and_then(|p| l.a.apply(&p)).and_then(|g| vacuum_residual(&g));
        record(&mut r, fam::<D>("vacuum_phi", d), Index::Whole, v, 0.0);
        let v = model.psi(origin).and_then(|p| l.b_dag.apply(&p)).and_then(|g| vacuum_residual(&g));
        record(&mut r, fam::<D>("vacuum_psi", d), Index::Whole, v, 0.0);
    }
    for n in grid::<D>(nmax) {
        let idx = Index::of(n);
        for (d, l) in model.ladders.iter().enumerate() {
            let up = shift(n, d, true);
            let v = (|| {
                let lhs = l.b.apply(&*model.phi(n)?)?;
                rel_residual(&lhs, &model.phi(up)?.scale(sqrt_f(n[d] + 1)))
            })();
            record(&mut r, fam::<D>("b_phi", d), idx.clone(), v, tol.ladder);
            let v = (|| {
                let phi = model.phi(n)?;
                let lhs = l.a.apply(&phi)?;
                if n[d] == 0 {
                    residual_over(&lhs, &GaussSum::zero(), &phi)
                } else {
                    rel_residual(&lhs, &model.phi(shift(n, d, false))?.scale(sqrt_f(n[d])))
                }
            })();
            record(&mut r, fam::<D>("a_phi", d), idx.clone(), v, tol.ladder);
            let v = (|| {
                let lhs = l.a_dag.apply(&*model.psi(n)?)?;
                rel_residual(&lhs, &model.psi(up)?.scale(sqrt_f(n[d] + 1)))
            })();
            record(&mut r, fam::<D>("adag_psi", d), idx.clone(), v, tol.ladder);
            let v = (|| {
                let psi = model.psi(n)?;
                let lhs = l.b_dag.apply(&psi)?;
                if n[d] == 0 {
                    residual_over(&lhs, &GaussSum::zero(), &psi)
                } else {
                    rel_residual(&lhs, &model.psi(shift(n, d, false))?.scale(sqrt_f(n[d])))
                }
            })();
            record(&mut r, fam::<D>("bdag_psi", d), idx.clone(), v, tol.ladder);
        }
    }
    r.meta("nmax", nmax);
    r.finish()
}

fn families<const D: usize>(model: &PbModel<D>, idx: &[[usize; D]]) -> Result<(Vec<GaussSum<D>>, Vec<GaussSum<D>>)> {
    let mut phi = Vec::with_capacity(idx.len());
    let mut psi = Vec::with_capacity(idx.len());
    for n in idx {
        phi.push((*model.phi(*n)?).clone());
        psi.push((*model.psi(*n)?).clone());
    }
    Ok((phi, psi))
}

/// `max_m |⟨φ_n, Ψ_m⟩ − δ_nm|` per `n`, in both orderings.
pub fn check_biorthogonality<const D: usize>(model: &PbModel<D>, nmax: usize, tol: &Tolerances) -> CheckReport {
    let mut r = CheckReport::new("biorthogonality", Some(&model.spec), tol.gram);
    let idx = grid::<D>(nmax);
    type Grams = (Vec<Vec<Scalar>>, Vec<Vec<Scalar>>);
    let run = || -> Result<Grams> {
        let (phi, psi) = families(model, &idx)?;
        let lp: Vec<&GaussSum<D>> = phi.iter().collect();
        let ls: Vec<&GaussSum<D>> = psi.iter().collect();
        Ok((gram(&lp, &ls)?, gram(&ls, &lp)?))
    };
    match run() {
        Ok((g1, g2)) => {
            for (fname, g) in [("phi_psi", &g1), ("psi_phi", &g2)] {
                for (i, n) in idx.iter().enumerate() {
                    let dev = (0..idx.len())
                        .map(|j| abs_f64(g[i][j] - if i == j { cone() } else { cr(real(0.0)) }))
                        .fold(0.0, f64::max);
                    r.push(fname, Index::of(*n), dev, tol.gram);
                }
            }
        }
        Err(e) => r.fail("gram", e),
    }
    r.meta("nmax", nmax);
    r.finish()
}

/// Closed-form Gram block against the quadrature oracle.
pub fn check_quadrature<const D: usize>(
    model: &PbModel<D>,
    nmax: usize,
    order: usize,
    tol: &Tolerances,
) -> CheckReport {
    let mut r = CheckReport::new("quadrature", Some(&model.spec), tol.quadrature);
    let idx = grid::<D>(nmax);
    let mut run = || -> Result<()> {
        let (phi, psi) = families(model, &idx)?;
        let lp: Vec<&GaussSum<D>> = phi.iter().collect();
        let ls: Vec<&GaussSum<D>> = psi.iter().collect();
        let closed = gram(&lp, &ls)?;
        let rule = hermite_rule(order)?;
        let (quad, mass) = quad_gram(&lp, &ls, &rule, None);
        let mut skipped = 0usize;
        for (i, n) in idx.iter().enumerate() {
            let mut dev: f64 = 0.0;
            for j in 0..idx.len() {
                if mass[i][j] > QUAD_MASS_CAP {
                    skipped += 1;
                    continue;
                }
                let c = Complex64::new(to_f64(closed[i][j].re), to_f64(closed[i][j].im));
                dev = dev.max((quad[i][j] - c).norm());
            }
            r.push("quad_vs_closed", Index::of(*n), dev, tol.quadrature);
        }
        if skipped > 0 {
            r.note(format!("{skipped} pairs with integrand mass above {QUAD_MASS_CAP:e} left to the closed form"));
        }
        r.meta("order", order);
        r.meta("skipped_pairs", skipped);
        Ok(())
    };
    if let Err(e) = run() {
        r.fail("quadrature", e);
    }
    r.meta("nmax", nmax);
    r.finish()
}

/// Number operators and every Hamiltonian on both families.
pub fn check_eigenvalues<const D: usize>(model: &PbModel<D>, nmax: usize, tol: &Tolerances) -> CheckReport {
    let mut r = CheckReport::new("eigenvalues", Some(&model.spec), tol.eigen);
    let numbers: Vec<Result<(DiffOp<D>, DiffOp<D>)>> =
        model.ladders.iter().map(|l| Ok((l.number()?, l.number_dag()?))).collect();
    let hams: Vec<_> = model.hamiltonians.iter().map(|h| (h, h.op.formal_adjoint())).collect();
    for n in grid::<D>(nmax) {
        let idx = Index::of(n);
        for (d, ops) in numbers.iter().enumerate() {
            let k = cr(real(n[d] as f64));
            let v = (|| {
                let (num, _) = ops.as_ref().map_err(|e| e.clone())?;
                let phi = model.phi(n)?;
                residual_over(&num.apply(&phi)?, &phi.scale(k), &phi)
            })();
            record(&mut r, fam::<D>("number", d), idx.clone(), v, tol.eigen);
            let v = (|| {
                let (_, num_dag) = ops.as_ref().map_err(|e| e.clone())?;
                let psi = model.psi(n)?;
                residual_over(&num_dag.apply(&psi)?, &psi.scale(k), &psi)
            })();
            record(&mut r, fam::<D>("number_dag", d), idx.clone(), v, tol.eigen);
        }
        for (h, h_dag) in &hams {
            let lam = h.law.eval(n);
            let v = (|| {
                let phi = model.phi(n)?;
                residual_over(&h.op.apply(&phi)?, &phi.scale(lam), &phi)
            })();
            record(&mut r, h.name.to_string(), idx.clone(), v, tol.eigen);
            let v = (|| {
                let psi = model.psi(n)?;
                residual_over(&h_dag.apply(&psi)?, &psi.scale(lam.conj()), &psi)
            })();
            record(&mut r, format!("{}_dag", h.name), idx.clone(), v, tol.eigen);
        }
    }
    r.meta("nmax", nmax);
    r.finish()
}

/// Partial sums of both resolutions of `⟨f, g⟩`, truncated by total index.
pub fn check_quasi_basis<const D: usize>(
    model: &PbModel<D>,
    f: &GaussSum<D>,
    g: &GaussSum<D>,
    nmax: usize,
    tol: &Tolerances,
) -> CheckReport {
    let mut r = CheckReport::new("quasi_basis", Some(&model.spec), tol.quasi_basis);
    let run = || -> Result<(Vec<f64>, Vec<f64>, Scalar, Scalar)> {
        let target = inner_product(f, g)?;
        let mut s1 = vec![cr(real(0.0)); nmax + 1];
        let mut s2 = vec![cr(real(0.0)); nmax + 1];
        for n in grid::<D>(nmax) {
            let shell: usize = n.iter().sum();
            if shell > nmax {
                continue;
            }
            let phi = model.phi(n)?;
            let psi = model.psi(n)?;
            s1[shell] += inner_product(f, &phi)? * inner_product(&psi, g)?;
            s2[shell] += inner_product(f, &psi)? * inner_product(&phi, g)?;
        }
        let mut acc1 = cr(real(0.0));
        let mut acc2 = cr(real(0.0));
        let mut r1 = Vec::with_capacity(nmax + 1);
        let mut r2 = Vec::with_capacity(nmax + 1);
        for k in 0..=nmax {
            acc1 += s1[k];
            acc2 += s2[k];
            r1.push(abs_f64(target - acc1));
            r2.push(abs_f64(target - acc2));
        }
        Ok((r1, r2, acc1, acc2))
    };
    match run() {
        Ok((r1, r2, a1, a2)) => {
            for (name, curve) in [("phi_psi", &r1), ("psi_phi", &r2)] {
                for (k, v) in curve.iter().enumerate() {
                    r.trace(format!("r_{name}"), Index::Truncation(k), *v);
                }
                r.push(format!("r_{name}"), Index::Truncation(nmax), curve[nmax], tol.quasi_basis);
                let rise = (nmax / 2..nmax).map(|k| (curve[k + 1] - curve[k]).max(0.0)).fold(0.0, f64::max);
                r.push(format!("tail_rise_{name}"), Index::Whole, rise, tol.quasi_basis);
            }
            r.push("ordering_gap", Index::Truncation(nmax), abs_f64(a1 - a2), tol.ordering);
        }
        Err(e) => r.fail("pairing", e),
    }
    r.meta("nmax", nmax);
    r.finish()
}

/// Θ-conjugacy, the equivalent lemma statements, `Ψ_n = Θφ_n`, positivity
/// of Θ, and intertwining of `N` with `N†`.
///
/// `forward` samples must lie in Θ's computable domain, `backward` samples in
/// Θ^{−1}'s. Samples that leave the domain are noted, not failed.
pub fn check_theta<const D: usize>(
    model: &PbModel<D>,
    nmax: usize,
    forward: &[GaussSum<D>],
    backward: &[GaussSum<D>],
    tol: &Tolerances,
) -> CheckReport {
    let mut r = CheckReport::new("theta", Some(&model.spec), tol.theta);
    let th = model.theta_of();
    let thi = th.inverse();
    let mut exits = 0usize;

    let v = th.apply(&model.phi0).and_then(|g| inner_product(&model.phi0, &g)).map(|z| abs_f64(z - cone()));
    record(&mut r, "normalization".into(), Index::Whole, v, tol.exact);

    for (d, l) in model.ladders.iter().enumerate() {
        // Statements 1, 2: a = Θ⁻¹b†Θ, b = Θ⁻¹a†Θ; 3, 4: a† = ΘbΘ⁻¹, b† = ΘaΘ⁻¹.
        let statements = [
            ("conj_a", &l.a, &l.b_dag, false),
            ("conj_b", &l.b, &l.a_dag, false),
            ("conj_adag", &l.a_dag, &l.b, true),
            ("conj_bdag", &l.b_dag, &l.a, true),
        ];
        for (name, lhs_op, mid_op, inverse_first) in statements {
            let (first, second, set) = if inverse_first { (&thi, th, backward) } else { (th, &thi, forward) };
            for (i, f) in set.iter().enumerate() {
                let rhs = first.apply(f).and_then(|g| mid_op.apply(&g)).and_then(|g| second.apply(&g));
                match rhs {
                    Ok(rhs) => {
                        let v = lhs_op.apply(f).and_then(|lhs| rel_residual(&rhs, &lhs));
                        record(&mut r, fam::<D>(name, d), Index::Sample(i), v, tol.theta);
                    }
                    Err(e) => {
                        exits += 1;
                        r.note(format!("{} sample {i}: {e}", fam::<D>(name, d)));
                    }
                }
            }
        }
    }

    for n in grid::<D>(nmax) {
        let v = (|| {
            let psi = model.psi(n)?;
            rel_residual(&th.apply(&*model.phi(n)?)?, &psi)
        })();
        record(&mut r, "psi_theta_phi".into(), Index::of(n), v, tol.theta);
    }

    for (i, f) in forward.iter().enumerate() {
        match th.apply(f).and_then(|tf| inner_product(f, &tf)) {
            Ok(z) => {
                r.push("positivity_re", Index::Sample(i), if z.re.0 > 0.0 { 0.0 } else { 1.0 }, 0.0);
                r.push("positivity_im", Index::Sample(i), ratio(z.im.abs(), crate::scalar::abs(z)), tol.positivity);
                r.trace("re_f_theta_f", Index::Sample(i), to_f64(z.re));
            }
            Err(e) => {
                exits += 1;
                r.note(format!("positivity sample {i}: {e}"));
            }
        }
    }

    for (d, l) in model.ladders.iter().enumerate() {
        let ops = l.number().and_then(|n| Ok((n, l.number_dag()?)));
        let (num, num_dag) = match ops {
            Ok(v) => v,
            Err(e) => {
                r.fail(fam::<D>("intertwining", d), e);
                continue;
            }
        };
        for (i, f) in forward.iter().enumerate() {
            let v = (|| {
                let lhs = th.apply(&num.apply(f)?)?;
                let rhs = num_dag.apply(&th.apply(f)?)?;
                rel_residual(&lhs, &rhs)
            })();
            match v {
                Err(e @ crate::error::Error::DomainExit { .. }) => {
                    exits += 1;
                    r.note(format!("intertwining sample {i}: {e}"));
                }
                other => record(&mut r, fam::<D>("intertwining", d), Index::Sample(i), other, tol.theta),
            }
        }
        for n in grid::<D>(nmax) {
            let k = cr(real(n[d] as f64));
            let v = (|| {
                let phi = model.phi(n)?;
                let psi = model.psi(n)?;
                let target = psi.scale(k);
                let lhs = th.apply(&num.apply(&phi)?)?;
                let rhs = num_dag.apply(&th.apply(&phi)?)?;
                Ok(residual_over(&lhs, &target, &psi)?.max(residual_over(&rhs, &target, &psi)?))
            })();
            record(&mut r, fam::<D>("intertwining_n", d), Index::of(n), v, tol.theta);
        }
    }
    r.meta("forward_samples", forward.len());
    r.meta("backward_samples", backward.len());
    r.meta("domain_exits", exits);
    r.finish()
}

/// Condition number of the Gram matrix `⟨φ_n, φ_m⟩` for each truncation.
/// Report-only.
pub fn riesz_diagnostic<const D: usize>(model: &PbModel<D>, truncations: &[usize]) -> CheckReport {
    let mut r = CheckReport::new("riesz_diagnostic", Some(&model.spec), f64::MAX).diagnostic();
    let top = truncations.iter().copied().max().unwrap_or(0);
    let idx = grid::<D>(top);
    let run = || -> Result<Vec<Vec<Scalar>>> {
        let (phi, _) = families(model, &idx)?;
        let lp: Vec<&GaussSum<D>> = phi.iter().collect();
        gram(&lp, &lp)
    };
    match run() {
        Ok(g) => {
            for &nt in truncations {
                let keep: Vec<usize> =
                    idx.iter().enumerate().filter(|(_, n)| n.iter().all(|&k| k <= nt)).map(|(i, _)| i).collect();
                let sub: Vec<Vec<Scalar>> = keep.iter().map(|&i| keep.iter().map(|&j| g[i][j]).collect()).collect();
                let ev = hermitian_eigenvalues(&sub);
                let lo = ev[0];
                let hi = ev[ev.len() - 1];
                let kappa = if lo.0 > 0.0 { to_f64(hi / lo) } else { f64::MAX };
                r.push("kappa", Index::Truncation(nt), kappa, f64::MAX);
                r.trace("lambda_min", Index::Truncation(nt), to_f64(lo));
                r.trace("lambda_max", Index::Truncation(nt), to_f64(hi));
            }
        }
        Err(e) => r.fail("gram", e),
    }
    r.finish()
}

/// Exact checks on the complete-but-not-a-basis pair.
pub fn check_pathology(model: &PathologyModel) -> CheckReport {
    let mut r = CheckReport::new("pathology", None, 0.0);
    let n = model.n;
    let e1 = unit(n, 1);
    let miss = model.hat_g.iter().map(|g| dot(&e1, g).abs()).fold(0.0, f64::max);
    r.push("g_orthogonal_to_e1", Index::Whole, miss, 0.0);
    let expansion = model.expand(&e1);
    let resid: f64 = e1.iter().zip(&expansion).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    r.trace("e1_expansion_residual", Index::Truncation(n), resid);
    r.push("e1_expansion_residual_minus_one", Index::Truncation(n), (resid - 1.0).abs(), 0.0);
    for (k, e) in model.tilde_e.iter().enumerate() {
        let back = model.expand(e);
        let d = e.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        r.push("member_reconstruction", Index::N(k + 2), d, 0.0);
    }
    for (i, g) in model.hat_g.iter().enumerate() {
        let dev = model
            .tilde_e
            .iter()
            .enumerate()
            .map(|(j, e)| (dot(g, e) - if i == j { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max);
        r.push("biorthogonality", Index::N(i + 2), dev, 0.0);
    }
    r.meta("n", n);
    r.finish()
}

fn vnorm(v: &nalgebra::DVector<Complex64>) -> f64 {
    v.norm()
}

/// Matrix realization: shifts, spectrum of `M = ba`, biorthogonality and
/// strong crypto-hermiticity.
pub fn check_nlpb(model: &NlpbModel, tol_value: f64) -> CheckReport {
    let mut r = CheckReport::new("nlpb", None, tol_value);
    let n = model.n;
    let eps = &model.epsilon;
    let s = |k: usize| Complex64::new(eps[k].sqrt(), 0.0);
    let rel = |lhs: nalgebra::DVector<Complex64>, rhs: &nalgebra::DVector<Complex64>| {
        let d = vnorm(&(lhs - rhs));
        let m = vnorm(rhs);
        if m == 0.0 {
            d
        } else {
            d / m
        }
    };
    for k in 1..n {
        r.push("a_phi", Index::N(k), rel(&model.a * &model.phi[k], &(&model.phi[k - 1] * s(k))), tol_value);
        r.push(
            "bdag_eta",
            Index::N(k),
            rel(model.b.adjoint() * &model.eta[k], &(&model.eta[k - 1] * s(k))),
            tol_value,
        );
    }
    // The top index has no partner inside the truncation.
    for k in 0..n - 1 {
        r.push("b_phi", Index::N(k), rel(&model.b * &model.phi[k], &(&model.phi[k + 1] * s(k + 1))), tol_value);
        r.push(
            "adag_eta",
            Index::N(k),
            rel(model.a.adjoint() * &model.eta[k], &(&model.eta[k + 1] * s(k + 1))),
            tol_value,
        );
    }
    let m = model.m();
    for k in 0..n {
        let want = &model.phi[k] * Complex64::new(eps[k], 0.0);
        let d = vnorm(&(&m * &model.phi[k] - want)) / vnorm(&model.phi[k]);
        r.push("m_phi", Index::N(k), d, tol_value);
        let eta_ref = &model.theta * &model.phi[k];
        r.push("eta_theta_phi", Index::N(k), rel(model.eta[k].clone(), &eta_ref), tol_value);
        let dev = (0..n)
            .map(|j| {
                let v = model.phi[k].dotc(&model.eta[j]);
                (v - if j == k { 1.0 } else { 0.0 }).norm()
            })
            .fold(0.0, f64::max);
        r.push("biorthogonality", Index::N(k), dev, tol_value);
        let crypto: DMatrix<Complex64> = m.adjoint() * &model.theta - &model.theta * &m;
        r.push("crypto_hermiticity", Index::N(k), vnorm(&(crypto * &model.phi[k])) / vnorm(&model.phi[k]), tol_value);
    }
    match m.clone().schur().eigenvalues() {
        Some(ev) => {
            let mut got: Vec<Complex64> = ev.iter().copied().collect();
            got.sort_by(|a, b| a.re.partial_cmp(&b.re).expect("finite eigenvalues"));
            for (k, z) in got.iter().enumerate() {
                r.push("spectrum", Index::N(k), (z - Complex64::new(eps[k], 0.0)).norm(), tol_value);
            }
        }
        None => r.fail("spectrum", "Schur decomposition did not converge"),
    }
    r.meta("n", n);
    r.finish()
}
