use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float};
use zetapade::nodes::*;
use zetapade::numerics::{cabs, powers, PrecisionContext, Polynomial};
use zetapade::pade::*;
use zetapade::specialfn::HurwitzParams;
use zetapade::Error;

fn prec() -> PrecisionContext {
    PrecisionContext::default()
}

fn dist(a: &Complex, b: &Complex) -> f64 {
    cabs(&Complex::with_val(a.prec().0, a - b)).to_f64()
}

fn rel(a: &Complex, b: &Complex) -> f64 {
    dist(a, b) / cabs(b).to_f64()
}

fn nodes_123(p: &PrecisionContext) -> NodeSet {
    NodeSet::from_alpha(1, vec![p.real(1.0), p.real(2.0), p.real(3.0)], p.bits)
}

fn poly() -> DensitySpec {
    build_density(DensityKind::Poly { coeffs: vec![1.0, 1.0] }, 1.0, 3.0).unwrap()
}

fn hurwitz_run(s: f64, n: usize, p: &PrecisionContext) -> PadeRun {
    let hp = HurwitzParams::from_f64(s, 0.0, p).unwrap();
    run_pade(&poly(), n, hurwitz_provider(&hp), p).unwrap()
}

fn rational_data(ns: &NodeSet, p: &PrecisionContext) -> Vec<Complex> {
    (0..ns.len())
        .map(|j| {
            let a = ns.alpha_c(j);
            Complex::with_val(p.bits, &a + 1u32) / Complex::with_val(p.bits, &a + 2u32)
        })
        .collect()
}

#[test]
fn n1_dimensions_and_recovery() {
    let p = prec();
    let ns = nodes_123(&p);
    let f = rational_data(&ns, &p);
    let sys = assemble_system(&ns, &f);
    assert_eq!((sys.m.rows, sys.m.cols), (3, 3));
    assert!(check_nd(&sys, &p).nd_holds);
    let pp = solve_pade(&sys, &p).unwrap();
    // f = (α+1)/(α+2): Q̂ = α + 2, P̂ = α + 1
    assert!(dist(&pp.qhat.coeff(0), &p.complex(2.0, 0.0)) < 1e-60);
    assert!(dist(&pp.phat.coeff(0), &p.complex(1.0, 0.0)) < 1e-60);
    assert!(dist(&pp.phat.coeff(1), &p.complex(1.0, 0.0)) < 1e-60);
    assert!(pp.normalized_residual(&f) < 1e-100);
}

#[test]
fn rows_match_direct_evaluation() {
    let p = prec();
    let ns = quantile_nodes(&poly(), 4, &p).unwrap();
    let f = rational_data(&ns, &p);
    let sys = assemble_system(&ns, &f);
    let n = ns.n;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let x: Vec<Complex> = (0..2 * n + 1).map(|_| p.complex(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    for j in 0..ns.len() {
        let mut lhs = Complex::new(p.bits);
        for (k, xk) in x.iter().enumerate() {
            lhs += Complex::with_val(p.bits, sys.m.get(j, k) * xk);
        }
        lhs -= &sys.b[j];
        // (Σ q_k α^k + α^n) f − Σ p_k α^k
        let pw = powers(&ns.alpha_c(j), n);
        let mut q = Complex::with_val(p.bits, &pw[n]);
        for k in 0..n {
            q += Complex::with_val(p.bits, &pw[k] * &x[k]);
        }
        let mut pv = Complex::new(p.bits);
        for k in 0..=n {
            pv += Complex::with_val(p.bits, &pw[k] * &x[n + k]);
        }
        let direct = Complex::with_val(p.bits, &q * &f[j]) - pv;
        assert!(dist(&lhs, &direct) < 1e-100, "row {j}");
    }
}

#[test]
fn coincident_rows_fail_nd() {
    let p = prec();
    let ns = NodeSet::from_alpha(1, vec![p.real(1.0), p.real(1.0), p.real(3.0)], p.bits);
    let f = vec![p.complex(0.5, 0.0), p.complex(0.5, 0.0), p.complex(0.2, 0.0)];
    let sys = assemble_system(&ns, &f);
    assert!(!check_nd(&sys, &p).nd_holds);
    assert!(matches!(solve_pade(&sys, &p), Err(Error::Degenerate)));
}

#[test]
fn zero_data_fails_nd() {
    let p = prec();
    let ns = nodes_123(&p);
    let sys = assemble_system(&ns, &[p.zero(), p.zero(), p.zero()]);
    assert!(!check_nd(&sys, &p).nd_holds);
}

#[test]
fn scaling_data_scales_p_only() {
    let p = prec();
    let ns = NodeSet::from_alpha(2, (0..5).map(|j| p.real(1.0 + 0.4 * j as f64)).collect(), p.bits);
    let f: Vec<Complex> = (0..5).map(|j| p.complex(1.0 / (1.0 + (j * j) as f64), 0.1 * j as f64)).collect();
    let seven = p.complex(7.0, 0.0);
    let f7: Vec<Complex> = f.iter().map(|x| Complex::with_val(p.bits, x * &seven)).collect();
    let a = solve_pade(&assemble_system(&ns, &f), &p).unwrap();
    let b = solve_pade(&assemble_system(&ns, &f7), &p).unwrap();
    for k in 0..=2 {
        assert!(dist(&a.qhat.coeff(k), &b.qhat.coeff(k)) < 1e-80);
        let p7 = Complex::with_val(p.bits, a.phat.coeff(k) * &seven);
        assert!(dist(&p7, &b.phat.coeff(k)) < 1e-80);
    }
}

#[test]
fn hurwitz_system_is_nondegenerate() {
    let p = prec();
    let hp = HurwitzParams::from_f64(2.0, 0.0, &p).unwrap();
    let ns = quantile_nodes(&poly(), 8, &p).unwrap();
    let f = hurwitz_values(&hp, &ns, &p).unwrap();
    let nd = check_nd(&assemble_system(&ns, &f), &p);
    assert!(nd.nd_holds, "{nd:?}");
    assert!(nd.log_abs_det.is_finite());
}

#[test]
fn weights_reassemble() {
    let p = prec();
    let ns = nodes_123(&p);
    let f = vec![p.complex(1.0, 0.5), p.complex(-2.0, 0.0), p.complex(0.3, 0.0)];
    let ws = WeightSet::new(&ns, &f);
    // ω′ at 1, 2, 3 with n = 1: 2, −1, 2
    let expect = [p.complex(0.5, 0.25), p.complex(2.0, 0.0), p.complex(0.15, 0.0)];
    for (j, e) in expect.iter().enumerate() {
        assert!(dist(&ws.w(j), e) < 1e-70);
    }
}

#[test]
fn n1_orthogonality_by_hand() {
    let p = prec();
    let ns = NodeSet::from_alpha(1, vec![p.real(1.0), p.real(2.0), p.real(4.0)], p.bits);
    let f: Vec<Complex> = [1.0, 2.0, 4.0].iter().map(|a| p.complex(1.0 / (a * a + 3.0), 0.0)).collect();
    let pp = solve_pade(&assemble_system(&ns, &f), &p).unwrap();
    let ws = WeightSet::new(&ns, &f);
    let rep = discrete_orthogonality_check(&pp, &ws, &ns);
    let q0 = pp.qhat.coeff(0).real().to_f64();
    // ω′: (1−2)(1−4) = 3, (2−1)(2−4) = −2, (4−1)(4−2) = 6
    let hand = (1.0 + q0) * 0.25 / 3.0 + (2.0 + q0) / 7.0 / -2.0 + (4.0 + q0) / 19.0 / 6.0;
    assert!(hand.abs() < 1e-14);
    assert!(rep.max_lemma < 1e-60);
    assert!(rep.per_degree[1] > 1e-6);
}

#[test]
fn hurwitz_orthogonality() {
    let p = prec();
    let run = hurwitz_run(2.0, 6, &p);
    let rep = discrete_orthogonality_check(&run.pp, &run.ws, &run.ns);
    assert!(rep.max_lemma <= 1e3 * run.prec.tol_rel(), "{rep:?}");
    assert_eq!(rep.per_degree.len(), 7);
}

#[test]
fn barycentric_identity_and_interpolation() {
    let p = prec();
    let run = hurwitz_run(2.0, 6, &p);
    let q = &run.prec;
    let alpha: Vec<Complex> = (0..run.ns.len()).map(|j| run.ns.alpha_c(j)).collect();
    let interp = Polynomial::interpolate(&alpha, &run.f, q.bits);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let z = q.complex(rng.gen_range(-1.0..5.0), rng.gen_range(-2.0..2.0));
        let r = eval_wn_ln(&run.ws, &run.ns, &z, q).unwrap();
        assert!(r.residual <= 1e3 * q.tol_rel(), "{}", r.residual);
        assert!(rel(&r.l_tilde, &interp.eval(&z)) <= 1e3 * q.tol_rel());
    }
    let bump = Float::with_val(q.bits, Float::i_exp(1, -300));
    for j in [0, 3, 12] {
        let z = Complex::with_val(q.bits, &alpha[j] + &bump);
        let r = eval_wn_ln(&run.ws, &run.ns, &z, q).unwrap();
        assert!(rel(&r.l_tilde, &run.f[j]) < 1e-60, "j={j}");
    }
    assert!(matches!(eval_wn_ln(&run.ws, &run.ns, &alpha[4], q), Err(Error::AtNode(4))));
}

#[test]
fn polynomial_data_is_reproduced() {
    let p = prec();
    let n = 4;
    let ns = quantile_nodes(&poly(), n, &p).unwrap();
    let c: Vec<Complex> = (0..=2 * n).map(|k| p.complex(1.0 / (k + 1) as f64, (k as f64 - 3.0) / 7.0)).collect();
    let g = Polynomial::new(c, p.bits);
    let f: Vec<Complex> = (0..ns.len()).map(|j| g.eval(&ns.alpha_c(j))).collect();
    let ws = WeightSet::new(&ns, &f);
    for z in [p.complex(4.0, 0.0), p.complex(-2.0, 1.0), p.complex(2.0, 0.5)] {
        let r = eval_wn_ln(&ws, &ns, &z, &p).unwrap();
        assert!(rel(&r.l_tilde, &g.eval(&z)) <= 1e3 * p.tol_rel());
    }
}

#[test]
fn hermite_walsh_constant_and_containment() {
    let p = PrecisionContext::new(192).unwrap();
    let ns = NodeSet::from_alpha(2, (0..5).map(|j| p.real(1.0 + 0.5 * j as f64)).collect(), p.bits);
    let c = default_contour(1.0, 3.0, 0.25, &p);
    let v = hermite_walsh_eval(&ns, |_| Ok(p.one()), &c, &p.complex(4.0, 0.0), &p).unwrap();
    assert!(dist(&v, &p.one()) < 1e-40);
    let r = hermite_walsh_eval(&ns, |_| Ok(p.one()), &c, &p.complex(2.0, 0.3), &p);
    assert!(matches!(r, Err(Error::ContourInvalid(_))));
}

#[test]
fn hermite_walsh_matches_lagrange_form() {
    let p = prec();
    let run = hurwitz_run(2.0, 6, &p);
    let q = &run.prec;
    let hp = HurwitzParams::from_f64(2.0, 0.0, q).unwrap();
    let n = Complex::with_val(q.bits, run.ns.n as u32);
    let g = |xi: &Complex| zetapade::specialfn::hurwitz_zeta(&hp, &Complex::with_val(q.bits, xi * &n), q);
    let c = default_contour(1.0, 3.0, 0.25, q);
    let z = q.complex(4.0, 0.0);
    let hw = hermite_walsh_eval(&run.ns, g, &c, &z, q).unwrap();
    let l = eval_wn_ln(&run.ws, &run.ns, &z, q).unwrap().l_tilde;
    assert!(rel(&hw, &l) < 1e-20, "{}", rel(&hw, &l));
}

fn y_setup(n: usize, p: &PrecisionContext) -> YEvaluator {
    let alpha: Vec<Float> = (0..=2 * n).map(|j| p.real(1.0 + j as f64 / n as f64)).collect();
    let ns = NodeSet::from_alpha(n, alpha, p.bits);
    let f: Vec<Complex> = (0..ns.len())
        .map(|j| {
            let a = ns.a(j).to_f64();
            p.complex(1.0 / (a * a + 1.0), 1.0 / (a + 5.0))
        })
        .collect();
    let pp = solve_pade(&assemble_system(&ns, &f), p).unwrap();
    build_y(&pp, &WeightSet::new(&ns, &f), &ns, p).unwrap()
}

#[test]
fn y_residues() {
    let p = PrecisionContext::new(192).unwrap();
    assert!(y_setup(3, &p).residue_check(&p).unwrap() < 1e-20);
    let p = prec();
    assert!(y_setup(4, &p).residue_check(&p).unwrap() < 1e-20);
}

#[test]
fn y_normalization_decays() {
    let p = prec();
    let y = y_setup(3, &p);
    let (_, slope) = y.normalization_slope(&[1e3, 1e4, 1e5], 0.7).unwrap();
    assert!((slope + 1.0).abs() < 0.1, "{slope}");
}

#[test]
fn y_determinant_is_finite() {
    let p = prec();
    let y = y_setup(4, &p);
    let d = y.det(&p.complex(40.0, 7.0)).unwrap();
    assert!(cabs(&d).is_finite());
}

#[test]
fn hurwitz_tail_collapses() {
    let p = prec();
    let run = hurwitz_run(2.0, 6, &p);
    let rec = recover_p_interpolant(&run.pp, &run.sys, 1e-20).unwrap();
    assert!(rec.tail_ratio <= 1e-20);
    assert!(rec.p_mismatch <= 1e-20);
    assert!(matches!(recover_p_interpolant(&run.pp, &run.sys, -1.0), Err(Error::DegreeCollapseFailed(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn denominator_is_permutation_invariant(seed in any::<u64>()) {
        let p = prec();
        let ns = quantile_nodes(&poly(), 4, &p).unwrap();
        let hp = HurwitzParams::from_f64(2.0, 0.0, &p).unwrap();
        let f = hurwitz_values(&hp, &ns, &p).unwrap();
        let mut perm: Vec<usize> = (0..ns.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let nsp = ns.permuted(&perm);
        let fp: Vec<Complex> = perm.iter().map(|&i| f[i].clone()).collect();
        let a = solve_pade(&assemble_system(&ns, &f), &p).unwrap();
        let b = solve_pade(&assemble_system(&nsp, &fp), &p).unwrap();
        for k in 0..=4 {
            prop_assert!(dist(&a.qhat.coeff(k), &b.qhat.coeff(k)) <= 1e3 * p.tol_rel());
        }
    }
}
