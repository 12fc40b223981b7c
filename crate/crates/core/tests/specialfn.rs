use proptest::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};
use zetapade::numerics::{cabs, PrecisionContext};
use zetapade::specialfn::airy::{asymptotic_any_arg, maclaurin};
use zetapade::specialfn::hurwitz::bernoulli;
use zetapade::specialfn::*;
use zetapade::Error;

fn prec() -> PrecisionContext {
    PrecisionContext::default()
}

fn rel(a: &Complex, b: &Complex) -> f64 {
    let d = cabs(&Complex::with_val(a.prec().0, a - b));
    (d / cabs(b)).to_f64()
}

fn pi(p: &PrecisionContext) -> Float {
    Float::with_val(p.bits, Constant::Pi)
}

#[test]
fn bernoulli_values() {
    assert_eq!(bernoulli(1), Rational::from((-1, 2)));
    assert_eq!(bernoulli(2), Rational::from((1, 6)));
    assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
    assert_eq!(bernoulli(13), Rational::new());
}

#[test]
fn zeta_two_at_one_and_two() {
    let p = prec();
    let hp = HurwitzParams::from_f64(2.0, 0.0, &p).unwrap();
    let z2 = Float::with_val(p.bits, pi(&p).square_ref()) / 6u32;
    let v1 = hurwitz_zeta(&hp, &p.complex(1.0, 0.0), &p).unwrap();
    assert!(rel(&v1, &Complex::with_val(p.bits, &z2)) <= 10.0 * p.tol_rel());
    let v2 = hurwitz_zeta(&hp, &p.complex(2.0, 0.0), &p).unwrap();
    assert!(rel(&v2, &Complex::with_val(p.bits, z2 - 1u32)) <= 10.0 * p.tol_rel());
}

#[test]
fn riemann_zeta_oracle() {
    let p = prec();
    for s in [1.5, 2.5, 3.0, 7.25] {
        let hp = HurwitzParams::from_f64(s, 0.0, &p).unwrap();
        let v = hurwitz_zeta(&hp, &p.complex(1.0, 0.0), &p).unwrap();
        let oracle = Float::with_val(p.bits, s).zeta();
        assert!(rel(&v, &Complex::with_val(p.bits, &oracle)) <= 10.0 * p.tol_rel(), "s={s}");
        // ζ(s, 1/2) = (2^s − 1) ζ(s)
        let half = hurwitz_zeta(&hp, &p.complex(0.5, 0.0), &p).unwrap();
        let expect = (Float::with_val(p.bits, 2).pow(Float::with_val(p.bits, s)) - 1u32) * oracle;
        assert!(rel(&half, &Complex::with_val(p.bits, expect)) <= 10.0 * p.tol_rel(), "s={s}");
    }
}

#[test]
fn hurwitz_domain_errors() {
    let p = prec();
    assert!(HurwitzParams::from_f64(1.0, 0.0, &p).is_err());
    assert!(HurwitzParams::from_f64(0.5, 3.0, &p).is_err());
    let hp = HurwitzParams::from_f64(2.0, 0.0, &p).unwrap();
    assert!(matches!(hurwitz_zeta(&hp, &p.complex(0.0, 1.0), &p), Err(Error::DomainError(_))));
    assert!(matches!(hurwitz_zeta(&hp, &p.complex(-2.0, 0.0), &p), Err(Error::DomainError(_))));
}

#[test]
fn large_argument_size() {
    let p = prec();
    let hp = HurwitzParams::from_f64(3.0, 0.0, &p).unwrap();
    let v = hurwitz_zeta(&hp, &p.complex(1e6, 0.0), &p).unwrap();
    let m = cabs(&v).to_f64();
    // ζ(3, a) = a^{−2}/2 + a^{−3}/2 + O(a^{−4})
    assert!((m / 5e-13 - 1.0).abs() < 2e-6, "{m}");
    assert!(m <= 1e-12);
}

#[test]
fn bound_exponent() {
    let p = prec();
    let n_list = [8, 16, 32, 64];
    for (s, expect) in [(2.0, -1.0), (4.0, -3.0)] {
        let hp = HurwitzParams::from_f64(s, 0.0, &p).unwrap();
        let (slope, _) = hurwitz_bound_check(&hp, 1.0, 3.0, &n_list, &p).unwrap();
        assert!((slope - expect).abs() <= 0.1, "s={s}: {slope}");
    }
    let hp = HurwitzParams::from_f64(2.0, 0.0, &p).unwrap();
    assert!(matches!(hurwitz_bound_check(&hp, 1.0, 3.0, &[8], &p), Err(Error::DegenerateFit(_))));
}

#[test]
fn airy_at_origin() {
    let p = prec();
    let (a, d) = airy_ai(&p.zero(), &p).unwrap();
    let b = p.bits;
    let g23 = Float::with_val(b, 2) / 3u32;
    let g13 = Float::with_val(b, 1) / 3u32;
    let ai0 = Float::with_val(b, 3).pow(-Float::with_val(b, &g23)) / g23.gamma();
    let aip0 = -(Float::with_val(b, 3).pow(-Float::with_val(b, &g13)) / g13.gamma());
    assert!(rel(&a, &Complex::with_val(b, ai0)) < 1e3 * p.tol_rel());
    assert!(rel(&d, &Complex::with_val(b, aip0)) < 1e3 * p.tol_rel());
    assert!((a.real().to_f64() - 0.355_028_053_887_817_2).abs() < 1e-15);
    assert!((d.real().to_f64() + 0.258_819_403_792_806_8).abs() < 1e-15);
}

fn ai(z: &Complex, p: &PrecisionContext) -> Complex {
    airy_ai(z, p).unwrap().0
}

#[test]
fn derivative_matches_central_difference() {
    let p = prec();
    let h = Float::with_val(p.bits, Float::i_exp(1, -(p.bits as i32) / 4));
    for z in [p.complex(1.0, 0.0), p.complex(-2.0, 1.5), p.complex(3.0, -4.0)] {
        let zp = Complex::with_val(p.bits, &z + &h);
        let zm = Complex::with_val(p.bits, &z - &h);
        let fd = Complex::with_val(p.bits, ai(&zp, &p) - ai(&zm, &p)) / Complex::with_val(p.bits, &h * 2u32);
        let (_, d) = airy_ai(&z, &p).unwrap();
        assert!(rel(&fd, &d) < 1e4 * p.tol_rel());
    }
}

#[test]
fn large_real_leading_term() {
    let p = prec();
    let (a, _) = airy_ai(&p.complex(30.0, 0.0), &p).unwrap();
    let x: f64 = 30.0;
    let lead = (-(2.0 / 3.0) * x.powf(1.5)).exp() / (2.0 * std::f64::consts::PI.sqrt() * x.powf(0.25));
    assert!((a.real().to_f64() / lead - 1.0).abs() < 0.01);
}

#[test]
fn series_and_asymptotic_agree_at_the_switch_radius() {
    let p = prec();
    let r0 = airy_switch_radius(p.bits);
    for &theta in &[0.3, 1.9, 2.5, -2.9, -1.0, 0.0] {
        let z = Complex::with_val(p.bits, (r0 * f64::cos(theta), r0 * f64::sin(theta)));
        let (a1, d1) = maclaurin(&z, &p);
        let (a2, d2) = asymptotic_any_arg(&z, &p).unwrap();
        assert!(rel(&a2, &a1) < 1e3 * p.tol_rel(), "theta {theta}");
        assert!(rel(&d2, &d1) < 1e3 * p.tol_rel(), "theta {theta}");
    }
}

#[test]
fn principal_branch_conventions() {
    let p = prec();
    assert!(principal_log(&p.complex(1.0, 0.0), Side::Principal).unwrap().is_zero());
    let half_pi_i = Complex::with_val(p.bits, (0, pi(&p) / 2u32));
    assert!(rel(&principal_log(&p.complex(0.0, 1.0), Side::Principal).unwrap(), &half_pi_i) < 1e-100);
    assert!(matches!(principal_log(&p.zero(), Side::Upper), Err(Error::DomainError(_))));
    let up = principal_pow_ratio(&p.complex(-1.0, 0.0), 1, 2, Side::Upper).unwrap();
    assert!(rel(&up, &p.complex(0.0, 1.0)) < 1e-100);
    let down = principal_pow_ratio(&p.complex(-1.0, 0.0), 1, 2, Side::Lower).unwrap();
    assert!(rel(&down, &p.complex(0.0, -1.0)) < 1e-100);
    let neg_zero = Complex::with_val(p.bits, (-1.0, -0.0));
    assert!(principal_log(&neg_zero, Side::Principal).unwrap().imag().is_sign_positive());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hurwitz_shift_identity(s_re in 1.2f64..6.0, s_im in -5.0f64..5.0, a_re in 1.0f64..100.0, a_im in -20.0f64..20.0) {
        let p = prec();
        let hp = HurwitzParams::from_f64(s_re, s_im, &p).unwrap();
        let a = p.complex(a_re, a_im);
        let a1 = Complex::with_val(p.bits, &a + 1u32);
        let lhs = Complex::with_val(p.bits, hurwitz_zeta(&hp, &a, &p).unwrap() - hurwitz_zeta(&hp, &a1, &p).unwrap());
        let neg_s = Complex::with_val(p.bits, -&hp.s);
        let rhs = Complex::with_val(p.bits, principal_log(&a, Side::Principal).unwrap() * neg_s).exp();
        prop_assert!(rel(&lhs, &rhs) <= 1e2 * p.tol_rel());
    }

    #[test]
    fn airy_ode_residual(r in 0.0f64..45.0, th in -3.1f64..3.1) {
        let p = prec();
        let z = p.from_c64(num_complex::Complex64::from_polar(r, th));
        let h = Float::with_val(p.bits, Float::i_exp(1, -(p.bits as i32) / 4));
        let zp = Complex::with_val(p.bits, &z + &h);
        let zm = Complex::with_val(p.bits, &z - &h);
        let f0 = ai(&z, &p);
        let second = (ai(&zp, &p) - Complex::with_val(p.bits, &f0 * 2u32) + ai(&zm, &p)) / Complex::with_val(p.bits, h.square_ref());
        let res = cabs(&Complex::with_val(p.bits, second - Complex::with_val(p.bits, &z * &f0)));
        let scale = cabs(&f0).to_f64() * (1.0 + r);
        prop_assert!(res.to_f64() <= 1e4 * p.tol_rel() * scale);
    }

    #[test]
    fn quarter_power_round_trip(re in -10.0f64..10.0, im in -10.0f64..10.0) {
        prop_assume!(im.abs() > 1e-9 || re > 0.0);
        let p = prec();
        let z = p.complex(re, im);
        let q = principal_pow_ratio(&z, 1, 4, Side::Principal).unwrap();
        let back = Complex::with_val(p.bits, q.square_ref()).square();
        prop_assert!(rel(&back, &z) < 1e-100);
    }
}
