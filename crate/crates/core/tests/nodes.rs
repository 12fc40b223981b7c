use num_complex::Complex64;
use proptest::prelude::*;
use rug::{Complex, Float};
use zetapade::nodes::checks::{log_potential_mp, omega_prime_asymptotic_gap, second_difference_diagnostic};
use zetapade::nodes::field::clog;
use zetapade::nodes::*;
use zetapade::numerics::{gauss_legendre, PrecisionContext};
use zetapade::specialfn::Side;
use zetapade::Error;

fn prec() -> PrecisionContext {
    PrecisionContext::default()
}

fn uniform() -> DensitySpec {
    build_density(DensityKind::Uniform, 1.0, 3.0).unwrap()
}

fn poly() -> DensitySpec {
    build_density(DensityKind::Poly { coeffs: vec![1.0, 1.0] }, 1.0, 3.0).unwrap()
}

#[test]
fn density_levels_and_normalization() {
    let d = uniform();
    assert_eq!(d.kappa(2.0), 1.0);
    assert_eq!(build_density(DensityKind::Uniform, 1.0, 2.0).unwrap().kappa(1.5), 2.0);
    let d = poly();
    assert!((d.normalization - 1.0 / 3.0).abs() < 1e-15);
    assert!((d.cdf(3.0) - 2.0).abs() < 1e-14);
    for d in shipped_densities() {
        let b = Float::with_val(256, d.b);
        assert!((d.cdf_mp(&b) - 2u32).abs().to_f64() < 1e-70, "{}", d.label());
        assert!(d.kappa_min > 0.0 && d.kappa_min <= d.kappa_max);
    }
}

#[test]
fn density_rejections() {
    let r = build_density(DensityKind::Poly { coeffs: vec![-2.0, 1.0] }, 1.0, 3.0);
    assert!(matches!(r, Err(Error::NonPositiveDensity(_))));
    assert!(build_density(DensityKind::Uniform, 0.0, 1.0).is_err());
    assert!(build_density(DensityKind::Uniform, 2.0, 1.0).is_err());
    let r = build_density(DensityKind::CosineBump { center: 2.0, width: 1.0, base: 0.5 }, 1.0, 3.0);
    assert!(matches!(r, Err(Error::NonPositiveDensity(_))));
}

#[test]
fn uniform_quantiles() {
    let p = prec();
    let ns = quantile_nodes(&uniform(), 2, &p).unwrap();
    assert_eq!(ns.alpha_f64(), vec![1.0, 1.5, 2.0, 2.5, 3.0]);
    for n in [3, 7, 16] {
        let (lo, hi) = spacing_check(&quantile_nodes(&uniform(), n, &p).unwrap());
        assert!((lo - 1.0).abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
    }
}

#[test]
fn poly_quantiles_against_independent_quadrature() {
    let p = prec();
    let d = poly();
    let n = 12;
    let ns = quantile_nodes(&d, n, &p).unwrap();
    assert_eq!(ns.len(), 2 * n + 1);
    assert_eq!(ns.alpha[0], 1.0);
    assert_eq!(ns.alpha[2 * n], 3.0);
    for (j, x) in ns.alpha.iter().enumerate().skip(1) {
        let f = gauss_legendre(|t| Complex::with_val(p.bits, Float::with_val(p.bits, t + 1u32) / 3u32), &p.real(1.0), x, 4, &p).unwrap();
        let target = Float::with_val(p.bits, j as u32) / n as u32;
        let r = Float::with_val(p.bits, f.real() - &target).abs().to_f64();
        assert!(r <= 10.0 * p.tol_rel(), "j={j}: {r}");
    }
}

#[test]
fn spacing_bounds_from_density_extremes() {
    let p = prec();
    let eps = 1e-3;
    for d in shipped_densities() {
        for n in [16, 32, 64] {
            let (lo, hi) = spacing_check(&quantile_nodes(&d, n, &p).unwrap());
            assert!(lo >= 1.0 / d.kappa_max - eps && hi <= 1.0 / d.kappa_min + eps, "{} n={n}: {lo} {hi}", d.label());
        }
    }
}

#[test]
fn increasing_density_has_widest_gap_on_the_left() {
    let p = prec();
    let ns = quantile_nodes(&poly(), 16, &p).unwrap();
    let gaps: Vec<f64> = ns.alpha.windows(2).map(|w| Float::with_val(p.bits, &w[1] - &w[0]).to_f64()).collect();
    let imax = gaps.iter().enumerate().fold(0, |b, (i, g)| if *g > gaps[b] { i } else { b });
    assert_eq!(imax, 0);
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn second_differences_are_bounded() {
    let p = prec();
    let d = build_density(DensityKind::CosineBump { center: 2.0, width: 1.0, base: 1.5 }, 1.0, 3.0).unwrap();
    let vals: Vec<f64> = [16, 32, 64].iter().map(|&n| second_difference_diagnostic(&quantile_nodes(&d, n, &p).unwrap())).collect();
    assert!(vals.iter().all(|v| v.is_finite()));
    assert!(vals[2] <= 2.0 * vals[0], "{vals:?}");
}

#[test]
fn riemann_sums() {
    let p = prec();
    let fit = riemann_sum_check(&uniform(), &[4, 8, 16], |_| 1.0, &p).unwrap();
    for (n, e) in &fit.points {
        assert!((e - 1.0 / n).abs() < 1e-12);
    }
    // (1/n)Σ_{j=0}^{2n}(1 + j/n) − ∫₁³ x dx = 2/n
    let fit = riemann_sum_check(&uniform(), &[4, 8, 16, 32], |x| x, &p).unwrap();
    for (n, e) in &fit.points {
        assert!((e - 2.0 / n).abs() < 1e-12, "n={n}: {e}");
    }
    let fit = riemann_sum_check(&poly(), &[8, 16, 32, 64], f64::sin, &p).unwrap();
    assert!((-1.2..=-0.8).contains(&fit.slope), "{}", fit.slope);
}

#[test]
fn omega_log_small_cases() {
    let p = prec();
    let ns = quantile_nodes(&uniform(), 1, &p).unwrap();
    let l = omega_log_eval(&ns, &p.complex(4.0, 0.0)).unwrap();
    assert!((l.real().to_f64() - 6f64.ln()).abs() < 1e-15);
    assert!(matches!(omega_log_eval(&ns, &p.complex(2.0, 0.0)), Err(Error::OnCut)));

    let ns = quantile_nodes(&poly(), 5, &p).unwrap();
    let z = p.complex(4.0, 0.0);
    let mut prod = Float::with_val(p.bits, 1);
    for a in &ns.alpha {
        prod *= Float::with_val(p.bits, 4.0 - a);
    }
    let l = omega_log_eval(&ns, &z).unwrap();
    assert!(Float::with_val(p.bits, l.real() - prod.ln()).abs().to_f64() < 1e-100);
    assert!(l.imag().is_zero());
}

#[test]
fn omega_log_is_continuous_along_an_arc() {
    let p = prec();
    let ns = quantile_nodes(&uniform(), 4, &p).unwrap();
    // Upper half circle around [1, 3] from 3.5 to 0.5; Im log Ω grows from 0 to 9π.
    let mut prev = 0.0;
    for k in 0..=200 {
        let th = std::f64::consts::PI * k as f64 / 200.0;
        let z = p.from_c64(Complex64::new(2.0, 0.0) + Complex64::from_polar(1.5, th));
        let im = omega_log_eval(&ns, &z).unwrap().imag().to_f64();
        assert!((im - prev).abs() < 0.5, "k={k}");
        prev = im;
    }
    assert!((prev - 9.0 * std::f64::consts::PI).abs() < 1e-10);
}

#[test]
fn log_potential_rates() {
    let p = prec();
    let d = uniform();
    // ∫₁³ log(4 − t) dt = 3 log 3 − 2
    let pot = log_potential_mp(&d, &p.complex(4.0, 0.0), &p).unwrap().to_f64();
    assert!((pot - (3.0 * 3f64.ln() - 2.0)).abs() < 1e-15);
    let n_list = [8, 16, 32, 64];
    for z in [p.complex(4.0, 0.0), p.complex(2.0, 1.0)] {
        let fit = logpot_check(&d, &n_list, &z, &p).unwrap();
        assert!(fit.slope <= -0.9, "{}", fit.slope);
    }
}

#[test]
fn omega_prime_values() {
    let p = prec();
    let ns = quantile_nodes(&uniform(), 1, &p).unwrap();
    let (l, s) = omega_prime(&ns, 1);
    assert!(l.to_f64().abs() < 1e-15);
    assert_eq!(s, p.complex(-1.0, 0.0));
    let ns = quantile_nodes(&uniform(), 3, &p).unwrap();
    let (l, _) = omega_prime(&ns, 3);
    // α = 1 + j/3 around α₃ = 2: Π(k/3) over k = ±1, ±2, ±3 times 3⁶
    let expect: f64 = [1.0f64, 2.0, 3.0].iter().map(|k| (k * k).ln()).sum::<f64>();
    assert!((l.to_f64() - expect).abs() < 1e-14);
}

#[test]
fn omega_prime_log_gap_shrinks() {
    let p = prec();
    for d in shipped_densities() {
        let fe = FieldEvaluator::with_default_grid(d.clone());
        let gaps: Vec<f64> = [8, 16, 32, 64]
            .iter()
            .map(|&n| {
                let g = omega_prime_asymptotic_gap(&quantile_nodes(&d, n, &p).unwrap(), &fe);
                g / ((n as f64).ln() / n as f64)
            })
            .collect();
        let max = gaps.iter().cloned().fold(0.0, f64::max);
        assert!(max < 10.0, "{}: {gaps:?}", d.label());
    }
}

#[test]
fn external_field_examples() {
    let f = FieldEvaluator::with_default_grid(uniform());
    assert!((f.external_field(2.0) - 4.0).abs() < 1e-12);
    for &x in &[0.1, 0.37, 0.8] {
        assert!((f.external_field(1.0 + x) - f.external_field(3.0 - x)).abs() < 1e-12);
    }
    let v = f.analytic_field(Complex64::new(2.0, 1e-8)).unwrap();
    assert!((v.re - f.external_field(2.0)).abs() < 1e-6);
    assert!(matches!(f.analytic_field(Complex64::new(2.0, 0.0)), Err(Error::OnCut)));
    // V(x) = −2[(x−1)log(x−1) + (3−x)log(3−x) − 2] on the uniform density
    for x in [1.3, 2.2, 2.9] {
        let exact = -2.0 * ((x - 1.0) * (x - 1.0f64).ln() + (3.0 - x) * (3.0 - x).ln() - 2.0);
        assert!((f.external_field(x) - exact).abs() < 1e-12, "x={x}");
    }
}

#[test]
fn cell_moments_match_quadrature() {
    for &w in &[Complex64::new(0.05, 0.02), Complex64::new(-0.041, 0.0), Complex64::new(0.0, -0.05)] {
        let h = 0.01;
        let (a0, a1) = log_cell_moments(w, h, Side::Upper);
        let m = 20000;
        let (mut b0, mut b1) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for k in 0..m {
            let s = -0.5 * h + h * (k as f64 + 0.5) / m as f64;
            let l = clog(w - s, Side::Upper);
            b0 += l * h / m as f64;
            b1 += s * l * h / m as f64;
        }
        assert!((a0 - b0).norm() < 1e-10 && (a1 - b1).norm() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quantile_residuals(n in 1usize..=64, which in 0usize..3) {
        let p = prec();
        let d = shipped_densities().swap_remove(which);
        let ns = quantile_nodes(&d, n, &p).unwrap();
        prop_assert!(ns.alpha.windows(2).all(|w| w[0] < w[1]));
        for (j, x) in ns.alpha.iter().enumerate() {
            let w = Float::with_val(p.bits + 16, x);
            let r = (d.cdf_mp(&w) - Float::with_val(p.bits + 16, j as u32) / n as u32).abs();
            prop_assert!(r.to_f64() <= p.tol_rel());
        }
    }

    #[test]
    fn omega_prime_matches_brute_product(n in 1usize..=6, which in 0usize..3) {
        let p = prec();
        let d = shipped_densities().swap_remove(which);
        let ns = quantile_nodes(&d, n, &p).unwrap();
        for j in 0..ns.len() {
            let aj = ns.a(j);
            let mut prod = Float::with_val(p.bits, 1);
            for k in 0..ns.len() {
                if k != j {
                    prod *= Float::with_val(p.bits, &aj - ns.a(k));
                }
            }
            let (l, s) = omega_prime(&ns, j);
            let lb = Float::with_val(p.bits, prod.abs_ref()).ln();
            prop_assert!(Float::with_val(p.bits, &l - &lb).abs().to_f64() <= 1e2 * p.tol_rel());
            prop_assert_eq!(s.real().is_sign_negative(), prod.is_sign_negative());
        }
    }

    #[test]
    fn analytic_field_schwarz_symmetry(re in -2.0f64..6.0, im in 0.01f64..3.0) {
        let f = FieldEvaluator::with_default_grid(poly());
        let z = Complex64::new(re, im);
        let a = f.analytic_field(z).unwrap();
        let b = f.analytic_field(z.conj()).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-12 * (1.0 + a.norm()));
    }
}
