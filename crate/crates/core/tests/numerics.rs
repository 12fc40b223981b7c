use proptest::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};
use zetapade::nodes::{build_density, shipped_densities, DensityKind};
use zetapade::numerics::*;
use zetapade::Error;

fn prec() -> PrecisionContext {
    PrecisionContext::new(256).unwrap()
}

fn dist(a: &Complex, b: &Complex) -> f64 {
    cabs(&Complex::with_val(a.prec().0, a - b)).to_f64()
}

#[test]
fn precision_context_bounds() {
    assert!(matches!(PrecisionContext::new(64), Err(Error::Config(_))));
    let p = prec();
    assert_eq!(p.tol_rel(), 2f64.powi(-128));
    assert_eq!(PrecisionContext::default().bits, 384);
}

#[test]
fn identity_solve() {
    let p = prec();
    let m = DenseMatrix::identity(3, p.bits);
    let rhs: Vec<Complex> = (1..=3).map(|k| p.complex(k as f64, 0.0)).collect();
    let s = lu_solve(&m, &rhs, &p).unwrap();
    for (x, b) in s.solution.iter().zip(&rhs) {
        assert_eq!(x, b);
    }
    assert_eq!(s.log_abs_det, 0.0);
    assert!((s.cond_estimate - 1.0).abs() < 1e-12);
}

#[test]
fn diagonal_solve() {
    let p = prec();
    let mut m = DenseMatrix::zeros(2, 2, p.bits);
    m.set(0, 0, p.complex(2.0, 0.0));
    m.set(1, 1, p.complex(5.0, 0.0));
    let rhs = vec![p.complex(2.0, 0.0), p.complex(5.0, 0.0)];
    let s = lu_solve(&m, &rhs, &p).unwrap();
    assert_eq!(s.solution[0], p.one());
    assert_eq!(s.solution[1], p.one());
    assert!((s.log_abs_det - 10f64.ln()).abs() < 1e-14);
}

/// Exact solution of `H x = 1` for the Hilbert matrix by rational Gauss–Jordan elimination.
fn hilbert_exact(n: usize) -> Vec<Rational> {
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = (0..n).map(|j| Rational::from((1, (i + j + 1) as u32))).collect();
            row.push(Rational::from(1));
            row
        })
        .collect();
    for k in 0..n {
        let piv = a[k][k].clone();
        for v in a[k].iter_mut() {
            *v /= &piv;
        }
        for i in 0..n {
            if i != k {
                let f = a[i][k].clone();
                for j in 0..=n {
                    let t = Rational::from(&f * &a[k][j]);
                    a[i][j] -= t;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n].clone()).collect()
}

#[test]
fn hilbert_matches_rational_oracle() {
    let p = prec();
    let n = 6;
    let rows: Vec<Vec<Complex>> = (0..n)
        .map(|i| (0..n).map(|j| Complex::with_val(p.bits, Float::with_val(p.bits, 1) / (i + j + 1) as u32)).collect())
        .collect();
    let m = DenseMatrix::from_rows(rows);
    let s = lu_solve(&m, &vec![p.one(); n], &p).unwrap();
    let exact = hilbert_exact(n);
    let scale = exact.iter().map(|r| r.to_f64().abs()).fold(0.0, f64::max);
    for (x, e) in s.solution.iter().zip(&exact) {
        let ef = Float::with_val(p.bits, e);
        let err = Float::with_val(p.bits, x.real() - &ef).abs().to_f64();
        assert!(err <= s.cond_estimate * p.tol_rel() * scale, "{err}");
        assert!(x.imag().is_zero());
    }
    // det H₆ = 1/186313420339200000.
    assert!((s.log_abs_det + 186_313_420_339_200_000f64.ln()).abs() < 1e-12);
}

#[test]
fn duplicate_rows_are_singular() {
    let p = prec();
    let m = DenseMatrix::from_rows(vec![
        vec![p.complex(1.0, 0.0), p.complex(2.0, 1.0)],
        vec![p.complex(1.0, 0.0), p.complex(2.0, 1.0)],
    ]);
    let err = lu_solve(&m, &[p.one(), p.one()], &p).unwrap_err();
    assert!(matches!(err, Error::SingularMatrix { .. }));
}

#[test]
fn adjoint_solve_matches_conjugate_transpose() {
    let p = prec();
    let m = DenseMatrix::from_rows(vec![
        vec![p.complex(1.0, 2.0), p.complex(0.5, 0.0), p.complex(0.0, -1.0)],
        vec![p.complex(3.0, 0.0), p.complex(1.0, 1.0), p.complex(2.0, 0.0)],
        vec![p.complex(0.0, 1.0), p.complex(-1.0, 0.0), p.complex(4.0, 0.5)],
    ]);
    let lu = LuFactors::factor(&m, &p).unwrap();
    let b = vec![p.complex(1.0, 0.0), p.complex(0.0, 1.0), p.complex(2.0, -1.0)];
    let x = lu.solve_adjoint(&b);
    let mh = DenseMatrix { rows: 3, cols: 3, entries: (0..9).map(|k| m.get(k % 3, k / 3).clone().conj()).collect() };
    for (ri, bi) in mh.mul_vec(&x).iter().zip(&b) {
        assert!(dist(ri, bi) < 1e-70);
    }
}

#[test]
fn mat2_inverse_and_determinant() {
    let p = prec();
    let m = DenseMatrix::mat2(p.complex(1.0, 1.0), p.complex(2.0, 0.0), p.complex(0.0, 3.0), p.complex(4.0, -1.0));
    assert!(m.matmul(&m.inv2()).dist_to_identity().to_f64() < 1e-70);
    // (1+i)(4−i) − 6i = 5 − 3i
    assert!(dist(&m.det2(), &p.complex(5.0, -3.0)) < 1e-70);
}

#[test]
fn solves_are_deterministic() {
    let p = prec();
    let m = DenseMatrix::from_rows(
        (0..5).map(|i| (0..5).map(|j| p.complex(1.0 / (1.0 + (i * 5 + j) as f64), (i as f64 - j as f64) * 0.1)).collect()).collect(),
    );
    let rhs: Vec<Complex> = (0..5).map(|k| p.complex(k as f64, 1.0)).collect();
    let a = lu_solve(&m, &rhs, &p).unwrap();
    let b = lu_solve(&m, &rhs, &p).unwrap();
    assert_eq!(a.solution, b.solution);
    assert_eq!(a.log_abs_det, b.log_abs_det);
}

#[test]
fn gauss_legendre_basics() {
    let p = prec();
    let v = gauss_legendre(|x| Complex::with_val(p.bits, x), &p.real(0.0), &p.real(1.0), 4, &p).unwrap();
    assert!(dist(&v, &p.complex(0.5, 0.0)) < 1e-70);
    let f = |x: &Float| Complex::with_val(p.bits, 4u32 / (Float::with_val(p.bits, x.square_ref()) + 1u32));
    let v = gauss_legendre(f, &p.real(0.0), &p.real(1.0), 8, &p).unwrap();
    let pi = Complex::with_val(p.bits, Float::with_val(p.bits, Constant::Pi));
    assert!(dist(&v, &pi) < 1e3 * p.tol_rel());
}

#[test]
fn kappa_mass_is_two() {
    let p = prec();
    let mut ds = shipped_densities();
    ds.push(build_density(DensityKind::Uniform, 0.5, 4.0).unwrap());
    for d in ds {
        let v = gauss_legendre(|x| Complex::with_val(p.bits, d.kappa_mp(x)), &p.real(d.a), &p.real(d.b), 8, &p).unwrap();
        assert!(dist(&v, &p.complex(2.0, 0.0)) < 1e-30, "{}", d.label());
    }
}

#[test]
fn trapezoid_residues() {
    let p = prec();
    let c = Circle { center: p.zero(), radius: p.real(1.0) };
    let two_pi_i = Complex::with_val(p.bits, (0, p.pi() * 2u32));
    let v = contour_trapezoid(|z| Complex::with_val(p.bits, z.recip_ref()), &c, 8, &p).unwrap();
    assert!(dist(&v, &two_pi_i) < 1e-60);
    let v = contour_trapezoid(|z| z.clone(), &c, 8, &p).unwrap();
    assert!(dist(&v, &p.zero()) < 1e-60);
    let v = contour_trapezoid(|z| Complex::with_val(p.bits, z - 0.3).recip(), &c, 8, &p).unwrap();
    assert!(dist(&v, &two_pi_i) < 1e-60);
    let e = Ellipse { center: p.complex(2.0, 0.0), a: p.real(1.5), b: p.real(0.7) };
    let v = contour_trapezoid(|z| Complex::with_val(p.bits, z - 2.4).recip(), &e, 16, &p).unwrap();
    assert!(dist(&v, &two_pi_i) < 1e-60);
}

#[test]
fn f64_rule_integrates_cubic() {
    let (x, w) = gauss_legendre_f64(3);
    let s: f64 = x.iter().zip(&w).map(|(x, w)| w * (x * x * x + x * x)).sum();
    assert!((s - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn fit_rate_examples() {
    let (s, _) = fit_rate(&[(1.0, 1.0), (2.0, 0.5), (4.0, 0.25)], FitKind::LogLog).unwrap();
    assert!((s + 1.0).abs() < 1e-14);
    let pts: Vec<_> = (1..=3).map(|n| (n as f64, (-(n as f64)).exp())).collect();
    let (s, i) = fit_rate(&pts, FitKind::SemiLog).unwrap();
    assert!((s + 1.0).abs() < 1e-14 && i.abs() < 1e-14);
    let pts: Vec<_> = [8.0, 16.0, 32.0, 64.0].iter().map(|&n: &f64| (n, 3.0 / n + 0.01 / (n * n))).collect();
    let (s, _) = fit_rate(&pts, FitKind::LogLog).unwrap();
    assert!((-1.1..=-0.9).contains(&s));
    assert!(matches!(fit_rate(&[(2.0, 1.0), (2.0, 0.5)], FitKind::LogLog), Err(Error::DegenerateFit(_))));
    assert!(matches!(fit_rate(&[(2.0, 1.0)], FitKind::LogLog), Err(Error::DegenerateFit(_))));
}

#[test]
fn polynomial_roots_and_horner() {
    let p = prec();
    let roots: Vec<Complex> = [(1.0, 0.0), (-2.0, 0.5), (0.3, -1.0)].iter().map(|&(a, b)| p.complex(a, b)).collect();
    let poly = Polynomial::from_roots(&roots, p.bits);
    assert_eq!(poly.degree(), Some(3));
    for r in &roots {
        assert!(cabs(&poly.eval(r)).to_f64() < 1e-70);
    }
    let z = p.complex(0.7, 2.0);
    let mut direct = p.one();
    for r in &roots {
        direct *= Complex::with_val(p.bits, &z - r);
    }
    assert!(dist(&poly.eval(&z), &direct) < 1e-70);
    assert!(Polynomial::zero(p.bits).is_zero());
}

fn rand_matrix(vals: &[(f64, f64)], n: usize, p: &PrecisionContext) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(n, n, p.bits);
    for i in 0..n {
        for j in 0..n {
            let (re, im) = vals[i * n + j];
            let d = if i == j { 2.0 * n as f64 } else { 0.0 };
            m.set(i, j, p.complex(re + d, im));
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn well_conditioned_systems_solve_to_tolerance(
        vals in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 400),
        rhs in proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 20),
    ) {
        let p = prec();
        let m = rand_matrix(&vals, 20, &p);
        let b: Vec<Complex> = rhs.iter().map(|&(a, c)| p.complex(a, c)).collect();
        let s = lu_solve(&m, &b, &p).unwrap();
        let r = m.mul_vec(&s.solution);
        let res = r.iter().zip(&b).map(|(x, y)| dist(x, y)).fold(0.0, f64::max);
        let bn = vec_norm_inf(&b).to_f64();
        prop_assert!(res <= 1e3 * p.tol_rel() * bn);
    }

    #[test]
    fn quadrature_is_exact_on_polynomials(coeffs in proptest::collection::vec(-3.0f64..3.0, 1..8), a in -2.0f64..0.0, w in 0.1f64..3.0) {
        let p = prec();
        let b = a + w;
        let f = |x: &Float| {
            let mut acc = Float::new(p.bits);
            for c in coeffs.iter().rev() {
                acc *= x;
                acc += *c;
            }
            Complex::with_val(p.bits, acc)
        };
        let v = gauss_legendre(f, &p.real(a), &p.real(b), 8, &p).unwrap();
        let mut exact = Float::new(p.bits);
        for (k, c) in coeffs.iter().enumerate() {
            let k1 = (k + 1) as i32;
            let pb = Float::with_val(p.bits, p.real(b).pow(k1));
            let pa = Float::with_val(p.bits, p.real(a).pow(k1));
            exact += (pb - pa) * *c / k1;
        }
        let scale = 1.0 + coeffs.iter().map(|c| c.abs()).sum::<f64>() * 5f64.powi(coeffs.len() as i32);
        prop_assert!(dist(&v, &Complex::with_val(p.bits, exact)) <= 10.0 * p.tol_rel() * scale);

        let circle = Circle { center: p.complex(a, 0.5), radius: p.real(w) };
        let g = |z: &Complex| {
            let mut acc = Complex::new(p.bits);
            for c in coeffs.iter().rev() {
                acc *= z;
                acc += *c;
            }
            acc
        };
        let v = contour_trapezoid(g, &circle, 16, &p).unwrap();
        prop_assert!(cabs(&v).to_f64() <= 10.0 * p.tol_rel() * scale);
    }
}
