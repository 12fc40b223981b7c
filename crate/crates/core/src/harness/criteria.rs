use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rug::Complex;

use super::pipeline::{Ctx, Outcome};
use super::report::sci;
use crate::equilibrium::{assemble_grid, solve_equilibrium_from, ConstrainedMeasure};
use crate::error::{Error, Result};
use crate::nodes::{logpot_check, quantile_nodes, riemann_sum_check, spacing_check, FieldEvaluator, NodeSet};
use crate::numerics::{cabs, fit_rate, FitKind, Polynomial, PrecisionContext};
use crate::pade::{
    assemble_system, build_y, check_nd, default_contour, discrete_orthogonality_check, eval_wn_ln, hermite_walsh_eval,
    hurwitz_provider, hurwitz_values, run_pade, WeightSet,
};
use crate::phase::{
    airy_stripped_residual, lip_decay_fit, matching_error, phase_sign_scan, strong_asymptotics, wn_factorization_check,
    Endpoint, OuterParametrix, ParametrixBundle,
};
use crate::specialfn::{hurwitz_bound_check, hurwitz_zeta, HurwitzParams, Side};

/// Reference scale `2^{−192}` of the interpolation bounds.
fn pade_bound(cond: f64) -> f64 {
    cond * 1e2 * (-192f64).exp2()
}

fn rel_diff(a: &Complex, b: &Complex) -> f64 {
    let bits = a.prec().0;
    (cabs(&Complex::with_val(bits, a - b)) / cabs(b)).to_f64()
}

/// `Π_{k=1}^{n} (a + 2k − 1)/(a + 2k)` at `a = nα_j`.
fn product_rational(ns: &NodeSet, n_factors: usize, p: &PrecisionContext) -> Vec<Complex> {
    (0..ns.len())
        .map(|j| {
            let a = ns.a_c(j);
            let mut v = Complex::with_val(p.bits, 1);
            for k in 1..=n_factors {
                v *= Complex::with_val(p.bits, &a + (2 * k - 1) as u32);
                v /= Complex::with_val(p.bits, &a + (2 * k) as u32);
            }
            v
        })
        .collect()
}

fn coeff_error(got: &Polynomial, want: &Polynomial, deg: usize) -> f64 {
    let bits = want.bits;
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for k in 0..=deg {
        num = num.max(cabs(&Complex::with_val(bits, &got.coeff(k) - &want.coeff(k))).to_f64());
        den = den.max(cabs(&want.coeff(k)).to_f64());
    }
    num / den
}

impl Ctx<'_> {
    pub(super) fn c01_interpolation(&mut self) -> Result<Outcome> {
        let list = self.cfg.sweep.n_list.clone();
        self.ensure_pade(&list);
        let mut worst: f64 = 0.0;
        let mut ev = Vec::new();
        for &n in &list {
            let r = self.pade(n)?;
            let res = r.pp.normalized_residual(&r.f);
            let bound = pade_bound(r.nd.cond_estimate);
            worst = worst.max(res / bound);
            ev.push(format!("n={n} bits={} cond={:.3e} residual={res:.3e} bound={bound:.3e}", r.prec.bits, r.nd.cond_estimate));
            let orth = discrete_orthogonality_check(&r.pp, &r.ws, &r.ns);
            self.table("pade", &["n", "bits", "escalations", "cond_estimate", "log_abs_det", "residual", "orthogonality"])
                .push(vec![
                    n.to_string(),
                    r.prec.bits.to_string(),
                    r.escalations.to_string(),
                    sci(r.nd.cond_estimate),
                    sci(r.nd.log_abs_det),
                    sci(res),
                    sci(orth.max_lemma),
                ]);
        }
        Ok(Outcome::check(worst, worst <= 1.0, ev))
    }

    pub(super) fn c02_orthogonality(&mut self) -> Result<Outcome> {
        let list = self.cfg.sweep.n_list.clone();
        self.ensure_pade(&list);
        let mut worst: f64 = 0.0;
        let mut ev = Vec::new();
        for &n in &list {
            let r = self.pade(n)?;
            let orth = discrete_orthogonality_check(&r.pp, &r.ws, &r.ns);
            let bound = pade_bound(r.nd.cond_estimate);
            worst = worst.max(orth.max_lemma / bound);
            ev.push(format!("n={n} max normalized sum={:.3e} bound={bound:.3e}", orth.max_lemma));
        }
        Ok(Outcome::check(worst, worst <= 1.0, ev))
    }

    pub(super) fn c03_rational_recovery(&mut self) -> Result<Outcome> {
        let bits = self.prec.bits;
        let mut worst: f64 = 0.0;
        let mut ev = Vec::new();
        for n in 1..=3usize {
            let run = run_pade(&self.density, n, |ns, p| Ok(product_rational(ns, n, p)), &self.prec)?;
            let inv_n = |k: usize| Complex::with_val(bits, -(k as f64)) / n as u32;
            let q_roots: Vec<Complex> = (1..=n).map(|k| inv_n(2 * k)).collect();
            let p_roots: Vec<Complex> = (1..=n).map(|k| inv_n(2 * k - 1)).collect();
            let eq = coeff_error(&run.pp.qhat, &Polynomial::from_roots(&q_roots, bits), n);
            let ep = coeff_error(&run.pp.phat, &Polynomial::from_roots(&p_roots, bits), n);
            let res = run.pp.normalized_residual(&run.f);
            worst = worst.max(eq).max(ep).max(res);
            ev.push(format!("n={n} data=prod (a+2k-1)/(a+2k): Q error={eq:.3e} P error={ep:.3e} residual={res:.3e}"));
            if n > 1 {
                let ns = quantile_nodes(&self.density, n, &self.prec)?;
                let f = product_rational(&ns, 1, &self.prec);
                let nd = check_nd(&assemble_system(&ns, &f), &self.prec);
                ev.push(format!("n={n} data=(a+1)/(a+2): nondegeneracy={} cond={:.3e}", nd.nd_holds, nd.cond_estimate));
            }
        }
        Ok(Outcome::check(worst, worst <= 1e-30, ev))
    }

    pub(super) fn c04_barycentric(&mut self) -> Result<Outcome> {
        let r = self.pade(8)?;
        let pts = self.sample_points(20, 0.3, 2.0, 4);
        let mut worst: f64 = 0.0;
        for z in &pts {
            let wl = eval_wn_ln(&r.ws, &r.ns, &r.prec.from_c64(*z), &r.prec)?;
            worst = worst.max(wl.residual);
        }
        Ok(Outcome::check(worst, worst <= 1e-20, vec![format!("n=8 points={} bits={}", pts.len(), r.prec.bits)]))
    }

    pub(super) fn c05_contour_integral(&mut self) -> Result<Outcome> {
        let p = self.prec.clone();
        let (a, b) = (self.density.a, self.density.b);
        let contour = default_contour(a, b, self.cfg.contour.margin_frac, &p);
        let z = p.complex(self.cfg.contour.eval_point, 0.0);
        let list = self.cfg.sweep.contour_n_list.clone();
        let results: Vec<Result<(usize, f64)>> = list
            .par_iter()
            .map(|&n| {
                let ns = quantile_nodes(&self.density, n, &p)?;
                let f = hurwitz_values(&self.hp, &ns, &p)?;
                let ws = WeightSet::new(&ns, &f);
                let lagrange = eval_wn_ln(&ws, &ns, &z, &p)?.l_tilde;
                let g = |xi: &Complex| hurwitz_zeta(&self.hp, &Complex::with_val(p.bits, xi * n as u32), &p);
                let hw = hermite_walsh_eval(&ns, g, &contour, &z, &p)?;
                Ok((n, rel_diff(&hw, &lagrange)))
            })
            .collect();
        let mut worst: f64 = 0.0;
        let mut ev = vec![format!(
            "ellipse center={} semi-axes=({}, {}) z={}",
            (a + b) / 2.0,
            contour.a.to_f64(),
            contour.b.to_f64(),
            self.cfg.contour.eval_point
        )];
        for r in results {
            let (n, d) = r?;
            worst = worst.max(d);
            ev.push(format!("n={n} relative difference={d:.3e}"));
        }
        Ok(Outcome::check(worst, worst <= 1e-15, ev))
    }

    pub(super) fn c06_spacing(&mut self) -> Result<Outcome> {
        let mut worst = f64::NEG_INFINITY;
        let mut ev = Vec::new();
        let list = self.cfg.sweep.rate_n_list.clone();
        for d in crate::nodes::shipped_densities() {
            let lo_bound = 1.0 / d.kappa_max - 1e-3;
            let hi_bound = 1.0 / d.kappa_min + 1e-3;
            for &n in list.iter().filter(|&&n| n <= 64) {
                let ns = quantile_nodes(&d, n, &self.prec)?;
                let (lo, hi) = spacing_check(&ns);
                let v = (lo_bound - lo).max(hi - hi_bound);
                worst = worst.max(v);
                self.table("spacing", &["density", "n", "min_gap_times_n", "max_gap_times_n", "lower_bound", "upper_bound"])
                    .push(vec![d.label(), n.to_string(), sci(lo), sci(hi), sci(lo_bound), sci(hi_bound)]);
            }
            ev.push(format!("{}: window [{lo_bound:.4}, {hi_bound:.4}]", d.label()));
        }
        Ok(Outcome::check(worst, worst <= 0.0, ev))
    }

    pub(super) fn c07_rates(&mut self) -> Result<Outcome> {
        let list = self.cfg.sweep.rate_n_list.clone();
        let psi = |x: f64| x.sin() + 0.25 * x * x;
        let mut worst = f64::NEG_INFINITY;
        let mut ev = Vec::new();
        for d in crate::nodes::shipped_densities() {
            let (a, b) = (d.a, d.b);
            let mut fits = vec![("riemann_sum".to_string(), riemann_sum_check(&d, &list, psi, &self.prec)?)];
            for z in [Complex64::new(b + 1.0, 0.0), Complex64::new(0.5 * (a + b), 0.5 * (b - a))] {
                fits.push((format!("log_potential@{z}"), logpot_check(&d, &list, &self.prec.from_c64(z), &self.prec)?));
            }
            for (name, fit) in fits {
                worst = worst.max(fit.slope);
                ev.push(format!("{} {name}: slope={:.3}", d.label(), fit.slope));
                for (n, e) in &fit.points {
                    self.table("rates", &["density", "check", "n", "error"]).push(vec![d.label(), name.clone(), n.to_string(), sci(*e)]);
                }
            }
        }
        Ok(Outcome::check(worst, worst <= -0.8, ev))
    }

    pub(super) fn c08_hurwitz_bound(&mut self) -> Result<Outcome> {
        let list = self.cfg.sweep.rate_n_list.clone();
        let (a, b) = (self.density.a, self.density.b);
        let mut worst: f64 = 0.0;
        let mut ev = Vec::new();
        for (re, im) in [(2.0, 0.0), (3.0, 0.0), (2.5, 1.0)] {
            let hp = HurwitzParams::from_f64(re, im, &self.prec)?;
            let (slope, _) = hurwitz_bound_check(&hp, a, b, &list, &self.prec)?;
            let dev = (slope - (1.0 - re)).abs();
            worst = worst.max(dev);
            ev.push(format!("s={re}+{im}i slope={slope:.4} expected={}", 1.0 - re));
        }
        Ok(Outcome::check(worst, worst <= 0.1, ev))
    }

    pub(super) fn c09_equilibrium(&mut self) -> Result<Outcome> {
        let opts = self.cfg.equilibrium.qp_options();
        let m = self.cfg.equilibrium.cells;
        let grid = assemble_grid(&self.density, self.field.as_ref(), m);
        let first = solve_equilibrium_from(&grid, ConstrainedMeasure::default_start(&grid), &opts)?;
        let second = solve_equilibrium_from(&grid, ConstrainedMeasure::uniform_start(&grid), &opts)?;
        let (u1, u2) = (first.rho.masses(), second.rho.masses());
        let agreement = u1.iter().zip(&u2).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let agree_tol = 10.0 * opts.qp_tol;
        let mut worst = agreement / agree_tol;
        let mut ev = vec![
            format!("configured density: two-start max mass difference={agreement:.3e} (tolerance {agree_tol:.1e})"),
            format!(
                "configured density: max violation={:.3e} kkt_tol={:.3e} iterations={}+{}",
                first.kkt.max_violation, first.kkt.kkt_tol, first.iterations, second.iterations
            ),
        ];
        worst = worst.max(first.kkt.max_violation / first.kkt.kkt_tol);
        let shipped: Vec<_> = self.shipped().iter().map(|(d, s)| (d.clone(), s.clone())).collect();
        for (d, s) in &shipped {
            let s = s.as_ref().map_err(|e| e.clone())?;
            worst = worst.max(s.kkt.max_violation / s.kkt.kkt_tol);
            ev.push(format!(
                "{}: max violation={:.3e} kkt_tol={:.3e} band={:?} regular={}",
                d.label(),
                s.kkt.max_violation,
                s.kkt.kkt_tol,
                s.band,
                s.is_regular()
            ));
            self.table(
                "equilibrium",
                &["density", "cells", "iterations", "ell", "band_c", "band_d", "max_violation", "kkt_tol", "regular"],
            )
            .push(vec![
                d.label(),
                s.m().to_string(),
                s.iterations.to_string(),
                sci(s.ell),
                s.band.map(|b| sci(b.0)).unwrap_or_default(),
                s.band.map(|b| sci(b.1)).unwrap_or_default(),
                sci(s.kkt.max_violation),
                sci(s.kkt.kkt_tol),
                s.is_regular().to_string(),
            ]);
            if d.label() == "uniform" {
                let (c, dd) = s.band.ok_or_else(|| Error::DomainError("uniform density has no band".into()))?;
                let asym = (c + dd - (d.a + d.b)).abs();
                worst = worst.max(asym / s.h());
                ev.push(format!("uniform: |c + d - (A + B)|={asym:.3e} cell width={:.3e}", s.h()));
            }
        }
        Ok(Outcome::check(worst, worst <= 1.0, ev))
    }

    pub(super) fn c10_y_matrix(&mut self) -> Result<Outcome> {
        let r = self.pade(4)?;
        let y = build_y(&r.pp, &r.ws, &r.ns, &r.prec)?;
        let residue = y.residue_check(&r.prec)?;
        let (pts, slope) = y.normalization_slope(&[1e3, 1e4, 1e5, 1e6], 0.7)?;
        let slope_ok = (-1.1..=-0.9).contains(&slope);
        let mut ev = vec![format!("n=4 residue mismatch={residue:.3e}"), format!("normalization slope={slope:.4} (window [-1.1, -0.9])")];
        ev.extend(pts.iter().map(|(z, e)| format!("|z|={z:.1e} error={e:.3e}")));
        Ok(Outcome::check(residue, residue <= 1e-15 && slope_ok, ev))
    }

    pub(super) fn c11_outer(&mut self) -> Result<Outcome> {
        let refr = self.reference()?;
        let op = match &refr.1 {
            Some(b) => b.op.clone(),
            None => {
                let (c, d) = refr.0.band.ok_or_else(|| Error::DomainError("reference equilibrium has no band".into()))?;
                OuterParametrix::new(c, d, &self.prec)
            }
        };
        let p = &self.prec;
        let (c, d) = (op.c.to_f64(), op.d.to_f64());
        let mut det_err: f64 = 0.0;
        for z in self.sample_points(50, 0.2, 3.0, 11) {
            let det = op.eval(&p.from_c64(z), Side::Principal)?.det2();
            det_err = det_err.max(cabs(&Complex::with_val(p.bits, det - 1u32)).to_f64());
        }
        let mut jump: f64 = 0.0;
        for k in 0..20 {
            let x = c + (d - c) * (k as f64 + 0.5) / 20.0;
            jump = jump.max(op.jump_residual(&p.real(x))?);
        }
        let mut scaled = Vec::new();
        for r in [1e2, 1e3, 1e4] {
            let z = p.from_c64(Complex64::from_polar(r, 0.7));
            scaled.push(op.eval(&z, Side::Principal)?.dist_to_identity().to_f64() * r);
        }
        let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = scaled.iter().cloned().fold(0.0, f64::max);
        let bounded = hi / lo <= 1.1;
        let ev = vec![
            format!("band [{c:.6}, {d:.6}]"),
            format!("max |det N - 1| over 50 points={det_err:.3e}"),
            format!("max jump residual on the band={jump:.3e} (bound 1e-20)"),
            format!("|N - I| |z| at 1e2, 1e3, 1e4: {:.6e}, {:.6e}, {:.6e} (max/min bound 1.1)", scaled[0], scaled[1], scaled[2]),
        ];
        Ok(Outcome::check(det_err, det_err <= 1e-30 && jump <= 1e-20 && bounded, ev))
    }

    pub(super) fn c12_airy(&mut self) -> Result<Outcome> {
        let p = &self.prec;
        let at = |r: f64, th: f64| airy_stripped_residual(&p.from_c64(Complex64::from_polar(r, th)), p);
        let quarter = std::f64::consts::FRAC_PI_4;
        let ratio = at(20.0, quarter)? / at(40.0, quarter)?;
        let target = 2f64.powf(1.5);
        let mut ev = vec![format!("arg pi/4: ratio={ratio:.4} target={target:.4}")];
        for th in [0.3, 2.5, -2.5, -0.3] {
            let (a, b) = (at(20.0, th)?, at(40.0, th)?);
            ev.push(format!("arg {th}: residual(20)={a:.3e} residual(40)={b:.3e} ratio={:.4}", a / b));
        }
        Ok(Outcome::check(ratio, (ratio - target).abs() <= 0.3 * target, ev))
    }

    fn reference_bundle(&mut self) -> Result<std::result::Result<Arc<(crate::equilibrium::EquilibriumSolution, Option<ParametrixBundle>)>, Vec<String>>> {
        let refr = self.reference()?;
        if refr.1.is_none() {
            let f = &refr.0.flags;
            return Ok(Err(vec![format!(
                "reference field not regular: single_interval={} interior_unsaturated={} soft_edges={} strict_inequality={}",
                f.single_interval, f.interior_unsaturated, f.soft_edges, f.strict_inequality
            )]));
        }
        Ok(Ok(refr))
    }

    pub(super) fn c13_matching(&mut self) -> Result<Outcome> {
        let refr = match self.reference_bundle()? {
            Ok(r) => r,
            Err(ev) => return Ok(Outcome::skipped(ev)),
        };
        let b = refr.1.as_ref().unwrap();
        let list = self.cfg.sweep.rate_n_list.clone();
        let mut worst: f64 = 0.0;
        let mut ev = vec![format!("delta={:.5} c={:.6} d={:.6}", b.delta, b.left.e, b.right.e)];
        for e in [Endpoint::Left, Endpoint::Right] {
            let aa = b.assembly(e);
            let errs: Vec<Result<f64>> =
                list.par_iter().map(|&n| matching_error(aa, &b.op, &b.ev, n, b.delta, 64, &self.prec)).collect();
            let mut pts = Vec::new();
            for (&n, err) in list.iter().zip(errs) {
                let err = err?;
                pts.push((n as f64, err));
                self.table("matching", &["endpoint", "n", "radius", "sup_error"]).push(vec![
                    format!("{e:?}").to_lowercase(),
                    n.to_string(),
                    sci(b.delta),
                    sci(err),
                ]);
            }
            let (slope, _) = fit_rate(&pts, FitKind::LogLog)?;
            worst = worst.max((slope + 1.0).abs());
            ev.push(format!("{e:?}: slope={slope:.4}"));
        }
        Ok(Outcome::check(worst, worst <= 0.3, ev))
    }

    pub(super) fn c14_lips(&mut self) -> Result<Outcome> {
        let refr = match self.reference_bundle()? {
            Ok(r) => r,
            Err(ev) => return Ok(Outcome::skipped(ev)),
        };
        let b = refr.1.as_ref().unwrap();
        let list = self.cfg.sweep.rate_n_list.clone();
        let (slope, min_re, norms) = lip_decay_fit(&b.ev, &b.lips, &list)?;
        let scan = phase_sign_scan(&b.ev, &b.lips)?;
        for l in &norms {
            self.table("lips", &["n", "log_sup_jump", "log_sup_reciprocal"]).push(vec![
                l.n.to_string(),
                sci(l.log_sup),
                sci(l.log_sup_reciprocal),
            ]);
        }
        let target = -min_re;
        let dev = (slope - target).abs() / target.abs();
        let ev = vec![
            format!("semi-log slope={slope:.5} -min Re phi={target:.5}"),
            format!("Re phi on lips in [{:.5}, {:.5}]; positive={}", scan.min_re_phase, scan.max_re_phase, scan.positive),
        ];
        Ok(Outcome::check(dev, dev <= 0.1, ev))
    }

    pub(super) fn c15_strong(&mut self) -> Result<Outcome> {
        let shipped: Vec<_> = self.shipped().iter().map(|(d, s)| (d.clone(), s.clone())).collect();
        let mut ev = Vec::new();
        let mut regular = Vec::new();
        for (d, s) in &shipped {
            match s {
                Ok(s) => {
                    let f = &s.flags;
                    ev.push(format!(
                        "{}: single_interval={} interior_unsaturated={} soft_edges={} strict_inequality={} band={:?}",
                        d.label(),
                        f.single_interval,
                        f.interior_unsaturated,
                        f.soft_edges,
                        f.strict_inequality,
                        s.band
                    ));
                    if s.is_regular() {
                        regular.push((d.clone(), s.clone()));
                    }
                }
                Err(e) => ev.push(format!("{}: equilibrium failed: {e}", d.label())),
            }
        }
        if regular.is_empty() {
            ev.insert(0, "no shipped density is in the regular regime".into());
            return Ok(Outcome::skipped(ev));
        }
        let points = self.compact_points();
        let list = self.cfg.sweep.n_list.clone();
        let mut worst = f64::NEG_INFINITY;
        for (d, s) in regular {
            let field = Arc::new(FieldEvaluator::with_default_grid(d.clone()));
            let bundle = ParametrixBundle::build(&s, field, &self.prec)?;
            let hp = self.hp.clone();
        let provider = hurwitz_provider(&hp);
            let runs: Vec<_> = list
                .par_iter()
                .map(|&n| run_pade(&d, n, &provider, &self.prec))
                .collect::<Result<Vec<_>>>()?;
            let qhats: Vec<(usize, &Polynomial)> = runs.iter().map(|r| (r.ns.n, &r.pp.qhat)).collect();
            let sweep = strong_asymptotics(&bundle.ev, &bundle.op, &qhats, &points, &self.prec)?;
            for (i, n) in sweep.n_list.iter().enumerate() {
                for (k, z) in sweep.points.iter().enumerate() {
                    self.table("strong", &["density", "n", "point", "residual"]).push(vec![
                        d.label(),
                        n.to_string(),
                        format!("{z}"),
                        sci(sweep.residuals[i][k]),
                    ]);
                }
            }
            worst = worst.max(sweep.worst_slope());
            ev.push(format!("{}: slopes={:?}", d.label(), sweep.slopes));
        }
        Ok(Outcome::check(worst, worst <= -0.8, ev))
    }

    pub(super) fn c16_subexponential(&mut self) -> Result<Outcome> {
        let z = Complex64::new(self.cfg.contour.eval_point, 0.0);
        let list = self.cfg.sweep.rate_n_list.clone();
        let hp = self.hp.clone();
        let provider = hurwitz_provider(&hp);
        let sweep = wn_factorization_check(&self.density, &provider, self.field.as_ref(), z, &list, &self.prec)?;
        for p in &sweep.points {
            self.table("factorization", &["n", "normalized_log", "rescaled_log", "barycentric_residual"]).push(vec![
                p.n.to_string(),
                sci(p.normalized_log),
                sci(p.rescaled_log),
                sci(p.barycentric_residual),
            ]);
        }
        let worst = sweep.points.iter().map(|p| p.normalized_log.abs()).fold(0.0, f64::max);
        let ev = vec![
            format!("z={z} monotone={} envelope C={:.4} within envelope={}", sweep.monotone, sweep.envelope, sweep.within_envelope),
            format!(
                "|(1/n) log|E_n|| = {:?}",
                sweep.points.iter().map(|p| format!("{:.4}", p.normalized_log.abs())).collect::<Vec<_>>()
            ),
            format!(
                "with n^(2n+1) restored: {:?} monotone={}",
                sweep.points.iter().map(|p| format!("{:.4}", p.rescaled_log.abs())).collect::<Vec<_>>(),
                sweep.rescaled_monotone
            ),
        ];
        Ok(Outcome::check(worst, sweep.passes(), ev))
    }
}
