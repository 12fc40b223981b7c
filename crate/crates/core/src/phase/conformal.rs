use std::f64::consts::PI;

use num_complex::Complex64;

use super::g::GPhaseEvaluator;
use crate::error::{Error, Result};
use crate::specialfn::Side;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint {
    /// `c`, the left band endpoint.
    Left,
    /// `d`, the right band endpoint.
    Right,
}

/// Degree of the local cofactor fit.
pub const FIT_DEGREE: usize = 8;
/// Sample count on the fit circle.
pub const FIT_POINTS: usize = 64;

/// Local data at one endpoint: `η(ζ) = s(ζ − e)·[(3/4) F(ζ)]^{2/3}` with `F = φ/(s(ζ − e))^{3/2}`
/// fitted on `|ζ − e| = δ/2`, where `s = +1` at `d` and `s = −1` at `c` (and `φ̃` replaces `φ` at `c`).
#[derive(Clone, Debug)]
pub struct AiryAssembly {
    pub endpoint: Endpoint,
    pub e: f64,
    pub delta: f64,
    /// Taylor coefficients of `F` about `e`.
    pub coeffs: Vec<Complex64>,
    /// Largest relative size of the fitted coefficients beyond the kept degree.
    pub tail: f64,
}

fn s_of(endpoint: Endpoint) -> f64 {
    match endpoint {
        Endpoint::Left => -1.0,
        Endpoint::Right => 1.0,
    }
}

/// Local phase: `φ` at `d`, `φ̃` at `c`.
pub fn local_phase(ev: &GPhaseEvaluator, endpoint: Endpoint, z: Complex64, side: Side) -> Result<Complex64> {
    match endpoint {
        Endpoint::Left => ev.phase_tilde(z, side),
        Endpoint::Right => ev.phase(z, side),
    }
}

fn pow_c(z: Complex64, p: f64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        z
    } else {
        (z.ln() * p).exp()
    }
}

/// `(θ_k, F(e + r e^{iθ_k}))` with `F = φ/(s(ζ − e))^{3/2}`.
pub fn circle_samples(ev: &GPhaseEvaluator, endpoint: Endpoint, e: f64, r: f64) -> Result<Vec<(f64, Complex64)>> {
    let s = s_of(endpoint);
    (0..FIT_POINTS)
        .map(|k| {
            // Offset by half a step so no sample lies on the real axis.
            let th = 2.0 * PI * (k as f64 + 0.5) / FIT_POINTS as f64;
            let u = Complex64::from_polar(r, th);
            let phi = local_phase(ev, endpoint, e + u, Side::Principal)?;
            Ok((th, phi / pow_c(s * u, 1.5)))
        })
        .collect()
}

/// Laurent coefficient of index `j` from trapezoidal samples on `|u| = r`.
pub fn laurent(samples: &[(f64, Complex64)], r: f64, j: i32) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (th, f) in samples {
        acc += f * Complex64::from_polar(1.0, -(j as f64) * th);
    }
    acc / (samples.len() as f64 * r.powi(j))
}

/// Secant iteration on `e` for a vanishing `u^{−1}` coefficient of `F`, so that `φ` branches at `e`.
fn refine_endpoint(ev: &GPhaseEvaluator, endpoint: Endpoint, e0: f64, delta: f64) -> Result<f64> {
    let r = 0.5 * delta;
    let resid = |e: f64| -> Result<f64> { Ok(laurent(&circle_samples(ev, endpoint, e, r)?, r, -1).re) };
    let (mut x0, mut x1) = (e0, e0 + 0.25 * ev.h);
    let (mut f0, mut f1) = (resid(x0)?, resid(x1)?);
    for _ in 0..30 {
        if f1 == f0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        if (x1 - x0).abs() <= 1e-14 * x1.abs() {
            break;
        }
        f1 = resid(x1)?;
    }
    if !x1.is_finite() || (x1 - e0).abs() > 2.0 * ev.h {
        return Err(Error::FitIllConditioned((x1 - e0).abs()));
    }
    Ok(x1)
}

impl AiryAssembly {
    /// Fit about the band endpoint after moving it to the branch point of the discrete phase.
    pub fn build(ev: &GPhaseEvaluator, endpoint: Endpoint, delta: f64) -> Result<Self> {
        let e0 = match endpoint {
            Endpoint::Left => ev.band.0,
            Endpoint::Right => ev.band.1,
        };
        let e = refine_endpoint(ev, endpoint, e0, delta)?;
        Self::build_at(ev, endpoint, e, delta)
    }

    /// Fit about a prescribed centre `e`.
    pub fn build_at(ev: &GPhaseEvaluator, endpoint: Endpoint, e: f64, delta: f64) -> Result<Self> {
        let samples = circle_samples(ev, endpoint, e, 0.5 * delta)?;
        let r = 0.5 * delta;
        let coeffs: Vec<Complex64> = (0..=FIT_DEGREE).map(|j| laurent(&samples, r, j as i32)).collect();
        let scale = coeffs[0].norm();
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::FitIllConditioned(scale));
        }
        let tail = (FIT_DEGREE as i32 + 1..FIT_DEGREE as i32 + 5)
            .chain(-4..0)
            .map(|j| laurent(&samples, r, j).norm() * r.powi(j) / scale)
            .fold(0.0, f64::max);
        if tail > 1e-2 {
            return Err(Error::FitIllConditioned(tail));
        }
        if coeffs[0].re <= 0.0 || coeffs[0].im.abs() > 1e-6 * coeffs[0].re {
            return Err(Error::NegativeDerivative(format!("F(e) = {}", coeffs[0])));
        }
        Ok(Self { endpoint, e, delta, coeffs, tail })
    }

    pub fn s(&self) -> f64 {
        s_of(self.endpoint)
    }

    fn cofactor(&self, z: Complex64) -> Complex64 {
        let u = z - self.e;
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * u + c)
    }

    /// Fitted `η`, analytic in the disk.
    pub fn eta_fit(&self, z: Complex64) -> Complex64 {
        self.s() * (z - self.e) * pow_c(0.75 * self.cofactor(z), 2.0 / 3.0)
    }

    /// `ξ_d = η_d`, `ξ_c = −η_c`; both vanish at the endpoint with positive derivative.
    pub fn xi(&self, z: Complex64) -> Complex64 {
        match self.endpoint {
            Endpoint::Left => -self.eta_fit(z),
            Endpoint::Right => self.eta_fit(z),
        }
    }

    /// `ξ′(e) = [(3/4) F(e)]^{2/3}`.
    pub fn xi_prime_at_endpoint(&self) -> f64 {
        (0.75 * self.coeffs[0].re).powf(2.0 / 3.0)
    }

    /// Pointwise `η` with principal `η^{3/2} = (3/4)φ`, taking the admissible root nearest the fit.
    pub fn eta_exact(&self, ev: &GPhaseEvaluator, z: Complex64) -> Result<Complex64> {
        let w = 0.75 * local_phase(ev, self.endpoint, z, Side::Principal)?;
        let fit = self.eta_fit(z);
        let (rw, aw) = (w.norm(), w.arg());
        let mut best: Option<Complex64> = None;
        for k in [-1.0, 0.0, 1.0] {
            let t = aw + 2.0 * PI * k;
            if t <= -1.5 * PI || t > 1.5 * PI {
                continue;
            }
            let cand = Complex64::from_polar(rw.powf(2.0 / 3.0), 2.0 * t / 3.0);
            if best.map_or(true, |b| (cand - fit).norm() < (b - fit).norm()) {
                best = Some(cand);
            }
        }
        Ok(best.unwrap())
    }

    /// `max |(4/3)η^{3/2} − φ| / |φ|` on the fit circle.
    pub fn consistency_residual(&self, ev: &GPhaseEvaluator) -> Result<f64> {
        let r = 0.5 * self.delta;
        let mut worst: f64 = 0.0;
        for k in 0..FIT_POINTS {
            let th = 2.0 * PI * (k as f64 + 0.25) / FIT_POINTS as f64;
            let z = self.e + Complex64::from_polar(r, th);
            let phi = local_phase(ev, self.endpoint, z, Side::Principal)?;
            let back = (4.0 / 3.0) * pow_c(self.eta_fit(z), 1.5);
            worst = worst.max((back - phi).norm() / phi.norm());
        }
        Ok(worst)
    }
}
