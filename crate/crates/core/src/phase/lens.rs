use num_complex::Complex64;

use super::g::GPhaseEvaluator;
use crate::error::{Error, Result};
use crate::specialfn::Side;

/// Upper and lower lips: circular arcs through `c` and `d` with apex `(c+d)/2 ± i·height`,
/// sampled outside the endpoint disks of radius `δ`.
#[derive(Clone, Debug)]
pub struct LensLips {
    pub upper: Vec<Complex64>,
    pub lower: Vec<Complex64>,
    pub delta: f64,
    pub height: f64,
}

impl LensLips {
    pub fn new(c: f64, d: f64, delta: f64, height: f64, count: usize) -> Self {
        let half = 0.5 * (d - c);
        let mid = 0.5 * (c + d);
        let radius = (half * half + height * height) / (2.0 * height);
        let y0 = height - radius;
        let t_c = (-y0).atan2(-half);
        let t_d = (-y0).atan2(half);
        let mut upper = Vec::with_capacity(count);
        for k in 0..count {
            let t = t_c + (t_d - t_c) * (k as f64 + 0.5) / count as f64;
            let z = Complex64::new(mid + radius * t.cos(), y0 + radius * t.sin());
            if (z - c).norm() > delta && (z - d).norm() > delta {
                upper.push(z);
            }
        }
        let lower = upper.iter().map(|z| z.conj()).collect();
        Self { upper, lower, delta, height }
    }

    pub fn points(&self) -> impl Iterator<Item = &Complex64> {
        self.upper.iter().chain(self.lower.iter())
    }
}

#[derive(Clone, Debug)]
pub struct SignScan {
    /// Measured `min Re φ` on the lips.
    pub min_re_phase: f64,
    pub argmin: Complex64,
    pub max_re_phase: f64,
    /// `min Re φ > 0`.
    pub positive: bool,
}

pub fn phase_sign_scan(ev: &GPhaseEvaluator, lips: &LensLips) -> Result<SignScan> {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut argmin = Complex64::new(0.0, 0.0);
    for z in lips.points() {
        let r = ev.phase(*z, Side::Principal)?.re;
        if r < min {
            min = r;
            argmin = *z;
        }
        max = max.max(r);
    }
    Ok(SignScan { min_re_phase: min, argmin, max_re_phase: max, positive: min > 0.0 })
}

/// `log sup ‖J_lip − I‖ = log sup |e^{−nφ}|` on the lips, and the same for `e^{+nφ}`.
#[derive(Clone, Debug)]
pub struct LipNorms {
    pub n: usize,
    pub log_sup: f64,
    pub log_sup_reciprocal: f64,
}

pub fn lens_jump_norms(ev: &GPhaseEvaluator, lips: &LensLips, n: usize) -> Result<LipNorms> {
    let nf = n as f64;
    let mut log_sup = f64::NEG_INFINITY;
    let mut log_sup_reciprocal = f64::NEG_INFINITY;
    for z in lips.points() {
        let phi = ev.phase(*z, Side::Principal)?;
        log_sup = log_sup.max((-nf * phi).exp().norm().ln());
        log_sup_reciprocal = log_sup_reciprocal.max((nf * phi).exp().norm().ln());
    }
    Ok(LipNorms { n, log_sup, log_sup_reciprocal })
}

/// Semi-log slope of `sup ‖J_lip − I‖` against `n`, with the measured `min Re φ`.
pub fn lip_decay_fit(ev: &GPhaseEvaluator, lips: &LensLips, n_list: &[usize]) -> Result<(f64, f64, Vec<LipNorms>)> {
    let norms: Vec<LipNorms> = n_list.iter().map(|&n| lens_jump_norms(ev, lips, n)).collect::<Result<_>>()?;
    let xs: Vec<f64> = norms.iter().map(|l| l.n as f64).collect();
    let ys: Vec<f64> = norms.iter().map(|l| l.log_sup).collect();
    let slope = least_squares_slope(&xs, &ys)?;
    let scan = phase_sign_scan(ev, lips)?;
    Ok((slope, scan.min_re_phase, norms))
}

/// Slope of the least-squares line through `(x, y)`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let k = xs.len() as f64;
    if xs.len() < 2 {
        return Err(Error::DegenerateFit(format!("{} point(s)", xs.len())));
    }
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 1e-300 {
        return Err(Error::DegenerateFit("all abscissae equal".into()));
    }
    Ok(xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx)
}
