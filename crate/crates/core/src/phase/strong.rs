use num_complex::Complex64;

use super::g::GPhaseEvaluator;
use super::outer::OuterParametrix;
use crate::error::Result;
use crate::numerics::{fit_rate, to_c64, FitKind, Polynomial, PrecisionContext};
use crate::specialfn::Side;

/// Entry-level strong asymptotics: `|Q̂_n(ζ) e^{−n g(ζ)} s_n − N₁₁(ζ)|` at fixed points, with one
/// complex constant `s_n` per `n` fitted by least squares over the points.
#[derive(Clone, Debug)]
pub struct StrongSweep {
    pub points: Vec<Complex64>,
    pub n_list: Vec<usize>,
    /// `residuals[i][k]` for `n_list[i]` and `points[k]`.
    pub residuals: Vec<Vec<f64>>,
    pub scales: Vec<Complex64>,
    /// Log-log slope of the residual against `n`, per point.
    pub slopes: Vec<f64>,
}

impl StrongSweep {
    pub fn worst_slope(&self) -> f64 {
        self.slopes.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn strong_asymptotics(
    ev: &GPhaseEvaluator,
    op: &OuterParametrix,
    qhats: &[(usize, &Polynomial)],
    points: &[Complex64],
    prec: &PrecisionContext,
) -> Result<StrongSweep> {
    let n11: Vec<Complex64> = points
        .iter()
        .map(|z| op.eval(&prec.from_c64(*z), Side::Principal).map(|m| to_c64(m.get(0, 0))))
        .collect::<Result<_>>()?;
    let mut residuals = Vec::new();
    let mut scales = Vec::new();
    for (n, q) in qhats {
        let mut ratios = Vec::with_capacity(points.len());
        for z in points {
            let qv = q.eval(&prec.from_c64(*z));
            let lq = to_c64(&qv.ln());
            let g = ev.g(*z, Side::Principal)?;
            ratios.push((lq - *n as f64 * g).exp());
        }
        let num: Complex64 = ratios.iter().zip(&n11).map(|(r, t)| r.conj() * t).sum();
        let den: f64 = ratios.iter().map(|r| r.norm_sqr()).sum();
        let s = num / den;
        residuals.push(ratios.iter().zip(&n11).map(|(r, t)| (s * r - t).norm()).collect::<Vec<f64>>());
        scales.push(s);
    }
    let mut slopes = Vec::with_capacity(points.len());
    for k in 0..points.len() {
        let pts: Vec<(f64, f64)> = qhats.iter().zip(&residuals).map(|((n, _), r)| (*n as f64, r[k])).collect();
        slopes.push(fit_rate(&pts, FitKind::LogLog).map(|f| f.0).unwrap_or(f64::NAN));
    }
    Ok(StrongSweep { points: points.to_vec(), n_list: qhats.iter().map(|(n, _)| *n).collect(), residuals, scales, slopes })
}
