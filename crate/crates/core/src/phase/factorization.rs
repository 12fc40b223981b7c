use num_complex::Complex64;
use rug::Complex;

use crate::error::Result;
use crate::nodes::{quantile_nodes, DensitySpec, ExternalField, NodeSet};
use crate::numerics::{cln_abs, PrecisionContext};
use crate::pade::{eval_wn_ln, WeightSet};
use crate::specialfn::Side;

/// Slack on the `C log n / n` envelope fitted by least squares.
pub const ENVELOPE_SLACK: f64 = 2.0;

#[derive(Clone, Debug)]
pub struct FactorizationPoint {
    pub n: usize,
    /// `(1/n) log|W̃_n(ζ) e^{−(n/2)V^an(ζ)}|`.
    pub normalized_log: f64,
    /// `(1/n) log|n^{2n+1} W̃_n(ζ) e^{−(n/2)V^an(ζ)}|`.
    pub rescaled_log: f64,
    /// Relative mismatch of `W̃_n` against `L̃_n/(n^{2n+1}Ω_n)`.
    pub barycentric_residual: f64,
}

#[derive(Clone, Debug)]
pub struct FactorizationSweep {
    pub z: Complex64,
    pub points: Vec<FactorizationPoint>,
    /// `|normalized_log|` strictly decreasing in `n`.
    pub monotone: bool,
    /// Least-squares `C` in `|normalized_log| ≈ C log n / n`.
    pub envelope: f64,
    /// Every point lies below `ENVELOPE_SLACK · C log n / n`.
    pub within_envelope: bool,
    pub rescaled_monotone: bool,
}

impl FactorizationSweep {
    pub fn passes(&self) -> bool {
        self.monotone && self.within_envelope
    }
}

pub fn wn_factorization_point(
    ws: &WeightSet,
    ns: &NodeSet,
    field: &dyn ExternalField,
    z: Complex64,
    prec: &PrecisionContext,
) -> Result<FactorizationPoint> {
    let n = ns.n;
    let wl = eval_wn_ln(ws, ns, &prec.from_c64(z), prec)?;
    let v = field.v_an(z, Side::Principal);
    let nf = n as f64;
    let log_w = cln_abs(&wl.w_tilde);
    let literal = log_w - 0.5 * nf * v.re;
    let rescaled = literal + (2.0 * nf + 1.0) * nf.ln();
    Ok(FactorizationPoint { n, normalized_log: literal / nf, rescaled_log: rescaled / nf, barycentric_residual: wl.residual })
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// Sweep over `n` of the normalized size of `E_n = W̃_n e^{−(n/2)V^an}` at one point `ζ` off `[A, B]`.
pub fn wn_factorization_check<F>(
    d: &DensitySpec,
    values: F,
    field: &dyn ExternalField,
    z: Complex64,
    n_list: &[usize],
    prec: &PrecisionContext,
) -> Result<FactorizationSweep>
where
    F: Fn(&NodeSet, &PrecisionContext) -> Result<Vec<Complex>>,
{
    let mut points = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let ns = quantile_nodes(d, n, prec)?;
        let f = values(&ns, prec)?;
        let ws = WeightSet::new(&ns, &f);
        points.push(wn_factorization_point(&ws, &ns, field, z, prec)?);
    }
    let q: Vec<f64> = points.iter().map(|p| p.normalized_log.abs()).collect();
    let t: Vec<f64> = points.iter().map(|p| (p.n as f64).ln() / p.n as f64).collect();
    let envelope = q.iter().zip(&t).map(|(a, b)| a * b).sum::<f64>() / t.iter().map(|b| b * b).sum::<f64>();
    let within_envelope = q.iter().zip(&t).all(|(a, b)| *a <= ENVELOPE_SLACK * envelope * b);
    let rq: Vec<f64> = points.iter().map(|p| p.rescaled_log.abs()).collect();
    Ok(FactorizationSweep {
        z,
        monotone: strictly_decreasing(&q),
        envelope,
        within_envelope,
        rescaled_monotone: strictly_decreasing(&rq),
        points,
    })
}
