use rug::ops::Pow;
use rug::{Complex, Float};

use super::system::PadePair;
use crate::error::{Error, Result};
use crate::nodes::{omega_prime, NodeSet};
use crate::numerics::{cabs, PrecisionContext};

/// Barycentric weights `w_j = f(a_j)/ω_n′(a_j)`, kept as `(log|w_j|, phase)` and as values.
#[derive(Clone, Debug)]
pub struct WeightSet {
    pub n: usize,
    pub log_w: Vec<(Float, Complex)>,
    /// `ŵ_j = f(a_j)/Ω_n′(α_j) = n^{2n} w_j`, used for all scaled-variable sums.
    pub w_scaled: Vec<Complex>,
    pub f: Vec<Complex>,
}

impl WeightSet {
    pub fn new(ns: &NodeSet, f: &[Complex]) -> Self {
        let bits = ns.bits;
        let n = ns.n;
        let log_n2n = Float::with_val(bits, n as u32).ln() * (2 * n) as u32;
        let mut log_w = Vec::with_capacity(ns.len());
        let mut w_scaled = Vec::with_capacity(ns.len());
        for (j, fj) in f.iter().enumerate() {
            let (lo, sign) = omega_prime(ns, j);
            let af = cabs(fj);
            let phase = if af.is_zero() {
                Complex::with_val(bits, 1)
            } else {
                Complex::with_val(bits, fj / &af) * &sign
            };
            let lw = if af.is_zero() { Float::with_val(bits, f64::NEG_INFINITY) } else { af.ln() - &lo };
            let mag_scaled = Float::with_val(bits, &lw + &log_n2n).exp();
            w_scaled.push(Complex::with_val(bits, &phase * &mag_scaled));
            log_w.push((lw, phase));
        }
        Self { n, log_w, w_scaled, f: f.to_vec() }
    }

    /// `w_j` in the unscaled variable, reassembled from its split form.
    pub fn w(&self, j: usize) -> Complex {
        let (l, ph) = &self.log_w[j];
        Complex::with_val(ph.prec(), ph * Float::with_val(l.prec(), l.exp_ref()))
    }
}

/// Normalized discrete orthogonality sums `|Σ Q̂(α_j) α_j^k ŵ_j| / Σ|…|` for `k = 0..=n`.
#[derive(Clone, Debug)]
pub struct OrthogonalityReport {
    pub per_degree: Vec<f64>,
    /// Maximum over `k ≤ n−1`, the range covered by orthogonality.
    pub max_lemma: f64,
}

pub fn discrete_orthogonality_check(pp: &PadePair, ws: &WeightSet, ns: &NodeSet) -> OrthogonalityReport {
    let bits = ns.bits;
    let n = ns.n;
    let base: Vec<Complex> = (0..ns.len())
        .map(|j| Complex::with_val(bits, &pp.qhat.eval(&ns.alpha_c(j)) * &ws.w_scaled[j]))
        .collect();
    let mut per_degree = Vec::with_capacity(n + 1);
    let mut terms = base.clone();
    for _k in 0..=n {
        let mut sum = Complex::new(bits);
        let mut abs = Float::new(bits);
        for t in &terms {
            sum += t;
            abs += cabs(t);
        }
        per_degree.push(if abs.is_zero() { 0.0 } else { (cabs(&sum) / abs).to_f64() });
        for (j, t) in terms.iter_mut().enumerate() {
            *t *= &ns.alpha[j];
        }
    }
    let max_lemma = per_degree[..n].iter().cloned().fold(0.0, f64::max);
    OrthogonalityReport { per_degree, max_lemma }
}

/// `W̃_n(ζ) = W_n(nζ)`, `L̃_n(ζ) = L_n(nζ)` and the barycentric identity residual.
#[derive(Clone, Debug)]
pub struct WnLn {
    pub w_tilde: Complex,
    pub l_tilde: Complex,
    pub omega_scaled: Complex,
    pub residual: f64,
}

/// `W_n` by direct summation, `L_n` by the Lagrange product form.
pub fn eval_wn_ln(ws: &WeightSet, ns: &NodeSet, z: &Complex, prec: &PrecisionContext) -> Result<WnLn> {
    let bits = prec.bits;
    let n = ns.n;
    let diffs: Vec<Complex> = ns.alpha.iter().map(|a| Complex::with_val(bits, z - a)).collect();
    if let Some(j) = diffs.iter().position(|d| d.is_zero()) {
        return Err(Error::AtNode(j));
    }
    let scale = Float::with_val(bits, n as u32).pow((2 * n + 1) as u32);
    let mut w_sum = Complex::new(bits);
    for (wj, d) in ws.w_scaled.iter().zip(&diffs) {
        w_sum += Complex::with_val(bits, wj / d);
    }
    let w_tilde = w_sum / &scale;
    let mut l_tilde = Complex::new(bits);
    for j in 0..ns.len() {
        let mut term = ws.f[j].clone();
        for k in 0..ns.len() {
            if k != j {
                let den = Complex::with_val(bits, &ns.alpha[j] - &ns.alpha[k]);
                term *= Complex::with_val(bits, &diffs[k] / den);
            }
        }
        l_tilde += term;
    }
    let mut omega = Complex::with_val(bits, 1);
    for d in &diffs {
        omega *= d;
    }
    let omega_scaled = omega * &scale;
    let lhs = Complex::with_val(bits, &w_tilde * &omega_scaled);
    let residual = (cabs(&Complex::with_val(bits, &lhs - &l_tilde)) / cabs(&l_tilde)).to_f64();
    Ok(WnLn { w_tilde, l_tilde, omega_scaled, residual })
}
