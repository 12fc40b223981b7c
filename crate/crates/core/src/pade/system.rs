use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::nodes::NodeSet;
use crate::numerics::{cabs, lu_solve, powers, vec_norm_inf, DenseMatrix, PrecisionContext, Polynomial};

/// Linear system for `(q_0..q_{n−1}, p_0..p_n)` with `q_n = 1` moved to the right-hand side,
/// assembled in the scaled variable `ζ = z/n`.
#[derive(Clone, Debug)]
pub struct PadeSystem {
    pub n: usize,
    pub m: DenseMatrix,
    pub b: Vec<Complex>,
    pub alpha: Vec<Complex>,
    pub f: Vec<Complex>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NdCheck {
    pub nd_holds: bool,
    pub log_abs_det: f64,
    pub cond_estimate: f64,
}

/// `Q̂` monic of degree `n` and `P̂` of degree `≤ n` in `ζ`, with residuals `Q̂f − P̂` at the nodes.
#[derive(Clone, Debug)]
pub struct PadePair {
    pub n: usize,
    pub qhat: Polynomial,
    pub phat: Polynomial,
    pub interp_residuals: Vec<Complex>,
    pub cond_estimate: f64,
    pub log_abs_det: f64,
}

impl PadePair {
    /// `max_j |Q̂f − P̂|(α_j) / max_j |f_j|`.
    pub fn normalized_residual(&self, f: &[Complex]) -> f64 {
        let r = vec_norm_inf(&self.interp_residuals);
        let s = vec_norm_inf(f);
        if s.is_zero() {
            r.to_f64()
        } else {
            (r / s).to_f64()
        }
    }
}

pub fn assemble_system(ns: &NodeSet, f: &[Complex]) -> PadeSystem {
    assert_eq!(f.len(), ns.len(), "one value per node");
    let n = ns.n;
    let bits = ns.bits;
    let size = 2 * n + 1;
    let mut m = DenseMatrix::zeros(size, size, bits);
    let mut b = Vec::with_capacity(size);
    let alpha: Vec<Complex> = (0..ns.len()).map(|j| ns.alpha_c(j)).collect();
    for (j, aj) in alpha.iter().enumerate() {
        let pw = powers(aj, n);
        for k in 0..n {
            m.set(j, k, Complex::with_val(bits, &pw[k] * &f[j]));
        }
        for k in 0..=n {
            m.set(j, n + k, Complex::with_val(bits, -&pw[k]));
        }
        b.push(-Complex::with_val(bits, &pw[n] * &f[j]));
    }
    PadeSystem { n, m, b, alpha, f: f.to_vec() }
}

fn condition_threshold(prec: &PrecisionContext) -> f64 {
    (prec.bits as f64 / 2.0).exp2()
}

/// Nondegeneracy: nonsingular LU and condition estimate at most `2^{bits/2}`.
pub fn check_nd(sys: &PadeSystem, prec: &PrecisionContext) -> NdCheck {
    match lu_solve(&sys.m, &sys.b, prec) {
        Ok(s) => NdCheck {
            nd_holds: s.cond_estimate <= condition_threshold(prec),
            log_abs_det: s.log_abs_det,
            cond_estimate: s.cond_estimate,
        },
        Err(_) => NdCheck { nd_holds: false, log_abs_det: f64::NEG_INFINITY, cond_estimate: f64::INFINITY },
    }
}

pub fn solve_pade(sys: &PadeSystem, prec: &PrecisionContext) -> Result<PadePair> {
    let s = lu_solve(&sys.m, &sys.b, prec).map_err(|_| Error::Degenerate)?;
    if s.cond_estimate > condition_threshold(prec) {
        return Err(Error::Degenerate);
    }
    let n = sys.n;
    let bits = prec.bits;
    let mut qc: Vec<Complex> = s.solution[..n].to_vec();
    qc.push(Complex::with_val(bits, 1));
    let qhat = Polynomial::new(qc, bits);
    let phat = Polynomial::new(s.solution[n..].to_vec(), bits);
    let interp_residuals = sys
        .alpha
        .iter()
        .zip(&sys.f)
        .map(|(a, fj)| Complex::with_val(bits, &qhat.eval(a) * fj) - phat.eval(a))
        .collect();
    Ok(PadePair { n, qhat, phat, interp_residuals, cond_estimate: s.cond_estimate, log_abs_det: s.log_abs_det })
}

/// Interpolant of `Q̂f` through all `2n+1` nodes compared with `P̂`.
#[derive(Clone, Debug)]
pub struct Recovery {
    pub interpolant: Polynomial,
    /// `max_{k>n} |c_k| / max_k |c_k|`.
    pub tail_ratio: f64,
    /// `max_{k≤n} |c_k − p̂_k| / max_k |p̂_k|`.
    pub p_mismatch: f64,
}

pub fn recover_p_interpolant(pp: &PadePair, sys: &PadeSystem, threshold: f64) -> Result<Recovery> {
    let bits = pp.qhat.bits;
    let ys: Vec<Complex> =
        sys.alpha.iter().zip(&sys.f).map(|(a, fj)| Complex::with_val(bits, &pp.qhat.eval(a) * fj)).collect();
    let interpolant = Polynomial::interpolate(&sys.alpha, &ys, bits);
    let all = vec_norm_inf(&interpolant.coeffs);
    let tail: Vec<Complex> = (pp.n + 1..=2 * pp.n).map(|k| interpolant.coeff(k)).collect();
    let tail_ratio = if all.is_zero() { 0.0 } else { (vec_norm_inf(&tail) / &all).to_f64() };
    let pn = vec_norm_inf(&pp.phat.coeffs);
    let mut diff = Float::new(bits);
    for k in 0..=pp.n {
        let d = cabs(&Complex::with_val(bits, &interpolant.coeff(k) - &pp.phat.coeff(k)));
        if d > diff {
            diff = d;
        }
    }
    let p_mismatch = if pn.is_zero() { diff.to_f64() } else { (diff / pn).to_f64() };
    if tail_ratio > threshold {
        return Err(Error::DegreeCollapseFailed(tail_ratio));
    }
    Ok(Recovery { interpolant, tail_ratio, p_mismatch })
}
