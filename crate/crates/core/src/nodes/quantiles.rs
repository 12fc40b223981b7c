use rug::{Complex, Float};

use super::density::DensitySpec;
use crate::error::{Error, Result};
use crate::numerics::PrecisionContext;

/// Quantile nodes `α_j` with `F(α_j) = j/n`, `j = 0..=2n`.
#[derive(Clone, Debug)]
pub struct NodeSet {
    pub n: usize,
    pub alpha: Vec<Float>,
    pub f_values: Vec<f64>,
    pub bits: u32,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Scaled node `a_j = n·α_j`.
    pub fn a(&self, j: usize) -> Float {
        Float::with_val(self.bits, &self.alpha[j] * self.n as u32)
    }

    pub fn alpha_c(&self, j: usize) -> Complex {
        Complex::with_val(self.bits, &self.alpha[j])
    }

    pub fn a_c(&self, j: usize) -> Complex {
        Complex::with_val(self.bits, self.a(j))
    }

    pub fn alpha_f64(&self) -> Vec<f64> {
        self.alpha.iter().map(|x| x.to_f64()).collect()
    }

    /// Node set in a different order; used for permutation-invariance checks.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            n: self.n,
            alpha: perm.iter().map(|&i| self.alpha[i].clone()).collect(),
            f_values: perm.iter().map(|&i| self.f_values[i]).collect(),
            bits: self.bits,
        }
    }

    /// Nodes supplied directly, e.g. for oracle tests.
    pub fn from_alpha(n: usize, alpha: Vec<Float>, bits: u32) -> Self {
        let f_values = (0..alpha.len()).map(|j| j as f64 / n as f64).collect();
        Self { n, alpha, f_values, bits }
    }
}

const NEWTON_MAX: usize = 64;

/// Bisection on the f64 CDF to width `2^-40`, then multiprecision Newton.
pub fn quantile_nodes(d: &DensitySpec, n: usize, prec: &PrecisionContext) -> Result<NodeSet> {
    assert!(n >= 1, "n must be positive");
    let w = prec.bits + 16;
    let thresh = Float::with_val(w, Float::i_exp(1, 8 - prec.bits as i32));
    let mut alpha = Vec::with_capacity(2 * n + 1);
    alpha.push(Float::with_val(prec.bits, d.a));
    for j in 1..2 * n {
        let target_f = j as f64 / n as f64;
        let (mut lo, mut hi) = (d.a, d.b);
        if (d.cdf(lo) - target_f) * (d.cdf(hi) - target_f) > 0.0 {
            return Err(Error::RootNotBracketed(target_f));
        }
        while hi - lo > (-40f64).exp2() {
            let mid = 0.5 * (lo + hi);
            if d.cdf(mid) < target_f {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let target = Float::with_val(w, j as u32) / n as u32;
        let mut x = Float::with_val(w, 0.5 * (lo + hi));
        let mut done = false;
        for _ in 0..NEWTON_MAX {
            let r = Float::with_val(w, d.cdf_mp(&x) - &target);
            if r.clone().abs() <= thresh {
                done = true;
                break;
            }
            x -= r / d.kappa_mp(&x);
        }
        if !done {
            return Err(Error::NoConvergence { what: "quantile Newton", iterations: NEWTON_MAX });
        }
        alpha.push(Float::with_val(prec.bits, &x));
    }
    alpha.push(Float::with_val(prec.bits, d.b));
    let f_values = (0..=2 * n).map(|j| j as f64 / n as f64).collect();
    Ok(NodeSet { n, alpha, f_values, bits: prec.bits })
}
