use num_complex::Complex64;
use rug::{Complex, Float};

use super::density::DensitySpec;
use super::field::FieldEvaluator;
use super::quantiles::{quantile_nodes, NodeSet};
use crate::error::{Error, Result};
use crate::numerics::{cabs, fit_rate, gauss_legendre, FitKind, PrecisionContext};
use crate::specialfn::{principal_log, Side};

/// Error sweep together with its fitted rate.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
}

impl SweepFit {
    pub fn fit(points: Vec<(f64, f64)>, kind: FitKind) -> Result<Self> {
        let (slope, intercept) = fit_rate(&points, kind)?;
        Ok(Self { points, slope, intercept })
    }
}

/// `(n·min gap, n·max gap)` of consecutive nodes.
pub fn spacing_check(ns: &NodeSet) -> (f64, f64) {
    let n = ns.n as u32;
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for w in ns.alpha.windows(2) {
        let g = (Float::with_val(ns.bits, &w[1] - &w[0]) * n).to_f64();
        lo = lo.min(g);
        hi = hi.max(g);
    }
    (lo, hi)
}

/// `n²·max |Δ²α_j|`, reported without a bound.
pub fn second_difference_diagnostic(ns: &NodeSet) -> f64 {
    let n2 = (ns.n * ns.n) as u32;
    ns.alpha
        .windows(3)
        .map(|w| {
            let d = Float::with_val(ns.bits, &w[2] - &w[1]) - Float::with_val(ns.bits, &w[1] - &w[0]);
            (d * n2).abs().to_f64()
        })
        .fold(0.0, f64::max)
}

fn integral_against_kappa<F: Fn(f64) -> f64>(d: &DensitySpec, psi: &F) -> f64 {
    let (x, w) = crate::numerics::quad::gauss_legendre_f64(64);
    let panels = 16;
    let h = (d.b - d.a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let mid = d.a + h * (p as f64 + 0.5);
        for (t, wt) in x.iter().zip(&w) {
            let y = mid + 0.5 * h * t;
            acc += 0.5 * h * wt * psi(y) * d.kappa(y);
        }
    }
    acc
}

/// Error `|(1/n)Σψ(α_j) − ∫ψκ|` over the sweep and its log-log slope.
pub fn riemann_sum_check<F>(d: &DensitySpec, n_list: &[usize], psi: F, prec: &PrecisionContext) -> Result<SweepFit>
where
    F: Fn(f64) -> f64,
{
    let exact = integral_against_kappa(d, &psi);
    let mut points = Vec::new();
    for &n in n_list {
        let ns = quantile_nodes(d, n, prec)?;
        let s: f64 = ns.alpha.iter().map(|x| psi(x.to_f64())).sum::<f64>() / n as f64;
        points.push((n as f64, (s - exact).abs()));
    }
    SweepFit::fit(points, FitKind::LogLog)
}

fn on_interval(z: &Complex, ns: &NodeSet) -> bool {
    let a = &ns.alpha[0];
    let b = &ns.alpha[ns.len() - 1];
    z.imag().is_zero() && z.real() >= a && z.real() <= b
}

/// `log Ω_n(ζ) = Σ log(ζ − α_j)` with principal branches.
pub fn omega_log_eval(ns: &NodeSet, z: &Complex) -> Result<Complex> {
    if on_interval(z, ns) {
        return Err(Error::OnCut);
    }
    let mut acc = Complex::new(ns.bits);
    for a in &ns.alpha {
        acc += principal_log(&Complex::with_val(ns.bits, z - a), Side::Principal)?;
    }
    Ok(acc)
}

/// `∫ log|ζ − t| κ(t) dt` by multiprecision Gauss–Legendre.
pub fn log_potential_mp(d: &DensitySpec, z: &Complex, prec: &PrecisionContext) -> Result<Float> {
    let bits = prec.bits;
    let f = |t: &Float| {
        let diff = Complex::with_val(bits, z - t);
        Complex::with_val(bits, cabs(&diff).ln() * d.kappa_mp(t))
    };
    let v = gauss_legendre(f, &prec.real(d.a), &prec.real(d.b), 32, prec)?;
    Ok(v.real().clone())
}

/// `|(1/n) log|Ω_n(ζ)| − ∫ log|ζ − t| κ dt|` over the sweep and its log-log slope.
pub fn logpot_check(d: &DensitySpec, n_list: &[usize], z: &Complex, prec: &PrecisionContext) -> Result<SweepFit> {
    let pot = log_potential_mp(d, z, prec)?;
    let mut points = Vec::new();
    for &n in n_list {
        let ns = quantile_nodes(d, n, prec)?;
        let l = omega_log_eval(&ns, z)?;
        let err = Float::with_val(prec.bits, l.real() / n as u32) - &pot;
        points.push((n as f64, err.abs().to_f64()));
    }
    SweepFit::fit(points, FitKind::LogLog)
}

/// `ω_n′(a_j) = n^{2n} Π_{k≠j}(α_j − α_k)` as `(log|·|, sign)`.
pub fn omega_prime(ns: &NodeSet, j: usize) -> (Float, Complex) {
    let bits = ns.bits;
    let n = ns.n;
    let mut log_abs = Float::with_val(bits, n as u32).ln() * (2 * n) as u32;
    for (k, a) in ns.alpha.iter().enumerate() {
        if k != j {
            log_abs += Float::with_val(bits, &ns.alpha[j] - a).abs().ln();
        }
    }
    let negatives = ns.len() - 1 - j;
    let sign = if negatives % 2 == 0 { 1 } else { -1 };
    (log_abs, Complex::with_val(bits, sign))
}

/// `(1/n) log|ω_n′(a_j)| − 2 log n − ∫ log|α_j − t| κ dt` for interior nodes; max over `j`.
pub fn omega_prime_asymptotic_gap(ns: &NodeSet, fe: &FieldEvaluator) -> f64 {
    let n = ns.n as f64;
    (1..ns.len() - 1)
        .map(|j| {
            let (l, _) = omega_prime(ns, j);
            let x = ns.alpha[j].to_f64();
            let pot = fe.log_potential_an(Complex64::new(x, 0.0), Side::Upper).re;
            (l.to_f64() / n - 2.0 * n.ln() - pot).abs()
        })
        .fold(0.0, f64::max)
}
