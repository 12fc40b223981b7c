use std::sync::Mutex;

use once_cell::sync::Lazy;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::numerics::{cabs, fit_rate, FitKind, PrecisionContext};

/// Exponent `s` of the Hurwitz zeta function together with its Euler–Maclaurin parameters.
#[derive(Clone, Debug)]
pub struct HurwitzParams {
    pub s: Complex,
    /// Summation restarts at `a + M` with `Re(a + M) ≥ series_cutoff`.
    pub series_cutoff: usize,
    /// Upper bound on Bernoulli correction pairs; summation stops once terms drop below precision.
    pub bernoulli_terms: usize,
}

impl HurwitzParams {
    /// Cutoff and correction count scaled to the precision.
    pub fn new(s: Complex, prec: &PrecisionContext) -> Result<Self> {
        if *s.real() <= 1 {
            return Err(Error::DomainError(format!("Re s = {} must exceed 1", s.real().to_f64())));
        }
        let abs_s = cabs(&s).to_f64();
        let bits = prec.bits as usize;
        let series_cutoff = 16.max(abs_s.ceil() as usize + 8).max(bits / 4);
        let bernoulli_terms = 8.max(bits / 5 + abs_s as usize);
        Ok(Self { s, series_cutoff, bernoulli_terms })
    }

    pub fn from_f64(re: f64, im: f64, prec: &PrecisionContext) -> Result<Self> {
        Self::new(prec.complex(re, im), prec)
    }

    /// Same exponent with parameters rescaled to another precision.
    pub fn at_precision(&self, prec: &PrecisionContext) -> Result<Self> {
        Self::new(Complex::with_val(prec.bits, &self.s), prec)
    }
}

static BERNOULLI: Lazy<Mutex<Vec<Rational>>> = Lazy::new(|| Mutex::new(vec![Rational::from(1)]));

/// Bernoulli number `B_k` (with `B_1 = −1/2`).
pub fn bernoulli(k: usize) -> Rational {
    let mut table = BERNOULLI.lock().unwrap();
    while table.len() <= k {
        let m = table.len();
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0.
        let mut acc = Rational::new();
        for (j, bj) in table.iter().enumerate() {
            let binom = Integer::from(Integer::binomial_u(m as u32 + 1, j as u32));
            let mut t = bj.clone();
            t *= binom;
            acc += t;
        }
        let mut next = -acc;
        next /= Integer::from(m + 1);
        table.push(next);
    }
    table[k].clone()
}

/// `ζ(s, a) = Σ_{m≥0} (m + a)^{−s}` by a direct head sum and an Euler–Maclaurin tail.
pub fn hurwitz_zeta(p: &HurwitzParams, a: &Complex, prec: &PrecisionContext) -> Result<Complex> {
    if *p.s.real() <= 1 {
        return Err(Error::DomainError("Re s must exceed 1".into()));
    }
    if *a.real() <= 0 {
        return Err(Error::DomainError(format!("Re a = {} must be positive", a.real().to_f64())));
    }
    let w = prec.bits + 32;
    let s = Complex::with_val(w, &p.s);
    let a = Complex::with_val(w, a);
    let re_a = a.real().to_f64();
    let shift = if re_a < p.series_cutoff as f64 { (p.series_cutoff as f64 - re_a).ceil() as usize } else { 0 };
    let neg_s = Complex::with_val(w, -&s);

    let mut sum = Complex::new(w);
    for m in 0..shift {
        let base = Complex::with_val(w, &a + m as u32);
        sum += (base.ln() * &neg_s).exp();
    }
    let big_n = Complex::with_val(w, &a + shift as u32);
    let ln_n = big_n.clone().ln();
    let n_neg_s = Complex::with_val(w, &ln_n * &neg_s).exp();
    let s_minus_1 = Complex::with_val(w, &s - 1u32);
    // N^{1−s}/(s−1) + N^{−s}/2
    sum += Complex::with_val(w, &n_neg_s * &big_n) / &s_minus_1;
    sum += Complex::with_val(w, &n_neg_s / 2u32);

    let inv_n2 = Complex::with_val(w, big_n.square_ref()).recip();
    let tiny = Float::with_val(w, Float::i_exp(1, -(w as i32)));
    // poch = s(s+1)…(s+2k−2), npow = N^{−s−2k+1}
    let mut poch = s.clone();
    let mut npow = Complex::with_val(w, &n_neg_s / &big_n);
    let mut factorial = Integer::from(2);
    let mut converged = false;
    for k in 1..=p.bernoulli_terms {
        let mut b = bernoulli(2 * k);
        b /= &factorial;
        let coeff = Float::with_val(w, &b);
        let term = Complex::with_val(w, &poch * &npow) * &coeff;
        let small = cabs(&term) <= Float::with_val(w, &tiny * cabs(&sum));
        sum += term;
        if small && k >= 2 {
            converged = true;
            break;
        }
        let q = Complex::with_val(w, &s + (2 * k - 1) as u32) * Complex::with_val(w, &s + (2 * k) as u32);
        poch *= q;
        npow *= &inv_n2;
        factorial *= ((2 * k + 1) * (2 * k + 2)) as u32;
    }
    if !converged {
        return Err(Error::NoConvergence { what: "hurwitz_zeta Euler-Maclaurin tail", iterations: p.bernoulli_terms });
    }
    Ok(Complex::with_val(prec.bits, sum))
}

/// Log-log slope of `sup_{α∈[A,B]} |ζ(s, nα)|` against `n`.
pub fn hurwitz_bound_check(
    p: &HurwitzParams,
    a: f64,
    b: f64,
    n_list: &[usize],
    prec: &PrecisionContext,
) -> Result<(f64, f64)> {
    if n_list.len() < 2 {
        return Err(Error::DegenerateFit("hurwitz bound needs at least two n".into()));
    }
    let probes = 17;
    let mut points = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let mut sup = 0.0f64;
        for i in 0..probes {
            let alpha = a + (b - a) * i as f64 / (probes - 1) as f64;
            let z = hurwitz_zeta(p, &prec.complex(n as f64 * alpha, 0.0), prec)?;
            sup = sup.max(cabs(&z).to_f64());
        }
        points.push((n as f64, sup));
    }
    fit_rate(&points, FitKind::LogLog)
}
