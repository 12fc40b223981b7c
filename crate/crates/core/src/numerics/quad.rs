use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;
use rug::float::Constant;
use rug::{Complex, Float};

use super::{cabs, PrecisionContext};
use crate::error::{Error, Result};

const MAX_DOUBLINGS: usize = 12;

type Rule = Arc<(Vec<Float>, Vec<Float>)>;

static GL_CACHE: Lazy<Mutex<HashMap<(usize, u32), Rule>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Gauss–Legendre nodes and weights on [-1, 1], Newton-refined from f64 guesses.
pub fn gauss_legendre_rule(m: usize, bits: u32) -> Rule {
    if let Some(r) = GL_CACHE.lock().unwrap().get(&(m, bits)) {
        return r.clone();
    }
    let work = bits + 32;
    let mut nodes = vec![Float::new(bits); m];
    let mut weights = vec![Float::new(bits); m];
    let iters = 4 + (work as f64 / 50.0).log2().ceil().max(0.0) as usize;
    for i in 0..m.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut x = Float::with_val(work, guess);
        for _ in 0..iters {
            let (p, d) = legendre_with_derivative(m, &x, work);
            x -= Float::with_val(work, &p / &d);
        }
        let (_, dp) = legendre_with_derivative(m, &x, work);
        let one_minus = Float::with_val(work, 1 - Float::with_val(work, x.square_ref()));
        let w = Float::with_val(work, 2u32 / (one_minus * Float::with_val(work, dp.square_ref())));
        nodes[i] = Float::with_val(bits, -&x);
        nodes[m - 1 - i] = Float::with_val(bits, &x);
        weights[i] = Float::with_val(bits, &w);
        weights[m - 1 - i] = Float::with_val(bits, &w);
    }
    if m % 2 == 1 {
        nodes[m / 2] = Float::new(bits);
    }
    let rule = Arc::new((nodes, weights));
    GL_CACHE.lock().unwrap().insert((m, bits), rule.clone());
    rule
}

fn legendre_with_derivative(m: usize, x: &Float, bits: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(bits, 1);
    let mut p1 = x.clone();
    for k in 2..=m {
        let kk = k as u32;
        let t = Float::with_val(bits, x * &p1) * (2 * kk - 1);
        let p2 = (t - Float::with_val(bits, &p0 * (kk - 1))) / kk;
        p0 = p1;
        p1 = p2;
    }
    let num = Float::with_val(bits, x * &p1) - &p0;
    let den = Float::with_val(bits, x.square_ref()) - 1u32;
    let d = num * m as u32 / den;
    (p1, d)
}

fn gl_fixed<F>(f: &F, a: &Float, b: &Float, m: usize, bits: u32) -> (Complex, Float)
where
    F: Fn(&Float) -> Complex,
{
    let rule = gauss_legendre_rule(m, bits);
    let half = Float::with_val(bits, b - a) / 2u32;
    let mid = Float::with_val(bits, a + b) / 2u32;
    let mut sum = Complex::new(bits);
    let mut abs_sum = Float::new(bits);
    for (x, w) in rule.0.iter().zip(&rule.1) {
        let t = Float::with_val(bits, &mid + Float::with_val(bits, &half * x));
        let v = f(&t);
        abs_sum += Float::with_val(bits, cabs(&v) * w);
        sum += Complex::with_val(bits, &v * w);
    }
    (sum * &half, abs_sum * half.abs())
}

/// Gauss–Legendre on [a, b] with `m` doubled until two successive values agree to `tol_rel·scale`,
/// where `scale` is the quadrature of `|f|`.
pub fn gauss_legendre<F>(f: F, a: &Float, b: &Float, m: usize, prec: &PrecisionContext) -> Result<Complex>
where
    F: Fn(&Float) -> Complex,
{
    assert!(m >= 2, "at least two nodes");
    let bits = prec.bits;
    let (mut prev, _) = gl_fixed(&f, a, b, m, bits);
    let mut m = m;
    for _ in 0..MAX_DOUBLINGS {
        m *= 2;
        let (cur, scale) = gl_fixed(&f, a, b, m, bits);
        let diff = cabs(&Complex::with_val(bits, &cur - &prev));
        if diff <= scale * prec.tol_rel() {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NoConvergence { what: "gauss_legendre", iterations: MAX_DOUBLINGS })
}

/// Smooth closed curve `t ↦ z(t)`, `t ∈ [0, 2π)`, positively oriented.
pub trait Curve: Sync {
    /// Returns `(z(t), z'(t))`.
    fn point(&self, t: &Float) -> (Complex, Complex);
}

#[derive(Clone, Debug)]
pub struct Circle {
    pub center: Complex,
    pub radius: Float,
}

impl Curve for Circle {
    fn point(&self, t: &Float) -> (Complex, Complex) {
        let bits = self.radius.prec();
        let (s, c) = t.clone().sin_cos(Float::new(bits));
        let e = Complex::with_val(bits, (c, s));
        let z = Complex::with_val(bits, &e * &self.radius) + &self.center;
        let dz = Complex::with_val(bits, &e * &self.radius).mul_i(false);
        (z, dz)
    }
}

/// Axis-aligned ellipse with semi-axes `a` (real direction) and `b`.
#[derive(Clone, Debug)]
pub struct Ellipse {
    pub center: Complex,
    pub a: Float,
    pub b: Float,
}

impl Curve for Ellipse {
    fn point(&self, t: &Float) -> (Complex, Complex) {
        let bits = self.a.prec();
        let (s, c) = t.clone().sin_cos(Float::new(bits));
        let re = Float::with_val(bits, &self.a * &c);
        let im = Float::with_val(bits, &self.b * &s);
        let z = Complex::with_val(bits, (re, im)) + &self.center;
        let dre = -Float::with_val(bits, &self.a * &s);
        let dim = Float::with_val(bits, &self.b * &c);
        (z, Complex::with_val(bits, (dre, dim)))
    }
}

fn trapezoid_points<F, C>(f: &F, curve: &C, m: usize, offset: bool, bits: u32) -> (Complex, Float)
where
    F: Fn(&Complex) -> Complex,
    C: Curve + ?Sized,
{
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let h = Float::with_val(bits, &two_pi / m as u32);
    let mut sum = Complex::new(bits);
    let mut abs_sum = Float::new(bits);
    for k in 0..m {
        let idx = if offset { Float::with_val(bits, k as f64 + 0.5) } else { Float::with_val(bits, k) };
        let t = Float::with_val(bits, &h * &idx);
        let (z, dz) = curve.point(&t);
        let v = Complex::with_val(bits, &f(&z) * &dz);
        abs_sum += cabs(&v);
        sum += v;
    }
    (sum * &h, abs_sum * h)
}

/// Periodic trapezoid rule with point doubling (previous samples reused).
pub fn contour_trapezoid<F, C>(f: F, curve: &C, m: usize, prec: &PrecisionContext) -> Result<Complex>
where
    F: Fn(&Complex) -> Complex,
    C: Curve + ?Sized,
{
    assert!(m >= 2, "at least two samples");
    let bits = prec.bits;
    let (mut cur, mut scale) = trapezoid_points(&f, curve, m, false, bits);
    let mut m = m;
    for _ in 0..MAX_DOUBLINGS {
        let (mid, mid_scale) = trapezoid_points(&f, curve, m, true, bits);
        let next = Complex::with_val(bits, &cur + &mid) / 2u32;
        scale = (scale + mid_scale) / 2u32;
        m *= 2;
        let diff = cabs(&Complex::with_val(bits, &next - &cur));
        cur = next;
        if diff <= Float::with_val(bits, &scale * prec.tol_rel()) {
            return Ok(cur);
        }
    }
    Err(Error::NoConvergence { what: "contour_trapezoid", iterations: MAX_DOUBLINGS })
}

/// Gauss–Legendre nodes and weights on [-1, 1] in f64.
pub fn gauss_legendre_f64(m: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = gauss_legendre_rule(m, 128);
    (rule.0.iter().map(|x| x.to_f64()).collect(), rule.1.iter().map(|w| w.to_f64()).collect())
}
