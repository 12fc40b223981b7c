use rug::float::Constant;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of the raw (unnormalized) node density.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityKind {
    Uniform,
    /// `Σ c_k x^k`.
    Poly { coeffs: Vec<f64> },
    /// `base + cos(π(x − center)/width)`.
    CosineBump { center: f64, width: f64, base: f64 },
}

/// Node density `κ` on `[A, B]` scaled to mass 2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensitySpec {
    pub a: f64,
    pub b: f64,
    pub kind: DensityKind,
    pub normalization: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
}

const PROBES: usize = 1000;

impl DensityKind {
    fn raw(&self, x: f64) -> f64 {
        match self {
            DensityKind::Uniform => 1.0,
            DensityKind::Poly { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            DensityKind::CosineBump { center, width, base } => {
                base + (std::f64::consts::PI * (x - center) / width).cos()
            }
        }
    }

    fn raw_antiderivative(&self, x: f64) -> f64 {
        match self {
            DensityKind::Uniform => x,
            DensityKind::Poly { coeffs } => {
                coeffs.iter().enumerate().rev().fold(0.0, |acc, (k, c)| acc * x + c / (k + 1) as f64) * x
            }
            DensityKind::CosineBump { center, width, base } => {
                let pi = std::f64::consts::PI;
                base * x + width / pi * (pi * (x - center) / width).sin()
            }
        }
    }

    fn raw_mp(&self, x: &Float) -> Float {
        let bits = x.prec();
        match self {
            DensityKind::Uniform => Float::with_val(bits, 1),
            DensityKind::Poly { coeffs } => {
                let mut acc = Float::new(bits);
                for c in coeffs.iter().rev() {
                    acc *= x;
                    acc += *c;
                }
                acc
            }
            DensityKind::CosineBump { center, width, base } => {
                let arg = Float::with_val(bits, Constant::Pi) * Float::with_val(bits, x - *center) / *width;
                arg.cos() + *base
            }
        }
    }

    fn raw_antiderivative_mp(&self, x: &Float) -> Float {
        let bits = x.prec();
        match self {
            DensityKind::Uniform => x.clone(),
            DensityKind::Poly { coeffs } => {
                let mut acc = Float::new(bits);
                for (k, c) in coeffs.iter().enumerate().rev() {
                    acc *= x;
                    acc += Float::with_val(bits, *c) / (k as u32 + 1);
                }
                acc * x
            }
            DensityKind::CosineBump { center, width, base } => {
                let pi = Float::with_val(bits, Constant::Pi);
                let arg = Float::with_val(bits, &pi * Float::with_val(bits, x - *center)) / *width;
                Float::with_val(bits, x * *base) + arg.sin() * *width / pi
            }
        }
    }
}

/// Validates positivity on a probe grid and fixes the multiplier giving mass 2.
pub fn build_density(kind: DensityKind, a: f64, b: f64) -> Result<DensitySpec> {
    if !(a > 0.0 && b > a && b.is_finite()) {
        return Err(Error::Config(format!("interval [{a}, {b}] must satisfy 0 < A < B")));
    }
    if let DensityKind::CosineBump { width, .. } = &kind {
        if !(*width > 0.0) {
            return Err(Error::Config("cosine_bump width must be positive".into()));
        }
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..=PROBES {
        let x = a + (b - a) * i as f64 / PROBES as f64;
        let r = kind.raw(x);
        if !(r > 0.0) {
            return Err(Error::NonPositiveDensity(x));
        }
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let raw_mass = kind.raw_antiderivative(b) - kind.raw_antiderivative(a);
    let normalization = 2.0 / raw_mass;
    Ok(DensitySpec { a, b, kind, normalization, kappa_min: lo * normalization, kappa_max: hi * normalization })
}

impl DensitySpec {
    pub fn kappa(&self, x: f64) -> f64 {
        self.normalization * self.kind.raw(x)
    }

    /// `F(x) = ∫_A^x κ`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.normalization * (self.kind.raw_antiderivative(x) - self.kind.raw_antiderivative(self.a))
    }

    fn mp_mass_ratio(&self, bits: u32) -> Float {
        let a = Float::with_val(bits, self.a);
        let b = Float::with_val(bits, self.b);
        let raw_mass = self.kind.raw_antiderivative_mp(&b) - self.kind.raw_antiderivative_mp(&a);
        Float::with_val(bits, 2) / raw_mass
    }

    /// `κ(x)` with the normalization recomputed at the precision of `x`.
    pub fn kappa_mp(&self, x: &Float) -> Float {
        self.mp_mass_ratio(x.prec()) * self.kind.raw_mp(x)
    }

    pub fn cdf_mp(&self, x: &Float) -> Float {
        let bits = x.prec();
        let a = Float::with_val(bits, self.a);
        let diff = self.kind.raw_antiderivative_mp(x) - self.kind.raw_antiderivative_mp(&a);
        self.mp_mass_ratio(bits) * diff
    }

    /// Short label for file names and reports.
    pub fn label(&self) -> String {
        match &self.kind {
            DensityKind::Uniform => "uniform".into(),
            DensityKind::Poly { .. } => "poly".into(),
            DensityKind::CosineBump { .. } => "cosine_bump".into(),
        }
    }
}

/// The three densities shipped with the harness, all on `[1, 3]`.
pub fn shipped_densities() -> Vec<DensitySpec> {
    vec![
        build_density(DensityKind::Uniform, 1.0, 3.0).expect("uniform"),
        build_density(DensityKind::Poly { coeffs: vec![1.0, 1.0] }, 1.0, 3.0).expect("poly"),
        build_density(DensityKind::CosineBump { center: 2.0, width: 1.0, base: 1.5 }, 1.0, 3.0).expect("cosine"),
    ]
}
