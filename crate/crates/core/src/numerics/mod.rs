//! Multiprecision scalars, polynomials, dense linear algebra, quadrature and rate fits.

pub mod fit;
pub mod linalg;
pub mod poly;
pub mod quad;

use num_complex::Complex64;
use rug::float::Constant;
use rug::{Complex, Float};

use crate::error::{Error, Result};

pub use fit::{fit_rate, FitKind};
pub use linalg::{lu_solve, DenseMatrix, LuFactors, LuSolution};
pub use poly::Polynomial;
pub use quad::{contour_trapezoid, gauss_legendre, gauss_legendre_f64, Circle, Curve, Ellipse};

/// Multiprecision complex scalar at the run precision.
pub type ComplexScalar = Complex;

/// Run-wide significand width and the derived relative tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    pub bits: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self { bits: 384 }
    }
}

impl PrecisionContext {
    pub fn new(bits: u32) -> Result<Self> {
        if !(128..=2000).contains(&bits) {
            return Err(Error::Config(format!("bits must lie in [128, 2000], got {bits}")));
        }
        Ok(Self { bits })
    }

    /// `2^(-bits/2)`.
    pub fn tol_rel(&self) -> f64 {
        (-(self.bits as f64) / 2.0).exp2()
    }

    /// `2^(-bits)`.
    pub fn eps(&self) -> f64 {
        (-(self.bits as f64)).exp2()
    }

    pub fn with_guard(&self, extra: u32) -> Self {
        Self { bits: self.bits + extra }
    }

    pub fn real(&self, x: f64) -> Float {
        Float::with_val(self.bits, x)
    }

    pub fn complex(&self, re: f64, im: f64) -> Complex {
        Complex::with_val(self.bits, (re, im))
    }

    pub fn zero(&self) -> Complex {
        Complex::new(self.bits)
    }

    pub fn one(&self) -> Complex {
        Complex::with_val(self.bits, 1)
    }

    pub fn i(&self) -> Complex {
        Complex::with_val(self.bits, (0, 1))
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits, Constant::Pi)
    }

    /// Exact rational `num/den` rounded once.
    pub fn ratio(&self, num: i64, den: i64) -> Float {
        Float::with_val(self.bits, num) / den
    }

    pub fn from_c64(&self, z: Complex64) -> Complex {
        self.complex(z.re, z.im)
    }
}

pub fn cabs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

pub fn cabs_f64(z: &Complex) -> f64 {
    cabs(z).to_f64()
}

/// `log|z|` without leaving the multiprecision exponent range.
pub fn cln_abs(z: &Complex) -> f64 {
    cabs(z).ln().to_f64()
}

pub fn to_c64(z: &Complex) -> Complex64 {
    Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

/// Sup norm of a vector of complex scalars.
pub fn vec_norm_inf(v: &[Complex]) -> Float {
    let bits = v.first().map(|z| z.prec().0).unwrap_or(64);
    let mut m = Float::new(bits);
    for z in v {
        let a = cabs(z);
        if a > m {
            m = a;
        }
    }
    m
}

/// `a^k` for `k = 0..=deg`.
pub fn powers(a: &Complex, deg: usize) -> Vec<Complex> {
    let mut out = Vec::with_capacity(deg + 1);
    let mut p = Complex::with_val(a.prec(), 1);
    for _ in 0..=deg {
        out.push(p.clone());
        p *= a;
    }
    out
}

/// Unit-modulus phase `z/|z|`, or 1 for `z = 0`.
pub fn unit_phase(z: &Complex) -> Complex {
    let a = cabs(z);
    if a.is_zero() {
        Complex::with_val(z.prec(), 1)
    } else {
        Complex::with_val(z.prec(), z / &a)
    }
}
