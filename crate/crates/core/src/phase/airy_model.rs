use std::f64::consts::PI;

use rug::Complex;

use crate::error::{Error, Result};
use crate::numerics::{DenseMatrix, PrecisionContext};
use crate::specialfn::{airy_ai, omega, principal_pow_ratio, Side};

/// Sectors `I: 0 < arg ξ < 2π/3`, `II: 2π/3 < arg ξ < π`, `III: −π < arg ξ < −2π/3`,
/// `IV: −2π/3 < arg ξ < 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AirySector {
    I,
    II,
    III,
    IV,
}

const BOUNDARY_TOL: f64 = 1e-12;

pub fn airy_sector(xi: &Complex) -> Result<AirySector> {
    let arg = xi.imag().to_f64().atan2(xi.real().to_f64());
    let near = |t: f64| (arg - t).abs() < BOUNDARY_TOL;
    if xi.is_zero() {
        return Ok(AirySector::I);
    }
    if near(0.0) || near(2.0 * PI / 3.0) || near(-2.0 * PI / 3.0) || near(PI) || near(-PI) {
        return Err(Error::SectorBoundary);
    }
    Ok(if arg > 2.0 * PI / 3.0 {
        AirySector::II
    } else if arg > 0.0 {
        AirySector::I
    } else if arg > -2.0 * PI / 3.0 {
        AirySector::IV
    } else {
        AirySector::III
    })
}

/// `(y(ξ), y′(ξ))` for `y(ξ) = Ai(ω^k ξ)`.
fn airy_solution(xi: &Complex, k: i32, prec: &PrecisionContext) -> Result<(Complex, Complex)> {
    let bits = prec.bits;
    let wk = omega(bits, k);
    let (ai, aip) = airy_ai(&Complex::with_val(bits, &wk * xi), prec)?;
    Ok((ai, Complex::with_val(bits, &wk * &aip)))
}

/// Piecewise model matrix `A(ξ) = √(2π) diag(1, −i) [y₁ y₂]` with the sector's pair of solutions.
pub fn airy_model_in(xi: &Complex, sector: AirySector, prec: &PrecisionContext) -> Result<DenseMatrix> {
    let bits = prec.bits;
    let w1 = omega(bits, 1);
    let w2 = omega(bits, 2);
    let scaled = |(a, b): (Complex, Complex), c: &Complex| -> (Complex, Complex) {
        (Complex::with_val(bits, &a * c), Complex::with_val(bits, &b * c))
    };
    let neg = |c: &Complex| -> Complex { -c.clone() };
    let (col1, col2) = match sector {
        AirySector::I => (airy_solution(xi, 0, prec)?, scaled(airy_solution(xi, 2, prec)?, &neg(&w2))),
        AirySector::II => (scaled(airy_solution(xi, 1, prec)?, &neg(&w1)), scaled(airy_solution(xi, 2, prec)?, &neg(&w2))),
        AirySector::III => (scaled(airy_solution(xi, 2, prec)?, &neg(&w2)), scaled(airy_solution(xi, 1, prec)?, &w1)),
        AirySector::IV => (airy_solution(xi, 0, prec)?, scaled(airy_solution(xi, 1, prec)?, &w1)),
    };
    let root = (prec.pi() * 2u32).sqrt();
    let mi = Complex::with_val(bits, (0, -1));
    let r1 = |v: &Complex| Complex::with_val(bits, v * &root);
    let r2 = |v: &Complex| Complex::with_val(bits, v * &root) * &mi;
    Ok(DenseMatrix::mat2(r1(&col1.0), r1(&col2.0), r2(&col1.1), r2(&col2.1)))
}

/// `A(ξ)` in the sector containing `ξ`.
pub fn airy_model(xi: &Complex, prec: &PrecisionContext) -> Result<DenseMatrix> {
    airy_model_in(xi, airy_sector(xi)?, prec)
}

/// `C = (1/√2) [[1, i], [i, 1]]`.
pub fn airy_c(bits: u32) -> DenseMatrix {
    let s = rug::Float::with_val(bits, 2).sqrt().recip();
    let one = Complex::with_val(bits, (&s, 0));
    let i = Complex::with_val(bits, (0, &s));
    DenseMatrix::mat2(one.clone(), i.clone(), i, one)
}

pub fn airy_c_inv(bits: u32) -> DenseMatrix {
    airy_c(bits).conj()
}

/// `diag(z^{p/q}, z^{−p/q})` with the principal branch.
pub fn diag_pow(z: &Complex, p: i32, q: i32, side: Side) -> Result<DenseMatrix> {
    let bits = z.prec().0;
    let a = principal_pow_ratio(z, p, q, side)?;
    let ainv = Complex::with_val(bits, a.recip_ref());
    Ok(DenseMatrix::mat2(a, Complex::new(bits), Complex::new(bits), ainv))
}

/// `‖C⁻¹ ξ^{σ₃/4} A(ξ) e^{(2/3)ξ^{3/2}σ₃} − I‖_max`, which is `O(|ξ|^{−3/2})`.
pub fn airy_stripped_residual(xi: &Complex, prec: &PrecisionContext) -> Result<f64> {
    let bits = prec.bits;
    let a = airy_model(xi, prec)?;
    let d = diag_pow(xi, 1, 4, Side::Principal)?;
    let x32 = principal_pow_ratio(xi, 3, 2, Side::Principal)?;
    let expo = Complex::with_val(bits, &x32 * 2u32) / 3u32;
    let e = DenseMatrix::mat2(expo.clone().exp(), Complex::new(bits), Complex::new(bits), (-expo).exp());
    let m = airy_c_inv(bits).matmul(&d).matmul(&a).matmul(&e);
    Ok(m.dist_to_identity().to_f64())
}

/// `A_−(ξ)⁻¹ A_+(ξ)` across the ray through `ξ`, evaluated with both adjacent sector formulas.
/// `plus` is the sector reached by increasing the argument.
pub fn airy_ray_jump(xi: &Complex, minus: AirySector, plus: AirySector, prec: &PrecisionContext) -> Result<DenseMatrix> {
    let am = airy_model_in(xi, minus, prec)?;
    let ap = airy_model_in(xi, plus, prec)?;
    Ok(am.inv2().matmul(&ap))
}
