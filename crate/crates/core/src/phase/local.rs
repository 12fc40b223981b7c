use num_complex::Complex64;
use rug::ops::Pow;
use rug::Complex;

use super::airy_model::{airy_c, airy_c_inv, airy_model, diag_pow};
use super::conformal::{local_phase, AiryAssembly, Endpoint};
use super::g::GPhaseEvaluator;
use super::outer::OuterParametrix;
use crate::error::{Error, Result};
use crate::numerics::{DenseMatrix, PrecisionContext};
use crate::specialfn::Side;

fn sigma3(bits: u32) -> DenseMatrix {
    let one = Complex::with_val(bits, 1);
    DenseMatrix::mat2(one.clone(), Complex::new(bits), Complex::new(bits), -one)
}

/// `n^{2/3}`.
fn n_two_thirds(n: usize, bits: u32) -> rug::Float {
    let third: rug::Float = rug::Float::with_val(bits, 2) / 3u32;
    rug::Float::with_val(bits, n as u32).pow(third)
}

fn flip(side: Side) -> Side {
    match side {
        Side::Upper => Side::Lower,
        Side::Lower => Side::Upper,
        Side::Principal => Side::Principal,
    }
}

/// `E = N C⁻¹ (n^{2/3}η)^{σ₃/4}` at `d`, `E = N C (n^{2/3}η)^{σ₃/4}` at `c`, for a given `η(ζ)`.
pub fn prefactor_e(
    aa: &AiryAssembly,
    op: &OuterParametrix,
    n: usize,
    z: &Complex,
    eta: &Complex,
    side: Side,
    prec: &PrecisionContext,
) -> Result<DenseMatrix> {
    let bits = prec.bits;
    let nn = op.eval(z, side)?;
    let scale = n_two_thirds(n, bits);
    let arg = Complex::with_val(bits, eta * &scale);
    // `η` increases along the outward real direction at `d` and decreases at `c`.
    let eta_side = if aa.endpoint == Endpoint::Left { flip(side) } else { side };
    let d = diag_pow(&arg, 1, 4, eta_side)?;
    let c = match aa.endpoint {
        Endpoint::Left => airy_c(bits),
        Endpoint::Right => airy_c_inv(bits),
    };
    Ok(nn.matmul(&c).matmul(&d))
}

/// Largest entry of `E_+ − E_−` over `count` points of `(e − δ/2, e + δ/2)`, using the fitted `η`.
pub fn e_analyticity_mismatch(aa: &AiryAssembly, op: &OuterParametrix, n: usize, count: usize, prec: &PrecisionContext) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..count {
        let t = -1.0 + 2.0 * (k as f64 + 0.5) / count as f64;
        let x = aa.e + 0.5 * aa.delta * t;
        let eta = prec.complex(aa.eta_fit(Complex64::new(x, 0.0)).re, 0.0);
        let z = prec.complex(x, 0.0);
        let ep = prefactor_e(aa, op, n, &z, &eta, Side::Upper, prec)?;
        let em = prefactor_e(aa, op, n, &z, &eta, Side::Lower, prec)?;
        let scale = ep.max_abs().to_f64().max(1.0);
        worst = worst.max(ep.sub(&em).max_abs().to_f64() / scale);
    }
    Ok(worst)
}

/// `P = E A(n^{2/3}η) e^{nφσ₃/2}` at `d` and `P = E σ₃ A(n^{2/3}η) σ₃ e^{nφ̃σ₃/2}` at `c`,
/// with the pointwise `η` throughout.
pub fn local_parametrix(
    aa: &AiryAssembly,
    op: &OuterParametrix,
    ev: &GPhaseEvaluator,
    n: usize,
    z: Complex64,
    prec: &PrecisionContext,
) -> Result<DenseMatrix> {
    let bits = prec.bits;
    let eta64 = aa.eta_exact(ev, z)?;
    let eta = prec.from_c64(eta64);
    let zm = prec.from_c64(z);
    let e = prefactor_e(aa, op, n, &zm, &eta, Side::Principal, prec)?;
    let scale = n_two_thirds(n, bits);
    let xi = Complex::with_val(bits, &eta * &scale);
    let mut a = airy_model(&xi, prec)?;
    if aa.endpoint == Endpoint::Left {
        let s3 = sigma3(bits);
        a = s3.matmul(&a).matmul(&s3);
    }
    let phi = prec.from_c64(local_phase(ev, aa.endpoint, z, Side::Principal)?);
    let half = Complex::with_val(bits, &phi * n as u32) / 2u32;
    let ex = DenseMatrix::mat2(half.clone().exp(), Complex::new(bits), Complex::new(bits), (-half).exp());
    Ok(e.matmul(&a).matmul(&ex))
}

/// `sup ‖P N⁻¹ − I‖_max` over `count` points of `|ζ − e| = radius`.
pub fn matching_error(
    aa: &AiryAssembly,
    op: &OuterParametrix,
    ev: &GPhaseEvaluator,
    n: usize,
    radius: f64,
    count: usize,
    prec: &PrecisionContext,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..count {
        let mut th = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / count as f64;
        let mut attempt = 0;
        let err = loop {
            let z = aa.e + Complex64::from_polar(radius, th);
            match local_parametrix(aa, op, ev, n, z, prec) {
                Ok(p) => {
                    let ninv = op.eval(&prec.from_c64(z), Side::Principal)?.inv2();
                    break p.matmul(&ninv).dist_to_identity().to_f64();
                }
                Err(Error::SectorBoundary) if attempt < 4 => {
                    th += 1e-9;
                    attempt += 1;
                }
                Err(e) => return Err(e),
            }
        };
        worst = worst.max(err);
    }
    Ok(worst)
}
