use std::cell::RefCell;

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::nodes::NodeSet;
use crate::numerics::{cabs, contour_trapezoid, Curve, Ellipse, PrecisionContext};

/// Ellipse centred on `[A, B]` through `A − margin` and `B + margin`, `margin = frac·(B − A)`,
/// with the margin reduced so the curve stays in the right half-plane. Semi-minor axis `(B − A)/2`.
pub fn default_contour(a: f64, b: f64, frac: f64, prec: &PrecisionContext) -> Ellipse {
    let mut margin = frac * (b - a);
    if a - margin <= 0.0 {
        margin = 0.5 * a;
    }
    Ellipse {
        center: prec.complex(0.5 * (a + b), 0.0),
        a: prec.real(0.5 * (b - a) + margin),
        b: prec.real(0.5 * (b - a)),
    }
}

fn winding<C: Curve + ?Sized>(curve: &C, p: &Complex) -> Result<f64> {
    let coarse = PrecisionContext { bits: 128 };
    let bits = coarse.bits;
    let pc = Complex::with_val(bits, p);
    let v = contour_trapezoid(|z| Complex::with_val(bits, z - &pc).recip(), curve, 64, &coarse)?;
    let two_pi = Float::with_val(bits, rug::float::Constant::Pi) * 2u32;
    Ok((Float::with_val(bits, v.imag() / two_pi)).to_f64())
}

/// `L̃_n(ζ) = (1/2πi)∮ g(ξ)/(ζ − ξ) · Ω_n(ζ)/Ω_n(ξ) dξ` for `ζ` outside the contour.
pub fn hermite_walsh_eval<C, G>(ns: &NodeSet, g: G, contour: &C, z: &Complex, prec: &PrecisionContext) -> Result<Complex>
where
    C: Curve + ?Sized,
    G: Fn(&Complex) -> Result<Complex>,
{
    let bits = prec.bits;
    for j in [0, ns.n, ns.len() - 1] {
        let w = winding(contour, &ns.alpha_c(j))?;
        if (w - 1.0).abs() > 1e-6 {
            return Err(Error::ContourInvalid(format!("node {j} has winding number {w:.6}")));
        }
    }
    let wz = winding(contour, z)?;
    if wz.abs() > 1e-6 {
        return Err(Error::ContourInvalid(format!("evaluation point has winding number {wz:.6}")));
    }
    for k in 0..256 {
        let t = Float::with_val(bits, k) * Float::with_val(bits, rug::float::Constant::Pi) / 128u32;
        let (p, _) = contour.point(&t);
        if *p.real() <= 0 {
            return Err(Error::ContourInvalid("contour meets the half-line (−∞, 0]".into()));
        }
    }
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |xi: &Complex| {
        let gv = match g(xi) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                return Complex::new(bits);
            }
        };
        let mut ratio = Complex::with_val(bits, 1);
        for a in &ns.alpha {
            ratio *= Complex::with_val(bits, z - a) / Complex::with_val(bits, xi - a);
        }
        ratio * gv / Complex::with_val(bits, z - xi)
    };
    let v = contour_trapezoid(integrand, contour, 32, prec)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let two_pi_i = Complex::with_val(bits, (0, Float::with_val(bits, rug::float::Constant::Pi) * 2u32));
    let out = v / two_pi_i;
    if !cabs(&out).is_finite() {
        return Err(Error::AccuracyLoss("non-finite contour value".into()));
    }
    Ok(out)
}
