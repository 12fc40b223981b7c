use rug::float::Constant;
use rug::{Complex, Float};

use crate::error::{Error, Result};

/// Which boundary value to take for points lying exactly on the cut `(−∞, 0]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Side {
    /// `Im log ∈ (−π, π]`, so the cut itself takes the upper value.
    #[default]
    Principal,
    Upper,
    Lower,
}

impl Side {
    pub fn sign(self) -> i32 {
        match self {
            Side::Principal | Side::Upper => 1,
            Side::Lower => -1,
        }
    }
}

/// Principal logarithm with an explicit side selector on the negative real axis.
pub fn principal_log(z: &Complex, side: Side) -> Result<Complex> {
    if z.is_zero() {
        return Err(Error::DomainError("log of zero".into()));
    }
    let bits = z.prec().0;
    if z.imag().is_zero() && z.real().is_sign_negative() {
        let re = Float::with_val(bits, -z.real()).ln();
        let pi = Float::with_val(bits, Constant::Pi);
        let im = if side == Side::Lower { -pi } else { pi };
        return Ok(Complex::with_val(bits, (re, im)));
    }
    Ok(z.clone().ln())
}

/// `exp(α·log z)` with the principal log.
pub fn principal_pow(z: &Complex, alpha: &Float, side: Side) -> Result<Complex> {
    let l = principal_log(z, side)?;
    Ok((l * alpha).exp())
}

/// `z^(num/den)` with the exponent formed exactly at the working precision.
pub fn principal_pow_ratio(z: &Complex, num: i32, den: i32, side: Side) -> Result<Complex> {
    let bits = z.prec().0;
    let alpha = Float::with_val(bits, num) / den;
    principal_pow(z, &alpha, side)
}
