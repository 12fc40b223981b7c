use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::numerics::{DenseMatrix, PrecisionContext};
use crate::specialfn::{principal_pow_ratio, Side};

/// Outer model solution on the band `[c, d]`.
#[derive(Clone, Debug)]
pub struct OuterParametrix {
    pub c: Float,
    pub d: Float,
    pub bits: u32,
}

impl OuterParametrix {
    pub fn new(c: f64, d: f64, prec: &PrecisionContext) -> Self {
        assert!(c < d, "band endpoints out of order");
        Self { c: prec.real(c), d: prec.real(d), bits: prec.bits }
    }

    fn on_band(&self, z: &Complex) -> bool {
        z.imag().is_zero() && *z.real() >= self.c && *z.real() <= self.d
    }

    /// `a(ζ) = ((ζ − d)/(ζ − c))^{1/4}`, principal, so `a → 1` at infinity and the cut is `[c, d]`.
    pub fn a(&self, z: &Complex, side: Side) -> Result<Complex> {
        if self.on_band(z) && (side == Side::Principal || *z.real() == self.c || *z.real() == self.d) {
            return Err(Error::OnBand);
        }
        let num = Complex::with_val(self.bits, z - &self.d);
        let den = Complex::with_val(self.bits, z - &self.c);
        let r = num / den;
        principal_pow_ratio(&r, 1, 4, side)
    }

    pub fn eval(&self, z: &Complex, side: Side) -> Result<DenseMatrix> {
        let a = self.a(z, side)?;
        let ainv = Complex::with_val(self.bits, a.recip_ref());
        let half_sum = Complex::with_val(self.bits, &a + &ainv) / 2u32;
        let diff = Complex::with_val(self.bits, &a - &ainv);
        // (a − a⁻¹)/(2i) = −i(a − a⁻¹)/2
        let off = Complex::with_val(self.bits, diff * Complex::with_val(self.bits, (0, -1))) / 2u32;
        let neg_off = -off.clone();
        Ok(DenseMatrix::mat2(half_sum.clone(), off, neg_off, half_sum))
    }

    /// `max |N_+ − N_− [[0, 1], [−1, 0]]|` at a band point.
    pub fn jump_residual(&self, x: &Float) -> Result<f64> {
        let z = Complex::with_val(self.bits, (x, 0));
        let np = self.eval(&z, Side::Upper)?;
        let nm = self.eval(&z, Side::Lower)?;
        let zero = Complex::new(self.bits);
        let one = Complex::with_val(self.bits, 1);
        let j = DenseMatrix::mat2(zero.clone(), one.clone(), -one, zero);
        Ok(np.sub(&nm.matmul(&j)).max_abs().to_f64())
    }
}
