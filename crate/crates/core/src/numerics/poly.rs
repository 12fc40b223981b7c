use rug::Complex;

/// Dense polynomial, `coeffs[k]` multiplies `x^k`. The highest stored coefficient is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    pub coeffs: Vec<Complex>,
    pub bits: u32,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex>, bits: u32) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs, bits }
    }

    pub fn zero(bits: u32) -> Self {
        Self { coeffs: Vec::new(), bits }
    }

    pub fn constant(c: Complex) -> Self {
        let bits = c.prec().0;
        Self::new(vec![c], bits)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex], bits: u32) -> Self {
        let mut p = Self::new(vec![Complex::with_val(bits, 1)], bits);
        for r in roots {
            let lin = Self::new(vec![Complex::with_val(bits, -r), Complex::with_val(bits, 1)], bits);
            p = p.mul(&lin);
        }
        p
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Complex::new(self.bits))
    }

    /// Horner evaluation at the polynomial's precision.
    pub fn eval(&self, z: &Complex) -> Complex {
        let mut acc = Complex::new(self.bits);
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| Complex::with_val(self.bits, c * k as u32))
            .collect();
        Self::new(coeffs, self.bits)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.bits);
        }
        let mut out = vec![Complex::new(self.bits); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Complex::with_val(self.bits, a * b);
            }
        }
        Self::new(out, self.bits)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| Complex::with_val(self.bits, &self.coeff(k) + &other.coeff(k)))
            .collect();
        Self::new(coeffs, self.bits)
    }

    pub fn scale(&self, c: &Complex) -> Self {
        let coeffs = self.coeffs.iter().map(|a| Complex::with_val(self.bits, a * c)).collect();
        Self::new(coeffs, self.bits)
    }

    /// `p(λ x)` for real or complex `λ`.
    pub fn rescale_arg(&self, lambda: &Complex) -> Self {
        let mut pw = Complex::with_val(self.bits, 1);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(Complex::with_val(self.bits, c * &pw));
            pw *= lambda;
        }
        Self::new(coeffs, self.bits)
    }

    /// Interpolating polynomial through `(x_j, y_j)` via Newton divided differences.
    pub fn interpolate(xs: &[Complex], ys: &[Complex], bits: u32) -> Self {
        let n = xs.len();
        let mut dd: Vec<Complex> = ys.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = Complex::with_val(bits, &dd[i] - &dd[i - 1]);
                let den = Complex::with_val(bits, &xs[i] - &xs[i - level]);
                dd[i] = num / den;
            }
        }
        let mut p = Self::zero(bits);
        for i in (0..n).rev() {
            let lin = Self::new(vec![Complex::with_val(bits, -&xs[i]), Complex::with_val(bits, 1)], bits);
            p = p.mul(&lin).add(&Self::constant(dd[i].clone()));
        }
        p
    }
}
