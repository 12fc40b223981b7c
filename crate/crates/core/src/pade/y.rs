use rug::ops::Pow;
use rug::{Complex, Float};

use super::system::PadePair;
use super::weights::WeightSet;
use crate::error::{Error, Result};
use crate::nodes::NodeSet;
use crate::numerics::{cabs, contour_trapezoid, fit_rate, lu_solve, Circle, DenseMatrix, FitKind, PrecisionContext, Polynomial};

/// Explicit solution of the pole problem:
/// `Y = [[Q_n, Σ Q_n(a_j)w_j/(z−a_j)], [γQ_{n−1}, γΣ Q_{n−1}(a_j)w_j/(z−a_j)]]` in the variable `z`.
#[derive(Clone, Debug)]
pub struct YEvaluator {
    pub n: usize,
    /// Monic `Q_n` in `z`.
    pub qn: Polynomial,
    /// Monic `Q_{n−1}` in `z`.
    pub qprev: Polynomial,
    pub gamma_prev: Complex,
    pub a: Vec<Complex>,
    pub w: Vec<Complex>,
    qn_at_nodes: Vec<Complex>,
    qprev_at_nodes: Vec<Complex>,
    bits: u32,
}

pub fn build_y(pp: &PadePair, ws: &WeightSet, ns: &NodeSet, prec: &PrecisionContext) -> Result<YEvaluator> {
    let bits = prec.bits;
    let n = ns.n;
    let alpha: Vec<Complex> = (0..ns.len()).map(|j| ns.alpha_c(j)).collect();
    // Q_{n−1} in ζ: monic with Σ R̂(α_j) α_j^k ŵ_j = 0 for k ≤ n−2.
    let rhat = if n == 1 {
        Polynomial::new(vec![Complex::with_val(bits, 1)], bits)
    } else {
        let dim = n - 1;
        let mut moments = Vec::with_capacity(2 * n);
        let mut pw: Vec<Complex> = ws.w_scaled.clone();
        for _ in 0..2 * n - 1 {
            let mut s = Complex::new(bits);
            for t in &pw {
                s += t;
            }
            moments.push(s);
            for (t, a) in pw.iter_mut().zip(&alpha) {
                *t *= a;
            }
        }
        let mut g = DenseMatrix::zeros(dim, dim, bits);
        let mut rhs = Vec::with_capacity(dim);
        for k in 0..dim {
            for i in 0..dim {
                g.set(k, i, moments[k + i].clone());
            }
            rhs.push(-moments[k + dim].clone());
        }
        let sol = lu_solve(&g, &rhs, prec).map_err(|e| Error::SubdiagonalDegenerate(e.to_string()))?;
        if sol.cond_estimate > (prec.bits as f64 / 2.0).exp2() {
            return Err(Error::SubdiagonalDegenerate(format!("moment system condition {:.3e}", sol.cond_estimate)));
        }
        let mut c = sol.solution;
        c.push(Complex::with_val(bits, 1));
        Polynomial::new(c, bits)
    };
    let inv_n = Complex::with_val(bits, 1) / n as u32;
    let n_c = Complex::with_val(bits, n as u32);
    // Q_n(z) = n^n Q̂(z/n)
    let qn = pp.qhat.rescale_arg(&inv_n).scale(&Complex::with_val(bits, n_c.clone().pow(n as u32)));
    let qprev = rhat.rescale_arg(&inv_n).scale(&Complex::with_val(bits, n_c.clone().pow((n - 1) as u32)));
    let a: Vec<Complex> = (0..ns.len()).map(|j| ns.a_c(j)).collect();
    let w: Vec<Complex> = (0..ns.len()).map(|j| ws.w(j)).collect();
    let qn_at_nodes: Vec<Complex> = a.iter().map(|x| qn.eval(x)).collect();
    let qprev_at_nodes: Vec<Complex> = a.iter().map(|x| qprev.eval(x)).collect();
    let mut denom = Complex::new(bits);
    for j in 0..a.len() {
        let apow = Complex::with_val(bits, a[j].clone().pow((n - 1) as u32));
        denom += Complex::with_val(bits, &qprev_at_nodes[j] * &apow) * &w[j];
    }
    if denom.is_zero() || !cabs(&denom).is_normal() {
        return Err(Error::SubdiagonalDegenerate("gamma denominator vanished".into()));
    }
    let gamma_prev = denom.recip();
    Ok(YEvaluator { n, qn, qprev, gamma_prev, a, w, qn_at_nodes, qprev_at_nodes, bits })
}

impl YEvaluator {
    fn cauchy(&self, vals: &[Complex], z: &Complex) -> Result<Complex> {
        let mut s = Complex::new(self.bits);
        for (j, (v, (aj, wj))) in vals.iter().zip(self.a.iter().zip(&self.w)).enumerate() {
            let d = Complex::with_val(self.bits, z - aj);
            if d.is_zero() {
                return Err(Error::AtNode(j));
            }
            s += Complex::with_val(self.bits, v * wj) / d;
        }
        Ok(s)
    }

    pub fn eval(&self, z: &Complex) -> Result<DenseMatrix> {
        let y11 = self.qn.eval(z);
        let y12 = self.cauchy(&self.qn_at_nodes, z)?;
        let y21 = Complex::with_val(self.bits, &self.gamma_prev * &self.qprev.eval(z));
        let y22 = Complex::with_val(self.bits, &self.gamma_prev * &self.cauchy(&self.qprev_at_nodes, z)?);
        Ok(DenseMatrix::mat2(y11, y12, y21, y22))
    }

    /// Largest relative mismatch between `(1/2πi)∮ Y_{k2} dz` around each node and `Y_{k1}(a_j)w_j`, both rows.
    pub fn residue_check(&self, prec: &PrecisionContext) -> Result<f64> {
        let bits = self.bits;
        let mut min_gap = Float::with_val(bits, f64::INFINITY);
        for w in self.a.windows(2) {
            let g = cabs(&Complex::with_val(bits, &w[1] - &w[0]));
            if g < min_gap {
                min_gap = g;
            }
        }
        let radius = min_gap / 4u32;
        let two_pi_i = Complex::with_val(bits, (0, Float::with_val(bits, rug::float::Constant::Pi) * 2u32));
        let mut worst = 0.0f64;
        for j in 0..self.a.len() {
            let circle = Circle { center: self.a[j].clone(), radius: radius.clone() };
            for row in 0..2 {
                let vals = if row == 0 { &self.qn_at_nodes } else { &self.qprev_at_nodes };
                let integral = contour_trapezoid(|z| self.cauchy(vals, z).unwrap_or_else(|_| Complex::new(bits)), &circle, 16, prec)?;
                let mut res = integral / &two_pi_i;
                let mut expect = Complex::with_val(bits, &vals[j] * &self.w[j]);
                if row == 1 {
                    res *= &self.gamma_prev;
                    expect *= &self.gamma_prev;
                }
                let rel = (cabs(&Complex::with_val(bits, &res - &expect)) / cabs(&expect)).to_f64();
                worst = worst.max(rel);
            }
        }
        Ok(worst)
    }

    /// `‖Y(z) z^{−nσ3} − I‖` at `z = r·n·e^{iθ}`.
    pub fn normalization_error(&self, r: f64, theta: f64) -> Result<f64> {
        let bits = self.bits;
        let n = self.n as f64;
        let z = Complex::with_val(bits, (r * n * theta.cos(), r * n * theta.sin()));
        let y = self.eval(&z)?;
        let zn = Complex::with_val(bits, (&z).pow(self.n as u32));
        let zinv = Complex::with_val(bits, zn.recip_ref());
        let m = DenseMatrix::mat2(
            Complex::with_val(bits, y.get(0, 0) * &zinv),
            Complex::with_val(bits, y.get(0, 1) * &zn),
            Complex::with_val(bits, y.get(1, 0) * &zinv),
            Complex::with_val(bits, y.get(1, 1) * &zn),
        );
        Ok(m.dist_to_identity().to_f64())
    }

    /// Log-log slope of the normalization error over the given radii (multiples of `n`).
    pub fn normalization_slope(&self, radii: &[f64], theta: f64) -> Result<(Vec<(f64, f64)>, f64)> {
        let mut pts = Vec::new();
        for &r in radii {
            pts.push((r * self.n as f64, self.normalization_error(r, theta)?));
        }
        let (slope, _) = fit_rate(&pts, FitKind::LogLog)?;
        Ok((pts, slope))
    }

    pub fn det(&self, z: &Complex) -> Result<Complex> {
        Ok(self.eval(z)?.det2())
    }
}
