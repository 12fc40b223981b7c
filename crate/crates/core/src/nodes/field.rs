use num_complex::Complex64;

use super::density::DensitySpec;
use crate::error::{Error, Result};
use crate::specialfn::Side;

const PI: f64 = std::f64::consts::PI;

/// Source of an external field: the real field `V` and its continuation `V^an`.
pub trait ExternalField: Sync + Send {
    fn interval(&self) -> (f64, f64);
    /// `V(x)` on the real line.
    fn v(&self, x: f64) -> f64;
    /// `V^an(ζ)`; on its cut the side selector picks the boundary value.
    fn v_an(&self, z: Complex64, side: Side) -> Complex64;
    /// `∫_{x0}^{x1} V(x) dx`.
    fn cell_integral(&self, x0: f64, x1: f64) -> f64;
    /// Whether `V^an` is entire (no cut), as for polynomial fields.
    fn is_entire(&self) -> bool {
        false
    }
}

/// Principal log with the side selected on the cut `(−∞, 0]`.
pub fn clog(u: Complex64, side: Side) -> Complex64 {
    if u.im == 0.0 && u.re < 0.0 {
        Complex64::new((-u.re).ln(), side.sign() as f64 * PI)
    } else {
        u.ln()
    }
}

fn u_log_u(u: Complex64, side: Side) -> Complex64 {
    if u == Complex64::new(0.0, 0.0) {
        u
    } else {
        u * clog(u, side)
    }
}

/// `(∫ log(w − s) ds, ∫ s·log(w − s) ds)` over `s ∈ [−h/2, h/2]` with the principal branch.
pub fn log_cell_moments(w: Complex64, h: f64, side: Side) -> (Complex64, Complex64) {
    let half = 0.5 * h;
    if w.norm() > 4.0 * h {
        let lw = clog(w, side);
        let q = half / w;
        // log(w − s) = log w − Σ_k (s/w)^k / k
        let mut i0 = h * lw;
        let mut j = Complex64::new(0.0, 0.0);
        let mut pw = q;
        for k in 1..40 {
            let kf = k as f64;
            if k % 2 == 1 {
                j -= 2.0 * half * half * pw / (kf * (kf + 2.0));
            } else {
                i0 -= 2.0 * half * pw / (kf * (kf + 1.0));
            }
            if pw.norm() < 1e-18 {
                break;
            }
            pw *= q;
        }
        return (i0, j);
    }
    let u0 = w + half;
    let u1 = w - half;
    let f = |u: Complex64| u_log_u(u, side) - u;
    let g = |u: Complex64| 0.5 * u * u_log_u(u, side) - 0.25 * u * u;
    let i0 = f(u0) - f(u1);
    let j = w * i0 - (g(u0) - g(u1));
    (i0, j)
}

/// `V(x) = −2∫ log|x − t| κ(t) dt` with `κ` piecewise linear on a uniform grid.
#[derive(Clone, Debug)]
pub struct FieldEvaluator {
    pub density: DensitySpec,
    pub cells: usize,
    mids: Vec<f64>,
    kappa_mid: Vec<f64>,
    kappa_slope: Vec<f64>,
    h: f64,
}

impl FieldEvaluator {
    pub fn new(density: DensitySpec, cells: usize) -> Self {
        let h = (density.b - density.a) / cells as f64;
        let mut mids = Vec::with_capacity(cells);
        let mut kappa_mid = Vec::with_capacity(cells);
        let mut kappa_slope = Vec::with_capacity(cells);
        for i in 0..cells {
            let x0 = density.a + h * i as f64;
            let x1 = x0 + h;
            let (k0, k1) = (density.kappa(x0), density.kappa(x1));
            mids.push(0.5 * (x0 + x1));
            kappa_mid.push(0.5 * (k0 + k1));
            kappa_slope.push((k1 - k0) / h);
        }
        Self { density, cells, mids, kappa_mid, kappa_slope, h }
    }

    /// Default grid of `2^10` cells.
    pub fn with_default_grid(density: DensitySpec) -> Self {
        Self::new(density, 1 << 10)
    }

    /// `∫ log(ζ − t) κ(t) dt`.
    pub fn log_potential_an(&self, z: Complex64, side: Side) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.cells {
            let (i0, j) = log_cell_moments(z - self.mids[i], self.h, side);
            acc += self.kappa_mid[i] * i0 + self.kappa_slope[i] * j;
        }
        acc
    }

    pub fn external_field(&self, x: f64) -> f64 {
        -2.0 * self.log_potential_an(Complex64::new(x, 0.0), Side::Upper).re
    }

    /// `V^an(ζ)` off `[A, B]`.
    pub fn analytic_field(&self, z: Complex64) -> Result<Complex64> {
        if z.im == 0.0 && z.re >= self.density.a && z.re <= self.density.b {
            return Err(Error::OnCut);
        }
        Ok(-2.0 * self.log_potential_an(z, Side::Principal))
    }
}

impl ExternalField for FieldEvaluator {
    fn interval(&self) -> (f64, f64) {
        (self.density.a, self.density.b)
    }

    fn v(&self, x: f64) -> f64 {
        self.external_field(x)
    }

    fn v_an(&self, z: Complex64, side: Side) -> Complex64 {
        -2.0 * self.log_potential_an(z, side)
    }

    fn cell_integral(&self, x0: f64, x1: f64) -> f64 {
        let (nodes, weights) = crate::numerics::quad::gauss_legendre_f64(16);
        let half = 0.5 * (x1 - x0);
        let mid = 0.5 * (x1 + x0);
        nodes.iter().zip(&weights).map(|(t, w)| w * self.v(mid + half * t)).sum::<f64>() * half
    }
}
