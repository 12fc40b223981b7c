use num_complex::Complex64;
use rayon::prelude::*;

use crate::nodes::{DensitySpec, ExternalField};
use crate::specialfn::Side;

/// Uniform-cell discretization: Toeplitz kernel of `∬ log(1/|x−y|)` over cell pairs, cell field
/// integrals `∫_cell V` and exact cell averages of `κ`.
#[derive(Clone, Debug)]
pub struct EnergyGrid {
    pub m: usize,
    pub a: f64,
    pub b: f64,
    pub h: f64,
    pub edges: Vec<f64>,
    /// `kernel[k]` for cells `|i − j| = k`.
    pub kernel: Vec<f64>,
    pub field: Vec<f64>,
    pub kappa: Vec<f64>,
}

/// `H(t) = t² log|t|/2 − 3t²/4`, a mixed antiderivative of `−log|x − y|`.
fn h_anti(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        0.5 * t * t * t.abs().ln() - 0.75 * t * t
    }
}

/// `∫_a^b ∫_c^d log(1/|x − y|) dy dx`.
pub fn log_kernel_pair(a: f64, b: f64, c: f64, d: f64) -> f64 {
    h_anti(b - d) - h_anti(b - c) - h_anti(a - d) + h_anti(a - c)
}

/// Cell pair at center distance `dist ≥ 2h`: moment expansion of `log|dist + u|` under the
/// triangular law of `u = s − t`.
pub fn log_kernel_far(dist: f64, h: f64) -> f64 {
    let mut acc = dist.ln();
    let r2 = (h / dist) * (h / dist);
    let mut pw = 1.0;
    for mm in 1..200 {
        pw *= r2;
        let m = mm as f64;
        let moment = 2.0 / ((2.0 * m + 1.0) * (2.0 * m + 2.0));
        let term = moment * pw / (2.0 * m);
        acc -= term;
        if term < 1e-18 * acc.abs().max(1.0) {
            break;
        }
    }
    -h * h * acc
}

pub fn assemble_grid(d: &DensitySpec, fe: &dyn ExternalField, m: usize) -> EnergyGrid {
    assert!(m >= 64, "grid needs at least 64 cells");
    let (a, b) = (d.a, d.b);
    let h = (b - a) / m as f64;
    let edges: Vec<f64> = (0..=m).map(|i| if i == m { b } else { a + h * i as f64 }).collect();
    let kernel: Vec<f64> = (0..m)
        .map(|k| if k < 2 { log_kernel_pair(0.0, h, k as f64 * h, (k as f64 + 1.0) * h) } else { log_kernel_far(k as f64 * h, h) })
        .collect();
    let field: Vec<f64> = (0..m).into_par_iter().map(|i| fe.cell_integral(edges[i], edges[i + 1])).collect();
    let kappa: Vec<f64> = (0..m).map(|i| (d.cdf(edges[i + 1]) - d.cdf(edges[i])) / h).collect();
    EnergyGrid { m, a, b, h, edges, kernel, field, kappa }
}

impl EnergyGrid {
    pub fn k(&self, i: usize, j: usize) -> f64 {
        self.kernel[i.abs_diff(j)]
    }

    /// `(K u)_i`.
    pub fn kernel_apply(&self, u: &[f64]) -> Vec<f64> {
        (0..self.m)
            .into_par_iter()
            .map(|i| (0..self.m).map(|j| self.kernel[i.abs_diff(j)] * u[j]).sum())
            .collect()
    }

    /// Discrete energy `Σ u_i (K u)_i / h² + Σ u_i V_i / h` of cell masses `u`.
    pub fn energy(&self, u: &[f64]) -> f64 {
        let ku = self.kernel_apply(u);
        let (ih, ih2) = (1.0 / self.h, 1.0 / (self.h * self.h));
        (0..self.m).map(|i| u[i] * ku[i] * ih2 + u[i] * self.field[i] * ih).sum()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }
}

/// `V(x) = 2t(x − x0)²`, an entire field with a one-cut semicircle equilibrium of radius `1/√t`.
#[derive(Clone, Copy, Debug)]
pub struct QuadraticField {
    pub t: f64,
    pub x0: f64,
    pub a: f64,
    pub b: f64,
}

impl QuadraticField {
    /// Exact unconstrained equilibrium density `(2t/π)√(r² − (x − x0)²)`.
    pub fn semicircle_density(&self, x: f64) -> f64 {
        let r2 = 1.0 / self.t;
        let y = x - self.x0;
        if y * y >= r2 {
            0.0
        } else {
            2.0 * self.t / std::f64::consts::PI * (r2 - y * y).sqrt()
        }
    }

    pub fn radius(&self) -> f64 {
        1.0 / self.t.sqrt()
    }
}

impl ExternalField for QuadraticField {
    fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    fn v(&self, x: f64) -> f64 {
        2.0 * self.t * (x - self.x0) * (x - self.x0)
    }

    fn v_an(&self, z: Complex64, _side: Side) -> Complex64 {
        2.0 * self.t * (z - self.x0) * (z - self.x0)
    }

    fn cell_integral(&self, x0: f64, x1: f64) -> f64 {
        let p = |x: f64| (x - self.x0).powi(3) / 3.0;
        2.0 * self.t * (p(x1) - p(x0))
    }

    fn is_entire(&self) -> bool {
        true
    }
}
