use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::equilibrium::EquilibriumSolution;
use crate::error::{Error, Result};
use crate::nodes::{log_cell_moments, ExternalField};
use crate::numerics::gauss_legendre_f64;
use crate::specialfn::Side;

/// `g(ζ) = ∫ log(ζ − x) dμ_*(x)` for the piecewise-constant cell density, and the phase
/// `φ = −2g + V^an − ℓ`.
#[derive(Clone)]
pub struct GPhaseEvaluator {
    pub centers: Vec<f64>,
    pub h: f64,
    pub rho: Vec<f64>,
    pub ell: f64,
    pub band: (f64, f64),
    pub interval: (f64, f64),
    pub field: Arc<dyn ExternalField>,
}

impl std::fmt::Debug for GPhaseEvaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GPhaseEvaluator").field("band", &self.band).field("ell", &self.ell).finish()
    }
}

impl GPhaseEvaluator {
    pub fn new(eq: &EquilibriumSolution, field: Arc<dyn ExternalField>) -> Result<Self> {
        let band = eq.band.ok_or_else(|| Error::DegenerateFit("equilibrium has no band".into()))?;
        Ok(Self {
            centers: eq.centers(),
            h: eq.h(),
            rho: eq.rho.rho.clone(),
            ell: eq.ell,
            band,
            interval: (eq.edges[0], *eq.edges.last().unwrap()),
            field,
        })
    }

    fn on_cut(&self, z: Complex64) -> bool {
        z.im == 0.0 && z.re >= self.interval.0 && z.re <= self.interval.1
    }

    /// Principal-branch `g`; on `[A, B]` a side must be chosen.
    pub fn g(&self, z: Complex64, side: Side) -> Result<Complex64> {
        if self.on_cut(z) && side == Side::Principal {
            return Err(Error::OnCut);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, r) in self.centers.iter().zip(&self.rho) {
            if *r != 0.0 {
                acc += *r * log_cell_moments(z - x, self.h, side).0;
            }
        }
        Ok(acc)
    }

    /// `(g_+(x), g_−(x))` on the real line.
    pub fn g_boundary(&self, x: f64) -> (Complex64, Complex64) {
        let z = Complex64::new(x, 0.0);
        (self.g(z, Side::Upper).unwrap(), self.g(z, Side::Lower).unwrap())
    }

    /// `μ_*([x, B])` by direct cell sums.
    pub fn mass_right_of(&self, x: f64) -> f64 {
        let mut m = 0.0;
        for (c, r) in self.centers.iter().zip(&self.rho) {
            let lo = c - 0.5 * self.h;
            let hi = c + 0.5 * self.h;
            if x <= lo {
                m += r * self.h;
            } else if x < hi {
                m += r * (hi - x);
            }
        }
        m
    }

    /// `2 ∫ log|x − t| dμ_*(t)` by Gauss–Legendre on each cell; the cell containing `x` is
    /// integrated exactly.
    pub fn log_abs_integral(&self, x: f64) -> f64 {
        let (nodes, weights) = gauss_legendre_f64(24);
        let seg = |a: f64, b: f64| -> f64 {
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            nodes.iter().zip(&weights).map(|(t, w)| w * (x - mid - half * t).abs().ln()).sum::<f64>() * half
        };
        let mut acc = 0.0;
        for (c, r) in self.centers.iter().zip(&self.rho) {
            if *r == 0.0 {
                continue;
            }
            let lo = c - 0.5 * self.h;
            let hi = c + 0.5 * self.h;
            let exact = |l: f64| if l > 0.0 { l * l.ln() - l } else { 0.0 };
            let v = if x >= lo && x <= hi { exact(x - lo) + exact(hi - x) } else { seg(lo, hi) };
            acc += r * v;
        }
        2.0 * acc
    }

    pub fn phase(&self, z: Complex64, side: Side) -> Result<Complex64> {
        let g = self.g(z, side)?;
        Ok(-2.0 * g + self.field.v_an(z, side) - self.ell)
    }

    /// `φ ± 2πi` by the sign of `Im ζ` (or the side on the axis): continues `φ` across `(A, c)`.
    pub fn phase_tilde(&self, z: Complex64, side: Side) -> Result<Complex64> {
        let s = if z.im > 0.0 {
            1.0
        } else if z.im < 0.0 {
            -1.0
        } else {
            side.sign() as f64
        };
        Ok(self.phase(z, side)? + Complex64::new(0.0, 2.0 * PI * s))
    }

    /// Cell average of `Re φ_+` over cell `i`, by Gauss–Legendre on pointwise boundary values.
    pub fn cell_average_re_phase(&self, i: usize) -> f64 {
        let (nodes, weights) = gauss_legendre_f64(16);
        let c = self.centers[i];
        let half = 0.5 * self.h;
        nodes
            .iter()
            .zip(&weights)
            .map(|(t, w)| w * self.phase(Complex64::new(c + half * t, 0.0), Side::Upper).unwrap().re)
            .sum::<f64>()
            * 0.5
    }
}
