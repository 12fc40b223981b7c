use super::grid::EnergyGrid;
use super::qp::{ConstrainedMeasure, QpOptions};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellClass {
    Band,
    Void,
    Saturated,
}

/// Variational certificate: `e_i` is the cell average of `2U^μ + V`.
#[derive(Clone, Debug)]
pub struct KktReport {
    pub e: Vec<f64>,
    pub ell: f64,
    pub classes: Vec<CellClass>,
    pub kkt_tol: f64,
    pub sat_tol: f64,
    pub max_violation: f64,
}

impl KktReport {
    pub fn band_cells(&self) -> Vec<usize> {
        (0..self.classes.len()).filter(|&i| self.classes[i] == CellClass::Band).collect()
    }

    pub fn margin_tol(&self) -> f64 {
        10.0 * self.kkt_tol
    }
}

pub fn cell_potentials(grid: &EnergyGrid, mu: &ConstrainedMeasure) -> Vec<f64> {
    let ku = grid.kernel_apply(&mu.masses());
    (0..grid.m).map(|i| 2.0 * ku[i] / (grid.h * grid.h) + grid.field[i] / grid.h).collect()
}

pub fn kkt_certify(grid: &EnergyGrid, mu: &ConstrainedMeasure, opts: &QpOptions) -> Result<KktReport> {
    let e = cell_potentials(grid, mu);
    let kmax = grid.kappa.iter().cloned().fold(0.0, f64::max);
    let sat_tol = opts.sat_tol_rel * kmax;
    let kkt_tol = opts.kkt_tol.unwrap_or_else(|| 10.0 * opts.qp_tol * e.iter().map(|x| x.abs()).fold(1.0, f64::max));
    let classes: Vec<CellClass> = (0..grid.m)
        .map(|i| {
            let r = mu.rho[i];
            if r <= sat_tol {
                CellClass::Void
            } else if r >= grid.kappa[i] - sat_tol {
                CellClass::Saturated
            } else {
                CellClass::Band
            }
        })
        .collect();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..grid.m {
        if classes[i] == CellClass::Band {
            num += mu.rho[i] * e[i];
            den += mu.rho[i];
        }
    }
    let ell = if den > 0.0 {
        num / den
    } else {
        // No free cell: the multiplier lies between the saturated and void potentials.
        let hi = (0..grid.m).filter(|&i| classes[i] == CellClass::Saturated).map(|i| e[i]).fold(f64::NEG_INFINITY, f64::max);
        let lo = (0..grid.m).filter(|&i| classes[i] == CellClass::Void).map(|i| e[i]).fold(f64::INFINITY, f64::min);
        match (hi.is_finite(), lo.is_finite()) {
            (true, true) => 0.5 * (hi + lo),
            (true, false) => hi,
            (false, true) => lo,
            _ => return Err(Error::Degenerate),
        }
    };
    let mut worst = (0usize, 0.0f64);
    for i in 0..grid.m {
        let v = match classes[i] {
            CellClass::Band => (e[i] - ell).abs(),
            CellClass::Void => (ell - e[i]).max(0.0),
            CellClass::Saturated => (e[i] - ell).max(0.0),
        };
        if v > worst.1 {
            worst = (i, v);
        }
    }
    if worst.1 > kkt_tol {
        return Err(Error::InconsistentKkt { cell: worst.0, violation: worst.1 });
    }
    Ok(KktReport { e, ell, classes, kkt_tol, sat_tol, max_violation: worst.1 })
}
