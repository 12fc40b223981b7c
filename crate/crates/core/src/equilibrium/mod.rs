//! Constrained logarithmic equilibrium problem: grid, QP solve, KKT certificate and regime flags.

pub mod grid;
pub mod kkt;
pub mod qp;
pub mod regime;

pub use grid::{assemble_grid, EnergyGrid, QuadraticField};
pub use kkt::{kkt_certify, CellClass, KktReport};
pub use qp::{solve_qp, ConstrainedMeasure, QpOptions, QpResult};
pub use regime::{classify_regime, disk_radius, extract_band, RegimeFlags};

use crate::error::Result;

/// Solved and certified equilibrium measure.
#[derive(Clone, Debug)]
pub struct EquilibriumSolution {
    pub edges: Vec<f64>,
    pub kappa: Vec<f64>,
    pub rho: ConstrainedMeasure,
    pub ell: f64,
    pub band: Option<(f64, f64)>,
    pub band_uncertainty: f64,
    pub kkt: KktReport,
    pub flags: RegimeFlags,
    pub energy_trace: Vec<f64>,
    pub iterations: usize,
}

impl EquilibriumSolution {
    pub fn m(&self) -> usize {
        self.kappa.len()
    }

    pub fn h(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn is_regular(&self) -> bool {
        self.flags.all()
    }
}

/// Solve from the default start, certify, classify and extract the band.
pub fn solve_equilibrium(grid: &EnergyGrid, opts: &QpOptions) -> Result<EquilibriumSolution> {
    let start = ConstrainedMeasure::default_start(grid);
    solve_equilibrium_from(grid, start, opts)
}

pub fn solve_equilibrium_from(grid: &EnergyGrid, start: ConstrainedMeasure, opts: &QpOptions) -> Result<EquilibriumSolution> {
    let qp = solve_qp(grid, start, opts)?;
    let kkt = kkt_certify(grid, &qp.measure, opts)?;
    let flags = classify_regime(grid, &qp.measure, &kkt, opts);
    let band = extract_band(grid, &qp.measure, &kkt).ok();
    Ok(EquilibriumSolution {
        edges: grid.edges.clone(),
        kappa: grid.kappa.clone(),
        rho: qp.measure,
        ell: kkt.ell,
        band,
        band_uncertainty: grid.h,
        kkt,
        flags,
        energy_trace: qp.energy_trace,
        iterations: qp.iterations,
    })
}
