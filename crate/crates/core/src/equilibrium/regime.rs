use super::grid::EnergyGrid;
use super::kkt::{CellClass, KktReport};
use super::qp::{ConstrainedMeasure, QpOptions};
use crate::error::{Error, Result};

/// Number of cells used for each soft-edge fit.
pub const EDGE_FIT_CELLS: usize = 8;
/// Largest relative misfit of the `ρ² ≈ α + βx` edge model.
pub const EDGE_MISFIT_MAX: f64 = 0.2;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RegimeFlags {
    /// One contiguous band run, away from both endpoints.
    pub single_interval: bool,
    /// Interior band density stays strictly between `0` and `κ`, and nothing saturates.
    pub interior_unsaturated: bool,
    /// Both edges follow a square-root profile.
    pub soft_edges: bool,
    /// Off-band cells beyond `δ` satisfy the strict variational inequality.
    pub strict_inequality: bool,
    pub band_margin: f64,
    pub edge_misfit: (f64, f64),
    pub off_band_margin: f64,
    pub delta: f64,
}

impl RegimeFlags {
    pub fn all(&self) -> bool {
        self.single_interval && self.interior_unsaturated && self.soft_edges && self.strict_inequality
    }
}

/// `δ = min(0.1 (d − c), 0.5 dist({c, d}, {A, B}))`.
pub fn disk_radius(c: f64, d: f64, a: f64, b: f64) -> f64 {
    let gap = (c - a).min(b - d);
    (0.1 * (d - c)).min(0.5 * gap)
}

fn band_runs(classes: &[CellClass]) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut i = 0;
    while i < classes.len() {
        if classes[i] == CellClass::Band {
            let s = i;
            while i + 1 < classes.len() && classes[i + 1] == CellClass::Band {
                i += 1;
            }
            runs.push((s, i));
        }
        i += 1;
    }
    runs
}

/// Least-squares fit of `ρ² ≈ α + βx` on the given cells; returns the zero of the line and the
/// RMS residual relative to the largest `ρ²` in the window.
fn edge_fit(x: &[f64], rho: &[f64], cells: &[usize]) -> Option<(f64, f64, f64)> {
    let n = cells.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &i in cells {
        let y = rho[i] * rho[i];
        sx += x[i];
        sy += y;
        sxx += x[i] * x[i];
        sxy += x[i] * y;
    }
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-300 {
        return None;
    }
    let beta = (n * sxy - sx * sy) / det;
    let alpha = (sy - beta * sx) / n;
    if beta == 0.0 {
        return None;
    }
    let ymax = cells.iter().map(|&i| rho[i] * rho[i]).fold(0.0, f64::max);
    let rss: f64 = cells.iter().map(|&i| (rho[i] * rho[i] - alpha - beta * x[i]).powi(2)).sum();
    let misfit = (rss / n).sqrt() / ymax.max(1e-300);
    Some((-alpha / beta, beta, misfit))
}

struct EdgeFits {
    c: f64,
    d: f64,
    misfit: (f64, f64),
    slopes_ok: bool,
}

fn fit_edges(grid: &EnergyGrid, mu: &ConstrainedMeasure, first: usize, last: usize) -> Result<EdgeFits> {
    if last < first + 2 * EDGE_FIT_CELLS + 2 {
        return Err(Error::DegenerateFit(format!("band of {} cells is too short", last + 1 - first)));
    }
    let x = grid.centers();
    let left: Vec<usize> = (first + 1..=first + EDGE_FIT_CELLS).collect();
    let right: Vec<usize> = (last - EDGE_FIT_CELLS..last).collect();
    let (cl, bl, ml) = edge_fit(&x, &mu.rho, &left).ok_or(Error::DegenerateFit("left edge".into()))?;
    let (cr, br, mr) = edge_fit(&x, &mu.rho, &right).ok_or(Error::DegenerateFit("right edge".into()))?;
    let c = cl.clamp(grid.edges[first], grid.edges[first + 1]);
    let d = cr.clamp(grid.edges[last], grid.edges[last + 1]);
    Ok(EdgeFits { c, d, misfit: (ml, mr), slopes_ok: bl > 0.0 && br < 0.0 })
}

/// Band endpoints `[c, d]` from square-root fits at both ends of the outermost band cells.
pub fn extract_band(grid: &EnergyGrid, mu: &ConstrainedMeasure, kkt: &KktReport) -> Result<(f64, f64)> {
    let runs = band_runs(&kkt.classes);
    let (Some(f), Some(l)) = (runs.first(), runs.last()) else {
        return Err(Error::DegenerateFit("no band cells".into()));
    };
    let fits = fit_edges(grid, mu, f.0, l.1)?;
    Ok((fits.c, fits.d))
}

pub fn classify_regime(grid: &EnergyGrid, mu: &ConstrainedMeasure, kkt: &KktReport, opts: &QpOptions) -> RegimeFlags {
    let _ = opts;
    let mut flags = RegimeFlags::default();
    let runs = band_runs(&kkt.classes);
    flags.single_interval = runs.len() == 1 && runs[0].0 > 0 && runs[0].1 + 1 < grid.m;
    let (Some(&(first, _)), Some(&(_, last))) = (runs.first(), runs.last()) else {
        return flags;
    };
    let interior = first + EDGE_FIT_CELLS..=last.saturating_sub(EDGE_FIT_CELLS);
    flags.band_margin = interior
        .clone()
        .map(|i| mu.rho[i].min(grid.kappa[i] - mu.rho[i]))
        .fold(f64::INFINITY, f64::min);
    let any_saturated = kkt.classes.iter().any(|c| *c == CellClass::Saturated);
    flags.interior_unsaturated = !any_saturated && flags.band_margin.is_finite() && flags.band_margin > kkt.sat_tol;
    let Ok(fits) = fit_edges(grid, mu, first, last) else {
        return flags;
    };
    flags.edge_misfit = fits.misfit;
    flags.soft_edges = fits.slopes_ok && fits.misfit.0 < EDGE_MISFIT_MAX && fits.misfit.1 < EDGE_MISFIT_MAX;
    let delta = disk_radius(fits.c, fits.d, grid.a, grid.b);
    flags.delta = delta;
    let x = grid.centers();
    let mut margin = f64::INFINITY;
    for i in 0..grid.m {
        if kkt.classes[i] == CellClass::Band {
            continue;
        }
        let dist = if x[i] < fits.c { fits.c - x[i] } else if x[i] > fits.d { x[i] - fits.d } else { 0.0 };
        if dist > delta {
            margin = margin.min(kkt.e[i] - kkt.ell);
        }
    }
    flags.off_band_margin = margin;
    flags.strict_inequality = delta > 0.0 && margin > kkt.margin_tol();
    flags
}
