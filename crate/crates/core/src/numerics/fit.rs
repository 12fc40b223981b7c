use crate::error::{Error, Result};

/// Axis transform for a rate fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitKind {
    /// `log err` against `log n`: power laws.
    LogLog,
    /// `log err` against `n`: exponential laws.
    SemiLog,
}

/// Least-squares line through the transformed points; returns `(slope, intercept)`.
pub fn fit_rate(points: &[(f64, f64)], kind: FitKind) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit(format!("{} point(s)", points.len())));
    }
    if let Some(&(n, e)) = points.iter().find(|(n, e)| !(*n > 0.0) || !(*e > 0.0)) {
        return Err(Error::DegenerateFit(format!("non-positive point ({n}, {e})")));
    }
    let xs: Vec<f64> = points
        .iter()
        .map(|&(n, _)| match kind {
            FitKind::LogLog => n.ln(),
            FitKind::SemiLog => n,
        })
        .collect();
    let ys: Vec<f64> = points.iter().map(|&(_, e)| e.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 1e-300 {
        return Err(Error::DegenerateFit("all abscissae equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}
