use nalgebra::{DMatrix, DVector};

use super::grid::EnergyGrid;
use crate::error::{Error, Result};

/// Cell densities `ρ_i` of an admissible measure, `0 ≤ ρ_i ≤ κ_i`, `Σ ρ_i h = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstrainedMeasure {
    pub rho: Vec<f64>,
    pub mass: f64,
    pub h: f64,
}

impl ConstrainedMeasure {
    pub fn from_masses(u: &[f64], h: f64) -> Self {
        Self { rho: u.iter().map(|x| x / h).collect(), mass: u.iter().sum(), h }
    }

    pub fn masses(&self) -> Vec<f64> {
        self.rho.iter().map(|r| r * self.h).collect()
    }

    /// `ρ = κ/2`, which already has unit mass; projected for rounding.
    pub fn default_start(grid: &EnergyGrid) -> Self {
        let u: Vec<f64> = grid.kappa.iter().map(|k| 0.5 * k * grid.h).collect();
        Self::from_masses(&project(&u, &upper_bounds(grid)), grid.h)
    }

    /// Equal mass per cell, projected onto the admissible set.
    pub fn uniform_start(grid: &EnergyGrid) -> Self {
        let u = vec![1.0 / grid.m as f64; grid.m];
        Self::from_masses(&project(&u, &upper_bounds(grid)), grid.h)
    }
}

#[derive(Clone, Debug)]
pub struct QpOptions {
    pub qp_tol: f64,
    pub max_iter: usize,
    pub polish: bool,
    /// `sat_tol = sat_tol_rel · max κ`.
    pub sat_tol_rel: f64,
    /// Fixed KKT tolerance; by default `10·qp_tol·max(1, max|e_i|)`.
    pub kkt_tol: Option<f64>,
}

impl Default for QpOptions {
    fn default() -> Self {
        Self { qp_tol: 1e-10, max_iter: 100_000, polish: true, sat_tol_rel: 1e-6, kkt_tol: None }
    }
}

#[derive(Clone, Debug)]
pub struct QpResult {
    pub measure: ConstrainedMeasure,
    pub energy_trace: Vec<f64>,
    pub iterations: usize,
    pub projected_gradient: f64,
    /// Smallest `sᵀ(∇E(u+s) − ∇E(u)) / sᵀs` over accepted steps; nonnegative for a convex energy.
    pub min_curvature: f64,
}

fn upper_bounds(grid: &EnergyGrid) -> Vec<f64> {
    grid.kappa.iter().map(|k| k * grid.h).collect()
}

/// Euclidean projection onto `{0 ≤ x ≤ ub, Σx = 1}`.
pub fn project(y: &[f64], ub: &[f64]) -> Vec<f64> {
    let mass = |lam: f64| -> f64 { y.iter().zip(ub).map(|(yi, u)| (yi - lam).clamp(0.0, *u)).sum() };
    let mut lo = y.iter().zip(ub).map(|(yi, u)| yi - u).fold(f64::INFINITY, f64::min) - 1.0;
    let mut hi = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mass(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lam = 0.5 * (lo + hi);
    // Exact multiplier on the free set identified by bisection.
    let mut free_sum = 0.0;
    let mut free = 0usize;
    let mut fixed = 0.0;
    for (yi, u) in y.iter().zip(ub) {
        let t = yi - lam;
        if t <= 0.0 {
        } else if t >= *u {
            fixed += u;
        } else {
            free += 1;
            free_sum += yi;
        }
    }
    let lam = if free > 0 { (free_sum - (1.0 - fixed)) / free as f64 } else { lam };
    y.iter().zip(ub).map(|(yi, u)| (yi - lam).clamp(0.0, *u)).collect()
}

struct Problem<'a> {
    grid: &'a EnergyGrid,
    ub: Vec<f64>,
    inv_h2: f64,
    inv_h: f64,
}

impl Problem<'_> {
    fn energy_grad(&self, u: &[f64]) -> (f64, Vec<f64>) {
        let ku = self.grid.kernel_apply(u);
        let mut e = 0.0;
        let mut g = Vec::with_capacity(u.len());
        for i in 0..u.len() {
            e += u[i] * ku[i] * self.inv_h2 + u[i] * self.grid.field[i] * self.inv_h;
            g.push(2.0 * ku[i] * self.inv_h2 + self.grid.field[i] * self.inv_h);
        }
        (e, g)
    }

    fn projected_gradient(&self, u: &[f64], g: &[f64]) -> f64 {
        let y: Vec<f64> = u.iter().zip(g).map(|(a, b)| a - b).collect();
        let p = project(&y, &self.ub);
        p.iter().zip(u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Primal-dual active-set iteration started from the bounds active at `u`.
    fn polish(&self, u: &[f64]) -> Option<Vec<f64>> {
        let m = u.len();
        #[derive(Clone, Copy, PartialEq)]
        enum S {
            Lo,
            Hi,
            Free,
        }
        let eps = 1e-14;
        let mut state: Vec<S> = (0..m)
            .map(|i| if u[i] <= eps { S::Lo } else if u[i] >= self.ub[i] - eps { S::Hi } else { S::Free })
            .collect();
        for _ in 0..50 {
            let free: Vec<usize> = (0..m).filter(|&i| state[i] == S::Free).collect();
            let nf = free.len();
            if nf == 0 {
                return None;
            }
            let hi_mass: f64 = (0..m).filter(|&i| state[i] == S::Hi).map(|i| self.ub[i]).sum();
            let mut mat = DMatrix::<f64>::zeros(nf + 1, nf + 1);
            let mut rhs = DVector::<f64>::zeros(nf + 1);
            for (r, &i) in free.iter().enumerate() {
                for (c, &j) in free.iter().enumerate() {
                    mat[(r, c)] = 2.0 * self.grid.k(i, j) * self.inv_h2;
                }
                mat[(r, nf)] = -1.0;
                let mut b = -self.grid.field[i] * self.inv_h;
                for j in 0..m {
                    if state[j] == S::Hi {
                        b -= 2.0 * self.grid.k(i, j) * self.ub[j] * self.inv_h2;
                    }
                }
                rhs[r] = b;
                mat[(nf, r)] = 1.0;
            }
            rhs[nf] = 1.0 - hi_mass;
            let sol = mat.lu().solve(&rhs)?;
            let lam = sol[nf];
            let mut cand = vec![0.0; m];
            for i in 0..m {
                if state[i] == S::Hi {
                    cand[i] = self.ub[i];
                }
            }
            for (r, &i) in free.iter().enumerate() {
                cand[i] = sol[r];
            }
            let (_, gc) = self.energy_grad(&cand);
            let mut changed = false;
            for i in 0..m {
                let next = match state[i] {
                    S::Free if cand[i] < 0.0 => S::Lo,
                    S::Free if cand[i] > self.ub[i] => S::Hi,
                    S::Lo if gc[i] < lam => S::Free,
                    S::Hi if gc[i] > lam => S::Free,
                    s => s,
                };
                if next != state[i] {
                    state[i] = next;
                    changed = true;
                }
            }
            if !changed {
                let clipped: Vec<f64> = cand.iter().zip(&self.ub).map(|(c, u)| c.clamp(0.0, *u)).collect();
                return Some(project(&clipped, &self.ub));
            }
        }
        None
    }
}

/// `‖K‖₂` from power iteration, inflated by 10% and capped by the Gershgorin bound.
pub fn kernel_norm_bound(grid: &EnergyGrid) -> f64 {
    let gersh: f64 = grid.kernel.iter().enumerate().map(|(k, v)| if k == 0 { v.abs() } else { 2.0 * v.abs() }).sum();
    let mut x: Vec<f64> = (0..grid.m).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
    let mut lam = 0.0;
    for _ in 0..60 {
        let y = grid.kernel_apply(&x);
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return gersh;
        }
        lam = norm / x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x = y.into_iter().map(|v| v / norm).collect();
    }
    (1.1 * lam).min(gersh)
}

/// Projected gradient with Barzilai–Borwein steps and Armijo backtracking (monotone energy),
/// followed by an active-set polish once the projected gradient is small.
pub fn solve_qp(grid: &EnergyGrid, start: ConstrainedMeasure, opts: &QpOptions) -> Result<QpResult> {
    let pb = Problem { grid, ub: upper_bounds(grid), inv_h2: 1.0 / (grid.h * grid.h), inv_h: 1.0 / grid.h };
    let mut u = project(&start.masses(), &pb.ub);
    let (mut e, mut g) = pb.energy_grad(&u);
    let mut trace = vec![e];
    let lip = 2.0 * pb.inv_h2 * kernel_norm_bound(grid);
    let mut step = 1.0 / lip;
    let mut min_curv = f64::INFINITY;
    let mut last_polish: Option<usize> = None;
    let mut pg = pb.projected_gradient(&u, &g);
    let mut it = 0;
    while it < opts.max_iter {
        if pg <= opts.qp_tol {
            break;
        }
        if opts.polish && pg < 1e-4 && last_polish.map_or(true, |l| it >= l + 25) {
            last_polish = Some(it);
            if let Some(cand) = pb.polish(&u) {
                let (ec, gc) = pb.energy_grad(&cand);
                if ec <= e {
                    u = cand;
                    e = ec;
                    g = gc;
                    trace.push(e);
                    pg = pb.projected_gradient(&u, &g);
                    it += 1;
                    continue;
                }
            }
        }
        let mut alpha = step;
        let mut accepted = None;
        for _ in 0..60 {
            let y: Vec<f64> = u.iter().zip(&g).map(|(a, b)| a - alpha * b).collect();
            let un = project(&y, &pb.ub);
            let dec: f64 = g.iter().zip(un.iter().zip(&u)).map(|(gi, (a, b))| gi * (a - b)).sum();
            let (en, gn) = pb.energy_grad(&un);
            if en <= e + 1e-4 * dec.min(0.0) && en <= e {
                accepted = Some((un, en, gn));
                break;
            }
            alpha *= 0.5;
        }
        let Some((un, en, gn)) = accepted else {
            break;
        };
        let s: Vec<f64> = un.iter().zip(&u).map(|(a, b)| a - b).collect();
        let yv: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let ss: f64 = s.iter().map(|x| x * x).sum();
        let sy: f64 = s.iter().zip(&yv).map(|(a, b)| a * b).sum();
        if ss > 0.0 {
            min_curv = min_curv.min(sy / ss);
        }
        step = if sy > 0.0 { (ss / sy).clamp(1e-3 / lip, 1e6 / lip) } else { 1.0 / lip };
        u = un;
        e = en;
        g = gn;
        trace.push(e);
        pg = pb.projected_gradient(&u, &g);
        it += 1;
    }
    if pg > opts.qp_tol {
        return Err(Error::NoConvergence { what: "equilibrium QP", iterations: it });
    }
    Ok(QpResult {
        measure: ConstrainedMeasure::from_masses(&u, grid.h),
        energy_trace: trace,
        iterations: it,
        projected_gradient: pg,
        min_curvature: min_curv,
    })
}
