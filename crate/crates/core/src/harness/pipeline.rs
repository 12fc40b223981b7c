use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::report::{AcceptanceReport, CheckRecord, RegimeEntry, StageStatus, Status, Table};
use crate::equilibrium::{assemble_grid, solve_equilibrium, EquilibriumSolution};
use crate::error::{Error, Result};
use crate::nodes::{shipped_densities, DensitySpec, FieldEvaluator};
use crate::numerics::PrecisionContext;
use crate::pade::{hurwitz_provider, run_pade, PadeRun};
use crate::phase::ParametrixBundle;
use crate::specialfn::HurwitzParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Nodes,
    Pade,
    Equilibrium,
    Phase,
    Parametrix,
}

impl Stage {
    pub const ALL: [Stage; 5] = [Stage::Nodes, Stage::Pade, Stage::Equilibrium, Stage::Phase, Stage::Parametrix];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Nodes => "nodes",
            Stage::Pade => "pade",
            Stage::Equilibrium => "equilibrium",
            Stage::Phase => "phase",
            Stage::Parametrix => "parametrix",
        }
    }
}

/// `(id, name, stage, threshold, basis)` for every acceptance criterion.
pub const CRITERIA: [(u8, &str, Stage, &str, &str); 16] = [
    (1, "interpolation exactness", Stage::Pade, "residual / (cond*1e2*2^-192) <= 1", "Q f - P vanishes at every node"),
    (2, "discrete orthogonality", Stage::Pade, "sum / (cond*1e2*2^-192) <= 1", "Q is orthogonal to lower degrees against the barycentric weights"),
    (3, "rational recovery", Stage::Pade, "coefficient error <= 1e-30", "a rational function of matching degree is reproduced exactly"),
    (4, "barycentric identity", Stage::Pade, "relative residual <= 1e-20", "W times the node polynomial equals the Lagrange interpolant"),
    (5, "contour integral vs Lagrange", Stage::Pade, "relative difference <= 1e-15", "the contour integral reproduces the interpolant off the contour"),
    (6, "quantile spacing", Stage::Nodes, "gap violation <= 0", "n times the node gaps lies between 1/kappa_max and 1/kappa_min"),
    (7, "Riemann-sum and log-potential rates", Stage::Nodes, "worst slope <= -0.8", "node sums and node potentials converge at rate 1/n"),
    (8, "Hurwitz bound exponent", Stage::Nodes, "|slope - (1 - Re s)| <= 0.1", "zeta(s, n alpha) decays like n^(1 - Re s)"),
    (9, "equilibrium certification", Stage::Equilibrium, "worst normalized defect <= 1", "variational conditions of the constrained energy minimizer"),
    (10, "residue and normalization of Y", Stage::Pade, "residue mismatch <= 1e-15", "poles of Y carry the prescribed residues and Y z^(-n sigma3) -> I"),
    (11, "outer parametrix", Stage::Phase, "|det N - 1| <= 1e-30", "N has unit determinant, the band jump, and N - I = O(1/z)"),
    (12, "Airy asymptotics", Stage::Phase, "|ratio - 2^1.5| <= 0.3*2^1.5", "the stripped Airy model error decays like xi^(-3/2)"),
    (13, "matching on the disk boundaries", Stage::Parametrix, "|slope + 1| <= 0.3", "P N^-1 - I = O(1/n) on both endpoint circles"),
    (14, "lip jump decay", Stage::Parametrix, "|slope + min Re phi| <= 0.1 |min Re phi|", "lip jumps scale like exp(-n phi)"),
    (15, "strong asymptotics", Stage::Parametrix, "worst slope <= -0.8", "Q e^(-n g) approaches the outer solution off the band"),
    (16, "subexponential factor", Stage::Phase, "monotone and <= 2 C log n / n", "(1/n) log |W e^(-nV/2)| tends to zero"),
];

/// Result of one criterion before it is turned into a record.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub measured: Option<f64>,
    pub evidence: Vec<String>,
}

impl Outcome {
    pub fn check(measured: f64, pass: bool, evidence: Vec<String>) -> Self {
        let status = if pass { Status::Pass } else { Status::Fail };
        Self { status, measured: Some(measured), evidence }
    }

    pub fn skipped(evidence: Vec<String>) -> Self {
        Self { status: Status::ConditionallySkipped, measured: None, evidence }
    }
}

/// Report and CSV tables of one run.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: AcceptanceReport,
    pub tables: Vec<Table>,
}

/// Shared state of a run: inputs plus lazily built stage products.
pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    pub prec: PrecisionContext,
    pub density: DensitySpec,
    pub hp: HurwitzParams,
    pub field: Arc<FieldEvaluator>,
    pub tables: BTreeMap<String, Table>,
    pub regime: Vec<RegimeEntry>,
    pade: BTreeMap<usize, Result<Arc<PadeRun>>>,
    shipped: Option<Vec<(DensitySpec, Result<EquilibriumSolution>)>>,
    reference: Option<Result<Arc<(EquilibriumSolution, Option<ParametrixBundle>)>>>,
}

impl<'a> Ctx<'a> {
    pub fn new(cfg: &'a RunConfig) -> Result<Self> {
        cfg.validate()?;
        let prec = cfg.precision();
        let density = cfg.density.spec()?;
        let hp = HurwitzParams::from_f64(cfg.s.re, cfg.s.im, &prec)?;
        let field = Arc::new(FieldEvaluator::with_default_grid(density.clone()));
        Ok(Self {
            cfg,
            prec,
            density,
            hp,
            field,
            tables: BTreeMap::new(),
            regime: Vec::new(),
            pade: BTreeMap::new(),
            shipped: None,
            reference: None,
        })
    }

    pub fn table(&mut self, name: &str, columns: &[&str]) -> &mut Table {
        self.tables.entry(name.to_string()).or_insert_with(|| Table::new(name, columns))
    }

    /// Builds the missing Padé runs for the configured density in parallel.
    pub fn ensure_pade(&mut self, ns: &[usize]) {
        let missing: Vec<usize> = ns.iter().copied().filter(|n| !self.pade.contains_key(n)).collect();
        let provider = hurwitz_provider(&self.hp);
        let built: Vec<(usize, Result<Arc<PadeRun>>)> = missing
            .par_iter()
            .map(|&n| (n, run_pade(&self.density, n, &provider, &self.prec).map(Arc::new)))
            .collect();
        self.pade.extend(built);
    }

    pub fn pade(&mut self, n: usize) -> Result<Arc<PadeRun>> {
        self.ensure_pade(&[n]);
        self.pade[&n].clone()
    }

    /// Equilibria of the shipped densities on the sweep grid.
    pub fn shipped(&mut self) -> &[(DensitySpec, Result<EquilibriumSolution>)] {
        if self.shipped.is_none() {
            let m = self.cfg.equilibrium.cells;
            let opts = self.cfg.equilibrium.qp_options();
            let sols: Vec<(DensitySpec, Result<EquilibriumSolution>)> = shipped_densities()
                .into_par_iter()
                .map(|d| {
                    let fe = FieldEvaluator::with_default_grid(d.clone());
                    let grid = assemble_grid(&d, &fe, m);
                    let sol = solve_equilibrium(&grid, &opts);
                    (d, sol)
                })
                .collect();
            for (d, s) in &sols {
                if let Ok(s) = s {
                    self.regime.push(regime_entry(&d.label(), s));
                }
            }
            self.shipped = Some(sols);
        }
        self.shipped.as_deref().unwrap()
    }

    /// Equilibrium of the reference quadratic field and, when regular, its parametrix bundle.
    pub fn reference(&mut self) -> Result<Arc<(EquilibriumSolution, Option<ParametrixBundle>)>> {
        if self.reference.is_none() {
            let qf = self.cfg.reference_field();
            let grid = assemble_grid(&self.density, &qf, self.cfg.equilibrium.parametrix_cells);
            let built = solve_equilibrium(&grid, &self.cfg.equilibrium.qp_options()).and_then(|eq| {
                self.regime.push(regime_entry("reference_quadratic", &eq));
                let bundle = if eq.is_regular() { Some(ParametrixBundle::build(&eq, Arc::new(qf), &self.prec)?) } else { None };
                Ok(Arc::new((eq, bundle)))
            });
            self.reference = Some(built);
        }
        self.reference.clone().unwrap()
    }

    /// Seeded complex points `center + r e^{iθ}` with `r` in `[r0, r1]·(B − A)/2`, kept off the real axis.
    pub fn sample_points(&self, count: usize, r0: f64, r1: f64, stream: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.sampling.seed);
        rng.set_stream(stream);
        let (a, b) = (self.density.a, self.density.b);
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        (0..count)
            .map(|_| {
                let r = half * rng.gen_range(r0..r1);
                let mut th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                if th.sin().abs() < 0.05 {
                    th += 0.1;
                }
                Complex64::new(center, 0.0) + Complex64::from_polar(r, th)
            })
            .collect()
    }

    /// Compact evaluation set: `{B + 1, (A + B)/2 + i(B − A), 2B}` plus seeded extras outside the band hull.
    pub fn compact_points(&self) -> Vec<Complex64> {
        let (a, b) = (self.density.a, self.density.b);
        let mut pts = vec![Complex64::new(b + 1.0, 0.0), Complex64::new(0.5 * (a + b), b - a), Complex64::new(2.0 * b, 0.0)];
        pts.extend(self.sample_points(self.cfg.sampling.extra_points, 1.5, 2.5, 15));
        pts
    }
}

pub fn regime_entry(label: &str, s: &EquilibriumSolution) -> RegimeEntry {
    RegimeEntry {
        label: label.into(),
        cells: s.m(),
        band: s.band,
        single_interval: s.flags.single_interval,
        interior_unsaturated: s.flags.interior_unsaturated,
        soft_edges: s.flags.soft_edges,
        strict_inequality: s.flags.strict_inequality,
        regular: s.is_regular(),
        delta: s.flags.delta,
    }
}

fn run_criterion(ctx: &mut Ctx, id: u8) -> Result<Outcome> {
    match id {
        1 => ctx.c01_interpolation(),
        2 => ctx.c02_orthogonality(),
        3 => ctx.c03_rational_recovery(),
        4 => ctx.c04_barycentric(),
        5 => ctx.c05_contour_integral(),
        6 => ctx.c06_spacing(),
        7 => ctx.c07_rates(),
        8 => ctx.c08_hurwitz_bound(),
        9 => ctx.c09_equilibrium(),
        10 => ctx.c10_y_matrix(),
        11 => ctx.c11_outer(),
        12 => ctx.c12_airy(),
        13 => ctx.c13_matching(),
        14 => ctx.c14_lips(),
        15 => ctx.c15_strong(),
        16 => ctx.c16_subexponential(),
        _ => Err(Error::Config(format!("unknown criterion {id}"))),
    }
}

/// Runs the selected stages in pipeline order; criteria of other stages are marked not-run.
pub fn run_stages(cfg: &RunConfig, stages: &[Stage]) -> Result<RunOutput> {
    let mut ctx = Ctx::new(cfg)?;
    let mut stage_status = BTreeMap::new();
    let mut records = Vec::with_capacity(CRITERIA.len());
    for stage in Stage::ALL {
        let selected = stages.contains(&stage);
        let status = if selected { StageStatus::Ran } else { StageStatus::NotRun };
        stage_status.insert(stage.name().to_string(), status);
    }
    for stage in Stage::ALL {
        for &(id, name, st, threshold, basis) in CRITERIA.iter().filter(|c| c.2 == stage) {
            let outcome = if stages.contains(&st) {
                run_criterion(&mut ctx, id).unwrap_or_else(|e| Outcome {
                    status: Status::Error,
                    measured: None,
                    evidence: vec![format!("{} stage: {e}", st.name())],
                })
            } else {
                Outcome { status: Status::NotRun, measured: None, evidence: Vec::new() }
            };
            records.push(CheckRecord {
                id,
                name: name.into(),
                stage: st,
                status: outcome.status,
                measured: outcome.measured.filter(|v| v.is_finite()),
                threshold: threshold.into(),
                basis: basis.into(),
                evidence: outcome.evidence,
            });
        }
    }
    records.sort_by_key(|r| r.id);
    let report = AcceptanceReport {
        config_hash: cfg.hash(),
        precision_bits: cfg.precision.bits,
        stages: stage_status,
        records,
        regime: ctx.regime.clone(),
    };
    Ok(RunOutput { report, tables: ctx.tables.into_values().collect() })
}

/// Full pipeline: nodes, Padé, equilibrium, phase and parametrix stages.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunOutput> {
    run_stages(cfg, &Stage::ALL)
}
