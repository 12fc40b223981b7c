use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::equilibrium::{QpOptions, QuadraticField};
use crate::error::{Error, Result};
use crate::nodes::{build_density, DensityKind, DensitySpec};
use crate::numerics::PrecisionContext;
use crate::pade::MAX_BITS;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExponentConfig {
    pub re: f64,
    pub im: f64,
}

impl Default for ExponentConfig {
    fn default() -> Self {
        Self { re: 2.0, im: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityName {
    Uniform,
    Poly,
    CosineBump,
}

/// Node density on `[a, b]`; only the parameters of the chosen kind are read.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DensityConfig {
    pub kind: DensityName,
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<f64>,
    pub center: f64,
    pub width: f64,
    pub base: f64,
}

impl Default for DensityConfig {
    fn default() -> Self {
        Self { kind: DensityName::Uniform, a: 1.0, b: 3.0, coeffs: vec![1.0, 1.0], center: 2.0, width: 1.0, base: 1.5 }
    }
}

impl DensityConfig {
    pub fn spec(&self) -> Result<DensitySpec> {
        let kind = match self.kind {
            DensityName::Uniform => DensityKind::Uniform,
            DensityName::Poly => DensityKind::Poly { coeffs: self.coeffs.clone() },
            DensityName::CosineBump => DensityKind::CosineBump { center: self.center, width: self.width, base: self.base },
        };
        build_density(kind, self.a, self.b)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    /// Degrees of the Padé sweep.
    pub n_list: Vec<usize>,
    /// Degrees for fitted rates (nodes, matching, lips, subexponential factor).
    pub rate_n_list: Vec<usize>,
    /// Degrees for the contour-integral comparison.
    pub contour_n_list: Vec<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { n_list: vec![4, 8, 16, 32], rate_n_list: vec![8, 16, 32, 64], contour_n_list: vec![4, 8, 16] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PrecisionConfig {
    pub bits: u32,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        Self { bits: 384 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EquilibriumConfig {
    /// Grid cells for the density sweep.
    pub cells: usize,
    /// Grid cells for the equilibrium feeding the parametrix stage.
    pub parametrix_cells: usize,
    pub qp_tol: f64,
    pub kkt_tol: Option<f64>,
    pub sat_tol_rel: f64,
    pub max_iter: usize,
}

impl Default for EquilibriumConfig {
    fn default() -> Self {
        Self { cells: 512, parametrix_cells: 1024, qp_tol: 1e-10, kkt_tol: None, sat_tol_rel: 1e-6, max_iter: 100_000 }
    }
}

impl EquilibriumConfig {
    pub fn qp_options(&self) -> QpOptions {
        QpOptions { qp_tol: self.qp_tol, max_iter: self.max_iter, polish: true, sat_tol_rel: self.sat_tol_rel, kkt_tol: self.kkt_tol }
    }
}

/// Quadratic field `2t(x − x0)²` over the configured density, used for the parametrix checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReferenceFieldConfig {
    pub t: f64,
    pub x0: f64,
}

impl Default for ReferenceFieldConfig {
    fn default() -> Self {
        Self { t: 1.5625, x0: 2.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ContourConfig {
    /// Ellipse margin beyond `[A, B]` as a fraction of `B − A`.
    pub margin_frac: f64,
    /// Real evaluation point outside the contour.
    pub eval_point: f64,
}

impl Default for ContourConfig {
    fn default() -> Self {
        Self { margin_frac: 0.25, eval_point: 4.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingConfig {
    pub seed: u64,
    /// Seeded points added to the fixed compact set.
    pub extra_points: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self { seed: 20240917, extra_points: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out") }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub s: ExponentConfig,
    pub density: DensityConfig,
    pub sweep: SweepConfig,
    pub precision: PrecisionConfig,
    pub equilibrium: EquilibriumConfig,
    pub reference_field: ReferenceFieldConfig,
    pub contour: ContourConfig,
    pub sampling: SamplingConfig,
    pub output: OutputConfig,
}

fn strictly_increasing(name: &str, v: &[usize], min_len: usize) -> Result<()> {
    if v.len() < min_len {
        return Err(Error::Config(format!("{name} needs at least {min_len} entries")));
    }
    if v.iter().any(|&n| n == 0) {
        return Err(Error::Config(format!("{name} entries must be positive")));
    }
    if v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config(format!("{name} must be strictly increasing")));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |x: f64| x.is_finite();
        if !finite(self.s.re) || !finite(self.s.im) || self.s.re <= 1.0 {
            return Err(Error::Config(format!("Re s = {} must exceed 1", self.s.re)));
        }
        let d = &self.density;
        if !finite(d.a) || !finite(d.b) || d.a <= 0.0 || d.b <= d.a {
            return Err(Error::Config(format!("interval [{}, {}] must satisfy 0 < A < B", d.a, d.b)));
        }
        d.spec().map_err(|e| Error::Config(format!("density: {e}")))?;
        strictly_increasing("sweep.n_list", &self.sweep.n_list, 1)?;
        strictly_increasing("sweep.rate_n_list", &self.sweep.rate_n_list, 2)?;
        strictly_increasing("sweep.contour_n_list", &self.sweep.contour_n_list, 1)?;
        if self.precision.bits < 128 || self.precision.bits > MAX_BITS {
            return Err(Error::Config(format!("precision.bits = {} outside [128, {MAX_BITS}]", self.precision.bits)));
        }
        let e = &self.equilibrium;
        if e.cells < 64 || e.parametrix_cells < 64 {
            return Err(Error::Config("equilibrium grids need at least 64 cells".into()));
        }
        if !(e.qp_tol > 0.0) || !(e.sat_tol_rel > 0.0) || e.kkt_tol.is_some_and(|t| !(t > 0.0)) {
            return Err(Error::Config("equilibrium tolerances must be positive".into()));
        }
        if !(self.reference_field.t > 0.0) || !finite(self.reference_field.x0) {
            return Err(Error::Config("reference_field.t must be positive".into()));
        }
        if !(self.contour.margin_frac > 0.0) {
            return Err(Error::Config("contour.margin_frac must be positive".into()));
        }
        if !(self.contour.eval_point > d.b + self.contour.margin_frac * (d.b - d.a)) {
            return Err(Error::Config("contour.eval_point must lie outside the contour".into()));
        }
        Ok(())
    }

    pub fn precision(&self) -> PrecisionContext {
        PrecisionContext::new(self.precision.bits).expect("validated precision")
    }

    pub fn reference_field(&self) -> QuadraticField {
        QuadraticField { t: self.reference_field.t, x0: self.reference_field.x0, a: self.density.a, b: self.density.b }
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form, output directory excluded.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = OutputConfig::default();
        let bytes = serde_json::to_vec(&c).expect("config serializes");
        let digest = Sha256::digest(&bytes);
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
