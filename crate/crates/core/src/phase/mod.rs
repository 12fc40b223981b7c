//! `g`-function and phase, outer and Airy parametrices, endpoint conformal maps, matching,
//! lens jumps and the subexponential factor of the compressed jump.

pub mod airy_model;
pub mod conformal;
pub mod factorization;
pub mod g;
pub mod lens;
pub mod local;
pub mod outer;
pub mod strong;

use std::sync::Arc;

pub use airy_model::{airy_model, airy_ray_jump, airy_sector, airy_stripped_residual, AirySector};
pub use conformal::{local_phase, AiryAssembly, Endpoint};
pub use factorization::{wn_factorization_check, wn_factorization_point, FactorizationPoint, FactorizationSweep};
pub use g::GPhaseEvaluator;
pub use lens::{lens_jump_norms, lip_decay_fit, phase_sign_scan, LensLips, LipNorms, SignScan};
pub use local::{e_analyticity_mismatch, local_parametrix, matching_error, prefactor_e};
pub use outer::OuterParametrix;
pub use strong::{strong_asymptotics, StrongSweep};

use crate::equilibrium::{disk_radius, EquilibriumSolution};
use crate::error::{Error, Result};
use crate::nodes::ExternalField;
use crate::numerics::PrecisionContext;

/// Samples per lip.
pub const LIP_POINTS: usize = 256;

/// All evaluators built from one regular equilibrium.
#[derive(Clone, Debug)]
pub struct ParametrixBundle {
    pub ev: GPhaseEvaluator,
    pub op: OuterParametrix,
    pub left: AiryAssembly,
    pub right: AiryAssembly,
    pub delta: f64,
    pub lips: LensLips,
}

impl ParametrixBundle {
    pub fn build(eq: &EquilibriumSolution, field: Arc<dyn ExternalField>, prec: &PrecisionContext) -> Result<Self> {
        let ev = GPhaseEvaluator::new(eq, field)?;
        let (c, d) = ev.band;
        let delta = disk_radius(c, d, ev.interval.0, ev.interval.1);
        if !(delta > 0.0) {
            return Err(Error::DomainError(format!("band [{c}, {d}] leaves no room for endpoint disks")));
        }
        let left = AiryAssembly::build(&ev, Endpoint::Left, delta)?;
        let right = AiryAssembly::build(&ev, Endpoint::Right, delta)?;
        let op = OuterParametrix::new(left.e, right.e, prec);
        let lips = LensLips::new(left.e, right.e, delta, 0.5 * delta, LIP_POINTS);
        Ok(Self { ev, op, left, right, delta, lips })
    }

    pub fn assembly(&self, e: Endpoint) -> &AiryAssembly {
        match e {
            Endpoint::Left => &self.left,
            Endpoint::Right => &self.right,
        }
    }
}
