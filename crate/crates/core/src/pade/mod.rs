//! Multipoint Padé system, barycentric weights, Hermite–Walsh evaluation and the explicit `Y` matrix.

pub mod hermite_walsh;
pub mod system;
pub mod weights;
pub mod y;

use rayon::prelude::*;
use rug::Complex;

use crate::error::{Error, Result};
use crate::nodes::{quantile_nodes, DensitySpec, NodeSet};
use crate::numerics::PrecisionContext;
use crate::specialfn::{hurwitz_zeta, HurwitzParams};

pub use hermite_walsh::{default_contour, hermite_walsh_eval};
pub use system::{assemble_system, check_nd, recover_p_interpolant, solve_pade, NdCheck, PadePair, PadeSystem, Recovery};
pub use weights::{discrete_orthogonality_check, eval_wn_ln, OrthogonalityReport, WeightSet, WnLn};
pub use y::{build_y, YEvaluator};

/// `f(a_j) = ζ(s, n α_j)` at every node.
pub fn hurwitz_values(p: &HurwitzParams, ns: &NodeSet, prec: &PrecisionContext) -> Result<Vec<Complex>> {
    (0..ns.len()).into_par_iter().map(|j| hurwitz_zeta(p, &ns.a_c(j), prec)).collect()
}

/// Everything built for one `n` at the precision where the system first became nondegenerate.
#[derive(Clone, Debug)]
pub struct PadeRun {
    pub prec: PrecisionContext,
    pub ns: NodeSet,
    pub f: Vec<Complex>,
    pub sys: PadeSystem,
    pub nd: NdCheck,
    pub pp: PadePair,
    pub ws: WeightSet,
    /// Number of precision doublings beyond the starting precision.
    pub escalations: u32,
}

/// Highest precision used when escalating.
pub const MAX_BITS: u32 = 2000;

/// Build nodes, data and the Padé pair, doubling the working precision (capped at
/// [`MAX_BITS`]) until the condition estimate is below `2^{bits/2}`.
pub fn run_pade<F>(d: &DensitySpec, n: usize, values: F, prec: &PrecisionContext) -> Result<PadeRun>
where
    F: Fn(&NodeSet, &PrecisionContext) -> Result<Vec<Complex>>,
{
    let mut p = prec.clone();
    let mut escalations = 0;
    loop {
        let ns = quantile_nodes(d, n, &p)?;
        let f = values(&ns, &p)?;
        let sys = assemble_system(&ns, &f);
        let nd = check_nd(&sys, &p);
        if nd.nd_holds {
            let pp = solve_pade(&sys, &p)?;
            let ws = WeightSet::new(&ns, &f);
            return Ok(PadeRun { prec: p, ns, f, sys, nd, pp, ws, escalations });
        }
        if p.bits >= MAX_BITS {
            return Err(Error::Degenerate);
        }
        p = PrecisionContext::new((2 * p.bits).min(MAX_BITS))?;
        escalations += 1;
    }
}

/// Value provider `ζ(s, nα_j)` that rescales the Hurwitz parameters to each working precision.
pub fn hurwitz_provider(hp: &HurwitzParams) -> impl Fn(&NodeSet, &PrecisionContext) -> Result<Vec<Complex>> + '_ {
    move |ns, p| hurwitz_values(&hp.at_precision(p)?, ns, p)
}
