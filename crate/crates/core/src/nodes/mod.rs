//! Node densities, quantile nodes, node polynomials and the external field.

pub mod checks;
pub mod density;
pub mod field;
pub mod quantiles;

pub use checks::{logpot_check, omega_log_eval, omega_prime, riemann_sum_check, spacing_check, SweepFit};
pub use density::{shipped_densities, build_density, DensityKind, DensitySpec};
pub use field::{log_cell_moments, ExternalField, FieldEvaluator};
pub use quantiles::{quantile_nodes, NodeSet};
