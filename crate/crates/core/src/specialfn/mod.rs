//! Principal-branch elementary functions, Hurwitz zeta and the Airy function.

pub mod airy;
pub mod branch;
pub mod hurwitz;

pub use airy::{airy_ai, airy_switch_radius, omega};
pub use branch::{principal_log, principal_pow, principal_pow_ratio, Side};
pub use hurwitz::{hurwitz_bound_check, hurwitz_zeta, HurwitzParams};
