pub mod equilibrium;
pub mod error;
pub mod harness;
pub mod numerics;
pub mod specialfn;
pub mod nodes;
pub mod pade;
pub mod phase;

pub use error::{Error, Result};
pub use numerics::PrecisionContext;
