//! Open dynamics of two collective spin domains coupled to a common bosonic
//! reservoir.
//!
//! The anti-parallel initial configuration (domain A fully excited, domain B
//! fully relaxed) evolves inside a reduced space of dimension
//! `(n_a + 1)(n_b + 1)` that splits into total-spin blocks. [`angular`]
//! supplies the Clebsch-Gordan machinery behind that splitting, [`state`]
//! the basis bookkeeping and conversions, [`dynamics`] the block equations
//! of motion and their integration, [`steady`] the closed-form stationary
//! states and observables, [`entanglement`] the negativity and entropy
//! measures, and [`oracle`] an independent brute-force Lindblad propagator
//! used to validate all of the above.

pub mod angular;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod half;
mod linalg;
pub mod oracle;
pub mod state;
pub mod steady;

pub use error::{Error, Result};
pub use half::Half;
