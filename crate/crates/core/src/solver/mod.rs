//! Monotone descent for the discrete energy, boundary conditions and
//! ε-continuation.

mod anchoring;
mod minimize;
mod problem;
mod sweep;

pub use anchoring::{Anchoring, DIRICHLET_TOL};
pub use minimize::{minimize, write_log_csv, IterRecord, Method, MinimizeConfig, MinimizeOutput};
pub use problem::{discrete_energy, el_residual, DiscreteEnergy};
pub use sweep::{epsilon_sweep, StageRecord, SweepConfig};
