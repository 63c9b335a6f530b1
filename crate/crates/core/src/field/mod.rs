//! Regular grids, sampled fields, ball masks, quadrature and snapshots.

mod grid;
mod mask;
mod quadrature;
mod sampled;
mod snapshot;

pub(crate) use grid::dist;
pub use grid::{Domain, Grid};
pub use mask::Mask;
pub use quadrature::{
    energy, h1_distance, linf_distance, renormalized_energy, EnergyBreakdown, H1Distance,
};
pub(crate) use sampled::{node_gradient, node_gradients};
pub use sampled::Field;
pub use snapshot::{read_snapshot, write_snapshot, write_vtk};
pub(crate) use snapshot::{read_f64, read_u32};
pub(crate) use quadrature::{check_inputs as check_energy_inputs, check_resolvable, Densities};
