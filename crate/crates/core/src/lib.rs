//! Numerical laboratory for singularly perturbed anisotropic energies
//!
//! `E_eps(u) = ∫ W(x, ∇u) + eps^-2 f(u)` for maps into `R^k`, with two built-in
//! targets: Landau-de Gennes Q-tensors (`k = 5`) and the sphere-valued
//! Ginzburg-Landau model (`k = 3`).
//!
//! The crate is organised by concern:
//!
//! * [`manifold`]: order-parameter coordinates, bulk potentials, the vacuum manifold.
//! * [`elastic`]: quadratic elastic densities and the discrete divergence-form operator.
//! * [`field`]: regular grids, sampled fields, ball masks, quadrature, snapshots.
//! * [`solver`]: monotone descent with Armijo backtracking and eps-continuation.
//! * [`diagnostics`]: renormalized-energy decay, Campanato quotients, defects, convergence.
//! * [`luckhaus`]: cube-sphere meshes and the annulus extension constructions.

pub mod diagnostics;
pub mod elastic;
mod error;
pub mod field;
pub mod luckhaus;
pub mod manifold;
pub(crate) mod reduce;
pub mod solver;

pub use error::{Error, Result};

pub use elastic::{check_positivity, ldg_density, ElasticModel, PositivityReport};
pub use field::{energy, renormalized_energy, EnergyBreakdown, Field, Grid, Mask};
pub use manifold::{GrowthParams, Potential, TargetPoint};
