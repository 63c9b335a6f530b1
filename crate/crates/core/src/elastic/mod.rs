//! Quadratic elastic densities `W(x, ∇u) = a(x) ξ^T A ξ` and the discrete
//! divergence-form operator.

mod model;
mod stencil;

pub use model::{check_positivity, ldg_density, ElasticKind, ElasticModel, PositivityReport};
pub(crate) use stencil::{check_model, energy_gradient};
pub use stencil::{elastic_energy, elastic_operator_apply};
