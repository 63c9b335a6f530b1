//! Annulus constructions on `B_1 \ B_{1-λ}` in three dimensions.
//!
//! The unit sphere is split into an equiangular cube-sphere complex at scale
//! `λ = 2^-ν` ([`SphereMesh`]) and sampled on a finer lattice
//! ([`MeshSampling`]). Two constructions fill the annulus over that
//! complex:
//!
//! * [`modify_boundary`] replaces a trace by an `N`-valued one at a cost
//!   linear in `λ`;
//! * [`luckhaus_interpolant`] joins a trace to a nearby `N`-valued map.
//!
//! [`scaling_study`] runs both at several levels and reports the measured
//! constants, which should not depend on `λ`.

mod extension;
mod mesh;
mod modify;
mod prism;
mod quadrature;
mod sampling;
mod snapshot;
mod study;

pub use extension::{
    luckhaus_interpolant, project_mesh_field, InterpolantOptions, InterpolantReport,
    LuckhausInterpolant,
};
pub use mesh::{build_sphere_mesh, FaceChart, MeshQuality, SphereMesh, MAX_NU};
pub use modify::{modify_boundary, BoundaryModification, ModifyOptions, ModifyReport};
pub use quadrature::LayerEnergy;
pub use sampling::{AnnulusField, MeshField, MeshSampling};
pub use snapshot::{read_annulus, read_mesh_field, sample_count, write_annulus, write_mesh_field};
pub use study::{
    perturbed_pair, perturbed_trace, scaling_study, write_scaling_csv, ScalingConfig, ScalingRow,
    ScalingStudy, SCALING_COLUMNS,
};
