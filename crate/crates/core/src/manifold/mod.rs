//! Order-parameter spaces, bulk potentials and the vacuum manifold `N`.
//!
//! Q-tensors are stored in coordinates with respect to a fixed orthonormal
//! basis of the symmetric traceless matrices, so that every formula below is
//! plain Euclidean algebra on `R^5`.

mod growth;
mod point;
mod potential;

pub use growth::{
    check_growth, shell_directions, tube_constants, GrowthParams, GrowthReport, ShellRatios,
    TubeConstants, GROWTH_SLOPE_TOL,
};
pub use point::{
    biaxiality, coords_to_matrix, fibonacci_sphere, matrix_to_coords, q_from_director, s0_basis,
    TargetPoint, MAX_K,
};
pub use potential::{
    rotate_coords, s_star, uniaxial_profile, Potential, PotentialKind, EIGEN_GAP_TOL,
};
