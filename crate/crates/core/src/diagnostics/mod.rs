//! Read-only measurements on fields: renormalized-energy decay, the
//! large-scale ratio, Campanato and Hölder quotients, boundary data norms,
//! defect sets and sweep convergence tables.

mod boundary;
mod convergence;
mod decay;
mod defects;
mod holder;
mod report;

pub use boundary::{boundary_data_norm, BoundaryDataNorm};
pub use convergence::{convergence_report, ConvergenceReport, ConvergenceRow};
pub use decay::{
    boundary_decay_profile, decay_profile, fit_power_law, large_scale_ratio, DecayReport,
    DecayRow, LargeScaleRatio, PowerFit, VACUUM_ENERGY,
};
pub use defects::{detect_defects, DefectComponent, DefectSet, BIAXIALITY_THRESHOLD};
pub use holder::{campanato_holder, dyadic_radii, CampanatoReport, CampanatoRow, Region};
pub use report::{
    write_campanato_csv, write_convergence_csv, write_decay_csv, CAMPANATO_COLUMNS,
    CONVERGENCE_COLUMNS, DECAY_COLUMNS,
};
