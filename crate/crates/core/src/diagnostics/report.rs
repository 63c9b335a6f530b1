//! CSV emitters. Column sets are fixed; floats use Rust's shortest
//! round-trip exponent form, so equal values give equal bytes.

use std::io::Write;

use super::{CampanatoReport, ConvergenceReport, DecayReport};

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub const DECAY_COLUMNS: &str =
    "radius,renormalized_energy,renormalized_dirichlet,below_delta,boundary_data_norm";

pub fn write_decay_csv(report: &DecayReport, mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "{DECAY_COLUMNS}")?;
    for (i, r) in report.rows.iter().enumerate() {
        let norm = report.data_norms.as_ref().map(|n| n[i].value);
        writeln!(
            w,
            "{:e},{:e},{:e},{},{}",
            r.radius,
            r.energy,
            r.dirichlet,
            r.below_delta,
            opt(norm)
        )?;
    }
    Ok(())
}

pub const CONVERGENCE_COLUMNS: &str = "stage,epsilon,h1_increment,linf_increment,linf_to_final,\
sup_norm,max_dist_to_n,energy_total,energy_potential,defect_components";

pub fn write_convergence_csv(report: &ConvergenceReport, mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "{CONVERGENCE_COLUMNS}")?;
    for r in &report.rows {
        writeln!(
            w,
            "{},{:e},{},{},{:e},{:e},{:e},{:e},{:e},{}",
            r.stage,
            r.epsilon,
            opt(r.h1_increment),
            opt(r.linf_increment),
            r.linf_to_final,
            r.sup_norm,
            r.max_dist_to_n,
            r.energy_total,
            r.energy_potential,
            r.defect_components
        )?;
    }
    Ok(())
}

pub const CAMPANATO_COLUMNS: &str = "radius,sup_quotient,argmax_x,argmax_y,argmax_z,centers";

pub fn write_campanato_csv(report: &CampanatoReport, mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "{CAMPANATO_COLUMNS}")?;
    for r in &report.rows {
        writeln!(
            w,
            "{:e},{:e},{:e},{:e},{:e},{}",
            r.radius, r.sup, r.argmax[0], r.argmax[1], r.argmax[2], r.centers
        )?;
    }
    Ok(())
}
