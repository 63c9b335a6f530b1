use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "anisoflow", version, about = "Experiments on anisotropic Landau-de Gennes and Ginzburg-Landau energies")]
pub struct Cli {
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory; overrides `output.dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Record the run as deterministic. Reductions are always performed in a
    /// fixed order, so outputs do not depend on the thread count.
    #[arg(long, global = true)]
    pub deterministic: bool,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the model assumptions and print the measured constants.
    Validate,
    /// Minimize at one ε, then run the configured diagnostics.
    Minimize(EpsilonArgs),
    /// Run the ε-sweep, then the configured diagnostics on the last stage.
    Sweep,
    /// Interior decay profiles and large-scale ratios.
    Decay(DecayArgs),
    /// Half-ball decay profile about a point of the flat face.
    BoundaryDecay(DecayArgs),
    /// Scaling study of the annulus constructions on cube-sphere meshes.
    Extend(ExtendArgs),
    /// Summarize the manifest in the output directory.
    Report,
}

#[derive(Debug, Args)]
pub struct EpsilonArgs {
    /// Overrides `solver.epsilon`.
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DecayArgs {
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Single centre `x,y,z`; overrides the configured centres.
    #[arg(long, value_parser = parse_point)]
    pub center: Option<[f64; 3]>,
    /// Analyse this snapshot instead of minimizing first.
    #[arg(long)]
    pub field: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtendArgs {
    /// Number of dyadic levels, starting at ν = 2.
    #[arg(long)]
    pub levels: Option<u32>,
}

pub fn parse_point(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, got {s:?}"));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|e| format!("bad coordinate {p:?}: {e}"))?;
    }
    Ok(out)
}
