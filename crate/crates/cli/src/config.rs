//! Experiment configuration: a TOML document with fixed sections. Unknown
//! keys are rejected everywhere.

use std::path::{Path, PathBuf};

use anisoflow::luckhaus::ScalingConfig;
use anisoflow::solver::{Method, MinimizeConfig, SweepConfig};
use anisoflow::{check_positivity, ElasticModel, Potential};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSection,
    pub domain: DomainSection,
    #[serde(default)]
    pub anchoring: AnchoringSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub diagnostics: DiagnosticsSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub extend: ScalingConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub potential: PotentialSection,
    #[serde(default)]
    pub elastic: ElasticSection,
    /// Growth exponents checked by `validate`.
    pub growth: Option<GrowthSection>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialSection {
    GinzburgLandau,
    LandauDeGennes { a2: f64, b2: f64, c2: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ElasticSection {
    Isotropic {
        #[serde(default = "one")]
        scale: f64,
    },
    LandauDeGennes {
        l1: f64,
        l2: f64,
        l3: f64,
    },
    /// Row-major symmetric `3k × 3k` table in the `α * 3 + i` ordering.
    General { coefficients: Vec<f64> },
}

impl Default for ElasticSection {
    fn default() -> Self {
        ElasticSection::Isotropic { scale: 1.0 }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthSection {
    pub p: f64,
    pub a: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    Box,
    Ball,
    HalfBall,
}

/// A cube `[-half_width, half_width]^3` of `nodes^3` nodes carrying the
/// physical domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub kind: DomainKind,
    pub nodes: usize,
    #[serde(default = "one")]
    pub half_width: f64,
    /// Ball and half-ball radius.
    pub radius: Option<f64>,
    #[serde(default)]
    pub center: [f64; 3],
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnchoringKind {
    #[default]
    Dirichlet,
    Weak,
    Free,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialGuess {
    /// The boundary data everywhere.
    #[default]
    Data,
    /// The data scaled by `min(|x - c| / R, 1)`.
    Ramp,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchoringSection {
    #[serde(default)]
    pub kind: AnchoringKind,
    /// Weak anchoring strength `W0`.
    pub strength: Option<f64>,
    #[serde(default)]
    pub data: DataSection,
    #[serde(default)]
    pub initial: InitialGuess,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataKind {
    /// Radial director `(x - c) / |x - c|`.
    Hedgehog,
    #[default]
    Constant,
    /// Director `normalize(d + amplitude (x_1, x_2, 0))`: smooth, nearly
    /// constant.
    Tilted,
}

/// `N`-valued boundary (and preferred) data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    #[serde(default)]
    pub kind: DataKind,
    #[serde(default = "e3")]
    pub director: [f64; 3],
    #[serde(default)]
    pub amplitude: f64,
    /// Defaults to the domain centre.
    pub center: Option<[f64; 3]>,
}

impl Default for DataSection {
    fn default() -> Self {
        DataSection {
            kind: DataKind::Constant,
            director: e3(),
            amplitude: 0.0,
            center: None,
        }
    }
}

fn e3() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    Lbfgs,
    SteepestDescent,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    /// Used by `minimize` and the diagnostics subcommands.
    pub epsilon: Option<f64>,
    pub max_iters: Option<usize>,
    pub grad_tol: Option<f64>,
    pub grad_tol_factor: Option<f64>,
    pub method: Option<MethodName>,
    pub memory: Option<usize>,
    pub sweep: Option<SweepConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsSection {
    /// Centres of decay profiles and large-scale ratios.
    #[serde(default)]
    pub centers: Vec<[f64; 3]>,
    /// Absolute radii; alternatively `radii_h` in units of the grid spacing.
    pub radii: Option<Vec<f64>>,
    pub radii_h: Option<Vec<f64>>,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_theta")]
    pub theta: f64,
    /// Outer radius `r0` of the large-scale ratio.
    pub ratio_radius: Option<f64>,
    /// Hölder exponents for Campanato quotients over `campanato_region`.
    #[serde(default)]
    pub alphas: Vec<f64>,
    pub campanato_region: Option<f64>,
    /// Defect threshold; defaults to `s*/4`.
    pub tau: Option<f64>,
    /// Defaults to a quarter of the domain size.
    pub exclusion_radius: Option<f64>,
    /// Bound `M` on the sup-norm column of sweeps.
    pub sup_bound: Option<f64>,
    pub boundary_center: Option<[f64; 3]>,
    pub boundary_radii: Option<Vec<f64>>,
}

impl Default for DiagnosticsSection {
    fn default() -> Self {
        DiagnosticsSection {
            centers: Vec::new(),
            radii: None,
            radii_h: None,
            delta: default_delta(),
            theta: default_theta(),
            ratio_radius: None,
            alphas: Vec::new(),
            campanato_region: None,
            tau: None,
            exclusion_radius: None,
            sup_bound: None,
            boundary_center: None,
            boundary_radii: None,
        }
    }
}

fn default_delta() -> f64 {
    0.1
}

fn default_theta() -> f64 {
    0.25
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
    Snapshot,
    Vtk,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
    /// Recorded in the manifest; reductions are fixed-order regardless.
    #[serde(default = "yes")]
    pub deterministic: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: default_dir(),
            formats: default_formats(),
            deterministic: true,
        }
    }
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv, OutputFormat::Json, OutputFormat::Snapshot]
}

fn yes() -> bool {
    true
}

/// Parsed configuration together with the bytes it came from.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub text: String,
    pub path: PathBuf,
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    toml::from_str(text).map_err(|e| CliError::Config(format!("parse error: {e}")))
}

pub fn load_config(path: &Path) -> Result<LoadedConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let config = parse_config(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(LoadedConfig {
        config,
        text,
        path: path.to_path_buf(),
    })
}

impl ExperimentConfig {
    pub fn potential(&self) -> Result<Potential, CliError> {
        match self.model.potential {
            PotentialSection::GinzburgLandau => Ok(Potential::ginzburg_landau()),
            PotentialSection::LandauDeGennes { a2, b2, c2 } => Potential::landau_de_gennes(a2, b2, c2)
                .map_err(|e| CliError::Config(format!("model.potential: {e}"))),
        }
    }

    pub fn elastic(&self, k: usize) -> Result<ElasticModel, CliError> {
        let res = match &self.model.elastic {
            ElasticSection::Isotropic { scale } => ElasticModel::isotropic(k, *scale),
            ElasticSection::LandauDeGennes { l1, l2, l3 } => {
                if k != 5 {
                    return Err(CliError::Config(
                        "model.elastic: the Landau-de Gennes density needs the Q-tensor potential".into(),
                    ));
                }
                let report = check_positivity(*l1, *l2, *l3);
                if !report.holds {
                    return Err(CliError::Config(format!(
                        "model.elastic: {}",
                        report.violations.join(", ")
                    )));
                }
                ElasticModel::landau_de_gennes(*l1, *l2, *l3)
            }
            ElasticSection::General { coefficients } => ElasticModel::general(k, coefficients.clone()),
        };
        res.map_err(|e| CliError::Config(format!("model.elastic: {e}")))
    }

    /// Grid spacing implied by the domain section.
    pub fn spacing(&self) -> f64 {
        2.0 * self.domain.half_width / (self.domain.nodes.max(2) - 1) as f64
    }

    /// Characteristic size: the ball radius, or the half width of a box.
    pub fn size(&self) -> f64 {
        match self.domain.kind {
            DomainKind::Box => self.domain.half_width,
            _ => self.domain.radius.unwrap_or(self.domain.half_width),
        }
    }

    pub fn minimize_config(&self, epsilon: f64) -> MinimizeConfig {
        let mut c = MinimizeConfig::new(epsilon);
        let s = &self.solver;
        if let Some(v) = s.max_iters {
            c.max_iters = v;
        }
        c.grad_tol = s.grad_tol;
        if let Some(v) = s.grad_tol_factor {
            c.grad_tol_factor = v;
        }
        c.method = match s.method {
            Some(MethodName::SteepestDescent) => Method::SteepestDescent,
            _ => Method::Lbfgs {
                memory: s.memory.unwrap_or(8),
            },
        };
        c
    }

    /// Every ε the configuration may run with.
    pub fn epsilons(&self) -> Result<Vec<f64>, CliError> {
        let mut out = Vec::new();
        if let Some(e) = self.solver.epsilon {
            out.push(e);
        }
        if let Some(sw) = &self.solver.sweep {
            out.extend(sw.schedule().map_err(|e| CliError::Config(format!("solver.sweep: {e}")))?);
        }
        Ok(out)
    }

    /// Radii of decay profiles.
    pub fn radii(&self) -> Option<Vec<f64>> {
        let h = self.spacing();
        self.diagnostics
            .radii
            .clone()
            .or_else(|| self.diagnostics.radii_h.as_ref().map(|r| r.iter().map(|m| m * h).collect()))
    }

    /// Checks that do not need any numerics beyond the positivity test.
    pub fn cross_validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        let d = &self.domain;
        if d.nodes < 3 {
            return bad(format!("domain.nodes = {} must be at least 3", d.nodes));
        }
        if !(d.half_width > 0.0 && d.half_width.is_finite()) {
            return bad(format!("domain.half_width = {} must be positive", d.half_width));
        }
        match (d.kind, d.radius) {
            (DomainKind::Box, Some(_)) => return bad("domain.radius is only used by ball domains".into()),
            (DomainKind::Ball | DomainKind::HalfBall, None) => return bad("missing key domain.radius".into()),
            (_, Some(r)) if !(r > 0.0) => return bad(format!("domain.radius = {r} must be positive")),
            _ => {}
        }
        let pot = self.potential()?;
        self.elastic(pot.k())?;
        let h = self.spacing();
        for eps in self.epsilons()? {
            if !(eps > 0.0) {
                return bad(format!("epsilon = {eps} must be positive"));
            }
            if eps < 2.0 * h * (1.0 - 1e-12) {
                return bad(format!(
                    "epsilon = {eps} is not resolved by the grid: need eps >= 2h = {}",
                    2.0 * h
                ));
            }
        }
        let a = &self.anchoring;
        match a.kind {
            AnchoringKind::Weak => {
                if d.kind != DomainKind::Box {
                    return bad("weak anchoring needs a box domain".into());
                }
                match a.strength {
                    Some(w) if w >= 0.0 => {}
                    Some(w) => return bad(format!("anchoring.strength = {w} must be >= 0")),
                    None => return bad("missing key anchoring.strength".into()),
                }
            }
            _ if a.strength.is_some() => return bad("anchoring.strength is only used by weak anchoring".into()),
            _ => {}
        }
        let n = a.data.director;
        if !(n.iter().map(|x| x * x).sum::<f64>() > 0.0) {
            return bad("anchoring.data.director must be nonzero".into());
        }
        let g = &self.diagnostics;
        if let Some(r) = self.radii() {
            if r.is_empty() || r.iter().any(|x| !(*x > 0.0)) || r.windows(2).any(|w| w[0] >= w[1]) {
                return bad("diagnostics radii must be positive and strictly increasing".into());
            }
        }
        if !(g.delta > 0.0) {
            return bad(format!("diagnostics.delta = {} must be positive", g.delta));
        }
        if !(g.theta > 0.0 && g.theta <= 0.5) {
            return bad(format!("diagnostics.theta = {} outside (0, 1/2]", g.theta));
        }
        if let Some(a) = g.alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return bad(format!("diagnostics.alphas entry {a} outside (0, 1)"));
        }
        if !g.alphas.is_empty() && g.centers.is_empty() {
            return bad("diagnostics.alphas needs diagnostics.centers".into());
        }
        Ok(())
    }
}
