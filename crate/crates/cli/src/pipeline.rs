//! Subcommand pipelines. Each run writes its artifacts into the output
//! directory and finishes with a manifest hashing every file it wrote.

use std::fmt::Write as _;
use std::path::PathBuf;

use anisoflow::diagnostics::{
    boundary_decay_profile, campanato_holder, convergence_report, decay_profile, detect_defects,
    dyadic_radii, large_scale_ratio, write_campanato_csv, write_convergence_csv, write_decay_csv,
    DecayReport, Region,
};
use anisoflow::field::{read_snapshot, write_snapshot, write_vtk, Domain};
use anisoflow::luckhaus::{scaling_study, write_scaling_csv, ScalingConfig};
use anisoflow::manifold::{check_growth, q_from_director, tube_constants, GrowthParams};
use anisoflow::solver::{epsilon_sweep, minimize, write_log_csv, Anchoring, MinimizeOutput};
use anisoflow::{check_positivity, energy, ElasticModel, Field, Grid, Mask, Potential, TargetPoint};
use serde::Serialize;

use crate::args::{Cli, Command, DecayArgs};
use crate::config::{
    load_config, AnchoringKind, DataKind, DomainKind, ElasticSection, ExperimentConfig, InitialGuess,
    LoadedConfig, OutputFormat,
};
use crate::error::CliError;
use crate::manifest::Manifest;

/// Everything the solver needs, built from a configuration.
pub struct Setup {
    pub potential: Potential,
    pub elastic: ElasticModel,
    pub grid: Grid,
    /// Boundary (or preferred) data on every node.
    pub data: Field,
    /// Initial guess with the anchoring imposed.
    pub init: Field,
    pub anchoring: Anchoring,
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n > 0.0 {
        [v[0] / n, v[1] / n, v[2] / n]
    } else {
        [0.0, 0.0, 1.0]
    }
}

impl Setup {
    pub fn new(config: &ExperimentConfig) -> Result<Self, CliError> {
        let cfg = |e: anisoflow::Error| CliError::Config(e.to_string());
        let potential = config.potential()?;
        let k = potential.k();
        let elastic = config.elastic(k)?;
        let d = &config.domain;
        let domain = match d.kind {
            DomainKind::Box => Domain::Box,
            DomainKind::Ball => Domain::Ball {
                center: d.center,
                radius: config.size(),
            },
            DomainKind::HalfBall => Domain::HalfBall {
                center: d.center,
                radius: config.size(),
            },
        };
        let grid = Grid::centered_cube(d.nodes, d.half_width, domain).map_err(cfg)?;
        let spec = &config.anchoring.data;
        let c = spec.center.unwrap_or(d.center);
        let n0 = unit(spec.director);
        let director = |x: [f64; 3]| -> [f64; 3] {
            let r = [x[0] - c[0], x[1] - c[1], x[2] - c[2]];
            match spec.kind {
                DataKind::Hedgehog => unit(r),
                DataKind::Constant => n0,
                DataKind::Tilted => unit([
                    n0[0] + spec.amplitude * r[0],
                    n0[1] + spec.amplitude * r[1],
                    n0[2],
                ]),
            }
        };
        let s = potential.s_star();
        let is_q = k == 5;
        let to_n = |n: [f64; 3]| -> TargetPoint {
            if is_q {
                q_from_director(n, s).expect("unit director")
            } else {
                TargetPoint::new(&n)
            }
        };
        let data = Field::from_fn(grid.clone(), k, |x| to_n(director(x))).map_err(cfg)?;
        let mut init = match config.anchoring.initial {
            InitialGuess::Data => data.clone(),
            InitialGuess::Ramp => {
                let size = config.size();
                Field::from_fn(grid.clone(), k, |x| {
                    let r = ((x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2) + (x[2] - c[2]).powi(2)).sqrt();
                    (r / size).min(1.0) * to_n(director(x))
                })
                .map_err(cfg)?
            }
        };
        let anchoring = match config.anchoring.kind {
            AnchoringKind::Dirichlet => Anchoring::dirichlet(data.clone(), &potential).map_err(cfg)?,
            AnchoringKind::Weak => {
                let w = config.anchoring.strength.unwrap_or(0.0);
                Anchoring::weak(w, data.clone(), &potential).map_err(cfg)?
            }
            AnchoringKind::Free => Anchoring::Free,
        };
        anchoring.impose(&mut init).map_err(cfg)?;
        Ok(Setup {
            potential,
            elastic,
            grid,
            data,
            init,
            anchoring,
        })
    }

    pub fn minimize(&self, config: &ExperimentConfig, epsilon: f64) -> Result<MinimizeOutput, CliError> {
        let mc = config.minimize_config(epsilon);
        mc.validate(self.grid.diameter())
            .map_err(|e| CliError::Config(format!("solver: {e}")))?;
        minimize(&self.init, &mc, &self.elastic, &self.potential, &self.anchoring).map_err(CliError::Solver)
    }
}

/// Output directory, the files written so far and the manifest under
/// construction.
struct Run {
    dir: PathBuf,
    formats: Vec<OutputFormat>,
    files: Vec<String>,
    manifest: Manifest,
}

impl Run {
    fn wants(&self, f: OutputFormat) -> bool {
        self.formats.contains(&f)
    }

    fn bytes(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        std::fs::write(self.dir.join(name), bytes).map_err(|e| CliError::io(name, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn csv(
        &mut self,
        name: &str,
        write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
    ) -> Result<(), CliError> {
        if !self.wants(OutputFormat::Csv) {
            return Ok(());
        }
        let mut buf = Vec::new();
        write(&mut buf).map_err(|e| CliError::io(name, e))?;
        self.bytes(name, &buf)
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<(), CliError> {
        if !self.wants(OutputFormat::Json) {
            return Ok(());
        }
        let text = serde_json::to_string_pretty(value).expect("reports serialize") + "\n";
        self.bytes(name, text.as_bytes())
    }

    fn snapshot(&mut self, name: &str, field: &Field) -> Result<(), CliError> {
        if self.wants(OutputFormat::Snapshot) {
            write_snapshot(field, &self.dir.join(name))
                .map_err(|e| CliError::io(name, std::io::Error::other(e.to_string())))?;
            self.files.push(name.to_string());
        }
        if self.wants(OutputFormat::Vtk) {
            let vtk = format!("{}.vtk", name.trim_end_matches(".snap"));
            write_vtk(field, &self.dir.join(&vtk), "u")
                .map_err(|e| CliError::io(&vtk, std::io::Error::other(e.to_string())))?;
            self.files.push(vtk);
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<Manifest, CliError> {
        let files = std::mem::take(&mut self.files);
        self.manifest.record_files(&self.dir, &files)?;
        self.manifest.write(&self.dir)?;
        println!("wrote {} files to {}", files.len(), self.dir.display());
        Ok(self.manifest.clone())
    }
}

/// Runs the parsed command line. The global rayon pool must already be
/// configured.
pub fn execute(cli: &Cli) -> Result<Manifest, CliError> {
    if let Command::Report = cli.command {
        return report(cli);
    }
    let loaded = cli.config.as_deref().map(load_config).transpose()?;
    if let Some(l) = &loaded {
        l.config.cross_validate()?;
    }
    let mut run = open_run(cli, loaded.as_ref())?;
    let config = loaded.as_ref().map(|l| &l.config);
    match dispatch(cli, &mut run, config) {
        Ok(()) => run.finish(),
        Err(e) => {
            // keep whatever was produced, with the failure on record
            run.manifest.error = Some(e.to_string());
            let _ = run.finish();
            Err(e)
        }
    }
}

fn dispatch(cli: &Cli, run: &mut Run, config: Option<&ExperimentConfig>) -> Result<(), CliError> {
    let need = || config.ok_or_else(|| CliError::Config("this subcommand needs --config".into()));
    match &cli.command {
        Command::Validate => validate(run, need()?)?,
        Command::Minimize(a) => {
            let c = need()?;
            let eps = epsilon(c, a.epsilon)?;
            let setup = Setup::new(c)?;
            let out = setup.minimize(c, eps)?;
            record_solve(run, &out)?;
            run.snapshot("minimizer.snap", &out.field)?;
            diagnose(run, c, &setup, &out.field, eps, None)?;
        }
        Command::Sweep => sweep(run, need()?)?,
        Command::Decay(a) => decay(run, need()?, a, false)?,
        Command::BoundaryDecay(a) => decay(run, need()?, a, true)?,
        Command::Extend(a) => extend(run, config, a.levels)?,
        Command::Report => unreachable!("handled before the run is opened"),
    }
    Ok(())
}

fn open_run(cli: &Cli, loaded: Option<&LoadedConfig>) -> Result<Run, CliError> {
    let config = loaded.map(|l| &l.config);
    let dir = cli
        .out
        .clone()
        .or_else(|| config.map(|c| c.output.dir.clone()))
        .unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir.display().to_string(), e))?;
    let formats = config.map_or_else(|| crate::config::OutputSection::default().formats, |c| c.output.formats.clone());
    let deterministic = cli.deterministic || config.is_none_or(|c| c.output.deterministic);
    let name = match cli.command {
        Command::Validate => "validate",
        Command::Minimize(_) => "minimize",
        Command::Sweep => "sweep",
        Command::Decay(_) => "decay",
        Command::BoundaryDecay(_) => "boundary-decay",
        Command::Extend(_) => "extend",
        Command::Report => "report",
    };
    let manifest = Manifest::new(
        name,
        loaded.map(|l| l.text.as_str()),
        deterministic,
        rayon::current_num_threads(),
    );
    Ok(Run {
        dir,
        formats,
        files: Vec::new(),
        manifest,
    })
}

fn epsilon(config: &ExperimentConfig, flag: Option<f64>) -> Result<f64, CliError> {
    let eps = flag
        .or(config.solver.epsilon)
        .ok_or_else(|| CliError::Config("missing key solver.epsilon (or --epsilon)".into()))?;
    let h = config.spacing();
    if !(eps >= 2.0 * h * (1.0 - 1e-12)) {
        return Err(CliError::Config(format!(
            "epsilon = {eps} is not resolved by the grid: need eps >= 2h = {}",
            2.0 * h
        )));
    }
    Ok(eps)
}

fn record_solve(run: &mut Run, out: &MinimizeOutput) -> Result<(), CliError> {
    run.csv("minimize_log.csv", |w| write_log_csv(&out.log, w))?;
    let m = &mut run.manifest;
    m.constant("solver.iterations", out.log.len().saturating_sub(1) as f64);
    m.constant("solver.converged", if out.converged { 1.0 } else { 0.0 });
    m.constant("solver.grad_tol", out.grad_tol);
    if let Some(last) = out.log.last() {
        m.constant("solver.energy", last.energy_total);
        m.constant("solver.max_residual", last.max_residual);
    }
    Ok(())
}

/// Energy, defects, decay profiles, large-scale ratios and Campanato
/// quotients of one field, as configured.
fn diagnose(
    run: &mut Run,
    config: &ExperimentConfig,
    setup: &Setup,
    field: &Field,
    eps: f64,
    centers: Option<Vec<[f64; 3]>>,
) -> Result<(), CliError> {
    let (el, pot) = (&setup.elastic, &setup.potential);
    let g = &config.diagnostics;
    let mask = Mask::domain(field.grid()).map_err(|e| CliError::diag("domain mask", e))?;
    let e = energy(field, eps, el, pot, &mask).map_err(|e| CliError::diag("energy", e))?;
    let m = &mut run.manifest;
    m.constant("energy.total", e.total);
    m.constant("energy.elastic", e.elastic);
    m.constant("energy.potential", e.potential);
    m.constant("energy.dirichlet", e.dirichlet);
    m.constant("epsilon", eps);

    let defects = detect_defects(field, pot, g.tau).map_err(|e| CliError::diag("defects", e))?;
    run.manifest.constant("defects.components", defects.components.len() as f64);
    run.manifest.constant("defects.nodes", defects.nodes.len() as f64);
    run.json("defects.json", &defects)?;

    let centers = centers.unwrap_or_else(|| {
        if g.centers.is_empty() {
            vec![config.domain.center]
        } else {
            g.centers.clone()
        }
    });
    decay_and_ratios(run, config, setup, field, eps, &centers)?;

    if !g.alphas.is_empty() {
        let region = Region {
            center: centers[0],
            radius: g.campanato_region.unwrap_or(config.size() / 2.0),
        };
        let radii = dyadic_radii(field.grid().spacing(), region.radius / 2.0);
        for (j, &alpha) in g.alphas.iter().enumerate() {
            let rep = campanato_holder(field, &region, alpha, &radii).map_err(|e| CliError::diag("campanato", e))?;
            run.manifest.constant(format!("campanato.{j}.alpha"), alpha);
            run.manifest.constant(format!("campanato.{j}.value"), rep.value);
            run.manifest.constant(format!("campanato.{j}.holder_quotient"), rep.holder_quotient);
            run.csv(&format!("campanato_{j}.csv"), |w| write_campanato_csv(&rep, w))?;
        }
    }
    Ok(())
}

fn record_decay(run: &mut Run, prefix: &str, rep: &DecayReport) {
    let m = &mut run.manifest;
    m.optional(format!("{prefix}.alpha"), rep.alpha());
    m.constant(format!("{prefix}.rows"), rep.rows.len() as f64);
    m.constant(format!("{prefix}.skipped"), rep.skipped.len() as f64);
    if let Some(r) = rep.rows.last() {
        m.constant(format!("{prefix}.outer_energy"), r.energy);
    }
}

fn decay_and_ratios(
    run: &mut Run,
    config: &ExperimentConfig,
    setup: &Setup,
    field: &Field,
    eps: f64,
    centers: &[[f64; 3]],
) -> Result<(), CliError> {
    let (el, pot) = (&setup.elastic, &setup.potential);
    let g = &config.diagnostics;
    if let Some(radii) = config.radii() {
        for (i, &c) in centers.iter().enumerate() {
            let rep = decay_profile(field, eps, el, pot, c, &radii, g.delta).map_err(|e| CliError::diag("decay", e))?;
            record_decay(run, &format!("decay.{i}"), &rep);
            run.csv(&format!("decay_{i}.csv"), |w| write_decay_csv(&rep, w))?;
        }
    }
    if let Some(r0) = g.ratio_radius {
        let mut ratios = Vec::with_capacity(centers.len());
        for (i, &c) in centers.iter().enumerate() {
            let r = large_scale_ratio(field, eps, el, pot, c, r0, g.theta)
                .map_err(|e| CliError::diag("large-scale ratio", e))?;
            run.manifest.optional(format!("ratio.{i}"), r.ratio);
            ratios.push(r);
        }
        run.json("ratios.json", &ratios)?;
    }
    Ok(())
}

fn sweep(run: &mut Run, config: &ExperimentConfig) -> Result<(), CliError> {
    let sw = config
        .solver
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("missing key solver.sweep".into()))?;
    let setup = Setup::new(config)?;
    let schedule = sw.schedule().map_err(|e| CliError::Config(e.to_string()))?;
    let base = config.minimize_config(schedule[0]);
    base.validate(setup.grid.diameter())
        .map_err(|e| CliError::Config(format!("solver: {e}")))?;
    let stages = epsilon_sweep(&setup.init, sw, &base, &setup.elastic, &setup.potential, &setup.anchoring)
        .map_err(CliError::Solver)?;
    for s in &stages {
        run.csv(&format!("stage_{}_log.csv", s.stage), |w| write_log_csv(&s.log, w))?;
        run.snapshot(&format!("stage_{}.snap", s.stage), &s.field)?;
        let m = &mut run.manifest;
        m.constant(format!("stage.{}.epsilon", s.stage), s.epsilon);
        m.constant(format!("stage.{}.energy", s.stage), s.energy.total);
        m.constant(format!("stage.{}.converged", s.stage), if s.converged { 1.0 } else { 0.0 });
    }
    let g = &config.diagnostics;
    let exclusion = g.exclusion_radius.unwrap_or(config.size() / 4.0);
    if stages.len() >= 2 {
        let rep = convergence_report(&stages, &setup.potential, exclusion, g.tau, g.sup_bound)
            .map_err(|e| CliError::diag("convergence", e))?;
        run.csv("sweep.csv", |w| write_convergence_csv(&rep, w))?;
        run.json("sweep.json", &rep)?;
        if let Some(r) = rep.rows.last() {
            run.manifest.constant("sweep.final_sup_norm", r.sup_norm);
        }
        if let Some(r) = rep.rows.iter().rev().find_map(|r| r.linf_increment) {
            run.manifest.constant("sweep.final_linf_increment", r);
        }
        if let Some(b) = rep.sup_bound_holds {
            run.manifest.constant("sweep.sup_bound_holds", if b { 1.0 } else { 0.0 });
        }
    }
    let last = stages.last().expect("schedule is nonempty");
    diagnose(run, config, &setup, &last.field, last.epsilon, None)
}

fn decay(run: &mut Run, config: &ExperimentConfig, args: &DecayArgs, boundary: bool) -> Result<(), CliError> {
    let eps = epsilon(config, args.epsilon)?;
    let setup = Setup::new(config)?;
    let field = match &args.field {
        Some(p) => read_snapshot(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?,
        None => {
            let out = setup.minimize(config, eps)?;
            record_solve(run, &out)?;
            out.field
        }
    };
    if field.k() != setup.potential.k() {
        return Err(CliError::Config(format!(
            "snapshot has {} components, the model expects {}",
            field.k(),
            setup.potential.k()
        )));
    }
    let g = &config.diagnostics;
    if !boundary {
        let centers = match args.center {
            Some(c) => vec![c],
            None if g.centers.is_empty() => vec![config.domain.center],
            None => g.centers.clone(),
        };
        if config.radii().is_none() && g.ratio_radius.is_none() {
            return Err(CliError::Config("decay needs diagnostics.radii, radii_h or ratio_radius".into()));
        }
        return decay_and_ratios(run, config, &setup, &field, eps, &centers);
    }
    let x0 = args
        .center
        .or(g.boundary_center)
        .ok_or_else(|| CliError::Config("missing key diagnostics.boundary_center (or --center)".into()))?;
    let radii = g
        .boundary_radii
        .clone()
        .or_else(|| config.radii())
        .ok_or_else(|| CliError::Config("missing key diagnostics.boundary_radii".into()))?;
    let rep = boundary_decay_profile(&field, eps, &setup.elastic, &setup.potential, x0, &radii, g.delta)
        .map_err(|e| CliError::diag("boundary decay", e))?;
    record_decay(run, "boundary_decay", &rep);
    if let Some(n) = rep.data_norms.as_ref().and_then(|n| n.last()) {
        run.manifest.constant("boundary_decay.data_norm", n.value);
    }
    run.csv("boundary_decay.csv", |w| write_decay_csv(&rep, w))?;
    run.json("boundary_decay.json", &rep)
}

fn extend(run: &mut Run, config: Option<&ExperimentConfig>, levels: Option<u32>) -> Result<(), CliError> {
    let potential = match config {
        Some(c) => c.potential()?,
        None => Potential::ginzburg_landau(),
    };
    let mut study_config = config.map(|c| c.extend.clone()).unwrap_or_else(ScalingConfig::default);
    if let Some(n) = levels {
        if n == 0 || n > 5 {
            return Err(CliError::Config(format!("--levels {n} outside 1..=5")));
        }
        study_config.levels = (2..2 + n).collect();
    }
    let study = scaling_study(&potential, &study_config).map_err(|e| CliError::diag("scaling study", e))?;
    let m = &mut run.manifest;
    m.optional("extend.annulus_spread", study.annulus_spread);
    m.optional("extend.w_spread", study.w_spread);
    m.optional("extend.gradient_spread", study.gradient_spread);
    m.optional("extend.potential_spread", study.potential_spread);
    m.constant("extend.w_max_dist", study.w_max_dist);
    m.constant("extend.inner_half_max_f", study.inner_half_max_f);
    for r in &study.rows {
        let p = format!("extend.nu{}", r.nu);
        m.optional(format!("{p}.annulus_constant"), r.modify.annulus_constant);
        m.optional(format!("{p}.w_constant"), r.modify.w_constant);
        m.optional(format!("{p}.gradient_constant"), r.interpolant.gradient_constant);
        m.optional(format!("{p}.potential_constant"), r.interpolant.potential_constant);
    }
    // the study's only deliverables are the table and its JSON twin
    run.formats = vec![OutputFormat::Csv, OutputFormat::Json];
    run.csv("scaling.csv", |w| write_scaling_csv(&study, w))?;
    run.json("scaling.json", &study)
}

#[derive(Serialize)]
struct ValidationReport {
    positivity: Option<anisoflow::PositivityReport>,
    lambda_min: f64,
    lambda_max: f64,
    s_star: f64,
    tube_c1: f64,
    tube_c2: f64,
    growth: Option<anisoflow::manifold::GrowthReport>,
    violations: Vec<String>,
}

fn validate(run: &mut Run, config: &ExperimentConfig) -> Result<(), CliError> {
    let potential = config.potential()?;
    let elastic = config.elastic(potential.k())?;
    let mut violations = Vec::new();
    let positivity = match &config.model.elastic {
        ElasticSection::LandauDeGennes { l1, l2, l3 } => Some(check_positivity(*l1, *l2, *l3)),
        _ => None,
    };
    if let Some(p) = &positivity {
        violations.extend(p.violations.iter().cloned());
    }
    let (lo, hi) = (elastic.lambda_min(), elastic.lambda_max());
    if !(lo > 0.0) {
        violations.push(format!("ellipticity lambda = {lo:e} > 0 violated"));
    }
    let tube = tube_constants(&potential, 4000, 7);
    if !(tube.c1 > 0.0) {
        violations.push(format!("tube comparability c1 = {:e} > 0 violated", tube.c1));
    }
    let growth = match config.model.growth {
        Some(gs) => {
            let params = GrowthParams::new(gs.p, gs.a).map_err(|e| CliError::Config(format!("model.growth: {e}")))?;
            let s = potential.s_star();
            let radii: Vec<f64> = (0..6).map(|j| 2.0 * s * 2f64.powi(j)).collect();
            let rep = check_growth(&potential, params, &radii, 2000).map_err(|e| CliError::diag("growth", e))?;
            if !rep.pass {
                violations.push(format!(
                    "growth bounds with p = {}, a = {} violated (slopes {:.3}, {:.3})",
                    gs.p, gs.a, rep.max_slope_power, rep.max_slope_f
                ));
            }
            Some(rep)
        }
        None => None,
    };
    let report = ValidationReport {
        positivity,
        lambda_min: lo,
        lambda_max: hi,
        s_star: potential.s_star(),
        tube_c1: tube.c1,
        tube_c2: tube.c2,
        growth,
        violations: violations.clone(),
    };
    println!("lambda = {lo:.6e}");
    println!("Lambda = {hi:.6e}");
    println!("s* = {:.6e}", report.s_star);
    println!("tube constants c1 = {:.6e}, c2 = {:.6e}", tube.c1, tube.c2);
    if let Some(p) = &report.positivity {
        println!("positivity margin = {:.6e}", p.margin);
    }
    if let Some(g) = &report.growth {
        println!("growth pass = {}", g.pass);
    }
    let m = &mut run.manifest;
    m.constant("lambda_min", lo);
    m.constant("lambda_max", hi);
    m.constant("s_star", report.s_star);
    m.constant("tube.c1", tube.c1);
    m.constant("tube.c2", tube.c2);
    if let Some(p) = &report.positivity {
        m.constant("positivity.margin", p.margin);
    }
    run.json("validate.json", &report)?;
    if violations.is_empty() {
        println!("all checks pass");
        Ok(())
    } else {
        Err(CliError::Config(format!("validation failed: {}", violations.join("; "))))
    }
}

fn report(cli: &Cli) -> Result<Manifest, CliError> {
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let manifest = Manifest::read(&dir)?;
    let text = summary(&manifest);
    print!("{text}");
    std::fs::write(dir.join("report.md"), &text).map_err(|e| CliError::io("report.md", e))?;
    Ok(manifest)
}

/// Markdown summary of a manifest.
pub fn summary(m: &Manifest) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# anisoflow {} run (version {})\n", m.subcommand, m.version);
    if let Some(h) = &m.config_hash {
        let _ = writeln!(s, "config sha256: `{h}`\n");
    }
    let _ = writeln!(s, "deterministic: {}, threads: {}\n", m.deterministic, m.threads);
    if let Some(e) = &m.error {
        let _ = writeln!(s, "**failed:** {e}\n");
    }
    let _ = writeln!(s, "## Files\n");
    for (name, hash) in &m.files {
        let _ = writeln!(s, "- `{name}` `{}`", &hash[..hash.len().min(16)]);
    }
    let _ = writeln!(s, "\n## Constants\n\n| name | value |\n|---|---|");
    for (k, v) in &m.constants {
        let v = v.map(|x| format!("{x:.6e}")).unwrap_or_else(|| "n/a".into());
        let _ = writeln!(s, "| {k} | {v} |");
    }
    s
}

