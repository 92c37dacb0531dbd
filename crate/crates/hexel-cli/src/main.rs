//! Command-line front end for the brick element library.
//!
//! Exit codes: 0 on success, 1 when a computation or verification fails,
//! 2 when the inputs are invalid.

use clap::{Args, Parser, Subcommand};
use hexel::bending::{aspect_sweep, BendingCase, BendingPlane, StiffnessKind};
use hexel::decomposition::Decomposition;
use hexel::error::{BendingError, TemplateError};
use hexel::geometry::BrickGeometry;
use hexel::io::{self, FileFormat, MatrixKind, RunConfig};
use hexel::material::IsotropicMaterial;
use hexel::template::{optimize, ObjectiveContext, ObjectiveSpec, TemplateParams};
use hexel::verify::run_invariants;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Parser)]
#[command(
    name = "hexel",
    version,
    about = "Assumed-stress brick element: stiffness, decomposition, bending benchmark, tuning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the element matrices and emit one of them
    Stiffness(StiffnessArgs),
    /// Run the structural invariant checks
    Verify(CommonArgs),
    /// Evaluate the bending benchmark, single case or aspect sweep
    Bending(BendingArgs),
    /// Tune the higher-order template against the bending objective
    Optimize(OptimizeArgs),
}

#[derive(Args)]
struct GeometryArgs {
    /// Edge length along x
    #[arg(long)]
    a: Option<f64>,
    /// Edge length along y
    #[arg(long)]
    b: Option<f64>,
    /// Edge length along z
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Args)]
struct MaterialArgs {
    /// Young's modulus
    #[arg(long)]
    youngs: Option<f64>,
    /// Poisson ratio, in the open interval (-1, 0.5)
    #[arg(long)]
    poisson: Option<f64>,
}

#[derive(Args)]
struct CommonArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    #[command(flatten)]
    material: MaterialArgs,
    /// JSON config file; explicit flags override its fields
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct StiffnessArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Matrix to emit: a, fbeta, sbeta, ksigma, kb, kh, l, hh, w, grc, x, r
    #[arg(long)]
    matrix: Option<String>,
    /// Output format: csv, json or matrix-market
    #[arg(long)]
    format: Option<String>,
    /// Write to this file instead of stdout (atomic replace)
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BendingArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Bending plane: beam axis then deflection axis (xy, yx, xz, zx, yz, zy)
    #[arg(long)]
    plane: Option<String>,
    /// Stiffness the ratio is taken against: full or higher_order
    #[arg(long)]
    kind: Option<String>,
    /// Imposed curvature of the probe
    #[arg(long)]
    curvature: Option<f64>,
    /// Aspect ratio sweep start:stop:step (inclusive); stretches the beam
    /// axis of a unit cross-section, ignoring --a/--b/--c
    #[arg(long, value_name = "RANGE")]
    sweep: Option<String>,
    /// Write to this file instead of stdout (atomic replace)
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    material: MaterialArgs,
    /// JSON config file; explicit flags override its fields
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Maximum number of objective evaluations
    #[arg(long)]
    budget: Option<usize>,
    /// Seed of the coordinate shuffle
    #[arg(long)]
    seed: Option<u64>,
    /// Omit the timestamp so repeated runs are byte-identical
    #[arg(long)]
    deterministic: bool,
    /// Write the report to this file instead of stdout (atomic replace)
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

enum CliError {
    /// Bad inputs: exit code 2.
    Validation(String),
    /// Failed computation or verification: exit code 1.
    Compute(String),
}

fn validation(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

fn compute(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

fn bending_error(e: BendingError) -> CliError {
    match e {
        BendingError::ZeroCurvature | BendingError::InvalidAspectRatios => validation(e),
        BendingError::NonFiniteRatio { .. } | BendingError::Decomposition(_) => compute(e),
    }
}

fn template_error(e: TemplateError) -> CliError {
    match e {
        TemplateError::NonPositiveParameter { .. }
        | TemplateError::EmptySamples
        | TemplateError::ZeroBudget
        | TemplateError::Material(_) => validation(e),
        TemplateError::Bending(inner) => bending_error(inner),
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
    io::parse_run_config(&bytes)
        .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
}

fn element_inputs(
    args: &CommonArgs,
    cfg: &RunConfig,
) -> Result<(BrickGeometry, IsotropicMaterial), CliError> {
    let a = args.geometry.a.or(cfg.a).unwrap_or(1.0);
    let b = args.geometry.b.or(cfg.b).unwrap_or(1.0);
    let c = args.geometry.c.or(cfg.c).unwrap_or(1.0);
    let youngs = args.material.youngs.or(cfg.youngs).unwrap_or(1.0);
    let poisson = args.material.poisson.or(cfg.poisson).unwrap_or(0.3);
    let geometry = BrickGeometry::new(a, b, c).map_err(validation)?;
    let material = IsotropicMaterial::new(youngs, poisson).map_err(validation)?;
    Ok((geometry, material))
}

fn pick(flag: Option<String>, from_config: Option<String>, default: &str) -> String {
    flag.or(from_config).unwrap_or_else(|| default.to_owned())
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => io::write_atomic(path, text)
            .map_err(|e| CliError::Compute(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_stiffness(args: StiffnessArgs) -> Result<(), CliError> {
    let cfg = load_config(args.common.config.as_deref())?;
    let (geometry, material) = element_inputs(&args.common, &cfg)?;
    let kind: MatrixKind = pick(args.matrix, cfg.matrix.clone(), "ksigma")
        .parse()
        .map_err(CliError::Validation)?;
    let format: FileFormat = pick(args.format, cfg.format.clone(), "csv")
        .parse()
        .map_err(CliError::Validation)?;
    let output = args.output.or(cfg.output.as_deref().map(PathBuf::from));
    let d = Decomposition::compute(&geometry, &material).map_err(compute)?;
    let file = io::matrix_of(&d, kind);
    let text = io::render_matrix(&file, format, kind.matrix_market_layout());
    emit(output.as_deref(), &text)
}

fn cmd_verify(args: CommonArgs) -> Result<(), CliError> {
    let cfg = load_config(args.config.as_deref())?;
    let (geometry, material) = element_inputs(&args, &cfg)?;
    let report = run_invariants(&geometry, &material).map_err(compute)?;
    println!("{report}");
    if report.all_pass() {
        Ok(())
    } else {
        Err(CliError::Compute(format!(
            "{} invariant check(s) failed",
            report.failures()
        )))
    }
}

fn cmd_bending(args: BendingArgs) -> Result<(), CliError> {
    let cfg = load_config(args.common.config.as_deref())?;
    let plane: BendingPlane = pick(args.plane, cfg.plane.clone(), "xy")
        .parse()
        .map_err(CliError::Validation)?;
    let kind: StiffnessKind = pick(args.kind, cfg.kind.clone(), "full")
        .parse()
        .map_err(CliError::Validation)?;
    let curvature = args.curvature.or(cfg.curvature).unwrap_or(1.0);
    let output = args.output.or(cfg.output.as_deref().map(PathBuf::from));
    let sweep_spec = args.sweep.or(cfg.sweep.clone());

    if let Some(spec) = sweep_spec {
        let aspects = io::parse_sweep_range(&spec).map_err(validation)?;
        let (_, material) = element_inputs(&args.common, &cfg)?;
        let table =
            aspect_sweep(&material, plane, kind, &aspects, curvature).map_err(bending_error)?;
        let mut text = String::from("aspect_ratio,poisson,stiffness_kind,plane,energy_ratio\n");
        for row in &table.rows {
            text.push_str(&format!(
                "{},{},{},{},{:.11e}\n",
                row.aspect_ratio, row.poisson, row.stiffness_kind, row.plane, row.energy_ratio
            ));
        }
        emit(output.as_deref(), &text)
    } else {
        let (geometry, material) = element_inputs(&args.common, &cfg)?;
        let d = Decomposition::compute(&geometry, &material).map_err(compute)?;
        let case = BendingCase::compute(&d, plane, curvature).map_err(bending_error)?;
        let ratio = case.energy_ratio(kind).map_err(bending_error)?;
        let text = format!(
            "plane = {plane}\nstiffness kind = {kind}\ncurvature = {curvature}\n\
             reference energy = {:.11e}\nelement energy = {:.11e}\n\
             basic energy = {:.11e}\nhigher-order energy = {:.11e}\n\
             energy ratio = {ratio:.11e}\n",
            case.reference_energy, case.element_energy, case.basic_energy, case.higher_order_energy
        );
        emit(output.as_deref(), &text)
    }
}

fn cmd_optimize(args: OptimizeArgs) -> Result<(), CliError> {
    let cfg = load_config(args.config.as_deref())?;
    let budget = args.budget.or(cfg.budget).unwrap_or(2000);
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    let deterministic = args.deterministic || cfg.deterministic.unwrap_or(false);
    let output = args.output.or(cfg.output.as_deref().map(PathBuf::from));
    let mut spec = ObjectiveSpec::default();
    if let Some(youngs) = args.material.youngs.or(cfg.youngs) {
        spec.youngs = youngs;
    }
    if let Some(poisson) = args.material.poisson.or(cfg.poisson) {
        spec.poissons = vec![poisson];
    }
    let ctx = ObjectiveContext::prepare(&spec).map_err(template_error)?;
    let report =
        optimize(&ctx, &TemplateParams::identity(), budget, seed).map_err(template_error)?;
    let mut value = serde_json::to_value(&report).expect("report serializes");
    if !deterministic {
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        value
            .as_object_mut()
            .expect("report is a JSON object")
            .insert("timestamp_unix_seconds".to_owned(), stamp.into());
    }
    let mut text = serde_json::to_string_pretty(&value).expect("report serializes");
    text.push('\n');
    emit(output.as_deref(), &text)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Stiffness(args) => cmd_stiffness(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bending(args) => cmd_bending(args),
        Command::Optimize(args) => cmd_optimize(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
