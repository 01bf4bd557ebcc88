use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::Value;

use isoprim_core::harness::{
    error_metric, export_points, ingest_nodes, surface_ids, ExportFormat, NodeRole, NodeSource,
    Sampling, SurfaceShape,
};
use isoprim_core::mechanics::{basis_pairs, fit_composite_weights, total_energy, WeightFit};
use isoprim_core::TraceRecord;

use crate::config::{Config, Method};
use crate::error::CliError;
use crate::io::{format_matrix, format_params, read_matrix, read_params, write_file};
use crate::model::Model;

#[derive(Debug, Parser)]
#[command(
    name = "isoprim",
    version,
    about = "Volume-preserving primitive solver for soft-body boundary conditions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a case for its boundary conditions and write the deformed body.
    Solve(SolveArgs),
    /// Compare a model's node positions against FEM or experiment nodes.
    Compare(CompareArgs),
    /// Fit the energy weight matrix for a case.
    FitWeights(FitArgs),
    /// Evaluate the strain energy of a parameter vector.
    Energy(EnergyArgs),
    /// Write the deformed body for a parameter vector.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub config: PathBuf,
    #[arg(long, value_enum)]
    pub solver: Option<Method>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, num_args = 2, value_names = ["NU", "NV"])]
    pub surface_grid: Option<Vec<usize>>,
    /// `identity`, `fit`, or a weight-matrix CSV.
    #[arg(long)]
    pub weights: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Shape {
    Box,
    Tube,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Model nodes (fᵢ).
    pub ours: PathBuf,
    /// FEM or experiment nodes (aᵢ).
    pub theirs: PathBuf,
    /// Reference configuration (oᵢ).
    pub reference: PathBuf,
    #[arg(long)]
    pub surface_only: bool,
    #[arg(long, value_enum, default_value = "box")]
    pub shape: Shape,
    #[arg(long, default_value = "compare-report.csv")]
    pub report: PathBuf,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    pub config: PathBuf,
    #[arg(long, default_value = "weights.csv")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    pub config: PathBuf,
    pub params: PathBuf,
    /// Grid refinement factor for the convergence check.
    #[arg(long, default_value_t = 2)]
    pub refine: usize,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub config: PathBuf,
    pub params: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, num_args = 2, value_names = ["NU", "NV"])]
    pub surface_grid: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Csv,
    Obj,
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Solve(a) => solve(&a),
        Command::Compare(a) => compare(&a),
        Command::FitWeights(a) => fit_weights(&a),
        Command::Energy(a) => energy(&a),
        Command::Export(a) => export(&a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

fn load(path: &Path) -> Result<(Config, Model), CliError> {
    let cfg = Config::load(path)?;
    cfg.validate()?;
    let model = Model::build(&cfg)?;
    Ok((cfg, model))
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn default_samples(m: usize) -> usize {
    4 * basis_pairs(m).len()
}

fn fit(cfg: &Config, model: &Model) -> Result<WeightFit, CliError> {
    let comp = model
        .composite()
        .ok_or_else(|| CliError::Config("this case has no modal weights to fit".into()))?;
    let w = &cfg.weights;
    Ok(fit_composite_weights(
        comp,
        &model.domain(),
        &cfg.material()?,
        w.samples
            .unwrap_or_else(|| default_samples(model.param_count())),
        w.magnitude,
        w.seed,
    )?)
}

fn weight_matrix(cfg: &Config, model: &Model) -> Result<Option<DMatrix<f64>>, CliError> {
    match cfg.weights.mode.as_str() {
        "identity" => Ok(None),
        "fit" => {
            let f = fit(cfg, model)?;
            match cfg.weights.floor {
                Some(floor) => Ok(Some(f.floored(floor)?)),
                None => Ok(Some(f.w)),
            }
        }
        path => Ok(Some(read_matrix(Path::new(path), model.param_count())?)),
    }
}

fn grid(flag: &Option<Vec<usize>>, cfg: &Config) -> Option<[usize; 2]> {
    match flag.as_deref() {
        Some(&[nu, nv]) => Some([nu, nv]),
        _ => cfg.output.surface_grid,
    }
}

#[derive(Serialize)]
struct Timings {
    setup: f64,
    weights: f64,
    solve: f64,
    output: f64,
}

#[derive(Serialize)]
struct TraceRow {
    iteration: usize,
    residual: f64,
    param_norm: f64,
    damped: bool,
}

impl From<&TraceRecord> for TraceRow {
    fn from(r: &TraceRecord) -> Self {
        Self {
            iteration: r.iteration,
            residual: r.residual,
            param_norm: r.param_norm,
            damped: r.damped,
        }
    }
}

#[derive(Serialize)]
struct Manifest {
    command: &'static str,
    status: &'static str,
    error: Option<Value>,
    config: Option<Config>,
    seed: Option<u64>,
    solver: Option<String>,
    iterations: Option<usize>,
    residual: Option<f64>,
    pose_error: Option<f64>,
    params: Vec<f64>,
    param_names: Vec<String>,
    timings_ms: Timings,
    outputs: Vec<String>,
    trace: Vec<TraceRow>,
}

/// Runs the solve and always leaves one manifest in the output directory,
/// recording the failure if there was one.
fn solve(args: &SolveArgs) -> Result<(), CliError> {
    let mut manifest = Manifest {
        command: "solve",
        status: "ok",
        error: None,
        config: None,
        seed: None,
        solver: None,
        iterations: None,
        residual: None,
        pose_error: None,
        params: Vec::new(),
        param_names: Vec::new(),
        timings_ms: Timings {
            setup: 0.0,
            weights: 0.0,
            solve: 0.0,
            output: 0.0,
        },
        outputs: Vec::new(),
        trace: Vec::new(),
    };
    fs::create_dir_all(&args.out).map_err(|source| CliError::Write {
        path: args.out.display().to_string(),
        source,
    })?;
    let result = configure_and_solve(args, &mut manifest);
    if let Err(e) = &result {
        manifest.status = "error";
        manifest.error = serde_json::from_str(&e.to_json()).ok();
    }
    let manifest_path = args.out.join("manifest.json");
    manifest.outputs.push(manifest_path.display().to_string());
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&manifest_path, &text)?;
    result
}

fn configure_and_solve(args: &SolveArgs, manifest: &mut Manifest) -> Result<(), CliError> {
    let start = Instant::now();
    let mut cfg = Config::load(&args.config)?;
    if let Some(m) = args.solver {
        cfg.solver.method = Some(m);
    }
    if let Some(s) = args.seed {
        cfg.weights.seed = s;
    }
    if let Some(w) = &args.weights {
        cfg.weights.mode = w.clone();
    }
    cfg.output.surface_grid = grid(&args.surface_grid, &cfg);
    manifest.config = Some(cfg.clone());
    manifest.seed = Some(cfg.weights.seed);
    manifest.solver = Some(cfg.method().to_string());
    cfg.validate()?;
    let model = Model::build(&cfg)?;
    manifest.param_names = model.param_names();
    manifest.timings_ms.setup = ms(start);
    solve_into(&cfg, &model, &args.out, manifest)
}

fn solve_into(
    cfg: &Config,
    model: &Model,
    out: &Path,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    let t = Instant::now();
    let weight = weight_matrix(cfg, model)?;
    manifest.timings_ms.weights = ms(t);

    let t = Instant::now();
    let solved = model.solve(cfg, weight)?;
    let solve_ms = ms(t);
    manifest.timings_ms.solve = solve_ms;
    let sol = &solved.solution;
    manifest.iterations = Some(sol.iterations);
    manifest.residual = Some(sol.residual);
    manifest.pose_error = solved.pose_error;
    manifest.params = sol.params.clone();
    manifest.trace = sol.trace.iter().map(TraceRow::from).collect();

    let t = Instant::now();
    let comp = model.deformation(&sol.params)?;
    let params_path = out.join("params.csv");
    write_file(
        &params_path,
        &format_params(&model.param_names(), &sol.params),
    )?;
    let mut trace = String::from("iteration,residual,param_norm,damped\n");
    for r in &sol.trace {
        trace.push_str(&format!(
            "{},{},{},{}\n",
            r.iteration, r.residual, r.param_norm, r.damped
        ));
    }
    let trace_path = out.join("trace.csv");
    write_file(&trace_path, &trace)?;
    let points_path = out.join("points.csv");
    let mut outputs = vec![params_path, trace_path, points_path.clone()];
    match cfg.output.surface_grid {
        Some([nu, nv]) => {
            let sampling = Sampling::Surface(model.surface(nu, nv)?);
            export_points(&comp, &sampling, &points_path, ExportFormat::Csv)?;
            let obj = out.join("points.obj");
            export_points(&comp, &sampling, &obj, ExportFormat::Obj)?;
            outputs.push(obj);
        }
        None => {
            export_points(
                &comp,
                &Sampling::Domain(model.domain()),
                &points_path,
                ExportFormat::Csv,
            )?;
        }
    }
    manifest.timings_ms.output = ms(t);
    manifest.outputs = outputs.iter().map(|p| p.display().to_string()).collect();

    println!("case      {}", model.case());
    println!("solver    {}", cfg.method());
    println!("iters     {}", sol.iterations);
    println!("residual  {:e}", sol.residual);
    if let Some(e) = solved.pose_error {
        println!("pose err  {e:e}");
    }
    println!("solve     {solve_ms:.3} ms");
    Ok(())
}

fn compare(args: &CompareArgs) -> Result<(), CliError> {
    let reference = ingest_nodes(&args.reference, NodeRole::Reference, NodeSource::Fem)?;
    let theirs = ingest_nodes(&args.theirs, NodeRole::Deformed, NodeSource::Fem)?;
    let ours = ingest_nodes(&args.ours, NodeRole::Deformed, NodeSource::Primitive)?;
    let (reference, theirs, ours) = if args.surface_only {
        let shape = match args.shape {
            Shape::Box => SurfaceShape::Box,
            Shape::Tube => SurfaceShape::Tube,
        };
        let keep = surface_ids(&reference, shape);
        (
            reference.filtered(&keep),
            theirs.filtered(&keep),
            ours.filtered(&keep),
        )
    } else {
        (reference, theirs, ours)
    };
    let report = error_metric(&reference, &theirs, &ours)?;
    let mut csv = String::from("id,e,d\n");
    for n in &report.nodes {
        csv.push_str(&format!("{},{},{}\n", n.id, n.e, n.d));
    }
    write_file(&args.report, &csv)?;
    let count = report.nodes.len() as f64;
    let max_e = report.nodes.iter().map(|n| n.e).fold(0.0, f64::max);
    let mean_e = report.nodes.iter().map(|n| n.e).sum::<f64>() / count;
    let max_d = report.nodes.iter().map(|n| n.d).fold(0.0, f64::max);
    println!("E = {}", report.value);
    println!("nodes     {}", report.nodes.len());
    println!("max e     {max_e}");
    println!("mean e    {mean_e}");
    println!("max d     {max_d}");
    Ok(())
}

fn fit_weights(args: &FitArgs) -> Result<(), CliError> {
    let (mut cfg, model) = load(&args.config)?;
    if let Some(s) = args.seed {
        cfg.weights.seed = s;
    }
    let f = fit(&cfg, &model)?;
    let eig = f.eigenvalues();
    let w = match cfg.weights.floor {
        Some(floor) => f.floored(floor)?,
        None => f.w.clone(),
    };
    write_file(&args.out, &format_matrix(&model.param_names(), &w))?;
    println!("parameters {}", model.param_count());
    println!("basis      {}", basis_pairs(model.param_count()).len());
    println!("samples    {}", f.sample_count);
    println!("residual   {:e}", f.residual);
    println!("eigen      [{:e}, {:e}]", eig.min(), eig.max());
    let status = if f.is_positive_definite() {
        "positive-definite"
    } else {
        "indefinite"
    };
    println!("status     {status}");
    if let Some(floor) = cfg.weights.floor {
        println!("floor      {floor:e} (applied to the written matrix)");
    }
    Ok(())
}

fn energy(args: &EnergyArgs) -> Result<(), CliError> {
    let (cfg, model) = load(&args.config)?;
    if args.refine < 2 {
        return Err(CliError::Config("--refine must be at least 2".into()));
    }
    let p = read_params(&args.params)?;
    if p.len() != model.param_count() {
        return Err(isoprim_core::Error::DimensionMismatch {
            expected: model.param_count(),
            got: p.len(),
        }
        .into());
    }
    let comp = model.deformation(&p)?;
    let mat = cfg.material()?;
    let domain = model.domain();
    let e = total_energy(&comp, &domain, &mat)?;
    let fine = total_energy(&comp, &domain.refined(args.refine), &mat)?;
    let delta = if fine == e {
        0.0
    } else {
        (fine - e).abs() / fine.abs().max(e.abs())
    };
    println!("energy    {e}");
    println!("refined   {fine} (x{})", args.refine);
    println!("change    {delta:e}");
    Ok(())
}

fn export(args: &ExportArgs) -> Result<(), CliError> {
    let (cfg, model) = load(&args.config)?;
    let p = read_params(&args.params)?;
    let comp = model.deformation(&p)?;
    let sampling = match grid(&args.surface_grid, &cfg) {
        Some([nu, nv]) => Sampling::Surface(model.surface(nu, nv)?),
        None => Sampling::Domain(model.domain()),
    };
    let format = match args.format {
        Format::Csv => ExportFormat::Csv,
        Format::Obj => ExportFormat::Obj,
    };
    let nodes = export_points(&comp, &sampling, &args.out, format)?;
    println!("wrote {} points to {}", nodes.len(), args.out.display());
    Ok(())
}
