use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use skewflow::cache::IntersectionCache;
use skewflow::filling::{complement_report, parse_class};
use skewflow::hyperbolic::{build_regular_rep, FuchsianRep};
use skewflow::intersection::{intersection_number, with_generic_domain};
use skewflow::orbit_models::{singleton_check, strip_scene, StripModel, SuspensionModel};
use skewflow::report::{run_job, JobSpec, SCHEMA_VERSION};
use skewflow::svg::{strip_svg, surface_scene, surface_svg};
use skewflow::trace::trace_in_domain;
use skewflow::word::CyclicWord;

#[derive(Parser)]
#[command(name = "skewflow", version, about = "Free homotopy classes of orbits of surgered geodesic flows")]
struct Cli {
    /// Genus of the surface for word arguments.
    #[arg(long, global = true, default_value_t = 2)]
    genus: usize,
    /// Starting search radius for intersection numbers.
    #[arg(long, global = true)]
    radius: Option<usize>,
    /// Intersection cache file, read and written back.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Write a figure: a file for single-figure commands, a directory for `classify`.
    #[arg(long, global = true)]
    emit_svg: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check hypotheses and classify the orbits of a job file.
    Classify {
        job: PathBuf,
        /// Report destination; stdout when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Geometric intersection number of two closed curves.
    Intersect { w: String, v: String },
    /// Complement topology of a closed curve.
    Fills { w: String },
    /// Ladder of fixed orbits in the skewed strip.
    StripModel {
        #[arg(long, default_value_t = 0.2)]
        epsilon: f64,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Separation of two orbits of a suspension flow.
    SuspensionCheck {
        /// Monodromy entries a,b,c,d.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [2, 1, 1, 1])]
        matrix: Vec<i64>,
        #[arg(long, default_value_t = 20.0)]
        horizon: f64,
        /// Offset of the second point in x, y, t.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [1.0, 0.0, 0.0])]
        offset: Vec<f64>,
    },
    /// Arcs of a closed geodesic in a fundamental domain.
    Trace { w: String },
}

/// Write to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print(value: &serde_json::Value) {
    emit(&(serde_json::to_string_pretty(value).expect("json") + "\n"));
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn class(s: &str, rep: &FuchsianRep) -> Result<CyclicWord> {
    parse_class(s, rep).with_context(|| format!("parsing {s:?}"))
}

fn open_cache(path: Option<&Path>) -> IntersectionCache {
    match path {
        Some(p) => IntersectionCache::load(p),
        None => IntersectionCache::in_memory(),
    }
}

fn classify(cli: &Cli, job_path: &Path, output: Option<&Path>) -> Result<ExitCode> {
    let text = fs::read_to_string(job_path).with_context(|| format!("reading {}", job_path.display()))?;
    let job = JobSpec::parse(&text)?;
    let cache_path = cli.cache.clone().or_else(|| job.options.cache.as_ref().map(PathBuf::from));
    let cache = open_cache(cache_path.as_deref());
    let report = run_job(&job, &cache)?;
    cache.save().context("saving cache")?;
    match output {
        Some(p) => write_file(p, &report.to_json())?,
        None => emit(&report.to_json()),
    }
    let figures = cli.emit_svg.clone().or_else(|| {
        job.options
            .emit_figures
            .then(|| job_path.parent().map(Path::to_path_buf).unwrap_or_default())
    });
    if let Some(dir) = figures {
        fs::create_dir_all(&dir)?;
        write_file(&dir.join("strip.svg"), &strip_svg(&report.models.strip_scene))?;
        let rep = job.representation()?;
        let spec = job.surgery_spec(&rep)?;
        let scene = surface_scene(&rep, &spec.curves)?;
        write_file(&dir.join("surface.svg"), &surface_svg(&scene))?;
    }
    for e in &report.preconditions.errors {
        eprintln!("precondition failed: {e}");
    }
    Ok(if report.status.ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let rep = || build_regular_rep(cli.genus).context("building the hyperbolic structure");
    match &cli.command {
        Command::Classify { job, output } => return classify(cli, job, output.as_deref()),
        Command::Intersect { w, v } => {
            let rep = rep()?;
            let (a, b) = (class(w, &rep)?, class(v, &rep)?);
            let cache = open_cache(cli.cache.as_deref());
            let c = cache.intersection(&a, &b, &rep, cli.radius)?;
            let full = intersection_number(&a, &b, &rep, Some(c.radius_used))?;
            let r = json!({
                "schema_version": SCHEMA_VERSION,
                "genus": cli.genus,
                "w": a,
                "v": b,
                "count": c.count,
                "radius_used": c.radius_used,
                "certificates": full.certificates,
            });
            cache.save()?;
            print(&r);
            if let Some(p) = &cli.emit_svg {
                write_file(p, &surface_svg(&surface_scene(&rep, &[a, b])?))?;
            }
        }
        Command::Fills { w } => {
            let rep = rep()?;
            let c = class(w, &rep)?;
            let r = complement_report(&c, &rep)?;
            print(&json!({
                "schema_version": SCHEMA_VERSION,
                "genus": cli.genus,
                "curve": c,
                "report": r,
            }));
        }
        Command::StripModel { epsilon, k } => {
            let m = StripModel::new(*epsilon)?;
            let scene = strip_scene(&m, *k);
            print(&serde_json::to_value(&scene)?);
            if let Some(p) = &cli.emit_svg {
                write_file(p, &strip_svg(&scene))?;
            }
        }
        Command::SuspensionCheck { matrix, horizon, offset } => {
            anyhow::ensure!(matrix.len() == 4, "--matrix takes 4 entries, got {}", matrix.len());
            anyhow::ensure!(offset.len() == 3, "--offset takes 3 entries, got {}", offset.len());
            let sm = SuspensionModel::new([[matrix[0], matrix[1]], [matrix[2], matrix[3]]])?;
            let q = [offset[0], offset[1], offset[2]];
            let r = singleton_check(&sm, [0.0, 0.0, 0.0], q, *horizon)?;
            print(&json!({
                "schema_version": SCHEMA_VERSION,
                "monodromy": sm.monodromy(),
                "lambda1": sm.lambda1(),
                "lambda2": sm.lambda2(),
                "report": r,
            }));
        }
        Command::Trace { w } => {
            let rep = rep()?;
            let c = class(w, &rep)?;
            let word = c.to_word();
            let t = with_generic_domain(&rep, |d| trace_in_domain(&word, &rep, d))?;
            print(&json!({
                "schema_version": SCHEMA_VERSION,
                "genus": cli.genus,
                "curve": c,
                "trace": t,
            }));
            if let Some(p) = &cli.emit_svg {
                write_file(p, &surface_svg(&surface_scene(&rep, &[c])?))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
