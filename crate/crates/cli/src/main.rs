//! `equiaffine`: scene-driven batch runs over the invariants library.

mod exit;
mod report;
mod run;
mod scene;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use equiaffine::catalog::ENTRIES;
use equiaffine::jordan::selftest;
use equiaffine::parse_chart;

use crate::exit::{chart_error, scene_error, Failure, CHART_ERROR, CHECK_FAILED};
use crate::report::{CheckEntry, Report};
use crate::run::{expand_checks, run_points, Plan, Thresholds};
use crate::scene::{check_list, composition_spec, parse_scene, resolve_catalog, ChartScene, Checks, PointSet, Resolved};

#[derive(Parser)]
#[command(name = "equiaffine", version, about = "Equiaffine invariants of parametrized hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Blaschke invariants at each point.
    Invariants(RunArgs),
    /// Structural identities at each point (default: all).
    Check(RunArgs),
    /// Builds a composition chart and checks it.
    Compose {
        /// Number of point factors.
        #[arg(long)]
        r: usize,
        /// Hypersphere factor by catalog name; repeatable.
        #[arg(long = "factor")]
        factors: Vec<String>,
        /// Comma-separated positive constants, one per factor slot.
        #[arg(long, allow_hyphen_values = true)]
        constants: Option<String>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Dual Lagrangian data and its membership checks.
    Dual(RunArgs),
    /// Octonion and Jordan-algebra relations.
    Jordan {
        #[command(subcommand)]
        command: JordanCommand,
    },
    /// Catalog charts.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum JordanCommand {
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Mean curvature of the embedded hypersphere; must be negative.
        #[arg(long, default_value_t = -1.0 / 3.0, allow_hyphen_values = true)]
        l1: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    List {
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Catalog name such as `sl_so(3)`, inline chart text, or a chart file.
    #[arg(long)]
    chart: Option<String>,
    /// Scene file; `-` reads stdin.
    #[arg(long)]
    scene: Option<String>,
    /// `N`, `random N seed S`, or `a,b; c,d`.
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance override `name=value`; repeatable.
    #[arg(long = "tol")]
    tols: Vec<String>,
    /// Comma-separated check names, or `all`.
    #[arg(long)]
    checks: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

const DEFAULT_POINTS: usize = 5;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Invariants(run) => run_scene("invariants", run, None, Some("invariants")),
        Command::Check(run) => run_scene("check", run, None, None),
        Command::Compose { r, factors, constants, run } => {
            let constants = constants
                .map(|c| {
                    c.split(',').map(|v| v.trim().parse::<f64>().with_context(|| format!("bad constant '{v}'"))).collect()
                })
                .transpose()
                .map_err(scene_error)?;
            let spec = composition_spec(r, &factors, constants)?;
            run_scene("compose", run, Some(spec), None)
        }
        Command::Dual(run) => run_scene("dual", run, None, Some("dual")),
        Command::Jordan { command: JordanCommand::Selftest { seed, l1, output } } => {
            let checks = selftest(seed, l1).map_err(|e| exit::library(e, "jordan selftest"))?;
            let entries = checks.iter().map(CheckEntry::from).collect();
            let mut report = Report::new("jordan selftest", None, None, Vec::new(), entries);
            report.info.insert("l1".into(), l1);
            report.info.insert("seed".into(), seed as f64);
            emit(&report, &output)
        }
        Command::Catalog { command: CatalogCommand::List { output } } => {
            let text = match output.format {
                Format::Json => {
                    let list: Vec<_> = ENTRIES
                        .iter()
                        .map(|e| serde_json::json!({ "name": e.name, "params": e.params, "summary": e.summary }))
                        .collect();
                    let mut s = serde_json::to_string_pretty(&serde_json::json!({ "schema": report::SCHEMA, "charts": list }))
                        .expect("catalog serializes");
                    s.push('\n');
                    s
                }
                Format::Text => ENTRIES.iter().map(|e| format!("{}({})  {}\n", e.name, e.params, e.summary)).collect(),
            };
            write_out(&text, output.out.as_ref())?;
            Ok(0)
        }
    }
}

fn read_scene(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut text).context("reading scene from stdin").map_err(scene_error)?;
    } else {
        text = std::fs::read_to_string(path).with_context(|| format!("reading scene {path}")).map_err(scene_error)?;
    }
    Ok(text)
}

/// Catalog names first, then chart files, then inline chart text.
fn chart_from_flag(text: &str) -> Result<Resolved, Failure> {
    let looks_inline = text.contains(';') || text.contains('=');
    if !looks_inline {
        let path = std::path::Path::new(text);
        if path.is_file() {
            let source = std::fs::read_to_string(path)
                .with_context(|| format!("reading chart {text}"))
                .map_err(chart_error)?;
            let chart = parse_chart(&source).map_err(|e| exit::library(e, "chart file"))?;
            return Ok(Resolved { chart, composition: None });
        }
        return Ok(Resolved { chart: resolve_catalog(text)?, composition: None });
    }
    if text.trim_start().starts_with("graph") {
        return Ok(Resolved { chart: resolve_catalog(text)?, composition: None });
    }
    let chart = parse_chart(text).map_err(|e| exit::library(e, "chart text"))?;
    Ok(Resolved { chart, composition: None })
}

fn run_scene(
    command: &str,
    run: RunArgs,
    composition: Option<equiaffine::calabi::CompositionSpec<f64>>,
    fixed_checks: Option<&str>,
) -> Result<u8, Failure> {
    let scene = run.scene.as_deref().map(read_scene).transpose()?.map(|t| parse_scene(&t)).transpose()?;

    let resolved = match (&composition, &run.chart, &scene) {
        (Some(spec), _, _) => {
            let chart = equiaffine::calabi::compose_chart(spec).map_err(|e| exit::library(e, "composition"))?;
            Resolved { chart, composition: Some(spec.clone()) }
        }
        (None, Some(text), _) => chart_from_flag(text)?,
        (None, None, Some(s)) => scene::resolve_chart(&s.chart)?,
        (None, None, None) => scene::resolve_chart(&ChartScene::default())?,
    };

    let points = match (&run.points, scene.as_ref().and_then(|s| s.points.as_ref())) {
        (Some(text), _) => PointSet::parse(text, run.seed).map_err(scene_error)?,
        (None, Some(p)) => PointSet::from_scene(p, run.seed).map_err(scene_error)?,
        (None, None) => PointSet::Random { count: DEFAULT_POINTS, seed: run.seed },
    };
    let coords = points.realize(&resolved.chart)?;

    let names = match (fixed_checks, &run.checks, scene.as_ref().and_then(|s| s.checks.as_ref())) {
        (Some(c), _, _) => vec![c.to_string()],
        (None, Some(text), _) => check_list(&Checks::One(text.clone()))?,
        (None, None, Some(c)) => check_list(c)?,
        (None, None, None) => vec!["all".to_string()],
    };
    let checks = expand_checks(&names, resolved.composition.as_ref())?;

    let mut thresholds = Thresholds::default();
    if let Some(s) = &scene {
        for (k, v) in &s.tolerances {
            thresholds.set(k, *v)?;
        }
    }
    thresholds.apply(&run.tols)?;

    let plan = Plan { chart: &resolved.chart, composition: resolved.composition.as_ref(), checks, thresholds };
    let results = run_points(&plan, &coords);
    let mut report = Report::new(command, Some(resolved.chart.label.clone()), Some(resolved.chart.dim()), results, Vec::new());
    if let Some(spec) = &resolved.composition {
        report.info.insert("C".into(), spec.big_c());
        report.info.insert("L1".into(), spec.l1());
    }
    let code = emit(&report, &run.output)?;
    if report.summary.point_errors > 0 {
        eprintln!("error: {} point(s) could not be evaluated", report.summary.point_errors);
        return Ok(CHART_ERROR);
    }
    Ok(code)
}

fn emit(report: &Report, output: &OutputArgs) -> Result<u8, Failure> {
    let text = match output.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    write_out(&text, output.out.as_ref())?;
    Ok(if report.summary.passed { 0 } else { CHECK_FAILED })
}

fn write_out(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    let io = match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout().lock().write_all(text.as_bytes()).context("writing report"),
    };
    io.map_err(scene_error)
}
