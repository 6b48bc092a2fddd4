//! The `proxvor` command line.
//!
//! Exit codes: 0 on success, 1 on a domain or I/O error, 2 on a usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::centroidal::{lloyd_iterate, seed_from_labels, DensityGrid};
use crate::error::Error;
use crate::io::{json, parse_sites, render_svg, DiagramFileModel, GreyMap, RenderOptions};
use crate::oracle::check_diagram;
use crate::proximity::{build_proximity_graph, cech_distance, ProximalKind};
use crate::topology::{build_leader_topology_bounded, neighbor_family, verify_topology_axioms};
use crate::voronoi::{build_diagram_with_tolerance, BoundingBox, GeneratingSet, VoronoiDiagram};

const TOPOLOGY_LIMIT: usize = 1 << 16;

#[derive(Parser, Debug)]
#[command(name = "proxvor", version, about = "Voronoi tessellations, proximity and Leader topologies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the diagram and write it as JSON and/or SVG.
    Tessellate(Common),
    /// Report every proximal pair of cells and its shared region.
    Proximity(Common),
    /// Build and verify the Leader topology of the diagram.
    Topology(Common),
    /// Run Lloyd iteration towards a centroidal tessellation.
    Lloyd(LloydArgs),
    /// Check the diagram against a brute-force nearest-site oracle.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Sites file (JSON).
    #[arg(long, value_name = "PATH")]
    sites: Option<PathBuf>,
    /// Override the bounding box.
    #[arg(long, num_args = 4, value_names = ["X0", "Y0", "X1", "Y1"], allow_negative_numbers = true)]
    bbox: Option<Vec<f64>>,
    /// Tolerance relative to the bounding-box diagonal.
    #[arg(long, value_name = "T")]
    tol: Option<f64>,
    /// Write an SVG rendering here.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Write the diagram file here.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LloydArgs {
    #[command(flatten)]
    common: Common,
    /// Density grid (binary PGM) stretched over the bounding box.
    #[arg(long, value_name = "PATH")]
    density: Option<PathBuf>,
    /// Seed the sites from a label image (binary PGM, 0 = background).
    #[arg(long, value_name = "PATH")]
    labels: Option<PathBuf>,
    #[arg(long, value_name = "N", default_value_t = 500)]
    iters: usize,
    /// Stop once no site moves further than this (absolute length);
    /// defaults to 1e-6 of the bounding-box diagonal.
    #[arg(long = "move-tol", value_name = "T")]
    move_tol: Option<f64>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    common: Common,
    /// Seed for the additional random sample points.
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Domain(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

struct Input {
    sites: GeneratingSet,
    bbox: BoundingBox,
    relative_tolerance: f64,
}

fn bbox_override(c: &Common) -> Result<Option<BoundingBox>, CliError> {
    match c.bbox.as_deref() {
        Some(&[a, b, x, y]) => Ok(Some(BoundingBox::new(a, b, x, y)?)),
        Some(_) => Err(CliError::Usage("--bbox takes four numbers".into())),
        None => Ok(None),
    }
}

fn load_input(c: &Common) -> Result<Input, CliError> {
    let path = c
        .sites
        .as_ref()
        .ok_or_else(|| CliError::Usage("--sites PATH is required".into()))?;
    let text = String::from_utf8(read(path)?)
        .map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))?;
    let mut model = parse_sites(&text)?;
    if let Some(b) = bbox_override(c)? {
        model.bbox = b.as_array();
    }
    if let Some(t) = c.tol {
        model.tolerance = t;
    }
    model.validate()?;
    Ok(Input {
        sites: model.generating_set()?,
        bbox: model.bounding_box()?,
        relative_tolerance: model.tolerance,
    })
}

fn build(input: &Input) -> Result<VoronoiDiagram, CliError> {
    Ok(build_diagram_with_tolerance(
        &input.sites,
        &input.bbox,
        input.relative_tolerance,
    )?)
}

fn emit(c: &Common, out: &mut dyn Write, report: &str) -> Result<(), CliError> {
    match &c.out {
        Some(p) => write(p, report.as_bytes()),
        None => out.write_all(report.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn write_artifacts(
    c: &Common,
    d: &VoronoiDiagram,
    file: &DiagramFileModel,
    svg_opts: RenderOptions,
) -> Result<(), CliError> {
    if let Some(p) = &c.json {
        write(p, file.to_json().as_bytes())?;
    }
    if let Some(p) = &c.svg {
        let graph = build_proximity_graph(d, d.tol())?;
        write(p, render_svg(d, Some(&graph), &svg_opts).as_bytes())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Summary {
    cells: usize,
    edges: usize,
    vertices: usize,
    proximal_pairs: usize,
}

fn tessellate(c: &Common, out: &mut dyn Write) -> Result<(), CliError> {
    let d = build(&load_input(c)?)?;
    let graph = build_proximity_graph(&d, d.tol())?;
    let file = DiagramFileModel::from_diagram(&d, &graph, None);
    write_artifacts(c, &d, &file, RenderOptions::default())?;
    let report = if c.json.is_some() {
        json::to_string(&Summary {
            cells: d.cells().len(),
            edges: d.edges().len(),
            vertices: d.vertices().len(),
            proximal_pairs: graph.edge_count(),
        })
    } else {
        file.to_json()
    };
    emit(c, out, &report)
}

#[derive(Serialize)]
struct PairReport {
    sites: [usize; 2],
    cech_distance: f64,
    #[serde(flatten)]
    region: ProximalKind,
}

#[derive(Serialize)]
struct ProximityReport {
    tolerance: f64,
    pairs: Vec<PairReport>,
    degrees: Vec<usize>,
}

fn proximity(c: &Common, out: &mut dyn Write) -> Result<(), CliError> {
    let d = build(&load_input(c)?)?;
    let graph = build_proximity_graph(&d, d.tol())?;
    let cells = d.cells();
    let report = ProximityReport {
        tolerance: d.tol(),
        pairs: graph
            .edges()
            .map(|r| PairReport {
                sites: [r.site_pair.0, r.site_pair.1],
                cech_distance: cech_distance(&cells[r.site_pair.0], &cells[r.site_pair.1]),
                region: r.kind,
            })
            .collect(),
        degrees: (0..d.len()).map(|p| graph.degree(p)).collect(),
    };
    let file = DiagramFileModel::from_diagram(&d, &graph, None);
    write_artifacts(
        c,
        &d,
        &file,
        RenderOptions {
            proximity: true,
            ..RenderOptions::default()
        },
    )?;
    emit(c, out, &json::to_string(&report))
}

#[derive(Serialize)]
struct TopologyReport {
    region_count: usize,
    neighbor_families: Vec<Vec<usize>>,
    family_count: usize,
    families: Vec<Vec<usize>>,
    axioms: crate::topology::AxiomReport,
}

fn topology(c: &Common, out: &mut dyn Write) -> Result<(), CliError> {
    let d = build(&load_input(c)?)?;
    let tol = d.tol();
    let t = build_leader_topology_bounded(&d, tol, TOPOLOGY_LIMIT)?;
    let neighbor_families = (0..d.len())
        .map(|p| neighbor_family(&d, p, tol).map(|f| f.ids().collect()))
        .collect::<Result<Vec<Vec<usize>>, Error>>()?;
    let families: Vec<Vec<usize>> = t
        .sorted_families()
        .into_iter()
        .map(|f| f.ids().collect())
        .collect();
    let report = TopologyReport {
        region_count: d.len(),
        neighbor_families,
        family_count: families.len(),
        families,
        axioms: verify_topology_axioms(&t),
    };
    let graph = build_proximity_graph(&d, tol)?;
    let file = DiagramFileModel::from_diagram(&d, &graph, Some(&t));
    write_artifacts(c, &d, &file, RenderOptions::default())?;
    emit(c, out, &json::to_string(&report))
}

#[derive(Serialize)]
struct StepReport {
    iteration: usize,
    movement: f64,
    energy: f64,
    stuck: Vec<usize>,
}

#[derive(Serialize)]
struct LloydReport {
    converged: bool,
    iterations: usize,
    sites: Vec<[f64; 2]>,
    history: Vec<StepReport>,
}

fn lloyd(a: &LloydArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let c = &a.common;
    let (sites, bbox, rel) = match (&c.sites, &a.labels) {
        (Some(_), None) => {
            let i = load_input(c)?;
            (i.sites, i.bbox, i.relative_tolerance)
        }
        (None, Some(path)) => {
            let bbox = bbox_override(c)?
                .ok_or_else(|| CliError::Usage("--labels needs --bbox".into()))?;
            let grey = GreyMap::parse(&read(path)?)?;
            let sites = seed_from_labels(grey.width, grey.height, &grey.labels(), &bbox)?;
            let rel = c.tol.unwrap_or(crate::geom::DEFAULT_RELATIVE_TOLERANCE);
            (sites, bbox, rel)
        }
        _ => {
            return Err(CliError::Usage(
                "lloyd needs exactly one of --sites or --labels".into(),
            ))
        }
    };
    if a.iters == 0 {
        return Err(CliError::Usage("--iters must be at least 1".into()));
    }
    let density: Option<DensityGrid> = match &a.density {
        Some(p) => Some(GreyMap::parse(&read(p)?)?.to_density(bbox)?),
        None => None,
    };
    let move_tol = a.move_tol.unwrap_or(1e-6 * bbox.diagonal());
    if move_tol.is_nan() || move_tol <= 0.0 {
        return Err(CliError::Usage("--move-tol must be positive".into()));
    }
    let run = lloyd_iterate(&sites, &bbox, density.as_ref(), a.iters, move_tol)?;
    let report = LloydReport {
        converged: run.converged,
        iterations: run.history.len(),
        sites: run.sites.sites().iter().map(|&p| p.into()).collect(),
        history: run
            .history
            .iter()
            .map(|s| StepReport {
                iteration: s.iteration,
                movement: s.movement,
                energy: s.energy,
                stuck: s.stuck.clone(),
            })
            .collect(),
    };
    if c.json.is_some() || c.svg.is_some() {
        let d = build_diagram_with_tolerance(&run.sites, &bbox, rel)?;
        let graph = build_proximity_graph(&d, d.tol())?;
        let file = DiagramFileModel::from_diagram(&d, &graph, None);
        write_artifacts(c, &d, &file, RenderOptions::default())?;
    }
    emit(c, out, &json::to_string(&report))
}

fn check(a: &CheckArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let c = &a.common;
    let d = build(&load_input(c)?)?;
    let report = check_diagram(&d, 200, 10_000, a.seed, 10.0 * d.tol());
    emit(c, out, &json::to_string(&report))?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Failed("oracle check failed".into()))
    }
}

/// Runs the command line with explicit output streams.
pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Tessellate(c) => tessellate(c, out),
        Command::Proximity(c) => proximity(c, out),
        Command::Topology(c) => topology(c, out),
        Command::Lloyd(a) => lloyd(a, out),
        Command::Check(a) => check(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nRun with --help for usage.");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

/// Runs the command line against the process's standard streams.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
