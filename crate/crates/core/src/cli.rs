//! Command line front end: point ingestion, generators, reports and SVG.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{
    components, coverage_check, curve_length, run_pipeline, to_canonical_json, CertifyError,
    EvalOptions, SCHEMA,
};
use crate::curve_builder::Curve;
use crate::geom::{BBox, GeomError, Point, PointSet, EPS};
use crate::multiscale::{
    classical_jones_sum, default_eps_top, lower_bound, MultiscaleError, Region, SumReport,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no points in input")]
    NoPoints,
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Multiscale(#[from] MultiscaleError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Parsed input: the deduplicated set plus how many duplicates were dropped.
#[derive(Debug, Clone)]
pub struct ParsedPoints {
    pub set: PointSet,
    pub duplicates: usize,
}

/// Reads `x,y` lines; blank lines and lines starting with `#` are skipped.
pub fn parse_points_str(text: &str) -> Result<ParsedPoints, CliError> {
    let mut pts = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(CliError::Parse {
                line: i + 1,
                msg: format!("expected \"x,y\", got {line:?}"),
            });
        }
        let mut xy = [0.0; 2];
        for (slot, f) in xy.iter_mut().zip(&fields) {
            *slot = f
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Parse {
                    line: i + 1,
                    msg: format!("not a finite number: {f:?}"),
                })?;
        }
        pts.push(Point::new(xy[0], xy[1]));
    }
    if pts.is_empty() {
        return Err(CliError::NoPoints);
    }
    let set = PointSet::new(pts)?;
    let duplicates = set.duplicates_removed();
    Ok(ParsedPoints { set, duplicates })
}

pub fn parse_points(path: &Path) -> Result<ParsedPoints, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_points_str(&text)
}

/// Similarity `p -> scale * p + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    pub scale: f64,
    pub offset: Point,
}

impl Transform {
    pub const IDENTITY: Transform = Transform {
        scale: 1.0,
        offset: Point { x: 0.0, y: 0.0 },
    };

    pub fn apply(&self, p: Point) -> Point {
        p * self.scale + self.offset
    }
}

const NORMALIZE_MARGIN: f64 = 1.0 / 16.0;

/// Maps the set into `[0,1)^2` with a margin; sets already inside are left
/// alone. Radii must be multiplied by `transform.scale`.
pub fn normalize(e: &PointSet) -> (PointSet, Transform) {
    let inside = |p: &Point| (0.0..1.0).contains(&p.x) && (0.0..1.0).contains(&p.y);
    if e.points().iter().all(inside) {
        return (e.clone(), Transform::IDENTITY);
    }
    let bb = e.bbox();
    let extent = bb.width().max(bb.height());
    let t = if extent == 0.0 {
        Transform {
            scale: 1.0,
            offset: Point::new(0.5, 0.5) - bb.min,
        }
    } else {
        let scale = (1.0 - 2.0 * NORMALIZE_MARGIN) / extent;
        Transform {
            scale,
            offset: Point::new(NORMALIZE_MARGIN, NORMALIZE_MARGIN) - bb.min * scale,
        }
    };
    let pts = e.points().iter().map(|&p| t.apply(p)).collect();
    (PointSet::new(pts).expect("image of a nonempty finite set"), t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeneratorKind {
    Koch,
    CantorDust,
    Circle,
    RandomUniform,
    Grid,
}

/// Vertices of the level-`level` Koch polygon from `(0,0)` to `(1,0)`,
/// `4^level + 1` points.
pub fn koch(level: u32) -> Vec<Point> {
    let mut pts = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)];
    let (s, c) = (std::f64::consts::FRAC_PI_3.sin(), 0.5);
    for _ in 0..level {
        let mut next = Vec::with_capacity(4 * pts.len());
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let d = (b - a) * (1.0 / 3.0);
            let p1 = a + d;
            let p3 = a + d * 2.0;
            let peak = p1 + Point::new(d.x * c - d.y * s, d.x * s + d.y * c);
            next.extend([a, p1, peak, p3]);
        }
        next.push(*pts.last().unwrap());
        pts = next;
    }
    pts
}

/// Lower-left corners of the `4^level` squares of the planar Cantor set
/// with ratio 1/4 in the unit square.
pub fn cantor_dust(level: u32) -> Vec<Point> {
    let mut corners = vec![Point::new(0.0, 0.0)];
    let mut side = 1.0;
    for _ in 0..level {
        let step = 0.75 * side;
        corners = corners
            .iter()
            .flat_map(|&p| {
                [(0.0, 0.0), (step, 0.0), (0.0, step), (step, step)]
                    .map(|(dx, dy)| p + Point::new(dx, dy))
            })
            .collect();
        side /= 4.0;
    }
    corners
}

/// `n` equally spaced points on the circle of diameter 1 centered at `(1/2, 1/2)`.
pub fn circle(n: usize) -> Vec<Point> {
    (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            Point::new(0.5 + 0.5 * t.cos(), 0.5 + 0.5 * t.sin())
        })
        .collect()
}

pub fn random_uniform(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Point::new(rng.gen::<f64>(), rng.gen::<f64>()))
        .collect()
}

/// `n x n` lattice on `[0,1]^2`.
pub fn grid(n: usize) -> Vec<Point> {
    let step = if n > 1 { 1.0 / (n - 1) as f64 } else { 0.0 };
    (0..n)
        .flat_map(|j| (0..n).map(move |i| Point::new(i as f64 * step, j as f64 * step)))
        .collect()
}

pub fn generate(kind: GeneratorKind, level: u32, n: usize, seed: u64) -> Vec<Point> {
    match kind {
        GeneratorKind::Koch => koch(level),
        GeneratorKind::CantorDust => cantor_dust(level),
        GeneratorKind::Circle => circle(n),
        GeneratorKind::RandomUniform => random_uniform(n, seed),
        GeneratorKind::Grid => grid(n),
    }
}

pub fn points_to_csv(pts: &[Point]) -> String {
    let mut out = String::from("# x,y\n");
    for p in pts {
        writeln!(out, "{:?},{:?}", p.x, p.y).unwrap();
    }
    out
}

fn fmt(x: f64) -> String {
    format!("{x:.6}")
}

/// SVG drawing of `E`, the hull tree by generation, the curve, and radius-`r`
/// disks around samples of the curve.
pub fn render_svg(e: &PointSet, run: &crate::certify::PipelineRun, r: f64) -> String {
    let bb = e.bbox();
    let extent = bb.extent().max(r).max(1e-12);
    let pad = 0.05 * extent + r;
    let size = 800.0;
    let k = size / (extent + 2.0 * pad);
    let map = |p: Point| ((p.x - bb.min.x + pad) * k, (bb.min.y + extent + pad - p.y) * k);
    let poly = |pts: &[Point]| {
        pts.iter()
            .map(|&p| {
                let (x, y) = map(p);
                format!("{},{}", fmt(x), fmt(y))
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = String::new();
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">",
        fmt(size)
    )
    .unwrap();
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    s.push_str("<g id=\"disks\" fill=\"#9ecae1\" fill-opacity=\"0.15\" stroke=\"none\">\n");
    let step = r.max(EPS);
    for seg in run.curve.plain_segments() {
        let n = (seg.length() / step).ceil().max(1.0) as usize;
        for i in 0..=n {
            let (x, y) = map(seg.at(i as f64 / n as f64));
            writeln!(s, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>", fmt(x), fmt(y), fmt(r * k)).unwrap();
        }
    }
    for p in run.curve.points() {
        let (x, y) = map(p);
        writeln!(s, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>", fmt(x), fmt(y), fmt(r * k)).unwrap();
    }
    s.push_str("</g>\n");

    for depth in 0..=run.tree.generations() {
        writeln!(
            s,
            "<g id=\"generation-{depth}\" fill=\"none\" stroke=\"#888888\" stroke-width=\"0.5\">"
        )
        .unwrap();
        for node in run.tree.generation(depth) {
            let v = node.hull.vertices();
            let color = match node.label {
                crate::hull_tree::Label::Good => "#31a354",
                _ => "#de2d26",
            };
            if v.len() >= 3 {
                writeln!(s, "<polygon points=\"{}\" stroke=\"{color}\"/>", poly(v)).unwrap();
            } else {
                writeln!(s, "<polyline points=\"{}\" stroke=\"{color}\"/>", poly(v)).unwrap();
            }
        }
        s.push_str("</g>\n");
    }

    s.push_str("<g id=\"curve\" stroke=\"#08519c\" stroke-width=\"1.5\" fill=\"#08519c\">\n");
    for seg in run.curve.plain_segments() {
        let (x1, y1) = map(seg.p);
        let (x2, y2) = map(seg.q);
        writeln!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            fmt(x1),
            fmt(y1),
            fmt(x2),
            fmt(y2)
        )
        .unwrap();
    }
    for p in run.curve.points() {
        let (x, y) = map(p);
        writeln!(s, "<circle cx=\"{}\" cy=\"{}\" r=\"2\"/>", fmt(x), fmt(y)).unwrap();
    }
    s.push_str("</g>\n");

    s.push_str("<g id=\"points\" fill=\"black\">\n");
    for &p in e.points() {
        let (x, y) = map(p);
        writeln!(s, "<circle cx=\"{}\" cy=\"{}\" r=\"1.5\"/>", fmt(x), fmt(y)).unwrap();
    }
    s.push_str("</g>\n</svg>\n");
    s
}

#[derive(Debug, Parser)]
#[command(name = "mdp", version, about = "Candidate curves and length bounds for the Maximum Distance Problem")]
pub struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Q,
    #[value(name = "3q")]
    Q3,
}

impl From<VariantArg> for Region {
    fn from(v: VariantArg) -> Region {
        match v {
            VariantArg::Q => Region::Cube,
            VariantArg::Q3 => Region::Triple,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// CSV file with one "x,y" point per line.
    pub input: PathBuf,
    /// Neighborhood radius.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, value_enum, default_value = "q")]
    pub variant: VariantArg,
    /// Upward truncation tolerance of the multiscale sums.
    #[arg(long)]
    pub eps_top: Option<f64>,
    /// Rescale the input into the unit square (r is rescaled too).
    #[arg(long)]
    pub normalize: bool,
    /// Output path (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Truncated square sums and the lower bound.
    Bounds {
        #[command(flatten)]
        run: RunArgs,
        /// Compute the classical sum of beta(3Q)^2 |Q| instead (no radius).
        #[arg(long)]
        classical: bool,
    },
    /// Full pipeline: tree, curve, and the bounds report.
    Curve {
        #[command(flatten)]
        run: RunArgs,
        /// Also write the curve document here.
        #[arg(long)]
        curve_out: Option<PathBuf>,
        /// Keep per-generation curve snapshots in the curve document.
        #[arg(long)]
        snapshots: bool,
    },
    /// Re-check coverage and connectivity of a saved curve document.
    Verify {
        /// Point CSV the curve was built for.
        input: PathBuf,
        /// Curve document written by `curve --curve-out`.
        curve: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a generated point set as CSV.
    Gen {
        #[arg(value_enum)]
        kind: GeneratorKind,
        #[arg(long, default_value_t = 3)]
        level: u32,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render points, hulls by generation, the curve and its r-disks.
    Svg {
        #[command(flatten)]
        run: RunArgs,
    },
}

/// Saved curve with the data needed to re-check it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveDocument {
    pub schema: u32,
    pub r: f64,
    pub transform: Transform,
    pub curve: Curve,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub snapshots: Vec<Curve>,
}

#[derive(Debug, Clone, Serialize)]
struct BoundsOutput<'a> {
    schema: u32,
    r: f64,
    diameter: f64,
    lower: Option<f64>,
    point_minimizer: Option<bool>,
    transform: Transform,
    sum: &'a SumReport,
}

#[derive(Debug, Clone, Serialize)]
struct VerifyOutput {
    schema: u32,
    r: f64,
    coverage: crate::certify::CoverageResult,
    components: usize,
    curve_length: f64,
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(io_err(p)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(io_err(Path::new("<stdout>"))),
    }
}

struct Loaded {
    set: PointSet,
    transform: Transform,
    r: Option<f64>,
}

fn load(run: &RunArgs) -> Result<Loaded, CliError> {
    let parsed = parse_points(&run.input)?;
    if parsed.duplicates > 0 {
        eprintln!("note: removed {} duplicate point(s)", parsed.duplicates);
    }
    let (set, transform) = if run.normalize {
        normalize(&parsed.set)
    } else {
        (parsed.set, Transform::IDENTITY)
    };
    Ok(Loaded {
        set,
        transform,
        r: run.r.map(|r| r * transform.scale),
    })
}

fn require_r(r: Option<f64>) -> Result<f64, CliError> {
    match r {
        Some(r) if r > 0.0 && r.is_finite() => Ok(r),
        Some(_) => Err(CliError::Usage(
            "--r must be positive; for r = 0 use `bounds --classical`".into(),
        )),
        None => Err(CliError::Usage("--r is required".into())),
    }
}

fn options(run: &RunArgs, snapshots: bool) -> EvalOptions {
    EvalOptions {
        variant: run.variant.into(),
        eps_top: run.eps_top,
        snapshots,
    }
}

/// Runs one parsed command; returns the names of failed checks.
pub fn execute(cli: &Cli) -> Result<Vec<String>, CliError> {
    match &cli.command {
        Command::Gen {
            kind,
            level,
            n,
            seed,
            out,
        } => {
            emit(out.as_deref(), &points_to_csv(&generate(*kind, *level, *n, *seed)))?;
            Ok(Vec::new())
        }
        Command::Bounds { run, classical } => {
            let l = load(run)?;
            let eps_top = run.eps_top.unwrap_or_else(|| default_eps_top(&l.set));
            let text = if *classical {
                let sum = classical_jones_sum(&l.set, eps_top)?;
                to_canonical_json(&BoundsOutput {
                    schema: SCHEMA,
                    r: 0.0,
                    diameter: l.set.diameter(),
                    lower: None,
                    point_minimizer: None,
                    transform: l.transform,
                    sum: &sum,
                })?
            } else {
                let r = require_r(l.r)?;
                let lb = lower_bound(&l.set, r, run.variant.into(), eps_top)?;
                to_canonical_json(&BoundsOutput {
                    schema: SCHEMA,
                    r,
                    diameter: lb.diameter,
                    lower: Some(lb.value),
                    point_minimizer: Some(lb.point_minimizer),
                    transform: l.transform,
                    sum: &lb.sum,
                })?
            };
            emit(run.out.as_deref(), &text)?;
            Ok(Vec::new())
        }
        Command::Curve {
            run,
            curve_out,
            snapshots,
        } => {
            let l = load(run)?;
            let r = require_r(l.r)?;
            let result = run_pipeline(&l.set, r, options(run, *snapshots))?;
            emit(run.out.as_deref(), &to_canonical_json(&result.report)?)?;
            if let Some(path) = curve_out {
                let doc = CurveDocument {
                    schema: SCHEMA,
                    r,
                    transform: l.transform,
                    curve: result.curve.clone(),
                    snapshots: result.trace.snapshots.clone(),
                };
                emit(Some(path), &to_canonical_json(&doc)?)?;
            }
            Ok(result.report.failed().into_iter().map(String::from).collect())
        }
        Command::Verify { input, curve, out } => {
            let parsed = parse_points(input)?;
            let text = fs::read_to_string(curve).map_err(io_err(curve))?;
            let doc: CurveDocument = serde_json::from_str(&text)?;
            let pts = parsed.set.points().iter().map(|&p| doc.transform.apply(p)).collect();
            let set = PointSet::new(pts)?;
            let coverage = coverage_check(&set, &doc.curve, doc.r);
            let scale = BBox::of(&doc.curve.vertices()).map_or(1.0, |b| b.width().hypot(b.height()));
            let comps = components(&doc.curve, EPS * if scale > 0.0 { scale } else { 1.0 });
            let report = VerifyOutput {
                schema: SCHEMA,
                r: doc.r,
                coverage,
                components: comps,
                curve_length: curve_length(&doc.curve),
            };
            emit(out.as_deref(), &to_canonical_json(&report)?)?;
            let mut failed = Vec::new();
            if !coverage.ok {
                failed.push("coverage".to_string());
            }
            if comps != 1 {
                failed.push("connectivity".to_string());
            }
            Ok(failed)
        }
        Command::Svg { run } => {
            let l = load(run)?;
            let r = require_r(l.r)?;
            let result = run_pipeline(&l.set, r, options(run, false))?;
            emit(run.out.as_deref(), &render_svg(&l.set, &result, r))?;
            Ok(Vec::new())
        }
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("warning: {e}");
        }
    }
    match execute(&cli) {
        Ok(failed) if failed.is_empty() => ExitCode::SUCCESS,
        Ok(failed) => {
            for name in failed {
                eprintln!("check failed: {name}");
            }
            ExitCode::from(1)
        }
        Err(e @ CliError::Usage(_)) => {
            eprintln!("usage error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
