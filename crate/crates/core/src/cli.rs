//! The `cfx` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::attractor::{self, fixed_point, AttractorGrid, FiberSet};
use crate::catalog::{Builtin, FareyConjugated, ReferenceSheet};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::io::{self, AttractorDump, SystemSpec};
use crate::measure::{self, CloudForm, CloudRows, PointCloud};
use crate::mobius::PiecewiseSystem;
use crate::skew::{self, DualPoint, SkewPoint};
use crate::svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

/// Exit code for an error: 1 numerical failure, 2 structural refusal, 3 bad input.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Refused(_)
        | Error::NotExpanding { .. }
        | Error::UnboundedShift
        | Error::NoTailBound => EXIT_REFUSED,
        Error::Io(_)
        | Error::Json(_)
        | Error::BadCsv(_)
        | Error::BadInput(_)
        | Error::BadParameter(_)
        | Error::ZeroDeterminant
        | Error::PoleInDomain { .. }
        | Error::GridMismatch(_) => EXIT_CONFIG,
        _ => EXIT_FAILED,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cfx",
    version,
    about = "Natural extensions of continued fraction maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write an orbit of the natural extension as CSV.
    Orbit(OrbitArgs),
    /// Compute the invariant domain and write it as JSON.
    Attract(AttractArgs),
    /// Extract the normalized invariant density from an attractor dump.
    Density(DensityArgs),
    /// Run a numerical check; exit 1 if it fails.
    Verify(VerifyArgs),
    /// Monte-Carlo distribution of Gauss map iterates.
    GaussKuzmin(GaussKuzminArgs),
    /// Draw a CSV point cloud as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// Builtin name or path to a system JSON file.
    #[arg(long)]
    pub system: String,
    /// System parameter, e.g. `alpha=0.4`.
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long = "max-iter", default_value_t = 200)]
    pub max_iter: usize,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// skew, dual or hurwitz; defaults to hurwitz for the Hurwitz system and skew otherwise.
    #[arg(long)]
    pub form: Option<CloudForm>,
    #[arg(long, default_value_t = 20_000)]
    pub points: usize,
    #[arg(long, default_value_t = 100)]
    pub burn: usize,
    /// Seeds the starting point.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output CSV; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AttractArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Attractor JSON written by `attract`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Ruelle,
    Invariance,
    Disjointness,
    Conjugacy,
    Jacobian,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_enum)]
    pub check: Check,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Branch index bound for the Ruelle sum.
    #[arg(long, default_value_t = 10_000)]
    pub truncation: usize,
    /// Orbit points for the conjugacy and Jacobian checks.
    #[arg(long, default_value_t = 10_000)]
    pub points: usize,
    #[arg(long, default_value_t = 100)]
    pub burn: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GaussKuzminArgs {
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 20)]
    pub depth: usize,
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Point cloud CSV; the first two columns are plotted.
    #[arg(long)]
    pub input: PathBuf,
    /// Column used to color the points, e.g. `branch` or `digit`.
    #[arg(long)]
    pub color: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl clap::ValueEnum for CloudForm {
    fn value_variants<'a>() -> &'a [Self] {
        &[CloudForm::Skew, CloudForm::Dual, CloudForm::Hurwitz]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(match self {
            CloudForm::Skew => "skew",
            CloudForm::Dual => "dual",
            CloudForm::Hurwitz => "hurwitz",
        }))
    }
}

fn parse_param(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got {s}"))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| format!("{v} is not a number"))?;
    Ok((k.trim().to_string(), v))
}

impl SystemArgs {
    pub fn spec(&self) -> Result<SystemSpec> {
        let path = Path::new(&self.system);
        if self.system.ends_with(".json") || path.is_file() {
            if !self.params.is_empty() {
                return Err(Error::BadParameter(
                    "--param applies to builtin systems only".into(),
                ));
            }
            return SystemSpec::read(path);
        }
        Ok(SystemSpec::builtin(
            &self.system,
            self.params.iter().cloned().collect(),
        ))
    }
}

fn mobius(spec: &SystemSpec) -> Result<(PiecewiseSystem, ReferenceSheet)> {
    match spec.resolve()? {
        Builtin::Mobius(system, sheet) => Ok((system, sheet)),
        Builtin::FareyConjugated(map) => Err(Error::Refused(format!(
            "{} is not a Möbius system; only orbits and Ruelle checks are available",
            map.name()
        ))),
        Builtin::Hurwitz(_) => Err(Error::Refused(
            "hurwitz has two-dimensional fibers; only orbits are available".into(),
        )),
    }
}

/// Where a command writes its data and its human-readable summary.
struct Output {
    path: Option<PathBuf>,
}

impl Output {
    fn data(&self, bytes: &[u8]) -> Result<()> {
        match &self.path {
            Some(p) => io::write_bytes(p, bytes),
            None => {
                std::io::stdout().write_all(bytes)?;
                Ok(())
            }
        }
    }

    /// Summary lines go to stdout when data goes to a file, else to stderr.
    fn say(&self, line: &str) {
        if self.path.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Orbit(a) => cmd_orbit(&a),
        Command::Attract(a) => cmd_attract(&a),
        Command::Density(a) => cmd_density(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::GaussKuzmin(a) => cmd_gauss_kuzmin(&a),
        Command::Render(a) => cmd_render(&a),
    }
}

/// Parses arguments, sizes the thread pool from `CFX_THREADS`, runs, and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    if let Ok(n) = std::env::var("CFX_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: CFX_THREADS must be a positive integer, got {n:?}");
                return EXIT_CONFIG;
            }
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn orbit_cloud(
    spec: &SystemSpec,
    form: Option<CloudForm>,
    points: usize,
    burn: usize,
    seed: u64,
) -> Result<PointCloud> {
    let mut cloud = match spec.resolve()? {
        Builtin::Mobius(system, _) => {
            let x0 = measure::seeded_start(system.interval(), seed);
            match form.unwrap_or_default() {
                CloudForm::Skew => {
                    measure::skew_orbit(&system, SkewPoint::new(x0, 0.0), burn, points)?
                }
                CloudForm::Dual => {
                    measure::dual_orbit(&system, DualPoint::new(x0, 0.0), burn, points)?
                }
                CloudForm::Hurwitz => {
                    return Err(Error::BadInput(
                        "hurwitz form needs the hurwitz system".into(),
                    ))
                }
            }
        }
        Builtin::FareyConjugated(map) => {
            if form.is_some_and(|f| f != CloudForm::Skew) {
                return Err(Error::BadInput(format!(
                    "{} supports the skew form only",
                    map.name()
                )));
            }
            let range = if map.signed {
                Interval::new(-3.0, 3.0)
            } else {
                Interval::new(0.0, 3.0)
            };
            let u0 = measure::seeded_start(range, seed);
            measure::farey_conjugated_orbit(map, u0, burn, points)?
        }
        Builtin::Hurwitz(h) => {
            if form.is_some_and(|f| f != CloudForm::Hurwitz) {
                return Err(Error::BadInput(
                    "the hurwitz system supports the hurwitz form only".into(),
                ));
            }
            measure::hurwitz_orbit(h.start(seed), burn, points)?
        }
    };
    cloud.seed = Some(seed);
    Ok(cloud)
}

fn cmd_orbit(a: &OrbitArgs) -> Result<i32> {
    let spec = a.system.spec()?;
    let cloud = orbit_cloud(&spec, a.form, a.points, a.burn, a.seed)?;
    let out = Output {
        path: a.out.clone(),
    };
    out.data(&io::cloud_csv(&cloud)?)?;
    out.say(&format!(
        "{} points, form {}, burn {}, seed {}",
        cloud.len(),
        cloud.form,
        a.burn,
        a.seed
    ));
    if let Some([x0, x1, y0, y1]) = cloud.bounding_box() {
        out.say(&format!(
            "bounding box x [{x0:.6}, {x1:.6}] y [{y0:.6}, {y1:.6}]"
        ));
    }
    if let CloudRows::Hurwitz(rows) = &cloud.rows {
        let w = rows.iter().map(|r| r.w.norm()).fold(0.0, f64::max);
        out.say(&format!("max |w| = {w:.6}"));
    }
    let mut counts: Vec<(String, usize)> = cloud.label_counts().into_iter().collect();
    counts.sort_by(|p, q| q.1.cmp(&p.1).then_with(|| p.0.cmp(&q.0)));
    let shown: Vec<String> = counts
        .iter()
        .take(12)
        .map(|(k, n)| format!("{k}:{n}"))
        .collect();
    out.say(&format!(
        "branch usage ({} distinct): {}",
        counts.len(),
        shown.join(" ")
    ));
    Ok(EXIT_OK)
}

pub fn attract(
    spec: &SystemSpec,
    grid: &GridArgs,
) -> Result<(PiecewiseSystem, AttractorGrid, attractor::FixedPointReport)> {
    let (system, _) = mobius(spec)?;
    let diagnostics = system.validate();
    // indifferent points are refused by the engine with their own message
    if diagnostics.indifferent_points.is_empty() {
        if let Some(f) = diagnostics.failures.first() {
            return Err(Error::BadInput(format!(
                "{} fails validation: {f:?}",
                system.name()
            )));
        }
    }
    let (k, report) = fixed_point(&system, grid.grid, grid.tol, grid.max_iter)?;
    Ok((system, k, report))
}

fn cmd_attract(a: &AttractArgs) -> Result<i32> {
    let spec = a.system.spec()?;
    let (system, grid, report) = attract(&spec, &a.grid)?;
    let out = Output {
        path: a.out.clone(),
    };
    out.data(&io::to_json(&AttractorDump::new(
        spec,
        &grid,
        report.clone(),
    ))?)?;
    out.say(&format!(
        "{}: converged after {} iterations, final distance {:.3e}, k = {}, N = {}, m(K) = {:.6}",
        system.name(),
        report.iterations,
        report.final_distance,
        report.k,
        report.n,
        grid.mass()
    ));
    Ok(EXIT_OK)
}

fn cmd_density(a: &DensityArgs) -> Result<i32> {
    let dump = AttractorDump::read(&a.input)?;
    let grid = dump.grid()?;
    let profile = measure::density_profile(&grid, true)?;
    let out = Output {
        path: a.out.clone(),
    };
    out.data(&io::density_csv(&profile)?)?;
    out.say(&format!("Z = {}", io::fmt17(profile.z)));
    Ok(EXIT_OK)
}

fn cmd_gauss_kuzmin(a: &GaussKuzminArgs) -> Result<i32> {
    let (cdf, dev) = measure::gauss_kuzmin_experiment(a.samples, a.depth, a.bins, a.seed)?;
    let out = Output {
        path: a.out.clone(),
    };
    out.data(&io::cdf_csv(&cdf)?)?;
    let target = if a.depth == 0 { "x" } else { "log(1+x)/log 2" };
    out.say(&format!(
        "samples {}, depth {}, seed {}: sup |P - {target}| = {}",
        a.samples,
        a.depth,
        a.seed,
        io::fmt17(dev)
    ));
    Ok(EXIT_OK)
}

fn cmd_render(a: &RenderArgs) -> Result<i32> {
    let table = io::read_csv(&a.input)?;
    let plot = svg::Scatter::from_table(&table, a.color.as_deref())?;
    let out = Output {
        path: a.out.clone(),
    };
    out.data(svg::render(&plot).as_bytes())?;
    out.say(&format!("{} points", plot.x.len()));
    Ok(EXIT_OK)
}

/// One measured quantity against its tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub quantity: String,
    pub value: f64,
    pub tolerance: f64,
}

impl CheckResult {
    fn new(quantity: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            quantity: quantity.into(),
            value,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

/// Transfer-operator residual tolerance and branch level for systems with a
/// known density, given the requested truncation.
fn ruelle_budget(system: &PiecewiseSystem, truncation: usize) -> (f64, usize) {
    match system.name() {
        "gauss" => (2e-4, truncation),
        "chan-mult" => (1e-10, 40),
        "ralston" => {
            let n = truncation.max(1) as f64;
            (2.0 * (1.0 + n.ln()) / n, truncation)
        }
        _ if !system.is_countable() => (1e-12, 0),
        _ => (
            system.tail_bound(truncation).unwrap_or(f64::INFINITY),
            truncation,
        ),
    }
}

fn sample_points(interval: Interval, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| interval.lo + (i as f64 + 0.5) / n as f64 * interval.length())
        .collect()
}

/// Points on an orbit of the skew extension, used as attractor samples.
fn attractor_points(system: &PiecewiseSystem, a: &VerifyArgs) -> Result<Vec<SkewPoint>> {
    let x0 = measure::seeded_start(system.interval(), a.seed);
    let cloud = measure::skew_orbit(system, SkewPoint::new(x0, 0.0), a.burn, a.points)?;
    let CloudRows::Planar(rows) = cloud.rows else {
        unreachable!("skew orbits are planar")
    };
    Ok(rows.into_iter().map(|r| SkewPoint::new(r.x, r.y)).collect())
}

pub fn verify(spec: &SystemSpec, a: &VerifyArgs) -> Result<Vec<CheckResult>> {
    let builtin = spec.resolve()?;
    if let Builtin::FareyConjugated(map) = &builtin {
        if a.check != Check::Ruelle {
            return Err(Error::BadInput(format!(
                "{} supports the ruelle check only",
                map.name()
            )));
        }
        return Ok(vec![conjugated_ruelle(*map)?]);
    }
    let (system, sheet) = mobius(spec)?;
    Ok(match a.check {
        Check::Ruelle => {
            let density = sheet.density.ok_or_else(|| {
                Error::BadInput(format!("{} has no closed-form density", system.name()))
            })?;
            let (tol, level) = ruelle_budget(&system, a.truncation);
            let window = if sheet.finite_measure {
                system.interval()
            } else {
                Interval::new(0.05, 0.95)
            };
            let xs = sample_points(window, 100);
            let r = measure::max_ruelle_residual(&system, density, &xs, level)?;
            vec![CheckResult::new(
                format!("max Ruelle residual (level {level}, 100 points)"),
                r,
                tol,
            )]
        }
        Check::Invariance => {
            if !sheet.finite_measure {
                let fiber = sheet.fiber.ok_or_else(|| {
                    Error::BadInput(format!("{} has no closed-form domain", system.name()))
                })?;
                let xs = sample_points(Interval::new(0.05, 0.95), 100);
                let r = attractor::reference_residual(&system, 0, &xs, |x| {
                    let (lo, hi) = fiber(x);
                    FiberSet::interval(lo, hi)
                })?;
                vec![CheckResult::new(
                    "closed-form domain invariance residual",
                    r,
                    5e-3,
                )]
            } else {
                let (system, grid, report) = attract(spec, &a.grid)?;
                let r = attractor::invariance_residual(&system, &grid, report.n)?;
                vec![CheckResult::new("invariance residual", r, 5e-3)]
            }
        }
        Check::Disjointness => {
            let (system, grid, report) = attract(spec, &a.grid)?;
            let m = grid.mass();
            vec![
                CheckResult::new(
                    "image overlap",
                    attractor::image_overlap(&system, &grid, report.n)?,
                    1e-3 * m,
                ),
                CheckResult::new(
                    "surjectivity defect",
                    attractor::surjectivity_defect(&system, &grid, report.n)?,
                    1e-3 * m,
                ),
            ]
        }
        Check::Conjugacy => {
            let pts = attractor_points(&system, a)?;
            vec![CheckResult::new(
                "intertwining error",
                conjugacy_error(&system, &pts)?,
                1e-10,
            )]
        }
        Check::Jacobian => {
            let pts = attractor_points(&system, a)?;
            vec![CheckResult::new(
                "max |det - 1|",
                jacobian_error(&system, &pts)?,
                1e-5,
            )]
        }
    })
}

/// Lebesgue density `φ ≡ 1` of a conjugated Farey map on a truncated domain.
fn conjugated_ruelle(map: FareyConjugated) -> Result<CheckResult> {
    let range = if map.signed {
        Interval::new(-5.0, 5.0)
    } else {
        Interval::new(0.0, 5.0)
    };
    let xs = sample_points(range, 100);
    let r = measure::max_ruelle_residual(&map, |_| 1.0, &xs, 0)?;
    Ok(CheckResult::new(
        "max Ruelle residual of Lebesgue measure",
        r,
        1e-10,
    ))
}

/// `max |to_dual(T̃ p) - T̂(to_dual p)|`, relative to `max(1, |v|)`.
pub fn conjugacy_error(system: &PiecewiseSystem, points: &[SkewPoint]) -> Result<f64> {
    points.iter().try_fold(0.0f64, |acc, &p| {
        let (q, _) = skew::skew_step(system, p)?;
        let via_skew = skew::to_dual(q)?;
        let (via_dual, _) = skew::dual_step(system, skew::to_dual(p)?)?;
        let err = (via_skew.v - via_dual.v).abs() / via_dual.v.abs().max(1.0);
        Ok(acc.max(err).max((via_skew.x - via_dual.x).abs()))
    })
}

/// `max |det D T̃ - 1|` by central differences, using the branch that contains
/// each point. The `x` step is `1e-6` times the distance to the pole, capped
/// at `1e-6`; the map is affine in `y`, where a step of `1e-2` avoids
/// cancellation against the offset.
pub fn jacobian_error(system: &PiecewiseSystem, points: &[SkewPoint]) -> Result<f64> {
    points.iter().try_fold(0.0f64, |acc, &p| {
        let branch = system.branch_at(p.x)?;
        let c = branch.matrix()[2];
        let to_pole = if c == 0.0 {
            1.0
        } else {
            (branch.denominator(p.x) / c).abs()
        };
        let h = 1e-6 * to_pole.min(1.0);
        Ok(acc.max((skew::branch_jacobian(&branch, p, h, 1e-2) - 1.0).abs()))
    })
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let spec = a.system.spec()?;
    let results = verify(&spec, a)?;
    let mut ok = true;
    for r in &results {
        let verdict = if r.passed() { "pass" } else { "FAIL" };
        println!(
            "{}: {:.6e} (tolerance {:.1e}) {verdict}",
            r.quantity, r.value, r.tolerance
        );
        ok &= r.passed();
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}
