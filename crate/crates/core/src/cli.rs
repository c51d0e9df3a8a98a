//! Job runner behind the `qwind` binary: parse a JSON job, run it, render
//! JSON or CSV.
//!
//! Exit codes: 0 for a certified result, 2 when a result is not certified
//! (residual over threshold, failed check), 1 for errors. Errors are written
//! to standard error as `{"error": {"kind": …, "message": …}}`.

use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::curve::{check_omega_identities, Curve, DEFAULT_VALIDATION_GRID};
use crate::error::{CurveError, HomotopyError, RootsError, WindingError};
use crate::homotopy::{invariance_check, poincare_bohl_check, rouche_check, DEFAULT_PREDICATE_GRID};
use crate::input::{build_pair, companion, CurveSpec, DeformationSpec, DiscSpec, InputError, MapSpec, PolynomialSpec};
use crate::quadrature::QuadratureConfig;
use crate::quaternion::Quaternion;
use crate::roots::{brouwer_value_check, localize_roots, PreimageOutcome, RootEnclosure, SlicePlane};
use crate::winding::{symplectic_angular_function, symplectic_winding, winding_with_trace};

/// Identity residual bounds for analytic and finite-difference derivatives.
pub const IDENTITY_TOL_ANALYTIC: f64 = 1e-8;
pub const IDENTITY_TOL_NUMERIC: f64 = 1e-4;
pub const DEFAULT_ROOT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Wind,
    SymplecticWind,
    Identities,
    Homotopy,
    PoincareBohl,
    Rouche,
    Roots,
    Preimage,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Wind,
        Command::SymplecticWind,
        Command::Identities,
        Command::Homotopy,
        Command::PoincareBohl,
        Command::Rouche,
        Command::Roots,
        Command::Preimage,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Wind => "wind",
            Command::SymplecticWind => "symplectic-wind",
            Command::Identities => "identities",
            Command::Homotopy => "homotopy",
            Command::PoincareBohl => "poincare-bohl",
            Command::Rouche => "rouche",
            Command::Roots => "roots",
            Command::Preimage => "preimage",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(CliError::Usage(format!("unknown format `{s}` (expected json or csv)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputSource {
    Path(PathBuf),
    Inline(String),
    Stdin,
}

impl InputSource {
    /// `-` is standard input, text starting with `{` or `[` is inline JSON,
    /// anything else a path.
    pub fn from_arg(arg: &str) -> Self {
        let t = arg.trim_start();
        if arg == "-" {
            InputSource::Stdin
        } else if t.starts_with('{') || t.starts_with('[') {
            InputSource::Inline(arg.to_string())
        } else {
            InputSource::Path(PathBuf::from(arg))
        }
    }

    fn read(&self) -> Result<String, CliError> {
        match self {
            InputSource::Inline(s) => Ok(s.clone()),
            InputSource::Path(p) => fs::read_to_string(p).map_err(|e| CliError::Read {
                path: p.display().to_string(),
                message: e.to_string(),
            }),
            InputSource::Stdin => {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s).map_err(|e| CliError::Read {
                    path: "<stdin>".into(),
                    message: e.to_string(),
                })?;
                Ok(s)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub command: Command,
    pub input: InputSource,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    /// Override of `panels` in the job's quadrature settings.
    pub panels: Option<usize>,
    /// Override of `certification_threshold`.
    pub threshold: Option<f64>,
    /// Enclosure size for `roots` and `preimage`.
    pub tol: Option<f64>,
    /// Slice direction for `roots` and `preimage`.
    pub slice: Option<[f64; 3]>,
    /// Seed for the random slice used when none is given.
    pub seed: u64,
}

impl JobSpec {
    pub fn new(command: Command, input: InputSource) -> Self {
        Self {
            command,
            input,
            format: OutputFormat::Json,
            output: None,
            panels: None,
            threshold: None,
            tol: None,
            slice: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("cannot write {path}: {message}")]
    Write { path: String, message: String },
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid job at line {line}, column {column}: {message}")]
    Schema { line: usize, column: usize, message: String },
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Winding(#[from] WindingError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error(transparent)]
    Roots(#[from] RootsError),
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        let (line, column) = (e.line(), e.column());
        let message = e.to_string();
        if e.is_data() {
            CliError::Schema { line, column, message }
        } else {
            CliError::Parse { line, column, message }
        }
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Read { .. } => "read",
            CliError::Write { .. } => "write",
            CliError::Parse { .. } => "parse",
            CliError::Schema { .. } => "schema",
            CliError::Curve(_) | CliError::Input(InputError::Curve(_)) => "curve",
            CliError::Input(_) => "input",
            CliError::Winding(WindingError::CurvesIntersect { .. })
            | CliError::Homotopy(HomotopyError::CurvesIntersect { .. }) => "curves_intersect",
            CliError::Winding(WindingError::NotClosed { .. }) => "not_closed",
            CliError::Winding(_) => "winding",
            CliError::Homotopy(_) => "homotopy",
            CliError::Roots(RootsError::ImageHitsTarget { .. }) => "image_hits_target",
            CliError::Roots(RootsError::ContourStuck { .. }) => "contour_stuck",
            CliError::Roots(_) => "roots",
        }
    }

    /// `{"error": {"kind", "message", …}}` with positions and witnesses where known.
    pub fn to_json(&self) -> Value {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        let extra = match self {
            CliError::Parse { line, column, .. } | CliError::Schema { line, column, .. } => {
                json!({ "line": line, "column": column })
            }
            CliError::Winding(WindingError::CurvesIntersect { t, distance }) => json!({ "t": t, "distance": distance }),
            CliError::Homotopy(HomotopyError::CurvesIntersect { alpha, t, distance }) => {
                json!({ "alpha": alpha, "t": t, "distance": distance })
            }
            CliError::Winding(WindingError::NotClosed { which, gap }) => json!({ "which": which, "gap": gap }),
            CliError::Roots(RootsError::ContourStuck { re, im, radius }) => {
                json!({ "re": re, "im": im, "radius": radius })
            }
            _ => Value::Null,
        };
        if let (Value::Object(b), Value::Object(e)) = (&mut body, extra) {
            b.extend(e);
        }
        json!({ "error": body })
    }
}

/// Tabular data written by `--format csv`.
#[derive(Debug, Clone, PartialEq)]
pub enum PlotData {
    /// `t,x0,x1,x2,x3`
    Curve(Vec<(f64, Quaternion)>),
    /// `t,theta`
    Angular(Vec<(f64, f64)>),
    /// `slice_u1,slice_u2,slice_u3,re,im,radius,winding`
    Enclosures(Vec<RootEnclosure>),
    Table { header: Vec<&'static str>, rows: Vec<Vec<f64>> },
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write `data` as CSV with a header row and 17 significant digits.
pub fn emit_plot_data<W: Write>(data: &PlotData, mut w: W) -> io::Result<()> {
    match data {
        PlotData::Curve(rows) => {
            writeln!(w, "t,x0,x1,x2,x3")?;
            for (t, q) in rows {
                writeln!(w, "{},{},{},{},{}", num(*t), num(q.x0), num(q.x1), num(q.x2), num(q.x3))?;
            }
        }
        PlotData::Angular(rows) => {
            writeln!(w, "t,theta")?;
            for (t, th) in rows {
                writeln!(w, "{},{}", num(*t), num(*th))?;
            }
        }
        PlotData::Enclosures(list) => {
            writeln!(w, "slice_u1,slice_u2,slice_u3,re,im,radius,winding")?;
            for e in list {
                let [u1, u2, u3] = e.slice.direction();
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    num(u1),
                    num(u2),
                    num(u3),
                    num(e.center.0),
                    num(e.center.1),
                    num(e.radius),
                    e.winding
                )?;
            }
        }
        PlotData::Table { header, rows } => {
            writeln!(w, "{}", header.join(","))?;
            for r in rows {
                let cells: Vec<String> = r.iter().map(|x| num(*x)).collect();
                writeln!(w, "{}", cells.join(","))?;
            }
        }
    }
    w.flush()
}

/// [`emit_plot_data`] into a file.
pub fn write_plot_data(data: &PlotData, path: &Path) -> Result<(), CliError> {
    let err = |e: io::Error| CliError::Write { path: path.display().to_string(), message: e.to_string() };
    let f = fs::File::create(path).map_err(err)?;
    emit_plot_data(data, io::BufWriter::new(f)).map_err(err)
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobOutput {
    pub json: Value,
    pub plot: PlotData,
    pub certified: bool,
}

impl JobOutput {
    pub fn exit_code(&self) -> i32 {
        if self.certified {
            0
        } else {
            2
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WindJob {
    curve: CurveSpec,
    #[serde(default)]
    reference: Option<CurveSpec>,
    /// Orientation of the starting frame, a pure imaginary direction.
    #[serde(default)]
    orientation: Option<[f64; 3]>,
    #[serde(default)]
    quadrature: Option<QuadratureConfig>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IdentitiesJob {
    curve: CurveSpec,
    #[serde(default = "default_identity_samples")]
    samples: usize,
}

fn default_identity_samples() -> usize {
    DEFAULT_VALIDATION_GRID
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HomotopyJob {
    #[serde(flatten)]
    deformation: DeformationSpec,
    #[serde(default)]
    quadrature: Option<QuadratureConfig>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairJob {
    p: CurveSpec,
    q: CurveSpec,
    #[serde(default)]
    reference: Option<CurveSpec>,
    #[serde(default = "default_predicate_grid")]
    grid: usize,
    #[serde(default)]
    quadrature: Option<QuadratureConfig>,
}

fn default_predicate_grid() -> usize {
    DEFAULT_PREDICATE_GRID
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RootsJob {
    #[serde(flatten)]
    polynomial: PolynomialSpec,
    #[serde(default)]
    tol: Option<f64>,
    #[serde(default)]
    quadrature: Option<QuadratureConfig>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PreimageJob {
    #[serde(flatten)]
    map: MapSpec,
    target: Quaternion,
    disc: DiscSpec,
    #[serde(default)]
    tol: Option<f64>,
    #[serde(default)]
    quadrature: Option<QuadratureConfig>,
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    Ok(serde_json::from_str(text)?)
}

fn quadrature(spec: &JobSpec, from_job: Option<QuadratureConfig>) -> Result<QuadratureConfig, CliError> {
    let mut q = from_job.unwrap_or_default();
    if let Some(p) = spec.panels {
        q.panels = p;
    }
    if let Some(t) = spec.threshold {
        q.certification_threshold = t;
    }
    q.validate()?;
    Ok(q)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

/// A random unit direction drawn from `seed`.
fn random_slice(seed: u64) -> SlicePlane {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n2 = v.iter().map(|x| x * x).sum::<f64>();
        if n2 > 1e-4 && n2 <= 1.0 {
            return SlicePlane::new(v).expect("nonzero direction");
        }
    }
}

fn resolve_slice(spec: &JobSpec, poly: &PolynomialSpec) -> Result<SlicePlane, CliError> {
    match poly.slice(spec.slice) {
        Some(s) => Ok(s?),
        None => Ok(random_slice(spec.seed)),
    }
}

fn resolve_tol(spec: &JobSpec, job: Option<f64>) -> f64 {
    spec.tol.or(job).unwrap_or(DEFAULT_ROOT_TOL)
}

fn wind_pair(job: &WindJob) -> Result<(Curve, Curve), CliError> {
    let reference = job.reference.clone().or_else(|| companion(&job.curve));
    Ok(build_pair(&job.curve, reference.as_ref())?)
}

/// Run a job without writing anything.
pub fn run(spec: &JobSpec) -> Result<JobOutput, CliError> {
    let text = spec.input.read()?;
    match spec.command {
        Command::Wind => {
            let job: WindJob = parse(&text)?;
            let quad = quadrature(spec, job.quadrature)?;
            let (q, p0) = wind_pair(&job)?;
            let orientation = job.orientation.map(Quaternion::pure);
            let (result, trace) = winding_with_trace(&q, &p0, &quad, orientation)?;
            Ok(JobOutput {
                json: to_value(&result),
                plot: PlotData::Angular(trace.grid().to_vec()),
                certified: result.certified,
            })
        }
        Command::SymplecticWind => {
            let job: WindJob = parse(&text)?;
            let quad = quadrature(spec, job.quadrature)?;
            let (q, p0) = wind_pair(&job)?;
            let result = symplectic_winding(&q, &p0, &quad)?;
            let trace = symplectic_angular_function(&q, &p0, &quad)?;
            Ok(JobOutput {
                json: to_value(&result),
                plot: PlotData::Angular(trace.grid().to_vec()),
                certified: result.winding.certified,
            })
        }
        Command::Identities => {
            let job: IdentitiesJob = parse(&text)?;
            if job.samples < 2 {
                return Err(CliError::Usage("samples must be at least 2".into()));
            }
            let x = job.curve.build(None)?;
            let grid = x.domain().linspace(job.samples);
            let report = check_omega_identities(&x, &grid)?;
            let tolerance = if x.has_analytic_second_derivative() {
                IDENTITY_TOL_ANALYTIC
            } else {
                IDENTITY_TOL_NUMERIC
            };
            let pass = report.max_residual() < tolerance;
            Ok(JobOutput {
                json: json!({ "report": report, "max_residual": report.max_residual(), "tolerance": tolerance, "pass": pass }),
                plot: PlotData::Curve(x.sample(job.samples)),
                certified: pass,
            })
        }
        Command::Homotopy => {
            let job: HomotopyJob = parse(&text)?;
            let quad = quadrature(spec, job.quadrature)?;
            let (d, r) = job.deformation.build()?;
            let report = invariance_check(&d, &r, &job.deformation.alphas(), &quad)?;
            let rows = report
                .alphas
                .iter()
                .zip(&report.turns)
                .zip(&report.residuals)
                .map(|((a, t), r)| vec![*a, *t as f64, *r])
                .collect();
            Ok(JobOutput {
                json: to_value(&report),
                plot: PlotData::Table { header: vec!["alpha", "turns", "residual"], rows },
                certified: report.pass,
            })
        }
        Command::PoincareBohl | Command::Rouche => {
            let job: PairJob = parse(&text)?;
            let quad = quadrature(spec, job.quadrature)?;
            let p = job.p.build(None)?;
            let q = job.q.build(Some(p.domain()))?;
            let p0 = match &job.reference {
                Some(r) => r.build(Some(p.domain()))?,
                None => crate::curve::constant(p.domain(), Quaternion::ZERO),
            };
            let grid = p.domain().linspace(job.grid + 1);
            if spec.command == Command::PoincareBohl {
                let report = poincare_bohl_check(&p, &q, &p0, job.grid, &quad)?;
                let rows = grid
                    .iter()
                    .map(|&t| {
                        let (a, b, z) = (p.eval(t) - p0.eval(t), q.eval(t) - p0.eval(t), Quaternion::ZERO);
                        vec![t, segment_gap(a, b, z)]
                    })
                    .collect();
                Ok(JobOutput {
                    json: to_value(&report),
                    plot: PlotData::Table { header: vec!["t", "segment_distance"], rows },
                    certified: report.rp.certified && report.rq.certified && report.conclusion != Some(false),
                })
            } else {
                let report = rouche_check(&p, &q, &p0, job.grid, &quad)?;
                let rows = grid
                    .iter()
                    .map(|&t| {
                        let (x, y, z) = (p.eval(t), q.eval(t), p0.eval(t));
                        vec![t, (x - y).norm(), (y - z).norm(), (x - z).norm()]
                    })
                    .collect();
                Ok(JobOutput {
                    json: to_value(&report),
                    plot: PlotData::Table { header: vec!["t", "p_minus_q", "q_minus_p0", "p_minus_p0"], rows },
                    certified: report.rp.certified && report.rq.certified && report.conclusion != Some(false),
                })
            }
        }
        Command::Roots => {
            let job: RootsJob = parse(&text)?;
            let quad = quadrature(spec, job.quadrature)?;
            let f = job.polynomial.polynomial()?;
            let slice = resolve_slice(spec, &job.polynomial)?;
            let enclosures = localize_roots(&f, &slice, resolve_tol(spec, job.tol), &quad)?;
            Ok(JobOutput {
                json: to_value(&enclosures),
                plot: PlotData::Enclosures(enclosures),
                certified: true,
            })
        }
        Command::Preimage => {
            let job: PreimageJob = parse(&text)?;
            let quad = quadrature(spec, job.quadrature)?;
            let tol = resolve_tol(spec, job.tol);
            let (c, r) = ((job.disc.center[0], job.disc.center[1]), job.disc.radius);
            let outcome = match &job.map {
                MapSpec::Polynomial(p) => {
                    let f = p.polynomial()?;
                    let slice = resolve_slice(spec, p)?;
                    if !f.centered_in(&slice) {
                        return Err(RootsError::NonSliceCenter.into());
                    }
                    brouwer_value_check(&f, &slice, job.target, c, r, tol, &quad)?
                }
                MapSpec::Grid(g) => brouwer_value_check(g, &g.slice.clone(), job.target, c, r, tol, &quad)?,
            };
            let enclosures = match &outcome {
                PreimageOutcome::Found { enclosures, .. } => enclosures.clone(),
                PreimageOutcome::NotApplicable { .. } => Vec::new(),
            };
            Ok(JobOutput {
                json: to_value(&outcome),
                plot: PlotData::Enclosures(enclosures),
                certified: true,
            })
        }
    }
}

fn segment_gap(a: Quaternion, b: Quaternion, z: Quaternion) -> f64 {
    let (a, b) = (a - z, b - z);
    let d = b - a;
    let dd = d.norm_sqr();
    if dd == 0.0 {
        return a.norm();
    }
    let s = (-a.inner(d) / dd).clamp(0.0, 1.0);
    (a + d.scale(s)).norm()
}

fn render(spec: &JobSpec, out: &JobOutput) -> Result<Vec<u8>, CliError> {
    match spec.format {
        OutputFormat::Json => {
            let mut s = serde_json::to_vec_pretty(&out.json).expect("plain data serializes");
            s.push(b'\n');
            Ok(s)
        }
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            emit_plot_data(&out.plot, &mut buf).expect("writing to memory");
            Ok(buf)
        }
    }
}

fn write_output(spec: &JobSpec, bytes: &[u8]) -> Result<(), CliError> {
    match &spec.output {
        Some(path) => fs::write(path, bytes).map_err(|e| CliError::Write {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Write { path: "<stdout>".into(), message: e.to_string() })
        }
    }
}

/// Run, write the result and return the process exit code. Errors go to
/// standard error as JSON.
pub fn execute(spec: &JobSpec) -> i32 {
    let outcome = run(spec).and_then(|out| {
        let bytes = render(spec, &out)?;
        write_output(spec, &bytes)?;
        Ok(out.exit_code())
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            report_error(&e);
            1
        }
    }
}

/// Print `{"error": …}` on standard error.
pub fn report_error(e: &CliError) {
    let _ = writeln!(io::stderr().lock(), "{}", e.to_json());
}
