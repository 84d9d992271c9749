//! Batch front end: `quadfam <subcommand> [flags]`.
//!
//! Human-readable text goes to standard output; `--out FILE` writes the
//! machine report as JSON or CSV, chosen by extension. Exit codes: 0 on
//! success, 2 when the mathematics fails (rejected family, no fiber point,
//! torsion-only fibers, failed verification), 1 on I/O and parse errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::conics::{find_point, PointSearch};
use crate::counting::{census, CountingError};
use crate::exact::{ExactError, Rational};
use crate::multisection::{
    bertini_multisection, doubling_multisection_with, extension_multisection, verify_any, AnyMultiSection,
    DoublingOptions, MultisectionError, QuarticFamily, SurfaceModel, VerificationReport,
};
use crate::rank1::{rank_one_family, torsion_fiber_scan, Certificate, Rank1Error, RankOneFamily};
use crate::surface::{conic_bundle_view, detect_degenerations, model_form_checks, FamilyError, QuadraticFamily};

#[derive(Debug, Parser)]
#[command(name = "quadfam", version, about = "Exact computations on quadratic families of elliptic curves")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the machine-readable report here (`.json` or `.csv`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for counting and per-u certification.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validation, conic bundle view, degenerations and model-form checks.
    Classify { family: PathBuf },
    /// Multisection of a quartic family from the second point at infinity.
    Bertini { quartic: PathBuf },
    /// Doubling multisection from a point on a fiber conic.
    Multisection {
        family: PathBuf,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        fiber: Rational,
        #[arg(long, default_value_t = 100)]
        search_bound: u64,
        /// Fall back to a point over a quadratic field when the fiber has no
        /// rational point.
        #[arg(long)]
        allow_extension: bool,
        #[arg(long, default_value_t = crate::multisection::DEFAULT_FALLBACK_LIMIT)]
        fallback_limit: usize,
    },
    /// Curves of rank at least one through a surface point.
    Rank1 {
        family: PathBuf,
        /// `x,y,t`; searched along fibers when omitted.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, default_value_t = -20, allow_hyphen_values = true)]
        u_min: i64,
        #[arg(long, default_value_t = 20, allow_hyphen_values = true)]
        u_max: i64,
        #[arg(long, default_value_t = 100)]
        search_bound: u64,
    },
    /// Points of bounded height.
    Count {
        family: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16")]
        heights: Vec<u64>,
        /// Fibers `x` left out of the count.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        exclude: Vec<Rational>,
        /// Include the per-fiber breakdown.
        #[arg(long)]
        per_fiber: bool,
    },
    /// Re-verify a serialized multisection against a family.
    Verify {
        family: PathBuf,
        section: PathBuf,
        /// The family file holds a quartic model.
        #[arg(long)]
        quartic: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("I/O error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported output: {0}")]
    Output(String),
    #[error("family rejected: {0}")]
    Family(#[from] FamilyError),
    #[error("multisection: {0}")]
    Multisection(#[from] MultisectionError),
    #[error("rank1: {0}")]
    Rank1(#[from] Rank1Error),
    #[error("counting: {0}")]
    Counting(#[from] CountingError),
    #[error("verification failed")]
    VerificationFailed,
    #[error("no usable surface point found on fibers {0:?}")]
    NoSurfacePoint(Vec<Rational>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) | CliError::Output(_) => 1,
            CliError::Multisection(MultisectionError::Parse(_)) => 1,
            _ => 2,
        }
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        CliError::Parse(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum OutFormat {
    Json,
    Csv,
}

fn out_format(path: &Path) -> Result<OutFormat, CliError> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Ok(OutFormat::Json),
        Some("csv") => Ok(OutFormat::Csv),
        _ => Err(CliError::Output(format!("{} must end in .json or .csv", path.display()))),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Machine output of one subcommand.
struct Report {
    text: String,
    json: Value,
    csv: Option<Vec<Vec<String>>>,
    failure: Option<CliError>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// Parses arguments already collected by clap and runs the command.
/// Returns the process exit code.
pub fn run(config: RunConfig) -> i32 {
    match execute(&config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(config: &RunConfig) -> Result<(), CliError> {
    let format = config.out.as_deref().map(out_format).transpose()?;
    let csv_capable = matches!(config.command, Command::Count { .. } | Command::Rank1 { .. });
    if format == Some(OutFormat::Csv) && !csv_capable {
        return Err(CliError::Output("CSV output is available for count and rank1 only".into()));
    }
    if let Command::Count { heights, .. } = &config.command {
        if heights.is_empty() || heights[0] == 0 || heights.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Parse("--heights must be positive and strictly increasing".into()));
        }
    }
    if let Command::Rank1 { u_min, u_max, .. } = &config.command {
        if u_min > u_max {
            return Err(CliError::Parse("--u-min exceeds --u-max".into()));
        }
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = config.jobs {
        if j == 0 {
            return Err(CliError::Parse("--jobs must be positive".into()));
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| CliError::Output(e.to_string()))?;
    let report = pool.install(|| dispatch(&config.command))?;
    print!("{}", report.text);
    if let (Some(path), Some(format)) = (&config.out, format) {
        let body = match format {
            OutFormat::Json => serde_json::to_string_pretty(&report.json).expect("json") + "\n",
            OutFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in report.csv.as_deref().unwrap_or_default() {
                    w.write_record(row).map_err(|e| CliError::Output(e.to_string()))?;
                }
                String::from_utf8(w.into_inner().map_err(|e| CliError::Output(e.to_string()))?).expect("utf8")
            }
        };
        fs::write(path, body).map_err(|source| CliError::Io { path: path.clone(), source })?;
    }
    match report.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn dispatch(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Classify { family } => classify(&read_json(family)?),
        Command::Bertini { quartic } => bertini(&read_json(quartic)?),
        Command::Multisection { family, fiber, search_bound, allow_extension, fallback_limit } => {
            let opts = DoublingOptions { height_bound: *search_bound, fallback_limit: *fallback_limit, ..Default::default() };
            multisection(&read_json(family)?, fiber, &opts, *allow_extension)
        }
        Command::Rank1 { family, point, u_min, u_max, search_bound } => {
            let point = point.as_deref().map(parse_point).transpose()?;
            rank1(&read_json(family)?, point, *u_min..=*u_max, *search_bound)
        }
        Command::Count { family, heights, exclude, per_fiber } => count(&read_json(family)?, heights, exclude, *per_fiber),
        Command::Verify { family, section, quartic } => {
            let model = if *quartic {
                SurfaceModel::Quartic(read_json::<QuarticFamily>(family)?)
            } else {
                SurfaceModel::Cubic(read_json::<QuadraticFamily>(family)?)
            };
            verify(&model, &read(section)?)
        }
    }
}

fn parse_point(s: &str) -> Result<(Rational, Rational, Rational), CliError> {
    let parts: Vec<Rational> = s.split(',').map(str::parse).collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [x, y, t] => Ok((x.clone(), y.clone(), t.clone())),
        _ => Err(CliError::Parse(format!("--point expects x,y,t, got {s:?}"))),
    }
}

fn classify(f: &QuadraticFamily) -> Result<Report, CliError> {
    let validation = f.check();
    let view = conic_bundle_view(f);
    let degen = detect_degenerations(f);
    let forms = model_form_checks(f);
    let mut text = String::new();
    match &validation {
        Ok(()) => writeln!(text, "validation: ok").unwrap(),
        Err(e) => writeln!(text, "validation: rejected ({e})").unwrap(),
    }
    writeln!(text, "A(x) = {}", view.a.to_text("x")).unwrap();
    writeln!(text, "B(x) = {}", view.b.to_text("x")).unwrap();
    writeln!(text, "C(x) = {}", view.c.to_text("x")).unwrap();
    writeln!(text, "Delta(x) = {}", view.discriminant.to_text("x")).unwrap();
    match (view.delta, view.degree) {
        (Some(d), Some(k)) => writeln!(text, "singular fibers: {d}, degree: {k}").unwrap(),
        _ => writeln!(text, "singular fibers: undefined (Delta vanishes identically)").unwrap(),
    }
    for w in &view.warnings {
        writeln!(text, "warning: {w}").unwrap();
    }
    writeln!(text, "degeneration: {}", serde_json::to_string(&degen).unwrap()).unwrap();
    for c in &forms.checks {
        writeln!(text, "check {}: {}", c.condition, if c.passed { "pass" } else { "fail" }).unwrap();
    }
    writeln!(text, "model form: {:?}", forms.form).unwrap();
    let json = json!({
        "family": to_value(f),
        "validation": validation.as_ref().map(|_| "ok".to_string()).unwrap_or_else(|e| e.to_string()),
        "conic_bundle": to_value(&view),
        "degenerations": to_value(&degen),
        "model_form": to_value(&forms),
    });
    Ok(Report { text, json, csv: None, failure: validation.err().map(CliError::from) })
}

fn verification_text(rep: &VerificationReport) -> String {
    let mut text = String::new();
    writeln!(text, "identity: {}", if rep.identity_holds { "exact" } else { "FAILED" }).unwrap();
    if let Some(r) = &rep.residue {
        writeln!(text, "residue: {r}").unwrap();
    }
    writeln!(text, "x nonconstant: {}", rep.nonconstant).unwrap();
    writeln!(text, "degree: {} (stored value matches: {})", rep.recomputed_degree, rep.degree_matches).unwrap();
    let on = rep.samples.iter().filter(|s| s.on_surface).count();
    writeln!(text, "samples on surface: {on}/{}", rep.samples.len()).unwrap();
    writeln!(text, "verified: {}", rep.passed).unwrap();
    text
}

fn bertini(q: &QuarticFamily) -> Result<Report, CliError> {
    let b = bertini_multisection(q)?;
    let rep = crate::multisection::verify_multisection(&SurfaceModel::Quartic(q.clone()), &b.section);
    let mut text = String::new();
    writeln!(text, "x(u) = {}", b.section.x_of.to_text("u")).unwrap();
    writeln!(text, "z(u) = {}", b.section.z_of.to_text("u")).unwrap();
    writeln!(
        text,
        "unreduced numerator degree {:?}, denominator degree {:?}",
        b.unreduced_num.degree(),
        b.unreduced_den.degree()
    )
    .unwrap();
    text += &verification_text(&rep);
    let json = json!({
        "section": to_value(&b.section),
        "unreduced_num": b.unreduced_num.to_text("u"),
        "unreduced_den": b.unreduced_den.to_text("u"),
        "numerator_degree": b.unreduced_num.degree(),
        "denominator_degree": b.unreduced_den.degree(),
        "verification": to_value(&rep),
    });
    let failure = (!rep.passed).then_some(CliError::VerificationFailed);
    Ok(Report { text, json, csv: None, failure })
}

fn multisection(
    f: &QuadraticFamily,
    x0: &Rational,
    opts: &DoublingOptions,
    allow_extension: bool,
) -> Result<Report, CliError> {
    let model = SurfaceModel::Cubic(f.clone());
    let (section, trace, fiber_x, multiplier) = match doubling_multisection_with(f, x0, opts) {
        Ok(o) => (AnyMultiSection::Rational(o.section), o.trace, o.fiber_x, o.multiplier),
        Err(MultisectionError::NoFiberPoint { .. }) if allow_extension => {
            let o = extension_multisection(f, x0)?;
            (AnyMultiSection::Extension(o.section), o.trace, o.fiber_x, o.multiplier)
        }
        Err(e) => return Err(e.into()),
    };
    let rep = verify_any(&model, &section);
    let (x, z, u, field, degree) = match &section {
        AnyMultiSection::Rational(m) => (m.x_of.to_text("s"), m.z_of.to_text("s"), m.u_of.to_text("s"), m.field.to_string(), m.base_degree),
        AnyMultiSection::Extension(m) => (m.x_of.to_text("s"), m.z_of.to_text("s"), m.u_of.to_text("s"), m.field.to_string(), m.base_degree),
    };
    let mut text = String::new();
    for a in &trace {
        writeln!(text, "fiber x = {}: {:?} (x(2P) = {})", a.x0, a.branch, a.x71.to_text("u")).unwrap();
    }
    writeln!(text, "doubled fiber x = {fiber_x}, multiplier {multiplier}, field {field}").unwrap();
    writeln!(text, "x(s) = {x}\nz(s) = {z}\nu(s) = {u}\ndegree = {degree}").unwrap();
    text += &verification_text(&rep);
    let json = json!({
        "section": serde_json::from_str::<Value>(&section.to_json()).expect("json"),
        "fiber": fiber_x,
        "multiplier": multiplier,
        "trace": to_value(&trace),
        "verification": to_value(&rep),
    });
    let failure = (!rep.passed).then_some(CliError::VerificationFailed);
    Ok(Report { text, json, csv: None, failure })
}

// First fiber x = 0, 1, -1, ... that is not a torsion fiber and has a
// smooth conic with a rational point.
fn search_point(f: &QuadraticFamily, bound: u64) -> Result<(Rational, Rational, Rational), CliError> {
    let xs: Vec<Rational> = (0..10i64).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] }).map(Rational::from).collect();
    let torsion: Vec<Rational> = torsion_fiber_scan(f, &xs).into_iter().map(|t| t.x0).collect();
    for x0 in xs.iter().filter(|x| !torsion.contains(x)) {
        let conic = f.fiber_conic(x0);
        if !conic.is_smooth() {
            continue;
        }
        if let PointSearch::Found { y, t } = find_point(&conic, bound) {
            return Ok((x0.clone(), y, t));
        }
    }
    Err(CliError::NoSurfacePoint(xs))
}

fn rank1_rows(fam: &RankOneFamily) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["u", "t", "x", "y", "certificate"].into_iter().map(String::from).collect()];
    let mut all: Vec<_> = fam.samples.iter().chain(&fam.exceptions).collect();
    all.sort_by(|a, b| a.u.cmp(&b.u));
    for s in all {
        let cert = match &s.certificate {
            Certificate::NonTorsion => "non_torsion".to_string(),
            Certificate::Torsion { order } => format!("torsion_{order}"),
            Certificate::Defect { defect } => format!("{defect:?}").to_lowercase(),
            Certificate::Pole => "pole".to_string(),
        };
        let opt = |v: &Option<Rational>| v.as_ref().map(Rational::to_string).unwrap_or_default();
        rows.push(vec![s.u.to_string(), opt(&s.t), s.x.to_string(), opt(&s.y), cert]);
    }
    rows
}

fn rank1(
    f: &QuadraticFamily,
    point: Option<(Rational, Rational, Rational)>,
    u_range: std::ops::RangeInclusive<i64>,
    bound: u64,
) -> Result<Report, CliError> {
    let (x0, y0, t0) = match point {
        Some(p) => p,
        None => search_point(f, bound)?,
    };
    let fam = rank_one_family(f, (&x0, &y0, &t0), u_range)?;
    let rows = rank1_rows(&fam);
    let mut text = String::new();
    writeln!(text, "point (x, y, t) = ({x0}, {y0}, {t0})").unwrap();
    writeln!(text, "t = q(u) = {}", fam.q_of.to_text("u")).unwrap();
    writeln!(text, "y(u) = {}", fam.y_of.to_text("u")).unwrap();
    writeln!(text, "identity y(u)^2 = rhs(x0, q(u)): {}", fam.identity_holds).unwrap();
    writeln!(text, "certified (no n <= 12 with nP = O): {}", fam.samples.len()).unwrap();
    writeln!(text, "exceptions: {}", fam.exceptions.len()).unwrap();
    for row in &rows[1..] {
        writeln!(text, "  u = {:>4}  t = {:<14} y = {:<14} {}", row[0], row[1], row[3], row[4]).unwrap();
    }
    let failure = (!fam.identity_holds).then_some(CliError::VerificationFailed);
    Ok(Report { text, json: to_value(&fam), csv: Some(rows), failure })
}

fn count(f: &QuadraticFamily, heights: &[u64], exclude: &[Rational], per_fiber: bool) -> Result<Report, CliError> {
    let c = census(f, heights, exclude)?;
    let slope = c.fitted_epsilon.map(|s| format!("{s:.6}")).unwrap_or_default();
    let mut rows = vec![vec!["B".to_string(), "N".to_string(), "slope".to_string()]];
    let mut text = String::new();
    writeln!(text, "{:>6} {:>10}", "B", "N").unwrap();
    for (b, n) in c.b_values.iter().zip(&c.counts) {
        rows.push(vec![b.to_string(), n.to_string(), slope.clone()]);
        writeln!(text, "{b:>6} {n:>10}").unwrap();
    }
    writeln!(text, "log-log slope: {}", if slope.is_empty() { "n/a" } else { &slope }).unwrap();
    let mut json = json!({ "B": c.b_values, "N": c.counts, "slope": c.fitted_epsilon });
    if per_fiber {
        for (x, n) in &c.per_fiber {
            writeln!(text, "  x = {x}: {n}").unwrap();
        }
        json["per_fiber"] = to_value(&c.per_fiber);
    }
    Ok(Report { text, json, csv: Some(rows), failure: None })
}

fn verify(model: &SurfaceModel, section_text: &str) -> Result<Report, CliError> {
    // accept a bare section or a report carrying one under "section"
    let value: Value = serde_json::from_str(section_text).map_err(|e| CliError::Parse(e.to_string()))?;
    let inner = value.get("section").cloned().unwrap_or(value);
    let section = AnyMultiSection::from_json(&inner.to_string()).map_err(|e| CliError::Parse(e.to_string()))?;
    let rep = verify_any(model, &section);
    let failure = (!rep.passed).then_some(CliError::VerificationFailed);
    Ok(Report { text: verification_text(&rep), json: to_value(&rep), csv: None, failure })
}
