//! The `spacelab-iqa` command line.
//!
//! Exit codes: 0 success, 1 usage, 2 validation, 3 I/O, 4 analysis.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{self, AnalysisError};
use crate::catalog::{self, CatalogError, Constraint, Direction, RangeRule};
use crate::dataset::{load_manifest, validate, DatasetError};
use crate::exposure::{parse_shutter, ExposureTuple};
use crate::fixtures::FixtureSet;
use crate::report::{self, fmt_num};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_ANALYSIS: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "spacelab-iqa", version, about = "Image quality analysis for space-lab equipment selection")]
pub struct Cli {
    /// Worker threads for per-capture metrics (default: all cores).
    #[arg(long, global = true, env = "SPACELAB_IQA_JOBS")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a capture manifest and print the findings.
    IngestValidate { manifest: PathBuf },
    /// Score backgrounds against a black reference and write reports.
    BackgroundRank(AnalysisArgs),
    /// Build MS-SSIM degradation curves over an exposure sweep.
    ExposureCurve(AnalysisArgs),
    /// Exposure value of an aperture / shutter / ISO setting.
    Ev {
        /// f-number, e.g. 2 or 2.8
        #[arg(long)]
        aperture: f64,
        /// Seconds, as a decimal or 1/N
        #[arg(long)]
        shutter: String,
        #[arg(long, default_value_t = 100.0)]
        iso: f64,
    },
    /// Rank and filter an equipment catalog.
    Catalog(CatalogArgs),
    /// Write synthetic images and a ready manifest.
    Fixtures {
        /// background-suite[:WxH], exposure-sweep[:WxH] or a scene such as composite:42:256x256
        #[arg(long)]
        spec: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct AnalysisArgs {
    pub manifest: PathBuf,
    /// Reports go to <out>/<experiment id>/
    #[arg(long, default_value = "reports")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Catalog CSV file
    pub file: PathBuf,
    /// Column to sort by
    #[arg(long)]
    pub rank_by: Option<String>,
    /// Sort descending
    #[arg(long)]
    pub desc: bool,
    /// Constraint such as power_w<=100 or vendor=KOYO; repeatable, all must hold
    #[arg(long = "filter")]
    pub filters: Vec<String>,
    /// A range satisfies a bound only if all of it does
    #[arg(long)]
    pub strict: bool,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl ToString) -> Self {
        Failure { code, message: message.to_string() }
    }
}

impl From<DatasetError> for Failure {
    fn from(e: DatasetError) -> Self {
        let code = match e {
            DatasetError::Io { .. } => EXIT_IO,
            DatasetError::Ingest { .. } => EXIT_IO,
            _ => EXIT_VALIDATION,
        };
        Failure::new(code, e)
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Dataset(d) => d.into(),
            AnalysisError::Invalid(_) | AnalysisError::WrongKind { .. } => Failure::new(EXIT_VALIDATION, e),
            other => Failure::new(EXIT_ANALYSIS, other),
        }
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        let code = if matches!(e, CatalogError::Io { .. }) { EXIT_IO } else { EXIT_VALIDATION };
        Failure::new(code, e)
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::new(EXIT_IO, format!("{}: {e}", path.display()))
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Output goes to stdout, errors to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            0
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Runs a parsed command and returns what it would print.
pub fn execute(cli: &Cli) -> Result<String, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(Failure::new(EXIT_USAGE, "--jobs must be at least 1"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Failure::new(EXIT_USAGE, e))?;
    pool.install(|| dispatch(&cli.command))
}

fn dispatch(command: &Command) -> Result<String, Failure> {
    match command {
        Command::IngestValidate { manifest } => {
            let m = load_manifest(manifest)?;
            let report = validate(&m);
            let text = report.to_string();
            if report.has_fatal() {
                Err(Failure::new(EXIT_VALIDATION, text.trim_end()))
            } else {
                Ok(text)
            }
        }
        Command::BackgroundRank(args) => {
            let m = load_manifest(&args.manifest)?;
            let scores = analysis::background_rank(&m)?;
            let bundle = report::emit_background_report(&scores);
            let dir = args.out.join(&m.experiment_id);
            bundle.write_to(&dir).map_err(|e| io_failure(&dir, e))?;
            let mut out = String::new();
            for s in &scores {
                writeln!(
                    out,
                    "{:>2}  {}  mean {}  std {}  ({} conditions)",
                    s.rank,
                    s.background,
                    fmt_num(s.mean_uqi),
                    fmt_num(s.std_uqi),
                    s.per_condition.len()
                )
                .unwrap();
            }
            writeln!(out, "wrote {}", dir.display()).unwrap();
            Ok(out)
        }
        Command::ExposureCurve(args) => {
            let m = load_manifest(&args.manifest)?;
            let curves = analysis::exposure_curve(&m)?;
            let bundle = report::emit_exposure_report(&curves);
            let dir = args.out.join(&m.experiment_id);
            bundle.write_to(&dir).map_err(|e| io_failure(&dir, e))?;
            let mut out = String::new();
            for c in &curves {
                let values: Vec<String> =
                    c.points.iter().map(|p| format!("{}={}", p.label, fmt_num(p.ms_ssim))).collect();
                let sym = analysis::symmetry_index(c).map(fmt_num).unwrap_or_else(|_| "n/a".into());
                writeln!(out, "{}  {}  symmetry {}", c.series_name(), values.join(" "), sym).unwrap();
            }
            writeln!(out, "wrote {}", dir.display()).unwrap();
            Ok(out)
        }
        Command::Ev { aperture, shutter, iso } => {
            let s = parse_shutter(shutter).map_err(|e| Failure::new(EXIT_USAGE, e))?;
            let t = ExposureTuple::new(*aperture, s, *iso).map_err(|e| Failure::new(EXIT_USAGE, e))?;
            Ok(format!("EV {:.2} (≈{})\n", t.ev(), t.rounded_ev()))
        }
        Command::Catalog(args) => run_catalog(args),
        Command::Fixtures { spec, out } => {
            let set = FixtureSet::from_descriptor(spec).map_err(|e| Failure::new(EXIT_USAGE, e))?;
            let path = set.write_to(out).map_err(|e| io_failure(out, e))?;
            Ok(format!("wrote {} images and {}\n", set.images.len(), path.display()))
        }
    }
}

fn run_catalog(args: &CatalogArgs) -> Result<String, Failure> {
    let records = catalog::load_catalog(&args.file)?;
    let constraints = args
        .filters
        .iter()
        .map(|f| Constraint::parse(f))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::new(EXIT_USAGE, e))?;
    let rule = if args.strict { RangeRule::Within } else { RangeRule::Overlaps };
    let kept = catalog::filter(&records, &constraints, rule);
    let direction = if args.desc { Direction::Desc } else { Direction::Asc };
    let rows: Vec<(String, String, String, bool)> = match &args.rank_by {
        Some(key) => {
            if kept.is_empty() {
                Vec::new()
            } else {
                catalog::rank_by(&kept, key, direction)
                    .map_err(|e| Failure::new(EXIT_USAGE, e))?
                    .into_iter()
                    .map(|r| {
                        let v = r.sort_value.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
                        (r.record.name, r.record.vendor, v, r.missing)
                    })
                    .collect()
            }
        }
        None => kept.into_iter().map(|r| (r.name, r.vendor, String::new(), false)).collect(),
    };
    let key = args.rank_by.as_deref().unwrap_or("");
    let name_w = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(4).max(4);
    let vendor_w = rows.iter().map(|r| r.1.chars().count()).max().unwrap_or(6).max(6);
    let mut out = String::new();
    writeln!(out, "{:>3}  {:<name_w$}  {:<vendor_w$}  {}", "#", "name", "vendor", key).unwrap();
    for (i, (name, vendor, value, missing)) in rows.iter().enumerate() {
        let flag = if *missing { "  (missing)" } else { "" };
        writeln!(out, "{:>3}  {name:<name_w$}  {vendor:<vendor_w$}  {value}{flag}", i + 1).unwrap();
    }
    Ok(out)
}
