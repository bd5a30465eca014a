//! The `faceflow` command line.
//!
//! Exit codes: 0 success, 1 bad input (arguments, missing or malformed
//! files), 2 internal failure (output could not be written, panics).
//! Progress and diagnostics go to stderr as `key=value` lines; reports go
//! only to files.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use faceflow_core::metrics::{
    compute_metrics, confusion_counts, losocv_aggregate, AggregateReport, MetricsReport,
};
use faceflow_core::numerics::{aae, epe, warp_image};
use faceflow_core::strain::{strain_feature, FEATURE_SIZE};
use faceflow_core::viz::{colorize, Normalization};
use faceflow_core::RunConfig;

use crate::atomic::write_atomic;
use crate::config::read_config;
use crate::featio::{feature_preview, write_feature};
use crate::flo::read_flo;
use crate::generate::{generate_dataset, LOG_NAME};
use crate::imageio::{load_image, save_image, save_rgb8, RasterFormat};
use crate::landmarks::CsvSchema;
use crate::manifest::read_manifest;
use crate::Error;

#[derive(Debug, Parser)]
#[command(
    name = "faceflow",
    version,
    about = "Landmark-driven facial optical flow toolkit"
)]
struct Cli {
    /// key=value run configuration.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Parallel sequence workers (default: logical cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    workers: Option<u16>,
    /// Seed for randomized steps. Generation itself is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate flow files for every sequence in a manifest.
    Generate(GenerateArgs),
    /// Compare predicted flow files with ground truth.
    Eval(EvalArgs),
    /// Backward-warp an image by a flow field.
    Warp(WarpArgs),
    /// Optical strain feature of a flow field.
    Strain(StrainArgs),
    /// Color-wheel visualization of a flow field.
    Viz(VizArgs),
    /// Per-subject and aggregate classification metrics.
    Metrics(MetricsArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Directory with `<sequence_id>.csv` tracks (default: the manifest's directory).
    #[arg(long)]
    tracks: Option<PathBuf>,
    /// Landmark column layout: x-then-y or interleaved.
    #[arg(long, default_value = "x-then-y", value_parser = parse_schema)]
    schema: CsvSchema,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    gt: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    report: PathBuf,
}

#[derive(Debug, Args)]
struct WarpArgs {
    #[arg(long)]
    image: PathBuf,
    #[arg(long)]
    flow: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct StrainArgs {
    #[arg(long)]
    flow: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Also write a min-max stretched PNG of the feature.
    #[arg(long)]
    png: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VizArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Fixed magnitude for full saturation instead of the per-image maximum.
    #[arg(long)]
    max: Option<f64>,
    /// png or ppm (default: from the output extension).
    #[arg(long, value_parser = parse_format)]
    format: Option<RasterFormat>,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn parse_schema(s: &str) -> Result<CsvSchema, String> {
    CsvSchema::from_name(s).ok_or_else(|| format!("expected x-then-y or interleaved, got {s:?}"))
}

fn parse_format(s: &str) -> Result<RasterFormat, String> {
    RasterFormat::from_name(s).ok_or_else(|| format!("expected png or ppm, got {s:?}"))
}

/// Failure of a subcommand, already classified by exit code.
#[derive(Debug)]
enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Write { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Emits one `key=value` log line on stderr. Values containing spaces,
/// quotes or `=` are quoted.
pub fn log_kv(fields: &[(&str, &dyn std::fmt::Display)]) {
    let line: Vec<String> = fields
        .iter()
        .map(|(k, v)| {
            let v = v.to_string();
            if v.is_empty() || v.contains([' ', '"', '=', '\t']) {
                format!("{k}={v:?}")
            } else {
                format!("{k}={v}")
            }
        })
        .collect();
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{}", line.join(" "));
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            // One line: clap's message without the usage block.
            let msg = e.to_string();
            let text: Vec<&str> = msg
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            let text = text.join(" ");
            log_kv(&[
                ("level", &"error"),
                ("kind", &"input"),
                ("msg", &text.trim_start_matches("error: ")),
            ]);
            return 1;
        }
    };
    match catch_unwind(AssertUnwindSafe(|| dispatch(&cli))) {
        Ok(Ok(())) => 0,
        Ok(Err(Failure::Input(msg))) => {
            log_kv(&[("level", &"error"), ("kind", &"input"), ("msg", &msg)]);
            1
        }
        Ok(Err(Failure::Internal(msg))) => {
            log_kv(&[("level", &"error"), ("kind", &"internal"), ("msg", &msg)]);
            2
        }
        Err(_) => {
            log_kv(&[
                ("level", &"error"),
                ("kind", &"internal"),
                ("msg", &"panic"),
            ]);
            2
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let cfg = match &cli.config {
        Some(p) => read_config(p)?,
        None => RunConfig::default(),
    };
    match &cli.command {
        Command::Generate(a) => generate(cli, &cfg, a),
        Command::Eval(a) => eval(a),
        Command::Warp(a) => warp(a),
        Command::Strain(a) => strain(a),
        Command::Viz(a) => viz(a),
        Command::Metrics(a) => metrics(a),
    }
}

fn generate(cli: &Cli, cfg: &RunConfig, a: &GenerateArgs) -> Outcome {
    let manifest = read_manifest(&a.manifest)?;
    let tracks = match &a.tracks {
        Some(t) => t.clone(),
        None => a
            .manifest
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default(),
    };
    std::fs::create_dir_all(&a.out)
        .map_err(|e| Failure::Internal(format!("{}: {e}", a.out.display())))?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        pool = pool.num_threads(n as usize);
    }
    let pool = pool.build().map_err(|e| Failure::Internal(e.to_string()))?;
    log_kv(&[
        ("event", &"generate.start"),
        ("sequences", &manifest.entries.len()),
        ("workers", &pool.current_num_threads()),
        ("resample", &cfg.resample_method.name()),
    ]);
    let start = Instant::now();
    let reports = pool.install(|| generate_dataset(&manifest, &tracks, &a.out, cfg, a.schema))?;
    for r in &reports {
        log_kv(&[
            ("event", &"generate.sequence"),
            ("seq", &r.sequence_id),
            ("pairs", &r.steps.len()),
        ]);
    }
    let pairs: usize = reports.iter().map(|r| r.steps.len()).sum();
    log_kv(&[
        ("event", &"generate.done"),
        ("pairs", &pairs),
        ("log", &a.out.join(LOG_NAME).display()),
        ("seconds", &format!("{:.3}", start.elapsed().as_secs_f64())),
    ]);
    Ok(())
}

fn flo_names(dir: &Path) -> Result<BTreeSet<String>, Failure> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    let mut names = BTreeSet::new();
    for e in entries {
        let p = e
            .map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?
            .path();
        if p.extension().is_some_and(|x| x == "flo") {
            if let Some(n) = p.file_name().and_then(|n| n.to_str()) {
                names.insert(n.to_owned());
            }
        }
    }
    Ok(names)
}

fn eval(a: &EvalArgs) -> Outcome {
    let (gt, pred) = (flo_names(&a.gt)?, flo_names(&a.pred)?);
    if gt.len() != pred.len() {
        return Err(Failure::Input(format!(
            "--gt has {} flow files but --pred has {}",
            gt.len(),
            pred.len()
        )));
    }
    if let Some(missing) = gt.difference(&pred).next() {
        return Err(Failure::Input(format!("{missing} has no prediction")));
    }
    if gt.is_empty() {
        return Err(Failure::Input(format!(
            "no .flo files in {}",
            a.gt.display()
        )));
    }
    let mut rows = Vec::with_capacity(gt.len());
    for name in &gt {
        let g = read_flo(&a.gt.join(name))?;
        let p = read_flo(&a.pred.join(name))?;
        let e = epe(&g, &p).map_err(|e| Failure::Input(format!("{name}: {e}")))?;
        let r = aae(&g, &p).map_err(|e| Failure::Input(format!("{name}: {e}")))?;
        rows.push((name.as_str(), e, r));
    }
    let n = rows.len() as f64;
    let mean_epe = rows.iter().map(|r| r.1).sum::<f64>() / n;
    let mean_aae = rows.iter().map(|r| r.2).sum::<f64>() / n;
    write_atomic(&a.report, |w| {
        writeln!(w, "pair,epe,aae")?;
        for (name, e, r) in &rows {
            writeln!(w, "{name},{e},{r}")?;
        }
        writeln!(w, "MEAN,{mean_epe},{mean_aae}")
    })?;
    log_kv(&[
        ("event", &"eval.done"),
        ("pairs", &rows.len()),
        ("epe", &mean_epe),
        ("aae", &mean_aae),
    ]);
    Ok(())
}

fn warp(a: &WarpArgs) -> Outcome {
    let image = load_image(&a.image)?;
    let flow = read_flo(&a.flow)?;
    let out = warp_image(&image, &flow).map_err(|e| Failure::Input(e.to_string()))?;
    save_image(&a.out, &out, RasterFormat::for_path(&a.out))?;
    log_kv(&[("event", &"warp.done"), ("out", &a.out.display())]);
    Ok(())
}

fn strain(a: &StrainArgs) -> Outcome {
    let flow = read_flo(&a.flow)?;
    let feat = strain_feature(&flow, FEATURE_SIZE).map_err(|e| Failure::Input(e.to_string()))?;
    write_feature(&a.out, &feat)?;
    if let Some(png) = &a.png {
        save_image(png, &feature_preview(&feat), RasterFormat::Png)?;
    }
    log_kv(&[("event", &"strain.done"), ("out", &a.out.display())]);
    Ok(())
}

fn viz(a: &VizArgs) -> Outcome {
    let flow = read_flo(&a.input)?;
    let norm = match a.max {
        Some(m) if m.is_finite() && m > 0.0 => Normalization::Fixed(m),
        Some(m) => return Err(Failure::Input(format!("--max must be positive, got {m}"))),
        None => Normalization::PerImage,
    };
    let v = colorize(&flow, norm);
    let format = a.format.unwrap_or_else(|| RasterFormat::for_path(&a.out));
    save_rgb8(&a.out, v.width, v.height, &v.rgb, format)?;
    log_kv(&[
        ("event", &"viz.done"),
        ("max_magnitude", &v.max_magnitude_used),
    ]);
    Ok(())
}

/// `(subject, true, predicted)` rows; a first row starting with
/// `subject_id` is a header.
fn read_predictions(path: &Path) -> Result<Vec<(String, String, String)>, Failure> {
    let bad =
        |line: usize, why: String| Failure::Input(format!("{}:{line}: {why}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad(i + 1, e.to_string()))?;
        if i == 0 && rec.get(0) == Some("subject_id") {
            continue;
        }
        if rec.len() != 3 || rec.iter().any(str::is_empty) {
            return Err(bad(
                i + 1,
                "expected subject_id,true_label,predicted_label".into(),
            ));
        }
        rows.push((rec[0].to_owned(), rec[1].to_owned(), rec[2].to_owned()));
    }
    if rows.is_empty() {
        return Err(Failure::Input(format!(
            "{}: no predictions",
            path.display()
        )));
    }
    Ok(rows)
}

fn metrics(a: &MetricsArgs) -> Outcome {
    let rows = read_predictions(&a.pred)?;
    let classes: BTreeSet<&str> = rows
        .iter()
        .flat_map(|r| [r.1.as_str(), r.2.as_str()])
        .collect();
    let index: BTreeMap<&str, usize> = classes.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let mut folds: BTreeMap<&str, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (s, t, p) in &rows {
        let f = folds.entry(s).or_default();
        f.0.push(index[t.as_str()]);
        f.1.push(index[p.as_str()]);
    }
    let mut reports: Vec<(&str, usize, MetricsReport)> = Vec::new();
    for (s, (t, p)) in &folds {
        let counts = confusion_counts(t, p, classes.len())
            .map_err(|e| Failure::Input(format!("{s}: {e}")))?;
        let r = compute_metrics(&counts).map_err(|e| Failure::Input(format!("{s}: {e}")))?;
        reports.push((s, t.len(), r));
    }
    let all: Vec<MetricsReport> = reports.iter().map(|r| r.2.clone()).collect();
    let agg = losocv_aggregate(&all).map_err(|e| Failure::Input(e.to_string()))?;
    write_atomic(&a.out, |w| {
        writeln!(
            w,
            "subject,samples,macro_precision,macro_recall,macro_f1,micro_precision,micro_recall,micro_f1,g_mean"
        )?;
        for (s, n, r) in &reports {
            writeln!(w, "{s},{n},{}", metric_cells(&AggregateReport::from(r)))?;
        }
        writeln!(w, "AGGREGATE,{},{}", rows.len(), metric_cells(&agg))
    })?;
    log_kv(&[
        ("event", &"metrics.done"),
        ("subjects", &reports.len()),
        ("classes", &classes.len()),
        ("macro_f1", &agg.macro_f1),
    ]);
    Ok(())
}

fn metric_cells(r: &AggregateReport) -> String {
    [
        r.macro_precision,
        r.macro_recall,
        r.macro_f1,
        r.micro_precision,
        r.micro_recall,
        r.micro_f1,
        r.g_mean,
    ]
    .map(|v| v.to_string())
    .join(",")
}
