//! The `enn` command line.
//!
//! Exit codes: `0` success, `1` a validation failure (unlawful label metric,
//! labels missing from it), `2` a usage or parse error.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use enn_core::vcat::{Violation, LAW_TOLERANCE};
use enn_core::voronoi::{
    knna_region_field, knna_value_field, region_field, value_field, voronoi_field,
};
use enn_core::{
    Cost, CostValue, Dataset, Field, FieldKind, FiniteVCat, Grid, KnnaModel, Metric, NnaModel,
    PointSpace, Policy, Quantale, RealLine, RegionField, DEFAULT_EPSILON,
};

use crate::io::{self, cost_text, IoError, LabelMetric, RawDataset};
use crate::output::{self, Clip, MAX_REGION_LABELS};
use crate::synth::{self, Cloud};

#[derive(Debug)]
pub enum Failure {
    /// Exit code 1.
    Invalid(String),
    /// Exit code 2.
    Usage(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Usage(m) => m,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<enn_core::Error> for Failure {
    fn from(e: enn_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

type Outcome = Result<(), Failure>;

#[derive(Debug, Parser)]
#[command(
    name = "enn",
    version,
    about = "Nearest neighbour classification over enriched categories"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a label metric and/or a dataset against the enrichment laws.
    Validate(ValidateArgs),
    /// Print label sets and per-label costs for query points as CSV.
    Classify(ClassifyArgs),
    /// Rasterize a decision field over a grid.
    Field(FieldArgs),
    /// Rasterize the graded Voronoi cell of every data point.
    Voronoi(VoronoiArgs),
    /// Generate a seeded synthetic dataset.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    L1,
    L2,
    Linf,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Metric {
        match m {
            MetricArg::L1 => Metric::L1,
            MetricArg::L2 => Metric::L2,
            MetricArg::Linf => Metric::LInf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Greedy,
    Conservative,
    Biased,
    Unanimous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Pgm,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldMode {
    /// Label sets on a 2-D feature window.
    Region,
    /// Graded value of one label (`--label`) on a 2-D feature window.
    Cost,
    /// Graded value over (feature, real label) for 1-D features.
    Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SynthMode {
    /// Two Gaussian clouds labelled A and B.
    Fig1,
    /// Noisy samples of 0.4 + 0.1 sin(10x) - 0.7x^2 + 0.7x^3.
    Fig2,
}

/// `xmin:xmax:ymin:ymax:W:H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec(pub Grid);

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 6 {
            return Err("expected xmin:xmax:ymin:ymax:W:H".into());
        }
        let f = |i: usize| {
            parts[i]
                .trim()
                .parse::<f64>()
                .map_err(|e| format!("{:?}: {e}", parts[i]))
        };
        let u = |i: usize| {
            parts[i]
                .trim()
                .parse::<usize>()
                .map_err(|e| format!("{:?}: {e}", parts[i]))
        };
        Grid::new(f(0)?, f(1)?, f(2)?, f(3)?, u(4)?, u(5)?)
            .map(GridSpec)
            .map_err(|e| e.to_string())
    }
}

/// `lo:hi` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClipSpec(pub Clip);

impl FromStr for ClipSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
        let lo: f64 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
        let hi: f64 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err("clip bounds must be finite with lo < hi".into());
        }
        Ok(ClipSpec(Clip { lo, hi }))
    }
}

fn parse_epsilon(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err("epsilon must be a finite non-negative number".into())
    }
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    let p = io::parse_point(s)?;
    p.try_into().map_err(|_| "expected x,y".to_string())
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let p = io::parse_point(s)?;
    p.try_into().map_err(|_| "expected sxx,sxy,syy".to_string())
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Dataset CSV: feature columns and a `label` column.
    #[arg(long)]
    pub dataset: PathBuf,
    /// Label metric JSON; without it the distinct labels are discrete.
    #[arg(long)]
    pub label_metric: Option<PathBuf>,
    /// Distance on feature vectors.
    #[arg(long, value_enum, default_value_t = MetricArg::L2)]
    pub metric: MetricArg,
    /// Tolerance for reading a graded value as true.
    #[arg(long, default_value_t = DEFAULT_EPSILON, value_parser = parse_epsilon)]
    pub epsilon: f64,
    /// Number of neighbours.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    /// Aggregation policy for k > 1 [default: greedy, or unanimous for
    /// real-valued labels].
    #[arg(long, value_enum)]
    pub policy: Option<PolicyArg>,
    /// Comma-separated label names, most preferred first (biased policy).
    #[arg(long)]
    pub bias_order: Option<String>,
}

#[derive(Debug, Args)]
pub struct RasterArgs {
    /// Window and resolution as `x_min:x_max:y_min:y_max:width:height`.
    #[arg(long, default_value = "0:1:0:1:64:64")]
    pub grid: GridSpec,
    /// PGM display range [default: 0 to the largest finite value].
    #[arg(long)]
    pub clip: Option<ClipSpec>,
    /// Output path stem; `.csv`, `.pgm` and `.json` are appended.
    #[arg(long)]
    pub out: PathBuf,
    /// Which rasters to write.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Dataset CSV to check for well-formed rows and known labels.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Label metric JSON to check for the unit and triangle laws.
    #[arg(long)]
    pub label_metric: Option<PathBuf>,
    /// Distance on feature vectors.
    #[arg(long, value_enum, default_value_t = MetricArg::L2)]
    pub metric: MetricArg,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// A query point `x1,x2,...`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub query: Vec<String>,
    /// CSV of query points with a header (a `label` column is ignored).
    #[arg(long)]
    pub queries: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub raster: RasterArgs,
    /// [default: value for 1-D features, region for 2-D]
    #[arg(long, value_enum)]
    pub mode: Option<FieldMode>,
    /// Label whose graded value `--mode cost` rasterizes.
    #[arg(long)]
    pub label: Option<String>,
}

#[derive(Debug, Args)]
pub struct VoronoiArgs {
    /// Dataset CSV; every row is a site and labels are ignored.
    #[arg(long)]
    pub dataset: PathBuf,
    /// Distance on feature vectors.
    #[arg(long, value_enum, default_value_t = MetricArg::L2)]
    pub metric: MetricArg,
    #[command(flatten)]
    pub raster: RasterArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(value_enum)]
    pub mode: SynthMode,
    /// Seed for the ChaCha8 generator; equal seeds give identical files.
    #[arg(long)]
    pub seed: u64,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// fig2: number of points. Noise is multiplicative, u ~ U[0.95, 1.05).
    #[arg(long, default_value_t = 30)]
    pub n: usize,
    /// fig1: mean of cloud A as `x,y`.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub mean_a: Option<[f64; 2]>,
    /// fig1: mean of cloud B as `x,y`.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub mean_b: Option<[f64; 2]>,
    /// fig1: covariance of cloud A as `sxx,sxy,syy`.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    pub cov_a: Option<[f64; 3]>,
    /// fig1: covariance of cloud B as `sxx,sxy,syy`.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    pub cov_b: Option<[f64; 3]>,
    /// fig1: number of points in cloud A.
    #[arg(long)]
    pub count_a: Option<usize>,
    /// fig1: number of points in cloud B.
    #[arg(long)]
    pub count_b: Option<usize>,
}

/// Parses `args` (program name first) and runs the command, writing normal
/// output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "enn: {}", f.message());
            f.code()
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Validate(a) => validate(&a, out),
        Command::Classify(a) => classify(&a, out),
        Command::Field(a) => field(&a, out),
        Command::Voronoi(a) => voronoi(&a, out),
        Command::Synth(a) => synth_cmd(&a, out),
    }
}

fn write_err(e: std::io::Error) -> Failure {
    usage(format!("write failed: {e}"))
}

fn describe(v: &Violation, metric: &LabelMetric) -> String {
    let name = |i: usize| &metric.labels[i];
    let y = |a: usize, b: usize| metric.matrix[a][b];
    match *v {
        Violation::Unit { object } => {
            format!(
                "unit law: Y({0}, {0}) = {1}, expected 0",
                name(object),
                y(object, object)
            )
        }
        Violation::Composition { a, b, c } => format!(
            "triangle inequality: Y({}, {}) + Y({}, {}) = {} + {} < Y({}, {}) = {}",
            name(a),
            name(b),
            name(b),
            name(c),
            y(a, b),
            y(b, c),
            name(a),
            name(c),
            y(a, c)
        ),
        Violation::Increase { a, b } => format!(
            "functor increases the hom between {} and {}",
            name(a),
            name(b)
        ),
    }
}

/// Checks the label metric's laws, returning human-readable witnesses.
pub fn metric_violations(metric: &LabelMetric) -> Vec<String> {
    metric
        .category()
        .validate(LAW_TOLERANCE)
        .violations
        .iter()
        .map(|v| describe(v, metric))
        .collect()
}

fn validate(a: &ValidateArgs, out: &mut dyn Write) -> Outcome {
    if a.dataset.is_none() && a.label_metric.is_none() {
        return Err(usage("validate needs --dataset and/or --label-metric"));
    }
    let mut failed = false;
    let mut report = String::new();
    let metric = match &a.label_metric {
        Some(path) => {
            let m = io::read_label_metric(path)?;
            let problems = metric_violations(&m);
            if problems.is_empty() {
                report += &format!(
                    "label metric {}: ok ({} labels)\n",
                    path.display(),
                    m.labels.len()
                );
            } else {
                failed = true;
                report += &format!(
                    "label metric {}: {} violation(s)\n",
                    path.display(),
                    problems.len()
                );
                for p in problems {
                    report += &format!("  {p}\n");
                }
            }
            Some(m)
        }
        None => None,
    };
    if let Some(path) = &a.dataset {
        let raw = io::read_dataset(path)?;
        let names = metric
            .as_ref()
            .map_or_else(|| raw.distinct_labels(), |m| m.labels.clone());
        match raw.label_indices(&names, path) {
            Ok(targets) => {
                let labels = match &metric {
                    Some(m) => m.category(),
                    None => FiniteVCat::discrete(names.clone())?,
                };
                let space = PointSpace::new(raw.dim(), a.metric.into())?;
                let ds = Dataset::new(space, raw.features.clone(), labels, targets)?;
                let functor = ds.target_functor().validate(LAW_TOLERANCE);
                if functor.is_ok() {
                    report += &format!(
                        "dataset {}: ok ({} rows, {} features, {} labels)\n",
                        path.display(),
                        raw.len(),
                        raw.dim(),
                        names.len()
                    );
                } else {
                    failed = true;
                    report += &format!("dataset {}: label map is not a functor\n", path.display());
                }
            }
            Err(e) => {
                failed = true;
                report += &format!("dataset {}: {e}\n", path.display());
            }
        }
    }
    out.write_all(report.as_bytes()).map_err(write_err)?;
    if failed {
        Err(Failure::Invalid("validation failed".into()))
    } else {
        Ok(())
    }
}

/// A dataset over a finite label space, ready for classification.
struct Discrete {
    names: Vec<String>,
    nna: NnaModel<FiniteVCat<Cost>>,
    knna: Option<KnnaModel<FiniteVCat<Cost>>>,
}

impl Discrete {
    fn costs(&self, x: &[f64]) -> Result<Vec<CostValue>, Failure> {
        Ok(match &self.knna {
            Some(m) => (0..self.names.len())
                .map(|y| m.knna_cost(y, x))
                .collect::<Result<_, _>>()?,
            None => self.nna.costs(x)?,
        })
    }

    fn cost(&self, y: usize, x: &[f64]) -> enn_core::Result<CostValue> {
        match &self.knna {
            Some(m) => m.knna_cost(y, x),
            None => self.nna.cost_nna(y, x),
        }
    }
}

fn discrete_policy(m: &ModelArgs, names: &[String]) -> Result<Policy, Failure> {
    let policy = m.policy.unwrap_or(PolicyArg::Greedy);
    match (policy, &m.bias_order) {
        (PolicyArg::Biased, None) => Err(usage("--policy biased needs --bias-order")),
        (PolicyArg::Biased, Some(order)) => {
            let order = order
                .split(',')
                .map(|l| {
                    let l = l.trim();
                    names
                        .iter()
                        .position(|n| n == l)
                        .ok_or_else(|| usage(format!("--bias-order: unknown label {l:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Policy::Biased(order))
        }
        (_, Some(_)) => Err(usage("--bias-order only applies to --policy biased")),
        (PolicyArg::Greedy, None) => Ok(Policy::Greedy),
        (PolicyArg::Conservative, None) => Ok(Policy::Conservative),
        (PolicyArg::Unanimous, None) => Ok(Policy::Unanimous),
    }
}

fn load_discrete(m: &ModelArgs) -> Result<(RawDataset, Discrete), Failure> {
    let raw = io::read_dataset(&m.dataset)?;
    let (names, labels) = match &m.label_metric {
        Some(path) => {
            let metric = io::read_label_metric(path)?;
            let problems = metric_violations(&metric);
            if !problems.is_empty() {
                return Err(Failure::Invalid(format!(
                    "{}: label metric breaks the enrichment laws ({}); run `enn validate`",
                    path.display(),
                    problems[0]
                )));
            }
            (metric.labels.clone(), metric.category())
        }
        None => {
            let names = raw.distinct_labels();
            let cat = FiniteVCat::discrete(names.clone())?;
            (names, cat)
        }
    };
    let targets = raw
        .label_indices(&names, &m.dataset)
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    let space = PointSpace::new(raw.dim(), m.metric.into())?;
    let nna = NnaModel::new(
        Dataset::new(space, raw.features.clone(), labels, targets)?,
        m.epsilon,
    )?;
    let knna = if m.k > 1 {
        Some(KnnaModel::new(
            nna.clone(),
            m.k as usize,
            discrete_policy(m, &names)?,
        )?)
    } else {
        None
    };
    Ok((raw, Discrete { names, nna, knna }))
}

fn load_real(m: &ModelArgs) -> Result<(NnaModel<RealLine>, Option<KnnaModel<RealLine>>), Failure> {
    if m.label_metric.is_some() {
        return Err(usage(
            "value fields use |b - a| on real labels; --label-metric does not apply",
        ));
    }
    let raw = io::read_dataset(&m.dataset)?;
    let targets = raw.numeric_labels(&m.dataset)?;
    let space = PointSpace::new(raw.dim(), m.metric.into())?;
    let nna = NnaModel::new(
        Dataset::new(space, raw.features, RealLine, targets)?,
        m.epsilon,
    )?;
    let knna = if m.k > 1 {
        let policy = match m.policy {
            None | Some(PolicyArg::Unanimous) => Policy::Unanimous,
            Some(_) => {
                return Err(Failure::Usage(
                    enn_core::Error::VoteNeedsDiscrete.to_string(),
                ))
            }
        };
        if m.bias_order.is_some() {
            return Err(usage("--bias-order only applies to --policy biased"));
        }
        Some(KnnaModel::new(nna.clone(), m.k as usize, policy)?)
    } else {
        None
    };
    Ok((nna, knna))
}

fn classify(a: &ClassifyArgs, out: &mut dyn Write) -> Outcome {
    let (raw, model) = load_discrete(&a.model)?;
    let mut queries = Vec::new();
    for q in &a.query {
        queries.push(io::parse_point(q).map_err(|e| usage(format!("--query {q:?}: {e}")))?);
    }
    if let Some(path) = &a.queries {
        queries.extend(io::read_queries(path)?);
    }
    if queries.is_empty() {
        return Err(usage("classify needs --query or --queries"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = raw.feature_names.clone();
    header.push("labels".into());
    header.extend(model.names.iter().map(|n| format!("cost_{n}")));
    w.write_record(&header).map_err(|e| usage(e.to_string()))?;
    for q in &queries {
        let costs = model.costs(q)?;
        let accepted: Vec<&str> = costs
            .iter()
            .zip(&model.names)
            .filter(|(c, _)| c.get() <= a.model.epsilon)
            .map(|(_, n)| n.as_str())
            .collect();
        let mut rec: Vec<String> = q.iter().map(|v| v.to_string()).collect();
        rec.push(accepted.join(";"));
        rec.extend(costs.iter().map(|&c| cost_text(c)));
        w.write_record(&rec).map_err(|e| usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| usage(e.to_string()))?;
    out.write_all(&bytes).map_err(write_err)
}

fn stem_with(stem: &Path, ext: &str) -> PathBuf {
    stem.with_extension(ext)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn finish(mut w: BufWriter<File>) -> Outcome {
    w.flush().map_err(write_err)
}

fn write_field(
    field: &Field,
    kind: &str,
    raster: &RasterArgs,
    stem: &Path,
) -> Result<Vec<PathBuf>, Failure> {
    let mut written = Vec::new();
    if raster.format != Format::Pgm {
        let path = stem_with(stem, "csv");
        let mut w = create(&path)?;
        output::write_field_csv(&mut w, field, kind).map_err(write_err)?;
        finish(w)?;
        written.push(path);
    }
    if raster.format != Format::Csv {
        let path = stem_with(stem, "pgm");
        let clip = raster.clip.map_or_else(|| Clip::auto(field), |c| c.0);
        let mut w = create(&path)?;
        output::write_field_pgm(&mut w, field, clip).map_err(write_err)?;
        finish(w)?;
        written.push(path);
    }
    Ok(written)
}

fn write_regions(
    regions: &RegionField,
    names: &[String],
    raster: &RasterArgs,
) -> Result<Vec<PathBuf>, Failure> {
    let stem = &raster.out;
    let mut written = Vec::new();
    if raster.format != Format::Pgm {
        let path = stem_with(stem, "csv");
        let mut w = create(&path)?;
        output::write_region_csv(&mut w, regions).map_err(write_err)?;
        finish(w)?;
        written.push(path);
    }
    if raster.format != Format::Csv {
        let path = stem_with(stem, "pgm");
        let mut w = create(&path)?;
        output::write_region_pgm(&mut w, regions, names.len()).map_err(write_err)?;
        finish(w)?;
        written.push(path);
    }
    let path = stem_with(stem, "json");
    let mut w = create(&path)?;
    w.write_all(output::region_note(regions, names).as_bytes())
        .map_err(write_err)?;
    finish(w)?;
    written.push(path);
    Ok(written)
}

fn paths(written: &[PathBuf]) -> String {
    written
        .iter()
        .map(|p| p.display().to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn summary(field: &Field) -> String {
    let (lo, hi) = field.range();
    format!("cells={} min={lo} max={hi}", field.grid.cell_count())
}

fn field(a: &FieldArgs, out: &mut dyn Write) -> Outcome {
    let grid = a.raster.grid.0;
    let dim = io::read_dataset(&a.model.dataset)?.dim();
    let mode = a.mode.unwrap_or(if dim == 1 {
        FieldMode::Value
    } else {
        FieldMode::Region
    });
    let need = if mode == FieldMode::Value { 1 } else { 2 };
    if dim != need {
        return Err(usage(
            format!("--mode {mode:?} needs {need}-D features, dataset has {dim}").to_lowercase(),
        ));
    }
    if a.label.is_some() != (mode == FieldMode::Cost) {
        return Err(usage(
            "--label is required by, and only used with, --mode cost",
        ));
    }
    let line = match mode {
        FieldMode::Value => {
            let (nna, knna) = load_real(&a.model)?;
            let (field, kind) = match &knna {
                Some(m) => (
                    knna_value_field(m, grid)?,
                    format!("knna-value k={}", m.k()),
                ),
                None => (value_field(&nna, grid)?, "nna-value".to_string()),
            };
            let written = write_field(&field, &kind, &a.raster, &a.raster.out)?;
            format!("field {kind} {} wrote {}", summary(&field), paths(&written))
        }
        FieldMode::Cost => {
            let (_, model) = load_discrete(&a.model)?;
            let name = a.label.as_deref().unwrap_or_default();
            let label = model
                .names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| usage(format!("unknown label {name:?}")))?;
            let field = Field::try_from_fn(grid, FieldKind::LabelCost { label }, |x, y| {
                model.cost(label, &[x, y])
            })?;
            let kind = format!("cost label={name} k={}", a.model.k);
            let written = write_field(&field, &kind, &a.raster, &a.raster.out)?;
            format!("field {kind} {} wrote {}", summary(&field), paths(&written))
        }
        FieldMode::Region => {
            let (_, model) = load_discrete(&a.model)?;
            if model.names.len() > MAX_REGION_LABELS {
                return Err(usage(format!(
                    "region codes support at most {MAX_REGION_LABELS} labels"
                )));
            }
            let regions = match &model.knna {
                Some(m) => knna_region_field(m, grid)?,
                None => region_field(&model.nna, grid)?,
            };
            let ties = regions.cells().iter().filter(|c| c.len() > 1).count();
            let empty = regions.cells().iter().filter(|c| c.is_empty()).count();
            let written = write_regions(&regions, &model.names, &a.raster)?;
            format!(
                "region cells={} ties={ties} empty={empty} wrote {}",
                grid.cell_count(),
                paths(&written)
            )
        }
    };
    writeln!(out, "{line}").map_err(write_err)
}

fn voronoi(a: &VoronoiArgs, out: &mut dyn Write) -> Outcome {
    let raw = io::read_dataset(&a.dataset)?;
    let space = PointSpace::new(raw.dim(), a.metric.into())?;
    let fields = voronoi_field(&space, &raw.features, a.raster.grid.0)?;
    let stem = &a.raster.out;
    let file_name = stem
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut written = Vec::new();
    for (site, f) in fields.iter().enumerate() {
        let site_stem = stem.with_file_name(format!("{file_name}_site{site}"));
        written.extend(write_field(
            f,
            &format!("voronoi site={site}"),
            &a.raster,
            &site_stem,
        )?);
    }
    let grid = a.raster.grid.0;
    let tiled = (0..grid.height).all(|iy| {
        (0..grid.width).all(|ix| Cost::is_true(Cost::join(fields.iter().map(|f| f.get(ix, iy)))))
    });
    writeln!(
        out,
        "voronoi sites={} cells={} tiled={tiled} wrote {} files under {}",
        fields.len(),
        grid.cell_count(),
        written.len(),
        stem.parent()
            .map_or_else(|| ".".into(), |p| p.display().to_string())
    )
    .map_err(write_err)
}

fn synth_cmd(a: &SynthArgs, out: &mut dyn Write) -> Outcome {
    let data = match a.mode {
        SynthMode::Fig2 => {
            if a.mean_a.is_some() || a.mean_b.is_some() || a.cov_a.is_some() || a.cov_b.is_some() {
                return Err(usage("cloud parameters only apply to fig1"));
            }
            synth::fig2(a.seed, a.n)
        }
        SynthMode::Fig1 => {
            let [mut ca, mut cb]: [Cloud; 2] = synth::default_clouds();
            ca.mean = a.mean_a.unwrap_or(ca.mean);
            cb.mean = a.mean_b.unwrap_or(cb.mean);
            ca.cov = a.cov_a.unwrap_or(ca.cov);
            cb.cov = a.cov_b.unwrap_or(cb.cov);
            ca.count = a.count_a.unwrap_or(ca.count);
            cb.count = a.count_b.unwrap_or(cb.count);
            synth::fig1(a.seed, &[ca, cb]).map_err(|e| usage(e.to_string()))?
        }
    };
    if data.is_empty() {
        return Err(usage("nothing to generate"));
    }
    match &a.out {
        Some(path) => {
            let mut w = create(path)?;
            data.write_csv(&mut w).map_err(|e| usage(e.to_string()))?;
            finish(w)
        }
        None => data.write_csv(out).map_err(|e| usage(e.to_string())),
    }
}
