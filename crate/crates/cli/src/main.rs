use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use topoclass::classifier::{classify, fit, split_by_class, Prediction};
use topoclass::harness::{
    evaluate, plot_svg, sweep_dimensions, synth_blobs, synth_embedded, synth_informative, EmbeddedParams, EvalConfig,
    PlotObject,
};
use topoclass::persistence::{h0_diagram, vr_diagrams, PersistenceDiagram, VrParams, DEFAULT_FIELD};
use topoclass::pointcloud::{pairwise_distances, read_csv, remove_outliers, zscore, PointCloud};
use topoclass::signal::{read_timeseries_csv, write_timeseries_csv, BandSpec, FilterChain, DEFAULT_ORDER};
use topoclass::summaries::{make_grid, silhouette, Grid, DEFAULT_RESOLUTION};

#[derive(Parser)]
#[command(name = "topoclass", version, about = "Topological classification of labeled point clouds")]
struct Cli {
    /// Random seed; overrides any seed given in a config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Persistence diagram of a CSV point cloud.
    Persist(PersistArgs),
    /// Silhouette of a diagram (JSON in, JSON and optionally SVG out).
    Silhouette(SilhouetteArgs),
    /// Classify every row of a test CSV against a labeled training CSV.
    Classify(ClassifyArgs),
    /// Repeated train/test evaluation of one protocol.
    Eval(EvalArgs),
    /// Accuracy against reduced dimension.
    Sweep(SweepArgs),
    /// Write a synthetic labeled dataset as CSV.
    Synth(SynthArgs),
    /// Notch, broadband and band filtering of time-series CSV columns.
    Filter(FilterArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum HeaderMode {
    Auto,
    Yes,
    No,
}

#[derive(Args)]
struct CsvArgs {
    /// Whether the first row is a header.
    #[arg(long, value_enum, default_value = "auto")]
    header: HeaderMode,
}

#[derive(Args)]
struct LabelArgs {
    /// Zero-based label column, `last`, or `none`.
    #[arg(long, default_value = "last")]
    label_column: String,
}

#[derive(Args)]
struct OutArgs {
    /// Output file; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PersistArgs {
    input: PathBuf,
    /// Homology dimension to report.
    #[arg(long, default_value_t = 0)]
    dim: usize,
    /// Largest filtration value for dimensions above 0.
    #[arg(long, default_value_t = f64::INFINITY)]
    max_scale: f64,
    /// Prime field for dimensions above 0.
    #[arg(long, default_value_t = DEFAULT_FIELD)]
    field: u32,
    /// Zero-based label column to ignore, `last`, or `none`.
    #[arg(long, default_value = "none")]
    label_column: String,
    #[command(flatten)]
    csv: CsvArgs,
    /// Also render the diagram as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SilhouetteArgs {
    /// Diagram JSON file.
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: usize,
    /// Grid end; defaults to 1.05 times the largest death.
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[command(flatten)]
    labels: LabelArgs,
    /// Label column of the test file, `last`, or `none`.
    #[arg(long, default_value = "none")]
    test_label_column: String,
    #[command(flatten)]
    csv: CsvArgs,
    /// z-score both files against the training statistics first.
    #[arg(long)]
    zscore: bool,
    /// Drop training points whose norm lies more than k standard deviations
    /// from the class mean norm.
    #[arg(long)]
    outliers: Option<f64>,
    /// Write per-class silhouettes of the training clouds as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ConfigArgs {
    /// Config file: JSON object or `key = value` lines.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Override one config field, e.g. `--set reduction=pca:3`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Args)]
struct EvalArgs {
    input: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
    #[command(flatten)]
    labels: LabelArgs,
    #[command(flatten)]
    csv: CsvArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SweepArgs {
    input: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
    /// Dimensions as `lo..hi` (inclusive) or a comma list.
    #[arg(long, default_value = "2..10")]
    dims: String,
    #[command(flatten)]
    labels: LabelArgs,
    #[command(flatten)]
    csv: CsvArgs,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthKind {
    Blobs,
    Embedded,
    Informative,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(value_enum)]
    kind: SynthKind,
    #[arg(long, default_value_t = 3)]
    classes: usize,
    #[arg(long, default_value_t = 100)]
    per_class: usize,
    /// Ambient dimension (features).
    #[arg(long, default_value_t = 5)]
    dim: usize,
    /// Class subspace dimension (embedded) or informative features (informative).
    #[arg(long, default_value_t = 3)]
    intrinsic: usize,
    #[arg(long, default_value_t = 10.0)]
    separation: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Leading noise standard deviation (embedded).
    #[arg(long, default_value_t = 1.0)]
    noise: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct FilterArgs {
    input: PathBuf,
    /// Sampling rate in Hz.
    #[arg(long)]
    fs: f64,
    /// none, alpha, beta or gamma.
    #[arg(long, default_value = "none")]
    band: String,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    /// Skip the mains notches.
    #[arg(long)]
    no_notch: bool,
    /// Skip the broadband band-pass.
    #[arg(long)]
    no_broadband: bool,
    #[command(flatten)]
    csv: CsvArgs,
    #[command(flatten)]
    out: OutArgs,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let seed = cli.seed;
    match cli.command {
        Command::Persist(a) => persist(a),
        Command::Silhouette(a) => silhouette_cmd(a),
        Command::Classify(a) => classify_cmd(a),
        Command::Eval(a) => eval_cmd(a, seed),
        Command::Sweep(a) => sweep_cmd(a, seed),
        Command::Synth(a) => synth_cmd(a, seed.unwrap_or(0)),
        Command::Filter(a) => filter_cmd(a),
    }
}

fn emit(out: &OutArgs, text: &str) -> Result<()> {
    match &out.output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn first_row(text: &str) -> Vec<&str> {
    text.lines()
        .find(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(str::trim).collect())
        .unwrap_or_default()
}

fn label_index(spec: &str, text: &str) -> Result<Option<usize>> {
    match spec {
        "none" => Ok(None),
        "last" => Ok(first_row(text).len().checked_sub(1)),
        n => Ok(Some(n.parse().with_context(|| format!("bad label column {n:?}"))?)),
    }
}

fn has_header(mode: HeaderMode, text: &str, label: Option<usize>) -> bool {
    match mode {
        HeaderMode::Yes => true,
        HeaderMode::No => false,
        HeaderMode::Auto => first_row(text)
            .iter()
            .enumerate()
            .any(|(i, cell)| Some(i) != label && cell.parse::<f64>().is_err()),
    }
}

fn load_cloud(path: &Path, csv: &CsvArgs, label_spec: &str) -> Result<PointCloud> {
    let text = read_text(path)?;
    let label = label_index(label_spec, &text)?;
    let header = has_header(csv.header, &text, label);
    read_csv(text.as_bytes(), header, label).with_context(|| format!("parsing {}", path.display()))
}

fn persist(a: PersistArgs) -> Result<()> {
    let cloud = load_cloud(&a.input, &a.csv, &a.label_column)?;
    let dm = pairwise_distances(&cloud)?;
    let diagram = if a.dim == 0 && a.max_scale.is_infinite() {
        h0_diagram(&dm).0
    } else {
        let mut params = VrParams::new(a.dim, a.max_scale);
        params.field_p = a.field;
        vr_diagrams(&dm, &params)?.swap_remove(a.dim)
    };
    if let Some(svg) = &a.svg {
        plot_svg(&PlotObject::Diagram(&diagram), svg)?;
    }
    emit(&a.out, &diagram.to_json()?)
}

fn silhouette_cmd(a: SilhouetteArgs) -> Result<()> {
    let diagram = PersistenceDiagram::from_json(&read_text(&a.input)?)?;
    let grid = match a.t_max {
        Some(t) => Grid::new(0.0, t, a.resolution)?,
        None => make_grid(&[&diagram], a.resolution)?,
    };
    let s = silhouette(&diagram, &grid)?;
    if let Some(svg) = &a.svg {
        let curves = vec![(a.input.display().to_string(), s.clone())];
        plot_svg(&PlotObject::Silhouettes(&curves), svg)?;
    }
    emit(&a.out, &s.to_json()?)
}

fn classify_cmd(a: ClassifyArgs) -> Result<()> {
    let mut train = load_cloud(&a.train, &a.csv, &a.labels.label_column)?;
    if train.labels().is_none() {
        bail!("training data needs a label column");
    }
    let mut test = load_cloud(&a.test, &a.csv, &a.test_label_column)?;
    if let Some(k) = a.outliers {
        let mut kept = Vec::new();
        for (label, cloud) in split_by_class(&train)? {
            let cleaned = remove_outliers(&cloud, k)?;
            kept.push((label, cleaned));
        }
        let rows: Vec<Vec<f64>> = kept.iter().flat_map(|(_, c)| c.points().map(<[f64]>::to_vec)).collect();
        let labels: Vec<String> = kept.iter().flat_map(|(l, c)| std::iter::repeat_n(l.clone(), c.len())).collect();
        train = PointCloud::from_rows(&rows)?.with_labels(labels)?;
    }
    if a.zscore {
        let reference = train.clone();
        train = zscore(&train, &reference)?;
        test = zscore(&test, &reference)?;
    }
    let model = fit(&train)?;
    if let Some(svg) = &a.svg {
        let curves: Vec<_> = model
            .classes()
            .iter()
            .map(|c| (c.label.clone(), c.reference.clone()))
            .collect();
        plot_svg(&PlotObject::Silhouettes(&curves), svg)?;
    }
    let predictions: Vec<Prediction> = test.points().map(|x| classify(&model, x)).collect::<Result<_, _>>()?;
    emit(&a.out, &serde_json::to_string_pretty(&predictions)?)
}

fn load_config(c: &ConfigArgs, seed: Option<u64>) -> Result<EvalConfig> {
    let mut cfg = match &c.config {
        Some(p) => EvalConfig::parse(&read_text(p)?).with_context(|| format!("config {}", p.display()))?,
        None => EvalConfig::default(),
    };
    for kv in &c.overrides {
        let (k, v) = kv.split_once('=').with_context(|| format!("--set expects KEY=VALUE, got {kv:?}"))?;
        cfg.set(k, v)?;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn eval_cmd(a: EvalArgs, seed: Option<u64>) -> Result<()> {
    let cfg = load_config(&a.config, seed)?;
    let data = load_cloud(&a.input, &a.csv, &a.labels.label_column)?;
    emit(&a.out, &evaluate(&data, &cfg)?.to_json()?)
}

fn parse_dims(s: &str) -> Result<Vec<usize>> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().context("bad sweep start")?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().context("bad sweep end")?;
        if lo > hi {
            bail!("empty sweep range {s:?}");
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse().with_context(|| format!("bad dimension {t:?}")))
        .collect()
}

fn sweep_cmd(a: SweepArgs, seed: Option<u64>) -> Result<()> {
    let mut cfg = load_config(&a.config, seed)?;
    if cfg.reduction == topoclass::harness::Reduction::Raw {
        cfg.reduction = topoclass::harness::Reduction::Pca(2);
    }
    let data = load_cloud(&a.input, &a.csv, &a.labels.label_column)?;
    let report = sweep_dimensions(&data, &cfg, &parse_dims(&a.dims)?)?;
    if let Some(svg) = &a.svg {
        plot_svg(&PlotObject::Sweep(&report), svg)?;
    }
    emit(&a.out, &report.to_json()?)
}

fn synth_cmd(a: SynthArgs, seed: u64) -> Result<()> {
    let data = match a.kind {
        SynthKind::Blobs => synth_blobs(a.classes, a.per_class, a.dim, a.separation, a.sigma, seed)?,
        SynthKind::Embedded => {
            let mut p = EmbeddedParams::new(a.intrinsic, a.dim, a.classes, a.per_class, a.noise, seed);
            p.separation = a.separation;
            p.sigma = a.sigma;
            synth_embedded(&p)?
        }
        SynthKind::Informative => synth_informative(a.classes, a.per_class, a.dim, a.intrinsic, a.separation, seed)?,
    };
    let mut buf = Vec::new();
    data.write_csv(&mut buf)?;
    emit(&a.out, &String::from_utf8(buf)?)
}

fn filter_cmd(a: FilterArgs) -> Result<()> {
    let text = read_text(&a.input)?;
    let header = has_header(a.csv.header, &text, None);
    let channels = read_timeseries_csv(text.as_bytes(), header, a.fs)?;
    let band: BandSpec = a.band.parse()?;
    let mut chain = FilterChain::new(band);
    chain.order = a.order;
    if a.no_notch {
        chain.notches.clear();
    }
    if a.no_broadband {
        chain.broadband = None;
    }
    let filtered = channels.iter().map(|c| chain.apply(c)).collect::<Result<Vec<_>, _>>()?;
    let mut buf = Vec::new();
    write_timeseries_csv(&filtered, &mut buf)?;
    emit(&a.out, &String::from_utf8(buf)?)
}
