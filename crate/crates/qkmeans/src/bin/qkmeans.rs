//! Command-line front end: dataset generation, estimator benchmark
//! sweeps, clustering and classification runs, PCA, the elbow curve,
//! circuit resource tables, and score reports.
//!
//! Every run writes its outputs plus a `manifest.json` echoing the full
//! configuration and seed into the output directory (`--out`, falling
//! back to `$QKMEANS_OUT_DIR`, then the current directory). All
//! randomness is seeded, so re-running a command reproduces its output
//! files byte for byte. Exit code 0 means every requested output was
//! written.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qkmeans::backend::{self, BackendProfile};
use qkmeans::cluster::{self, ClusterConfig};
use qkmeans::data::{self, Dataset};
use qkmeans::dist::{self, BlockSpec, EstimatorConfig};
use qkmeans::embed::{Embedding, VectorPair};
use qkmeans::error::{Error, Result};
use qkmeans::manifest::RunManifest;
use qkmeans::metrics;
use qkmeans::qsim;

#[derive(Parser)]
#[command(
    name = "qkmeans",
    version,
    about = "Quantum k-means: swap-test distance estimation, clustering, and benchmark sweeps",
    long_about = "Pipelines around swap-test distance estimation on a statevector simulator.\n\
                  Outputs land in --out (default: $QKMEANS_OUT_DIR, then the current directory),\n\
                  always together with a manifest.json recording the full configuration.\n\
                  Identical commands rerun to byte-identical outputs."
)]
struct Cli {
    /// Output directory (default: $QKMEANS_OUT_DIR, then ".")
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate Gaussian cluster data as CSV (columns f0..f{d-1},label)
    Gen(GenArgs),
    /// Sweep an estimator setting and emit per-value statistics as CSV
    /// (columns sweep_value,mean,stddev,trials,shots,embedding,mode,analytic)
    Sweep(SweepArgs),
    /// Cluster a dataset; writes labels.csv (index,label) and run.json
    Cluster(ClusterArgs),
    /// Label points by their nearest centroid; writes labels.csv and,
    /// when the data carries true labels, scores.json
    Classify(ClassifyArgs),
    /// Fit a PCA; writes model.json and transformed.csv
    Pca(PcaArgs),
    /// Classical elbow curve; writes elbow.csv (columns k,wcss)
    Elbow(ElbowArgs),
    /// Swap-test circuit resources per dimension; writes resources.csv
    /// (columns dimension,embedding,width,depth,nonlocal)
    Resources(ResourcesArgs),
    /// Score a predicted label file against a truth label file; writes
    /// report.json with confusion counts and accuracy scores
    Report(ReportArgs),
}

#[derive(Args, Serialize)]
struct GenArgs {
    /// Number of clusters
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Points per cluster
    #[arg(long, default_value_t = 15)]
    per: usize,
    /// Dimension of each point
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Isotropic variance of each cluster
    #[arg(long, default_value_t = 0.01)]
    variance: f64,
    /// Minimum distance between cluster centers
    #[arg(long, default_value_t = 2.0)]
    min_sep: f64,
    /// Center sampling box lower bound
    #[arg(long, default_value_t = 0.0)]
    lo: f64,
    /// Center sampling box upper bound
    #[arg(long, default_value_t = 10.0)]
    hi: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SweepKind {
    /// Vary the shot count on a fixed pair
    Shots,
    /// Vary x in (1,..,1) vs (x,..,x) at fixed shots
    Distance,
    /// Vary the dimension of (1,..,1) vs (2,..,2) at fixed shots
    Dimension,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum EmbeddingArg {
    Amplitude,
    Angle,
}

impl From<EmbeddingArg> for Embedding {
    fn from(e: EmbeddingArg) -> Embedding {
        match e {
            EmbeddingArg::Amplitude => Embedding::Amplitude,
            EmbeddingArg::Angle => Embedding::Angle,
        }
    }
}

#[derive(Args, Serialize)]
struct SweepArgs {
    #[arg(long, value_enum)]
    kind: SweepKind,
    #[arg(long, value_enum, default_value_t = EmbeddingArg::Amplitude)]
    embedding: EmbeddingArg,
    /// Independent sampled estimates per sweep value
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Shots per estimate (fixed for distance/dimension sweeps)
    #[arg(long, default_value_t = 2048)]
    shots: u64,
    /// Shot counts for --kind shots (comma separated)
    #[arg(
        long,
        value_delimiter = ',',
        default_values_t = vec![10u64, 50, 100, 200, 500, 1000, 2000, 4000, 8192, 12000, 16000, 24000, 32000]
    )]
    shot_list: Vec<u64>,
    /// First vector for --kind shots (comma separated)
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 0.0])]
    pair_a: Vec<f64>,
    /// Second vector for --kind shots (comma separated)
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 1.0])]
    pair_b: Vec<f64>,
    /// Coordinate values x for --kind distance
    #[arg(
        long,
        value_delimiter = ',',
        default_values_t = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0]
    )]
    coords: Vec<f64>,
    /// Vector dimension for --kind distance
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Dimensions for --kind dimension (defaults depend on the embedding)
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Builtin profile name or a TOML profile path
    #[arg(long, default_value = "ideal")]
    profile: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum EstimatorKind {
    /// Exact squared Euclidean distances, no circuits
    Classical,
    /// One swap test over the whole vector pair
    Full,
    /// Blockwise swap tests summed over subspaces
    Subspace,
}

#[derive(Args, Serialize)]
struct ClusterArgs {
    /// Input dataset CSV (from `gen` or in the same format)
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, value_enum, default_value_t = EstimatorKind::Full)]
    estimator: EstimatorKind,
    /// Block size for --estimator subspace
    #[arg(long, default_value_t = 2)]
    block: usize,
    #[arg(long, value_enum, default_value_t = EmbeddingArg::Amplitude)]
    embedding: EmbeddingArg,
    /// Use exact probabilities instead of shot sampling
    #[arg(long)]
    analytic: bool,
    #[arg(long, default_value_t = 2048)]
    shots: u64,
    /// Circuits averaged per distance estimate
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Invert the readout error on observed frequencies
    #[arg(long)]
    mitigate: bool,
    /// Builtin profile name or a TOML profile path
    #[arg(long, default_value = "ideal")]
    profile: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for job execution
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Minimum pairwise distance between initial centroids
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Convergence tolerance on centroid displacement
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Baseline labels CSV; adds confusion.json against it
    #[arg(long)]
    baseline: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ClassifyArgs {
    /// Points to label (CSV; a label column, if present, is scored against)
    #[arg(long)]
    data: PathBuf,
    /// Centroids as JSON: a run.json from `cluster` or a bare array
    #[arg(long)]
    centroids: PathBuf,
    #[arg(long, value_enum, default_value_t = EstimatorKind::Full)]
    estimator: EstimatorKind,
    #[arg(long, default_value_t = 2)]
    block: usize,
    #[arg(long, value_enum, default_value_t = EmbeddingArg::Amplitude)]
    embedding: EmbeddingArg,
    #[arg(long)]
    analytic: bool,
    #[arg(long, default_value_t = 2048)]
    shots: u64,
    /// Circuits averaged per distance estimate
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long)]
    mitigate: bool,
    #[arg(long, default_value = "ideal")]
    profile: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Serialize)]
struct PcaArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 2)]
    components: usize,
}

#[derive(Args, Serialize)]
struct ElbowArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 8)]
    k_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Serialize)]
struct ResourcesArgs {
    /// Embedding to tabulate; omit for both
    #[arg(long, value_enum)]
    embedding: Option<EmbeddingArg>,
    /// Dimensions to tabulate (defaults depend on the embedding)
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
}

#[derive(Args, Serialize)]
struct ReportArgs {
    /// Truth labels CSV (index,label)
    #[arg(long)]
    truth: PathBuf,
    /// Predicted labels CSV (index,label)
    #[arg(long)]
    pred: PathBuf,
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    let out_dir = cli
        .out
        .or_else(|| std::env::var_os("QKMEANS_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    match run(cli.command, &out_dir) {
        Ok(outputs) => {
            for path in outputs {
                println!("wrote {}", path.display());
            }
            std::process::ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::FAILURE
        }
    }
}

fn run(command: Command, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    match command {
        Command::Gen(args) => cmd_gen(args, out_dir),
        Command::Sweep(args) => cmd_sweep(args, out_dir),
        Command::Cluster(args) => cmd_cluster(args, out_dir),
        Command::Classify(args) => cmd_classify(args, out_dir),
        Command::Pca(args) => cmd_pca(args, out_dir),
        Command::Elbow(args) => cmd_elbow(args, out_dir),
        Command::Resources(args) => cmd_resources(args, out_dir),
        Command::Report(args) => cmd_report(args, out_dir),
    }
}

fn resolve_profile(spec: &str) -> Result<BackendProfile> {
    if let Some(p) = backend::builtin_profile(spec) {
        return Ok(p);
    }
    let path = Path::new(spec);
    if path.exists() {
        return backend::load_profile(path);
    }
    Err(Error::Config(format!(
        "unknown profile {spec:?}: not a builtin (ideal, cap8192, seven-qubit) and no such file"
    )))
}

fn finish(
    command: &str,
    config: &impl Serialize,
    seed: u64,
    profile: Option<String>,
    outputs: Vec<PathBuf>,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    let mut manifest = RunManifest::new(command, serde_json::to_value(config)?, seed, profile);
    for path in &outputs {
        manifest.record_output(path);
    }
    let manifest_path = manifest.write(out_dir)?;
    let mut all = outputs;
    all.push(manifest_path);
    Ok(all)
}

fn write_labels_csv(path: &Path, labels: &[usize]) -> Result<()> {
    let mut body = String::from("index,label\n");
    for (i, l) in labels.iter().enumerate() {
        body.push_str(&format!("{i},{l}\n"));
    }
    std::fs::write(path, body)?;
    Ok(())
}

fn read_labels_csv(path: &Path) -> Result<Vec<usize>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Csv {
        line: 1,
        message: "empty label file".into(),
    })?;
    if header.split(',').next_back() != Some("label") {
        return Err(Error::Csv {
            line: 1,
            message: format!("expected a trailing `label` column, got header {header:?}"),
        });
    }
    let mut labels = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let field = line.rsplit(',').next().unwrap_or("");
        labels.push(field.trim().parse().map_err(|_| Error::Csv {
            line: i + 1,
            message: format!("expected an integer label, got {field:?}"),
        })?);
    }
    if labels.is_empty() {
        return Err(Error::Csv {
            line: 2,
            message: "no label rows".into(),
        });
    }
    Ok(labels)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn cmd_gen(args: GenArgs, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let ds = data::gen_clusters_in(
        (args.lo, args.hi),
        args.k,
        args.per,
        args.dim,
        args.variance,
        args.min_sep,
        args.seed,
    )?;
    let path = out_dir.join("data.csv");
    data::save_csv(&ds, &path)?;
    finish("gen", &args, args.seed, None, vec![path], out_dir)
}

#[derive(Serialize)]
struct SweepRow {
    sweep_value: f64,
    mean: f64,
    stddev: f64,
    trials: usize,
    shots: u64,
    embedding: Embedding,
    mode: &'static str,
    analytic: f64,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn cmd_sweep(args: SweepArgs, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let profile = resolve_profile(&args.profile)?;
    let embedding: Embedding = args.embedding.into();
    if args.trials == 0 {
        return Err(Error::InvalidInput("sweeps need at least one trial".into()));
    }

    // (sweep value, pair, shots) per row.
    let cases: Vec<(f64, VectorPair, u64)> = match args.kind {
        SweepKind::Shots => {
            let pair = VectorPair::new(args.pair_a.clone(), args.pair_b.clone())?;
            args.shot_list
                .iter()
                .map(|&s| (s as f64, pair.clone(), s))
                .collect()
        }
        SweepKind::Distance => args
            .coords
            .iter()
            .map(|&x| {
                let pair = VectorPair::new(vec![1.0; args.dim], vec![x; args.dim])?;
                Ok((x, pair, args.shots))
            })
            .collect::<Result<_>>()?,
        SweepKind::Dimension => {
            let dims = args.dims.clone().unwrap_or_else(|| match embedding {
                Embedding::Amplitude => vec![2, 4, 8, 16, 32],
                Embedding::Angle => (1..=13).map(|m| 2 * m).collect(),
            });
            dims.iter()
                .map(|&n| {
                    let pair = VectorPair::new(vec![1.0; n], vec![2.0; n])?;
                    Ok((n as f64, pair, args.shots))
                })
                .collect::<Result<_>>()?
        }
    };

    let analytic_cfg = EstimatorConfig::analytic(embedding);
    let mut rows = Vec::with_capacity(cases.len());
    for (row, (sweep_value, pair, shots)) in cases.iter().enumerate() {
        let reference = dist::estimate(pair, &analytic_cfg, &profile, 0)?.sq_distance;
        let cfg = EstimatorConfig::sampled(embedding, *shots);
        let samples: Vec<f64> = (0..args.trials)
            .map(|t| {
                let seed = args.seed + (row * args.trials + t) as u64;
                Ok(dist::estimate(pair, &cfg, &profile, seed)?.sq_distance)
            })
            .collect::<Result<_>>()?;
        let (mean, stddev) = mean_std(&samples);
        rows.push(SweepRow {
            sweep_value: *sweep_value,
            mean,
            stddev,
            trials: args.trials,
            shots: *shots,
            embedding,
            mode: "sampled",
            analytic: reference,
        });
    }

    let path = out_dir.join("sweep.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| Error::Config(e.to_string()))?;
    w.write_record([
        "sweep_value",
        "mean",
        "stddev",
        "trials",
        "shots",
        "embedding",
        "mode",
        "analytic",
    ])
    .map_err(|e| Error::Config(e.to_string()))?;
    for r in &rows {
        w.write_record([
            r.sweep_value.to_string(),
            r.mean.to_string(),
            r.stddev.to_string(),
            r.trials.to_string(),
            r.shots.to_string(),
            r.embedding.to_string(),
            r.mode.to_string(),
            r.analytic.to_string(),
        ])
        .map_err(|e| Error::Config(e.to_string()))?;
    }
    w.flush()?;
    let profile_name = profile.name.clone();
    finish("sweep", &args, args.seed, Some(profile_name), vec![path], out_dir)
}

fn estimator_config(
    kind: EstimatorKind,
    embedding: EmbeddingArg,
    analytic: bool,
    shots: u64,
    reps: usize,
    block: usize,
    mitigate: bool,
) -> Result<EstimatorConfig> {
    if kind == EstimatorKind::Classical {
        return Err(Error::InvalidInput(
            "the classical estimator runs no circuits; this command needs full or subspace".into(),
        ));
    }
    let mut cfg = if analytic {
        EstimatorConfig::analytic(embedding.into())
    } else {
        EstimatorConfig::sampled(embedding.into(), shots)
    };
    cfg.repetitions = reps;
    cfg.mitigate = mitigate;
    if kind == EstimatorKind::Subspace {
        cfg.block = BlockSpec::Size(block);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_cluster(args: ClusterArgs, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let ds = data::load_csv(&args.data)?;
    let mut cfg = ClusterConfig::new(args.k);
    cfg.epsilon = args.epsilon;
    cfg.max_iterations = args.max_iter;
    cfg.convergence_tol = args.tol;
    cfg.seed = args.seed;
    cfg.workers = args.workers;

    let (run, profile_name) = if args.estimator == EstimatorKind::Classical {
        (cluster::kmeans_classical(&ds.points, &cfg)?, None)
    } else {
        let profile = resolve_profile(&args.profile)?;
        cfg.estimator = estimator_config(
            args.estimator,
            args.embedding,
            args.analytic,
            args.shots,
            args.reps,
            args.block,
            args.mitigate,
        )?;
        let run = cluster::kmeans_quantum(&ds.points, &cfg, &profile)?;
        (run, Some(profile.name))
    };

    let labels_path = out_dir.join("labels.csv");
    write_labels_csv(&labels_path, &run.labels)?;
    let run_path = out_dir.join("run.json");
    write_json(&run_path, &run)?;
    let mut outputs = vec![labels_path, run_path];

    if let Some(baseline_path) = &args.baseline {
        let baseline = read_labels_csv(baseline_path)?;
        let report = score_labels(&baseline, &run.labels)?;
        let confusion_path = out_dir.join("confusion.json");
        write_json(&confusion_path, &report)?;
        outputs.push(confusion_path);
    }

    finish("cluster", &args, args.seed, profile_name, outputs, out_dir)
}

#[derive(Serialize)]
struct ScoreReport {
    counts: Vec<Vec<u64>>,
    aligned_counts: Vec<Vec<u64>>,
    alignment: Vec<usize>,
    balanced_accuracy: f64,
    raw_accuracy: f64,
    weighted_precision: Option<f64>,
}

/// Align predictions to the reference labeling, then score.
fn score_labels(truth: &[usize], pred: &[usize]) -> Result<ScoreReport> {
    let raw = metrics::confusion(truth, pred)?;
    let perm = metrics::align_labels(truth, pred)?;
    let aligned = metrics::apply_alignment(pred, &perm);
    let cm = metrics::confusion(truth, &aligned)?;
    Ok(ScoreReport {
        counts: raw.counts().to_vec(),
        aligned_counts: cm.counts().to_vec(),
        alignment: perm,
        balanced_accuracy: metrics::balanced_accuracy(&cm)?,
        raw_accuracy: metrics::raw_accuracy(&cm)?,
        weighted_precision: metrics::weighted_precision(&cm).ok(),
    })
}

fn load_centroids(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let array = match &value {
        serde_json::Value::Object(map) => map.get("centroids").ok_or_else(|| {
            Error::Config(format!(
                "{}: JSON object has no `centroids` field",
                path.display()
            ))
        })?,
        _ => &value,
    };
    let centroids: Vec<Vec<f64>> = serde_json::from_value(array.clone())?;
    if centroids.is_empty() {
        return Err(Error::Config(format!("{}: no centroids", path.display())));
    }
    Ok(centroids)
}

fn cmd_classify(args: ClassifyArgs, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let ds = data::load_csv(&args.data)?;
    let centroids = load_centroids(&args.centroids)?;
    let profile = resolve_profile(&args.profile)?;
    let cfg = estimator_config(
        args.estimator,
        args.embedding,
        args.analytic,
        args.shots,
        args.reps,
        args.block,
        args.mitigate,
    )?;
    let labels = cluster::nn_classify(&ds.points, &centroids, &cfg, &profile, args.seed)?;

    let labels_path = out_dir.join("labels.csv");
    write_labels_csv(&labels_path, &labels)?;
    let mut outputs = vec![labels_path];

    if let Some(truth) = &ds.true_labels {
        let report = score_labels(truth, &labels)?;
        let scores_path = out_dir.join("scores.json");
        write_json(&scores_path, &report)?;
        outputs.push(scores_path);
    }

    let profile_name = profile.name.clone();
    finish("classify", &args, args.seed, Some(profile_name), outputs, out_dir)
}

fn cmd_pca(args: PcaArgs, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let ds = data::load_csv(&args.data)?;
    let model = data::pca_fit(&ds.points, args.components)?;
    let transformed = data::pca_transform(&model, &ds.points)?;

    let model_path = out_dir.join("model.json");
    write_json(&model_path, &model)?;
    let csv_path = out_dir.join("transformed.csv");
    data::save_csv(
        &Dataset {
            points: transformed,
            true_labels: ds.true_labels.clone(),
        },
        &csv_path,
    )?;
    finish("pca", &args, 0, None, vec![model_path, csv_path], out_dir)
}

fn cmd_elbow(args: ElbowArgs, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let ds = data::load_csv(&args.data)?;
    let curve = data::elbow_curve(&ds.points, args.k_max, args.seed)?;
    let path = out_dir.join("elbow.csv");
    let mut body = String::from("k,wcss\n");
    for (k, w) in &curve {
        body.push_str(&format!("{k},{w}\n"));
    }
    std::fs::write(&path, body)?;
    finish("elbow", &args, args.seed, None, vec![path], out_dir)
}

fn cmd_resources(args: ResourcesArgs, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let embeddings: Vec<Embedding> = match args.embedding {
        Some(e) => vec![e.into()],
        None => vec![Embedding::Amplitude, Embedding::Angle],
    };
    let mut body = String::from("dimension,embedding,width,depth,nonlocal\n");
    let mut table = String::from("dimension  embedding  width  depth  nonlocal\n");
    for embedding in embeddings {
        let dims = args.dims.clone().unwrap_or_else(|| match embedding {
            Embedding::Amplitude => vec![2, 4, 8, 16, 32],
            Embedding::Angle => (1..=13).map(|m| 2 * m).collect(),
        });
        for n in dims {
            let pair = VectorPair::new(vec![1.0; n], vec![2.0; n])?;
            let circuit = dist::build_swap_test(&pair, embedding)?;
            let r = qsim::resources(&circuit);
            body.push_str(&format!(
                "{n},{embedding},{},{},{}\n",
                r.width, r.depth, r.nonlocal
            ));
            table.push_str(&format!(
                "{n:<10} {:<10} {:<6} {:<6} {}\n",
                embedding.to_string(),
                r.width,
                r.depth,
                r.nonlocal
            ));
        }
    }
    print!("{table}");
    let path = out_dir.join("resources.csv");
    std::fs::write(&path, body)?;
    finish("resources", &args, 0, None, vec![path], out_dir)
}

fn cmd_report(args: ReportArgs, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let truth = read_labels_csv(&args.truth)?;
    let pred = read_labels_csv(&args.pred)?;
    let report = score_labels(&truth, &pred)?;
    let path = out_dir.join("report.json");
    write_json(&path, &report)?;
    finish("report", &args, 0, None, vec![path], out_dir)
}
