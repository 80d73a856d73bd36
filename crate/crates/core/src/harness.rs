//! Config-driven experiment runner: expands a parameter grid into seeded,
//! reproducible runs, executes them on a worker pool, and appends results
//! to a CSV that can be resumed and summarized.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::{bootstrap_bounds, small_world_fit, MetricsReport, PathLengthMode};
use crate::sda::{calibrate_b, probability_matrix, rewire, sample_graph, RewireParams, SdaParams};
use crate::sdc::{
    negative_binomial_sequence, poisson_sequence, power_law_sequence, sdc_sample, simplify,
    DegreeFamily, SdcParams, DEFAULT_P_MALFORMED,
};
use crate::space::{
    build_distance_provider, dense_fits, sample_space, DistanceProvider, Metric, ProviderMode,
    SpaceFamily, SpaceSpec, DEFAULT_MEMORY_CAP_BYTES,
};

/// Which generative model a sweep runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Sda,
    Sdc,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Sda => "sda",
            ModelKind::Sdc => "sdc",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sda" => Ok(ModelKind::Sda),
            "sdc" => Ok(ModelKind::Sdc),
            other => Err(Error::Parse(format!("unknown model `{other}`"))),
        }
    }
}

fn default_target_mean_degree() -> f64 {
    30.0
}

fn default_n_boot() -> usize {
    100
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("runs")
}

fn default_metric() -> Metric {
    Metric::Euclidean
}

fn default_cluster_count() -> usize {
    4
}

fn default_p_malformed() -> f64 {
    DEFAULT_P_MALFORMED
}

/// Full description of a parameter sweep. Loadable from a flat TOML file
/// whose keys map 1:1 onto these fields.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    pub spaces: Vec<SpaceFamily>,
    pub dims: Vec<usize>,
    pub n: Vec<usize>,
    /// Homophily exponents; TOML `inf` selects the hard limit.
    pub alpha: Vec<f64>,
    #[serde(default = "default_target_mean_degree")]
    pub target_mean_degree: f64,
    /// Rewiring probabilities. Defaults to `[0.0]` for SDA and `[0.01]`
    /// for SDC when omitted.
    #[serde(default)]
    pub p_rewire: Vec<f64>,
    /// Degree sequence families (SDC only). Defaults to all three studied
    /// families when omitted on an SDC sweep.
    #[serde(default)]
    pub degree_families: Vec<DegreeFamily>,
    /// Independent space realizations per parameter cell (default 2).
    #[serde(default)]
    pub spaces_per_cell: Option<usize>,
    /// Graph (SDA) or degree-sequence (SDC) realizations per space
    /// (default 5 for SDA, 6 for SDC).
    #[serde(default)]
    pub graphs_per_space: Option<usize>,
    #[serde(default = "default_n_boot")]
    pub n_boot: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_metric")]
    pub metric: Metric,
    #[serde(default = "default_cluster_count")]
    pub cluster_count: usize,
    #[serde(default = "default_p_malformed")]
    pub p_malformed: f64,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn from_toml_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&fs::read_to_string(path)?)
    }

    pub fn spaces_per_cell(&self) -> usize {
        self.spaces_per_cell.unwrap_or(2)
    }

    pub fn graphs_per_space(&self) -> usize {
        self.graphs_per_space.unwrap_or(match self.model {
            ModelKind::Sda => 5,
            ModelKind::Sdc => 6,
        })
    }

    /// Rewiring list with the model-specific default applied.
    pub fn p_rewire_list(&self) -> Vec<f64> {
        if !self.p_rewire.is_empty() {
            return self.p_rewire.clone();
        }
        match self.model {
            ModelKind::Sda => vec![0.0],
            ModelKind::Sdc => vec![0.01],
        }
    }

    /// Degree-family list; SDA sweeps carry a single placeholder.
    fn degree_family_list(&self) -> Vec<Option<DegreeFamily>> {
        match self.model {
            ModelKind::Sda => vec![None],
            ModelKind::Sdc => {
                let families = if self.degree_families.is_empty() {
                    vec![
                        DegreeFamily::Poisson,
                        DegreeFamily::NegativeBinomial,
                        DegreeFamily::PowerLaw,
                    ]
                } else {
                    self.degree_families.clone()
                };
                families.into_iter().map(Some).collect()
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, empty) in [
            ("spaces", self.spaces.is_empty()),
            ("dims", self.dims.is_empty()),
            ("n", self.n.is_empty()),
            ("alpha", self.alpha.is_empty()),
        ] {
            if empty {
                return Err(Error::InvalidParameter(format!(
                    "config list `{name}` must be nonempty"
                )));
            }
        }
        if self.spaces_per_cell() < 1 || self.graphs_per_space() < 1 {
            return Err(Error::InvalidParameter(
                "replication counts must be >= 1".into(),
            ));
        }
        if !(self.target_mean_degree > 0.0) {
            return Err(Error::InvalidParameter(
                "target_mean_degree must be positive".into(),
            ));
        }
        for &p in &self.p_rewire {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "p_rewire value {p} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    /// Desk-scale preset: the full parameter grid at sizes that keep a
    /// complete sweep tractable on a laptop.
    pub fn desk_default(model: ModelKind) -> Self {
        ExperimentConfig {
            model,
            spaces: vec![
                SpaceFamily::Uniform,
                SpaceFamily::GaussianClusters,
                SpaceFamily::Lognormal,
            ],
            dims: vec![1, 2, 4, 8, 16],
            n: vec![250, 500, 1000, 2000],
            alpha: vec![2.0, 4.0, 8.0, f64::INFINITY],
            target_mean_degree: 30.0,
            p_rewire: match model {
                ModelKind::Sda => vec![0.0, 0.01],
                ModelKind::Sdc => vec![0.01],
            },
            degree_families: Vec::new(),
            spaces_per_cell: None,
            graphs_per_space: None,
            n_boot: 100,
            master_seed: 0,
            output_dir: default_output_dir(),
            metric: Metric::Euclidean,
            cluster_count: 4,
            p_malformed: DEFAULT_P_MALFORMED,
        }
    }

    /// Full-scale preset with system sizes up to 8000. Expect hours.
    pub fn full_scale(model: ModelKind) -> Self {
        let mut cfg = Self::desk_default(model);
        cfg.n = vec![1000, 2000, 4000, 8000];
        cfg
    }
}

/// Stable 64-bit seed derivation: FNV-1a over the UTF-8 bytes of the
/// decimal master seed followed by each part, all joined with `|`. The
/// scheme is fixed so that run seeds never change across versions.
pub fn derive_seed(master_seed: u64, parts: &[&str]) -> u64 {
    const OFFSET: u64 = 0xcbf29ce484222325;
    const PRIME: u64 = 0x100000001b3;
    let mut hash = OFFSET;
    let feed = |bytes: &[u8], hash: &mut u64| {
        for &byte in bytes {
            *hash ^= byte as u64;
            *hash = hash.wrapping_mul(PRIME);
        }
    };
    feed(master_seed.to_string().as_bytes(), &mut hash);
    for part in parts {
        feed(b"|", &mut hash);
        feed(part.as_bytes(), &mut hash);
    }
    hash
}

/// A single fully seeded run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunDescriptor {
    pub run_id: String,
    pub model: ModelKind,
    pub space_family: SpaceFamily,
    pub dims: usize,
    pub n: usize,
    pub alpha: f64,
    pub p_rewire: f64,
    pub degree_family: Option<DegreeFamily>,
    pub target_mean_degree: f64,
    pub metric: Metric,
    pub cluster_count: usize,
    pub p_malformed: f64,
    pub space_rep: usize,
    pub graph_rep: usize,
    pub space_seed: u64,
    pub graph_seed: u64,
}

impl RunDescriptor {
    fn family_str(&self) -> &'static str {
        self.degree_family.map(|f| f.as_str()).unwrap_or("-")
    }
}

/// Expand the Cartesian product of all parameter lists and replicate
/// indices into run descriptors with derived seeds.
///
/// The iteration order (degree family, space, dims, N, alpha, p_rewire,
/// space replicate, graph replicate) is fixed, so descriptor order and
/// the output CSV row order are deterministic. The same space seed is
/// shared by every cell that uses the same (family, dims, N, replicate),
/// mirroring independent space realizations reused across model settings.
pub fn expand_grid(cfg: &ExperimentConfig) -> Result<Vec<RunDescriptor>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for family in cfg.degree_family_list() {
        for &space_family in &cfg.spaces {
            for &dims in &cfg.dims {
                for &n in &cfg.n {
                    for &alpha in &cfg.alpha {
                        for &p_rewire in &cfg.p_rewire_list() {
                            for space_rep in 0..cfg.spaces_per_cell() {
                                for graph_rep in 0..cfg.graphs_per_space() {
                                    out.push(make_descriptor(
                                        cfg,
                                        family,
                                        space_family,
                                        dims,
                                        n,
                                        alpha,
                                        p_rewire,
                                        space_rep,
                                        graph_rep,
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyInput("parameter grid".into()));
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn make_descriptor(
    cfg: &ExperimentConfig,
    degree_family: Option<DegreeFamily>,
    space_family: SpaceFamily,
    dims: usize,
    n: usize,
    alpha: f64,
    p_rewire: f64,
    space_rep: usize,
    graph_rep: usize,
) -> RunDescriptor {
    let family_str = degree_family.map(|f| f.as_str()).unwrap_or("-");
    let run_id = format!(
        "model={};space={};dims={dims};n={n};alpha={alpha};p_rewire={p_rewire};degree_family={family_str};space_rep={space_rep};graph_rep={graph_rep}",
        cfg.model.as_str(),
        space_family.as_str(),
    );
    let space_seed = derive_seed(
        cfg.master_seed,
        &[
            "space",
            space_family.as_str(),
            &dims.to_string(),
            &n.to_string(),
            &space_rep.to_string(),
        ],
    );
    let graph_seed = derive_seed(cfg.master_seed, &["graph", &run_id]);
    RunDescriptor {
        run_id,
        model: cfg.model,
        space_family,
        dims,
        n,
        alpha,
        p_rewire,
        degree_family,
        target_mean_degree: cfg.target_mean_degree,
        metric: cfg.metric,
        cluster_count: cfg.cluster_count,
        p_malformed: cfg.p_malformed,
        space_rep,
        graph_rep,
        space_seed,
        graph_seed,
    }
}

/// Outcome of one run: calibrated `b` and metrics on success, an error
/// message otherwise. Failures never abort a sweep.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub descriptor: RunDescriptor,
    pub b: Option<f64>,
    pub metrics: Option<MetricsReport>,
    pub error: Option<String>,
    pub wall_ms: u64,
}

impl RunRecord {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Cache of calibrated characteristic distances keyed by space realization
/// and homophily, shared across the runs of one sweep. Purely an
/// optimization: `b` is deterministic for a given key, so caching never
/// changes results.
#[derive(Default)]
pub struct CalibrationCache {
    inner: Mutex<HashMap<(u64, u64, u64), f64>>,
}

impl CalibrationCache {
    fn key(desc: &RunDescriptor) -> (u64, u64, u64) {
        (
            desc.space_seed,
            desc.alpha.to_bits(),
            desc.target_mean_degree.to_bits(),
        )
    }

    fn get(&self, desc: &RunDescriptor) -> Option<f64> {
        self.inner.lock().unwrap().get(&Self::key(desc)).copied()
    }

    fn insert(&self, desc: &RunDescriptor, b: f64) {
        self.inner.lock().unwrap().insert(Self::key(desc), b);
    }
}

/// Execute a single run: space, calibration, graph generation, metrics.
pub fn run_one(desc: &RunDescriptor) -> RunRecord {
    run_one_with_cache(desc, None)
}

pub fn run_one_with_cache(desc: &RunDescriptor, cache: Option<&CalibrationCache>) -> RunRecord {
    let start = Instant::now();
    let mut b_out = None;
    let result = execute_run(desc, cache, &mut b_out);
    let wall_ms = start.elapsed().as_millis() as u64;
    match result {
        Ok(metrics) => RunRecord {
            descriptor: desc.clone(),
            b: b_out,
            metrics: Some(metrics),
            error: None,
            wall_ms,
        },
        Err(e) => RunRecord {
            descriptor: desc.clone(),
            b: b_out,
            metrics: None,
            error: Some(e.to_string()),
            wall_ms,
        },
    }
}

fn build_provider(desc: &RunDescriptor) -> Result<DistanceProvider> {
    let spec = SpaceSpec {
        family: desc.space_family,
        dims: desc.dims,
        n_agents: desc.n,
        seed: desc.space_seed,
        cluster_count: desc.cluster_count,
    };
    let space = sample_space(&spec)?;
    let mode = if dense_fits(desc.n, DEFAULT_MEMORY_CAP_BYTES) {
        ProviderMode::Dense
    } else {
        ProviderMode::OnDemand
    };
    build_distance_provider(space, desc.metric, mode)
}

fn execute_run(
    desc: &RunDescriptor,
    cache: Option<&CalibrationCache>,
    b_out: &mut Option<f64>,
) -> Result<MetricsReport> {
    let provider = build_provider(desc)?;
    let b = match cache.and_then(|c| c.get(desc)) {
        Some(b) => b,
        None => {
            let b = calibrate_b(&provider, desc.alpha, desc.target_mean_degree)?;
            if let Some(c) = cache {
                c.insert(desc, b);
            }
            b
        }
    };
    *b_out = Some(b);
    let probs = probability_matrix(&provider, &SdaParams::new(desc.alpha, b)?)?;
    drop(provider);

    let graph = match desc.model {
        ModelKind::Sda => sample_graph(&probs, desc.graph_seed),
        ModelKind::Sdc => {
            let family = desc
                .degree_family
                .ok_or_else(|| Error::InvalidParameter("SDC run needs a degree family".into()))?;
            let seq_seed = derive_seed(desc.graph_seed, &["sequence"]);
            let seq = match family {
                DegreeFamily::Poisson => {
                    poisson_sequence(desc.n, desc.target_mean_degree, seq_seed)?
                }
                DegreeFamily::NegativeBinomial => negative_binomial_sequence(desc.n, seq_seed),
                DegreeFamily::PowerLaw => {
                    power_law_sequence(desc.n, desc.target_mean_degree, seq_seed)?
                }
                DegreeFamily::UserProvided => {
                    return Err(Error::InvalidParameter(
                        "sweeps cannot use user-provided degree sequences".into(),
                    ))
                }
            };
            let params = SdcParams::new(desc.p_malformed, derive_seed(desc.graph_seed, &["sdc"]))?;
            let multigraph = sdc_sample(&probs, &seq, &params)?;
            simplify(&multigraph).0
        }
    };
    drop(probs);

    let graph = apply_rewire(graph, desc)?;
    let path_mode = PathLengthMode::auto(desc.n, derive_seed(desc.graph_seed, &["paths"]));
    Ok(MetricsReport::compute(&graph, path_mode))
}

fn apply_rewire(graph: Graph, desc: &RunDescriptor) -> Result<Graph> {
    if desc.p_rewire == 0.0 {
        return Ok(graph);
    }
    let params = RewireParams::new(desc.p_rewire, derive_seed(desc.graph_seed, &["rewire"]))?;
    rewire(&graph, &params)
}

const RESULT_COLUMNS: &[&str] = &[
    "run_id",
    "model",
    "space",
    "dims",
    "n",
    "alpha",
    "p_rewire",
    "degree_family",
    "target_mean_degree",
    "space_rep",
    "graph_rep",
    "space_seed",
    "graph_seed",
    "b",
    "status",
    "error",
    "n_nodes",
    "n_edges",
    "mean_degree",
    "clustering",
    "assortativity",
    "avg_path_length",
    "gini",
    "lcc_fraction",
    "wall_ms",
];

fn record_fields(record: &RunRecord) -> Vec<String> {
    let d = &record.descriptor;
    let mut fields = vec![
        d.run_id.clone(),
        d.model.as_str().to_string(),
        d.space_family.as_str().to_string(),
        d.dims.to_string(),
        d.n.to_string(),
        d.alpha.to_string(),
        d.p_rewire.to_string(),
        d.family_str().to_string(),
        d.target_mean_degree.to_string(),
        d.space_rep.to_string(),
        d.graph_rep.to_string(),
        d.space_seed.to_string(),
        d.graph_seed.to_string(),
        record.b.map(|b| b.to_string()).unwrap_or_default(),
        if record.is_ok() { "ok" } else { "failed" }.to_string(),
        record.error.clone().unwrap_or_default(),
    ];
    match &record.metrics {
        Some(m) => fields.extend(m.csv_fields()),
        None => fields.extend(std::iter::repeat_n(String::new(), 8)),
    }
    fields.push(record.wall_ms.to_string());
    fields
}

/// Counts reported by [`run_sweep`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOutcome {
    pub csv_path: PathBuf,
    pub total_runs: usize,
    pub executed: usize,
    pub skipped: usize,
    pub failed: usize,
}

/// Run every descriptor of the grid, appending rows to
/// `<output_dir>/results.csv` in descriptor order.
///
/// With `resume` set, runs whose `run_id` already appears in the CSV are
/// skipped, so an interrupted sweep can be continued without duplicate
/// rows. Runs execute on a worker pool sized by the `SDANET_WORKERS`
/// environment variable (default: all cores); results are written in
/// deterministic order regardless of scheduling.
pub fn run_sweep(cfg: &ExperimentConfig, resume: bool) -> Result<SweepOutcome> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.output_dir)?;
    let csv_path = cfg.output_dir.join("results.csv");

    let mut completed: HashSet<String> = HashSet::new();
    let append = resume && csv_path.exists();
    if append {
        completed = read_completed_run_ids(&csv_path)?;
    }

    let descriptors = expand_grid(cfg)?;
    let total_runs = descriptors.len();
    let pending: Vec<&RunDescriptor> = descriptors
        .iter()
        .filter(|d| !completed.contains(&d.run_id))
        .collect();
    let skipped = total_runs - pending.len();

    let file: File = if append {
        OpenOptions::new().append(true).open(&csv_path)?
    } else {
        File::create(&csv_path)?
    };
    let mut writer = csv::Writer::from_writer(file);
    if !append {
        writer.write_record(RESULT_COLUMNS)?;
        writer.flush()?;
    }

    let cache = CalibrationCache::default();
    let mut failed = 0usize;
    let run_chunk = |chunk: &[&RunDescriptor]| -> Vec<RunRecord> {
        chunk
            .par_iter()
            .map(|desc| run_one_with_cache(desc, Some(&cache)))
            .collect()
    };

    let pool = worker_pool();
    for chunk in pending.chunks(32) {
        let records = match &pool {
            Some(pool) => pool.install(|| run_chunk(chunk)),
            None => run_chunk(chunk),
        };
        for record in &records {
            if !record.is_ok() {
                failed += 1;
                log::warn!(
                    "run failed: {} ({})",
                    record.descriptor.run_id,
                    record.error.as_deref().unwrap_or("unknown")
                );
            }
            writer.write_record(record_fields(record))?;
        }
        writer.flush()?;
    }

    Ok(SweepOutcome {
        csv_path,
        total_runs,
        executed: pending.len(),
        skipped,
        failed,
    })
}

fn worker_pool() -> Option<rayon::ThreadPool> {
    let workers: usize = std::env::var("SDANET_WORKERS").ok()?.parse().ok()?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .ok()
}

fn read_completed_run_ids(path: &Path) -> Result<HashSet<String>> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let id_col = headers
        .iter()
        .position(|h| h == "run_id")
        .ok_or_else(|| Error::Parse("results CSV has no run_id column".into()))?;
    let mut out = HashSet::new();
    for record in reader.records() {
        let record = record?;
        if let Some(id) = record.get(id_col) {
            out.insert(id.to_string());
        }
    }
    Ok(out)
}

/// Metrics summarized per group by [`summarize_csv`].
const SUMMARY_METRICS: &[&str] = &[
    "mean_degree",
    "clustering",
    "assortativity",
    "avg_path_length",
    "gini",
    "lcc_fraction",
];

/// Group means with bootstrap envelopes, one row per group.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl SummaryTable {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(w);
        writer.write_record(&self.header)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        writer.flush()?;
        Ok(())
    }
}

/// Group the results CSV by `group_keys` and report, per metric, the mean
/// and the (min, max) of `n_boot` bootstrap replicate means.
///
/// Failed runs are excluded from metric aggregation but counted per group.
/// When `n` is among the group keys, a `small_world_fit` column carries the
/// correlation between mean path length and `ln N` across the sibling
/// groups that share all other key values (empty with fewer than 3 sizes).
pub fn summarize_csv(
    input: &Path,
    group_keys: &[String],
    n_boot: usize,
    seed: u64,
) -> Result<SummaryTable> {
    let mut reader = csv::Reader::from_path(input)?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Parse(format!("unknown group key or column `{name}`")))
    };
    let key_cols: Vec<usize> = group_keys.iter().map(|k| col(k)).collect::<Result<_>>()?;
    let metric_cols: Vec<usize> = SUMMARY_METRICS
        .iter()
        .map(|m| col(m))
        .collect::<Result<_>>()?;
    let status_col = col("status")?;

    // Group rows, preserving first-seen order via a sorted map on key values.
    let mut groups: BTreeMap<Vec<String>, GroupAccumulator> = BTreeMap::new();
    for record in reader.records() {
        let record = record?;
        let key: Vec<String> = key_cols
            .iter()
            .map(|&c| record.get(c).unwrap_or("").to_string())
            .collect();
        let acc = groups.entry(key).or_default();
        acc.n_rows += 1;
        if record.get(status_col) != Some("ok") {
            acc.n_failed += 1;
            continue;
        }
        for (slot, &c) in acc.values.iter_mut().zip(&metric_cols) {
            if let Some(cell) = record.get(c) {
                if let Ok(v) = cell.parse::<f64>() {
                    slot.push(v);
                }
            }
        }
    }
    if groups.is_empty() {
        return Err(Error::EmptyInput("no rows to summarize".into()));
    }

    let mut header: Vec<String> = group_keys.to_vec();
    header.push("n_runs".into());
    header.push("n_failed".into());
    for metric in SUMMARY_METRICS {
        header.push(format!("{metric}_mean"));
        header.push(format!("{metric}_boot_min"));
        header.push(format!("{metric}_boot_max"));
    }
    header.push("small_world_fit".into());

    let n_pos = group_keys.iter().position(|k| k == "n");
    let fits = n_pos
        .map(|pos| small_world_fits_by_parent(&groups, pos))
        .unwrap_or_default();

    let mut rows = Vec::new();
    for (key, acc) in &groups {
        let mut row = key.clone();
        row.push(acc.n_rows.to_string());
        row.push(acc.n_failed.to_string());
        for (metric, values) in SUMMARY_METRICS.iter().zip(&acc.values) {
            if values.is_empty() {
                row.extend([String::new(), String::new(), String::new()]);
                continue;
            }
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let boot_seed = derive_seed(seed, &["boot", &key.join(";"), metric]);
            let (lo, hi) = bootstrap_bounds(values, n_boot.max(1), boot_seed)?;
            row.push(mean.to_string());
            row.push(lo.to_string());
            row.push(hi.to_string());
        }
        let fit = n_pos
            .and_then(|pos| {
                let parent: Vec<String> = without_index(key, pos);
                fits.get(&parent).copied()
            })
            .map(|r| r.to_string())
            .unwrap_or_default();
        row.push(fit);
        rows.push(row);
    }
    Ok(SummaryTable { header, rows })
}

#[derive(Default)]
struct GroupAccumulator {
    n_rows: usize,
    n_failed: usize,
    values: [Vec<f64>; SUMMARY_METRICS.len()],
}

fn without_index(key: &[String], pos: usize) -> Vec<String> {
    key.iter()
        .enumerate()
        .filter(|&(i, _)| i != pos)
        .map(|(_, v)| v.clone())
        .collect()
}

/// Correlate mean path length with ln N across groups that differ only in
/// their `n` value.
fn small_world_fits_by_parent(
    groups: &BTreeMap<Vec<String>, GroupAccumulator>,
    n_pos: usize,
) -> HashMap<Vec<String>, f64> {
    let apl_idx = SUMMARY_METRICS
        .iter()
        .position(|&m| m == "avg_path_length")
        .expect("avg_path_length is summarized");
    let mut by_parent: HashMap<Vec<String>, Vec<(f64, f64)>> = HashMap::new();
    for (key, acc) in groups {
        let values = &acc.values[apl_idx];
        if values.is_empty() {
            continue;
        }
        let Ok(n_value) = key[n_pos].parse::<f64>() else {
            continue;
        };
        let mean_l = values.iter().sum::<f64>() / values.len() as f64;
        by_parent
            .entry(without_index(key, n_pos))
            .or_default()
            .push((n_value, mean_l));
    }
    by_parent
        .into_iter()
        .filter_map(|(parent, points)| small_world_fit(&points).ok().map(|r| (parent, r)))
        .collect()
}
