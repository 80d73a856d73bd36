//! Command-line front end: generate graphs, calibrate the model, run
//! parameter sweeps, and measure or summarize results.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sdanet::harness::{run_sweep, SweepOutcome};
use sdanet::io::{
    read_edge_list, write_edge_list, write_multigraph_edge_list, write_space_csv, EdgeListMeta,
};
use sdanet::*;

#[derive(Parser)]
#[command(
    name = "sdanet",
    version,
    about = "Homophily-driven social network generation and measurement",
    long_about = "Generates networks whose tie probabilities decay with distance in a latent \
                  social space, calibrates them to a target mean degree, runs reproducible \
                  parameter sweeps and computes structural metrics.\n\
                  Sweep parallelism honors the SDANET_WORKERS environment variable."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one graph and write it as an edge list
    Generate(GenerateArgs),
    /// Find the characteristic distance matching a target mean degree
    Calibrate(CalibrateArgs),
    /// Run a parameter sweep from a config file or preset
    Sweep(SweepArgs),
    /// Compute structural metrics for an edge-list file
    Metrics(MetricsArgs),
    /// Group a sweep results CSV and report bootstrap envelopes
    Summarize(SummarizeArgs),
}

#[derive(Args)]
struct SpaceArgs {
    /// Coordinate distribution: uniform, gaussian_clusters or lognormal
    #[arg(long, default_value = "uniform", value_parser = SpaceFamily::parse)]
    space: SpaceFamily,
    /// Dimensionality of the social space
    #[arg(long, default_value_t = 2)]
    dims: usize,
    /// Number of agents
    #[arg(long)]
    n: usize,
    /// Homophily exponent (use `inf` for the hard limit)
    #[arg(long)]
    alpha: f64,
    /// Target mean degree for calibration
    #[arg(long, default_value_t = 30.0)]
    mean_degree: f64,
    /// Distance metric: euclidean or manhattan
    #[arg(long, default_value = "euclidean", value_parser = Metric::parse)]
    metric: Metric,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SpaceArgs {
    fn provider(&self) -> Result<DistanceProvider> {
        let spec = SpaceSpec::new(
            self.space,
            self.dims,
            self.n,
            derive_seed(self.seed, &["space"]),
        );
        let space = sample_space(&spec)?;
        let mode = if space::dense_fits(self.n, space::DEFAULT_MEMORY_CAP_BYTES) {
            ProviderMode::Dense
        } else {
            ProviderMode::OnDemand
        };
        build_distance_provider(space, self.metric, mode)
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    space_args: SpaceArgs,
    /// Generative model: sda or sdc
    #[arg(long, default_value = "sda", value_parser = ModelKind::parse)]
    model: ModelKind,
    /// Rewiring probability applied to the generated graph
    #[arg(long, default_value_t = 0.0)]
    p_rewire: f64,
    /// Degree sequence family for SDC: poisson, negative_binomial, power_law
    #[arg(long, default_value = "poisson", value_parser = DegreeFamily::parse)]
    degree_family: DegreeFamily,
    /// Read the SDC degree sequence from a file (one integer per line)
    /// instead of generating one
    #[arg(long, conflicts_with = "degree_family")]
    degree_file: Option<PathBuf>,
    /// Floor probability for malformed SDC edges
    #[arg(long, default_value_t = sdc::DEFAULT_P_MALFORMED)]
    p_malformed: f64,
    /// Write the raw SDC multigraph (self-loops and repeats) instead of the
    /// simplified graph
    #[arg(long)]
    multigraph: bool,
    /// Output file for the edge list (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also export agent coordinates as CSV
    #[arg(long)]
    space_csv: Option<PathBuf>,
}

#[derive(Args)]
struct CalibrateArgs {
    #[command(flatten)]
    space_args: SpaceArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML config file mapping onto the experiment fields
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in grid: desk-sda, desk-sdc, full-sda or full-sdc
    #[arg(long)]
    preset: Option<String>,
    /// Override the output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Skip runs already present in the results CSV
    #[arg(long)]
    resume: bool,
}

#[derive(Args)]
struct MetricsArgs {
    /// Edge-list file to measure
    #[arg(long)]
    input: PathBuf,
    /// Force exact all-sources path lengths
    #[arg(long, conflicts_with = "sources")]
    exact: bool,
    /// Number of BFS sources for sampled path lengths
    #[arg(long)]
    sources: Option<usize>,
    /// Seed for source sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SummarizeArgs {
    /// Sweep results CSV
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated result columns to group by (e.g. space,dims,n)
    #[arg(long, value_delimiter = ',')]
    group_keys: Vec<String>,
    /// Bootstrap replicates per group
    #[arg(long, default_value_t = 100)]
    n_boot: usize,
    /// Seed for bootstrap resampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => generate(args),
        Command::Calibrate(args) => calibrate(args),
        Command::Sweep(args) => sweep(args),
        Command::Metrics(args) => metrics(args),
        Command::Summarize(args) => summarize(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn out_writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn generate(args: GenerateArgs) -> Result<()> {
    let sa = &args.space_args;
    let provider = sa.provider()?;
    if let Some(path) = &args.space_csv {
        let mut w = BufWriter::new(File::create(path)?);
        write_space_csv(&mut w, provider.space())?;
    }
    let b = calibrate_b(&provider, sa.alpha, sa.mean_degree)?;
    let probs = probability_matrix(&provider, &SdaParams::new(sa.alpha, b)?)?;
    let meta = EdgeListMeta {
        alpha: Some(sa.alpha),
        b: Some(b),
        seed: Some(sa.seed),
    };
    let mut w = out_writer(&args.out)?;
    match args.model {
        ModelKind::Sda => {
            let mut g = sample_graph(&probs, derive_seed(sa.seed, &["graph"]));
            if args.p_rewire > 0.0 {
                g = rewire(
                    &g,
                    &RewireParams::new(args.p_rewire, derive_seed(sa.seed, &["rewire"]))?,
                )?;
            }
            write_edge_list(&mut w, &g, &meta)?;
        }
        ModelKind::Sdc => {
            let seq_seed = derive_seed(sa.seed, &["sequence"]);
            let seq = match &args.degree_file {
                Some(path) => {
                    let degrees =
                        sdanet::io::read_degree_sequence(BufReader::new(File::open(path)?))?;
                    DegreeSequence::from_degrees(degrees)?
                }
                None => match args.degree_family {
                    DegreeFamily::Poisson => poisson_sequence(sa.n, sa.mean_degree, seq_seed)?,
                    DegreeFamily::NegativeBinomial => negative_binomial_sequence(sa.n, seq_seed),
                    DegreeFamily::PowerLaw => power_law_sequence(sa.n, sa.mean_degree, seq_seed)?,
                    DegreeFamily::UserProvided => {
                        return Err(Error::InvalidParameter(
                            "pass --degree-file to use your own degree sequence".into(),
                        ))
                    }
                },
            };
            let params = SdcParams::new(args.p_malformed, derive_seed(sa.seed, &["sdc"]))?;
            let mg = sdc_sample(&probs, &seq, &params)?;
            if args.multigraph {
                write_multigraph_edge_list(&mut w, &mg)?;
            } else {
                let (mut g, report) = simplify(&mg);
                log::info!(
                    "simplified: {} parallel, {} loops removed",
                    report.parallel_removed,
                    report.self_loops_removed
                );
                if args.p_rewire > 0.0 {
                    g = rewire(
                        &g,
                        &RewireParams::new(args.p_rewire, derive_seed(sa.seed, &["rewire"]))?,
                    )?;
                }
                write_edge_list(&mut w, &g, &meta)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn calibrate(args: CalibrateArgs) -> Result<()> {
    let sa = &args.space_args;
    let provider = sa.provider()?;
    let b = calibrate_b(&provider, sa.alpha, sa.mean_degree)?;
    let achieved = expected_mean_degree(&provider, sa.alpha, b);
    println!("b={b}");
    println!("expected_mean_degree={achieved}");
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let mut cfg = match (&args.config, &args.preset) {
        (Some(path), None) => ExperimentConfig::from_toml_path(path)?,
        (None, Some(preset)) => match preset.as_str() {
            "desk-sda" => ExperimentConfig::desk_default(ModelKind::Sda),
            "desk-sdc" => ExperimentConfig::desk_default(ModelKind::Sdc),
            "full-sda" => ExperimentConfig::full_scale(ModelKind::Sda),
            "full-sdc" => ExperimentConfig::full_scale(ModelKind::Sdc),
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown preset `{other}` (expected desk-sda, desk-sdc, full-sda, full-sdc)"
                )))
            }
        },
        _ => {
            return Err(Error::InvalidParameter(
                "sweep needs exactly one of --config or --preset".into(),
            ))
        }
    };
    if let Some(out) = args.out {
        cfg.output_dir = out;
    }
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    let SweepOutcome {
        csv_path,
        total_runs,
        executed,
        skipped,
        failed,
    } = run_sweep(&cfg, args.resume)?;
    println!("results: {}", csv_path.display());
    println!("runs: {total_runs} total, {executed} executed, {skipped} skipped, {failed} failed");
    Ok(())
}

fn metrics(args: MetricsArgs) -> Result<()> {
    let (graph, _) = read_edge_list(BufReader::new(File::open(&args.input)?))?;
    let mode = if args.exact {
        PathLengthMode::Exact
    } else if let Some(sources) = args.sources {
        PathLengthMode::Sampled {
            sources,
            seed: args.seed,
        }
    } else {
        PathLengthMode::auto(graph.n_nodes(), args.seed)
    };
    let report = MetricsReport::compute(&graph, mode);
    println!("{}", MetricsReport::CSV_HEADER);
    println!("{}", report.to_csv_row());
    Ok(())
}

fn summarize(args: SummarizeArgs) -> Result<()> {
    if args.group_keys.is_empty() {
        return Err(Error::InvalidParameter(
            "summarize needs at least one group key".into(),
        ));
    }
    let table = summarize_csv(&args.input, &args.group_keys, args.n_boot, args.seed)?;
    let mut w = out_writer(&args.out)?;
    table.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}
