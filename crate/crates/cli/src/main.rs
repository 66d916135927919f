mod stats;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{rngs::StdRng, Rng, SeedableRng};
use rayon::prelude::*;
use srsc::{
    cluster, export_tree, load_csv, nmi, rand_index, ClusterConfig, CsvOptions, Dataset, Error,
    IndexMode, LabelColumn, LabeledDataset,
};

use stats::{power_law_exponent, Summary};

/// Hierarchical clustering by electing roots among reciprocal nearest neighbours.
#[derive(Parser, Debug)]
#[command(name = "srsc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cluster one dataset and write its labels.
    Cluster(ClusterArgs),
    /// Repeat clustering over a seed range and summarize the scores.
    Experiment(ExperimentArgs),
    /// Time clustering of uniform random data at several sizes.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Input CSV file.
    #[arg(long)]
    input: PathBuf,
    /// Ground-truth column, by zero-based index or header name.
    #[arg(long)]
    label_col: Option<LabelColumn>,
    /// The first row holds data, not column names.
    #[arg(long)]
    no_header: bool,
    /// Field delimiter.
    #[arg(long, default_value_t = ',')]
    delimiter: char,
}

#[derive(Args, Debug)]
struct AlgoArgs {
    /// Number of clusters.
    #[arg(short, long)]
    k: usize,
    /// Root election index.
    #[arg(long, default_value_t = IndexMode::SimplifiedHybrid)]
    mode: IndexMode,
    /// Boundary pairs to sample (default max(3, ceil(log2 n))).
    #[arg(long)]
    sigma: Option<usize>,
    /// Merge the closest clusters until exactly K remain.
    #[arg(long)]
    exact_k: bool,
}

#[derive(Args, Debug)]
struct ClusterArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    algo: AlgoArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Labels CSV (`index,label`); standard output when absent.
    #[arg(long)]
    out_labels: Option<PathBuf>,
    /// Cluster tree as JSON.
    #[arg(long)]
    emit_tree: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    algo: AlgoArgs,
    /// Half-open seed range, e.g. `0..100`.
    #[arg(long, default_value = "0..100", value_parser = parse_range)]
    seeds: Range<u64>,
    /// Per-run CSV; standard output when absent.
    #[arg(long)]
    out_metrics: Option<PathBuf>,
    /// Also write the summary table here.
    #[arg(long)]
    out_summary: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Dataset sizes, ascending.
    #[arg(long, value_delimiter = ',', default_value = "1000,2000,4000,8000,16000")]
    sizes: Vec<usize>,
    /// Dimension of the generated points.
    #[arg(long, default_value_t = 2)]
    dims: usize,
    /// Half-open seed range; one timed run per seed and size.
    #[arg(long, default_value = "0..3", value_parser = parse_range)]
    seeds: Range<u64>,
    #[arg(long, default_value_t = IndexMode::SimplifiedHybrid)]
    mode: IndexMode,
    /// `n,mean_ms` CSV; standard output when absent.
    #[arg(long)]
    out_metrics: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<Range<u64>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: u64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a >= b {
        return Err(format!("empty seed range {s}"));
    }
    Ok(a..b)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Cluster(args) => cmd_cluster(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("srsc: {e}");
            ExitCode::from(2)
        }
    }
}

fn load(input: &InputArgs) -> srsc::Result<LabeledDataset> {
    if !input.delimiter.is_ascii() {
        return Err(Error::InvalidArgument(format!(
            "delimiter {:?} is not a single byte",
            input.delimiter
        )));
    }
    let options = CsvOptions {
        delimiter: input.delimiter as u8,
        has_header: !input.no_header,
        label_column: input.label_col.clone(),
    };
    load_csv(&input.input, &options).map_err(|e| match e {
        Error::Io(e) => Error::InvalidArgument(format!("{}: {e}", input.input.display())),
        e => e,
    })
}

fn config(algo: &AlgoArgs, seed: u64) -> ClusterConfig {
    ClusterConfig::new(algo.k)
        .mode(algo.mode)
        .seed(seed)
        .sigma(algo.sigma)
        .exact_k(algo.exact_k)
}

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{x:.6}"))
}

fn cmd_cluster(args: ClusterArgs) -> srsc::Result<()> {
    let data = load(&args.input)?;
    let (tree, partition) = cluster(&data.dataset, &config(&args.algo, args.seed))?;

    let mut out = output(args.out_labels.as_deref())?;
    writeln!(out, "index,label")?;
    for (i, l) in partition.labels().iter().enumerate() {
        writeln!(out, "{i},{l}")?;
    }
    out.flush()?;
    if let Some(path) = &args.emit_tree {
        std::fs::write(path, export_tree(&tree)?)?;
    }

    // Keep standard output clean for the labels when they go there.
    let report = |line: String| {
        if args.out_labels.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    };
    report(format!("clusters: {}", partition.k()));
    if let Some(truth) = &data.labels {
        report(format!("rand_index: {:.6}", rand_index(truth, partition.labels())?));
        report(format!("nmi: {}", fmt_opt(nmi(truth, partition.labels()).ok())));
    }
    Ok(())
}

struct RunRecord {
    seed: u64,
    rand_index: f64,
    nmi: Option<f64>,
    wall_ms: f64,
}

fn run_seed(data: &Dataset, truth: &[String], algo: &AlgoArgs, seed: u64) -> srsc::Result<RunRecord> {
    let start = Instant::now();
    let (_, partition) = cluster(data, &config(algo, seed))?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(RunRecord {
        seed,
        rand_index: rand_index(truth, partition.labels())?,
        nmi: nmi(truth, partition.labels()).ok(),
        wall_ms,
    })
}

fn pool(jobs: Option<usize>) -> srsc::Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn cmd_experiment(args: ExperimentArgs) -> srsc::Result<()> {
    let data = load(&args.input)?;
    let truth = data.labels.as_deref().ok_or_else(|| {
        Error::InvalidArgument("experiment needs ground truth (--label-col)".into())
    })?;
    let seeds: Vec<u64> = args.seeds.clone().collect();
    // Collected in seed order regardless of scheduling.
    let runs = pool(args.jobs)?.install(|| {
        seeds
            .par_iter()
            .map(|&seed| run_seed(&data.dataset, truth, &args.algo, seed))
            .collect::<srsc::Result<Vec<_>>>()
    })?;

    let mut out = output(args.out_metrics.as_deref())?;
    writeln!(out, "seed,k,mode,rand_index,nmi,wall_ms")?;
    for r in &runs {
        writeln!(
            out,
            "{},{},{},{:.6},{},{:.3}",
            r.seed,
            args.algo.k,
            args.algo.mode,
            r.rand_index,
            fmt_opt(r.nmi),
            r.wall_ms
        )?;
    }
    out.flush()?;

    let table = summary_table(&runs);
    if args.out_metrics.is_some() {
        print!("{table}");
    } else {
        eprint!("{table}");
    }
    if let Some(path) = &args.out_summary {
        std::fs::write(path, &table)?;
    }
    Ok(())
}

fn summary_table(runs: &[RunRecord]) -> String {
    let mut table = String::from("metric,count,mean,min,q1,median,q3,max,std\n");
    let columns: [(&str, Vec<f64>); 3] = [
        ("rand_index", runs.iter().map(|r| r.rand_index).collect()),
        ("nmi", runs.iter().filter_map(|r| r.nmi).collect()),
        ("wall_ms", runs.iter().map(|r| r.wall_ms).collect()),
    ];
    for (name, values) in columns {
        match Summary::of(&values) {
            Some(s) => table.push_str(&format!(
                "{name},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
                s.count, s.mean, s.min, s.q1, s.median, s.q3, s.max, s.std
            )),
            None => table.push_str(&format!("{name},0,NA,NA,NA,NA,NA,NA,NA\n")),
        }
    }
    table
}

fn uniform_dataset(n: usize, dim: usize, seed: u64) -> srsc::Result<Dataset> {
    let mut rng = StdRng::seed_from_u64(seed);
    let coords = (0..n * dim).map(|_| rng.gen::<f64>()).collect();
    Dataset::from_flat(dim, coords)
}

fn cmd_bench(args: BenchArgs) -> srsc::Result<()> {
    if args.sizes.is_empty() || args.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("sizes must be ascending".into()));
    }
    let mut means = Vec::with_capacity(args.sizes.len());
    for &n in &args.sizes {
        let mut total = 0.0;
        for seed in args.seeds.clone() {
            let data = uniform_dataset(n, args.dims, seed)?;
            let cfg = ClusterConfig::new(1).mode(args.mode).seed(seed);
            let start = Instant::now();
            cluster(&data, &cfg)?;
            total += start.elapsed().as_secs_f64() * 1e3;
        }
        means.push((n as f64, total / args.seeds.clone().count() as f64));
    }

    let mut out = output(args.out_metrics.as_deref())?;
    writeln!(out, "n,mean_ms")?;
    for &(n, ms) in &means {
        writeln!(out, "{n},{ms:.3}")?;
    }
    out.flush()?;
    let line = format!("exponent: {}", fmt_opt(power_law_exponent(&means)));
    if args.out_metrics.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}
