use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use betadrift::experiment::{self, ExperimentConfig, TableOptions};
use betadrift::metrics::cell;
use betadrift::Result;
use clap::{Args, Parser, Subcommand};

/// Drift detection experiments on classifier error streams.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a multi-seed campaign and write summary, traces and config echo.
    Run(RunArgs),
    /// Reproduce one of the result tables (1: bit streams, 2: SEA and hyperplane, 3: Elec2).
    Table(TableArgs),
    /// Sample a beta density and its central interval.
    Density(DensityArgs),
    /// Dump a generated stream and its change points.
    Gen(GenArgs),
}

#[derive(Args)]
struct DatasetArgs {
    /// bitstream, sea, hyperplane or elec2
    #[arg(long)]
    dataset: Option<String>,
    /// Bits per concept (bitstream).
    #[arg(long)]
    segment: Option<usize>,
    /// Number of change points (bitstream).
    #[arg(long)]
    changes: Option<usize>,
    /// Bounds on the jump between consecutive means (bitstream).
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    magnitude: Option<Vec<f64>>,
    /// Label noise (sea).
    #[arg(long)]
    noise: Option<f64>,
    /// Rotation per step in degrees (hyperplane).
    #[arg(long)]
    angle: Option<f64>,
    /// Elec2 CSV; defaults to $BETADRIFT_ELEC2_PATH.
    #[arg(long)]
    elec2: Option<PathBuf>,
}

impl DatasetArgs {
    fn pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push((k.to_string(), v));
            }
        };
        put("dataset", self.dataset.clone());
        put("segment", self.segment.map(|v| v.to_string()));
        put("changes", self.changes.map(|v| v.to_string()));
        put(
            "magnitude",
            self.magnitude
                .as_ref()
                .map(|m| format!("{} {}", m[0], m[1])),
        );
        put("noise", self.noise.map(|v| v.to_string()));
        put("angle", self.angle.map(|v| v.to_string()));
        put(
            "elec2_path",
            self.elec2.as_ref().map(|p| p.display().to_string()),
        );
        out
    }
}

#[derive(Args)]
struct RunArgs {
    /// key = value settings file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    dataset: DatasetArgs,
    /// none, ddm, eddm or bd3
    #[arg(long)]
    detector: Option<String>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    batch_size: Option<usize>,
    /// Seed of the first run; run i uses seed + i.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0: one per core).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Extra key=value setting, e.g. --set decay_constant=1.1
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
    which: u8,
    #[arg(long, default_value_t = 50)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    elec2: Option<PathBuf>,
    /// Directory for table<N>.csv.
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 0.997)]
    mass: f64,
    #[arg(long, default_value = "density")]
    out: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "stream")]
    out: PathBuf,
}

fn run(args: RunArgs) -> Result<()> {
    let mut pairs = args.dataset.pairs();
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            pairs.push((k.to_string(), v));
        }
    };
    put("detector", args.detector);
    put("runs", args.runs.map(|v| v.to_string()));
    put("batch_size", args.batch_size.map(|v| v.to_string()));
    put("seed", args.seed.map(|v| v.to_string()));
    put("jobs", args.jobs.map(|v| v.to_string()));
    put("out", args.out.map(|p| p.display().to_string()));
    for kv in &args.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| {
            betadrift::Error::Config(format!("--set expects KEY=VALUE, got '{kv}'"))
        })?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    let cfg = ExperimentConfig::resolve(args.config.as_deref(), &pairs)?;
    let campaign = experiment::cmd_run(&cfg)?;
    let s = &campaign.summary;
    println!(
        "{} / {} / {} runs -> {}",
        cfg.dataset,
        cfg.detector,
        s.runs,
        cfg.out_dir.display()
    );
    println!("FPR      {}", cell(Some(s.fpr)));
    println!("FNR      {}", cell(s.fnr));
    println!("Delay    {}", cell(s.delay));
    println!("Accuracy {}", cell(s.accuracy));
    Ok(())
}

fn table(args: TableArgs) -> Result<()> {
    let opts = TableOptions {
        runs: args.runs,
        base_seed: args.seed,
        jobs: args.jobs,
        elec2_path: experiment::elec2_path(args.elec2.as_deref()),
        ..TableOptions::default()
    };
    let t = experiment::cmd_table(args.which, &opts)?;
    fs::create_dir_all(&args.out)?;
    let path = args.out.join(format!("table{}.csv", args.which));
    t.write_csv(BufWriter::new(File::create(&path)?))?;
    print!("{}", t.to_text());
    println!("wrote {}", path.display());
    Ok(())
}

fn density(args: DensityArgs) -> Result<()> {
    let d = experiment::cmd_density(args.alpha, args.beta, args.mass)?;
    fs::create_dir_all(&args.out)?;
    d.write_csv(BufWriter::new(File::create(args.out.join("density.csv"))?))?;
    d.write_bounds(BufWriter::new(File::create(args.out.join("bounds.csv"))?))?;
    println!(
        "[{}, {}] holds {} of Beta({}, {})",
        d.lower, d.upper, args.mass, args.alpha, args.beta
    );
    Ok(())
}

fn gen(args: GenArgs) -> Result<()> {
    let cfg = ExperimentConfig::resolve(None, &args.dataset.pairs())?;
    for p in experiment::cmd_gen(&cfg.dataset, args.seed, &args.out)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Table(a) => table(a),
        Command::Density(a) => density(a),
        Command::Gen(a) => gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
