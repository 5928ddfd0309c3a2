//! Multi-run campaigns and the artifacts behind the command-line tool.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::bd3::{Bd3Config, BoundMode, DecaySchedule};
use crate::beta_math::BetaParams;
use crate::error::{Error, Result};
use crate::format::sig6;
use crate::metrics::{
    cell, match_detections, render_table, summarize, DetectionOutcome, MetricSummary,
};
use crate::prequential::{
    run_on_errors, run_prequential, DetectorSpec, PrequentialConfig, RunTrace,
};
use crate::streams::{
    gen_bitstream, gen_hyperplane, gen_sea, load_elec2, write_bits_csv, write_instances_csv,
    BitStreamConfig, ChangePointLog, LabeledInstance,
};

/// Environment variable naming the Elec2 CSV.
pub const ELEC2_ENV: &str = "BETADRIFT_ELEC2_PATH";
pub const DEFAULT_ELEC2_PATH: &str = "data/elecNormNew.csv";
pub const DATASET_NAMES: [&str; 4] = ["bitstream", "sea", "hyperplane", "elec2"];

/// Flag value, else the environment variable, else [`DEFAULT_ELEC2_PATH`].
pub fn elec2_path(flag: Option<&Path>) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| std::env::var_os(ELEC2_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_ELEC2_PATH))
}

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSpec {
    BitStream {
        segment: usize,
        n_changes: usize,
        magnitude: (f64, f64),
    },
    Sea {
        noise: f64,
    },
    Hyperplane {
        angle_deg: f64,
    },
    Elec2 {
        path: PathBuf,
    },
}

impl DatasetSpec {
    pub fn name(&self) -> &'static str {
        match self {
            DatasetSpec::BitStream { .. } => "bitstream",
            DatasetSpec::Sea { .. } => "sea",
            DatasetSpec::Hyperplane { .. } => "hyperplane",
            DatasetSpec::Elec2 { .. } => "elec2",
        }
    }

    fn bitstream_config(&self, seed: u64) -> Option<BitStreamConfig> {
        match *self {
            DatasetSpec::BitStream {
                segment,
                n_changes,
                magnitude,
            } => Some(BitStreamConfig {
                segment_length: segment,
                n_changes,
                magnitude,
                seed,
            }),
            _ => None,
        }
    }
}

impl fmt::Display for DatasetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetSpec::BitStream {
                segment, magnitude, ..
            } => write!(f, "bitstream {segment} [{}, {}]", magnitude.0, magnitude.1),
            DatasetSpec::Sea { noise } => write!(f, "sea noise {noise}"),
            DatasetSpec::Hyperplane { angle_deg } => write!(f, "hyperplane {angle_deg} deg"),
            DatasetSpec::Elec2 { path } => write!(f, "elec2 {}", path.display()),
        }
    }
}

/// Resolved campaign settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    pub detector: DetectorSpec,
    pub runs: usize,
    pub batch_size: usize,
    pub base_seed: u64,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetSpec::BitStream {
                segment: 600,
                n_changes: 30,
                magnitude: (0.1, 0.3),
            },
            detector: DetectorSpec::Bd3(Bd3Config::default()),
            runs: 50,
            batch_size: 200,
            base_seed: 0,
            jobs: 0,
            out_dir: PathBuf::from("results"),
        }
    }
}

const KEYS: &[&str] = &[
    "dataset",
    "segment",
    "changes",
    "magnitude",
    "noise",
    "angle",
    "elec2_path",
    "detector",
    "pi0",
    "warn_mass",
    "drift_mass",
    "bound_mode",
    "decay_a",
    "decay_b",
    "decay_constant",
    "ddm_warmup",
    "ddm_warning",
    "ddm_drift",
    "eddm_min_errors",
    "eddm_warning",
    "eddm_drift",
    "runs",
    "batch_size",
    "seed",
    "jobs",
    "out",
];

/// `key = value` lines; `#` starts a comment.
pub fn parse_settings(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::config(format!("line {}: expected key=value, got '{line}'", i + 1))
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

struct Settings<'a>(&'a BTreeMap<String, String>);

impl Settings<'_> {
    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.0
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::config(format!("invalid value '{v}' for {key}")))
            })
            .transpose()
    }

    fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }
}

fn parse_interval(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .collect();
    let bad = || Error::config(format!("magnitude '{s}' must be two numbers"));
    match parts[..] {
        [a, b] => Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

impl ExperimentConfig {
    /// Builds a config from settings. Absent keys take their defaults.
    pub fn from_settings(map: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(unknown) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::config(format!(
                "unknown setting '{unknown}' (known: {})",
                KEYS.join(", ")
            )));
        }
        let s = Settings(map);
        let defaults = Self::default();

        let dataset_name = s.or("dataset", "bitstream".to_string())?;
        let dataset = match dataset_name.as_str() {
            "bitstream" => DatasetSpec::BitStream {
                segment: s.or("segment", 600)?,
                n_changes: s.or("changes", 30)?,
                magnitude: map
                    .get("magnitude")
                    .map(|m| parse_interval(m))
                    .transpose()?
                    .unwrap_or((0.1, 0.3)),
            },
            "sea" => DatasetSpec::Sea {
                noise: s.or("noise", 0.0)?,
            },
            "hyperplane" => DatasetSpec::Hyperplane {
                angle_deg: s.or("angle", 20.0)?,
            },
            "elec2" => DatasetSpec::Elec2 {
                path: elec2_path(map.get("elec2_path").map(Path::new)),
            },
            other => {
                return Err(Error::config(format!(
                    "unknown dataset '{other}' (valid: {})",
                    DATASET_NAMES.join(", ")
                )))
            }
        };

        let mut detector: DetectorSpec = s.or("detector", "bd3".to_string())?.parse()?;
        match &mut detector {
            DetectorSpec::Bd3(c) => {
                c.pi0 = s.or("pi0", c.pi0)?;
                c.warn_mass = s.or("warn_mass", c.warn_mass)?;
                c.drift_mass = s.or("drift_mass", c.drift_mass)?;
                c.bound_mode = s.or::<BoundMode>("bound_mode", c.bound_mode)?;
                if let Some(d) = s.get("decay_constant")? {
                    c.decay = DecaySchedule::Constant(d);
                } else if let DecaySchedule::Exponential { a, b } = c.decay {
                    c.decay = DecaySchedule::Exponential {
                        a: s.or("decay_a", a)?,
                        b: s.or("decay_b", b)?,
                    };
                }
                c.validate()?;
            }
            DetectorSpec::Ddm(c) => {
                c.warmup = s.or("ddm_warmup", c.warmup)?;
                c.warning_level = s.or("ddm_warning", c.warning_level)?;
                c.drift_level = s.or("ddm_drift", c.drift_level)?;
                c.validate()?;
            }
            DetectorSpec::Eddm(c) => {
                c.min_errors = s.or("eddm_min_errors", c.min_errors)?;
                c.warning_ratio = s.or("eddm_warning", c.warning_ratio)?;
                c.drift_ratio = s.or("eddm_drift", c.drift_ratio)?;
                c.validate()?;
            }
            DetectorSpec::None => {}
        }

        let cfg = Self {
            dataset,
            detector,
            runs: s.or("runs", defaults.runs)?,
            batch_size: s.or("batch_size", defaults.batch_size)?,
            base_seed: s.or("seed", defaults.base_seed)?,
            jobs: s.or("jobs", defaults.jobs)?,
            out_dir: s.or("out", defaults.out_dir)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads an optional settings file, then applies `overrides` on top.
    pub fn resolve(file: Option<&Path>, overrides: &[(String, String)]) -> Result<Self> {
        let mut map = match file {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| Error::Data {
                    path: p.to_path_buf(),
                    message: format!("cannot read config: {e}"),
                })?;
                parse_settings(&text)?
            }
            None => BTreeMap::new(),
        };
        map.extend(overrides.iter().cloned());
        Self::from_settings(&map)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::config("runs must be at least 1"));
        }
        if self.batch_size == 0 {
            return Err(Error::config("batch size must be at least 1"));
        }
        if let Some(b) = self.dataset.bitstream_config(0) {
            b.validate()?;
        }
        Ok(())
    }

    /// Every setting, defaults included, in a form [`parse_settings`] reads back.
    pub fn echo(&self) -> String {
        let mut lines = vec![format!("dataset = {}", self.dataset.name())];
        match &self.dataset {
            DatasetSpec::BitStream {
                segment,
                n_changes,
                magnitude,
            } => {
                lines.push(format!("segment = {segment}"));
                lines.push(format!("changes = {n_changes}"));
                lines.push(format!("magnitude = {} {}", magnitude.0, magnitude.1));
            }
            DatasetSpec::Sea { noise } => lines.push(format!("noise = {noise}")),
            DatasetSpec::Hyperplane { angle_deg } => lines.push(format!("angle = {angle_deg}")),
            DatasetSpec::Elec2 { path } => lines.push(format!("elec2_path = {}", path.display())),
        }
        lines.push(format!("detector = {}", self.detector.name()));
        match &self.detector {
            DetectorSpec::Bd3(c) => {
                lines.push(format!("pi0 = {}", c.pi0));
                lines.push(format!("warn_mass = {}", c.warn_mass));
                lines.push(format!("drift_mass = {}", c.drift_mass));
                lines.push(format!("bound_mode = {}", c.bound_mode));
                match c.decay {
                    DecaySchedule::Exponential { a, b } => {
                        lines.push(format!("decay_a = {a}"));
                        lines.push(format!("decay_b = {b}"));
                    }
                    DecaySchedule::Constant(d) => lines.push(format!("decay_constant = {d}")),
                }
            }
            DetectorSpec::Ddm(c) => {
                lines.push(format!("ddm_warmup = {}", c.warmup));
                lines.push(format!("ddm_warning = {}", c.warning_level));
                lines.push(format!("ddm_drift = {}", c.drift_level));
            }
            DetectorSpec::Eddm(c) => {
                lines.push(format!("eddm_min_errors = {}", c.min_errors));
                lines.push(format!("eddm_warning = {}", c.warning_ratio));
                lines.push(format!("eddm_drift = {}", c.drift_ratio));
            }
            DetectorSpec::None => {}
        }
        lines.push(format!("runs = {}", self.runs));
        lines.push(format!("batch_size = {}", self.batch_size));
        lines.push(format!("seed = {}", self.base_seed));
        lines.push(format!("jobs = {}", self.jobs));
        lines.push(format!("out = {}", self.out_dir.display()));
        lines.join("\n") + "\n"
    }

    pub fn seeds(&self) -> impl Iterator<Item = u64> {
        let base = self.base_seed;
        (0..self.runs as u64).map(move |i| base + i)
    }
}

/// One run of a campaign.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub seed: u64,
    pub trace: RunTrace,
    pub outcome: DetectionOutcome,
    /// Overall accuracy; absent for bit streams, which have no classifier.
    pub accuracy: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Campaign {
    pub config: ExperimentConfig,
    pub runs: Vec<RunOutput>,
    pub summary: MetricSummary,
}

fn load_fixed_stream(dataset: &DatasetSpec) -> Result<Option<Vec<LabeledInstance>>> {
    match dataset {
        DatasetSpec::Elec2 { path } => {
            let data = load_elec2(path)?;
            Ok(Some(data.instances))
        }
        _ => Ok(None),
    }
}

/// Runs one seed. `fixed` holds a preloaded file-backed stream.
pub fn run_once(
    config: &ExperimentConfig,
    seed: u64,
    fixed: Option<&[LabeledInstance]>,
) -> Result<RunOutput> {
    let pcfg = PrequentialConfig {
        batch_size: config.batch_size,
        detector: config.detector.clone(),
    };
    let (trace, changes, accuracy) = match &config.dataset {
        DatasetSpec::BitStream { .. } => {
            let bcfg = config
                .dataset
                .bitstream_config(seed)
                .expect("bit-stream dataset");
            let stream = gen_bitstream(&bcfg)?;
            let trace = run_on_errors(&stream.bits, &pcfg)?;
            // only rises in the error rate are detectable
            (trace, stream.upward_changes(), None)
        }
        DatasetSpec::Sea { noise } => {
            let s = gen_sea(*noise, seed)?;
            let trace = run_prequential(&s.instances, &pcfg)?;
            let acc = trace.accuracy();
            (trace, s.changes, Some(acc))
        }
        DatasetSpec::Hyperplane { angle_deg } => {
            let s = gen_hyperplane(*angle_deg, seed)?;
            let trace = run_prequential(&s.instances, &pcfg)?;
            let acc = trace.accuracy();
            (trace, s.changes, Some(acc))
        }
        DatasetSpec::Elec2 { path } => {
            let owned;
            let instances = match fixed {
                Some(f) => f,
                None => {
                    owned = load_elec2(path)?.instances;
                    &owned[..]
                }
            };
            let trace = run_prequential(instances, &pcfg)?;
            let acc = trace.accuracy();
            (trace, ChangePointLog::empty(), Some(acc))
        }
    };
    let outcome = match_detections(
        &trace.drift_batches(),
        &changes,
        config.batch_size,
        trace.stream_len(),
    );
    Ok(RunOutput {
        seed,
        trace,
        outcome,
        accuracy,
    })
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))
}

/// Runs every seed of the campaign, in parallel up to `config.jobs`.
pub fn run_campaign(config: &ExperimentConfig) -> Result<Campaign> {
    config.validate()?;
    let fixed = load_fixed_stream(&config.dataset)?;
    let seeds: Vec<u64> = config.seeds().collect();
    let runs = thread_pool(config.jobs)?.install(|| {
        seeds
            .par_iter()
            .map(|&seed| run_once(config, seed, fixed.as_deref()))
            .collect::<Result<Vec<_>>>()
    })?;
    let outcomes: Vec<DetectionOutcome> = runs.iter().map(|r| r.outcome.clone()).collect();
    let accuracies: Option<Vec<f64>> = runs.iter().map(|r| r.accuracy).collect();
    let summary = summarize(&outcomes, accuracies.as_deref());
    Ok(Campaign {
        config: config.clone(),
        runs,
        summary,
    })
}

fn write_file(
    path: &Path,
    created: &mut Vec<PathBuf>,
    body: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    let file = fs::File::create(path)?;
    created.push(path.to_path_buf());
    let mut out = BufWriter::new(file);
    body(&mut out)?;
    out.flush()?;
    Ok(())
}

/// Writes `config.echo`, `summary.csv` and one `trace_<seed>.csv` per run.
/// On failure the files already written are removed.
pub fn write_artifacts(campaign: &Campaign, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut created = Vec::new();
    let result = (|| {
        for run in &campaign.runs {
            let path = dir.join(format!("trace_{}.csv", run.seed));
            write_file(&path, &mut created, |w| run.trace.write_csv(w))?;
        }
        write_file(&dir.join("summary.csv"), &mut created, |w| {
            campaign.summary.write_csv(w)
        })?;
        write_file(&dir.join("config.echo"), &mut created, |w| {
            w.write_all(campaign.config.echo().as_bytes())?;
            Ok(())
        })
    })();
    match result {
        Ok(()) => Ok(created),
        Err(e) => {
            for p in &created {
                let _ = fs::remove_file(p);
            }
            Err(e)
        }
    }
}

/// Runs a campaign and writes its artifacts to `config.out_dir`.
pub fn cmd_run(config: &ExperimentConfig) -> Result<Campaign> {
    let campaign = run_campaign(config)?;
    write_artifacts(&campaign, &config.out_dir)?;
    Ok(campaign)
}

/// Options shared by every table campaign.
#[derive(Debug, Clone)]
pub struct TableOptions {
    pub runs: usize,
    pub base_seed: u64,
    pub batch_size: usize,
    pub jobs: usize,
    pub elec2_path: PathBuf,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            runs: 50,
            base_seed: 0,
            batch_size: 200,
            jobs: 0,
            elec2_path: elec2_path(None),
        }
    }
}

/// One consolidated results table.
#[derive(Debug, Clone)]
pub struct ResultTable {
    pub header: Vec<String>,
    /// Cells as `mean (± std)`.
    pub rows: Vec<Vec<String>>,
    /// Column labels and values for the CSV form; mean and std get separate columns.
    pub csv_header: Vec<String>,
    pub csv_rows: Vec<Vec<String>>,
}

impl ResultTable {
    pub fn to_text(&self) -> String {
        render_table(&self.header, &self.rows)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", self.csv_header.join(","))?;
        for r in &self.csv_rows {
            writeln!(out, "{}", r.join(","))?;
        }
        Ok(())
    }
}

pub const TABLE1_SEGMENTS: [usize; 2] = [600, 1000];
pub const TABLE1_MAGNITUDES: [(f64, f64); 3] = [(0.1, 0.3), (0.3, 0.5), (0.5, 0.7)];
pub const TABLE2_NOISE: [f64; 3] = [0.0, 0.1, 0.2];
pub const TABLE2_ANGLES: [f64; 3] = [20.0, 30.0, 40.0];

fn campaign_for(
    opts: &TableOptions,
    dataset: DatasetSpec,
    detector: &str,
) -> Result<MetricSummary> {
    let cfg = ExperimentConfig {
        dataset,
        detector: detector.parse()?,
        runs: opts.runs,
        batch_size: opts.batch_size,
        base_seed: opts.base_seed,
        jobs: opts.jobs,
        out_dir: PathBuf::new(),
    };
    Ok(run_campaign(&cfg)?.summary)
}

fn csv_pair(m: Option<crate::metrics::MeanStd>) -> [String; 2] {
    match m {
        Some(m) => [sig6(m.mean), sig6(m.std)],
        None => [String::new(), String::new()],
    }
}

fn table_label(detector: &str) -> &'static str {
    match detector {
        "none" => "No Detector",
        "ddm" => "DDM",
        "eddm" => "EDDM",
        _ => "BD3",
    }
}

type SummaryField = fn(&MetricSummary) -> Option<crate::metrics::MeanStd>;

/// FPR, FNR and delay for three detectors on every bit-stream setting.
pub fn table1(opts: &TableOptions) -> Result<ResultTable> {
    let configs: Vec<(usize, (f64, f64))> = TABLE1_SEGMENTS
        .iter()
        .flat_map(|&s| TABLE1_MAGNITUDES.iter().map(move |&m| (s, m)))
        .collect();
    let mut header = vec!["algorithm".to_string(), "metric".to_string()];
    let mut csv_header = header.clone();
    for (s, (a, b)) in &configs {
        header.push(format!("{s} [{a}, {b}]"));
        csv_header.push(format!("s{s}_m{a}-{b}_mean"));
        csv_header.push(format!("s{s}_m{a}-{b}_std"));
    }
    let mut rows = Vec::new();
    let mut csv_rows = Vec::new();
    for det in ["ddm", "eddm", "bd3"] {
        let summaries = configs
            .iter()
            .map(|&(segment, magnitude)| {
                campaign_for(
                    opts,
                    DatasetSpec::BitStream {
                        segment,
                        n_changes: 30,
                        magnitude,
                    },
                    det,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let metrics: [(&str, SummaryField); 3] = [
            ("FPR", |s| Some(s.fpr)),
            ("FNR", |s| s.fnr),
            ("Delay", |s| s.delay),
        ];
        for (label, get) in metrics {
            let mut row = vec![table_label(det).to_string(), label.to_string()];
            let mut csv_row = row.clone();
            for s in &summaries {
                row.push(cell(get(s)));
                csv_row.extend(csv_pair(get(s)));
            }
            rows.push(row);
            csv_rows.push(csv_row);
        }
    }
    Ok(ResultTable {
        header,
        rows,
        csv_header,
        csv_rows,
    })
}

/// Accuracy on SEA and the rotating hyperplane, with and without detectors.
pub fn table2(opts: &TableOptions) -> Result<ResultTable> {
    let datasets: Vec<(String, String, DatasetSpec)> = TABLE2_NOISE
        .iter()
        .map(|&noise| {
            (
                format!("SEA {noise}"),
                format!("sea_{noise}"),
                DatasetSpec::Sea { noise },
            )
        })
        .chain(TABLE2_ANGLES.iter().map(|&angle_deg| {
            (
                format!("Hyperplane {angle_deg}"),
                format!("hyperplane_{angle_deg}"),
                DatasetSpec::Hyperplane { angle_deg },
            )
        }))
        .collect();
    accuracy_table(opts, &datasets)
}

/// Accuracy on Elec2. Fails, naming the path, when the file is missing.
pub fn table3(opts: &TableOptions) -> Result<ResultTable> {
    if !opts.elec2_path.is_file() {
        return Err(Error::Data {
            path: opts.elec2_path.clone(),
            message: format!("Elec2 file not found (set {ELEC2_ENV} or pass --elec2)"),
        });
    }
    let datasets = vec![(
        "Elec2".to_string(),
        "elec2".to_string(),
        DatasetSpec::Elec2 {
            path: opts.elec2_path.clone(),
        },
    )];
    accuracy_table(opts, &datasets)
}

fn accuracy_table(
    opts: &TableOptions,
    datasets: &[(String, String, DatasetSpec)],
) -> Result<ResultTable> {
    let mut header = vec!["algorithm".to_string()];
    let mut csv_header = header.clone();
    for (label, key, _) in datasets {
        header.push(label.clone());
        csv_header.push(format!("{key}_mean"));
        csv_header.push(format!("{key}_std"));
    }
    let mut rows = Vec::new();
    let mut csv_rows = Vec::new();
    for det in ["none", "ddm", "eddm", "bd3"] {
        let mut row = vec![table_label(det).to_string()];
        let mut csv_row = row.clone();
        for (_, _, ds) in datasets {
            let acc = campaign_for(opts, ds.clone(), det)?.accuracy;
            row.push(cell(acc));
            csv_row.extend(csv_pair(acc));
        }
        rows.push(row);
        csv_rows.push(csv_row);
    }
    Ok(ResultTable {
        header,
        rows,
        csv_header,
        csv_rows,
    })
}

pub fn cmd_table(which: u8, opts: &TableOptions) -> Result<ResultTable> {
    match which {
        1 => table1(opts),
        2 => table2(opts),
        3 => table3(opts),
        other => Err(Error::config(format!("no table {other} (valid: 1, 2, 3)"))),
    }
}

pub const DENSITY_POINTS: usize = 1000;

/// A beta density sampled on a grid, with its central interval.
#[derive(Debug, Clone)]
pub struct DensityCurve {
    pub params: BetaParams,
    pub mass: f64,
    pub xs: Vec<f64>,
    pub pdf: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
}

impl DensityCurve {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,pdf")?;
        for (x, p) in self.xs.iter().zip(&self.pdf) {
            writeln!(out, "{},{}", sig6(*x), sig6(*p))?;
        }
        Ok(())
    }

    pub fn write_bounds<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "alpha,beta,mass,lower,upper")?;
        writeln!(
            out,
            "{},{},{},{},{}",
            sig6(self.params.alpha()),
            sig6(self.params.beta()),
            sig6(self.mass),
            sig6(self.lower),
            sig6(self.upper)
        )?;
        Ok(())
    }
}

/// Samples the density at the midpoints of [`DENSITY_POINTS`] equal cells.
pub fn cmd_density(alpha: f64, beta: f64, mass: f64) -> Result<DensityCurve> {
    let params = BetaParams::new(alpha, beta)?;
    let (lower, upper) = params.central_interval(mass)?;
    let xs: Vec<f64> = (0..DENSITY_POINTS)
        .map(|i| (i as f64 + 0.5) / DENSITY_POINTS as f64)
        .collect();
    let pdf = xs
        .iter()
        .map(|&x| params.pdf(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityCurve {
        params,
        mass,
        xs,
        pdf,
        lower,
        upper,
    })
}

/// Writes `stream.csv` and `changes.txt` for one generated stream.
pub fn cmd_gen(dataset: &DatasetSpec, seed: u64, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut created = Vec::new();
    let stream_path = dir.join("stream.csv");
    let changes_path = dir.join("changes.txt");
    let result = (|| match dataset {
        DatasetSpec::BitStream { .. } => {
            let s = gen_bitstream(&dataset.bitstream_config(seed).expect("bit-stream dataset"))?;
            write_file(&stream_path, &mut created, |w| write_bits_csv(w, &s.bits))?;
            write_file(&changes_path, &mut created, |w| s.changes.write(w))
        }
        DatasetSpec::Sea { noise } => {
            let s = gen_sea(*noise, seed)?;
            write_file(&stream_path, &mut created, |w| {
                write_instances_csv(w, &s.instances)
            })?;
            write_file(&changes_path, &mut created, |w| s.changes.write(w))
        }
        DatasetSpec::Hyperplane { angle_deg } => {
            let s = gen_hyperplane(*angle_deg, seed)?;
            write_file(&stream_path, &mut created, |w| {
                write_instances_csv(w, &s.instances)
            })?;
            write_file(&changes_path, &mut created, |w| s.changes.write(w))
        }
        DatasetSpec::Elec2 { .. } => Err(Error::config("gen works on synthetic datasets only")),
    })();
    match result {
        Ok(()) => Ok(created),
        Err(e) => {
            for p in &created {
                let _ = fs::remove_file(p);
            }
            Err(e)
        }
    }
}
