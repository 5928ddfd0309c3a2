//! Batchwise test-then-train evaluation.
//!
//! Every batch is first classified by the current model, the resulting error
//! vector goes to the drift detector, a drift signal replaces the model with
//! a fresh one, and finally the batch trains whichever model is current.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::baselines::{Ddm, DdmConfig, Eddm, EddmConfig};
use crate::bd3::{Bd3Config, Bd3Detector, Bd3State};
use crate::detector::{BatchDetector, ErrorBatch, Signal};
use crate::error::{Error, Result};
use crate::format::sig6;
use crate::naive_bayes::NaiveBayesModel;
use crate::streams::LabeledInstance;

pub const DEFAULT_BATCH_SIZE: usize = 200;

/// Names accepted by [`DetectorSpec::from_str`].
pub const DETECTOR_NAMES: [&str; 4] = ["none", "ddm", "eddm", "bd3"];

#[derive(Debug, Clone, PartialEq, Default)]
pub enum DetectorSpec {
    #[default]
    None,
    Ddm(DdmConfig),
    Eddm(EddmConfig),
    Bd3(Bd3Config),
}

impl DetectorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            DetectorSpec::None => "none",
            DetectorSpec::Ddm(_) => "ddm",
            DetectorSpec::Eddm(_) => "eddm",
            DetectorSpec::Bd3(_) => "bd3",
        }
    }

    /// A fresh detector, or `None` for the no-detector baseline.
    pub fn build(&self) -> Result<Option<Box<dyn BatchDetector>>> {
        Ok(match self {
            DetectorSpec::None => None,
            DetectorSpec::Ddm(c) => Some(Box::new(Ddm::new(*c)?)),
            DetectorSpec::Eddm(c) => Some(Box::new(Eddm::new(*c)?)),
            DetectorSpec::Bd3(c) => Some(Box::new(Bd3Detector::new(*c)?)),
        })
    }
}

impl fmt::Display for DetectorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DetectorSpec {
    type Err = Error;

    /// Default parameters for the named detector.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(DetectorSpec::None),
            "ddm" => Ok(DetectorSpec::Ddm(DdmConfig::default())),
            "eddm" => Ok(DetectorSpec::Eddm(EddmConfig::default())),
            "bd3" => Ok(DetectorSpec::Bd3(Bd3Config::default())),
            _ => Err(Error::config(format!(
                "unknown detector '{s}' (valid: {})",
                DETECTOR_NAMES.join(", ")
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrequentialConfig {
    pub batch_size: usize,
    pub detector: DetectorSpec,
}

impl Default for PrequentialConfig {
    fn default() -> Self {
        Self {
            batch_size: DEFAULT_BATCH_SIZE,
            detector: DetectorSpec::None,
        }
    }
}

impl PrequentialConfig {
    pub fn new(detector: DetectorSpec) -> Self {
        Self {
            detector,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::config("batch size must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchRecord {
    pub batch_index: usize,
    pub n: u64,
    pub k: u64,
    pub signal: Signal,
    pub state: Option<Bd3State>,
}

impl BatchRecord {
    pub fn accuracy(&self) -> f64 {
        1.0 - self.k as f64 / self.n as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub batch_size: usize,
    pub records: Vec<BatchRecord>,
}

impl RunTrace {
    pub fn n_batches(&self) -> usize {
        self.records.len()
    }

    /// Indices of batches that raised a drift signal.
    pub fn drift_batches(&self) -> Vec<usize> {
        self.records
            .iter()
            .filter(|r| r.signal.is_drift())
            .map(|r| r.batch_index)
            .collect()
    }

    pub fn stream_len(&self) -> usize {
        self.records.iter().map(|r| r.n as usize).sum()
    }

    /// Fraction of correctly classified instances over the whole stream.
    pub fn accuracy(&self) -> f64 {
        let n: u64 = self.records.iter().map(|r| r.n).sum();
        let k: u64 = self.records.iter().map(|r| r.k).sum();
        1.0 - k as f64 / n as f64
    }

    /// `batch_index,n,k,accuracy,signal,alpha,beta,t`; the last three are
    /// empty for detectors without a beta posterior.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "batch_index,n,k,accuracy,signal,alpha,beta,t")?;
        for r in &self.records {
            write!(
                out,
                "{},{},{},{},{},",
                r.batch_index,
                r.n,
                r.k,
                sig6(r.accuracy()),
                r.signal
            )?;
            match &r.state {
                Some(s) => writeln!(out, "{},{},{}", sig6(s.alpha), sig6(s.beta), s.t)?,
                None => writeln!(out, ",,")?,
            }
        }
        Ok(())
    }
}

/// Runs the classifier and detector over `stream`.
pub fn run_prequential(stream: &[LabeledInstance], config: &PrequentialConfig) -> Result<RunTrace> {
    config.validate()?;
    let mut detector = config.detector.build()?;
    run_with_detector(
        stream,
        config.batch_size,
        detector.as_deref_mut().map(|d| d as &mut dyn BatchDetector),
    )
}

/// Same loop with a caller-supplied detector.
pub fn run_with_detector(
    stream: &[LabeledInstance],
    batch_size: usize,
    mut detector: Option<&mut dyn BatchDetector>,
) -> Result<RunTrace> {
    if stream.is_empty() {
        return Err(Error::config("cannot evaluate an empty stream"));
    }
    if batch_size == 0 {
        return Err(Error::config("batch size must be at least 1"));
    }
    let mut model = NaiveBayesModel::default();
    let mut records = Vec::with_capacity(stream.len().div_ceil(batch_size));
    for (batch_index, batch) in stream.chunks(batch_size).enumerate() {
        let errors: Vec<bool> = batch
            .iter()
            .map(|inst| model.predict(&inst.features) != inst.label)
            .collect();
        let (signal, state) = match detector.as_deref_mut() {
            Some(d) => (d.update(&errors)?, d.snapshot()),
            None => (Signal::Stable, None),
        };
        if signal.is_drift() {
            model = NaiveBayesModel::default();
        }
        for inst in batch {
            model.train(inst)?;
        }
        let eb = ErrorBatch::from_errors(&errors)?;
        records.push(BatchRecord {
            batch_index,
            n: eb.n(),
            k: eb.k(),
            signal,
            state,
        });
    }
    Ok(RunTrace {
        batch_size,
        records,
    })
}

/// Classifier-free mode: `errors` is fed to the detector directly.
pub fn run_on_errors(errors: &[bool], config: &PrequentialConfig) -> Result<RunTrace> {
    config.validate()?;
    if errors.is_empty() {
        return Err(Error::config("cannot evaluate an empty stream"));
    }
    let mut detector = config.detector.build()?;
    let mut records = Vec::with_capacity(errors.len().div_ceil(config.batch_size));
    for (batch_index, batch) in errors.chunks(config.batch_size).enumerate() {
        let (signal, state) = match detector.as_deref_mut() {
            Some(d) => (d.update(batch)?, d.snapshot()),
            None => (Signal::Stable, None),
        };
        let eb = ErrorBatch::from_errors(batch)?;
        records.push(BatchRecord {
            batch_index,
            n: eb.n(),
            k: eb.k(),
            signal,
            state,
        });
    }
    Ok(RunTrace {
        batch_size: config.batch_size,
        records,
    })
}
