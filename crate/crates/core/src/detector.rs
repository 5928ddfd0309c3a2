//! Types shared by every drift detector.

use std::fmt;
use std::str::FromStr;

use crate::bd3::Bd3State;
use crate::error::{Error, Result};

/// Per-batch (or per-instance) detector verdict, ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Signal {
    #[default]
    Stable,
    Warning,
    Drift,
}

impl Signal {
    pub fn is_drift(self) -> bool {
        self == Signal::Drift
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Signal::Stable => "none",
            Signal::Warning => "warning",
            Signal::Drift => "drift",
        }
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Signal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Signal::Stable),
            "warning" => Ok(Signal::Warning),
            "drift" => Ok(Signal::Drift),
            other => Err(Error::config(format!("unknown signal '{other}'"))),
        }
    }
}

/// Binary error outcomes of one batch: `n` trials, `k` misclassifications.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErrorBatch {
    n: u64,
    k: u64,
}

impl ErrorBatch {
    pub fn new(n: u64, k: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("error batch must hold at least one instance"));
        }
        if k > n {
            return Err(Error::config(format!(
                "error batch has k = {k} misclassifications out of n = {n}"
            )));
        }
        Ok(Self { n, k })
    }

    pub fn from_errors(errors: &[bool]) -> Result<Self> {
        let k = errors.iter().filter(|&&e| e).count();
        Self::new(errors.len() as u64, k as u64)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn error_rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

/// A detector fed one batch of binary errors at a time.
///
/// Instance-wise detectors consume the batch in order and report the most
/// severe signal they raised inside it.
pub trait BatchDetector: Send {
    fn name(&self) -> &'static str;

    fn update(&mut self, errors: &[bool]) -> Result<Signal>;

    /// Beta-posterior snapshot, for detectors that keep one.
    fn snapshot(&self) -> Option<Bd3State> {
        None
    }
}

/// A detector fed one binary error at a time.
pub trait InstanceDetector {
    fn observe(&mut self, error: bool) -> Signal;

    /// Feed a whole batch; the batch's signal is the maximum seen inside it.
    fn observe_all(&mut self, errors: &[bool]) -> Signal {
        errors
            .iter()
            .map(|&e| self.observe(e))
            .max()
            .unwrap_or_default()
    }
}
