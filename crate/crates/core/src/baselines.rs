//! Instance-wise baseline detectors: DDM and EDDM.
//!
//! DDM tracks the running error rate `p` and its binomial standard deviation
//! `s`, remembers the point where `p + s` was smallest, and alarms when
//! `p + s` climbs two (warning) or three (drift) of the remembered standard
//! deviations above it.
//!
//! EDDM tracks the distance between consecutive errors instead. With `m` and
//! `sd` the running mean and standard deviation of that distance, the ratio
//! `(m + 2 sd) / max(m + 2 sd)` falling below 0.95 warns and below 0.90
//! signals drift.
//!
//! Both reset themselves after signalling drift.

use crate::detector::{BatchDetector, InstanceDetector, Signal};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdmConfig {
    /// Instances seen before any test is made.
    pub warmup: u64,
    pub warning_level: f64,
    pub drift_level: f64,
}

impl Default for DdmConfig {
    fn default() -> Self {
        Self {
            warmup: 30,
            warning_level: 2.0,
            drift_level: 3.0,
        }
    }
}

impl DdmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.warning_level > 0.0 && self.warning_level < self.drift_level) {
            return Err(Error::config(format!(
                "DDM levels must satisfy 0 < warning ({}) < drift ({})",
                self.warning_level, self.drift_level
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DdmState {
    pub i: u64,
    pub p: f64,
    pub s: f64,
    pub p_min: f64,
    pub s_min: f64,
}

impl Default for DdmState {
    fn default() -> Self {
        Self {
            i: 0,
            p: 0.0,
            s: 0.0,
            p_min: f64::INFINITY,
            s_min: f64::INFINITY,
        }
    }
}

/// One DDM step. Returns the signal and the next state (fresh after drift).
pub fn ddm_update(state: &DdmState, error: bool, config: &DdmConfig) -> (Signal, DdmState) {
    let mut st = state.clone();
    st.i += 1;
    let x = if error { 1.0 } else { 0.0 };
    st.p += (x - st.p) / st.i as f64;
    st.s = (st.p * (1.0 - st.p) / st.i as f64).sqrt();

    if st.i < config.warmup {
        return (Signal::Stable, st);
    }
    if st.p + st.s <= st.p_min + st.s_min {
        st.p_min = st.p;
        st.s_min = st.s;
    }
    let level = st.p + st.s;
    if level > st.p_min + config.drift_level * st.s_min {
        (Signal::Drift, DdmState::default())
    } else if level > st.p_min + config.warning_level * st.s_min {
        (Signal::Warning, st)
    } else {
        (Signal::Stable, st)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Ddm {
    config: DdmConfig,
    state: DdmState,
}

impl Ddm {
    pub fn new(config: DdmConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            state: DdmState::default(),
        })
    }

    pub fn state(&self) -> &DdmState {
        &self.state
    }
}

impl InstanceDetector for Ddm {
    fn observe(&mut self, error: bool) -> Signal {
        let (sig, next) = ddm_update(&self.state, error, &self.config);
        self.state = next;
        sig
    }
}

impl BatchDetector for Ddm {
    fn name(&self) -> &'static str {
        "ddm"
    }

    fn update(&mut self, errors: &[bool]) -> Result<Signal> {
        Ok(self.observe_all(errors))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EddmConfig {
    /// Errors observed before any test is made.
    pub min_errors: u64,
    pub warning_ratio: f64,
    pub drift_ratio: f64,
}

impl Default for EddmConfig {
    fn default() -> Self {
        Self {
            min_errors: 30,
            warning_ratio: 0.95,
            drift_ratio: 0.90,
        }
    }
}

impl EddmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.drift_ratio > 0.0
            && self.drift_ratio < self.warning_ratio
            && self.warning_ratio <= 1.0)
        {
            return Err(Error::config(format!(
                "EDDM ratios must satisfy 0 < drift ({}) < warning ({}) <= 1",
                self.drift_ratio, self.warning_ratio
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EddmState {
    /// Instances seen since the last reset.
    pub index: u64,
    pub error_count: u64,
    /// Instance index of the most recent error (0 before the first one).
    pub last_error_index: u64,
    pub mean_dist: f64,
    /// Welford sum of squared deviations of the gaps.
    m2: f64,
    pub max_stat: f64,
}

impl EddmState {
    pub fn std_dist(&self) -> f64 {
        if self.error_count == 0 {
            0.0
        } else {
            (self.m2 / self.error_count as f64).sqrt()
        }
    }
}

/// One EDDM step. Returns the signal and the next state (fresh after drift).
pub fn eddm_update(state: &EddmState, error: bool, config: &EddmConfig) -> (Signal, EddmState) {
    let mut st = state.clone();
    st.index += 1;
    if !error {
        return (Signal::Stable, st);
    }
    let gap = (st.index - st.last_error_index) as f64;
    st.last_error_index = st.index;
    st.error_count += 1;
    let old_mean = st.mean_dist;
    st.mean_dist += (gap - old_mean) / st.error_count as f64;
    st.m2 += (gap - st.mean_dist) * (gap - old_mean);

    let stat = st.mean_dist + 2.0 * st.std_dist();
    if stat >= st.max_stat {
        st.max_stat = stat;
    }
    if st.error_count < config.min_errors {
        return (Signal::Stable, st);
    }
    let ratio = stat / st.max_stat;
    if ratio < config.drift_ratio {
        (Signal::Drift, EddmState::default())
    } else if ratio < config.warning_ratio {
        (Signal::Warning, st)
    } else {
        (Signal::Stable, st)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Eddm {
    config: EddmConfig,
    state: EddmState,
}

impl Eddm {
    pub fn new(config: EddmConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            state: EddmState::default(),
        })
    }

    pub fn state(&self) -> &EddmState {
        &self.state
    }
}

impl InstanceDetector for Eddm {
    fn observe(&mut self, error: bool) -> Signal {
        let (sig, next) = eddm_update(&self.state, error, &self.config);
        self.state = next;
        sig
    }
}

impl BatchDetector for Eddm {
    fn name(&self) -> &'static str {
        "eddm"
    }

    fn update(&mut self, errors: &[bool]) -> Result<Signal> {
        Ok(self.observe_all(errors))
    }
}
