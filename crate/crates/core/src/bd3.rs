//! Beta distribution drift detection.
//!
//! The detector keeps a beta posterior over the classifier's error rate. Each
//! batch's error rate is tested against upper quantiles of the posterior left
//! by the previous batch; exceeding the drift bound resets the posterior to
//! its initial pseudo-counts. The batch is then folded in after dividing the
//! prior pseudo-counts by a decay factor that shrinks towards 1.1 as more
//! batches pass without a reset, which bounds the effective sample size at
//! about `n + n / (decay - 1)`.

use std::fmt;
use std::str::FromStr;

use crate::beta_math::BetaParams;
use crate::detector::{BatchDetector, ErrorBatch, Signal};
use crate::error::{Error, Result};

/// Pseudo-counts never drop below this, so long error-free runs cannot
/// drive a shape parameter to zero.
pub const MIN_PSEUDO_COUNT: f64 = 1e-2;

/// How a probability mass is turned into an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundMode {
    /// Upper end of the central interval holding `mass`: quantile `(1 + mass) / 2`.
    #[default]
    Central,
    /// Quantile `mass` itself.
    UpperTail,
}

impl BoundMode {
    pub fn quantile_level(self, mass: f64) -> f64 {
        match self {
            BoundMode::Central => 0.5 * (1.0 + mass),
            BoundMode::UpperTail => mass,
        }
    }
}

impl fmt::Display for BoundMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMode::Central => "central",
            BoundMode::UpperTail => "upper_tail",
        })
    }
}

impl FromStr for BoundMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "central" => Ok(BoundMode::Central),
            "upper_tail" | "upper-tail" => Ok(BoundMode::UpperTail),
            other => Err(Error::config(format!(
                "unknown bound mode '{other}' (expected central or upper_tail)"
            ))),
        }
    }
}

/// Divisor applied to the prior pseudo-counts before each update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecaySchedule {
    /// `1 / exp(a * (t + b)) + 1.1`, with `t` the tests since the last reset.
    Exponential { a: f64, b: f64 },
    /// The same divisor for every update; `Constant(1.0)` is plain conjugate
    /// updating.
    Constant(f64),
}

impl Default for DecaySchedule {
    fn default() -> Self {
        DecaySchedule::Exponential { a: 0.15, b: -7.0 }
    }
}

impl DecaySchedule {
    pub fn at(&self, t: u64) -> f64 {
        match *self {
            DecaySchedule::Exponential { a, b } => decay_value(t, a, b),
            DecaySchedule::Constant(d) => d,
        }
    }
}

/// `1 / exp(a (t + b)) + 1.1`.
pub fn decay_value(t: u64, a: f64, b: f64) -> f64 {
    (-a * (t as f64 + b)).exp() + 1.1
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bd3Config {
    /// Prior error rate used to seed the pseudo-counts.
    pub pi0: f64,
    pub warn_mass: f64,
    pub drift_mass: f64,
    pub decay: DecaySchedule,
    pub bound_mode: BoundMode,
}

impl Default for Bd3Config {
    fn default() -> Self {
        Self {
            pi0: 0.5,
            warn_mass: 0.950,
            drift_mass: 0.997,
            decay: DecaySchedule::default(),
            bound_mode: BoundMode::Central,
        }
    }
}

impl Bd3Config {
    pub fn validate(&self) -> Result<()> {
        if !(self.pi0 > 0.0 && self.pi0 < 1.0) {
            return Err(Error::config(format!(
                "pi0 = {} must lie in (0, 1)",
                self.pi0
            )));
        }
        if !(self.warn_mass > 0.0 && self.warn_mass < self.drift_mass && self.drift_mass < 1.0) {
            return Err(Error::config(format!(
                "masses must satisfy 0 < warn ({}) < drift ({}) < 1",
                self.warn_mass, self.drift_mass
            )));
        }
        match self.decay {
            DecaySchedule::Exponential { a, b } if !(a.is_finite() && b.is_finite()) => {
                Err(Error::config("decay parameters must be finite"))
            }
            DecaySchedule::Constant(d) if !(d >= 1.0 && d.is_finite()) => Err(Error::config(
                format!("constant decay {d} must be a finite value >= 1"),
            )),
            _ => Ok(()),
        }
    }
}

/// Posterior shape parameters, test counter and reset targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bd3State {
    pub alpha: f64,
    pub beta: f64,
    pub t: u64,
    pub alpha0: f64,
    pub beta0: f64,
}

impl Bd3State {
    pub fn params(&self) -> Result<BetaParams> {
        BetaParams::new(self.alpha, self.beta)
    }

    fn reset(&mut self) {
        self.alpha = self.alpha0;
        self.beta = self.beta0;
        self.t = 0;
    }
}

/// Upper bounds on the error rate derived from the current posterior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub warn_upper: f64,
    pub drift_upper: f64,
}

/// Seed pseudo-counts from a prior error rate and the first batch's size.
pub fn bd3_init(config: &Bd3Config, n0: u64) -> Result<Bd3State> {
    config.validate()?;
    if n0 == 0 {
        return Err(Error::config("initial batch size must be at least 1"));
    }
    let n0 = n0 as f64;
    let alpha0 = config.pi0 * n0;
    let beta0 = (1.0 - config.pi0) * n0;
    Ok(Bd3State {
        alpha: alpha0,
        beta: beta0,
        t: 0,
        alpha0,
        beta0,
    })
}

pub fn bd3_bounds(state: &Bd3State, config: &Bd3Config) -> Result<Bounds> {
    let post = state.params()?;
    let mode = config.bound_mode;
    Ok(Bounds {
        warn_upper: post.quantile(mode.quantile_level(config.warn_mass))?,
        drift_upper: post.quantile(mode.quantile_level(config.drift_mass))?,
    })
}

/// Test one batch against the current posterior, then fold it in.
///
/// The bounds come from the state as passed in. On drift the state is reset
/// before the batch is folded, so the returned state is built from the
/// initial pseudo-counts and this batch alone.
pub fn bd3_update(
    state: &Bd3State,
    batch: ErrorBatch,
    config: &Bd3Config,
) -> Result<(Signal, Bd3State)> {
    let bounds = bd3_bounds(state, config)?;
    let rate = batch.error_rate();
    let mut next = *state;

    let signal = if rate > bounds.drift_upper {
        next.reset();
        Signal::Drift
    } else if rate > bounds.warn_upper {
        Signal::Warning
    } else {
        Signal::Stable
    };

    let decay = config.decay.at(next.t);
    let k = batch.k() as f64;
    let misses = (batch.n() - batch.k()) as f64;
    next.alpha = (next.alpha / decay + k).max(MIN_PSEUDO_COUNT);
    next.beta = (next.beta / decay + misses).max(MIN_PSEUDO_COUNT);
    next.t += 1;
    Ok((signal, next))
}

/// Stateful wrapper: the first batch seeds the prior, then every batch
/// (including the first) goes through [`bd3_update`].
#[derive(Debug, Clone)]
pub struct Bd3Detector {
    config: Bd3Config,
    state: Option<Bd3State>,
    last_bounds: Option<Bounds>,
}

impl Bd3Detector {
    pub fn new(config: Bd3Config) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            state: None,
            last_bounds: None,
        })
    }

    pub fn config(&self) -> &Bd3Config {
        &self.config
    }

    pub fn state(&self) -> Option<&Bd3State> {
        self.state.as_ref()
    }

    /// Bounds used to test the most recent batch.
    pub fn last_bounds(&self) -> Option<Bounds> {
        self.last_bounds
    }

    pub fn update_batch(&mut self, batch: ErrorBatch) -> Result<Signal> {
        let state = match self.state {
            Some(s) => s,
            None => bd3_init(&self.config, batch.n())?,
        };
        self.last_bounds = Some(bd3_bounds(&state, &self.config)?);
        let (signal, next) = bd3_update(&state, batch, &self.config)?;
        self.state = Some(next);
        Ok(signal)
    }
}

impl BatchDetector for Bd3Detector {
    fn name(&self) -> &'static str {
        "bd3"
    }

    fn update(&mut self, errors: &[bool]) -> Result<Signal> {
        self.update_batch(ErrorBatch::from_errors(errors)?)
    }

    fn snapshot(&self) -> Option<Bd3State> {
        self.state
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    use super::*;

    fn state(alpha: f64, beta: f64, t: u64) -> Bd3State {
        Bd3State {
            alpha,
            beta,
            t,
            alpha0: 100.0,
            beta0: 100.0,
        }
    }

    fn no_decay() -> Bd3Config {
        Bd3Config {
            decay: DecaySchedule::Constant(1.0),
            ..Bd3Config::default()
        }
    }

    #[test]
    fn init_from_prior_rate() {
        let cfg = Bd3Config::default();
        let s = bd3_init(&cfg, 200).unwrap();
        assert_eq!((s.alpha0, s.beta0, s.t), (100.0, 100.0, 0));
        assert_eq!((s.alpha, s.beta), (100.0, 100.0));

        let s = bd3_init(&Bd3Config { pi0: 0.1, ..cfg }, 100).unwrap();
        assert_abs_diff_eq!(s.alpha0, 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.beta0, 90.0, epsilon = 1e-12);

        let s = bd3_init(&Bd3Config { pi0: 0.25, ..cfg }, 8).unwrap();
        assert_eq!((s.alpha0, s.beta0), (2.0, 6.0));
    }

    #[test]
    fn init_rejects_bad_config() {
        for pi0 in [0.0, 1.0, -0.3, f64::NAN] {
            let cfg = Bd3Config {
                pi0,
                ..Bd3Config::default()
            };
            assert!(bd3_init(&cfg, 200).is_err());
        }
        assert!(bd3_init(&Bd3Config::default(), 0).is_err());
        let cfg = Bd3Config {
            warn_mass: 0.99,
            drift_mass: 0.95,
            ..Bd3Config::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = Bd3Config {
            decay: DecaySchedule::Constant(0.9),
            ..Bd3Config::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn decay_schedule_values() {
        // exp(1.05) + 1.1
        assert_abs_diff_eq!(decay_value(0, 0.15, -7.0), 3.957_651_118, epsilon = 1e-8);
        assert_abs_diff_eq!(decay_value(7, 0.15, -7.0), 2.1, epsilon = 1e-15);
        assert_abs_diff_eq!(decay_value(10_000, 0.15, -7.0), 1.1, epsilon = 1e-15);
        let mut prev = f64::INFINITY;
        for t in 0..200 {
            let d = decay_value(t, 0.15, -7.0);
            assert!(d < prev && d > 1.1);
            prev = d;
        }
    }

    #[test]
    fn uniform_bounds() {
        let s = Bd3State {
            alpha: 1.0,
            beta: 1.0,
            t: 0,
            alpha0: 1.0,
            beta0: 1.0,
        };
        let b = bd3_bounds(&s, &Bd3Config::default()).unwrap();
        assert_abs_diff_eq!(b.warn_upper, 0.975, epsilon = 1e-12);
        assert_abs_diff_eq!(b.drift_upper, 0.9985, epsilon = 1e-12);

        let upper = Bd3Config {
            bound_mode: BoundMode::UpperTail,
            ..Bd3Config::default()
        };
        let b = bd3_bounds(&s, &upper).unwrap();
        assert_abs_diff_eq!(b.warn_upper, 0.95, epsilon = 1e-12);
        assert_abs_diff_eq!(b.drift_upper, 0.997, epsilon = 1e-12);
    }

    #[test]
    fn symmetric_bounds_match_bisection() {
        let s = state(100.0, 100.0, 0);
        let b = bd3_bounds(&s, &Bd3Config::default()).unwrap();
        let post = s.params().unwrap();
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if post.cdf(mid).unwrap() < 0.9985 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_abs_diff_eq!(b.drift_upper, lo, epsilon = 1e-10);
        assert!(b.warn_upper < b.drift_upper);
        // about three posterior standard deviations above one half
        assert!((b.drift_upper - 0.604).abs() < 0.01);
    }

    #[test]
    fn stable_update_applies_decay_at_current_counter() {
        let cfg = Bd3Config::default();
        let (sig, next) = bd3_update(
            &state(100.0, 100.0, 7),
            ErrorBatch::new(200, 10).unwrap(),
            &cfg,
        )
        .unwrap();
        assert_eq!(sig, Signal::Stable);
        assert_abs_diff_eq!(next.alpha, 100.0 / 2.1 + 10.0, epsilon = 1e-10);
        assert_abs_diff_eq!(next.beta, 100.0 / 2.1 + 190.0, epsilon = 1e-10);
        assert_abs_diff_eq!(next.alpha, 57.619_047_619, epsilon = 1e-8);
        assert_abs_diff_eq!(next.beta, 237.619_047_619, epsilon = 1e-8);
        assert_eq!(next.t, 8);
    }

    #[test]
    fn all_errors_trigger_drift_and_rebuild_from_reset() {
        let cfg = Bd3Config::default();
        let (sig, next) = bd3_update(
            &state(100.0, 100.0, 12),
            ErrorBatch::new(200, 200).unwrap(),
            &cfg,
        )
        .unwrap();
        assert_eq!(sig, Signal::Drift);
        let d0 = decay_value(0, 0.15, -7.0);
        assert_abs_diff_eq!(next.alpha, 100.0 / d0 + 200.0, epsilon = 1e-10);
        assert_abs_diff_eq!(
            next.beta,
            (100.0 / d0).max(MIN_PSEUDO_COUNT),
            epsilon = 1e-10
        );
        assert_eq!(next.t, 1);
    }

    #[test]
    fn mean_error_rate_is_stable() {
        let (sig, _) = bd3_update(
            &state(100.0, 100.0, 3),
            ErrorBatch::new(200, 100).unwrap(),
            &Bd3Config::default(),
        )
        .unwrap();
        assert_eq!(sig, Signal::Stable);
    }

    #[test]
    fn warning_band() {
        // Beta(100,100): warn bound near 0.569, drift bound near 0.604
        let (sig, _) = bd3_update(
            &state(100.0, 100.0, 3),
            ErrorBatch::new(200, 117).unwrap(),
            &Bd3Config::default(),
        )
        .unwrap();
        assert_eq!(sig, Signal::Warning);
    }

    #[test]
    fn plain_conjugate_update_without_decay() {
        let (_, next) = bd3_update(
            &state(100.0, 100.0, 0),
            ErrorBatch::new(200, 10).unwrap(),
            &no_decay(),
        )
        .unwrap();
        assert_eq!((next.alpha, next.beta), (110.0, 290.0));
    }

    #[test]
    fn detector_first_batch_initializes_then_updates() {
        let mut det = Bd3Detector::new(Bd3Config::default()).unwrap();
        assert!(det.state().is_none());
        let mut errors = vec![false; 200];
        errors[..30].iter_mut().for_each(|e| *e = true);
        assert_eq!(det.update(&errors).unwrap(), Signal::Stable);
        let s = det.snapshot().unwrap();
        let d0 = decay_value(0, 0.15, -7.0);
        assert_abs_diff_eq!(s.alpha, 100.0 / d0 + 30.0, epsilon = 1e-10);
        assert_abs_diff_eq!(s.beta, 100.0 / d0 + 170.0, epsilon = 1e-10);
        assert_eq!((s.t, s.alpha0, s.beta0), (1, 100.0, 100.0));
        assert!(det.last_bounds().is_some());
    }

    #[test]
    fn error_free_stream_keeps_positive_pseudo_counts() {
        let mut det = Bd3Detector::new(Bd3Config::default()).unwrap();
        let clean = vec![false; 200];
        for _ in 0..20_000 {
            assert_ne!(det.update(&clean).unwrap(), Signal::Drift);
        }
        let s = det.snapshot().unwrap();
        assert!(s.alpha >= MIN_PSEUDO_COUNT && s.beta > 0.0);
        // one error now lies far above the collapsed bound
        let mut one = clean.clone();
        one[0] = true;
        assert_eq!(det.update(&one).unwrap(), Signal::Drift);
    }

    #[test]
    fn constant_decay_limit() {
        let cfg = Bd3Config {
            decay: DecaySchedule::Constant(1.1),
            ..Bd3Config::default()
        };
        let batch = ErrorBatch::new(200, 40).unwrap();
        let mut s = bd3_init(&cfg, 200).unwrap();
        for _ in 0..300 {
            let (sig, next) = bd3_update(&s, batch, &cfg).unwrap();
            assert_ne!(sig, Signal::Drift);
            s = next;
        }
        let limit = 200.0 + 200.0 / 0.1;
        assert!(((s.alpha + s.beta) - limit).abs() / limit < 1e-3);
    }

    #[test]
    fn scheduled_decay_limit() {
        let cfg = Bd3Config::default();
        let batch = ErrorBatch::new(200, 40).unwrap();
        let mut s = bd3_init(&cfg, 200).unwrap();
        for _ in 0..200 {
            s = bd3_update(&s, batch, &cfg).unwrap().1;
        }
        assert!(((s.alpha + s.beta) - 2200.0).abs() / 2200.0 < 0.01);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn conjugacy_without_decay(
            batches in prop::collection::vec((1u64..400, 0.0f64..=1.0), 1..40),
        ) {
            let cfg = no_decay();
            let mut s = bd3_init(&cfg, 200).unwrap();
            let (mut ks, mut ms) = (0.0, 0.0);
            for (n, frac) in batches {
                let k = (frac * n as f64).floor() as u64;
                // bypass the drift test's reset by tracking from the returned state
                let (sig, next) = bd3_update(&s, ErrorBatch::new(n, k).unwrap(), &cfg).unwrap();
                if sig == Signal::Drift {
                    ks = 0.0;
                    ms = 0.0;
                }
                ks += k as f64;
                ms += (n - k) as f64;
                s = next;
                prop_assert!((s.alpha - (100.0 + ks)).abs() <= 1e-9 * s.alpha);
                prop_assert!((s.beta - (100.0 + ms)).abs() <= 1e-9 * s.beta);
            }
        }

        #[test]
        fn more_errors_never_signal_less(
            alpha in 1.0f64..2000.0,
            beta in 1.0f64..2000.0,
            t in 0u64..50,
            n in 1u64..400,
            ka in 0.0f64..=1.0,
            kb in 0.0f64..=1.0,
        ) {
            let cfg = Bd3Config::default();
            let s = state(alpha, beta, t);
            let (lo, hi) = if ka < kb { (ka, kb) } else { (kb, ka) };
            let k_lo = (lo * n as f64).floor() as u64;
            let k_hi = (hi * n as f64).floor() as u64;
            let (sig_lo, _) = bd3_update(&s, ErrorBatch::new(n, k_lo).unwrap(), &cfg).unwrap();
            let (sig_hi, _) = bd3_update(&s, ErrorBatch::new(n, k_hi).unwrap(), &cfg).unwrap();
            prop_assert!(sig_hi >= sig_lo);
        }

        #[test]
        fn drift_resets_counter(alpha in 1.0f64..3000.0, beta in 50.0f64..3000.0, t in 0u64..100) {
            let cfg = Bd3Config::default();
            let s = state(alpha, beta, t);
            let bounds = bd3_bounds(&s, &cfg).unwrap();
            prop_assume!(bounds.drift_upper < 0.999);
            let (sig, next) = bd3_update(&s, ErrorBatch::new(200, 200).unwrap(), &cfg).unwrap();
            prop_assert_eq!(sig, Signal::Drift);
            let d0 = cfg.decay.at(0);
            prop_assert!((next.alpha - (100.0 / d0 + 200.0)).abs() < 1e-9);
            prop_assert_eq!(next.t, 1);
        }
    }
}
