use rand::{Rng, SeedableRng};

use super::{ChangePointLog, StreamRng};
use crate::error::{Error, Result};

/// Means of every concept stay inside this range.
const MEAN_RANGE: (f64, f64) = (0.05, 0.95);
/// The first concept's mean is drawn uniformly from this range.
const FIRST_MEAN_RANGE: (f64, f64) = (0.2, 0.8);
const MAGNITUDE_DRAWS: usize = 100;
const SEQUENCE_RESTARTS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct BitStreamConfig {
    /// Bits per stable concept.
    pub segment_length: usize,
    pub n_changes: usize,
    /// Bounds `[a, b]` on the absolute difference between consecutive means.
    pub magnitude: (f64, f64),
    pub seed: u64,
}

impl Default for BitStreamConfig {
    fn default() -> Self {
        Self {
            segment_length: 600,
            n_changes: 30,
            magnitude: (0.1, 0.3),
            seed: 0,
        }
    }
}

impl BitStreamConfig {
    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.magnitude;
        if !(a > 0.0 && a <= b && b < 1.0) {
            return Err(Error::config(format!(
                "magnitude interval [{a}, {b}] must satisfy 0 < a <= b < 1"
            )));
        }
        if self.segment_length == 0 {
            return Err(Error::config("segment length must be at least 1"));
        }
        Ok(())
    }
}

/// Bernoulli bits whose mean jumps at every segment boundary.
#[derive(Debug, Clone)]
pub struct BitStream {
    pub bits: Vec<bool>,
    /// One mean per segment.
    pub means: Vec<f64>,
    pub changes: ChangePointLog,
}

impl BitStream {
    /// The change points at which the mean went up.
    ///
    /// A detector that watches for error increases can only ever find these.
    pub fn upward_changes(&self) -> ChangePointLog {
        let positions = self
            .changes
            .positions()
            .iter()
            .zip(self.means.windows(2))
            .filter(|(_, w)| w[1] > w[0])
            .map(|(&p, _)| p)
            .collect();
        ChangePointLog { positions }
    }
}

pub fn gen_bitstream(config: &BitStreamConfig) -> Result<BitStream> {
    config.validate()?;
    let mut rng = StreamRng::seed_from_u64(config.seed);
    let means = mean_sequence(config, &mut rng)?;

    let len = config.segment_length * means.len();
    let mut bits = Vec::with_capacity(len);
    for &mu in &means {
        bits.extend((0..config.segment_length).map(|_| rng.random::<f64>() < mu));
    }
    let positions = (1..means.len())
        .map(|j| j * config.segment_length)
        .collect();
    Ok(BitStream {
        bits,
        means,
        changes: ChangePointLog::new(positions, len)?,
    })
}

fn mean_sequence(config: &BitStreamConfig, rng: &mut StreamRng) -> Result<Vec<f64>> {
    let (a, b) = config.magnitude;
    let inside = |m: f64| (MEAN_RANGE.0..=MEAN_RANGE.1).contains(&m);
    'restart: for _ in 0..SEQUENCE_RESTARTS {
        let mut means = Vec::with_capacity(config.n_changes + 1);
        means.push(rng.random_range(FIRST_MEAN_RANGE.0..=FIRST_MEAN_RANGE.1));
        for _ in 0..config.n_changes {
            let prev = *means.last().expect("sequence starts non-empty");
            let mut next = None;
            for _ in 0..MAGNITUDE_DRAWS {
                let step = if a == b { a } else { rng.random_range(a..=b) };
                let up: bool = rng.random();
                let first = if up { prev + step } else { prev - step };
                let flipped = if up { prev - step } else { prev + step };
                if inside(first) {
                    next = Some(first);
                } else if inside(flipped) {
                    next = Some(flipped);
                }
                if next.is_some() {
                    break;
                }
            }
            match next {
                Some(m) => means.push(m),
                None => continue 'restart,
            }
        }
        return Ok(means);
    }
    Err(Error::config(format!(
        "no mean sequence with steps in [{a}, {b}] fits inside [{}, {}]",
        MEAN_RANGE.0, MEAN_RANGE.1
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(segment: usize, magnitude: (f64, f64), seed: u64) -> BitStreamConfig {
        BitStreamConfig {
            segment_length: segment,
            n_changes: 30,
            magnitude,
            seed,
        }
    }

    #[test]
    fn table_one_shape() {
        let s = gen_bitstream(&cfg(600, (0.5, 0.7), 3)).unwrap();
        assert_eq!(s.bits.len(), 18_600);
        assert_eq!(s.changes.len(), 30);
        assert_eq!(s.means.len(), 31);
        assert_eq!(s.changes.positions()[0], 600);
        assert_eq!(*s.changes.positions().last().unwrap(), 18_000);
    }

    #[test]
    fn mean_steps_respect_interval() {
        for seed in 0..50 {
            for mag in [(0.1, 0.3), (0.3, 0.5), (0.5, 0.7)] {
                let s = gen_bitstream(&cfg(10, mag, seed)).unwrap();
                for w in s.means.windows(2) {
                    let d = (w[1] - w[0]).abs();
                    assert!(d >= mag.0 - 1e-12 && d <= mag.1 + 1e-12);
                    assert!((0.05..=0.95).contains(&w[1]));
                }
            }
        }
    }

    #[test]
    fn degenerate_interval_gives_exact_steps() {
        let s = gen_bitstream(&cfg(5, (0.3, 0.3), 9)).unwrap();
        for w in s.means.windows(2) {
            assert!(((w[1] - w[0]).abs() - 0.3).abs() < 1e-12);
        }
    }

    #[test]
    fn segment_means_concentrate() {
        let len = 2000;
        for seed in 0..50 {
            let s = gen_bitstream(&cfg(len, (0.1, 0.3), seed)).unwrap();
            for (j, &mu) in s.means.iter().enumerate() {
                let seg = &s.bits[j * len..(j + 1) * len];
                let freq = seg.iter().filter(|&&b| b).count() as f64 / len as f64;
                let tol = 4.0 * (mu * (1.0 - mu) / len as f64).sqrt();
                assert!((freq - mu).abs() <= tol, "seed {seed} segment {j}");
            }
        }
    }

    #[test]
    fn reproducible_from_seed() {
        let a = gen_bitstream(&cfg(100, (0.1, 0.3), 42)).unwrap();
        let b = gen_bitstream(&cfg(100, (0.1, 0.3), 42)).unwrap();
        let c = gen_bitstream(&cfg(100, (0.1, 0.3), 43)).unwrap();
        assert_eq!(a.bits, b.bits);
        assert_eq!(a.means, b.means);
        assert_ne!(a.bits, c.bits);
    }

    #[test]
    fn upward_subset() {
        let s = gen_bitstream(&cfg(100, (0.3, 0.5), 1)).unwrap();
        let up = s.upward_changes();
        assert!(!up.is_empty() && up.len() < s.changes.len());
        for &p in up.positions() {
            let j = p / 100;
            assert!(s.means[j] > s.means[j - 1]);
        }
    }

    #[test]
    fn infeasible_interval_is_rejected() {
        assert!(gen_bitstream(&cfg(10, (0.92, 0.95), 0)).is_err());
        assert!(gen_bitstream(&cfg(10, (0.4, 0.2), 0)).is_err());
        assert!(gen_bitstream(&cfg(0, (0.1, 0.2), 0)).is_err());
    }
}
