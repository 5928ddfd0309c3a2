use rand::{Rng, SeedableRng};

use super::{ChangePointLog, LabeledInstance, LabeledStream, StreamRng};
use crate::error::{Error, Result};

/// Per-concept thresholds on `f1 + f2`, in stream order.
pub const SEA_THRESHOLDS: [f64; 4] = [8.0, 9.0, 7.0, 9.5];

/// SEA concepts: three features uniform on `[0, 10)`, class 1 iff
/// `f1 + f2 <= threshold`, the third feature is irrelevant.
#[derive(Debug, Clone, PartialEq)]
pub struct SeaConfig {
    pub n_instances: usize,
    /// Instance indices where the next threshold takes over.
    pub change_points: Vec<usize>,
    pub thresholds: Vec<f64>,
    /// Probability of flipping each label.
    pub noise: f64,
    pub seed: u64,
}

impl Default for SeaConfig {
    fn default() -> Self {
        Self {
            n_instances: 40_000,
            change_points: vec![10_000, 15_000, 30_000],
            thresholds: SEA_THRESHOLDS.to_vec(),
            noise: 0.0,
            seed: 0,
        }
    }
}

pub fn sea_label(features: &[f64], threshold: f64) -> usize {
    usize::from(features[0] + features[1] <= threshold)
}

impl SeaConfig {
    pub fn generate(&self) -> Result<LabeledStream> {
        if !(0.0..1.0).contains(&self.noise) {
            return Err(Error::config(format!(
                "noise {} must lie in [0, 1)",
                self.noise
            )));
        }
        if self.thresholds.len() != self.change_points.len() + 1 {
            return Err(Error::config("SEA needs one threshold per concept"));
        }
        let changes = ChangePointLog::new(self.change_points.clone(), self.n_instances)?;
        let mut rng = StreamRng::seed_from_u64(self.seed);
        let mut concept = 0;
        let instances = (0..self.n_instances)
            .map(|i| {
                while concept < changes.len() && i >= changes.positions()[concept] {
                    concept += 1;
                }
                let features: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..10.0)).collect();
                let mut label = sea_label(&features, self.thresholds[concept]);
                // always draw, so noise levels share the feature sequence
                let flip = rng.random::<f64>() < self.noise;
                if flip {
                    label = 1 - label;
                }
                LabeledInstance::new(features, label)
            })
            .collect();
        Ok(LabeledStream { instances, changes })
    }
}

/// 40,000 SEA instances with concept changes at 10k, 15k and 30k.
pub fn gen_sea(noise: f64, seed: u64) -> Result<LabeledStream> {
    SeaConfig {
        noise,
        seed,
        ..SeaConfig::default()
    }
    .generate()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn concept_of(i: usize) -> usize {
        match i {
            0..=9_999 => 0,
            10_000..=14_999 => 1,
            15_000..=29_999 => 2,
            _ => 3,
        }
    }

    #[test]
    fn noiseless_labels_follow_rule() {
        let s = gen_sea(0.0, 7).unwrap();
        assert_eq!(s.len(), 40_000);
        assert_eq!(s.changes.positions(), &[10_000, 15_000, 30_000]);
        for (i, inst) in s.instances.iter().enumerate() {
            assert_eq!(inst.features.len(), 3);
            assert!(inst.features.iter().all(|f| (0.0..10.0).contains(f)));
            assert_eq!(
                inst.label,
                sea_label(&inst.features, SEA_THRESHOLDS[concept_of(i)])
            );
        }
    }

    #[test]
    fn noise_flips_expected_fraction() {
        let s = gen_sea(0.2, 7).unwrap();
        let flipped = s
            .instances
            .iter()
            .enumerate()
            .filter(|(i, inst)| {
                inst.label != sea_label(&inst.features, SEA_THRESHOLDS[concept_of(*i)])
            })
            .count();
        let frac = flipped as f64 / s.len() as f64;
        assert!((frac - 0.2).abs() <= 0.01, "{frac}");
    }

    #[test]
    fn noise_levels_share_features() {
        let a = gen_sea(0.0, 3).unwrap();
        let b = gen_sea(0.1, 3).unwrap();
        assert!(a
            .instances
            .iter()
            .zip(&b.instances)
            .all(|(x, y)| x.features == y.features));
    }

    #[test]
    fn class_balance_matches_triangle_area() {
        let s = gen_sea(0.0, 11).unwrap();
        let spans = [
            (0, 10_000),
            (10_000, 15_000),
            (15_000, 30_000),
            (30_000, 40_000),
        ];
        for (c, &(lo, hi)) in spans.iter().enumerate() {
            let theta = SEA_THRESHOLDS[c];
            let expected = theta * theta / 200.0;
            let pos = s.instances[lo..hi].iter().filter(|i| i.label == 1).count();
            let frac = pos as f64 / (hi - lo) as f64;
            assert!(
                (frac - expected).abs() < 0.02,
                "concept {c}: {frac} vs {expected}"
            );
        }
    }

    #[test]
    fn rejects_bad_noise() {
        assert!(gen_sea(1.0, 0).is_err());
        assert!(gen_sea(-0.1, 0).is_err());
    }
}
