//! Incremental Gaussian naive Bayes.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::streams::LabeledInstance;

pub const VARIANCE_FLOOR: f64 = 1e-6;
/// Prediction of a model that has seen nothing.
pub const DEFAULT_CLASS: usize = 0;

/// Running mean and squared deviation (Welford).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningMoments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl RunningMoments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Sample variance, floored at [`VARIANCE_FLOOR`].
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            return VARIANCE_FLOOR;
        }
        (self.m2 / (self.count - 1) as f64).max(VARIANCE_FLOOR)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayesModel {
    n_classes: usize,
    dims: Option<usize>,
    class_counts: Vec<u64>,
    /// `stats[class][feature]`
    stats: Vec<Vec<RunningMoments>>,
}

impl Default for NaiveBayesModel {
    fn default() -> Self {
        Self::new(2)
    }
}

impl NaiveBayesModel {
    pub fn new(n_classes: usize) -> Self {
        assert!(n_classes >= 1, "need at least one class");
        Self {
            n_classes,
            dims: None,
            class_counts: vec![0; n_classes],
            stats: vec![Vec::new(); n_classes],
        }
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// Feature count fixed by the first training instance.
    pub fn dims(&self) -> Option<usize> {
        self.dims
    }

    pub fn class_count(&self, class: usize) -> u64 {
        self.class_counts[class]
    }

    pub fn total(&self) -> u64 {
        self.class_counts.iter().sum()
    }

    pub fn is_trained(&self) -> bool {
        self.total() > 0
    }

    pub fn moments(&self, class: usize, feature: usize) -> Option<&RunningMoments> {
        self.stats.get(class)?.get(feature)
    }

    /// Laplace-smoothed class prior.
    pub fn prior(&self, class: usize) -> f64 {
        (self.class_counts[class] + 1) as f64 / (self.total() + self.n_classes as u64) as f64
    }

    pub fn train(&mut self, inst: &LabeledInstance) -> Result<()> {
        let d = inst.features.len();
        match self.dims {
            Some(expected) if expected != d => {
                return Err(Error::Dimension { expected, got: d });
            }
            Some(_) => {}
            None => {
                self.dims = Some(d);
                for s in &mut self.stats {
                    *s = vec![RunningMoments::default(); d];
                }
            }
        }
        if inst.label >= self.n_classes {
            return Err(Error::config(format!(
                "label {} outside 0..{}",
                inst.label, self.n_classes
            )));
        }
        self.class_counts[inst.label] += 1;
        for (m, &x) in self.stats[inst.label].iter_mut().zip(&inst.features) {
            m.push(x);
        }
        Ok(())
    }

    /// Unnormalized log posterior; `None` for classes never observed.
    pub fn log_joint(&self, class: usize, features: &[f64]) -> Option<f64> {
        if self.class_counts[class] == 0 {
            return None;
        }
        let ll: f64 = self.stats[class]
            .iter()
            .zip(features)
            .map(|(m, &x)| {
                let var = m.variance();
                let z = x - m.mean;
                -0.5 * (2.0 * PI * var).ln() - z * z / (2.0 * var)
            })
            .sum();
        Some(self.prior(class).ln() + ll)
    }

    pub fn predict(&self, features: &[f64]) -> usize {
        let mut best = DEFAULT_CLASS;
        let mut best_score = f64::NEG_INFINITY;
        for c in 0..self.n_classes {
            if let Some(score) = self.log_joint(c, features) {
                if score > best_score {
                    best = c;
                    best_score = score;
                }
            }
        }
        best
    }
}

pub fn nb_predict(model: &NaiveBayesModel, features: &[f64]) -> usize {
    model.predict(features)
}

/// Atomic: on a dimension or label error the model is left untouched.
pub fn nb_train_batch(
    model: &NaiveBayesModel,
    batch: &[LabeledInstance],
) -> Result<NaiveBayesModel> {
    let mut next = model.clone();
    for inst in batch {
        next.train(inst)?;
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn inst(f: &[f64], label: usize) -> LabeledInstance {
        LabeledInstance::new(f.to_vec(), label)
    }

    fn normal(rng: &mut ChaCha8Rng) -> f64 {
        // Box-Muller
        let u: f64 = 1.0 - rng.random::<f64>();
        let v: f64 = rng.random();
        (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
    }

    #[test]
    fn untrained_predicts_default() {
        let m = NaiveBayesModel::default();
        assert_eq!(nb_predict(&m, &[1.0, 2.0]), DEFAULT_CLASS);
    }

    #[test]
    fn single_class_always_wins() {
        let m = nb_train_batch(
            &NaiveBayesModel::default(),
            &[inst(&[0.0, 1.0], 1), inst(&[0.5, 0.7], 1)],
        )
        .unwrap();
        for x in [-100.0, 0.0, 0.3, 1e6] {
            assert_eq!(nb_predict(&m, &[x, x]), 1);
        }
        assert!((m.prior(0) + m.prior(1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn separated_gaussians() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let draw = |c: usize, rng: &mut ChaCha8Rng| {
            let mu = if c == 0 { 0.0 } else { 10.0 };
            inst(&[mu + normal(rng), mu + normal(rng)], c)
        };
        let train: Vec<_> = (0..1000).map(|i| draw(i % 2, &mut rng)).collect();
        let m = nb_train_batch(&NaiveBayesModel::default(), &train).unwrap();
        let test: Vec<_> = (0..2000).map(|i| draw(i % 2, &mut rng)).collect();
        let hits = test
            .iter()
            .filter(|t| nb_predict(&m, &t.features) == t.label)
            .count();
        assert!(hits as f64 / test.len() as f64 > 0.99);
        let m0 = m.moments(0, 0).unwrap();
        assert!(m0.mean.abs() < 0.2 && (m0.variance() - 1.0).abs() < 0.2);
    }

    #[test]
    fn tie_goes_to_lower_class() {
        let m = nb_train_batch(
            &NaiveBayesModel::default(),
            &[
                inst(&[-1.0], 0),
                inst(&[-3.0], 0),
                inst(&[1.0], 1),
                inst(&[3.0], 1),
            ],
        )
        .unwrap();
        assert_eq!(nb_predict(&m, &[0.0]), 0);
        assert_eq!(nb_predict(&m, &[0.1]), 1);
    }

    #[test]
    fn repeated_instance_hits_floor() {
        let batch = vec![inst(&[4.2], 0); 50];
        let m = nb_train_batch(&NaiveBayesModel::default(), &batch).unwrap();
        let s = m.moments(0, 0).unwrap();
        assert_eq!(s.mean, 4.2);
        assert_eq!(s.variance(), VARIANCE_FLOOR);
    }

    #[test]
    fn split_training_matches_concatenation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let data: Vec<_> = (0..300)
            .map(|_| {
                let f: Vec<f64> = (0..3).map(|_| rng.random_range(-5.0..5.0)).collect();
                LabeledInstance::new(f, rng.random_range(0..2))
            })
            .collect();
        let base = NaiveBayesModel::default();
        let ab =
            nb_train_batch(&nb_train_batch(&base, &data[..120]).unwrap(), &data[120..]).unwrap();
        let whole = nb_train_batch(&base, &data).unwrap();
        for c in 0..2 {
            assert_eq!(ab.class_count(c), whole.class_count(c));
            for f in 0..3 {
                let (x, y) = (ab.moments(c, f).unwrap(), whole.moments(c, f).unwrap());
                assert!((x.mean - y.mean).abs() < 1e-9);
                assert!((x.variance() - y.variance()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn empty_batch_is_identity() {
        let m = nb_train_batch(&NaiveBayesModel::default(), &[inst(&[1.0], 1)]).unwrap();
        assert_eq!(nb_train_batch(&m, &[]).unwrap(), m);
    }

    #[test]
    fn dimension_mismatch() {
        let m = nb_train_batch(&NaiveBayesModel::default(), &[inst(&[1.0, 2.0], 0)]).unwrap();
        let err = nb_train_batch(&m, &[inst(&[1.0], 0)]).unwrap_err();
        assert!(matches!(
            err,
            Error::Dimension {
                expected: 2,
                got: 1
            }
        ));
        assert!(nb_train_batch(&m, &[inst(&[1.0, 2.0], 5)]).is_err());
    }
}
