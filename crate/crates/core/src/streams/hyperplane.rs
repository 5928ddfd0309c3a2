use rand::{Rng, SeedableRng};

use super::{ChangePointLog, LabeledInstance, LabeledStream, StreamRng};
use crate::error::{Error, Result};

/// Pivot of the rotating boundary: the centre of `[0, 10]²`.
const CENTER: (f64, f64) = (5.0, 5.0);

/// A line through the centre of the feature square that turns by a fixed
/// angle at regular intervals. Features match SEA: two relevant ones plus
/// one pure-noise feature, all uniform on `[0, 10)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperplaneConfig {
    pub n_instances: usize,
    /// First rotation happens at this instance.
    pub rotation_start: usize,
    pub rotation_period: usize,
    pub angle_deg: f64,
    pub seed: u64,
}

impl Default for HyperplaneConfig {
    fn default() -> Self {
        Self {
            n_instances: 40_000,
            rotation_start: 10_000,
            rotation_period: 1_000,
            angle_deg: 20.0,
            seed: 0,
        }
    }
}

/// Class 1 iff the point lies on the side the normal `(cos φ, sin φ)`
/// points to. At `φ = 0` that is `f1 > 5`.
pub fn hyperplane_label(features: &[f64], phi_rad: f64) -> usize {
    let side = (features[0] - CENTER.0) * phi_rad.cos() + (features[1] - CENTER.1) * phi_rad.sin();
    usize::from(side > 0.0)
}

impl HyperplaneConfig {
    pub fn change_points(&self) -> Vec<usize> {
        (self.rotation_start..self.n_instances)
            .step_by(self.rotation_period)
            .collect()
    }

    /// Orientation in force at instance `i`.
    pub fn angle_at(&self, i: usize) -> f64 {
        if i < self.rotation_start {
            return 0.0;
        }
        let turns = (i - self.rotation_start) / self.rotation_period + 1;
        (turns as f64 * self.angle_deg).to_radians()
    }

    pub fn generate(&self) -> Result<LabeledStream> {
        if !(self.angle_deg > 0.0 && self.angle_deg.is_finite()) {
            return Err(Error::config(format!(
                "rotation angle {} must be positive",
                self.angle_deg
            )));
        }
        if self.rotation_period == 0 {
            return Err(Error::config("rotation period must be at least 1"));
        }
        let changes = ChangePointLog::new(self.change_points(), self.n_instances)?;
        let mut rng = StreamRng::seed_from_u64(self.seed);
        let instances = (0..self.n_instances)
            .map(|i| {
                let features: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..10.0)).collect();
                let label = hyperplane_label(&features, self.angle_at(i));
                LabeledInstance::new(features, label)
            })
            .collect();
        Ok(LabeledStream { instances, changes })
    }
}

/// 40,000 instances; the boundary turns by `angle_deg` every 1,000
/// instances from instance 10,000 on.
pub fn gen_hyperplane(angle_deg: f64, seed: u64) -> Result<LabeledStream> {
    HyperplaneConfig {
        angle_deg,
        seed,
        ..HyperplaneConfig::default()
    }
    .generate()
}
