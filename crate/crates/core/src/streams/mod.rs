//! Data sources with known change points.
//!
//! All synthetic generators draw from [`StreamRng`] (ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`), so a seed reproduces the same stream on
//! every platform.

mod bitstream;
mod elec2;
mod hyperplane;
mod sea;

use std::io::Write;

use rand_chacha::ChaCha8Rng;

pub use bitstream::{gen_bitstream, BitStream, BitStreamConfig};
pub use elec2::{load_elec2, Elec2Data, ELEC2_FEATURES, ELEC2_ROWS};
pub use hyperplane::{gen_hyperplane, hyperplane_label, HyperplaneConfig};
pub use sea::{gen_sea, sea_label, SeaConfig, SEA_THRESHOLDS};

use crate::error::{Error, Result};
use crate::format::sig6;

/// Generator used by every synthetic stream.
pub type StreamRng = ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledInstance {
    pub features: Vec<f64>,
    pub label: usize,
}

impl LabeledInstance {
    pub fn new(features: Vec<f64>, label: usize) -> Self {
        Self { features, label }
    }
}

/// Instance indices at which a new concept begins. Index 0 is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChangePointLog {
    positions: Vec<usize>,
}

impl ChangePointLog {
    /// Positions must be strictly increasing and fall inside `(0, stream_len)`.
    pub fn new(positions: Vec<usize>, stream_len: usize) -> Result<Self> {
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("change points must be strictly increasing"));
        }
        if let Some(&bad) = positions.iter().find(|&&p| p == 0 || p >= stream_len) {
            return Err(Error::config(format!(
                "change point {bad} lies outside the stream (length {stream_len})"
            )));
        }
        Ok(Self { positions })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// One index per line.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        for p in &self.positions {
            writeln!(out, "{p}")?;
        }
        Ok(())
    }
}

/// A labeled stream together with its ground-truth change points.
#[derive(Debug, Clone)]
pub struct LabeledStream {
    pub instances: Vec<LabeledInstance>,
    pub changes: ChangePointLog,
}

impl LabeledStream {
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.instances.first().map_or(0, |i| i.features.len())
    }
}

/// CSV with columns `f1..fd,label`.
pub fn write_instances_csv<W: Write>(mut out: W, instances: &[LabeledInstance]) -> Result<()> {
    let dims = instances.first().map_or(0, |i| i.features.len());
    let mut header: Vec<String> = (1..=dims).map(|i| format!("f{i}")).collect();
    header.push("label".into());
    writeln!(out, "{}", header.join(","))?;
    for inst in instances {
        if inst.features.len() != dims {
            return Err(Error::Dimension {
                expected: dims,
                got: inst.features.len(),
            });
        }
        for f in &inst.features {
            write!(out, "{},", sig6(*f))?;
        }
        writeln!(out, "{}", inst.label)?;
    }
    Ok(())
}

/// Bit streams have no features: a single `label` column of 0/1.
pub fn write_bits_csv<W: Write>(mut out: W, bits: &[bool]) -> Result<()> {
    writeln!(out, "label")?;
    for &b in bits {
        writeln!(out, "{}", u8::from(b))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn change_log_validation() {
        assert!(ChangePointLog::new(vec![3, 3], 10).is_err());
        assert!(ChangePointLog::new(vec![5, 2], 10).is_err());
        assert!(ChangePointLog::new(vec![0, 4], 10).is_err());
        assert!(ChangePointLog::new(vec![4, 10], 10).is_err());
        let log = ChangePointLog::new(vec![2, 7], 10).unwrap();
        let mut buf = Vec::new();
        log.write(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "2\n7\n");
    }

    #[test]
    fn instance_csv_layout() {
        let rows = vec![
            LabeledInstance::new(vec![1.5, 0.25], 1),
            LabeledInstance::new(vec![10.0, 1.0 / 3.0], 0),
        ];
        let mut buf = Vec::new();
        write_instances_csv(&mut buf, &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "f1,f2,label\n1.5,0.25,1\n10,0.333333,0\n"
        );
        let ragged = vec![
            LabeledInstance::new(vec![1.0], 1),
            LabeledInstance::new(vec![1.0, 2.0], 0),
        ];
        assert!(write_instances_csv(Vec::new(), &ragged).is_err());

        let mut buf = Vec::new();
        write_bits_csv(&mut buf, &[true, false]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "label\n1\n0\n");
    }
}
