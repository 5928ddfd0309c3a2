//! Plug a home-made detector into the prequential loop through `BatchDetector`.
//!
//!     cargo run --release --example custom_detector

use betadrift::detector::{BatchDetector, Signal};
use betadrift::prequential::run_with_detector;
use betadrift::streams::gen_sea;

/// Flags drift when a batch's error rate exceeds the best rate seen so far
/// by a fixed margin.
struct RateJump {
    margin: f64,
    best: f64,
}

impl BatchDetector for RateJump {
    fn name(&self) -> &'static str {
        "rate-jump"
    }

    fn update(&mut self, errors: &[bool]) -> betadrift::Result<Signal> {
        let rate = errors.iter().filter(|&&e| e).count() as f64 / errors.len() as f64;
        if rate > self.best + self.margin {
            self.best = 1.0;
            return Ok(Signal::Drift);
        }
        self.best = self.best.min(rate);
        Ok(Signal::Stable)
    }
}

pub fn run_example() -> betadrift::Result<()> {
    let stream = gen_sea(0.0, 3)?;
    let mut det = RateJump {
        margin: 0.08,
        best: 1.0,
    };
    let trace = run_with_detector(&stream.instances, 200, Some(&mut det))?;
    println!(
        "{}: accuracy {:.4}, drifts at {:?}",
        det.name(),
        trace.accuracy(),
        trace.drift_batches()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> betadrift::Result<()> {
    run_example()
}
