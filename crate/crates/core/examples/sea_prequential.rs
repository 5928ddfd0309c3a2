//! Test-then-train naive Bayes on SEA concepts, with and without drift detection.
//!
//!     cargo run --release --example sea_prequential

use betadrift::prequential::{run_prequential, PrequentialConfig, DETECTOR_NAMES};
use betadrift::streams::gen_sea;

pub fn run_example() -> betadrift::Result<()> {
    let stream = gen_sea(0.1, 42)?;
    println!(
        "SEA, 10% label noise, changes at {:?}",
        stream.changes.positions()
    );
    for name in DETECTOR_NAMES {
        let trace = run_prequential(&stream.instances, &PrequentialConfig::new(name.parse()?))?;
        println!(
            "{name:<5} accuracy {:.4}  drifts at batches {:?}",
            trace.accuracy(),
            trace.drift_batches()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> betadrift::Result<()> {
    run_example()
}
