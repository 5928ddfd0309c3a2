//! Compare DDM, EDDM and BD3 on Bernoulli bit streams with known change points.
//!
//!     cargo run --release --example bitstream_detectors

use betadrift::metrics::{match_detections, summarize};
use betadrift::prequential::{run_on_errors, PrequentialConfig};
use betadrift::streams::{gen_bitstream, BitStreamConfig};

pub fn run_example() -> betadrift::Result<()> {
    let runs = 10;
    for magnitude in [(0.1, 0.3), (0.5, 0.7)] {
        println!(
            "segments of 600 bits, jumps in [{}, {}]",
            magnitude.0, magnitude.1
        );
        for name in ["ddm", "eddm", "bd3"] {
            let cfg = PrequentialConfig::new(name.parse()?);
            let mut outcomes = Vec::new();
            for seed in 0..runs {
                let stream = gen_bitstream(&BitStreamConfig {
                    magnitude,
                    seed,
                    ..BitStreamConfig::default()
                })?;
                let trace = run_on_errors(&stream.bits, &cfg)?;
                // detectors watch the error rate, so only upward jumps count
                let truth = stream.upward_changes();
                outcomes.push(match_detections(
                    &trace.drift_batches(),
                    &truth,
                    cfg.batch_size,
                    stream.bits.len(),
                ));
            }
            let s = summarize(&outcomes, None);
            println!(
                "  {name:<5} FPR {:.3}  FNR {:.3}  delay {:.2}",
                s.fpr.mean,
                s.fnr.map_or(f64::NAN, |m| m.mean),
                s.delay.map_or(f64::NAN, |m| m.mean)
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> betadrift::Result<()> {
    run_example()
}
