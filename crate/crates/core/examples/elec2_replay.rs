//! Replay the Elec2 electricity stream through each detector.
//!
//!     cargo run --release --example elec2_replay -- path/to/elecNormNew.csv
//!
//! Without an argument the path comes from `BETADRIFT_ELEC2_PATH`.

use std::path::PathBuf;

use betadrift::experiment::elec2_path;
use betadrift::prequential::{run_prequential, PrequentialConfig, DETECTOR_NAMES};
use betadrift::streams::load_elec2;

pub fn run_example() -> betadrift::Result<()> {
    let arg = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .filter(|p| p.is_file());
    let path = elec2_path(arg.as_deref());
    if !path.is_file() {
        println!(
            "no Elec2 file at {}; pass a path or set BETADRIFT_ELEC2_PATH",
            path.display()
        );
        return Ok(());
    }
    let data = load_elec2(&path)?;
    for w in &data.warnings {
        eprintln!("warning: {w}");
    }
    for name in DETECTOR_NAMES {
        let trace = run_prequential(&data.instances, &PrequentialConfig::new(name.parse()?))?;
        println!(
            "{name:<5} accuracy {:.4}  drifts {}",
            trace.accuracy(),
            trace.drift_batches().len()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> betadrift::Result<()> {
    run_example()
}
