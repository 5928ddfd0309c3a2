//! Batch accuracy on the rotating hyperplane: a model that is never reset
//! degrades as the boundary turns, one reset by BD3 keeps up.
//!
//!     cargo run --release --example hyperplane_recovery > curve.txt

use betadrift::prequential::{run_prequential, DetectorSpec, PrequentialConfig};
use betadrift::streams::gen_hyperplane;

pub fn run_example() -> betadrift::Result<()> {
    let stream = gen_hyperplane(20.0, 1)?;
    let plain = run_prequential(&stream.instances, &PrequentialConfig::default())?;
    let bd3 = run_prequential(
        &stream.instances,
        &PrequentialConfig::new("bd3".parse::<DetectorSpec>()?),
    )?;

    println!("batch  no-detector  bd3");
    for (a, b) in plain.records.iter().zip(&bd3.records).step_by(5) {
        let mark = if b.signal.is_drift() { "  drift" } else { "" };
        println!(
            "{:>5}  {:>11.3}  {:.3}{mark}",
            a.batch_index,
            a.accuracy(),
            b.accuracy()
        );
    }
    println!("overall: {:.4} vs {:.4}", plain.accuracy(), bd3.accuracy());
    Ok(())
}

#[allow(dead_code)]
fn main() -> betadrift::Result<()> {
    run_example()
}
