//! Walk a BD3 detector through a stream of error counts and show the posterior,
//! the bounds each batch was tested against, and the verdict.
//!
//!     cargo run --example beta_bounds

use betadrift::bd3::{Bd3Config, Bd3Detector};
use betadrift::beta_math::BetaParams;
use betadrift::detector::ErrorBatch;

pub fn run_example() -> betadrift::Result<()> {
    let mut det = Bd3Detector::new(Bd3Config::default())?;
    // error rate around 0.15, then a jump to 0.30
    let ks = [28, 31, 30, 27, 33, 29, 32, 30, 61, 58, 62];
    println!("batch    k   warn>   drift>  signal    alpha     beta   t");
    for (i, &k) in ks.iter().enumerate() {
        let signal = det.update_batch(ErrorBatch::new(200, k)?)?;
        let b = det.last_bounds().expect("set by update");
        let s = det.state().expect("set by update");
        println!(
            "{i:>5} {k:>4}  {:.4}  {:.4}  {signal:<7} {:>8.2} {:>8.2} {:>3}",
            b.warn_upper, b.drift_upper, s.alpha, s.beta, s.t
        );
    }

    let p = BetaParams::new(30.0, 170.0)?;
    let (lo, hi) = p.central_interval(0.997)?;
    println!(
        "Beta(30, 170): mean {:.4}, 99.7% of its mass in [{lo:.4}, {hi:.4}]",
        p.mean()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> betadrift::Result<()> {
    run_example()
}
