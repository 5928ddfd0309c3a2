pub mod baselines;
pub mod bd3;
pub mod beta_math;
pub mod detector;
pub mod error;
pub mod experiment;
pub mod format;
pub mod metrics;
pub mod naive_bayes;
pub mod prequential;
pub mod streams;

pub use error::{Error, Result};
