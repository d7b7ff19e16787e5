//! Higher-order spacing ratio statistics.
//!
//! Generates spectra from the Gaussian and circular ensembles and from a few
//! quantum-chaotic model systems, computes k-th order non-overlapping spacing
//! ratios, and fits them against the generalized ratio surmise
//! `P(r, b) = C_b (r + r^2)^b / (1 + r + r^2)^(1 + 3b/2)`.
//!
//! ```
//! use ratiokit::ratio::{predicted_beta_prime, surmise_params};
//!
//! // ratios of second-order spacings in GOE spectra follow b = 4
//! assert_eq!(predicted_beta_prime(1, 2), 4);
//! let p = surmise_params(4.0).unwrap();
//! assert!((p.cdf(1.0).unwrap() - 0.5).abs() < 1e-12);
//! ```

pub mod cli;
pub mod ensembles;
pub mod error;
pub mod io;
pub mod models;
pub mod numerics;
pub mod pipeline;
pub mod ratio;

pub use ensembles::DysonIndex;
pub use error::{Error, ErrorClass, Result};
pub use numerics::{Spectrum, SpectrumKind};
pub use pipeline::{run_experiment, ExperimentConfig, ExperimentReport, Source};
