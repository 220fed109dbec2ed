//! Tuning-free estimation of mutual information between two continuous
//! variables.
//!
//! The estimate is computed entirely from ranks: each margin is replaced by
//! its pseudo-observations, mapped to the plane with the standard normal
//! quantile, and the joint density of the result is fitted with a
//! self-consistent kernel estimator whose kernel is solved for in Fourier
//! space. Mutual information is then the sample average of the log copula
//! density at the observations.
//!
//! ```
//! use fastmi::{estimate_mi, BivariateSample, EstimatorConfig};
//!
//! let x: Vec<f64> = (0..200).map(|i| (i as f64 * 0.37).sin()).collect();
//! let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| v + 0.3 * (i as f64 * 1.3).cos()).collect();
//! let sample = BivariateSample::new(x, y)?;
//! let mi = estimate_mi(&sample, &EstimatorConfig::default())?;
//! assert!(mi.value > 0.0);
//! # Ok::<(), fastmi::Error>(())
//! ```

pub mod copula_mi;
pub mod copula_models;
pub mod error;
pub mod independence;
pub mod normal;
pub mod pseudo_obs;
pub mod quadrature;
pub mod sce;
pub mod stats;

pub use copula_mi::{copula_density_at, estimate_mi, CopulaDensity, EstimatorConfig, MiEstimate};
pub use copula_models::{sample_copula, true_mi, CopulaFamily, CopulaSpec};
pub use error::{Error, Result};
pub use independence::{permutation_test, PermutationConfig, TestResult};
pub use pseudo_obs::{BivariateSample, ProbitSample, PseudoObservations};
pub use sce::{EcfMode, GridSpec, SceConfig};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/pseudo-observations.md")]
    mod pseudo_observations {}
    #[doc = include_str!("../../../book/src/density-estimator.md")]
    mod density_estimator {}
    #[doc = include_str!("../../../book/src/mutual-information.md")]
    mod mutual_information {}
    #[doc = include_str!("../../../book/src/independence-test.md")]
    mod independence_test {}
    #[doc = include_str!("../../../book/src/copulas.md")]
    mod copulas {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
    #[doc = include_str!("../../../book/src/limitations.md")]
    mod limitations {}
}
