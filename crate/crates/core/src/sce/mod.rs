//! Self-consistent density estimation on an FFT grid.
//!
//! The pipeline is: evaluate the empirical characteristic function `C` on a
//! frequency grid, keep the contiguous low-frequency region where
//! `|C|^2 >= 4(n-1)/n^2`, multiply by the closed-form MISE-optimal transform
//! kernel, and invert back to a density on the spatial grid. No bandwidth or
//! kernel shape is chosen by the caller; the only knobs are the grid
//! resolution and its padding.

mod density;
mod ecf;
mod fft;
mod filter;
mod fixed_point;
mod grid;
mod kernel;

pub use density::{invert_owned, invert_to_density, DensityGrid, DEFAULT_FLOOR_RATIO, MAX_IMAGINARY_RESIDUE};
pub use ecf::{compute_ecf, EcfGrid, EcfMode};
pub use filter::{acceptable_frequency_mask, filter_threshold, FilterMask};
pub use fixed_point::fixed_point_phi;
pub use grid::GridSpec;
pub use kernel::{filtered_spectrum, kernel_value, optimal_transform_kernel, sce_transform, Spectrum, TransformKernel};

use crate::error::{Error, Result};
use crate::pseudo_obs::ProbitSample;

/// Discretization settings of the density estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceConfig {
    /// Points per axis; a power of two, at least 32.
    pub grid_size: usize,
    /// Margin added beyond the largest absolute coordinate.
    pub pad: f64,
    pub ecf_mode: EcfMode,
    /// Density clip level relative to the peak of the raw estimate.
    pub floor_ratio: f64,
}

impl Default for SceConfig {
    fn default() -> Self {
        Self {
            grid_size: 256,
            pad: 1.0,
            ecf_mode: EcfMode::Binned,
            floor_ratio: DEFAULT_FLOOR_RATIO,
        }
    }
}

impl SceConfig {
    pub fn validate(&self) -> Result<()> {
        GridSpec::new(self.grid_size, 1.0)?;
        if !(self.pad.is_finite() && self.pad >= 0.0) {
            return Err(Error::Config(format!("pad must be >= 0, got {}", self.pad)));
        }
        if !(self.floor_ratio > 0.0 && self.floor_ratio < 1.0) {
            return Err(Error::Config(format!(
                "density floor ratio must lie in (0, 1), got {}",
                self.floor_ratio
            )));
        }
        Ok(())
    }
}

/// A fitted density together with the filter that produced it.
#[derive(Debug, Clone)]
pub struct SceFit {
    pub density: DensityGrid,
    pub mask: FilterMask,
}

impl SceFit {
    /// Area of the acceptable-frequency set.
    pub fn filter_volume(&self) -> f64 {
        self.mask.volume(self.density.grid())
    }
}

/// Fits the self-consistent estimator to `sample` on a grid sized from it.
pub fn fit_density(sample: &ProbitSample, config: &SceConfig) -> Result<SceFit> {
    config.validate()?;
    let grid = GridSpec::for_sample(sample, config.grid_size, config.pad)?;
    fit_density_on(sample, &grid, config)
}

/// Fits on a caller-supplied grid, e.g. one shared across permutations.
pub fn fit_density_on(sample: &ProbitSample, grid: &GridSpec, config: &SceConfig) -> Result<SceFit> {
    let ecf = compute_ecf(sample, grid, config.ecf_mode)?;
    let mask = acceptable_frequency_mask(&ecf);
    let phi = filtered_spectrum(ecf, &mask);
    let density = invert_owned(phi, grid, config.floor_ratio)?;
    Ok(SceFit { density, mask })
}
