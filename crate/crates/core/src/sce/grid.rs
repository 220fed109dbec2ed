use crate::error::{Error, Result};
use crate::pseudo_obs::ProbitSample;

/// Regular square grid shared by the spatial and the frequency domain.
///
/// Spatial nodes are `x_a = -L + a dx` for `a = 0..m`, with `dx = 2L / m`;
/// the domain is periodic with period `2L`. Frequencies are
/// `t_k = (k - m/2) dt` with `dt = 2 pi / (m dx)`, so index `m/2` is the
/// zero frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    m: usize,
    half_width: f64,
}

impl GridSpec {
    pub const MIN_POINTS: usize = 32;

    pub fn new(m: usize, half_width: f64) -> Result<Self> {
        if m < Self::MIN_POINTS || !m.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid size must be a power of two >= {}, got {m}",
                Self::MIN_POINTS
            )));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::Config(format!(
                "grid half-width must be positive and finite, got {half_width}"
            )));
        }
        Ok(Self { m, half_width })
    }

    /// Symmetric extent `[-L, L]` with `L = max |coordinate| + pad` on both axes.
    pub fn for_sample(sample: &ProbitSample, m: usize, pad: f64) -> Result<Self> {
        if !(pad.is_finite() && pad >= 0.0) {
            return Err(Error::Config(format!("pad must be >= 0, got {pad}")));
        }
        if sample.is_empty() {
            return Err(Error::InsufficientData { n: 0, min: 1 });
        }
        Self::new(m, sample.max_abs() + pad)
    }

    /// Points per axis.
    pub fn size(&self) -> usize {
        self.m
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn lo(&self) -> f64 {
        -self.half_width
    }

    pub fn hi(&self) -> f64 {
        self.half_width
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.m as f64
    }

    pub fn dt(&self) -> f64 {
        std::f64::consts::TAU / (self.m as f64 * self.dx())
    }

    pub fn node(&self, a: usize) -> f64 {
        self.lo() + a as f64 * self.dx()
    }

    pub fn frequency(&self, k: usize) -> f64 {
        (k as f64 - (self.m / 2) as f64) * self.dt()
    }

    pub fn zero_index(&self) -> usize {
        self.m / 2
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x.abs() <= self.half_width && y.abs() <= self.half_width
    }
}
