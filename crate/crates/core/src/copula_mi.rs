//! Copula density read-out and the plug-in mutual information estimate.

use crate::error::{Error, Result};
use crate::normal;
use crate::pseudo_obs::{
    empirical_cdf_transform_with, probit, probit_transform, BivariateSample, ProbitSample,
    RankOptions,
};
use crate::sce::{fit_density_on, DensityGrid, GridSpec, SceConfig};

/// Lower clamp applied to the copula density before taking logs.
pub const DEFAULT_COPULA_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub sce: SceConfig,
    pub copula_floor: f64,
    pub ranks: RankOptions,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            sce: SceConfig::default(),
            copula_floor: DEFAULT_COPULA_FLOOR,
            ranks: RankOptions::default(),
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        self.sce.validate()?;
        if !(self.copula_floor > 0.0 && self.copula_floor.is_finite()) {
            return Err(Error::Config(format!(
                "copula floor must be positive, got {}",
                self.copula_floor
            )));
        }
        if self.ranks.min_n < 2 {
            return Err(Error::Config("minimum sample size must be at least 2".into()));
        }
        Ok(())
    }
}

/// Plug-in mutual information estimate, in nats.
#[derive(Debug, Clone, PartialEq)]
pub struct MiEstimate {
    pub value: f64,
    pub n: usize,
    pub grid: GridSpec,
    /// Observations at which the copula density hit the floor.
    pub floor_hits: usize,
    /// Number of frequency bins retained by the filter.
    pub filter_bins: usize,
}

impl MiEstimate {
    pub fn bits(&self) -> f64 {
        self.value / std::f64::consts::LN_2
    }
}

/// Copula density `c(u, v) = f(z_u, z_v) / (phi(z_u) phi(z_v))` backed by a
/// probit-space density fit.
#[derive(Debug, Clone)]
pub struct CopulaDensity {
    density: DensityGrid,
    floor: f64,
}

impl CopulaDensity {
    pub fn new(density: DensityGrid, floor: f64) -> Self {
        Self { density, floor }
    }

    pub fn density(&self) -> &DensityGrid {
        &self.density
    }

    /// Copula density at probit coordinates; the flag reports clamping.
    pub fn at_probit(&self, zx: f64, zy: f64) -> (f64, bool) {
        let f = self.density.value_at(zx, zy);
        // ratio of densities in log space keeps the tails from underflowing
        let c = (f.ln() - normal::ln_pdf(zx) - normal::ln_pdf(zy)).exp();
        if c.is_nan() || c < self.floor {
            (self.floor, true)
        } else {
            (c, false)
        }
    }

    pub fn at(&self, u: f64, v: f64) -> Result<f64> {
        Ok(self.at_probit(probit(u)?, probit(v)?).0)
    }

    /// Average log copula density over the sample points.
    pub fn mean_log_density(&self, sample: &ProbitSample) -> (f64, usize) {
        let mut hits = 0;
        let mut total = 0.0;
        for (zx, zy) in sample.pairs() {
            let (c, clipped) = self.at_probit(zx, zy);
            hits += usize::from(clipped);
            total += c.ln();
        }
        (total / sample.len() as f64, hits)
    }
}

/// Copula density read from a fitted probit-space density with the default floor.
pub fn copula_density_at(density: &DensityGrid, u: f64, v: f64) -> Result<f64> {
    let (zx, zy) = (probit(u)?, probit(v)?);
    let f = density.value_at(zx, zy);
    let c = (f.ln() - normal::ln_pdf(zx) - normal::ln_pdf(zy)).exp();
    Ok(if c.is_nan() { DEFAULT_COPULA_FLOOR } else { c.max(DEFAULT_COPULA_FLOOR) })
}

/// Probit-space image of the sample's pseudo-observations.
pub fn probit_sample(sample: &BivariateSample, ranks: &RankOptions) -> Result<ProbitSample> {
    probit_transform(&empirical_cdf_transform_with(sample, ranks)?)
}

/// Estimates mutual information (nats) between the two columns of `sample`.
pub fn estimate_mi(sample: &BivariateSample, config: &EstimatorConfig) -> Result<MiEstimate> {
    config.validate()?;
    let z = probit_sample(sample, &config.ranks)?;
    let grid = GridSpec::for_sample(&z, config.sce.grid_size, config.sce.pad)?;
    estimate_mi_probit(&z, &grid, config)
}

/// Plug-in estimate for an already transformed sample on a given grid.
pub fn estimate_mi_probit(
    sample: &ProbitSample,
    grid: &GridSpec,
    config: &EstimatorConfig,
) -> Result<MiEstimate> {
    let fit = fit_density_on(sample, grid, &config.sce)?;
    let filter_bins = fit.mask.count();
    let copula = CopulaDensity::new(fit.density, config.copula_floor);
    let (value, floor_hits) = copula.mean_log_density(sample);
    if !value.is_finite() {
        return Err(Error::NonFinite(format!("mutual information evaluated to {value}")));
    }
    Ok(MiEstimate {
        value,
        n: sample.len(),
        grid: *grid,
        floor_hits,
        filter_bins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sce::{invert_to_density, Spectrum};
    use rustfft::num_complex::Complex64;

    fn independence_density(m: usize, half_width: f64) -> DensityGrid {
        let grid = GridSpec::new(m, half_width).unwrap();
        let values = (0..m * m)
            .map(|i| {
                let (t1, t2) = (grid.frequency(i / m), grid.frequency(i % m));
                Complex64::new((-(t1 * t1 + t2 * t2) / 2.0).exp(), 0.0)
            })
            .collect();
        invert_to_density(&Spectrum::from_values(values, m), &grid, 1e-12).unwrap()
    }

    #[test]
    fn independence_copula_is_flat() {
        let d = independence_density(256, 6.0);
        for i in 1..=9 {
            for j in 1..=9 {
                let (u, v) = (0.1 * i as f64, 0.1 * j as f64);
                let c = copula_density_at(&d, u, v).unwrap();
                assert!((c - 1.0).abs() < 2e-3, "c({u},{v}) = {c}");
            }
        }
    }

    #[test]
    fn node_query_has_no_interpolation_error() {
        let d = independence_density(64, 6.0);
        let g = *d.grid();
        let (a, b) = (40, 25);
        let (zx, zy) = (g.node(a), g.node(b));
        let copula = CopulaDensity::new(d.clone(), DEFAULT_COPULA_FLOOR);
        let want = d.node_value(a, b) / (normal::pdf(zx) * normal::pdf(zy));
        let (got, clipped) = copula.at_probit(zx, zy);
        assert!(!clipped);
        assert!((got - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn domain_errors() {
        let d = independence_density(32, 6.0);
        assert!(matches!(copula_density_at(&d, 0.0, 0.5), Err(Error::DomainError { .. })));
        assert!(matches!(copula_density_at(&d, 0.5, 1.0), Err(Error::DomainError { .. })));
    }

    #[test]
    fn comonotone_sample_has_large_mi() {
        let x: Vec<f64> = (0..500).map(|i| ((i * 7919) % 500) as f64).collect();
        let s = BivariateSample::new(x.clone(), x).unwrap();
        let mi = estimate_mi(&s, &EstimatorConfig::default()).unwrap();
        assert!(mi.value > 1.0, "{}", mi.value);
        assert!(mi.floor_hits <= mi.n);
        assert!((mi.bits() - mi.value / std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn small_sample_rejected() {
        let s = BivariateSample::new(vec![1.0, 2.0, 3.0], vec![3.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            estimate_mi(&s, &EstimatorConfig::default()),
            Err(Error::InsufficientData { n: 3, min: 8 })
        ));
    }
}
