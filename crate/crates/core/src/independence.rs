//! Permutation test of independence with the plug-in MI as statistic.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::copula_mi::{estimate_mi_probit, probit_sample, EstimatorConfig};
use crate::error::{Error, Result};
use crate::pseudo_obs::BivariateSample;
use crate::sce::GridSpec;

pub const MIN_PERMUTATIONS: usize = 99;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermutationConfig {
    pub permutations: usize,
    pub alpha: f64,
    pub seed: u64,
    /// Keep the permuted statistics in the result.
    pub keep_null: bool,
}

impl Default for PermutationConfig {
    fn default() -> Self {
        Self {
            permutations: 999,
            alpha: 0.05,
            seed: 0,
            keep_null: false,
        }
    }
}

impl PermutationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.permutations < MIN_PERMUTATIONS {
            return Err(Error::Config(format!(
                "at least {MIN_PERMUTATIONS} permutations are required, got {}",
                self.permutations
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    /// MI estimate on the original pairing.
    pub statistic: f64,
    pub permutations: usize,
    /// `(1 + #{null >= statistic}) / (R + 1)`.
    pub p_value: f64,
    pub alpha: f64,
    /// `statistic` exceeds the `(1 - alpha)` empirical quantile of the null draws.
    pub reject: bool,
    pub critical_value: f64,
    pub null_draws: Option<Vec<f64>>,
}

/// Inverse empirical CDF of `sorted` at probability `p`.
pub fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    let r = sorted.len();
    let k = ((p * r as f64).ceil() as usize).clamp(1, r);
    sorted[k - 1]
}

/// p-value and rejection decision from an observed statistic and its null draws.
pub fn decide(statistic: f64, null: &[f64], alpha: f64) -> (f64, bool, f64) {
    let exceed = null.iter().filter(|&&t| t >= statistic).count();
    let p_value = (1 + exceed) as f64 / (null.len() + 1) as f64;
    let mut sorted = null.to_vec();
    sorted.sort_by(f64::total_cmp);
    let critical = empirical_quantile(&sorted, 1.0 - alpha);
    (p_value, statistic > critical, critical)
}

/// Permutation `r` of `0..n`, drawn from its own ChaCha stream so that every
/// replicate is reproducible regardless of scheduling.
pub fn permutation(n: usize, seed: u64, r: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r as u64 + 1);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng);
    idx
}

pub fn permutation_test(
    sample: &BivariateSample,
    config: &PermutationConfig,
    estimator: &EstimatorConfig,
) -> Result<TestResult> {
    config.validate()?;
    estimator.validate()?;
    // Ranks are computed once: permuting the pairing leaves each margin's
    // pseudo-observations, and therefore the grid, unchanged.
    let z = probit_sample(sample, &estimator.ranks)?;
    let grid = GridSpec::for_sample(&z, estimator.sce.grid_size, estimator.sce.pad)?;
    let statistic = estimate_mi_probit(&z, &grid, estimator)?.value;

    let null = (0..config.permutations)
        .into_par_iter()
        .map(|r| {
            let perm = permutation(z.len(), config.seed, r);
            estimate_mi_probit(&z.with_y_permuted(&perm), &grid, estimator).map(|e| e.value)
        })
        .collect::<Result<Vec<f64>>>()?;

    let (p_value, reject, critical_value) = decide(statistic, &null, config.alpha);
    Ok(TestResult {
        statistic,
        permutations: config.permutations,
        p_value,
        alpha: config.alpha,
        reject,
        critical_value,
        null_draws: config.keep_null.then_some(null),
    })
}
