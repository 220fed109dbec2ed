//! Standard normal helpers shared by the probit transform, the copula
//! evaluation and the copula models.

use statrs::function::erf::{erfc, erfc_inv};
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

/// `1 / sqrt(2 pi)`.
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
#[inline]
pub fn pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Natural log of the standard normal density.
#[inline]
pub fn ln_pdf(x: f64) -> f64 {
    -0.5 * x * x - 0.918_938_533_204_672_8
}

/// Standard normal CDF.
#[inline]
pub fn cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal quantile for `p` in the open unit interval.
///
/// Returns infinities at the endpoints and NaN outside `[0, 1]`; callers
/// that need a checked version go through [`crate::pseudo_obs::probit`].
#[inline]
pub fn quantile(p: f64) -> f64 {
    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    // The upper half is mirrored so both tails keep full relative precision.
    if p > 0.5 {
        SQRT_2 * erfc_inv(2.0 * (1.0 - p))
    } else {
        -SQRT_2 * erfc_inv(2.0 * p)
    }
}

/// `ln Phi(x)`, accurate in the far lower tail and near one.
pub fn ln_cdf(x: f64) -> f64 {
    if x > 0.0 {
        (-cdf(-x)).ln_1p()
    } else {
        cdf(x).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_inverts_cdf() {
        for &p in &[1e-12, 1e-6, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-9] {
            let x = quantile(p);
            assert!((cdf(x) - p).abs() <= 1e-13 + 1e-10 * p, "p={p}");
        }
    }

    #[test]
    fn ln_cdf_tails() {
        assert!((ln_cdf(-30.0) - (-454.321_243_956_343_3)).abs() < 1e-9);
        assert!((ln_cdf(8.0) + 6.220_960_574_271_743e-16).abs() < 1e-25);
    }

    #[test]
    fn pdf_matches_log_pdf() {
        for &x in &[-3.0, -0.5, 0.0, 1.7] {
            assert!((pdf(x).ln() - ln_pdf(x)).abs() < 1e-14);
        }
    }
}
