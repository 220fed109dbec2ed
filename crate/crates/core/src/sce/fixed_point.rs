use rustfft::num_complex::Complex64;

use super::ecf::EcfGrid;
use super::filter::acceptable_frequency_mask;
use super::kernel::Spectrum;
use crate::error::{Error, Result};

/// Solves `phi = n C / (n - 1 + |phi|^-2)` by direct iteration from
/// `phi_0 = C`, frequency by frequency on the acceptable set.
///
/// The limit is the larger root of `(n-1)|phi|^2 - n|C||phi| + 1 = 0`, the
/// same value the closed-form kernel produces, so this is an independent
/// route to the SCE spectrum rather than the production path. Iteration at a
/// frequency stops once the a-posteriori error bound of the contraction,
/// `|step| * q / (1 - q)` with `q` the observed step ratio, drops below `tol`.
pub fn fixed_point_phi(ecf: &EcfGrid, tol: f64, max_iter: usize) -> Result<Spectrum> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    let n = ecf.sample_size() as f64;
    let mask = acceptable_frequency_mask(ecf);
    let mut unconverged = 0;
    let values = ecf
        .values()
        .iter()
        .zip(mask.as_slice())
        .map(|(&c, &keep)| {
            if !keep {
                return Complex64::default();
            }
            match iterate_modulus(n, c.norm(), tol, max_iter) {
                // the update rescales C by a positive real, so only the modulus evolves
                Some(s) => c * (s / c.norm()),
                None => {
                    unconverged += 1;
                    Complex64::default()
                }
            }
        })
        .collect();
    if unconverged > 0 {
        return Err(Error::NonConvergence { unconverged });
    }
    Ok(Spectrum::from_values(values, ecf.size()))
}

fn iterate_modulus(n: f64, c: f64, tol: f64, max_iter: usize) -> Option<f64> {
    let mut s = c;
    let mut prev_step = f64::INFINITY;
    for _ in 0..max_iter {
        let next = n * c / (n - 1.0 + 1.0 / (s * s));
        let step = (next - s).abs();
        s = next;
        if step == 0.0 {
            return Some(s);
        }
        let q = step / prev_step;
        if prev_step.is_finite() && q < 1.0 && step * q / (1.0 - q) < tol {
            return Some(s);
        }
        prev_step = step;
    }
    None
}
