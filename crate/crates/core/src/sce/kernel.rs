use rustfft::num_complex::Complex64;

use super::ecf::EcfGrid;
use super::filter::FilterMask;

/// Fourier transform of the MISE-optimal kernel, zero off the filter.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformKernel {
    values: Vec<f64>,
    m: usize,
}

impl TransformKernel {
    pub fn from_values(values: Vec<f64>, m: usize) -> Self {
        assert_eq!(values.len(), m * m);
        Self { values, m }
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.values[j * self.m + k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Closed-form kernel value for one frequency with `|C(t)|^2 = c2`.
///
/// `n/(2(n-1)) [1 + sqrt(1 - 4(n-1)/(n^2 c2))]`; the radicand is clamped to
/// `[0, 1]` and the result capped at one so that binning round-off cannot
/// push it outside `[n/(2(n-1)), 1]`.
pub fn kernel_value(n: usize, c2: f64) -> f64 {
    // exact at unit modulus, where the formula only reaches 1 up to round-off
    if c2 >= 1.0 {
        return 1.0;
    }
    let nf = n as f64;
    let radicand = (1.0 - 4.0 * (nf - 1.0) / (nf * nf * c2)).clamp(0.0, 1.0);
    (nf / (2.0 * (nf - 1.0)) * (1.0 + radicand.sqrt())).min(1.0)
}

pub fn optimal_transform_kernel(ecf: &EcfGrid, mask: &FilterMask) -> TransformKernel {
    let n = ecf.sample_size();
    let values = ecf
        .values()
        .iter()
        .zip(mask.as_slice())
        .map(|(c, &keep)| if keep { kernel_value(n, c.norm_sqr()) } else { 0.0 })
        .collect();
    TransformKernel {
        values,
        m: ecf.size(),
    }
}

/// Fourier transform of the density estimate, `kappa(t) C(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<Complex64>,
    m: usize,
}

impl Spectrum {
    pub fn from_values(values: Vec<Complex64>, m: usize) -> Self {
        assert_eq!(values.len(), m * m);
        Self { values, m }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.values[j * self.m + k]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

pub fn sce_transform(ecf: &EcfGrid, kernel: &TransformKernel) -> Spectrum {
    let values = ecf
        .values()
        .iter()
        .zip(kernel.values())
        .map(|(&c, &k)| c * k)
        .collect();
    Spectrum {
        values,
        m: ecf.size(),
    }
}

/// `kappa(t) C(t)` computed in the ECF's own buffer. Equal to
/// `sce_transform(&ecf, &optimal_transform_kernel(&ecf, mask))`.
pub fn filtered_spectrum(ecf: EcfGrid, mask: &FilterMask) -> Spectrum {
    let (n, m) = (ecf.sample_size(), ecf.size());
    let mut values = ecf.into_values();
    for (c, &keep) in values.iter_mut().zip(mask.as_slice()) {
        *c = if keep { *c * kernel_value(n, c.norm_sqr()) } else { Complex64::default() };
    }
    Spectrum { values, m }
}
