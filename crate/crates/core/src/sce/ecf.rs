use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftDirection;

use super::fft::fft2;
use super::grid::GridSpec;
use crate::error::{Error, Result};
use crate::pseudo_obs::ProbitSample;

/// How the empirical characteristic function is evaluated on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EcfMode {
    /// Exact `(1/n) sum exp(i t.Z)` at every grid frequency, `O(n m^2)`.
    Direct,
    /// Linear binning onto the spatial grid, one FFT, then division by the
    /// transform of the binning window. `O(n + m^2 log m)`.
    #[default]
    Binned,
}

impl std::str::FromStr for EcfMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Self::Direct),
            "binned" => Ok(Self::Binned),
            other => Err(Error::Config(format!(
                "unknown ECF mode '{other}' (expected 'direct' or 'binned')"
            ))),
        }
    }
}

impl std::fmt::Display for EcfMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Direct => "direct",
            Self::Binned => "binned",
        })
    }
}

/// Empirical characteristic function sampled on the frequency grid.
///
/// Row index runs over the first-coordinate frequency, column index over the
/// second.
#[derive(Debug, Clone, PartialEq)]
pub struct EcfGrid {
    values: Vec<Complex64>,
    m: usize,
    n: usize,
}

impl EcfGrid {
    /// Wraps externally computed values, mostly for tests and diagnostics.
    pub fn from_values(values: Vec<Complex64>, m: usize, n: usize) -> Result<Self> {
        if values.len() != m * m {
            return Err(Error::InvalidInput(format!(
                "expected {} ECF values, got {}",
                m * m,
                values.len()
            )));
        }
        if n < 2 {
            return Err(Error::InsufficientData { n, min: 2 });
        }
        Ok(Self { values, m, n })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    /// Sample size that produced the ECF.
    pub fn sample_size(&self) -> usize {
        self.n
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

    /// The zero-frequency value, which is one up to round-off.
    pub fn origin(&self) -> Complex64 {
        self.get(self.m / 2, self.m / 2)
    }
}

fn check_extent(sample: &ProbitSample, grid: &GridSpec) -> Result<()> {
    match sample.pairs().find(|&(x, y)| !grid.contains(x, y)) {
        Some((x, y)) => Err(Error::GridOverflow {
            x,
            y,
            half_width: grid.half_width(),
        }),
        None => Ok(()),
    }
}

pub fn compute_ecf(sample: &ProbitSample, grid: &GridSpec, mode: EcfMode) -> Result<EcfGrid> {
    if sample.len() < 2 {
        return Err(Error::InsufficientData {
            n: sample.len(),
            min: 2,
        });
    }
    check_extent(sample, grid)?;
    let values = match mode {
        EcfMode::Direct => direct(sample, grid),
        EcfMode::Binned => binned(sample, grid),
    };
    Ok(EcfGrid {
        values,
        m: grid.size(),
        n: sample.len(),
    })
}

fn direct(sample: &ProbitSample, grid: &GridSpec) -> Vec<Complex64> {
    let m = grid.size();
    let n = sample.len();
    let freqs: Vec<f64> = (0..m).map(|k| grid.frequency(k)).collect();
    let phases = |c: f64| -> Vec<Complex64> {
        freqs.iter().map(|&t| Complex64::cis(t * c)).collect()
    };
    let ex: Vec<Vec<Complex64>> = sample.x().iter().map(|&x| phases(x)).collect();
    let ey: Vec<Vec<Complex64>> = sample.y().iter().map(|&y| phases(y)).collect();
    let inv_n = 1.0 / n as f64;

    // Rows are independent and each sums points in sample order, so the
    // result does not depend on how rayon splits the work.
    let mut values = vec![Complex64::default(); m * m];
    values.par_chunks_mut(m).enumerate().for_each(|(j, row)| {
        for (px, py) in ex.iter().zip(&ey) {
            let a = px[j];
            for (dst, &b) in row.iter_mut().zip(py) {
                *dst += a * b;
            }
        }
        for v in row.iter_mut() {
            *v *= inv_n;
        }
    });
    values
}

/// Fourier transform of the linear-binning (triangle) window at `t`.
fn binning_window(t: f64, dx: f64) -> f64 {
    let h = 0.5 * t * dx;
    if h == 0.0 {
        1.0
    } else {
        let s = h.sin() / h;
        s * s
    }
}

/// Splits coordinate `c` between its two neighbouring nodes (periodically).
fn bin_weights(c: f64, grid: &GridSpec) -> (usize, usize, f64) {
    let m = grid.size();
    let pos = (c - grid.lo()) / grid.dx();
    let base = pos.floor();
    let frac = pos - base;
    let lo = (base as i64).rem_euclid(m as i64) as usize;
    (lo, (lo + 1) % m, frac)
}

fn binned(sample: &ProbitSample, grid: &GridSpec) -> Vec<Complex64> {
    let m = grid.size();
    let n = sample.len();
    let mut buf = vec![Complex64::default(); m * m];
    for (x, y) in sample.pairs() {
        let (a0, a1, fa) = bin_weights(x, grid);
        let (b0, b1, fb) = bin_weights(y, grid);
        buf[a0 * m + b0].re += (1.0 - fa) * (1.0 - fb);
        buf[a0 * m + b1].re += (1.0 - fa) * fb;
        buf[a1 * m + b0].re += fa * (1.0 - fb);
        buf[a1 * m + b1].re += fa * fb;
    }
    // (-1)^(a+b) shifts the zero frequency to index m/2
    for a in 0..m {
        for b in 0..m {
            if (a + b) % 2 == 1 {
                buf[a * m + b] = -buf[a * m + b];
            }
        }
    }
    fft2(&mut buf, m, FftDirection::Inverse, None);

    let l = grid.half_width();
    let dx = grid.dx();
    let inv_n = 1.0 / n as f64;
    // phase shift to the grid origin and window deconvolution, per axis
    let axis: Vec<Complex64> = (0..m)
        .map(|k| {
            let t = grid.frequency(k);
            Complex64::cis(-t * l) / binning_window(t, dx)
        })
        .collect();
    for (j, row) in buf.chunks_exact_mut(m).enumerate() {
        let aj = axis[j] * inv_n;
        for (v, &ak) in row.iter_mut().zip(&axis) {
            let mut c = *v * aj * ak;
            // deconvolution inflates high frequencies; an ECF never exceeds one in modulus
            let r2 = c.norm_sqr();
            if r2 > 1.0 {
                c /= r2.sqrt();
            }
            *v = c;
        }
    }
    values_with_exact_origin(buf, m)
}

fn values_with_exact_origin(mut values: Vec<Complex64>, m: usize) -> Vec<Complex64> {
    let z = m / 2;
    let o = values[z * m + z];
    // the binned total mass is n up to summation round-off
    debug_assert!((o - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    values[z * m + z] = Complex64::new(1.0, 0.0);
    values
}
