use rustfft::num_complex::Complex64;
use rustfft::FftDirection;

use super::fft::fft2;
use super::grid::GridSpec;
use super::kernel::Spectrum;
use crate::error::{Error, Result};

/// Largest tolerated imaginary residue of the inverse transform, relative to
/// the largest real value.
pub const MAX_IMAGINARY_RESIDUE: f64 = 1e-8;

/// Default density floor, relative to the peak of the raw estimate.
pub const DEFAULT_FLOOR_RATIO: f64 = 1e-12;

/// Density estimate on the spatial grid, strictly positive and of unit mass.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    values: Vec<f64>,
    grid: GridSpec,
    floor: f64,
    raw_mass: f64,
}

impl DensityGrid {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Value at spatial node `(a, b)`.
    pub fn node_value(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.grid.size() + b]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Absolute clip level applied before renormalization.
    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// Riemann sum of the band-limited inverse before clipping.
    pub fn raw_mass(&self) -> f64 {
        self.raw_mass
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().copied().fold(f64::MIN, f64::max)
    }

    /// Riemann sum `sum f dx^2`.
    pub fn mass(&self) -> f64 {
        let dx = self.grid.dx();
        self.values.iter().sum::<f64>() * dx * dx
    }

    /// Periodic bilinear interpolation at `(x, y)`.
    pub fn value_at(&self, x: f64, y: f64) -> f64 {
        let (a0, a1, fa) = self.locate(x);
        let (b0, b1, fb) = self.locate(y);
        let v = |a, b| self.node_value(a, b);
        (1.0 - fa) * ((1.0 - fb) * v(a0, b0) + fb * v(a0, b1))
            + fa * ((1.0 - fb) * v(a1, b0) + fb * v(a1, b1))
    }

    fn locate(&self, c: f64) -> (usize, usize, f64) {
        let m = self.grid.size();
        let mut pos = (c - self.grid.lo()) / self.grid.dx();
        let nearest = pos.round();
        // snap so that queries at nodes reproduce node values exactly
        if (pos - nearest).abs() < 1e-9 {
            pos = nearest;
        }
        let base = pos.floor();
        let lo = (base as i64).rem_euclid(m as i64) as usize;
        (lo, (lo + 1) % m, pos - base)
    }
}

/// Inverse continuous Fourier transform of `phi_hat` on the spatial grid,
/// `f(z) = (2 pi)^-2 \int exp(-i t.z) phi_hat(t) dt`, followed by clipping at
/// `floor_ratio * peak` and renormalization to unit mass.
pub fn invert_to_density(
    phi_hat: &Spectrum,
    grid: &GridSpec,
    floor_ratio: f64,
) -> Result<DensityGrid> {
    invert_owned(phi_hat.clone(), grid, floor_ratio)
}

/// As [`invert_to_density`], transforming in the spectrum's own buffer.
pub fn invert_owned(phi_hat: Spectrum, grid: &GridSpec, floor_ratio: f64) -> Result<DensityGrid> {
    let m = grid.size();
    if phi_hat.size() != m {
        return Err(Error::InvalidInput(format!(
            "spectrum is {0}x{0}, grid is {m}x{m}",
            phi_hat.size()
        )));
    }
    if !(floor_ratio.is_finite() && floor_ratio > 0.0 && floor_ratio < 1.0) {
        return Err(Error::Config(format!(
            "density floor ratio must lie in (0, 1), got {floor_ratio}"
        )));
    }
    let l = grid.half_width();
    let shift: Vec<Complex64> = (0..m)
        .map(|k| Complex64::cis(grid.frequency(k) * l))
        .collect();

    let mut buf = phi_hat.into_values();
    let mut rows = 0..0;
    for (j, row) in buf.chunks_exact_mut(m).enumerate() {
        if row.iter().all(|v| v.re == 0.0 && v.im == 0.0) {
            continue;
        }
        for (v, &sk) in row.iter_mut().zip(&shift) {
            *v *= shift[j] * sk;
        }
        rows = if rows.is_empty() { j..j + 1 } else { rows.start..j + 1 };
    }
    fft2(&mut buf, m, FftDirection::Forward, Some(rows));

    let scale = 1.0 / (m as f64 * grid.dx()).powi(2);
    let mut values = vec![0.0; m * m];
    let mut max_re = 0.0_f64;
    let mut max_im = 0.0_f64;
    for (a, (src, dst)) in buf.chunks_exact(m).zip(values.chunks_exact_mut(m)).enumerate() {
        // (-1)^(a+b) moves the spatial origin back to node m/2
        let mut sign = if a % 2 == 0 { scale } else { -scale };
        for (v, d) in src.iter().zip(dst.iter_mut()) {
            *d = v.re * sign;
            max_re = max_re.max(d.abs());
            max_im = max_im.max(v.im.abs());
            sign = -sign;
        }
    }
    max_im *= scale;
    if max_re.is_nan() || max_re <= 0.0 {
        return Err(Error::NonFinite("inverse transform is identically zero".into()));
    }
    let residue = max_im / max_re;
    if residue > MAX_IMAGINARY_RESIDUE || !residue.is_finite() {
        return Err(Error::AsymmetrySignal { residue });
    }

    let dx2 = grid.dx() * grid.dx();
    let (sum, peak) = values
        .iter()
        .fold((0.0, f64::MIN), |(s, p), &v| (s + v, p.max(v)));
    let raw_mass = sum * dx2;
    if peak.is_nan() || peak <= 0.0 {
        return Err(Error::NonFinite("density estimate has no positive values".into()));
    }
    let floor = floor_ratio * peak;
    let mut clipped_sum = 0.0;
    for v in values.iter_mut() {
        *v = v.max(floor);
        clipped_sum += *v;
    }
    let norm = 1.0 / (clipped_sum * dx2);
    for v in values.iter_mut() {
        *v *= norm;
    }
    Ok(DensityGrid {
        values,
        grid: *grid,
        // the clip level in the units of the returned (renormalized) grid
        floor: floor * norm,
        raw_mass,
    })
}
