//! Globally adaptive Gauss–Kronrod quadrature (7/15 points) in one and two
//! dimensions.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    /// Target absolute error of the final result.
    pub abs_tol: f64,
    /// Maximum number of subintervals per one-dimensional integral.
    pub max_intervals: usize,
    /// Equal panels the range is split into before adapting, so that narrow
    /// peaks cannot fall between the nodes of a single rule.
    pub initial_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-6,
            max_intervals: 2000,
            initial_intervals: 32,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    }
}

/// Integrates `f` over `[a, b]` to absolute accuracy `config.abs_tol`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, config: &QuadConfig) -> Result<Estimate> {
    let panels = config.initial_intervals.max(1);
    let width = (b - a) / panels as f64;
    let mut heap = BinaryHeap::with_capacity(config.max_intervals.max(panels) + 1);
    let (mut value, mut error) = (0.0, 0.0);
    for i in 0..panels {
        let lo = a + i as f64 * width;
        let hi = if i + 1 == panels { b } else { lo + width };
        let seg = gauss_kronrod(&mut f, lo, hi);
        value += seg.value;
        error += seg.error;
        heap.push(seg);
    }
    while error > config.abs_tol {
        if heap.len() >= config.max_intervals {
            return Err(Error::Numerical {
                message: format!("quadrature did not reach {:e} within {} intervals", config.abs_tol, config.max_intervals),
                achieved: error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod(&mut f, worst.a, mid);
        let right = gauss_kronrod(&mut f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if !value.is_finite() {
            return Err(Error::Numerical {
                message: "integrand produced a non-finite value".into(),
                achieved: f64::INFINITY,
            });
        }
    }
    // recompute from the pieces to shed the running-sum drift
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Ok(Estimate { value, error })
}

/// Iterated integral of `f(x, y)` over `[x0, x1] x [y0, y1]`.
///
/// The inner integrals are solved to a tolerance small enough that their
/// accumulated error stays below half the budget.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    (x0, x1): (f64, f64),
    (y0, y1): (f64, f64),
    config: &QuadConfig,
) -> Result<Estimate> {
    let inner_cfg = QuadConfig {
        abs_tol: 0.5 * config.abs_tol / (x1 - x0),
        ..*config
    };
    let mut inner_failure = None;
    let mut inner_error_max = 0.0_f64;
    let outer = integrate(
        |x| match integrate(|y| f(x, y), y0, y1, &inner_cfg) {
            Ok(e) => {
                inner_error_max = inner_error_max.max(e.error);
                e.value
            }
            Err(err) => {
                inner_failure.get_or_insert(err);
                0.0
            }
        },
        x0,
        x1,
        &QuadConfig {
            abs_tol: 0.5 * config.abs_tol,
            ..*config
        },
    )?;
    if let Some(err) = inner_failure {
        return Err(err);
    }
    Ok(Estimate {
        value: outer.value,
        error: outer.error + inner_error_max * (x1 - x0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let e = integrate(|x| 3.0 * x * x - x + 2.0, -1.0, 2.0, &QuadConfig::default()).unwrap();
        assert!((e.value - 13.5).abs() < 1e-13);
    }

    #[test]
    fn peaked_integrand() {
        // \int_{-10}^{10} 1/(1e-4 + x^2) dx = 2 * 100 * atan(1000)
        let e = integrate(|x| 1.0 / (1e-4 + x * x), -10.0, 10.0, &QuadConfig { abs_tol: 1e-8, max_intervals: 5000, initial_intervals: 1 })
            .unwrap();
        let want = 200.0 * 1000.0_f64.atan();
        assert!((e.value - want).abs() < 1e-7);
    }

    #[test]
    fn gaussian_2d() {
        let e = integrate_2d(
            |x, y| (-(x * x + y * y) / 2.0).exp(),
            (-9.0, 9.0),
            (-9.0, 9.0),
            &QuadConfig { abs_tol: 1e-9, ..QuadConfig::default() },
        )
        .unwrap();
        assert!((e.value - std::f64::consts::TAU).abs() < 1e-8);
    }

    #[test]
    fn reports_failure() {
        let err = integrate(|x| x.sin() * 1e3, 0.0, 1000.0, &QuadConfig { abs_tol: 1e-14, max_intervals: 4, initial_intervals: 1 })
            .unwrap_err();
        assert!(matches!(err, Error::Numerical { .. }));
    }
}
