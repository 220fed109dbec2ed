use std::collections::VecDeque;

use super::ecf::EcfGrid;
use super::grid::GridSpec;

/// Acceptable frequencies: the 4-connected component of
/// `{ |C(t)|^2 >= 4(n-1)/n^2 }` that contains the zero frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterMask {
    mask: Vec<bool>,
    m: usize,
    threshold: f64,
    count: usize,
}

/// `4(n-1)/n^2`, the squared-modulus cut below which the optimal kernel has
/// no real solution.
pub fn filter_threshold(n: usize) -> f64 {
    let n = n as f64;
    4.0 * (n - 1.0) / (n * n)
}

impl FilterMask {
    pub fn size(&self) -> usize {
        self.m
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn contains(&self, j: usize, k: usize) -> bool {
        self.mask[j * self.m + k]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.mask
    }

    /// Number of retained bins.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Frequency-space area of the retained set.
    pub fn volume(&self, grid: &GridSpec) -> f64 {
        self.count as f64 * grid.dt() * grid.dt()
    }

    /// Rows that hold at least one retained bin.
    pub fn row_span(&self) -> std::ops::Range<usize> {
        let m = self.m;
        let live = |r: &usize| self.mask[r * m..(r + 1) * m].iter().any(|&b| b);
        match (0..m).find(live) {
            Some(first) => first..(0..m).rev().find(live).unwrap() + 1,
            None => 0..0,
        }
    }
}

pub fn acceptable_frequency_mask(ecf: &EcfGrid) -> FilterMask {
    let m = ecf.size();
    let threshold = filter_threshold(ecf.sample_size());
    let above = |j: usize, k: usize| ecf.get(j, k).norm_sqr() >= threshold;
    let mut mask = vec![false; m * m];
    let z = m / 2;
    let mut count = 0;
    let mut queue = VecDeque::new();
    // the origin is retained unconditionally; |C(0)| = 1 clears any threshold for n >= 2
    mask[z * m + z] = true;
    count += 1;
    queue.push_back((z, z));
    while let Some((j, k)) = queue.pop_front() {
        let neighbours = [
            (j.wrapping_sub(1), k),
            (j + 1, k),
            (j, k.wrapping_sub(1)),
            (j, k + 1),
        ];
        for (a, b) in neighbours {
            // The frequency grid is not periodic, so there is no wrap-around.
            // Index 0 (the Nyquist row/column) has no mirror partner under
            // t -> -t, so it is never retained; this keeps the mask symmetric
            // and the inverse transform real.
            if a == 0 || b == 0 || a >= m || b >= m || mask[a * m + b] || !above(a, b) {
                continue;
            }
            mask[a * m + b] = true;
            count += 1;
            queue.push_back((a, b));
        }
    }
    FilterMask {
        mask,
        m,
        threshold,
        count,
    }
}
