//! Small descriptive statistics used by the copula models, the study harness
//! and the real-data report.

/// Arithmetic mean; NaN for an empty slice.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (divisor `n - 1`).
pub fn std_dev(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() as f64 - 1.0)).sqrt()
}

/// Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    sxy / (sxx * syy).sqrt()
}

/// Kendall's tau-a in `O(n log n)` (Knight's algorithm).
///
/// Intended for continuous data; tied pairs count as neither concordant nor
/// discordant.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    if n < 2 {
        return f64::NAN;
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(y[a].total_cmp(&y[b])));

    // pairs tied in x, and in both x and y
    let mut tied_x = 0u64;
    let mut tied_xy = 0u64;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && x[idx[j]] == x[idx[i]] {
            j += 1;
        }
        tied_x += pairs(j - i);
        let mut k = i;
        while k < j {
            let mut l = k + 1;
            while l < j && y[idx[l]] == y[idx[k]] {
                l += 1;
            }
            tied_xy += pairs(l - k);
            k = l;
        }
        i = j;
    }

    let mut ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
    let swaps = merge_count(&mut ys);

    let mut tied_y = 0u64;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && ys[j] == ys[i] {
            j += 1;
        }
        tied_y += pairs(j - i);
        i = j;
    }
    let total = pairs(n);
    let concordant_minus_discordant =
        total as i128 - tied_x as i128 - tied_y as i128 + tied_xy as i128 - 2 * swaps as i128;
    concordant_minus_discordant as f64 / total as f64
}

fn pairs(k: usize) -> u64 {
    (k as u64) * (k as u64).saturating_sub(1) / 2
}

/// Sorts `v` ascending and returns the number of strict inversions.
fn merge_count(v: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = merge_count(&mut v[..mid]) + merge_count(&mut v[mid..]);
    let mut merged = Vec::with_capacity(n);
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if v[j] < v[i] {
            swaps += (mid - i) as u64;
            merged.push(v[j]);
            j += 1;
        } else {
            merged.push(v[i]);
            i += 1;
        }
    }
    merged.extend_from_slice(&v[i..mid]);
    merged.extend_from_slice(&v[j..n]);
    v.copy_from_slice(&merged);
    swaps
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_tau(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += ((x[i] - x[j]) * (y[i] - y[j])).signum() * f64::from(x[i] != x[j] && y[i] != y[j]);
            }
        }
        s / (n * (n - 1) / 2) as f64
    }

    #[test]
    fn perfect_agreement() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(kendall_tau(&x, &x), 1.0);
        let y = [4.0, 3.0, 2.0, 1.0];
        assert_eq!(kendall_tau(&x, &y), -1.0);
        assert!((pearson(&x, &y) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn moments() {
        let x = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        assert_eq!(mean(&x), 5.0);
        assert!((std_dev(&x) - (32.0f64 / 7.0).sqrt()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn matches_brute_force(pts in prop::collection::vec((0i32..6, 0i32..6), 2..40)) {
            let x: Vec<f64> = pts.iter().map(|p| f64::from(p.0)).collect();
            let y: Vec<f64> = pts.iter().map(|p| f64::from(p.1)).collect();
            prop_assert!((kendall_tau(&x, &y) - brute_tau(&x, &y)).abs() < 1e-12);
        }
    }
}
