//! Rank-based pseudo-observations and their probit images.
//!
//! Everything downstream of this module sees the data only through the
//! ranks of each margin, which makes the estimator invariant under strictly
//! increasing transformations of either variable.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::normal;

/// Smallest sample accepted for estimation.
///
/// Below this the filter threshold `4(n-1)/n^2` approaches one and the
/// acceptable-frequency set degenerates to a handful of bins.
pub const MIN_OBSERVATIONS: usize = 8;

/// Raw bivariate observations, stored column-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateSample {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl BivariateSample {
    /// Builds a sample from two equally long columns of finite values.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidInput(format!(
                "column lengths differ: {} vs {}",
                x.len(),
                y.len()
            )));
        }
        if let Some(i) = x.iter().zip(&y).position(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite coordinate at row {i}: ({}, {})",
                x[i], y[i]
            )));
        }
        Ok(Self { x, y })
    }

    pub fn from_pairs(points: &[(f64, f64)]) -> Result<Self> {
        let (x, y) = points.iter().copied().unzip();
        Self::new(x, y)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn pairs(&self) -> impl ExactSizeIterator<Item = (f64, f64)> + '_ {
        self.x.iter().copied().zip(self.y.iter().copied())
    }

    /// The same observations with the roles of `x` and `y` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }

    pub fn into_columns(self) -> (Vec<f64>, Vec<f64>) {
        (self.x, self.y)
    }
}

/// How tied values within a margin are ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Tied values share the average of the ranks they occupy.
    #[default]
    Midrank,
    /// Ties are broken by a seeded random order, giving distinct ranks.
    Jitter { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankOptions {
    pub min_n: usize,
    pub ties: TieBreak,
}

impl Default for RankOptions {
    fn default() -> Self {
        Self {
            min_n: MIN_OBSERVATIONS,
            ties: TieBreak::Midrank,
        }
    }
}

/// Rank-rescaled observations `rank / (n + 1)`, strictly inside the unit square.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoObservations {
    u: Vec<f64>,
    v: Vec<f64>,
}

impl PseudoObservations {
    /// Wraps precomputed coordinates, checking they lie in the open unit square.
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::InvalidInput("column lengths differ".into()));
        }
        for &w in u.iter().chain(&v) {
            if !(w > 0.0 && w < 1.0) {
                return Err(Error::DomainError {
                    value: w,
                    domain: "(0, 1)",
                });
            }
        }
        Ok(Self { u, v })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn pairs(&self) -> impl ExactSizeIterator<Item = (f64, f64)> + '_ {
        self.u.iter().copied().zip(self.v.iter().copied())
    }
}

/// Points in probit space. Also used as the generic input of the density
/// estimator, so it accepts any finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbitSample {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl ProbitSample {
    pub fn from_columns(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let s = BivariateSample::new(x, y)?;
        let (x, y) = s.into_columns();
        Ok(Self { x, y })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn pairs(&self) -> impl ExactSizeIterator<Item = (f64, f64)> + '_ {
        self.x.iter().copied().zip(self.y.iter().copied())
    }

    /// Largest absolute coordinate over both axes.
    pub fn max_abs(&self) -> f64 {
        self.x
            .iter()
            .chain(&self.y)
            .fold(0.0_f64, |m, &c| m.max(c.abs()))
    }

    pub fn swapped(&self) -> Self {
        Self {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }

    /// Re-pairs the second coordinate: point `j` becomes `(x_j, y_{perm[j]})`.
    pub fn with_y_permuted(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.len());
        Self {
            x: self.x.clone(),
            y: perm.iter().map(|&k| self.y[k]).collect(),
        }
    }
}

/// Ranks of one margin scaled by `1 / (n + 1)`.
pub fn margin_pseudo_observations(values: &[f64], ties: TieBreak) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    let denom = n as f64 + 1.0;
    let mut out = vec![0.0; n];
    match ties {
        TieBreak::Midrank => {
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            let mut start = 0;
            while start < n {
                let mut end = start + 1;
                while end < n && values[order[end]] == values[order[start]] {
                    end += 1;
                }
                // ranks start+1 ..= end share their mean
                let rank = (start + 1 + end) as f64 / 2.0;
                for &i in &order[start..end] {
                    out[i] = rank / denom;
                }
                start = end;
            }
        }
        TieBreak::Jitter { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            order.shuffle(&mut rng);
            // stable sort keeps the shuffled order among equal values
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            for (rank, &i) in order.iter().enumerate() {
                out[i] = (rank + 1) as f64 / denom;
            }
        }
    }
    out
}

/// Pseudo-observations with the default guardrails (midranks, `n >= 8`).
pub fn empirical_cdf_transform(sample: &BivariateSample) -> Result<PseudoObservations> {
    empirical_cdf_transform_with(sample, &RankOptions::default())
}

pub fn empirical_cdf_transform_with(
    sample: &BivariateSample,
    options: &RankOptions,
) -> Result<PseudoObservations> {
    if sample.len() < options.min_n {
        return Err(Error::InsufficientData {
            n: sample.len(),
            min: options.min_n,
        });
    }
    let (tx, ty) = match options.ties {
        TieBreak::Midrank => (TieBreak::Midrank, TieBreak::Midrank),
        // independent tie-breaking streams per margin
        TieBreak::Jitter { seed } => (
            TieBreak::Jitter { seed },
            TieBreak::Jitter {
                seed: seed ^ 0x9e37_79b9_7f4a_7c15,
            },
        ),
    };
    Ok(PseudoObservations {
        u: margin_pseudo_observations(sample.x(), tx),
        v: margin_pseudo_observations(sample.y(), ty),
    })
}

/// Checked standard normal quantile.
pub fn probit(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::DomainError {
            value: u,
            domain: "(0, 1)",
        });
    }
    Ok(normal::quantile(u))
}

pub fn probit_transform(pseudo: &PseudoObservations) -> Result<ProbitSample> {
    let x = pseudo.u.iter().map(|&u| probit(u)).collect::<Result<Vec<_>>>()?;
    let y = pseudo.v.iter().map(|&v| probit(v)).collect::<Result<Vec<_>>>()?;
    Ok(ProbitSample { x, y })
}
