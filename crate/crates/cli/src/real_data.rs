//! Correlation, mutual information and independence test for one data set,
//! with scatter data split by an optional grouping column.

use std::collections::BTreeMap;

use fastmi::stats::pearson;
use fastmi::{estimate_mi, permutation_test, BivariateSample, EstimatorConfig, PermutationConfig};
use serde::Serialize;

use crate::error::CliResult;
use crate::io::Table;
use crate::report::{EstimatorEcho, ESTIMATOR, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scatter {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealDataReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub estimator: &'static str,
    pub x: String,
    pub y: String,
    pub n: usize,
    pub pearson_r: f64,
    pub mi_nats: f64,
    pub mi_bits: f64,
    pub p_value: f64,
    pub reject: bool,
    pub r: usize,
    pub alpha: f64,
    pub seed: u64,
    pub config: EstimatorEcho,
    /// Scatter data keyed by group; a single `all` group without `--group`.
    pub groups: BTreeMap<String, Scatter>,
}

/// Flat one-row view for CSV output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealDataSummary<'a> {
    pub estimator: &'static str,
    pub x: &'a str,
    pub y: &'a str,
    pub n: usize,
    pub pearson_r: f64,
    pub mi_nats: f64,
    pub mi_bits: f64,
    pub p_value: f64,
    pub reject: bool,
    pub r: usize,
    pub alpha: f64,
    pub seed: u64,
}

impl RealDataReport {
    pub fn summary(&self) -> RealDataSummary<'_> {
        RealDataSummary {
            estimator: self.estimator,
            x: &self.x,
            y: &self.y,
            n: self.n,
            pearson_r: self.pearson_r,
            mi_nats: self.mi_nats,
            mi_bits: self.mi_bits,
            p_value: self.p_value,
            reject: self.reject,
            r: self.r,
            alpha: self.alpha,
            seed: self.seed,
        }
    }
}

pub fn analyze(table: &Table, test: &PermutationConfig, estimator: &EstimatorConfig) -> CliResult<RealDataReport> {
    let sample = BivariateSample::new(table.x.clone(), table.y.clone())?;
    let mi = estimate_mi(&sample, estimator)?;
    let t = permutation_test(&sample, test, estimator)?;
    let mut groups: BTreeMap<String, Scatter> = BTreeMap::new();
    for (i, (&x, &y)) in table.x.iter().zip(&table.y).enumerate() {
        let key = table.group.as_ref().map_or("all", |g| g[i].as_str());
        let s = groups.entry(key.to_string()).or_insert(Scatter { x: Vec::new(), y: Vec::new() });
        s.x.push(x);
        s.y.push(y);
    }
    Ok(RealDataReport {
        schema_version: SCHEMA_VERSION,
        command: "real-data",
        estimator: ESTIMATOR,
        x: table.x_name.clone(),
        y: table.y_name.clone(),
        n: sample.len(),
        pearson_r: pearson(&table.x, &table.y),
        mi_nats: mi.value,
        mi_bits: mi.bits(),
        p_value: t.p_value,
        reject: t.reject,
        r: t.permutations,
        alpha: t.alpha,
        seed: test.seed,
        config: EstimatorEcho::from(estimator),
        groups,
    })
}
