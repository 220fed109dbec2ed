//! Report types and their JSON and CSV renderings.

use std::io::Write;

use fastmi::EstimatorConfig;
use serde::Serialize;

use crate::config::Format;
use crate::error::{CliError, CliResult};
use crate::study::{BenchReport, StudyReport};

pub const SCHEMA_VERSION: u32 = 1;
/// Value of the `estimator` column, so rows from other estimators can be
/// merged into the same tables.
pub const ESTIMATOR: &str = "fastMI";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimatorEcho {
    pub grid_size: usize,
    pub pad: f64,
    pub ecf: &'static str,
    pub floor: f64,
    pub copula_floor: f64,
}

impl From<&EstimatorConfig> for EstimatorEcho {
    fn from(c: &EstimatorConfig) -> Self {
        Self {
            grid_size: c.sce.grid_size,
            pad: c.sce.pad,
            ecf: match c.sce.ecf_mode {
                fastmi::EcfMode::Direct => "direct",
                fastmi::EcfMode::Binned => "binned",
            },
            floor: c.sce.floor_ratio,
            copula_floor: c.copula_floor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub estimator: &'static str,
    pub x: String,
    pub y: String,
    pub n: usize,
    pub mi_nats: f64,
    pub mi_bits: f64,
    pub floor_hits: usize,
    pub grid_size: usize,
    pub pad: f64,
    pub ecf: &'static str,
    pub floor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub estimator: &'static str,
    pub x: String,
    pub y: String,
    pub n: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub reject: bool,
    pub critical_value: f64,
    pub r: usize,
    pub alpha: f64,
    pub seed: u64,
    pub grid_size: usize,
    pub pad: f64,
    pub ecf: &'static str,
    pub floor: f64,
}

/// Any report the CLI can emit.
pub enum Report {
    Estimate(EstimateReport),
    Test(TestReport),
    Study { report: StudyReport, records: bool },
    Bench(BenchReport),
    RealData(crate::real_data::RealDataReport),
}

fn csv_rows<T: Serialize>(rows: &[T], out: &mut dyn Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

impl Report {
    pub fn write(&self, format: Format, out: &mut dyn Write) -> CliResult<()> {
        let csv_err = |e: csv::Error| CliError::Config(format!("cannot render CSV: {e}"));
        match format {
            Format::Json => {
                let json = match self {
                    Self::Estimate(r) => serde_json::to_string_pretty(r),
                    Self::Test(r) => serde_json::to_string_pretty(r),
                    Self::Study { report, .. } => serde_json::to_string_pretty(report),
                    Self::Bench(r) => serde_json::to_string_pretty(r),
                    Self::RealData(r) => serde_json::to_string_pretty(r),
                }
                .map_err(|e| CliError::Config(format!("cannot render JSON: {e}")))?;
                writeln!(out, "{json}").map_err(|e| CliError::io("<output>", e))
            }
            Format::Csv => match self {
                Self::Estimate(r) => csv_rows(std::slice::from_ref(r), out),
                Self::Test(r) => csv_rows(std::slice::from_ref(r), out),
                Self::Study { report, records: true } => csv_rows(&report.records, out),
                Self::Study { report, records: false } => csv_rows(&report.cells, out),
                Self::Bench(r) => csv_rows(&r.cells, out),
                Self::RealData(r) => csv_rows(&[r.summary()], out),
            }
            .map_err(csv_err),
        }
    }
}
