//! Command-line arguments and their validation.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fastmi::{CopulaFamily, EcfMode, EstimatorConfig, PermutationConfig, SceConfig};

use crate::error::{CliError, CliResult};

/// Replications per cell in the desk-scale studies.
pub const DEFAULT_REPS: usize = 200;
/// Replications per cell with `--full-scale`.
pub const FULL_SCALE_REPS: usize = 1000;
pub const MIN_BENCH_REPS: usize = 5;
pub const DEFAULT_BENCH_REPS: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "fastmi", version, about = "Copula-based mutual information estimation and independence testing")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Base seed for every random draw.
    #[arg(long, env = "FASTMI_SEED", default_value_t = 0, global = true)]
    pub seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Use 1000 replications per cell unless --reps is given.
    #[arg(long, global = true)]
    pub full_scale: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct EstimatorArgs {
    /// Grid points per axis (power of two, at least 32).
    #[arg(long, default_value_t = 256)]
    pub grid_size: usize,
    /// Margin added beyond the outermost probit coordinate.
    #[arg(long, default_value_t = 1.0)]
    pub pad: f64,
    #[arg(long, default_value = "binned")]
    pub ecf: EcfMode,
    /// Density clip level relative to the peak of the raw estimate.
    #[arg(long, default_value_t = 1e-12)]
    pub floor: f64,
}

impl EstimatorArgs {
    pub fn to_config(&self) -> CliResult<EstimatorConfig> {
        let config = EstimatorConfig {
            sce: SceConfig {
                grid_size: self.grid_size,
                pad: self.pad,
                ecf_mode: self.ecf,
                floor_ratio: self.floor,
            },
            ..EstimatorConfig::default()
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// CSV file with the two variables.
    #[arg(long)]
    pub input: PathBuf,
    /// The two columns, by header name or 0-based index.
    #[arg(long, default_value = "0,1")]
    pub cols: String,
}

#[derive(Debug, Clone, Args)]
pub struct TestArgs {
    /// Number of permutations.
    #[arg(long, default_value_t = 999)]
    pub perms: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Comma-separated families.
    #[arg(long, default_value = "gaussian,clayton,gumbel")]
    pub family: String,
    /// Kendall's tau values, as a comma list or start:stop:step.
    #[arg(long)]
    pub tau_grid: Option<String>,
    /// Sample sizes, as a comma list.
    #[arg(long)]
    pub n_grid: Option<String>,
    /// Replications per cell.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Write one CSV row per replication instead of per cell.
    #[arg(long)]
    pub records: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate mutual information between two columns of a CSV file.
    Estimate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        estimator: EstimatorArgs,
    },
    /// Permutation test of independence.
    Test {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        test: TestArgs,
        #[command(flatten)]
        estimator: EstimatorArgs,
    },
    /// Mean squared error of the estimator over a grid of copulas.
    SimulateMse {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        estimator: EstimatorArgs,
    },
    /// Empirical power of the permutation test over a grid of copulas.
    SimulatePower {
        #[command(flatten)]
        grid: GridArgs,
        /// Permutations per inner test.
        #[arg(long, default_value_t = 199)]
        perms: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[command(flatten)]
        estimator: EstimatorArgs,
    },
    /// Single-threaded wall time of one estimate against sample size.
    BenchTime {
        /// Sample sizes, as a comma list.
        #[arg(long, default_value = "250,500,1000,2500,5000")]
        n_grid: String,
        /// Timed estimates per sample size (at least 5).
        #[arg(long)]
        reps: Option<usize>,
        #[command(flatten)]
        estimator: EstimatorArgs,
    },
    /// Correlation, mutual information and independence test for a data set.
    RealData {
        #[command(flatten)]
        input: InputArgs,
        /// Optional column used to group the scatter data.
        #[arg(long)]
        group: Option<String>,
        #[command(flatten)]
        test: TestArgs,
        #[command(flatten)]
        estimator: EstimatorArgs,
    },
}

impl TestArgs {
    pub fn to_config(&self, seed: u64) -> CliResult<PermutationConfig> {
        let config = PermutationConfig {
            permutations: self.perms,
            alpha: self.alpha,
            seed,
            keep_null: false,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Parses `"a,b,c"` or `"start:stop:step"` (inclusive of `stop`).
pub fn parse_real_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::Config(format!("invalid grid '{spec}': {why}"));
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let values = match parts.as_slice() {
        [start, stop, step] => {
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad("not a number"));
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if !(step > 0.0 && stop >= start) {
                return Err(bad("need step > 0 and stop >= start"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            // rounding to 12 digits keeps 0.1 * 3 printing as 0.3
            (0..=count)
                .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
                .collect()
        }
        [list] => list
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad("not a number")))
            .collect::<CliResult<Vec<_>>>()?,
        _ => return Err(bad("expected a comma list or start:stop:step")),
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(bad("no finite values"));
    }
    Ok(values)
}

pub fn parse_sizes(spec: &str) -> CliResult<Vec<usize>> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Config(format!("invalid sample size '{}' in '{spec}'", s.trim())))
        })
        .collect()
}

pub fn parse_families(spec: &str) -> CliResult<Vec<CopulaFamily>> {
    let families = spec
        .split(',')
        .map(|s| s.parse::<CopulaFamily>())
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(f) = families.iter().find(|f| !CopulaFamily::BENCHMARK.contains(f)) {
        return Err(CliError::Config(format!(
            "family '{f}' is not a benchmark family (gaussian, clayton, gumbel)"
        )));
    }
    Ok(families)
}

/// Fully resolved design of a simulation study.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct StudyDesign {
    #[serde(serialize_with = "family_names")]
    pub families: Vec<CopulaFamily>,
    pub taus: Vec<f64>,
    pub sizes: Vec<usize>,
    pub reps: usize,
}

fn family_names<S: serde::Serializer>(f: &[CopulaFamily], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(f.iter().map(CopulaFamily::name))
}

impl GridArgs {
    pub fn design(&self, default_taus: &str, full_scale: bool, max_tau: f64) -> CliResult<StudyDesign> {
        let taus = parse_real_grid(self.tau_grid.as_deref().unwrap_or(default_taus))?;
        if let Some(t) = taus.iter().find(|t| !(0.0..=max_tau).contains(*t)) {
            return Err(CliError::Config(format!("tau {t} outside [0, {max_tau}]")));
        }
        let sizes = parse_sizes(self.n_grid.as_deref().unwrap_or("100,250,500"))?;
        let reps = self
            .reps
            .unwrap_or(if full_scale { FULL_SCALE_REPS } else { DEFAULT_REPS });
        if reps == 0 {
            return Err(CliError::Config("--reps must be positive".into()));
        }
        Ok(StudyDesign {
            families: parse_families(&self.family)?,
            taus,
            sizes,
            reps,
        })
    }
}
