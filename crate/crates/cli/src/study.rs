//! Seeded Monte Carlo studies: estimator MSE, test power and run time.

use std::time::Instant;

use fastmi::quadrature::QuadConfig;
use fastmi::stats::{mean, std_dev};
use fastmi::{estimate_mi, permutation_test, sample_copula, true_mi, CopulaFamily, CopulaSpec, EstimatorConfig, PermutationConfig};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::StudyDesign;
use crate::error::{CliError, CliResult};
use crate::report::{EstimatorEcho, ESTIMATOR};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes the coordinates of a draw into one seed.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts.iter().fold(0, |acc, &p| splitmix64(acc ^ p))
}

fn family_code(f: CopulaFamily) -> u64 {
    match f {
        CopulaFamily::Independence => 0,
        CopulaFamily::Gaussian => 1,
        CopulaFamily::Clayton => 2,
        CopulaFamily::Gumbel => 3,
    }
}

/// Seeds of the sample and of its permutations for one replication.
pub fn replicate_seeds(base: u64, spec: &CopulaSpec, n: usize, rep: usize) -> (u64, u64) {
    let key = [base, family_code(spec.family()), spec.tau().to_bits(), n as u64, rep as u64];
    let with = |tag: u64| {
        let mut parts = key.to_vec();
        parts.push(tag);
        derive_seed(&parts)
    };
    (with(0), with(1))
}

/// One replication of one cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub estimator: &'static str,
    pub family: &'static str,
    pub tau: f64,
    pub n: usize,
    pub rep: usize,
    /// MI estimate, or the test statistic in a power study.
    pub estimate: f64,
    pub p_value: Option<f64>,
    pub reject: Option<bool>,
    pub elapsed_s: f64,
}

/// Aggregates over the replications of one cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub estimator: &'static str,
    pub family: &'static str,
    pub tau: f64,
    pub n: usize,
    pub reps: usize,
    pub true_mi: f64,
    pub mean: f64,
    pub sd: f64,
    pub mse: f64,
    pub power: Option<f64>,
    pub time_mean_s: f64,
    pub time_sd_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub estimator: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub alpha: Option<f64>,
    pub permutations: Option<usize>,
    pub design: StudyDesign,
    pub config: EstimatorEcho,
    pub cells: Vec<Cell>,
    pub records: Vec<Record>,
}

impl StudyReport {
    pub fn cell(&self, family: CopulaFamily, tau: f64, n: usize) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.family == family.name() && c.tau == tau && c.n == n)
    }
}

struct Outcome {
    estimate: f64,
    p_value: Option<f64>,
    reject: Option<bool>,
    elapsed_s: f64,
}

fn specs(design: &StudyDesign) -> CliResult<Vec<(CopulaSpec, f64)>> {
    let mut out = Vec::new();
    for &family in &design.families {
        for &tau in &design.taus {
            let spec = CopulaSpec::new(family, tau)?;
            out.push((spec, true_mi(&spec, &QuadConfig::default())?));
        }
    }
    Ok(out)
}

fn run<F>(design: &StudyDesign, seed: u64, replicate: F) -> CliResult<(Vec<Cell>, Vec<Record>)>
where
    F: Fn(&CopulaSpec, usize, (u64, u64)) -> CliResult<Outcome> + Sync,
{
    let specs = specs(design)?;
    let tasks: Vec<(usize, usize, usize)> = (0..specs.len())
        .flat_map(|s| design.sizes.iter().flat_map(move |&n| (0..design.reps).map(move |r| (s, n, r))))
        .collect();
    // collect keeps task order, so aggregation does not depend on scheduling
    let records = tasks
        .par_iter()
        .map(|&(s, n, rep)| {
            let spec = &specs[s].0;
            let o = replicate(spec, n, replicate_seeds(seed, spec, n, rep))?;
            Ok(Record {
                estimator: ESTIMATOR,
                family: spec.family().name(),
                tau: spec.tau(),
                n,
                rep,
                estimate: o.estimate,
                p_value: o.p_value,
                reject: o.reject,
                elapsed_s: o.elapsed_s,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;

    let cells = records
        .chunks(design.reps)
        .map(|chunk| {
            let first = &chunk[0];
            let truth = specs
                .iter()
                .find(|(s, _)| s.family().name() == first.family && s.tau() == first.tau)
                .map(|&(_, t)| t)
                .expect("every record comes from a spec");
            let est: Vec<f64> = chunk.iter().map(|r| r.estimate).collect();
            let times: Vec<f64> = chunk.iter().map(|r| r.elapsed_s).collect();
            let sq: Vec<f64> = est.iter().map(|e| (e - truth).powi(2)).collect();
            let power = first.reject.is_some().then(|| {
                chunk.iter().filter(|r| r.reject == Some(true)).count() as f64 / chunk.len() as f64
            });
            Cell {
                estimator: ESTIMATOR,
                family: first.family,
                tau: first.tau,
                n: first.n,
                reps: chunk.len(),
                true_mi: truth,
                mean: mean(&est),
                sd: std_dev(&est),
                mse: mean(&sq),
                power,
                time_mean_s: mean(&times),
                time_sd_s: std_dev(&times),
            }
        })
        .collect();
    Ok((cells, records))
}

fn check_sizes(design: &StudyDesign, min_n: usize) -> CliResult<()> {
    match design.sizes.iter().find(|&&n| n < min_n) {
        Some(n) => Err(CliError::Config(format!("sample size {n} is below the minimum of {min_n}"))),
        None => Ok(()),
    }
}

/// Estimator MSE against the true MI of each copula.
pub fn mse_study(design: &StudyDesign, estimator: &EstimatorConfig, seed: u64) -> CliResult<StudyReport> {
    estimator.validate()?;
    check_sizes(design, estimator.ranks.min_n)?;
    let (cells, records) = run(design, seed, |spec, n, (sample_seed, _)| {
        let sample = sample_copula(spec, n, sample_seed);
        let start = Instant::now();
        let est = estimate_mi(&sample, estimator)?;
        Ok(Outcome {
            estimate: est.value,
            p_value: None,
            reject: None,
            elapsed_s: start.elapsed().as_secs_f64(),
        })
    })?;
    Ok(StudyReport {
        schema_version: crate::report::SCHEMA_VERSION,
        command: "simulate-mse",
        estimator: ESTIMATOR,
        version: env!("CARGO_PKG_VERSION"),
        seed,
        alpha: None,
        permutations: None,
        design: design.clone(),
        config: EstimatorEcho::from(estimator),
        cells,
        records,
    })
}

/// Rejection rate of the permutation test.
pub fn power_study(
    design: &StudyDesign,
    permutations: usize,
    alpha: f64,
    estimator: &EstimatorConfig,
    seed: u64,
) -> CliResult<StudyReport> {
    estimator.validate()?;
    check_sizes(design, estimator.ranks.min_n)?;
    PermutationConfig { permutations, alpha, seed, keep_null: false }.validate()?;
    let (cells, records) = run(design, seed, |spec, n, (sample_seed, perm_seed)| {
        let sample = sample_copula(spec, n, sample_seed);
        let cfg = PermutationConfig { permutations, alpha, seed: perm_seed, keep_null: false };
        let start = Instant::now();
        let t = permutation_test(&sample, &cfg, estimator)?;
        Ok(Outcome {
            estimate: t.statistic,
            p_value: Some(t.p_value),
            reject: Some(t.reject),
            elapsed_s: start.elapsed().as_secs_f64(),
        })
    })?;
    Ok(StudyReport {
        schema_version: crate::report::SCHEMA_VERSION,
        command: "simulate-power",
        estimator: ESTIMATOR,
        version: env!("CARGO_PKG_VERSION"),
        seed,
        alpha: Some(alpha),
        permutations: Some(permutations),
        design: design.clone(),
        config: EstimatorEcho::from(estimator),
        cells,
        records,
    })
}

/// Gaussian copula at this tau supplies the timing samples.
pub const BENCH_TAU: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchCell {
    pub estimator: &'static str,
    pub n: usize,
    pub reps: usize,
    pub mean_s: f64,
    pub sd_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Machine {
    pub os: &'static str,
    pub arch: &'static str,
    pub logical_cpus: usize,
    pub threads: usize,
}

impl Machine {
    pub fn current() -> Self {
        Self {
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
            logical_cpus: std::thread::available_parallelism().map_or(1, |n| n.get()),
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub estimator: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub config: EstimatorEcho,
    pub machine: Machine,
    /// Mean time at n = 5000 over mean time at n = 1000, when both were run.
    pub ratio_5000_1000: Option<f64>,
    pub cells: Vec<BenchCell>,
}

impl BenchReport {
    pub fn mean_time(&self, n: usize) -> Option<f64> {
        self.cells.iter().find(|c| c.n == n).map(|c| c.mean_s)
    }
}

/// Wall time of `estimate_mi` alone, on one thread.
pub fn bench_time(sizes: &[usize], reps: usize, estimator: &EstimatorConfig, seed: u64) -> CliResult<BenchReport> {
    estimator.validate()?;
    if reps < crate::config::MIN_BENCH_REPS {
        return Err(CliError::Config(format!(
            "timing needs at least {} repetitions, got {reps}",
            crate::config::MIN_BENCH_REPS
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let spec = CopulaSpec::new(CopulaFamily::Gaussian, BENCH_TAU)?;
    let cells = pool.install(|| {
        sizes
            .iter()
            .map(|&n| {
                let samples: Vec<_> = (0..reps)
                    .map(|rep| sample_copula(&spec, n, replicate_seeds(seed, &spec, n, rep).0))
                    .collect();
                // warm-up: FFT plans and scratch buffers
                estimate_mi(&samples[0], estimator)?;
                let mut times = Vec::with_capacity(reps);
                for s in &samples {
                    let start = Instant::now();
                    std::hint::black_box(estimate_mi(s, estimator)?);
                    times.push(start.elapsed().as_secs_f64());
                }
                Ok(BenchCell {
                    estimator: ESTIMATOR,
                    n,
                    reps,
                    mean_s: mean(&times),
                    sd_s: std_dev(&times),
                })
            })
            .collect::<CliResult<Vec<_>>>()
    })?;
    let mut report = BenchReport {
        schema_version: crate::report::SCHEMA_VERSION,
        command: "bench-time",
        estimator: ESTIMATOR,
        version: env!("CARGO_PKG_VERSION"),
        seed,
        config: EstimatorEcho::from(estimator),
        machine: Machine::current(),
        ratio_5000_1000: None,
        cells,
    };
    report.ratio_5000_1000 = report
        .mean_time(5000)
        .zip(report.mean_time(1000))
        .map(|(a, b)| a / b);
    Ok(report)
}
