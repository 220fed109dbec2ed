//! Subcommand dispatch.

use std::fs::File;
use std::io::{BufWriter, Write};

use fastmi::{estimate_mi, permutation_test, BivariateSample};

use crate::config::{Cli, Command, GlobalArgs, DEFAULT_BENCH_REPS};
use crate::error::{CliError, CliResult};
use crate::io::{parse_cols, read_table_path, Table};
use crate::report::{EstimateReport, EstimatorEcho, Report, TestReport, ESTIMATOR, SCHEMA_VERSION};
use crate::{config, real_data, study};

fn load(input: &config::InputArgs, group: Option<&str>) -> CliResult<(Table, BivariateSample)> {
    let table = read_table_path(&input.input, &parse_cols(&input.cols)?, group)?;
    let sample = BivariateSample::new(table.x.clone(), table.y.clone())?;
    Ok((table, sample))
}

/// Runs one parsed command and returns its report.
pub fn execute(command: &Command, global: &GlobalArgs) -> CliResult<Report> {
    let seed = global.seed;
    Ok(match command {
        Command::Estimate { input, estimator } => {
            let cfg = estimator.to_config()?;
            let (table, sample) = load(input, None)?;
            let est = estimate_mi(&sample, &cfg)?;
            let echo = EstimatorEcho::from(&cfg);
            Report::Estimate(EstimateReport {
                schema_version: SCHEMA_VERSION,
                command: "estimate",
                estimator: ESTIMATOR,
                x: table.x_name,
                y: table.y_name,
                n: est.n,
                mi_nats: est.value,
                mi_bits: est.bits(),
                floor_hits: est.floor_hits,
                grid_size: echo.grid_size,
                pad: echo.pad,
                ecf: echo.ecf,
                floor: echo.floor,
            })
        }
        Command::Test { input, test, estimator } => {
            let cfg = estimator.to_config()?;
            let perm = test.to_config(seed)?;
            let (table, sample) = load(input, None)?;
            let t = permutation_test(&sample, &perm, &cfg)?;
            let echo = EstimatorEcho::from(&cfg);
            Report::Test(TestReport {
                schema_version: SCHEMA_VERSION,
                command: "test",
                estimator: ESTIMATOR,
                x: table.x_name,
                y: table.y_name,
                n: sample.len(),
                statistic: t.statistic,
                p_value: t.p_value,
                reject: t.reject,
                critical_value: t.critical_value,
                r: t.permutations,
                alpha: t.alpha,
                seed,
                grid_size: echo.grid_size,
                pad: echo.pad,
                ecf: echo.ecf,
                floor: echo.floor,
            })
        }
        Command::SimulateMse { grid, estimator } => {
            let cfg = estimator.to_config()?;
            let design = grid.design("0:0.9:0.1", global.full_scale, 0.9)?;
            Report::Study {
                report: study::mse_study(&design, &cfg, seed)?,
                records: grid.records,
            }
        }
        Command::SimulatePower { grid, perms, alpha, estimator } => {
            let cfg = estimator.to_config()?;
            let design = grid.design("0:0.5:0.05", global.full_scale, 0.9)?;
            Report::Study {
                report: study::power_study(&design, *perms, *alpha, &cfg, seed)?,
                records: grid.records,
            }
        }
        Command::BenchTime { n_grid, reps, estimator } => {
            let cfg = estimator.to_config()?;
            let sizes = config::parse_sizes(n_grid)?;
            let reps = reps.unwrap_or(if global.full_scale { 100 } else { DEFAULT_BENCH_REPS });
            Report::Bench(study::bench_time(&sizes, reps, &cfg, seed)?)
        }
        Command::RealData { input, group, test, estimator } => {
            let cfg = estimator.to_config()?;
            let perm = test.to_config(seed)?;
            let table = read_table_path(&input.input, &parse_cols(&input.cols)?, group.as_deref())?;
            Report::RealData(real_data::analyze(&table, &perm, &cfg)?)
        }
    })
}

/// Runs a parsed command line and writes its report.
pub fn run(cli: &Cli) -> CliResult<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.global.threads {
        if t == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Config(e.to_string()))?;
    let report = pool.install(|| execute(&cli.command, &cli.global))?;
    match &cli.global.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut out = BufWriter::new(file);
            report.write(cli.global.format, &mut out)?;
            out.flush().map_err(|e| CliError::io(path, e))
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            report.write(cli.global.format, &mut out)?;
            out.flush().map_err(|e| CliError::io("<stdout>", e))
        }
    }
}
