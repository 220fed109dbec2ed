use fastmi::copula_models::tau_to_param;
use fastmi::normal;
use fastmi::quadrature::QuadConfig;
use fastmi::stats::kendall_tau;
use fastmi::{sample_copula, true_mi, CopulaFamily, CopulaSpec};

const QUAD: QuadConfig = QuadConfig {
    abs_tol: 1e-6,
    max_intervals: 4000,
    initial_intervals: 32,
};

#[test]
fn clayton_truth_matches_monte_carlo() {
    let spec = CopulaSpec::new(CopulaFamily::Clayton, 0.5).unwrap();
    let quad = true_mi(&spec, &QUAD).unwrap();
    let s = sample_copula(&spec, 1_000_000, 2024);
    let mc = s.pairs().map(|(x, y)| spec.ln_density_probit(x, y)).sum::<f64>() / s.len() as f64;
    assert!((quad - mc).abs() <= 2e-3, "quadrature {quad} vs Monte Carlo {mc}");
}

#[test]
fn gumbel_truth_matches_monte_carlo() {
    let spec = CopulaSpec::new(CopulaFamily::Gumbel, 0.5).unwrap();
    let quad = true_mi(&spec, &QUAD).unwrap();
    let s = sample_copula(&spec, 1_000_000, 2025);
    let mc = s.pairs().map(|(x, y)| spec.ln_density_probit(x, y)).sum::<f64>() / s.len() as f64;
    assert!((quad - mc).abs() <= 2e-3, "quadrature {quad} vs Monte Carlo {mc}");
}

#[test]
fn kendall_tau_round_trip() {
    for family in CopulaFamily::BENCHMARK {
        for tau in [0.1, 0.5, 0.8] {
            let s = sample_copula(&CopulaSpec::new(family, tau).unwrap(), 100_000, 11);
            let got = kendall_tau(s.x(), s.y());
            assert!((got - tau).abs() <= 0.01, "{family} tau={tau}: {got}");
        }
    }
}

#[test]
fn independence_and_clayton_tau_at_ten_thousand() {
    let s = sample_copula(&CopulaSpec::independence(), 10_000, 3);
    assert!(kendall_tau(s.x(), s.y()).abs() <= 0.02);
    let s = sample_copula(&CopulaSpec::new(CopulaFamily::Clayton, 0.5).unwrap(), 10_000, 3);
    assert!((kendall_tau(s.x(), s.y()) - 0.5).abs() <= 0.02);
}

/// Kolmogorov-Smirnov statistic against the standard normal CDF.
fn ks_statistic(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal::cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[test]
fn gumbel_margins_are_standard_normal() {
    let s = sample_copula(&CopulaSpec::new(CopulaFamily::Gumbel, 0.3).unwrap(), 10_000, 8);
    // asymptotic 1% critical value
    let crit = 1.6276 / (10_000f64).sqrt();
    assert!(ks_statistic(s.x()) < crit);
    assert!(ks_statistic(s.y()) < crit);
}

#[test]
fn true_mi_is_zero_at_independence_and_increasing() {
    for family in CopulaFamily::BENCHMARK {
        let mut last = -1.0;
        for i in 0..10 {
            let tau = 0.1 * i as f64;
            let mi = true_mi(&CopulaSpec::new(family, tau).unwrap(), &QUAD).unwrap();
            if i == 0 {
                assert_eq!(mi, 0.0);
            } else {
                assert!(mi > last, "{family}: MI({tau}) = {mi} after {last}");
            }
            last = mi;
        }
    }
}

#[test]
fn parameter_examples() {
    assert_eq!(tau_to_param(CopulaFamily::Gaussian, 0.0).unwrap(), 0.0);
    assert_eq!(tau_to_param(CopulaFamily::Clayton, 0.0).unwrap(), 0.0);
    assert_eq!(tau_to_param(CopulaFamily::Gumbel, 0.0).unwrap(), 1.0);
    assert!((tau_to_param(CopulaFamily::Gaussian, 0.5).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    assert_eq!(tau_to_param(CopulaFamily::Clayton, 0.5).unwrap(), 2.0);
    assert_eq!(tau_to_param(CopulaFamily::Gumbel, 0.5).unwrap(), 2.0);
    assert!(tau_to_param(CopulaFamily::Gumbel, 0.96).is_err());
    assert!(tau_to_param(CopulaFamily::Clayton, -0.1).is_err());
}
