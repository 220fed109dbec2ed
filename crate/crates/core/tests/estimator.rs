use fastmi::copula_mi::{estimate_mi_probit, probit_sample};
use fastmi::sce::{fit_density, SceConfig};
use fastmi::{
    copula_density_at, estimate_mi, sample_copula, BivariateSample, CopulaFamily, CopulaSpec,
    EcfMode, EstimatorConfig, GridSpec,
};
use proptest::prelude::*;

fn gaussian(tau: f64, n: usize, seed: u64) -> BivariateSample {
    sample_copula(&CopulaSpec::new(CopulaFamily::Gaussian, tau).unwrap(), n, seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn monotone_margins_leave_mi_bit_identical(
        seed in 0u64..10_000,
        n in 20usize..300,
        tau in 0.0f64..0.9,
        shift in -5.0f64..5.0,
        scale in 0.1f64..10.0,
    ) {
        let s = gaussian(tau, n, seed);
        let (x, y) = s.clone().into_columns();
        let gx: Vec<f64> = x.iter().map(|v| (scale * v).exp()).collect();
        let hy: Vec<f64> = y.iter().map(|v| v * v * v + shift).collect();
        let t = BivariateSample::new(gx, hy).unwrap();
        let cfg = EstimatorConfig::default();
        let a = estimate_mi(&s, &cfg).unwrap();
        let b = estimate_mi(&t, &cfg).unwrap();
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        prop_assert_eq!(a.floor_hits, b.floor_hits);
    }

    #[test]
    fn mi_is_symmetric_in_its_arguments(seed in 0u64..10_000, n in 20usize..400, tau in 0.0f64..0.9) {
        let s = gaussian(tau, n, seed);
        let cfg = EstimatorConfig::default();
        let a = estimate_mi(&s, &cfg).unwrap().value;
        let b = estimate_mi(&s.swapped(), &cfg).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-10, "{} vs {}", a, b);
    }
}

#[test]
fn estimates_are_finite_and_deterministic() {
    for family in CopulaFamily::BENCHMARK {
        for tau in [0.0, 0.3, 0.6, 0.9] {
            let s = sample_copula(&CopulaSpec::new(family, tau).unwrap(), 300, 17);
            let a = estimate_mi(&s, &EstimatorConfig::default()).unwrap();
            let b = estimate_mi(&s, &EstimatorConfig::default()).unwrap();
            assert!(a.value.is_finite());
            assert!(a.floor_hits <= a.n);
            assert_eq!(a, b);
        }
    }
}

#[test]
fn gaussian_copula_density_at_the_centre() {
    let s = gaussian(0.5, 5000, 4);
    let z = probit_sample(&s, &Default::default()).unwrap();
    let fit = fit_density(&z, &SceConfig::default()).unwrap();
    let want = 1.0 / (1.0 - 0.5_f64).sqrt(); // 1/sqrt(1 - rho^2), rho^2 = 1/2
    let got = copula_density_at(&fit.density, 0.5, 0.5).unwrap();
    assert!((got - want).abs() <= 0.1, "c(0.5, 0.5) = {got}");
}

#[test]
fn duplicated_column_is_strongly_dependent() {
    let s = gaussian(0.0, 500, 2);
    let x = s.x().to_vec();
    let dup = BivariateSample::new(x.clone(), x).unwrap();
    assert!(estimate_mi(&dup, &EstimatorConfig::default()).unwrap().value > 1.0);
}

#[test]
fn direct_and_binned_estimates_are_close() {
    let s = gaussian(0.5, 400, 8);
    let z = probit_sample(&s, &Default::default()).unwrap();
    let g = GridSpec::for_sample(&z, 256, 1.0).unwrap();
    let binned = estimate_mi_probit(&z, &g, &EstimatorConfig::default()).unwrap();
    let mut cfg = EstimatorConfig::default();
    cfg.sce.ecf_mode = EcfMode::Direct;
    let direct = estimate_mi_probit(&z, &g, &cfg).unwrap();
    assert!((binned.value - direct.value).abs() < 0.05, "{} vs {}", binned.value, direct.value);
}

/// Mean estimate under independence at n = 500. The self-consistent fit rings
/// in the tails and a few extreme observations land on near-zero density, so
/// the average sits well below zero. Kept as a tracked gap.
#[test]
#[ignore = "known gap: tail ringing biases the estimate downward at moderate n"]
fn independence_bias_is_small() {
    let spec = CopulaSpec::independence();
    let v: Vec<f64> = (0..500)
        .map(|seed| estimate_mi(&sample_copula(&spec, 500, seed), &EstimatorConfig::default()).unwrap().value)
        .collect();
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    assert!((-0.02..=0.06).contains(&mean), "mean {mean}");
}
