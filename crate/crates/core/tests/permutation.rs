use fastmi::independence::decide;
use fastmi::{
    permutation_test, sample_copula, BivariateSample, CopulaSpec, EstimatorConfig,
    PermutationConfig,
};

fn config(permutations: usize, seed: u64) -> PermutationConfig {
    PermutationConfig {
        permutations,
        seed,
        keep_null: true,
        ..Default::default()
    }
}

#[test]
fn comonotone_data_reach_the_minimum_p_value() {
    let s = sample_copula(&CopulaSpec::independence(), 200, 1);
    let x = s.x().to_vec();
    let dup = BivariateSample::new(x.clone(), x).unwrap();
    let r = permutation_test(&dup, &config(199, 5), &EstimatorConfig::default()).unwrap();
    assert_eq!(r.p_value, 1.0 / 200.0);
    assert!(r.reject);
}

#[test]
fn result_is_reproducible_and_thread_count_free() {
    let s = sample_copula(&CopulaSpec::independence(), 120, 9);
    let cfg = config(99, 42);
    let est = EstimatorConfig::default();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let a = one.install(|| permutation_test(&s, &cfg, &est)).unwrap();
    let b = three.install(|| permutation_test(&s, &cfg, &est)).unwrap();
    assert_eq!(a, b);
    let c = permutation_test(&s, &config(99, 43), &est).unwrap();
    assert_ne!(a.null_draws, c.null_draws);
}

#[test]
fn p_value_bounds_and_rejection_rule() {
    for seed in 0..5 {
        let s = sample_copula(&CopulaSpec::independence(), 100, 100 + seed);
        let r = permutation_test(&s, &config(99, seed), &EstimatorConfig::default()).unwrap();
        assert!((1.0 / 100.0..=1.0).contains(&r.p_value));
        let null = r.null_draws.as_deref().unwrap();
        assert_eq!(null.len(), 99);
        let (p, reject, crit) = decide(r.statistic, null, r.alpha);
        assert_eq!((p, reject, crit), (r.p_value, r.reject, r.critical_value));
        // reversing the draw order is a relabelling of the permutations
        let reversed: Vec<f64> = null.iter().rev().copied().collect();
        assert_eq!(decide(r.statistic, &reversed, r.alpha), (p, reject, crit));
    }
}
