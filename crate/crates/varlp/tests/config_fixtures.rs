use proptest::prelude::*;
use varlp::config::ExperimentConfig;
use varlp::fixtures::Fixtures;

#[test]
fn bundled_constants_are_calibrated() {
    let f = Fixtures::bundled().unwrap();
    assert_eq!(f.margin, 2.0);
    for (name, c) in [
        ("holder_k", f.holder_k),
        ("embedding_c", f.embedding_c),
        ("equivalence_c", f.equivalence_c),
        ("doubling_c", f.doubling_c),
        ("commutation_c", f.commutation_c),
        ("self_adjoint_c", f.self_adjoint_c),
        ("pointwise_c", f.pointwise_c),
        ("transfer_c", f.transfer_c),
        ("norm_transfer_c", f.norm_transfer_c),
        ("dual_transfer_c", f.dual_transfer_c),
        ("main_lemma_c", f.main_lemma_c),
        ("extrapolation_c", f.extrapolation_c),
        ("s_operator_c", f.s_operator_c),
    ] {
        assert!(c.is_finite() && c > 0.0, "{name} = {c}");
    }
    for alpha in [0.5, 1.0, 2.0] {
        assert!(f.twin_for(alpha).is_some_and(|t| t.kappa > 0.0 && t.c_alpha > 0.0));
    }
}

#[test]
fn fixtures_round_trip_through_a_file() {
    let path = std::env::temp_dir().join(format!("varlp-fixtures-{}.json", std::process::id()));
    let f = Fixtures::bundled().unwrap();
    f.save(&path).unwrap();
    assert_eq!(Fixtures::load(&path).unwrap(), f);
    let _ = std::fs::remove_file(&path);
}

#[test]
fn uncalibrated_constants_read_back_as_nan() {
    let d = Fixtures::default();
    let back = Fixtures::parse(&serde_json::to_string(&d).unwrap()).unwrap();
    assert!(back.s_operator_c.is_nan());
    assert_eq!(back.margin, d.margin);
}

#[test]
fn unknown_config_keys_are_rejected() {
    assert!(ExperimentConfig::from_toml("alpha = 1.0\nbogus = 3\n").is_err());
    assert!(ExperimentConfig::from_toml("alpha = -1.0\n").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_round_trips_through_toml(alpha in 0.1f64..4.0, seed in 0u64..1_000_000, k in 0.05f64..0.45, big_k in 1usize..12, b_only: bool) {
        let mut cfg = ExperimentConfig { alpha, seed, class_b_only: b_only, ..ExperimentConfig::default() };
        cfg.op.k = k;
        cfg.op.big_k = big_k;
        let text = toml::to_string(&cfg).unwrap();
        prop_assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg);
    }
}
