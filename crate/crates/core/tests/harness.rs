use sigmalab_core::harness::random::random_kannan_scenario;
use sigmalab_core::harness::reproduce::reproduce;
use sigmalab_core::harness::{run_theorem, Status, TheoremId};
use sigmalab_core::scenario::{parse_scenario_str, ScenarioError};

#[test]
fn random_coincidence_scenarios_never_mismatch() {
    for seed in 0..120 {
        let sc = random_kannan_scenario(seed, 0.4, false);
        let r = run_theorem(&sc).unwrap();
        assert!(r.conclusion.as_ref().unwrap().matches, "seed {seed}: {:#?}", r);
        assert_eq!(r.hypothesis("sigma-s-kannan").unwrap().status, Status::Holds);
        assert_eq!(r.hypothesis("clr").unwrap().status, Status::Holds);
    }
}

#[test]
fn random_single_map_scenarios_never_mismatch() {
    for seed in 0..120 {
        let mut sc = random_kannan_scenario(seed, 0.4, true);
        for th in [TheoremId::C3_19, TheoremId::T2_1, TheoremId::T2_2] {
            sc.theorem = Some(th);
            if th != TheoremId::C3_19 {
                sc.condition = Some(sigmalab_core::contraction::ConditionSpec::classical_kannan(0.4).unwrap());
            }
            let r = run_theorem(&sc).unwrap();
            assert!(r.conclusion.as_ref().unwrap().matches, "seed {seed} {}", th.as_str());
        }
    }
}

#[test]
fn t317_on_random_pairs() {
    for seed in 0..60 {
        let mut sc = random_kannan_scenario(seed, 0.4, false);
        sc.theorem = Some(TheoremId::T3_17);
        let r = run_theorem(&sc).unwrap();
        assert!(r.conclusion.as_ref().unwrap().matches, "seed {seed}");
    }
}

#[test]
fn sigma1_counterexample_is_stable() {
    for _ in 0..3 {
        let r = reproduce("ex-3.26").unwrap();
        assert_eq!(r.sections["sigma1"]["outcome"], "Falsified");
        assert_eq!(r.sections["fixed_points"], serde_json::json!([]));
    }
}

#[test]
fn theorem_needs_its_inputs() {
    let err = parse_scenario_str(
        r#"{"space": {"type": "harmonic-truncation", "n_max": 10}, "sigma": {"name": "gamma"}, "theorem": "T3.29"}"#,
    )
    .unwrap_err();
    assert!(matches!(err, ScenarioError::Validation { ref field, .. } if field == "theorem"));
    let err = parse_scenario_str(r#"{"space": {"type": "finite", "points": [0, 1]}, "theorem": "T9.9"}"#).unwrap_err();
    assert!(matches!(err, ScenarioError::Validation { .. }));
    let err = parse_scenario_str(
        r#"{"space": {"type": "finite", "points": [0, 1]}, "sigma": {"name": "gamma"}, "theorem": "C3.31", "degree": 1}"#,
    )
    .unwrap_err();
    assert!(err.to_string().contains("degree"));
}
