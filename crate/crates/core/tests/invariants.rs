use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sigmalab_core::contraction::{check_condition, replay_pair, ConditionSpec, PairMode};
use sigmalab_core::harness::random::random_metric;
use sigmalab_core::harness::run_theorem;
use sigmalab_core::metric::{build_finite_space, validate_metric, FiniteMetricSpace, SelfMap, ViolationKind};
use sigmalab_core::picard::{brute_force_points, run_picard_pair, solve, PicardConfig, SolveResult, Termination};
use sigmalab_core::report::round_sig;
use sigmalab_core::scenario::{parse_scenario_file, parse_scenario_str, Scenario};
use sigmalab_core::sigma::{check_axiom, replay_witness, AxiomKind, ComparisonFn, Outcome, SearchConfig};

fn space(seed: u64, n: usize) -> FiniteMetricSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = random_metric(&mut rng, n);
    build_finite_space((0..n).map(|i| format!("p{i}")).collect(), d, 1e-12).unwrap()
}

fn maps() -> impl Strategy<Value = (u64, Vec<usize>, Vec<usize>)> {
    (any::<u64>(), 2usize..9).prop_flat_map(|(seed, n)| {
        (Just(seed), prop::collection::vec(0..n, n), prop::collection::vec(0..n, n))
    })
}

fn spec_strategy() -> impl Strategy<Value = ConditionSpec> {
    prop_oneof![
        (0.01f64..0.49).prop_map(|a| ConditionSpec::classical_kannan(a).unwrap()),
        (0.01f64..0.49).prop_map(|a| ConditionSpec::koparde_waghmode(a).unwrap()),
        (0.01f64..0.49).prop_map(|a| ConditionSpec::SigmaSKannan { sigma: ComparisonFn::chi(a).unwrap() }),
        (0.01f64..0.49, 1u32..4).prop_map(|(a, w)| ConditionSpec::s_dominated(ComparisonFn::chi(a).unwrap(), w).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn completed_metrics_validate(seed in any::<u64>(), n in 1usize..14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_metric(&mut rng, n);
        prop_assert!(validate_metric(&d, 1e-12).is_empty());
    }

    #[test]
    fn asymmetry_is_first_witness(seed in any::<u64>(), n in 2usize..10, bump in 0.01f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut d = random_metric(&mut rng, n);
        d[0][n - 1] += bump;
        let v = validate_metric(&d, 1e-12);
        prop_assert_eq!(v[0].kind(), ViolationKind::Asymmetry);
        prop_assert!(v[0].replays(&d, 1e-12));
    }

    #[test]
    fn rounding_is_idempotent(x in -1e9f64..1e9) {
        let r = round_sig(x, 12);
        prop_assert_eq!(round_sig(r, 12), r);
        prop_assert!((r - x).abs() <= x.abs() * 1e-11);
    }

    #[test]
    fn condition_witnesses_replay((seed, t, s) in maps(), spec in spec_strategy()) {
        let sp = space(seed, t.len());
        let t = SelfMap::from_images(&sp, t).unwrap();
        let s = SelfMap::from_images(&sp, s).unwrap();
        let positive = check_condition(&sp, &t, &s, &spec, PairMode::PositivePairs).unwrap();
        let all = check_condition(&sp, &t, &s, &spec, PairMode::AllOrderedPairs).unwrap();
        if let Some(w) = &positive.witness {
            prop_assert!(replay_pair(&sp, &t, &s, &spec, w));
        }
        // skipping pairs can only help
        prop_assert!(!all.holds || positive.holds);
        prop_assert_eq!(positive.pairs_checked + positive.pairs_skipped, t.images().len().pow(2));
    }

    #[test]
    fn picard_chains_respect_the_pair((seed, t, s) in maps(), base in 0usize..9) {
        let n = t.len();
        let sp = space(seed, n);
        let t = SelfMap::from_images(&sp, t).unwrap();
        let s = SelfMap::from_images(&sp, s).unwrap();
        let cfg = PicardConfig::default();
        let trace = run_picard_pair(&sp, &t, &s, base % n, &cfg).unwrap();
        for k in 1..trace.points.len() {
            prop_assert_eq!(s.apply(trace.points[k]), t.apply(trace.points[k - 1]));
        }
        if let Termination::Coincidence { index } = trace.termination {
            let p = trace.points[index];
            prop_assert_eq!(t.apply(p), s.apply(p));
        }
    }

    #[test]
    fn solve_agrees_with_the_oracle((seed, t, s) in maps()) {
        let sp = space(seed, t.len());
        let t = SelfMap::from_images(&sp, t).unwrap();
        let s = SelfMap::from_images(&sp, s).unwrap();
        let sets = brute_force_points(&sp, &t, &s).unwrap();
        if let Ok(sol) = solve(&sp, &t, &s, None, &PicardConfig::default()) {
            match sol.result {
                SolveResult::FixedPoint { point, .. } => {
                    prop_assert!(s.is_identity());
                    prop_assert!(sets.fixed_points.contains(&point));
                }
                SolveResult::CoincidencePoint { point, .. } => prop_assert!(sets.coincidence_points.contains(&point)),
                _ => {}
            }
        }
        for &p in &sets.fixed_points {
            prop_assert_eq!(sets.coincidence_points.contains(&p), s.apply(p) == p);
        }
    }

    #[test]
    fn linear_witnesses_replay(slope in 0.01f64..3.0, seed in any::<u64>()) {
        let f = ComparisonFn::linear(slope).unwrap().without_certificates();
        let cfg = SearchConfig { seed, budget: 2000, ..Default::default() };
        for kind in [AxiomKind::Sigma1, AxiomKind::Dollar, AxiomKind::UpperBound] {
            let v = check_axiom(&f, kind, None, &cfg);
            if v.outcome == Outcome::Falsified {
                prop_assert!(replay_witness(&f, kind, None, v.witness.as_ref().unwrap()));
            }
        }
    }

    #[test]
    fn chi_premise_forces_decay(alpha in 0.01f64..0.49, prev in 1e-6f64..1e6, u in 0.0f64..1.0) {
        let chi = ComparisonFn::chi(alpha).unwrap();
        let next = prev * u * 2.0;
        if next > 0.0 && chi.eval(next, prev + next) > 0.0 {
            prop_assert!(next < prev * alpha / (1.0 - alpha));
        }
    }

    #[test]
    fn scenario_files_round_trip(n in 1usize..8, seed in any::<u64>(), max_iter in 1usize..500) {
        let sp = space(seed, n);
        let text = serde_json::json!({
            "space": {"type": "finite", "labels": sp.labels(), "metric": sp.table()},
            "maps": {"T": {"builtin": "constant", "value": "p0"}},
            "max_iter": max_iter,
        }).to_string();
        let file = parse_scenario_file(&text).unwrap();
        let again = parse_scenario_file(&serde_json::to_string(&file).unwrap()).unwrap();
        prop_assert_eq!(&file, &again);
        let sc = Scenario::from_file(file).unwrap();
        prop_assert_eq!(sc.picard.max_iter, max_iter);
    }
}

/// The conclusion is computed without looking at the hypotheses, so
/// swapping the comparison function leaves it untouched.
#[test]
fn conclusions_do_not_depend_on_sigma() {
    for space in ["ex-3.24", "ex-3.26"] {
        let observed: Vec<_> = ["{\"name\": \"chi\", \"alpha\": 0.4}", "{\"name\": \"tau\"}", "{\"name\": \"gamma\"}"]
            .iter()
            .map(|sigma| {
                let text = format!(r#"{{"space": {{"type": "builtin", "name": "{space}"}}, "sigma": {sigma}}}"#);
                let r = run_theorem(&parse_scenario_str(&text).unwrap()).unwrap();
                serde_json::to_string(&r.conclusion.unwrap().observed).unwrap()
            })
            .collect();
        assert!(observed.windows(2).all(|w| w[0] == w[1]), "{space}");
    }
}

#[test]
fn theorem_reports_are_deterministic() {
    let sc = parse_scenario_str(r#"{"space": {"type": "builtin", "name": "ex-3.34"}, "theorem": "T3.33"}"#).unwrap();
    let a = serde_json::to_string(&run_theorem(&sc).unwrap()).unwrap();
    let b = serde_json::to_string(&run_theorem(&sc).unwrap()).unwrap();
    assert_eq!(a, b);
}
