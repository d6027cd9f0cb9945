//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sigmalab_core::contraction::{
    check_condition, evaluate_pair, evaluate_pairs, kannan_supremum, ConditionSpec, KannanSupremum, PairMode,
};
use sigmalab_core::harness::random::{random_kannan_scenario, random_metric};
use sigmalab_core::harness::reproduce::{gallery_member, reproduce};
use sigmalab_core::harness::run_theorem;
use sigmalab_core::metric::{build_truncated_harmonic_space, validate_metric, SelfMap, ViolationKind};
use sigmalab_core::picard::{brute_force_points, diagnose, run_picard_pair, solve, SolveResult, Termination};
use sigmalab_core::scenario::{parse_scenario_str, Scenario};
use sigmalab_core::sigma::{
    check_axiom, classify, replay_witness, AxiomKind, ComparisonFn, Family, FunctionClass, Outcome, Partner,
    SearchConfig,
};

const EPS: f64 = 1e-12;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn builtin(name: &str, extra: &str) -> Scenario {
    parse_scenario_str(&format!(r#"{{"space": {{"type": "builtin", "name": "{name}"}}{extra}}}"#)).unwrap()
}

fn class_outcome(f: &ComparisonFn, class: FunctionClass, c: Option<f64>) -> Outcome {
    classify(f, &[1.0, 2.0], &SearchConfig::default())
        .class(class, c)
        .expect("class present")
        .outcome
}

fn criterion_1() -> Result<String, String> {
    let cfg = SearchConfig::default();
    let r = reproduce("classify-gallery").map_err(|e| e.to_string())?;
    ensure(r.passed(), "classify-gallery golden checks failed")?;

    let gamma = gallery_member("gamma");
    for c in [1.0, 2.0] {
        ensure(
            class_outcome(&gamma, FunctionClass::SigmaC, Some(c)) == Outcome::CertifiedHolds,
            format!("gamma not certified for c = {c}"),
        )?;
    }
    ensure(class_outcome(&gamma, FunctionClass::Simulation, None) == Outcome::Falsified, "gamma is a simulation")?;
    let ub = check_axiom(&gamma, AxiomKind::UpperBound, None, &cfg);
    let w = ub.witness.as_ref().ok_or("gamma upper bound has no witness")?;
    ensure(
        w.family == Family::Constant { value: 1.0 }
            && w.partner == Some(Partner::Family { family: Family::Constant { value: 1.0 } }),
        "gamma witness is not t_n = s_n = 1",
    )?;
    ensure(gamma.eval(1.0, 1.0) == 0.0, "gamma(1, 1) != 0")?;
    ensure(replay_witness(&gamma, AxiomKind::UpperBound, None, w), "gamma witness does not replay")?;

    let beta = gallery_member("beta");
    ensure(class_outcome(&beta, FunctionClass::Simulation, None) == Outcome::CertifiedHolds, "beta not simulation")?;
    let s1 = check_axiom(&beta, AxiomKind::Sigma1, None, &cfg);
    ensure(s1.outcome == Outcome::Falsified, "beta sigma1 not falsified")?;
    let w = s1.witness.as_ref().ok_or("no beta witness")?;
    for n in 1..=10u64 {
        ensure((w.family.term(n) - (1.0 + 1.0 / n as f64)).abs() < EPS, "beta witness is not 1 + 1/n")?;
    }

    let step = gallery_member("step-g");
    ensure(class_outcome(&step, FunctionClass::SigmaC, Some(2.0)) == Outcome::CertifiedHolds, "step-g not sigma_2")?;
    let rho1 = check_axiom(&step, AxiomKind::Rho1, None, &cfg);
    let w = rho1.witness.as_ref().ok_or("no step-g rho1 witness")?;
    ensure(rho1.outcome == Outcome::Falsified, "step-g rho1 not falsified")?;
    for n in 1..=10u64 {
        ensure(w.family.term(n) == n as f64, "step-g witness is not a_n = n")?;
    }

    let chi = gallery_member("chi");
    ensure(class_outcome(&chi, FunctionClass::SigmaC, Some(1.0)) == Outcome::CertifiedHolds, "chi^0.4 not sigma_1")?;

    let tau = gallery_member("tau");
    let s1 = check_axiom(&tau, AxiomKind::Sigma1, None, &cfg);
    ensure(s1.outcome == Outcome::Falsified, "tau sigma1 not falsified")?;
    ensure(
        s1.witness.as_ref().map(|w| w.family) == Some(Family::Constant { value: 1.0 }),
        "tau witness is not constant 1",
    )?;
    ensure((tau.eval(1.0, 2.0) - 1.0 / 3.0).abs() < EPS, "tau(1, 2) != 1/3")?;
    Ok("matrix and witnesses as expected".into())
}

fn criterion_2() -> Result<String, String> {
    let sc = builtin("ex-3.24", "");
    let (space, t, s) = (&sc.space, &sc.t, &sc.s);
    let id = SelfMap::identity(space);
    let (x3, x4) = (space.index_of("3").unwrap(), space.index_of("4").unwrap());
    for k in 1..50 {
        let alpha = k as f64 / 100.0;
        let spec = ConditionSpec::classical_kannan(alpha).unwrap();
        let r = check_condition(space, t, &id, &spec, PairMode::PositivePairs).unwrap();
        ensure(!r.holds, format!("classical Kannan holds at alpha = {alpha}"))?;
        let ev = evaluate_pair(space, t, &id, &spec, PairMode::PositivePairs, x3, x4);
        ensure(ev.value < 0.0, format!("(3,4) does not violate at alpha = {alpha}"))?;
    }
    match kannan_supremum(space, t).unwrap() {
        KannanSupremum::Finite { value, .. } => ensure((value - 0.5).abs() <= EPS, format!("supremum {value}"))?,
        KannanSupremum::Unbounded { .. } => return Err("supremum unbounded".into()),
    }
    let spec = ConditionSpec::SigmaSKannan {
        sigma: ComparisonFn::linear(3.0 / 7.0).unwrap(),
    };
    ensure(
        check_condition(space, t, s, &spec, PairMode::PositivePairs).unwrap().holds,
        "sigma-S-Kannan fails",
    )?;
    let sets = brute_force_points(space, t, s).unwrap();
    let labels: Vec<&str> = sets.coincidence_points.iter().map(|&i| space.label(i)).collect();
    ensure(labels == ["1", "2", "3", "5"], format!("coincidence set {labels:?}"))?;
    let sol = solve(space, t, s, None, &sc.picard).unwrap();
    let p = match sol.result {
        SolveResult::CoincidencePoint { point, .. } | SolveResult::FixedPoint { point, .. } => point,
        other => return Err(format!("solve returned {other:?}")),
    };
    ensure(sets.coincidence_points.contains(&p), "solve point not in oracle set")?;
    let r = run_theorem(&sc).unwrap();
    let c = r.conclusion.as_ref().unwrap();
    ensure(r.all_hold() && c.holds && c.matches, "T3.18 report")?;
    Ok(format!("solve found {}", space.label(p)))
}

fn criterion_3() -> Result<String, String> {
    let sc = builtin("ex-3.26", "");
    let (space, t, s) = (&sc.space, &sc.t, &sc.s);
    let spec = ConditionSpec::SigmaSKannan {
        sigma: sc.sigma.clone().unwrap(),
    };
    let evs: Vec<_> = evaluate_pairs(space, t, s, &spec, PairMode::AllOrderedPairs)
        .unwrap()
        .into_iter()
        .filter(|p| p.x < p.y)
        .collect();
    let expected = [(0.0, 2.0), (1.0, 2.0), (1.0, 4.0 / 3.0)];
    ensure(evs.len() == 3, "three pairs")?;
    for (ev, (d, bound)) in evs.iter().zip(expected) {
        ensure(
            (ev.t - d).abs() <= EPS && (ev.value + ev.t - bound).abs() <= EPS,
            format!("pair ({}, {}): {} vs {}", ev.x_label, ev.y_label, ev.t, ev.value + ev.t),
        )?;
    }
    let id = SelfMap::identity(space);
    ensure(brute_force_points(space, t, &id).unwrap().fixed_points.is_empty(), "fixed set not empty")?;
    let base = space.index_of("1").unwrap();
    let trace = run_picard_pair(space, t, s, base, &sc.picard).unwrap();
    ensure(
        matches!(trace.termination, Termination::Cycle { period: 2, .. }),
        format!("termination {:?}", trace.termination),
    )?;
    let diag = diagnose(&trace, space, t, s, &sc.picard).unwrap();
    ensure(diag.step_tail.iter().all(|a| (a - 1.0).abs() <= EPS), "a_n does not tend to 1")?;
    let v = check_axiom(sc.sigma.as_ref().unwrap(), AxiomKind::Sigma1, None, &sc.search);
    ensure(v.outcome == Outcome::Falsified, "sigma1 not falsified")?;
    let r = run_theorem(&sc).unwrap();
    ensure(r.hypothesis("sigma1").unwrap().status == sigmalab_core::harness::Status::Fails, "harness sigma1")?;
    Ok("counterexample reproduced".into())
}

fn criterion_4() -> Result<String, String> {
    let h = build_truncated_harmonic_space(50).unwrap();
    let (space, t, s) = (&h.space, &h.t, &h.s);
    let spec = ConditionSpec::s_dominated(ComparisonFn::linear(1.0 / 3.0).unwrap(), 1).unwrap();
    let r = check_condition(space, t, s, &spec, PairMode::PositivePairs).unwrap();
    ensure(r.holds, "S-dominated condition fails")?;
    let zero = h.zero();
    let with_zero = evaluate_pairs(space, t, s, &spec, PairMode::PositivePairs)
        .unwrap()
        .into_iter()
        .filter(|p| !p.skipped && (p.x == zero || p.y == zero))
        .count();
    ensure(with_zero > 0, "no pair with 0 was checked")?;

    let (q, f) = (h.reciprocal(4).unwrap(), h.reciprocal(5).unwrap());
    let ev = evaluate_pair(space, t, s, &spec, PairMode::PositivePairs, q, f);
    let pw = |n: i32| 1.0 / (n as f64).powi(n);
    let t_exp = pw(5) - pw(6);
    let s_exp = (pw(4) - pw(5)) + (pw(5) - pw(6));
    ensure((ev.t - t_exp).abs() <= EPS && (ev.s / 3.0 - s_exp / 3.0).abs() <= EPS, "spot pair values")?;
    ensure((ev.t - 2.986e-4).abs() < 1e-7 && (ev.s / 3.0 - 1.295e-3).abs() < 1e-6 && ev.value > 0.0, "spot pair")?;

    let id = SelfMap::identity(space);
    let kannan = ConditionSpec::classical_kannan(0.49).unwrap();
    let kr = check_condition(space, t, &id, &kannan, PairMode::PositivePairs).unwrap();
    let w = kr.witness.ok_or("classical Kannan holds")?;
    let pair = [w.x_label.as_str(), w.y_label.as_str()];
    ensure(pair == ["0", "1/4"], format!("witness {pair:?}"))?;
    ensure((w.t / w.s - 4.0).abs() <= EPS, format!("required alpha {}", w.t / w.s))?;

    let trace = run_picard_pair(space, t, &id, q, &Default::default()).unwrap();
    let diag = diagnose(&trace, space, t, &id, &Default::default()).unwrap();
    ensure(diag.asymptotically_regular, "not asymptotically regular")?;
    let core = (4..=50).count();
    for n in 0..core {
        let exact = 1.0 / (((n + 4) * (n + 5)) as f64);
        ensure(
            (trace.step_distances[n] - exact).abs() <= EPS,
            format!("a_{n} = {} vs {exact}", trace.step_distances[n]),
        )?;
    }
    Ok(format!("{} positive pairs, {core} orbit terms exact", r.pairs_checked))
}

fn criterion_5() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut sequences = 0;
    let mut pairs = 0;
    let mut violations = 0;
    for alpha in [0.1, 0.3, 0.45] {
        let chi = ComparisonFn::chi(alpha).unwrap();
        let ratio = alpha / (1.0 - alpha);
        for _ in 0..1000 {
            let len = rng.gen_range(2..30);
            let mut a = vec![rng.gen_range(0.01..10.0f64)];
            while a.len() < len {
                let prev = *a.last().unwrap();
                // resample until the premise holds for the new term
                let next = loop {
                    let x = rng.gen_range(0.0..2.0) * prev;
                    if x > 0.0 && chi.eval(x, prev + x) > 0.0 {
                        break x;
                    }
                };
                a.push(next);
            }
            sequences += 1;
            for w in a.windows(2) {
                pairs += 1;
                if w[1] >= w[0] * ratio {
                    violations += 1;
                }
            }
        }
    }
    ensure(violations == 0, format!("{violations} violations"))?;
    Ok(format!("{sequences} sequences, {pairs} consecutive pairs, 0 violations"))
}

fn criterion_6() -> Result<String, String> {
    let mut coincidence_hits = 0;
    let mut singleton = 0;
    for seed in 0..100u64 {
        let sc = random_kannan_scenario(seed, 0.4, false);
        let sets = brute_force_points(&sc.space, &sc.t, &sc.s).unwrap();
        let sol = solve(&sc.space, &sc.t, &sc.s, None, &sc.picard).unwrap();
        let hit = match sol.result {
            SolveResult::CoincidencePoint { point, .. } | SolveResult::FixedPoint { point, .. } => {
                sets.coincidence_points.contains(&point)
            }
            _ => false,
        };
        let report = run_theorem(&sc).unwrap();
        if hit && report.conclusion.as_ref().unwrap().matches {
            coincidence_hits += 1;
        }

        let sc = random_kannan_scenario(10_000 + seed, 0.4, true);
        let id = SelfMap::identity(&sc.space);
        if brute_force_points(&sc.space, &sc.t, &id).unwrap().fixed_points.len() == 1 {
            singleton += 1;
        }
    }
    ensure(coincidence_hits == 100, format!("coincidence {coincidence_hits}/100"))?;
    ensure(singleton == 100, format!("singleton fixed sets {singleton}/100"))?;
    Ok("100/100 coincidence, 100/100 unique fixed point".into())
}

fn criterion_7() -> Result<String, String> {
    let mut sc = builtin("koparde-grid", "");
    sc.picard.tol = 1e-9;
    let (space, t) = (&sc.space, &sc.t);
    ensure(space.len() == 101, "grid size")?;
    let id = SelfMap::identity(space);
    let spec = ConditionSpec::koparde_waghmode(0.3).unwrap();
    let bad = evaluate_pairs(space, t, &id, &spec, PairMode::AllOrderedPairs)
        .unwrap()
        .into_iter()
        .filter(|p| p.x != p.y && !spec.satisfied(p.value))
        .count();
    ensure(bad == 0, format!("{bad} violating pairs"))?;
    let fixed = brute_force_points(space, t, &id).unwrap().fixed_points;
    ensure(fixed.len() == 1 && space.label(fixed[0]) == "0", "fixed set")?;
    let base = space.index_of("1").unwrap();
    let sol = solve(space, t, &id, Some(base), &sc.picard).unwrap();
    match sol.result {
        SolveResult::FixedPoint { point, iterations } if space.label(point) == "0" && iterations <= 15 => {
            Ok(format!("reached 0 in {iterations} iterations"))
        }
        other => Err(format!("solve returned {other:?}")),
    }
}

fn plant(rng: &mut ChaCha8Rng, d: &mut [Vec<f64>], kind: ViolationKind) {
    let n = d.len();
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    match kind {
        ViolationKind::NonZeroDiagonal => d[i][i] = rng.gen_range(0.1..1.0),
        ViolationKind::Asymmetry => d[i][j] += rng.gen_range(0.1..1.0),
        ViolationKind::IndiscerniblePair => {
            d[i][j] = 0.0;
            d[j][i] = 0.0;
        }
        ViolationKind::TriangleFailure => {
            let mut k = rng.gen_range(0..n);
            while k == i || k == j {
                k = rng.gen_range(0..n);
            }
            let long = d[i][k] + d[k][j] + rng.gen_range(0.1..1.0);
            d[i][j] = long;
            d[j][i] = long;
        }
    }
}

fn criterion_8() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for _ in 0..500 {
        let n = rng.gen_range(2..=15);
        let d = random_metric(&mut rng, n);
        let v = validate_metric(&d, 1e-12);
        ensure(v.is_empty(), format!("valid space reported {:?}", v.first()))?;
    }
    let kinds = [
        ViolationKind::NonZeroDiagonal,
        ViolationKind::Asymmetry,
        ViolationKind::IndiscerniblePair,
        ViolationKind::TriangleFailure,
    ];
    for round in 0..500 {
        let n = rng.gen_range(3..=15);
        let mut d = random_metric(&mut rng, n);
        let kind = kinds[round % kinds.len()];
        plant(&mut rng, &mut d, kind);
        let v = validate_metric(&d, 1e-12);
        let first = v.first().ok_or(format!("planted {kind:?} not found"))?;
        ensure(first.kind() == kind, format!("planted {kind:?}, first witness {:?}", first.kind()))?;
        ensure(first.replays(&d, 1e-12), "witness does not replay")?;
    }
    Ok("500 valid, 500 planted".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Check, Duration); 8] = [
        ("gallery classification matrix", criterion_1, Duration::from_secs(5)),
        ("Kannan failure and coincidence pair on five points", criterion_2, Duration::from_secs(1)),
        ("sigma1 counterexample on three points", criterion_3, Duration::from_secs(1)),
        ("S-dominated condition on the harmonic truncation", criterion_4, Duration::from_secs(1)),
        ("chi decay inequality", criterion_5, Duration::from_secs(5)),
        ("randomized coincidence soundness", criterion_6, Duration::from_secs(30)),
        ("Koparde-Waghmode grid demo", criterion_7, Duration::from_secs(1)),
        ("metric validator", criterion_8, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= *limit {
                Ok(msg)
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(msg) => println!("criterion {}: PASS  {name} ({msg}; {elapsed:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({msg}; {elapsed:.2?})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
