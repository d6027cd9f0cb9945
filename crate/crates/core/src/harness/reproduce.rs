//! Builtin worked examples and their golden expectations.

use serde::Serialize;
use serde_json::{json, Map, Value};

use super::{run_theorem, HarnessError, HypothesisReport};
use crate::contraction::{check_condition, evaluate_pairs, kannan_supremum, ConditionSpec, KannanSupremum, PairMode};
use crate::metric::{FiniteMetricSpace, SelfMap};
use crate::picard::{brute_force_points, diagnose, run_picard_pair, solve, SolveResult};
use crate::report::{labels, round_value, solve_result_value, to_value, trace_summary};
use crate::scenario::{parse_scenario_str, Scenario};
use crate::sigma::{check_axiom, classify, gallery, AxiomKind, ComparisonFn, FunctionClass, GalleryParams, GALLERY_NAMES};

pub const EXAMPLE_IDS: &[&str] = &[
    "ex-3.24",
    "ex-3.26",
    "ex-3.34",
    "ex-3.35",
    "koparde-demo",
    "patel-deheri-demo",
    "classify-gallery",
];

/// Numbers agree when within this absolute distance.
pub const GOLDEN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenCheck {
    pub path: String,
    pub expected: Value,
    pub actual: Value,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reproduction {
    pub id: String,
    pub sections: Map<String, Value>,
    pub checks: Vec<GoldenCheck>,
}

impl Reproduction {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

fn golden_text(id: &str) -> Option<&'static str> {
    Some(match id {
        "ex-3.24" => include_str!("../../golden/ex-3.24.json"),
        "ex-3.26" => include_str!("../../golden/ex-3.26.json"),
        "ex-3.34" => include_str!("../../golden/ex-3.34.json"),
        "ex-3.35" => include_str!("../../golden/ex-3.35.json"),
        "koparde-demo" => include_str!("../../golden/koparde-demo.json"),
        "patel-deheri-demo" => include_str!("../../golden/patel-deheri-demo.json"),
        "classify-gallery" => include_str!("../../golden/classify-gallery.json"),
        _ => return None,
    })
}

/// Structural equality, numbers compared to [`GOLDEN_TOL`].
pub fn values_match(expected: &Value, actual: &Value) -> bool {
    match (expected, actual) {
        (Value::Number(a), Value::Number(b)) => match (a.as_f64(), b.as_f64()) {
            (Some(a), Some(b)) => (a - b).abs() <= GOLDEN_TOL,
            _ => false,
        },
        (Value::Array(a), Value::Array(b)) => a.len() == b.len() && a.iter().zip(b).all(|(x, y)| values_match(x, y)),
        (Value::Object(a), Value::Object(b)) => {
            a.len() == b.len() && a.iter().all(|(k, v)| b.get(k).is_some_and(|w| values_match(v, w)))
        }
        (a, b) => a == b,
    }
}

fn run_checks(id: &str, doc: &Value) -> Vec<GoldenCheck> {
    let golden: Value = serde_json::from_str(golden_text(id).expect("every example has a golden file"))
        .expect("golden files are valid JSON");
    golden["checks"]
        .as_array()
        .expect("golden checks array")
        .iter()
        .map(|c| {
            let path = c["path"].as_str().expect("check path").to_string();
            let expected = c["expected"].clone();
            let actual = doc.pointer(&path).cloned().unwrap_or(Value::Null);
            let passed = values_match(&expected, &actual);
            GoldenCheck {
                path,
                expected,
                actual,
                passed,
            }
        })
        .collect()
}

fn builtin(space: &str, extra: &str) -> Scenario {
    let text = format!(r#"{{"space": {{"type": "builtin", "name": "{space}"}}{extra}}}"#);
    parse_scenario_str(&text).expect("builtin scenarios are valid")
}

fn theorem_value(r: &HypothesisReport) -> Value {
    let mut v = to_value(r);
    v["all_hold"] = json!(r.all_hold());
    v["exit_code"] = json!(r.exit_code());
    v
}

fn supremum_value(space: &FiniteMetricSpace, sup: &KannanSupremum) -> Value {
    match sup {
        KannanSupremum::Finite { value, argmax } => json!({
            "value": value,
            "pair": argmax.map(|(x, y)| vec![space.label(x), space.label(y)]),
        }),
        KannanSupremum::Unbounded { pair } => json!({
            "value": "unbounded",
            "pair": [space.label(pair.0), space.label(pair.1)],
        }),
    }
}

fn condition_value(
    space: &FiniteMetricSpace,
    t: &SelfMap,
    s: &SelfMap,
    spec: &ConditionSpec,
    mode: PairMode,
) -> Value {
    to_value(&check_condition(space, t, s, spec, mode).expect("maps share the space"))
}

fn fixed_points(space: &FiniteMetricSpace, t: &SelfMap) -> Vec<String> {
    let id = SelfMap::identity(space);
    labels(space, &brute_force_points(space, t, &id).expect("same space").fixed_points)
}

fn ex_3_24() -> Map<String, Value> {
    let sc = builtin("ex-3.24", "");
    let (space, t, s) = (&sc.space, &sc.t, &sc.s);
    let id = SelfMap::identity(space);
    let mut m = Map::new();
    let sup = kannan_supremum(space, t).expect("same space");
    m.insert("kannan_supremum".into(), supremum_value(space, &sup));
    let mut kannan = Map::new();
    for alpha in [0.1, 0.25, 0.4, 0.49] {
        let spec = ConditionSpec::classical_kannan(alpha).expect("alpha in range");
        let mut r = condition_value(space, t, &id, &spec, PairMode::PositivePairs);
        let ev = crate::contraction::evaluate_pair(space, t, &id, &spec, PairMode::PositivePairs, 2, 3);
        r["pair_3_4"] = to_value(&ev);
        kannan.insert(format!("{alpha}"), r);
    }
    m.insert("classical_kannan".into(), Value::Object(kannan));
    let spec = ConditionSpec::SigmaSKannan {
        sigma: sc.sigma.clone().expect("builtin sigma"),
    };
    m.insert(
        "sigma_s_kannan".into(),
        condition_value(space, t, s, &spec, PairMode::PositivePairs),
    );
    let sets = brute_force_points(space, t, s).expect("same space");
    m.insert("coincidence_points".into(), json!(labels(space, &sets.coincidence_points)));
    let sol = solve(space, t, s, None, &sc.picard).expect("CLR base exists");
    let found = match sol.result {
        SolveResult::FixedPoint { point, .. } | SolveResult::CoincidencePoint { point, .. } => Some(point),
        _ => None,
    };
    m.insert("solve".into(), solve_result_value(space, &sol.result));
    m.insert(
        "solve_in_oracle".into(),
        json!(found.is_some_and(|p| sets.coincidence_points.contains(&p))),
    );
    m.insert("theorem".into(), theorem_value(&run_theorem(&sc).expect("valid")));
    m
}

fn ex_3_26() -> Map<String, Value> {
    let sc = builtin("ex-3.26", "");
    let (space, t, s) = (&sc.space, &sc.t, &sc.s);
    let sigma = sc.sigma.clone().expect("builtin sigma");
    let spec = ConditionSpec::SigmaSKannan { sigma: sigma.clone() };
    let mut m = Map::new();
    let pairs: Vec<Value> = evaluate_pairs(space, t, s, &spec, PairMode::AllOrderedPairs)
        .expect("same space")
        .into_iter()
        .filter(|p| p.x < p.y)
        .map(|p| {
            json!({
                "pair": [p.x_label, p.y_label],
                "t": p.t,
                "s": p.s,
                "bound": p.value + p.t,
                "value": p.value,
            })
        })
        .collect();
    m.insert("pairs".into(), json!(pairs));
    m.insert("fixed_points".into(), json!(fixed_points(space, t)));
    let base = sc.base.expect("builtin base");
    let trace = run_picard_pair(space, t, s, base, &sc.picard).expect("valid base");
    let diag = diagnose(&trace, space, t, s, &sc.picard).expect("same space");
    let mut orbit = trace_summary(space, &trace);
    orbit["diagnostics"] = to_value(&diag);
    orbit["a_limit"] = json!(diag.step_tail.last().copied());
    m.insert("orbit".into(), orbit);
    let v = check_axiom(&sigma, AxiomKind::Sigma1, None, &sc.search);
    m.insert("sigma1".into(), to_value(&v));
    m.insert("tau_at_1_2".into(), json!(sigma.eval(1.0, 2.0)));
    m.insert("theorem".into(), theorem_value(&run_theorem(&sc).expect("valid")));
    m
}

fn ex_3_34() -> Map<String, Value> {
    let sc = builtin("ex-3.34", "");
    let (space, t, s) = (&sc.space, &sc.t, &sc.s);
    let h = sc.harmonic.as_ref().expect("harmonic space");
    let sigma = sc.sigma.clone().expect("builtin sigma");
    let spec = ConditionSpec::s_dominated(sigma, 1).expect("valid");
    let mut m = Map::new();
    m.insert("s_dominated".into(), condition_value(space, t, s, &spec, PairMode::PositivePairs));
    let (x, y) = (h.reciprocal(4).expect("1/4"), h.reciprocal(5).expect("1/5"));
    let ev = crate::contraction::evaluate_pair(space, t, s, &spec, PairMode::PositivePairs, x, y);
    m.insert(
        "spot_pair".into(),
        json!({ "pair": [ev.x_label, ev.y_label], "t": ev.t, "s_third": ev.s / 3.0, "value": ev.value }),
    );
    let sup = kannan_supremum(space, t).expect("same space");
    m.insert("kannan_supremum".into(), supremum_value(space, &sup));
    let id = SelfMap::identity(space);
    let kannan = ConditionSpec::classical_kannan(0.49).expect("valid");
    let r = check_condition(space, t, &id, &kannan, PairMode::PositivePairs).expect("same space");
    let mut kv = to_value(&r);
    if let Some(w) = &r.witness {
        kv["required_alpha"] = json!(w.t / w.s);
    }
    m.insert("classical_kannan".into(), kv);
    let trace = run_picard_pair(space, t, &id, x, &sc.picard).expect("valid base");
    let diag = diagnose(&trace, space, t, &id, &sc.picard).expect("same space");
    m.insert(
        "picard_identity".into(),
        json!({
            "base": space.label(x),
            "asymptotically_regular": diag.asymptotically_regular,
            "a_n_head": trace.step_distances.iter().take(20).collect::<Vec<_>>(),
        }),
    );
    m.insert("fixed_points".into(), json!(fixed_points(space, t)));
    m.insert("theorem".into(), theorem_value(&run_theorem(&sc).expect("valid")));
    m
}

fn ex_3_35() -> Map<String, Value> {
    let sc = builtin("ex-3.24", r#", "sigma": {"name": "chi", "alpha": 0.45}"#);
    let (space, t, s) = (&sc.space, &sc.t, &sc.s);
    let sigma = sc.sigma.clone().expect("sigma");
    let mut m = Map::new();
    let mut by_degree = Map::new();
    for w in 1..=3 {
        let spec = ConditionSpec::s_dominated(sigma.clone(), w).expect("valid");
        by_degree.insert(w.to_string(), condition_value(space, t, s, &spec, PairMode::PositivePairs));
    }
    m.insert("s_dominated".into(), Value::Object(by_degree));
    let collision = s
        .injectivity_collision()
        .map(|(a, b)| vec![space.label(a), space.label(b)]);
    m.insert("s_injective".into(), json!(collision.is_none()));
    m.insert("s_collision".into(), json!(collision));
    m.insert("fixed_points".into(), json!(fixed_points(space, t)));
    m
}

fn koparde_demo() -> Map<String, Value> {
    let sc = builtin("koparde-grid", "");
    let (space, t) = (&sc.space, &sc.t);
    let id = SelfMap::identity(space);
    let spec = ConditionSpec::koparde_waghmode(0.3).expect("valid");
    let mut m = Map::new();
    m.insert("condition".into(), condition_value(space, t, &id, &spec, PairMode::PositivePairs));
    let all = evaluate_pairs(space, t, &id, &spec, PairMode::AllOrderedPairs).expect("same space");
    let distinct: Vec<_> = all.iter().filter(|p| p.x != p.y).collect();
    let violations = distinct.iter().filter(|p| !spec.satisfied(p.value)).count();
    m.insert(
        "all_pairs_distinct".into(),
        json!({ "pairs": distinct.len(), "violations": violations }),
    );
    m.insert("fixed_points".into(), json!(fixed_points(space, t)));
    let base = sc.base.expect("builtin base");
    let sol = solve(space, t, &id, Some(base), &sc.picard).expect("valid base");
    m.insert("solve".into(), solve_result_value(space, &sol.result));
    m.insert("theorem".into(), theorem_value(&run_theorem(&sc).expect("valid")));
    m
}

fn patel_deheri_demo() -> Map<String, Value> {
    let sc = builtin(
        "ex-3.34",
        r#", "theorem": "C3.32", "sigma": {"name": "chi", "alpha": 0.3333333333333333}"#,
    );
    let (space, t, s) = (&sc.space, &sc.t, &sc.s);
    let mut m = Map::new();
    let spec = ConditionSpec::malceski(1.0 / 3.0, 0.0).expect("valid");
    m.insert("malceski".into(), condition_value(space, t, s, &spec, PairMode::PositivePairs));
    m.insert("fixed_points".into(), json!(fixed_points(space, t)));
    m.insert("theorem".into(), theorem_value(&run_theorem(&sc).expect("valid")));
    m
}

/// Parameters used for gallery members that need them.
pub fn gallery_member(name: &str) -> ComparisonFn {
    let params = match name {
        "chi" | "theta-pi" | "theta-l" | "theta-geraghty" => GalleryParams::alpha(0.4),
        "linear" => GalleryParams::slope(3.0 / 7.0),
        _ => GalleryParams::default(),
    };
    gallery(name, &params).expect("gallery defaults are valid")
}

fn classify_gallery() -> Map<String, Value> {
    let cfg = crate::sigma::SearchConfig::default();
    let mut functions = Map::new();
    for name in GALLERY_NAMES {
        let f = gallery_member(name);
        let cl = classify(&f, &[1.0, 2.0, 3.0], &cfg);
        let mut classes = Map::new();
        let mut axioms = Map::new();
        for v in &cl.classes {
            let key = match v.c {
                Some(c) => format!("{}@{c}", v.class.name()),
                None => v.class.name().to_string(),
            };
            classes.insert(key, to_value(&v.outcome));
            for a in &v.axioms {
                let key = match a.c {
                    Some(c) => format!("{}@{c}", a.kind.name()),
                    None => a.kind.name().to_string(),
                };
                axioms.insert(key, json!({ "outcome": a.outcome, "witness": a.witness }));
            }
        }
        axioms.insert(
            "dollar".into(),
            json!({ "outcome": cl.dollar.outcome, "witness": cl.dollar.witness }),
        );
        if let Some(aux) = &cl.aux {
            axioms.insert(aux.kind.name().into(), json!({ "outcome": aux.outcome, "witness": aux.witness }));
        }
        let sigma_c_1 = cl.class(FunctionClass::SigmaC, Some(1.0)).map(|v| v.outcome);
        functions.insert(
            name.to_string(),
            json!({ "params": cl.params, "classes": classes, "axioms": axioms, "sigma_c_1": sigma_c_1 }),
        );
    }
    let mut m = Map::new();
    m.insert("functions".into(), Value::Object(functions));
    m.insert("tau_at_1_2".into(), json!(gallery_member("tau").eval(1.0, 2.0)));
    m
}

/// Builds the example's report sections and checks them against the golden file.
pub fn reproduce(id: &str) -> Result<Reproduction, HarnessError> {
    let sections = match id {
        "ex-3.24" => ex_3_24(),
        "ex-3.26" => ex_3_26(),
        "ex-3.34" => ex_3_34(),
        "ex-3.35" => ex_3_35(),
        "koparde-demo" => koparde_demo(),
        "patel-deheri-demo" => patel_deheri_demo(),
        "classify-gallery" => classify_gallery(),
        other => {
            return Err(HarnessError::UnknownExample(format!(
                "`{other}`; known: {}",
                EXAMPLE_IDS.join(", ")
            )))
        }
    };
    let mut doc = Value::Object(sections);
    round_value(&mut doc);
    let checks = run_checks(id, &doc);
    let Value::Object(sections) = doc else { unreachable!() };
    Ok(Reproduction {
        id: id.to_string(),
        sections,
        checks,
    })
}
