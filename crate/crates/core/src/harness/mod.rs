//! Hypothesis checklists and conclusions for the fixed-point theorems.
//!
//! Hypotheses are decided by the contraction, sigma and Picard modules.
//! Conclusions are recomputed from the brute-force oracle and the solver,
//! whatever the hypotheses say, so counterexamples are reported as such.

pub mod random;
pub mod reproduce;

use serde::Serialize;
use serde_json::{json, Value};

use crate::contraction::{check_condition, ConditionSpec, PairMode};
use crate::metric::{FiniteMetricSpace, SelfMap};
use crate::picard::{brute_force_points, find_clr_base, run_picard_pair, solve, diagnose, SolveResult, Termination};
use crate::report::{labels, solve_result_value, to_value};
use crate::scenario::Scenario;
use crate::sigma::{check_axiom, AxiomKind, AxiomVerdict, ComparisonFn, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TheoremId {
    #[serde(rename = "T2.1")]
    T2_1,
    #[serde(rename = "T2.2")]
    T2_2,
    #[serde(rename = "T3.17")]
    T3_17,
    #[serde(rename = "T3.18")]
    T3_18,
    #[serde(rename = "T3.29")]
    T3_29,
    #[serde(rename = "T3.33")]
    T3_33,
    #[serde(rename = "C3.19")]
    C3_19,
    #[serde(rename = "C3.31")]
    C3_31,
    #[serde(rename = "C3.32")]
    C3_32,
}

pub const THEOREM_IDS: &[&str] = &["T2.1", "T2.2", "T3.17", "T3.18", "T3.29", "T3.33", "C3.19", "C3.31", "C3.32"];

impl TheoremId {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "T2.1" => TheoremId::T2_1,
            "T2.2" => TheoremId::T2_2,
            "T3.17" => TheoremId::T3_17,
            "T3.18" => TheoremId::T3_18,
            "T3.29" => TheoremId::T3_29,
            "T3.33" => TheoremId::T3_33,
            "C3.19" => TheoremId::C3_19,
            "C3.31" => TheoremId::C3_31,
            "C3.32" => TheoremId::C3_32,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T2_1 => "T2.1",
            TheoremId::T2_2 => "T2.2",
            TheoremId::T3_17 => "T3.17",
            TheoremId::T3_18 => "T3.18",
            TheoremId::T3_29 => "T3.29",
            TheoremId::T3_33 => "T3.33",
            TheoremId::C3_19 => "C3.19",
            TheoremId::C3_31 => "C3.31",
            TheoremId::C3_32 => "C3.32",
        }
    }

    fn needs_sigma(self) -> bool {
        matches!(
            self,
            TheoremId::T3_17 | TheoremId::T3_18 | TheoremId::C3_19 | TheoremId::T3_29 | TheoremId::T3_33
        )
    }

    fn needs_alpha(self) -> bool {
        matches!(self, TheoremId::T2_1 | TheoremId::T2_2 | TheoremId::C3_31 | TheoremId::C3_32)
    }

    /// Checks that the scenario carries what the theorem needs.
    pub fn validate(
        self,
        sigma: Option<&ComparisonFn>,
        condition: Option<&ConditionSpec>,
        degree: Option<u32>,
    ) -> Result<(), String> {
        match (self, degree) {
            (TheoremId::T3_29, None) => return Err("T3.29 needs `degree`".into()),
            (TheoremId::C3_31, d) if d != Some(2) => return Err("C3.31 needs `degree` 2".into()),
            (TheoremId::T3_33 | TheoremId::C3_32, Some(d)) if d != 1 => {
                return Err(format!("{} has degree 1, got {d}", self.as_str()))
            }
            _ => {}
        }
        if self.needs_sigma() && sigma.is_none() {
            return Err(format!("{} needs a `sigma`", self.as_str()));
        }
        if self.needs_alpha() && kannan_alpha(sigma, condition).is_none() {
            return Err(format!(
                "{} needs alpha in (0, 1/2), from a chi/linear sigma or a classical condition",
                self.as_str()
            ));
        }
        Ok(())
    }
}

/// The Kannan constant: a classical condition's alpha, else the slope of
/// a linear sigma.
fn kannan_alpha(sigma: Option<&ComparisonFn>, condition: Option<&ConditionSpec>) -> Option<f64> {
    let from_condition = match condition {
        Some(ConditionSpec::ClassicalKannan { alpha }) | Some(ConditionSpec::KopardeWaghmode { alpha }) => {
            Some(*alpha)
        }
        Some(ConditionSpec::Malceski { alpha, gamma }) if *gamma == 0.0 => Some(*alpha),
        _ => None,
    };
    from_condition
        .or_else(|| sigma.and_then(|s| s.linear_slope()))
        .filter(|a| *a > 0.0 && *a < 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Holds,
    Fails,
    Undetermined,
}

impl From<Outcome> for Status {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::CertifiedHolds => Status::Holds,
            Outcome::Falsified => Status::Fails,
            Outcome::Undetermined => Status::Undetermined,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub status: Status,
    pub evidence: Value,
}

impl Hypothesis {
    fn new(name: &str, status: Status, evidence: Value) -> Self {
        Hypothesis {
            name: name.into(),
            status,
            evidence,
        }
    }

    fn trivial(name: &str, why: &str) -> Self {
        Hypothesis::new(name, Status::Holds, json!(why))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conclusion {
    pub statement: String,
    pub observed: Value,
    pub holds: bool,
    /// False only when every hypothesis holds and the conclusion does not.
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub theorem: TheoremId,
    pub hypotheses: Vec<Hypothesis>,
    pub notes: Vec<String>,
    pub conclusion: Option<Conclusion>,
}

impl HypothesisReport {
    pub fn all_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.status == Status::Holds)
    }

    pub fn any_fail(&self) -> bool {
        self.hypotheses.iter().any(|h| h.status == Status::Fails)
    }

    pub fn hypothesis(&self, name: &str) -> Option<&Hypothesis> {
        self.hypotheses.iter().find(|h| h.name == name)
    }

    /// 0 all hold and the conclusion matches, 1 a hypothesis fails or the
    /// conclusion contradicts the theorem, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        let mismatch = self.conclusion.as_ref().is_some_and(|c| !c.matches);
        if mismatch || self.any_fail() {
            1
        } else if self.all_hold() {
            0
        } else {
            2
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("malformed scenario: {0}")]
    MalformedScenario(String),
    #[error("unknown example {0}")]
    UnknownExample(String),
}

fn axiom_hypothesis(name: &str, v: &AxiomVerdict) -> Hypothesis {
    Hypothesis::new(name, v.outcome.into(), to_value(v))
}

/// σ ∈ Σ_c for the scenario's c, plus "σ(t,s) < s - t or ($)".
fn sigma_hypotheses(sc: &Scenario, sigma: &ComparisonFn) -> Vec<Hypothesis> {
    let cfg = &sc.search;
    let s1 = check_axiom(sigma, AxiomKind::Sigma1, None, cfg);
    let s2 = check_axiom(sigma, AxiomKind::Sigma2, Some(sc.c), cfg);
    let ub = check_axiom(sigma, AxiomKind::UpperBound, None, cfg);
    let dollar = check_axiom(sigma, AxiomKind::Dollar, None, cfg);
    let either = match (Status::from(ub.outcome), Status::from(dollar.outcome)) {
        (Status::Holds, _) | (_, Status::Holds) => Status::Holds,
        (Status::Fails, Status::Fails) => Status::Fails,
        _ => Status::Undetermined,
    };
    vec![
        axiom_hypothesis("sigma1", &s1),
        axiom_hypothesis("sigma2", &s2),
        Hypothesis::new(
            "upper-bound-or-dollar",
            either,
            json!({ "upper_bound": to_value(&ub), "dollar": to_value(&dollar) }),
        ),
    ]
}

fn condition_hypothesis(
    name: &str,
    space: &FiniteMetricSpace,
    t: &SelfMap,
    s: &SelfMap,
    spec: &ConditionSpec,
    mode: PairMode,
) -> Result<Hypothesis, HarnessError> {
    let r = check_condition(space, t, s, spec, mode).map_err(|e| HarnessError::MalformedScenario(e.to_string()))?;
    let status = if r.holds { Status::Holds } else { Status::Fails };
    Ok(Hypothesis::new(name, status, to_value(&r)))
}

fn clr_hypothesis(sc: &Scenario) -> Hypothesis {
    match find_clr_base(&sc.space, &sc.t, &sc.s) {
        Ok(Some(b)) => Hypothesis::new("clr", Status::Holds, json!({ "base": sc.space.label(b) })),
        _ => Hypothesis::new("clr", Status::Fails, json!("no point starts an infinite Picard chain")),
    }
}

fn injective_hypothesis(sc: &Scenario) -> Hypothesis {
    match sc.s.injectivity_collision() {
        None => Hypothesis::new("s-injective", Status::Holds, json!("S is injective")),
        Some((x, y)) => Hypothesis::new(
            "s-injective",
            Status::Fails,
            json!({ "x": sc.space.label(x), "y": sc.space.label(y), "image": sc.space.label(sc.s.apply(x)) }),
        ),
    }
}

const COMPLETE: &str = "every finite metric space is complete";
const CONTINUOUS: &str = "every map on a finite metric space is continuous";

/// Subsequential limits of `Tx_n` for the T-orbit from `p` (S = identity):
/// the cycle points, or the stationary point.
fn orbit_limits(sc: &Scenario, t: &SelfMap, s: &SelfMap, p: usize) -> Option<Vec<usize>> {
    let trace = run_picard_pair(&sc.space, t, s, p, &sc.picard).ok()?;
    let mut lim: Vec<usize> = match trace.termination {
        Termination::Coincidence { index } => vec![trace.t_images[index]],
        Termination::Cycle { start, .. } => trace.t_images[start..].to_vec(),
        _ => return None,
    };
    lim.sort_unstable();
    lim.dedup();
    Some(lim)
}

fn orbit_base(sc: &Scenario, t: &SelfMap, s: &SelfMap) -> Option<usize> {
    sc.base
        .or_else(|| find_clr_base(&sc.space, t, s).ok().flatten())
}

/// The designated limit `q`: for the Kannan-type theorems the lowest-index
/// subsequential limit of the T-orbit; for T3.17 the lowest-index `q` with
/// `Sq` among the limits of `Tx_n`.
fn designated_q(sc: &Scenario, theorem: TheoremId) -> Option<usize> {
    let id = SelfMap::identity(&sc.space);
    match theorem {
        TheoremId::T3_17 => {
            let p = orbit_base(sc, &sc.t, &sc.s)?;
            let lim = orbit_limits(sc, &sc.t, &sc.s, p)?;
            (0..sc.space.len()).find(|&q| lim.contains(&sc.s.apply(q)))
        }
        _ => {
            let p = orbit_base(sc, &sc.t, &id)?;
            orbit_limits(sc, &sc.t, &id, p)?.first().copied()
        }
    }
}

/// Evaluates every hypothesis of the scenario's theorem.
pub fn check_hypotheses(sc: &Scenario) -> Result<HypothesisReport, HarnessError> {
    let theorem = sc
        .theorem
        .ok_or_else(|| HarnessError::MalformedScenario("no theorem id".into()))?;
    theorem
        .validate(sc.sigma.as_ref(), sc.condition.as_ref(), sc.degree)
        .map_err(HarnessError::MalformedScenario)?;
    let space = &sc.space;
    let id = SelfMap::identity(space);
    let mut notes = Vec::new();
    let single_map = theorem.needs_alpha() || theorem == TheoremId::C3_19;
    if single_map && theorem != TheoremId::C3_32 && !sc.s.is_identity() {
        notes.push("the theorem concerns T alone; S is taken to be the identity".to_string());
    }
    let alpha = kannan_alpha(sc.sigma.as_ref(), sc.condition.as_ref());
    let sigma = sc.sigma.as_ref();
    let mode = sc.mode;
    let mut h = Vec::new();

    match theorem {
        TheoremId::T2_1 => {
            h.push(Hypothesis::trivial("complete", COMPLETE));
            let spec = ConditionSpec::classical_kannan(alpha.unwrap_or(0.0))
                .map_err(|e| HarnessError::MalformedScenario(e.to_string()))?;
            h.push(condition_hypothesis("kannan", space, &sc.t, &id, &spec, mode)?);
        }
        TheoremId::T2_2 => {
            let spec = ConditionSpec::classical_kannan(alpha.unwrap_or(0.0))
                .map_err(|e| HarnessError::MalformedScenario(e.to_string()))?;
            h.push(condition_hypothesis("kannan", space, &sc.t, &id, &spec, mode)?);
            h.push(Hypothesis::trivial("continuous-at-c", CONTINUOUS));
            h.push(subsequence_hypothesis(sc, theorem));
        }
        TheoremId::T3_17 | TheoremId::T3_18 => {
            let sigma = sigma.expect("validated");
            h.push(clr_hypothesis(sc));
            if theorem == TheoremId::T3_18 {
                h.push(Hypothesis::trivial("s-image-complete", COMPLETE));
            }
            let spec = ConditionSpec::SigmaSKannan { sigma: sigma.clone() };
            h.push(condition_hypothesis("sigma-s-kannan", space, &sc.t, &sc.s, &spec, mode)?);
            h.extend(sigma_hypotheses(sc, sigma));
            if theorem == TheoremId::T3_17 {
                h.push(Hypothesis::trivial("continuous-at-sq", CONTINUOUS));
                h.push(subsequence_hypothesis(sc, theorem));
            }
        }
        TheoremId::C3_19 => {
            let sigma = sigma.expect("validated");
            h.push(Hypothesis::trivial("complete", COMPLETE));
            let spec = ConditionSpec::SigmaKannan { sigma: sigma.clone() };
            h.push(condition_hypothesis("sigma-kannan", space, &sc.t, &id, &spec, mode)?);
            h.extend(sigma_hypotheses(sc, sigma));
        }
        TheoremId::T3_29 | TheoremId::T3_33 => {
            let sigma = sigma.expect("validated");
            let w = if theorem == TheoremId::T3_33 { 1 } else { sc.degree.expect("validated") };
            let spec = ConditionSpec::s_dominated(sigma.clone(), w)
                .map_err(|e| HarnessError::MalformedScenario(e.to_string()))?;
            h.push(condition_hypothesis("s-dominated", space, &sc.t, &sc.s, &spec, mode)?);
            h.extend(sigma_hypotheses(sc, sigma));
            if theorem == TheoremId::T3_29 {
                h.push(Hypothesis::trivial("s-image-complete", COMPLETE));
                h.push(injective_hypothesis(sc));
            } else {
                h.push(subsequence_hypothesis(sc, theorem));
                h.push(Hypothesis::trivial("continuous-at-sq", CONTINUOUS));
                h.push(injective_hypothesis(sc));
            }
        }
        TheoremId::C3_31 => {
            h.push(Hypothesis::trivial("complete", COMPLETE));
            let spec = ConditionSpec::koparde_waghmode(alpha.unwrap_or(0.0))
                .map_err(|e| HarnessError::MalformedScenario(e.to_string()))?;
            h.push(condition_hypothesis("koparde-waghmode", space, &sc.t, &id, &spec, mode)?);
        }
        TheoremId::C3_32 => {
            h.push(Hypothesis::trivial("complete", COMPLETE));
            let chi = ComparisonFn::chi(alpha.unwrap_or(0.0))
                .map_err(|e| HarnessError::MalformedScenario(e.to_string()))?;
            let spec = ConditionSpec::s_dominated(chi, 1)
                .map_err(|e| HarnessError::MalformedScenario(e.to_string()))?;
            h.push(condition_hypothesis("patel-deheri", space, &sc.t, &sc.s, &spec, mode)?);
            h.push(injective_hypothesis(sc));
            h.push(Hypothesis::trivial("s-continuous", CONTINUOUS));
            h.push(Hypothesis::trivial(
                "s-sequentially-convergent",
                "every sequence in a finite space has a constant subsequence",
            ));
        }
    }
    Ok(HypothesisReport {
        theorem,
        hypotheses: h,
        notes,
        conclusion: None,
    })
}

fn subsequence_hypothesis(sc: &Scenario, theorem: TheoremId) -> Hypothesis {
    match designated_q(sc, theorem) {
        Some(q) => Hypothesis::new(
            "subsequence-converges",
            Status::Holds,
            json!({ "q": sc.space.label(q), "reason": "q lies on the cycle the orbit settles into" }),
        ),
        None => Hypothesis::new(
            "subsequence-converges",
            Status::Fails,
            json!("no orbit point settles into a cycle containing a suitable q"),
        ),
    }
}

fn unique_fixed(sc: &Scenario, with_solve: bool) -> (bool, Value) {
    let id = SelfMap::identity(&sc.space);
    let fixed = brute_force_points(&sc.space, &sc.t, &id)
        .expect("maps validated")
        .fixed_points;
    let mut holds = fixed.len() == 1;
    let mut observed = json!({ "fixed_points": labels(&sc.space, &fixed) });
    let base = sc.base.unwrap_or(0);
    if let Ok(sol) = solve(&sc.space, &sc.t, &id, Some(base), &sc.picard) {
        let agrees = matches!(sol.result, SolveResult::FixedPoint { point, .. } if fixed.contains(&point));
        observed["solve"] = solve_result_value(&sc.space, &sol.result);
        observed["solve_agrees"] = json!(agrees);
        if with_solve {
            holds &= agrees;
        }
    }
    (holds, observed)
}

fn conclusion(sc: &Scenario, theorem: TheoremId) -> (String, bool, Value) {
    let space = &sc.space;
    match theorem {
        TheoremId::T2_1 | TheoremId::T3_29 | TheoremId::C3_31 | TheoremId::C3_32 => {
            let (holds, observed) = unique_fixed(sc, false);
            ("T has a unique fixed point".into(), holds, observed)
        }
        TheoremId::C3_19 => {
            let (holds, observed) = unique_fixed(sc, true);
            ("T has a unique fixed point, found by Picard iteration".into(), holds, observed)
        }
        TheoremId::T3_18 => {
            let sets = brute_force_points(space, &sc.t, &sc.s).expect("maps validated");
            let mut observed = json!({ "coincidence_points": labels(space, &sets.coincidence_points) });
            let mut holds = !sets.coincidence_points.is_empty();
            match solve(space, &sc.t, &sc.s, None, &sc.picard) {
                Ok(sol) => {
                    let found = match sol.result {
                        SolveResult::FixedPoint { point, .. } | SolveResult::CoincidencePoint { point, .. } => {
                            Some(point)
                        }
                        _ => None,
                    };
                    let agrees = found.is_some_and(|p| sets.coincidence_points.contains(&p));
                    observed["solve"] = solve_result_value(space, &sol.result);
                    observed["solve_base"] = json!(space.label(sol.base));
                    observed["solve_agrees"] = json!(agrees);
                    holds &= agrees;
                }
                Err(e) => {
                    observed["solve"] = json!(e.to_string());
                    holds = false;
                }
            }
            ("the pair (T, S) has a coincidence point".into(), holds, observed)
        }
        TheoremId::T2_2 | TheoremId::T3_33 => {
            let id = SelfMap::identity(space);
            let fixed = brute_force_points(space, &sc.t, &id).expect("maps validated").fixed_points;
            let q = designated_q(sc, theorem);
            let holds = q.is_some_and(|q| fixed == vec![q]);
            let observed = json!({
                "q": q.map(|q| space.label(q).to_string()),
                "fixed_points": labels(space, &fixed),
            });
            ("the limit point q is the unique fixed point of T".into(), holds, observed)
        }
        TheoremId::T3_17 => {
            let sets = brute_force_points(space, &sc.t, &sc.s).expect("maps validated");
            let a = !sets.coincidence_points.is_empty();
            let mut observed = json!({ "coincidence_points": labels(space, &sets.coincidence_points), "a": a });
            let (mut b, mut b_star) = (false, false);
            if let Some(q) = designated_q(sc, theorem) {
                let sq = sc.s.apply(q);
                let t_fixes = sc.t.apply(sq) == sq;
                let similar = orbit_base(sc, &sc.t, &sc.s)
                    .and_then(|p| run_picard_pair(space, &sc.t, &sc.s, p, &sc.picard).ok())
                    .and_then(|tr| diagnose(&tr, space, &sc.t, &sc.s, &sc.picard).ok())
                    .is_some_and(|d| d.s_asymptotically_similar);
                b = !similar || t_fixes;
                b_star = sc.s.apply(sq) != sq || t_fixes;
                observed["q"] = json!(space.label(q));
                observed["sq"] = json!(space.label(sq));
                observed["s_asymptotically_similar"] = json!(similar);
            }
            observed["b"] = json!(b);
            observed["b_star"] = json!(b_star);
            (
                "(A) a coincidence point exists, or both (B) and (B*) hold".into(),
                a || (b && b_star),
                observed,
            )
        }
    }
}

/// Hypotheses plus the independently computed conclusion.
pub fn run_theorem(sc: &Scenario) -> Result<HypothesisReport, HarnessError> {
    let mut report = check_hypotheses(sc)?;
    let (statement, holds, observed) = conclusion(sc, report.theorem);
    report.conclusion = Some(Conclusion {
        statement,
        observed,
        holds,
        matches: !report.all_hold() || holds,
    });
    Ok(report)
}
