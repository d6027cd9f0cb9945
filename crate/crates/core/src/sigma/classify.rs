use std::collections::BTreeMap;

use serde::Serialize;

use super::search::{check_axiom, AxiomVerdict, Outcome, SearchConfig};
use super::{AxiomKind, ComparisonFn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionClass {
    Simulation,
    Manageable,
    RFunction,
    SigmaC,
}

impl FunctionClass {
    pub fn name(self) -> &'static str {
        match self {
            FunctionClass::Simulation => "simulation",
            FunctionClass::Manageable => "manageable",
            FunctionClass::RFunction => "r-function",
            FunctionClass::SigmaC => "sigma-c",
        }
    }

    pub fn axioms(self) -> &'static [AxiomKind] {
        match self {
            FunctionClass::Simulation => &[AxiomKind::OriginZero, AxiomKind::UpperBound, AxiomKind::Zeta3],
            FunctionClass::Manageable => &[AxiomKind::UpperBound, AxiomKind::Eta2],
            FunctionClass::RFunction => &[AxiomKind::Rho1, AxiomKind::Rho2],
            FunctionClass::SigmaC => &[AxiomKind::Sigma1, AxiomKind::Sigma2],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassVerdict {
    pub class: FunctionClass,
    /// Set for the σ_c class only.
    pub c: Option<f64>,
    pub outcome: Outcome,
    pub axioms: Vec<AxiomVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub function: String,
    pub params: BTreeMap<String, f64>,
    pub classes: Vec<ClassVerdict>,
    pub dollar: AxiomVerdict,
    /// Verdict on the auxiliary function, for the θ families that carry one.
    pub aux: Option<AxiomVerdict>,
}

impl Classification {
    pub fn class(&self, class: FunctionClass, c: Option<f64>) -> Option<&ClassVerdict> {
        self.classes
            .iter()
            .find(|v| v.class == class && (class != FunctionClass::SigmaC || v.c == c))
    }
}

fn combine(verdicts: &[AxiomVerdict]) -> Outcome {
    if verdicts.iter().any(|v| v.outcome == Outcome::Falsified) {
        Outcome::Falsified
    } else if verdicts.iter().all(|v| v.outcome == Outcome::CertifiedHolds) {
        Outcome::CertifiedHolds
    } else {
        Outcome::Undetermined
    }
}

/// Classifies `f` against every class; σ_c membership is reported once per
/// entry of `c_values` (`[1]` when empty).
pub fn classify(f: &ComparisonFn, c_values: &[f64], config: &SearchConfig) -> Classification {
    let mut cache: BTreeMap<AxiomKind, AxiomVerdict> = BTreeMap::new();
    let mut get = |kind: AxiomKind| -> AxiomVerdict {
        cache
            .entry(kind)
            .or_insert_with(|| check_axiom(f, kind, None, config))
            .clone()
    };

    let mut classes = Vec::new();
    for class in [
        FunctionClass::Simulation,
        FunctionClass::Manageable,
        FunctionClass::RFunction,
    ] {
        let axioms: Vec<_> = class.axioms().iter().map(|&k| get(k)).collect();
        classes.push(ClassVerdict {
            class,
            c: None,
            outcome: combine(&axioms),
            axioms,
        });
    }
    let default_c = [1.0];
    let cs = if c_values.is_empty() { &default_c[..] } else { c_values };
    let sigma1 = get(AxiomKind::Sigma1);
    for &c in cs {
        let axioms = vec![
            sigma1.clone(),
            check_axiom(f, AxiomKind::Sigma2, Some(c), config),
        ];
        classes.push(ClassVerdict {
            class: FunctionClass::SigmaC,
            c: Some(c),
            outcome: combine(&axioms),
            axioms,
        });
    }

    let aux = match f.name() {
        "theta-geraghty" => Some(AxiomKind::Geraghty),
        "theta-l" | "theta-pi" => Some(AxiomKind::LFunction),
        _ => None,
    }
    .filter(|_| f.aux().is_some())
    .map(&mut get);

    Classification {
        function: f.name().to_string(),
        params: f.params().clone(),
        classes,
        dollar: get(AxiomKind::Dollar),
        aux,
    }
}
