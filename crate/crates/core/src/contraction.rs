//! Exhaustive pair sweeps of Kannan-type contraction conditions.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::metric::{FiniteMetricSpace, SelfMap};
use crate::sigma::ComparisonFn;

#[derive(Debug, Clone)]
pub enum ConditionSpec {
    /// `d(Tx,Ty) <= α[d(Tx,x) + d(Ty,y)]`.
    ClassicalKannan { alpha: f64 },
    /// `σ(d(Tx,Ty), d(Tx,x) + d(Ty,y)) > 0`.
    SigmaKannan { sigma: ComparisonFn },
    /// `σ(d(Tx,Ty), d(Tx,Sx) + d(Ty,Sy)) > 0`.
    SigmaSKannan { sigma: ComparisonFn },
    /// `σ(d^w(STx,STy), d^w(Sx,STx) + d^w(Sy,STy)) > 0`.
    SDominated { sigma: ComparisonFn, w: u32 },
    /// `d(STx,STy) <= α[d(Sx,STx) + d(Sy,STy)] + γ d(Sx,Sy)`.
    Malceski { alpha: f64, gamma: f64 },
    /// `d²(Tx,Ty) < α[d²(x,Tx) + d²(y,Ty)]`.
    KopardeWaghmode { alpha: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContractionError {
    #[error("T and S do not live on the given space")]
    SpaceMismatch,
    #[error("invalid condition: {0}")]
    InvalidSpec(String),
}

fn kannan_alpha(alpha: f64) -> Result<(), ContractionError> {
    if alpha.is_finite() && alpha > 0.0 && alpha < 0.5 {
        Ok(())
    } else {
        Err(ContractionError::InvalidSpec(format!(
            "alpha = {alpha} must satisfy 0 < alpha < 1/2"
        )))
    }
}

impl ConditionSpec {
    pub fn classical_kannan(alpha: f64) -> Result<Self, ContractionError> {
        kannan_alpha(alpha)?;
        Ok(ConditionSpec::ClassicalKannan { alpha })
    }

    pub fn koparde_waghmode(alpha: f64) -> Result<Self, ContractionError> {
        kannan_alpha(alpha)?;
        Ok(ConditionSpec::KopardeWaghmode { alpha })
    }

    pub fn malceski(alpha: f64, gamma: f64) -> Result<Self, ContractionError> {
        let spec = ConditionSpec::Malceski { alpha, gamma };
        spec.validate()?;
        Ok(spec)
    }

    pub fn s_dominated(sigma: ComparisonFn, w: u32) -> Result<Self, ContractionError> {
        let spec = ConditionSpec::SDominated { sigma, w };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ContractionError> {
        match *self {
            ConditionSpec::ClassicalKannan { alpha } | ConditionSpec::KopardeWaghmode { alpha } => {
                kannan_alpha(alpha)
            }
            ConditionSpec::Malceski { alpha, gamma } => {
                if alpha.is_finite() && gamma.is_finite() && alpha > 0.0 && gamma >= 0.0 && 2.0 * alpha + gamma < 1.0 {
                    Ok(())
                } else {
                    Err(ContractionError::InvalidSpec(format!(
                        "alpha = {alpha}, gamma = {gamma} must satisfy alpha > 0, gamma >= 0, 2 alpha + gamma < 1"
                    )))
                }
            }
            ConditionSpec::SDominated { w: 0, .. } => Err(ContractionError::InvalidSpec(
                "degree w must be a positive integer".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConditionSpec::ClassicalKannan { .. } => "classical-kannan",
            ConditionSpec::SigmaKannan { .. } => "sigma-kannan",
            ConditionSpec::SigmaSKannan { .. } => "sigma-s-kannan",
            ConditionSpec::SDominated { .. } => "s-dominated",
            ConditionSpec::Malceski { .. } => "malceski",
            ConditionSpec::KopardeWaghmode { .. } => "koparde-waghmode",
        }
    }

    pub fn sigma(&self) -> Option<&ComparisonFn> {
        match self {
            ConditionSpec::SigmaKannan { sigma }
            | ConditionSpec::SigmaSKannan { sigma }
            | ConditionSpec::SDominated { sigma, .. } => Some(sigma),
            _ => None,
        }
    }

    /// Numeric parameters, for reports.
    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut p = BTreeMap::new();
        match *self {
            ConditionSpec::ClassicalKannan { alpha } | ConditionSpec::KopardeWaghmode { alpha } => {
                p.insert("alpha".into(), alpha);
            }
            ConditionSpec::Malceski { alpha, gamma } => {
                p.insert("alpha".into(), alpha);
                p.insert("gamma".into(), gamma);
            }
            ConditionSpec::SDominated { w, .. } => {
                p.insert("w".into(), w as f64);
            }
            _ => {}
        }
        p
    }

    pub fn satisfied(&self, value: f64) -> bool {
        match self {
            ConditionSpec::ClassicalKannan { .. } | ConditionSpec::Malceski { .. } => value >= 0.0,
            _ => value > 0.0,
        }
    }
}

impl fmt::Display for ConditionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionSpec::ClassicalKannan { alpha } => write!(f, "classical-kannan(alpha={alpha})"),
            ConditionSpec::SigmaKannan { sigma } => write!(f, "sigma-kannan({sigma})"),
            ConditionSpec::SigmaSKannan { sigma } => write!(f, "sigma-s-kannan({sigma})"),
            ConditionSpec::SDominated { sigma, w } => write!(f, "s-dominated({sigma}, w={w})"),
            ConditionSpec::Malceski { alpha, gamma } => {
                write!(f, "malceski(alpha={alpha}, gamma={gamma})")
            }
            ConditionSpec::KopardeWaghmode { alpha } => write!(f, "koparde-waghmode(alpha={alpha})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairMode {
    /// Skip pairs whose image points coincide.
    #[default]
    PositivePairs,
    AllOrderedPairs,
}

/// One pair of the sweep. `t` and `s` are the two arguments of the
/// condition; `value` is σ(t, s), or the slack of the inequality for the
/// classical forms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairEvaluation {
    pub x: usize,
    pub y: usize,
    pub x_label: String,
    pub y_label: String,
    pub t: f64,
    pub s: f64,
    pub value: f64,
    pub skipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub mode: PairMode,
    pub holds: bool,
    pub pairs_checked: usize,
    pub pairs_skipped: usize,
    /// First failing pair in lexicographic order.
    pub witness: Option<PairEvaluation>,
    /// Smallest value over the checked pairs.
    pub min_value: Option<f64>,
}

fn check_maps(space: &FiniteMetricSpace, t: &SelfMap, s: &SelfMap) -> Result<(), ContractionError> {
    if t.belongs_to(space) && s.belongs_to(space) {
        Ok(())
    } else {
        Err(ContractionError::SpaceMismatch)
    }
}

/// Evaluates the condition at one ordered pair.
pub fn evaluate_pair(
    space: &FiniteMetricSpace,
    t_map: &SelfMap,
    s_map: &SelfMap,
    spec: &ConditionSpec,
    mode: PairMode,
    x: usize,
    y: usize,
) -> PairEvaluation {
    let d = |a: usize, b: usize| space.distance(a, b);
    let (tx, ty) = (t_map.apply(x), t_map.apply(y));
    let (image_x, image_y, t, s, value) = match spec {
        ConditionSpec::ClassicalKannan { alpha } => {
            let (t, s) = (d(tx, ty), d(tx, x) + d(ty, y));
            (tx, ty, t, s, alpha * s - t)
        }
        ConditionSpec::SigmaKannan { sigma } => {
            let (t, s) = (d(tx, ty), d(tx, x) + d(ty, y));
            (tx, ty, t, s, sigma.eval(t, s))
        }
        ConditionSpec::SigmaSKannan { sigma } => {
            let (t, s) = (d(tx, ty), d(tx, s_map.apply(x)) + d(ty, s_map.apply(y)));
            (tx, ty, t, s, sigma.eval(t, s))
        }
        ConditionSpec::SDominated { sigma, w } => {
            let (stx, sty) = (s_map.apply(tx), s_map.apply(ty));
            let w = *w as i32;
            let t = d(stx, sty).powi(w);
            let s = d(s_map.apply(x), stx).powi(w) + d(s_map.apply(y), sty).powi(w);
            (stx, sty, t, s, sigma.eval(t, s))
        }
        ConditionSpec::Malceski { alpha, gamma } => {
            let (sx, sy) = (s_map.apply(x), s_map.apply(y));
            let (stx, sty) = (s_map.apply(tx), s_map.apply(ty));
            let t = d(stx, sty);
            let s = d(sx, stx) + d(sy, sty);
            (stx, sty, t, s, alpha * s + gamma * d(sx, sy) - t)
        }
        ConditionSpec::KopardeWaghmode { alpha } => {
            let t = d(tx, ty).powi(2);
            let s = d(x, tx).powi(2) + d(y, ty).powi(2);
            (tx, ty, t, s, alpha * s - t)
        }
    };
    PairEvaluation {
        x,
        y,
        x_label: space.label(x).to_string(),
        y_label: space.label(y).to_string(),
        t,
        s,
        value,
        skipped: mode == PairMode::PositivePairs && image_x == image_y,
    }
}

/// Every ordered pair in lexicographic order.
pub fn evaluate_pairs(
    space: &FiniteMetricSpace,
    t_map: &SelfMap,
    s_map: &SelfMap,
    spec: &ConditionSpec,
    mode: PairMode,
) -> Result<Vec<PairEvaluation>, ContractionError> {
    check_maps(space, t_map, s_map)?;
    spec.validate()?;
    let n = space.len();
    Ok((0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .map(|(x, y)| evaluate_pair(space, t_map, s_map, spec, mode, x, y))
        .collect())
}

pub fn check_condition(
    space: &FiniteMetricSpace,
    t_map: &SelfMap,
    s_map: &SelfMap,
    spec: &ConditionSpec,
    mode: PairMode,
) -> Result<ConditionReport, ContractionError> {
    check_maps(space, t_map, s_map)?;
    spec.validate()?;
    let mut report = ConditionReport {
        condition: spec.to_string(),
        mode,
        holds: true,
        pairs_checked: 0,
        pairs_skipped: 0,
        witness: None,
        min_value: None,
    };
    let n = space.len();
    for x in 0..n {
        for y in 0..n {
            let e = evaluate_pair(space, t_map, s_map, spec, mode, x, y);
            if e.skipped {
                report.pairs_skipped += 1;
                continue;
            }
            report.pairs_checked += 1;
            report.min_value = Some(report.min_value.map_or(e.value, |m: f64| m.min(e.value)));
            if !spec.satisfied(e.value) && report.witness.is_none() {
                report.holds = false;
                report.witness = Some(e);
            }
        }
    }
    Ok(report)
}

/// Re-evaluates a stored witness; true when it still violates the condition.
pub fn replay_pair(
    space: &FiniteMetricSpace,
    t_map: &SelfMap,
    s_map: &SelfMap,
    spec: &ConditionSpec,
    witness: &PairEvaluation,
) -> bool {
    let mode = if witness.skipped {
        PairMode::AllOrderedPairs
    } else {
        PairMode::PositivePairs
    };
    let e = evaluate_pair(space, t_map, s_map, spec, mode, witness.x, witness.y);
    !e.skipped && e.value == witness.value && !spec.satisfied(e.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KannanSupremum {
    /// `argmax` is the first pair attaining the value, absent for the empty sup.
    Finite {
        value: f64,
        argmax: Option<(usize, usize)>,
    },
    /// Some pair has a positive image distance over a zero denominator.
    Unbounded { pair: (usize, usize) },
}

impl KannanSupremum {
    pub fn value(&self) -> f64 {
        match *self {
            KannanSupremum::Finite { value, .. } => value,
            KannanSupremum::Unbounded { .. } => f64::INFINITY,
        }
    }
}

/// `sup d(Tx,Ty) / (d(Tx,x) + d(Ty,y))` over pairs with `Tx != Ty`.
pub fn kannan_supremum(space: &FiniteMetricSpace, t_map: &SelfMap) -> Result<KannanSupremum, ContractionError> {
    if !t_map.belongs_to(space) {
        return Err(ContractionError::SpaceMismatch);
    }
    let n = space.len();
    let mut best = 0.0;
    let mut argmax = None;
    for x in 0..n {
        for y in 0..n {
            let (tx, ty) = (t_map.apply(x), t_map.apply(y));
            if tx == ty {
                continue;
            }
            let num = space.distance(tx, ty);
            let den = space.distance(tx, x) + space.distance(ty, y);
            if den == 0.0 {
                return Ok(KannanSupremum::Unbounded { pair: (x, y) });
            }
            let r = num / den;
            if r > best {
                best = r;
                argmax = Some((x, y));
            }
        }
    }
    Ok(KannanSupremum::Finite { value: best, argmax })
}
