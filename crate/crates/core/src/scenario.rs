//! Scenario files: the JSON description of a space, a pair of maps, a
//! comparison function and what to run on them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contraction::{ConditionSpec, PairMode};
use crate::harness::TheoremId;
use crate::metric::{
    build_finite_space, build_real_line_space, build_self_map, build_truncated_harmonic_space,
    FiniteMetricSpace, HarmonicTruncation, MetricError, SelfMap, DEFAULT_TOL,
};
use crate::picard::PicardConfig;
use crate::report::round_sig;
use crate::sigma::{gallery, ComparisonFn, GalleryParams, SearchConfig};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{field}`: {reason}")]
    Validation { field: String, reason: String },
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation {
        field: field.into(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_version: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub space: SpaceDesc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<MapsDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<ConditionDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpaceDesc {
    /// Either real coordinates (`points`, metric `|x - y|`) or an explicit
    /// `metric` table; `labels` is required with `metric`.
    Finite {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        metric: Option<Vec<Vec<f64>>>,
    },
    HarmonicTruncation { n_max: u32 },
    Builtin { name: String },
    /// `count` points `start, start + step, ...` on the real line.
    Grid { start: f64, step: f64, count: usize },
}

impl Default for SpaceDesc {
    fn default() -> Self {
        SpaceDesc::Builtin {
            name: "single-point".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapsDesc {
    #[serde(rename = "T")]
    pub t: MapDesc,
    /// Identity when absent.
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    pub s: Option<MapDesc>,
}

/// Exactly one of `assign` or `builtin`; `value` goes with `builtin: "constant"`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDesc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assign: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

impl MapDesc {
    pub fn builtin(name: &str) -> Self {
        MapDesc {
            builtin: Some(name.into()),
            ..Default::default()
        }
    }

    pub fn assign(pairs: &[(&str, &str)]) -> Self {
        MapDesc {
            assign: Some(pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaDesc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionDesc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<u32>,
}

pub const BUILTIN_SPACES: &[&str] = &["ex-3.24", "ex-3.26", "ex-3.34", "koparde-grid", "single-point"];

/// Full scenario behind a builtin space name.
pub fn builtin_scenario(name: &str) -> Option<ScenarioFile> {
    let finite = |points: Vec<f64>| SpaceDesc::Finite {
        labels: None,
        points: Some(points),
        metric: None,
    };
    let file = match name {
        "ex-3.24" => ScenarioFile {
            name: Some(name.into()),
            space: finite(vec![1.0, 2.0, 3.0, 4.0, 5.0]),
            maps: Some(MapsDesc {
                t: MapDesc::assign(&[("1", "3"), ("2", "3"), ("3", "3"), ("4", "2"), ("5", "3")]),
                s: Some(MapDesc::assign(&[("1", "3"), ("2", "3"), ("3", "3"), ("4", "5"), ("5", "3")])),
            }),
            sigma: Some(SigmaDesc {
                name: "linear".into(),
                slope: Some(3.0 / 7.0),
                ..Default::default()
            }),
            theorem: Some("T3.18".into()),
            ..Default::default()
        },
        "ex-3.26" => ScenarioFile {
            name: Some(name.into()),
            space: finite(vec![1.0, 2.0, 3.0]),
            maps: Some(MapsDesc {
                t: MapDesc::assign(&[("1", "3"), ("2", "3"), ("3", "2")]),
                s: None,
            }),
            sigma: Some(SigmaDesc {
                name: "tau".into(),
                ..Default::default()
            }),
            theorem: Some("T3.18".into()),
            base: Some("1".into()),
            ..Default::default()
        },
        "ex-3.34" => ScenarioFile {
            name: Some(name.into()),
            space: SpaceDesc::HarmonicTruncation { n_max: 50 },
            maps: Some(MapsDesc {
                t: MapDesc::builtin("harmonic-t"),
                s: Some(MapDesc::builtin("harmonic-s")),
            }),
            sigma: Some(SigmaDesc {
                name: "linear".into(),
                slope: Some(1.0 / 3.0),
                ..Default::default()
            }),
            theorem: Some("T3.29".into()),
            degree: Some(1),
            ..Default::default()
        },
        "koparde-grid" => ScenarioFile {
            name: Some(name.into()),
            space: SpaceDesc::Grid {
                start: 0.0,
                step: 0.01,
                count: 101,
            },
            maps: Some(MapsDesc {
                t: MapDesc::builtin("grid-third"),
                s: None,
            }),
            sigma: Some(SigmaDesc {
                name: "chi".into(),
                alpha: Some(0.3),
                ..Default::default()
            }),
            theorem: Some("C3.31".into()),
            degree: Some(2),
            base: Some("1".into()),
            ..Default::default()
        },
        "single-point" => ScenarioFile {
            name: Some(name.into()),
            space: SpaceDesc::Finite {
                labels: Some(vec!["p".into()]),
                points: None,
                metric: Some(vec![vec![0.0]]),
            },
            ..Default::default()
        },
        _ => return None,
    };
    Some(file)
}

/// Fields set in `over` replace those of `base`; the space always comes from `base`.
fn merge(base: ScenarioFile, over: ScenarioFile) -> ScenarioFile {
    ScenarioFile {
        format_version: over.format_version.or(base.format_version),
        name: over.name.or(base.name),
        space: base.space,
        maps: over.maps.or(base.maps),
        sigma: over.sigma.or(base.sigma),
        theorem: over.theorem.or(base.theorem),
        condition: over.condition.or(base.condition),
        mode: over.mode.or(base.mode),
        tol: over.tol.or(base.tol),
        max_iter: over.max_iter.or(base.max_iter),
        seed: over.seed.or(base.seed),
        budget: over.budget.or(base.budget),
        degree: over.degree.or(base.degree),
        base: over.base.or(base.base),
        c_values: over.c_values.or(base.c_values),
    }
}

/// Label for a real coordinate: integers without a decimal point, others
/// at 12 significant digits.
pub fn coordinate_label(x: f64) -> String {
    let r = round_sig(x, 12);
    if r.fract() == 0.0 && r.abs() < 1e15 {
        format!("{}", r as i64)
    } else {
        format!("{r}")
    }
}

/// A parsed and validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    /// The effective file (builtins expanded), echoed in reports.
    pub file: ScenarioFile,
    pub name: String,
    pub space: FiniteMetricSpace,
    pub harmonic: Option<HarmonicTruncation>,
    pub t: SelfMap,
    pub s: SelfMap,
    pub sigma: Option<ComparisonFn>,
    pub c: f64,
    pub theorem: Option<TheoremId>,
    pub condition: Option<ConditionSpec>,
    pub mode: PairMode,
    pub picard: PicardConfig,
    pub search: SearchConfig,
    pub degree: Option<u32>,
    pub base: Option<usize>,
    pub c_values: Vec<f64>,
}

pub fn parse_scenario_str(text: &str) -> Result<Scenario, ScenarioError> {
    Scenario::from_file(parse_scenario_file(text)?)
}

pub fn parse_scenario_file(text: &str) -> Result<ScenarioFile, ScenarioError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        invalid(if path == "." { "<root>".to_string() } else { path }, e.into_inner().to_string())
    })
}

fn positive_finite(field: &str, v: f64) -> Result<f64, ScenarioError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(field, format!("{v} must be finite and positive")))
    }
}

fn metric_error(field: &str, e: MetricError) -> ScenarioError {
    invalid(field, e.to_string())
}

impl Scenario {
    pub fn from_file(file: ScenarioFile) -> Result<Scenario, ScenarioError> {
        if let Some(v) = file.format_version {
            if v != FORMAT_VERSION {
                return Err(invalid("format_version", format!("unsupported version {v}")));
            }
        }
        let file = match &file.space {
            SpaceDesc::Builtin { name } => {
                let base = builtin_scenario(name).ok_or_else(|| {
                    invalid("space.name", format!("unknown builtin `{name}`; known: {}", BUILTIN_SPACES.join(", ")))
                })?;
                merge(base, file)
            }
            _ => file,
        };

        let tol = match file.tol {
            Some(t) => positive_finite("tol", t)?,
            None => DEFAULT_TOL,
        };
        let (space, harmonic, grid) = build_space(&file.space, tol)?;

        let (t, s) = match &file.maps {
            Some(maps) => {
                let t = build_map("maps.T", &maps.t, &space, harmonic.as_ref(), grid)?;
                let s = match &maps.s {
                    Some(d) => build_map("maps.S", d, &space, harmonic.as_ref(), grid)?,
                    None => SelfMap::identity(&space),
                };
                (t, s)
            }
            None => (SelfMap::identity(&space), SelfMap::identity(&space)),
        };

        let mut c = 1.0;
        let sigma = match &file.sigma {
            Some(d) => {
                if let Some(v) = d.c {
                    c = positive_finite("sigma.c", v)?;
                }
                let params = GalleryParams {
                    alpha: d.alpha,
                    slope: d.slope,
                    ..Default::default()
                };
                Some(gallery(&d.name, &params).map_err(|e| invalid("sigma", e.to_string()))?)
            }
            None => None,
        };

        let mode = match file.mode.as_deref() {
            None | Some("positive") => PairMode::PositivePairs,
            Some("all") => PairMode::AllOrderedPairs,
            Some(other) => return Err(invalid("mode", format!("`{other}` is not `positive` or `all`"))),
        };

        let mut picard = PicardConfig {
            tol,
            ..Default::default()
        };
        if let Some(m) = file.max_iter {
            if m == 0 {
                return Err(invalid("max_iter", "must be at least 1"));
            }
            picard.max_iter = m;
        }
        let mut search = SearchConfig::default();
        if let Some(seed) = file.seed {
            search.seed = seed;
        }
        if let Some(b) = file.budget {
            if b == 0 {
                return Err(invalid("budget", "must be at least 1"));
            }
            search.budget = b;
        }

        let base = match &file.base {
            Some(label) => Some(
                space
                    .index_of(label)
                    .ok_or_else(|| invalid("base", format!("`{label}` is not a point of the space")))?,
            ),
            None => None,
        };

        let c_values = match &file.c_values {
            Some(cs) => {
                for &v in cs {
                    positive_finite("c_values", v)?;
                }
                cs.clone()
            }
            None => vec![c],
        };

        if let Some(d) = file.degree {
            if d == 0 {
                return Err(invalid("degree", "must be a positive integer"));
            }
        }

        let condition = match &file.condition {
            Some(d) => Some(build_condition(d, sigma.as_ref(), file.degree)?),
            None => None,
        };

        let theorem = match &file.theorem {
            Some(id) => {
                let th = TheoremId::parse(id)
                    .ok_or_else(|| invalid("theorem", format!("unknown theorem id `{id}`")))?;
                th.validate(sigma.as_ref(), condition.as_ref(), file.degree)
                    .map_err(|reason| invalid("theorem", reason))?;
                Some(th)
            }
            None => None,
        };

        let degree = file.degree;
        Ok(Scenario {
            name: file.name.clone().unwrap_or_else(|| "scenario".into()),
            file,
            space,
            harmonic,
            t,
            s,
            sigma,
            c,
            theorem,
            condition,
            mode,
            picard,
            search,
            degree,
            base,
            c_values,
        })
    }
}

/// The space, its harmonic layout if any, and the grid start and step.
type BuiltSpace = (FiniteMetricSpace, Option<HarmonicTruncation>, Option<(f64, f64)>);

/// Builds the space; the grid step is returned for `grid-third`.
fn build_space(
    desc: &SpaceDesc,
    tol: f64,
) -> Result<BuiltSpace, ScenarioError> {
    match desc {
        SpaceDesc::Finite { labels, points, metric } => match (points, metric) {
            (Some(points), None) => {
                let labels = match labels {
                    Some(l) => l.clone(),
                    None => points.iter().map(|&x| coordinate_label(x)).collect(),
                };
                let space = build_real_line_space(labels, points, tol).map_err(|e| metric_error("space.points", e))?;
                Ok((space, None, None))
            }
            (None, Some(metric)) => {
                let labels = labels
                    .clone()
                    .ok_or_else(|| invalid("space.labels", "required together with `metric`"))?;
                let space = build_finite_space(labels, metric.clone(), tol).map_err(|e| metric_error("space.metric", e))?;
                Ok((space, None, None))
            }
            _ => Err(invalid("space", "give exactly one of `points` or `metric`")),
        },
        SpaceDesc::HarmonicTruncation { n_max } => {
            let h = build_truncated_harmonic_space(*n_max).map_err(|e| metric_error("space.n_max", e))?;
            Ok((h.space.clone(), Some(h), None))
        }
        SpaceDesc::Grid { start, step, count } => {
            if !start.is_finite() {
                return Err(invalid("space.start", "must be finite"));
            }
            positive_finite("space.step", *step)?;
            if *count == 0 {
                return Err(invalid("space.count", "must be at least 1"));
            }
            let coords: Vec<f64> = (0..*count).map(|i| round_sig(start + i as f64 * step, 12)).collect();
            let labels: Vec<String> = coords.iter().map(|&x| coordinate_label(x)).collect();
            let space = build_real_line_space(labels, &coords, tol).map_err(|e| metric_error("space", e))?;
            Ok((space, None, Some((*start, *step))))
        }
        SpaceDesc::Builtin { name } => Err(invalid("space.name", format!("builtin `{name}` cannot be nested"))),
    }
}

fn build_map(
    field: &str,
    desc: &MapDesc,
    space: &FiniteMetricSpace,
    harmonic: Option<&HarmonicTruncation>,
    grid: Option<(f64, f64)>,
) -> Result<SelfMap, ScenarioError> {
    match (&desc.assign, &desc.builtin) {
        (Some(assign), None) => {
            if desc.value.is_some() {
                return Err(invalid(format!("{field}.value"), "only allowed with `builtin: constant`"));
            }
            build_self_map(space, assign).map_err(|e| invalid(field, e.to_string()))
        }
        (None, Some(name)) => {
            if desc.value.is_some() && name != "constant" {
                return Err(invalid(format!("{field}.value"), "only allowed with `builtin: constant`"));
            }
            match name.as_str() {
                "identity" => Ok(SelfMap::identity(space)),
                "constant" => {
                    let label = desc
                        .value
                        .as_ref()
                        .ok_or_else(|| invalid(format!("{field}.value"), "required for a constant map"))?;
                    let i = space
                        .index_of(label)
                        .ok_or_else(|| invalid(format!("{field}.value"), format!("`{label}` is not a point")))?;
                    SelfMap::constant(space, i).map_err(|e| invalid(field, e.to_string()))
                }
                "harmonic-t" | "harmonic-s" => {
                    let h = harmonic.ok_or_else(|| {
                        invalid(field, format!("`{name}` needs a harmonic-truncation space"))
                    })?;
                    Ok(if name == "harmonic-t" { h.t.clone() } else { h.s.clone() })
                }
                "grid-third" => {
                    let (start, _) = grid.ok_or_else(|| invalid(field, "`grid-third` needs a grid space"))?;
                    if start != 0.0 {
                        return Err(invalid(field, "`grid-third` needs a grid starting at 0"));
                    }
                    // x/3 rounded down to the grid
                    let images = (0..space.len()).map(|i| i / 3).collect();
                    SelfMap::from_images(space, images).map_err(|e| invalid(field, e.to_string()))
                }
                other => Err(invalid(format!("{field}.builtin"), format!("unknown map `{other}`"))),
            }
        }
        _ => Err(invalid(field, "give exactly one of `assign` or `builtin`")),
    }
}

fn build_condition(
    d: &ConditionDesc,
    sigma: Option<&ComparisonFn>,
    degree: Option<u32>,
) -> Result<ConditionSpec, ScenarioError> {
    let need_alpha = || d.alpha.ok_or_else(|| invalid("condition.alpha", "required"));
    let need_sigma = || {
        sigma
            .cloned()
            .ok_or_else(|| invalid("sigma", format!("condition `{}` needs a sigma", d.kind)))
    };
    let spec = match d.kind.as_str() {
        "classical-kannan" => ConditionSpec::classical_kannan(need_alpha()?),
        "koparde-waghmode" => ConditionSpec::koparde_waghmode(need_alpha()?),
        "malceski" => ConditionSpec::malceski(need_alpha()?, d.gamma.unwrap_or(0.0)),
        "sigma-kannan" => Ok(ConditionSpec::SigmaKannan { sigma: need_sigma()? }),
        "sigma-s-kannan" => Ok(ConditionSpec::SigmaSKannan { sigma: need_sigma()? }),
        "s-dominated" => {
            let w = d
                .w
                .or(degree)
                .ok_or_else(|| invalid("condition.w", "required for s-dominated"))?;
            ConditionSpec::s_dominated(need_sigma()?, w)
        }
        other => return Err(invalid("condition.kind", format!("unknown condition `{other}`"))),
    };
    spec.map_err(|e| invalid("condition", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_reference() {
        let s = parse_scenario_str(r#"{"space": {"type": "builtin", "name": "ex-3.24"}}"#).unwrap();
        assert_eq!(s.space.len(), 5);
        assert_eq!(s.t.apply(3), 1);
        assert_eq!(s.s.apply(3), 4);
        assert_eq!(s.theorem, Some(TheoremId::T3_18));
        assert_eq!(s.sigma.unwrap().linear_slope(), Some(3.0 / 7.0));
    }

    #[test]
    fn chi_alpha_half_rejected() {
        let err = parse_scenario_str(
            r#"{"space": {"type": "builtin", "name": "ex-3.24"}, "sigma": {"name": "chi", "alpha": 0.5}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ScenarioError::Validation { ref field, .. } if field == "sigma"), "{err}");
    }

    #[test]
    fn minimal_single_point() {
        let s = parse_scenario_str(r#"{"space": {"type": "finite", "labels": ["p"], "metric": [[0]]}}"#).unwrap();
        assert_eq!(s.space.len(), 1);
        assert!(s.t.is_identity());
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_scenario_str("{\n  \"space\": {\n    \"type\": \"finite\",,\n").unwrap_err();
        match err {
            ScenarioError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = parse_scenario_str(r#"{"space": {"type": "harmonic-truncation", "n_max": 5}, "colour": 1}"#).unwrap_err();
        assert!(matches!(err, ScenarioError::Validation { .. }));
        let err = parse_scenario_str(r#"{"space": {"type": "harmonic-truncation", "n_max": 5, "x": 1}}"#).unwrap_err();
        assert!(matches!(err, ScenarioError::Validation { .. }));
    }

    #[test]
    fn grid_labels_and_third() {
        let s = parse_scenario_str(r#"{"space": {"type": "builtin", "name": "koparde-grid"}}"#).unwrap();
        assert_eq!(s.space.len(), 101);
        assert_eq!(s.space.label(7), "0.07");
        assert_eq!(s.space.label(100), "1");
        assert_eq!(s.space.label(s.t.apply(100)), "0.33");
        assert_eq!(s.space.label(s.t.apply(2)), "0");
    }

    #[test]
    fn theorem_degree_rules() {
        let e = parse_scenario_str(
            r#"{"space": {"type": "builtin", "name": "ex-3.34"}, "degree": null, "theorem": "C3.31"}"#,
        );
        assert!(e.is_err());
        let e = parse_scenario_str(
            r#"{"space": {"type": "builtin", "name": "koparde-grid"}, "degree": 1}"#,
        );
        assert!(e.is_err());
    }
}
