//! Report documents: JSON values with every float rounded to 12 significant
//! digits, plus a plain-text rendering.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::metric::FiniteMetricSpace;
use crate::picard::{PicardTrace, SolveResult, Termination};
use crate::scenario::FORMAT_VERSION;

pub const SIGNIFICANT_DIGITS: usize = 12;
const HEAD: usize = 20;
const TAIL: usize = 10;

pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

/// Rounds every float in the document.
pub fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                let r = round_sig(x, SIGNIFICANT_DIGITS);
                if let Some(num) = serde_json::Number::from_f64(r) {
                    *n = num;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

/// Wraps a command's sections into a versioned, rounded document.
pub fn document(command: &str, sections: Map<String, Value>) -> Value {
    let mut doc = Map::new();
    doc.insert("format_version".into(), json!(FORMAT_VERSION));
    doc.insert("command".into(), json!(command));
    doc.extend(sections);
    let mut v = Value::Object(doc);
    round_value(&mut v);
    v
}

pub fn labels(space: &FiniteMetricSpace, points: &[usize]) -> Vec<String> {
    points.iter().map(|&i| space.label(i).to_string()).collect()
}

fn head_tail<T: Clone + Serialize>(xs: &[T]) -> Value {
    if xs.len() <= HEAD + TAIL {
        json!({ "all": xs })
    } else {
        json!({ "head": &xs[..HEAD], "tail": &xs[xs.len() - TAIL..], "length": xs.len() })
    }
}

pub fn termination_value(space: &FiniteMetricSpace, trace: &PicardTrace) -> Value {
    match trace.termination {
        Termination::Coincidence { index } => json!({
            "kind": "coincidence", "index": index, "point": space.label(trace.points[index]),
        }),
        Termination::ChainBroken { index } => json!({
            "kind": "chain-broken", "index": index, "point": space.label(trace.points[index]),
        }),
        Termination::Cycle { start, period } => json!({
            "kind": "cycle", "start": start, "period": period,
            "points": labels(space, &trace.points[start..]),
        }),
        Termination::MaxIter => json!({ "kind": "max-iter" }),
    }
}

/// First 20 and last 10 terms of the orbit, `a_n` and `C_n`.
pub fn trace_summary(space: &FiniteMetricSpace, trace: &PicardTrace) -> Value {
    json!({
        "base": space.label(trace.base),
        "length": trace.len(),
        "termination": termination_value(space, trace),
        "points": head_tail(&labels(space, &trace.points)),
        "a_n": head_tail(&trace.step_distances),
        "c_n": head_tail(&trace.c_sequence),
    })
}

pub fn solve_result_value(space: &FiniteMetricSpace, r: &SolveResult) -> Value {
    match r {
        SolveResult::FixedPoint { point, iterations } => {
            json!({ "kind": "fixed-point", "point": space.label(*point), "iterations": iterations })
        }
        SolveResult::CoincidencePoint { point, iterations } => {
            json!({ "kind": "coincidence-point", "point": space.label(*point), "iterations": iterations })
        }
        SolveResult::Cycle { points } => json!({ "kind": "cycle", "points": labels(space, points) }),
        SolveResult::ChainBroken { index, point, reason } => json!({
            "kind": "chain-broken", "index": index, "point": space.label(*point), "reason": reason,
        }),
        SolveResult::BudgetExhausted { iterations } => {
            json!({ "kind": "budget-exhausted", "iterations": iterations })
        }
    }
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// Indented `key: value` lines; short scalar arrays stay on one line.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    write_text(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Array(items) if items.iter().all(is_scalar) => {
                        let items: Vec<String> = items.iter().map(scalar).collect();
                        out.push_str(&format!("{pad}{k}: [{}]\n", items.join(", ")));
                    }
                    _ if is_scalar(val) => out.push_str(&format!("{pad}{k}: {}\n", scalar(val))),
                    _ => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_text(val, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if is_scalar(item) {
                    out.push_str(&format!("{pad}- {}\n", scalar(item)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    write_text(item, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}
