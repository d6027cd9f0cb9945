//! Picard sequences of a pair `(T, S)`: `Sx_{n+1} = Tx_n`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::metric::{FiniteMetricSpace, SelfMap, DEFAULT_TOL};

pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const DEFAULT_WINDOW: usize = 10;

type Chooser = Arc<dyn Fn(usize, &[usize]) -> usize + Send + Sync>;

/// How `x_{n+1}` is picked among the points `y` with `Sy = Tx_n`.
///
/// Both policies must be deterministic in `x_n`; cycle detection relies on it.
#[derive(Clone, Default)]
pub enum PreimagePolicy {
    /// Lowest index whose own chain continues forever, else the lowest index.
    #[default]
    LowestIndex,
    /// Called with `x_n` and the candidate preimages in index order; must
    /// return one of the candidates.
    Supplied(Chooser),
}

impl fmt::Debug for PreimagePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreimagePolicy::LowestIndex => f.write_str("LowestIndex"),
            PreimagePolicy::Supplied(_) => f.write_str("Supplied(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PicardConfig {
    pub policy: PreimagePolicy,
    pub max_iter: usize,
    pub tol: f64,
    /// Tail length used for "tends to zero".
    pub window: usize,
}

impl Default for PicardConfig {
    fn default() -> Self {
        PicardConfig {
            policy: PreimagePolicy::LowestIndex,
            max_iter: DEFAULT_MAX_ITER,
            tol: DEFAULT_TOL,
            window: DEFAULT_WINDOW,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PicardError {
    #[error("T and S do not live on the given space")]
    SpaceMismatch,
    #[error("base point index {0} is not in the space")]
    BaseOutOfRange(usize),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("preimage policy chose {chosen}, which is not a preimage of {target}")]
    PolicyViolation { chosen: usize, target: usize },
    #[error("trace too short for diagnostics")]
    TraceTooShort,
    #[error("no point starts an infinite Picard chain of the pair")]
    NoClrBase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Termination {
    /// `Tx_n = Sx_n` at index `index`.
    Coincidence { index: usize },
    /// `Tx_n` at index `index` has no S-preimage.
    ChainBroken { index: usize },
    /// `x_{n+1} = x_start`; the orbit repeats with the given period.
    Cycle { start: usize, period: usize },
    MaxIter,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PicardTrace {
    pub base: usize,
    pub points: Vec<usize>,
    pub s_images: Vec<usize>,
    pub t_images: Vec<usize>,
    /// `d(Tx_n, Sx_n)`; equals `d(Tx_n, Tx_{n-1})` for `n >= 1`.
    pub step_distances: Vec<f64>,
    pub coincidence_index: Option<usize>,
    pub cycle: Option<(usize, usize)>,
    pub termination: Termination,
    /// `C_n = sup{d(Sx_i, Sx_j) : i, j >= n}`, using the continuation of
    /// the orbit after a cycle or coincidence.
    pub c_sequence: Vec<f64>,
}

impl PicardTrace {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Values of a per-point quantity on the tail of the orbit. After a
    /// coincidence the orbit is continued as stationary, after a cycle as
    /// periodic; otherwise the last `window` realized values are used.
    fn tail(&self, per_point: &[f64], window: usize) -> Vec<f64> {
        let window = window.max(1);
        match self.termination {
            Termination::Coincidence { index } => vec![per_point[index]; window],
            Termination::Cycle { start, period } => {
                let cycle = &per_point[start..start + period];
                cycle.iter().cycle().take(window.max(period)).copied().collect()
            }
            _ => {
                let from = per_point.len().saturating_sub(window);
                per_point[from..].to_vec()
            }
        }
    }
}

fn check_maps(space: &FiniteMetricSpace, t: &SelfMap, s: &SelfMap) -> Result<(), PicardError> {
    if t.belongs_to(space) && s.belongs_to(space) {
        Ok(())
    } else {
        Err(PicardError::SpaceMismatch)
    }
}

/// Preimage lists under `S`, in index order.
fn preimage_table(s: &SelfMap, n: usize) -> Vec<Vec<usize>> {
    let mut table = vec![Vec::new(); n];
    for (x, &sx) in s.images().iter().enumerate() {
        table[sx].push(x);
    }
    table
}

/// Points from which an infinite chain exists: repeatedly drop points with
/// no surviving successor.
fn live_points(t: &SelfMap, s: &SelfMap, n: usize) -> Vec<bool> {
    let pre = preimage_table(s, n);
    let mut live = vec![true; n];
    loop {
        let mut changed = false;
        for x in 0..n {
            if live[x] && !pre[t.apply(x)].iter().any(|&y| live[y]) {
                live[x] = false;
                changed = true;
            }
        }
        if !changed {
            return live;
        }
    }
}

pub fn find_clr_base(space: &FiniteMetricSpace, t: &SelfMap, s: &SelfMap) -> Result<Option<usize>, PicardError> {
    check_maps(space, t, s)?;
    Ok(live_points(t, s, space.len()).iter().position(|&l| l))
}

pub fn run_picard_pair(
    space: &FiniteMetricSpace,
    t: &SelfMap,
    s: &SelfMap,
    base: usize,
    config: &PicardConfig,
) -> Result<PicardTrace, PicardError> {
    check_maps(space, t, s)?;
    if base >= space.len() {
        return Err(PicardError::BaseOutOfRange(base));
    }
    if config.max_iter == 0 {
        return Err(PicardError::BadConfig("max_iter must be at least 1".into()));
    }
    let n = space.len();
    let pre = preimage_table(s, n);
    let live = live_points(t, s, n);
    let mut seen = vec![usize::MAX; n];

    let mut trace = PicardTrace {
        base,
        points: Vec::new(),
        s_images: Vec::new(),
        t_images: Vec::new(),
        step_distances: Vec::new(),
        coincidence_index: None,
        cycle: None,
        termination: Termination::MaxIter,
        c_sequence: Vec::new(),
    };
    let mut x = base;
    loop {
        let k = trace.points.len();
        seen[x] = k;
        let (tx, sx) = (t.apply(x), s.apply(x));
        trace.points.push(x);
        trace.t_images.push(tx);
        trace.s_images.push(sx);
        trace.step_distances.push(space.distance(tx, sx));
        if tx == sx {
            trace.coincidence_index = Some(k);
            trace.termination = Termination::Coincidence { index: k };
            break;
        }
        let candidates = &pre[tx];
        if candidates.is_empty() {
            trace.termination = Termination::ChainBroken { index: k };
            break;
        }
        let next = match &config.policy {
            PreimagePolicy::LowestIndex => candidates
                .iter()
                .copied()
                .find(|&y| live[y])
                .unwrap_or(candidates[0]),
            PreimagePolicy::Supplied(choose) => {
                let y = choose(x, candidates);
                if !candidates.contains(&y) {
                    return Err(PicardError::PolicyViolation { chosen: y, target: tx });
                }
                y
            }
        };
        if seen[next] != usize::MAX {
            let start = seen[next];
            trace.cycle = Some((start, k + 1 - start));
            trace.termination = Termination::Cycle {
                start,
                period: k + 1 - start,
            };
            break;
        }
        if k + 1 > config.max_iter {
            break;
        }
        x = next;
    }
    trace.c_sequence = c_sequence(space, &trace);
    Ok(trace)
}

fn c_sequence(space: &FiniteMetricSpace, trace: &PicardTrace) -> Vec<f64> {
    let sx = &trace.s_images;
    let len = sx.len();
    let mut c = vec![0.0; len];
    let mut running = 0.0f64;
    for i in (0..len).rev() {
        for &other in &sx[i..] {
            running = running.max(space.distance(sx[i], other));
        }
        c[i] = running;
    }
    // a periodic continuation keeps every cycle point in each suffix
    if let Termination::Cycle { start, .. } = trace.termination {
        let cycle_diameter = c[start];
        for v in &mut c[start..] {
            *v = cycle_diameter;
        }
    }
    c
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub asymptotically_regular: bool,
    /// Tail window of the step distances.
    pub step_tail: Vec<f64>,
    pub s_bounded: bool,
    /// Largest distance between two realized `Sx_n`.
    pub s_bound: f64,
    pub s_cauchy: bool,
    pub final_c: f64,
    pub s_asymptotically_similar: bool,
    /// Tail window of `d(TSx_n, SSx_n)`.
    pub similarity_tail: Vec<f64>,
}

pub fn diagnose(
    trace: &PicardTrace,
    space: &FiniteMetricSpace,
    t: &SelfMap,
    s: &SelfMap,
    config: &PicardConfig,
) -> Result<DiagnosticsReport, PicardError> {
    check_maps(space, t, s)?;
    let continued = matches!(
        trace.termination,
        Termination::Coincidence { .. } | Termination::Cycle { .. }
    );
    if trace.len() < 2 && !continued {
        return Err(PicardError::TraceTooShort);
    }
    let tol = config.tol;
    let window = config.window;
    let step_tail = trace.tail(&trace.step_distances, window);
    let similarity: Vec<f64> = trace
        .points
        .iter()
        .map(|&x| {
            let sx = s.apply(x);
            space.distance(t.apply(sx), s.apply(sx))
        })
        .collect();
    let similarity_tail = trace.tail(&similarity, window);
    let final_c = match trace.termination {
        Termination::Coincidence { index } => trace.c_sequence[index],
        Termination::Cycle { start, .. } => trace.c_sequence[start],
        _ => trace.c_sequence[trace.len().saturating_sub(window)],
    };
    Ok(DiagnosticsReport {
        asymptotically_regular: step_tail.iter().all(|&a| a <= tol),
        step_tail,
        s_bounded: true,
        s_bound: trace.c_sequence.first().copied().unwrap_or(0.0),
        s_cauchy: final_c <= tol,
        final_c,
        s_asymptotically_similar: similarity_tail.iter().all(|&v| v <= tol),
        similarity_tail,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SolveResult {
    FixedPoint { point: usize, iterations: usize },
    CoincidencePoint { point: usize, iterations: usize },
    Cycle { points: Vec<usize> },
    ChainBroken { index: usize, point: usize, reason: String },
    BudgetExhausted { iterations: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub base: usize,
    pub result: SolveResult,
    pub trace: PicardTrace,
}

/// Runs the pair from `base`, or from [`find_clr_base`] when absent.
pub fn solve(
    space: &FiniteMetricSpace,
    t: &SelfMap,
    s: &SelfMap,
    base: Option<usize>,
    config: &PicardConfig,
) -> Result<Solution, PicardError> {
    let base = match base {
        Some(b) => b,
        None => find_clr_base(space, t, s)?.ok_or(PicardError::NoClrBase)?,
    };
    let trace = run_picard_pair(space, t, s, base, config)?;
    let result = match trace.termination {
        Termination::Coincidence { index } => {
            let point = trace.points[index];
            if s.is_identity() {
                SolveResult::FixedPoint { point, iterations: index }
            } else {
                SolveResult::CoincidencePoint { point, iterations: index }
            }
        }
        Termination::Cycle { start, .. } => SolveResult::Cycle {
            points: trace.points[start..].to_vec(),
        },
        Termination::ChainBroken { index } => SolveResult::ChainBroken {
            index,
            point: trace.points[index],
            reason: format!(
                "T maps {} to {}, which has no S-preimage",
                space.label(trace.points[index]),
                space.label(trace.t_images[index])
            ),
        },
        Termination::MaxIter => SolveResult::BudgetExhausted {
            iterations: trace.len(),
        },
    };
    Ok(Solution { base, result, trace })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointSets {
    pub fixed_points: Vec<usize>,
    pub coincidence_points: Vec<usize>,
}

/// Full scan; the reference every iterative answer is compared against.
pub fn brute_force_points(space: &FiniteMetricSpace, t: &SelfMap, s: &SelfMap) -> Result<PointSets, PicardError> {
    check_maps(space, t, s)?;
    let n = space.len();
    Ok(PointSets {
        fixed_points: (0..n).filter(|&x| t.apply(x) == x).collect(),
        coincidence_points: (0..n).filter(|&x| t.apply(x) == s.apply(x)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::metric::{build_integer_space, build_self_map, build_truncated_harmonic_space};

    fn map(space: &FiniteMetricSpace, pairs: &[(&str, &str)]) -> SelfMap {
        let m: BTreeMap<String, String> = pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        build_self_map(space, &m).unwrap()
    }

    fn ex324() -> (FiniteMetricSpace, SelfMap, SelfMap) {
        let space = build_integer_space(&[1, 2, 3, 4, 5], DEFAULT_TOL).unwrap();
        let t = map(&space, &[("1", "3"), ("2", "3"), ("3", "3"), ("4", "2"), ("5", "3")]);
        let s = map(&space, &[("1", "3"), ("2", "3"), ("3", "3"), ("4", "5"), ("5", "3")]);
        (space, t, s)
    }

    fn ex326() -> (FiniteMetricSpace, SelfMap) {
        let space = build_integer_space(&[1, 2, 3], DEFAULT_TOL).unwrap();
        let t = map(&space, &[("1", "3"), ("2", "3"), ("3", "2")]);
        (space, t)
    }

    #[test]
    fn ex324_pair() {
        let (space, t, s) = ex324();
        assert_eq!(find_clr_base(&space, &t, &s).unwrap(), Some(0));
        let cfg = PicardConfig::default();
        let tr = run_picard_pair(&space, &t, &s, 0, &cfg).unwrap();
        assert_eq!(tr.coincidence_index, Some(0));
        let broken = run_picard_pair(&space, &t, &s, 3, &cfg).unwrap();
        assert_eq!(broken.termination, Termination::ChainBroken { index: 0 });
        let sets = brute_force_points(&space, &t, &s).unwrap();
        assert_eq!(sets.coincidence_points, vec![0, 1, 2, 4]);
        let sol = solve(&space, &t, &s, None, &cfg).unwrap();
        assert_eq!(sol.result, SolveResult::CoincidencePoint { point: 0, iterations: 0 });
    }

    #[test]
    fn ex326_cycles() {
        let (space, t) = ex326();
        let id = SelfMap::identity(&space);
        let cfg = PicardConfig::default();
        let tr = run_picard_pair(&space, &t, &id, 0, &cfg).unwrap();
        assert_eq!(tr.points, vec![0, 2, 1]);
        assert_eq!(tr.cycle, Some((1, 2)));
        let d = diagnose(&tr, &space, &t, &id, &cfg).unwrap();
        assert!(!d.asymptotically_regular);
        assert!(d.step_tail.iter().all(|&a| a == 1.0));
        assert_eq!(d.final_c, 1.0);
        let sol = solve(&space, &t, &id, Some(0), &cfg).unwrap();
        assert_eq!(sol.result, SolveResult::Cycle { points: vec![2, 1] });
        assert!(brute_force_points(&space, &t, &id).unwrap().fixed_points.is_empty());
    }

    #[test]
    fn harmonic_orbit_steps() {
        let h = build_truncated_harmonic_space(50).unwrap();
        let id = SelfMap::identity(&h.space);
        let cfg = PicardConfig::default();
        let base = h.reciprocal(4).unwrap();
        let tr = run_picard_pair(&h.space, &h.t, &id, base, &cfg).unwrap();
        for n in 0..47 {
            let k = (n + 4) as f64;
            assert!((tr.step_distances[n] - 1.0 / (k * (k + 1.0))).abs() < 1e-12);
        }
        let d = diagnose(&tr, &h.space, &h.t, &id, &cfg).unwrap();
        assert!(d.asymptotically_regular && d.s_cauchy);
        let sol = solve(&h.space, &h.t, &h.s, Some(h.zero()), &cfg).unwrap();
        assert_eq!(sol.result, SolveResult::CoincidencePoint { point: h.zero(), iterations: 0 });
    }

    #[test]
    fn chain_identity_and_constant_map() {
        let space = build_integer_space(&[0, 1, 2, 3], DEFAULT_TOL).unwrap();
        let c = SelfMap::constant(&space, 2).unwrap();
        let id = SelfMap::identity(&space);
        let cfg = PicardConfig::default();
        let tr = run_picard_pair(&space, &c, &id, 0, &cfg).unwrap();
        for n in 1..tr.len() {
            assert_eq!(id.apply(tr.points[n]), tr.t_images[n - 1]);
        }
        let d = diagnose(&tr, &space, &c, &id, &cfg).unwrap();
        assert!(d.asymptotically_regular && d.s_cauchy && d.s_asymptotically_similar);
        let sol = solve(&space, &c, &id, None, &cfg).unwrap();
        assert_eq!(sol.result, SolveResult::FixedPoint { point: 2, iterations: 1 });
    }

    #[test]
    fn supplied_policy_must_return_a_preimage() {
        let (space, t, s) = ex324();
        let cfg = PicardConfig {
            policy: PreimagePolicy::Supplied(Arc::new(|_, _| 0)),
            ..Default::default()
        };
        // T2 = 3 = S2 stops immediately, so start from a point that needs a preimage
        let t2 = map(&space, &[("1", "5"), ("2", "3"), ("3", "3"), ("4", "2"), ("5", "3")]);
        assert!(matches!(
            run_picard_pair(&space, &t2, &s, 0, &cfg),
            Err(PicardError::PolicyViolation { .. })
        ));
        assert!(run_picard_pair(&space, &t, &s, 0, &cfg).is_ok());
    }

    #[test]
    fn no_clr_base() {
        let space = build_integer_space(&[1, 2], DEFAULT_TOL).unwrap();
        let t = SelfMap::constant(&space, 1).unwrap();
        let s = SelfMap::constant(&space, 0).unwrap();
        assert_eq!(find_clr_base(&space, &t, &s).unwrap(), None);
        assert_eq!(
            solve(&space, &t, &s, None, &PicardConfig::default()).unwrap_err(),
            PicardError::NoClrBase
        );
    }
}
