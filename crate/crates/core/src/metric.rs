//! Finite metric spaces and total self-maps on them.
//!
//! Points are addressed by their index in label order. A space is validated
//! once at construction and is immutable afterwards, so maps only need to
//! remember which space they were built against.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;
use thiserror::Error;

/// Default tolerance for metric validation.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest truncation index accepted by [`build_truncated_harmonic_space`].
/// `1/n^n` leaves the normal double range shortly after this.
pub const HARMONIC_MAX_N: u32 = 120;

const MAX_REPORTED_VIOLATIONS: usize = 256;

static NEXT_SPACE_ID: AtomicU64 = AtomicU64::new(1);

/// Identity of a constructed space. Clones share the id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SpaceId(u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ViolationKind {
    NonZeroDiagonal,
    Asymmetry,
    IndiscerniblePair,
    TriangleFailure,
}

/// A failed metric axiom together with the table entries that show it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum MetricViolation {
    NonZeroDiagonal {
        i: usize,
        value: f64,
    },
    Asymmetry {
        i: usize,
        j: usize,
        forward: f64,
        backward: f64,
    },
    /// Two distinct points at distance `<= 0`.
    IndiscerniblePair {
        i: usize,
        j: usize,
        value: f64,
    },
    /// `d(i,k) > d(i,j) + d(j,k) + tol`.
    TriangleFailure {
        i: usize,
        j: usize,
        k: usize,
        direct: f64,
        first_leg: f64,
        second_leg: f64,
    },
}

impl MetricViolation {
    pub fn kind(&self) -> ViolationKind {
        match self {
            MetricViolation::NonZeroDiagonal { .. } => ViolationKind::NonZeroDiagonal,
            MetricViolation::Asymmetry { .. } => ViolationKind::Asymmetry,
            MetricViolation::IndiscerniblePair { .. } => ViolationKind::IndiscerniblePair,
            MetricViolation::TriangleFailure { .. } => ViolationKind::TriangleFailure,
        }
    }

    /// Re-reads the witness entries from `dist` and reports whether they still
    /// show the violation.
    pub fn replays(&self, dist: &[Vec<f64>], tol: f64) -> bool {
        match *self {
            MetricViolation::NonZeroDiagonal { i, value } => {
                dist[i][i] == value && value.abs() > tol
            }
            MetricViolation::Asymmetry {
                i,
                j,
                forward,
                backward,
            } => {
                dist[i][j] == forward && dist[j][i] == backward && (forward - backward).abs() > tol
            }
            MetricViolation::IndiscerniblePair { i, j, value } => {
                i != j && dist[i][j] == value && value <= 0.0
            }
            MetricViolation::TriangleFailure {
                i,
                j,
                k,
                direct,
                first_leg,
                second_leg,
            } => {
                dist[i][k] == direct
                    && dist[i][j] == first_leg
                    && dist[j][k] == second_leg
                    && direct > first_leg + second_leg + tol
            }
        }
    }
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricViolation::NonZeroDiagonal { i, value } => {
                write!(f, "d({i},{i}) = {value} is not zero")
            }
            MetricViolation::Asymmetry {
                i,
                j,
                forward,
                backward,
            } => write!(f, "d({i},{j}) = {forward} but d({j},{i}) = {backward}"),
            MetricViolation::IndiscerniblePair { i, j, value } => {
                write!(f, "distinct points {i} and {j} at distance {value}")
            }
            MetricViolation::TriangleFailure {
                i,
                j,
                k,
                direct,
                first_leg,
                second_leg,
            } => write!(
                f,
                "d({i},{k}) = {direct} exceeds d({i},{j}) + d({j},{k}) = {first_leg} + {second_leg}"
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("a metric space needs at least one point")]
    Empty,
    #[error("distance table has {rows} rows for {labels} labels")]
    RowCount { labels: usize, rows: usize },
    #[error("distance table row {row} has {len} entries, expected {expected}")]
    RowLength {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("distance ({0}, {1}) is not finite")]
    NonFinite(usize, usize),
    #[error("tolerance must be finite and non-negative, got {0}")]
    BadTolerance(f64),
    #[error("{param} = {value} is out of range: {reason}")]
    ParameterOutOfRange {
        param: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("metric axioms violated ({} found), first: {}", .0.len(), .0[0])]
    MetricInvalid(Vec<MetricViolation>),
}

/// Checks the four metric axioms on a square table. Violations are listed
/// kind by kind (diagonal, symmetry, indiscernibility, triangle), each in
/// lexicographic index order, so the first entry is stable.
pub fn validate_metric(dist: &[Vec<f64>], tol: f64) -> Vec<MetricViolation> {
    let n = dist.len();
    let mut out = Vec::new();
    let full = |out: &Vec<MetricViolation>| out.len() >= MAX_REPORTED_VIOLATIONS;

    for i in 0..n {
        if dist[i][i].abs() > tol {
            out.push(MetricViolation::NonZeroDiagonal {
                i,
                value: dist[i][i],
            });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if full(&out) {
                return out;
            }
            if (dist[i][j] - dist[j][i]).abs() > tol {
                out.push(MetricViolation::Asymmetry {
                    i,
                    j,
                    forward: dist[i][j],
                    backward: dist[j][i],
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if full(&out) {
                return out;
            }
            if i != j && dist[i][j] <= 0.0 {
                out.push(MetricViolation::IndiscerniblePair {
                    i,
                    j,
                    value: dist[i][j],
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if full(&out) {
                    return out;
                }
                if dist[i][k] > dist[i][j] + dist[j][k] + tol {
                    out.push(MetricViolation::TriangleFailure {
                        i,
                        j,
                        k,
                        direct: dist[i][k],
                        first_leg: dist[i][j],
                        second_leg: dist[j][k],
                    });
                }
            }
        }
    }
    out
}

/// A finite set of labelled points with a validated distance table.
#[derive(Debug, Clone)]
pub struct FiniteMetricSpace {
    id: SpaceId,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    dist: Vec<f64>,
    tol: f64,
}

impl FiniteMetricSpace {
    pub fn id(&self) -> SpaceId {
        self.id
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.labels.len() + j]
    }

    pub fn table(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        (0..n)
            .map(|i| self.dist[i * n..(i + 1) * n].to_vec())
            .collect()
    }

    /// Every finite metric space is complete.
    pub fn is_complete(&self) -> bool {
        true
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }
}

/// Builds and validates a space from labels and a square distance table.
pub fn build_finite_space(
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
    tol: f64,
) -> Result<FiniteMetricSpace, MetricError> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(MetricError::BadTolerance(tol));
    }
    let n = labels.len();
    if n == 0 {
        return Err(MetricError::Empty);
    }
    if dist.len() != n {
        return Err(MetricError::RowCount {
            labels: n,
            rows: dist.len(),
        });
    }
    for (row, entries) in dist.iter().enumerate() {
        if entries.len() != n {
            return Err(MetricError::RowLength {
                row,
                len: entries.len(),
                expected: n,
            });
        }
        if let Some(col) = entries.iter().position(|v| !v.is_finite()) {
            return Err(MetricError::NonFinite(row, col));
        }
    }
    let mut index = HashMap::with_capacity(n);
    for (i, label) in labels.iter().enumerate() {
        if index.insert(label.clone(), i).is_some() {
            return Err(MetricError::DuplicateLabel(label.clone()));
        }
    }
    let violations = validate_metric(&dist, tol);
    if !violations.is_empty() {
        return Err(MetricError::MetricInvalid(violations));
    }
    Ok(FiniteMetricSpace {
        id: SpaceId(NEXT_SPACE_ID.fetch_add(1, Ordering::Relaxed)),
        labels,
        index,
        dist: dist.into_iter().flatten().collect(),
        tol,
    })
}

/// Real points with the absolute-difference metric.
pub fn build_real_line_space(
    labels: Vec<String>,
    coords: &[f64],
    tol: f64,
) -> Result<FiniteMetricSpace, MetricError> {
    if labels.len() != coords.len() {
        return Err(MetricError::RowCount {
            labels: labels.len(),
            rows: coords.len(),
        });
    }
    let dist = coords
        .iter()
        .map(|x| coords.iter().map(|y| (x - y).abs()).collect())
        .collect();
    build_finite_space(labels, dist, tol)
}

/// Integer points labelled by their value, e.g. `{1,2,3}` with `|x - y|`.
pub fn build_integer_space(values: &[i64], tol: f64) -> Result<FiniteMetricSpace, MetricError> {
    let labels = values.iter().map(|v| v.to_string()).collect();
    let coords: Vec<f64> = values.iter().map(|&v| v as f64).collect();
    build_real_line_space(labels, &coords, tol)
}

#[derive(Debug, Error, PartialEq)]
pub enum MapError {
    #[error("point `{0}` has no image")]
    PartialAssignment(String),
    #[error("image `{image}` of `{point}` is not a point of the space")]
    ImageOutOfSpace { point: String, image: String },
    #[error("`{0}` is not a point of the space")]
    UnknownPoint(String),
}

/// A total map from the points of one space to itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfMap {
    space: SpaceId,
    images: Vec<usize>,
}

impl SelfMap {
    /// Builds a map from image indices, one per point in label order.
    pub fn from_images(space: &FiniteMetricSpace, images: Vec<usize>) -> Result<Self, MapError> {
        let n = space.len();
        if images.len() < n {
            return Err(MapError::PartialAssignment(
                space.label(images.len()).to_string(),
            ));
        }
        if images.len() > n {
            return Err(MapError::UnknownPoint(format!("#{}", n)));
        }
        if let Some((i, &img)) = images.iter().enumerate().find(|(_, &img)| img >= n) {
            return Err(MapError::ImageOutOfSpace {
                point: space.label(i).to_string(),
                image: format!("#{img}"),
            });
        }
        Ok(SelfMap {
            space: space.id(),
            images,
        })
    }

    pub fn identity(space: &FiniteMetricSpace) -> Self {
        SelfMap {
            space: space.id(),
            images: (0..space.len()).collect(),
        }
    }

    pub fn constant(space: &FiniteMetricSpace, value: usize) -> Result<Self, MapError> {
        if value >= space.len() {
            return Err(MapError::ImageOutOfSpace {
                point: "*".into(),
                image: format!("#{value}"),
            });
        }
        Ok(SelfMap {
            space: space.id(),
            images: vec![value; space.len()],
        })
    }

    pub fn space_id(&self) -> SpaceId {
        self.space
    }

    pub fn belongs_to(&self, space: &FiniteMetricSpace) -> bool {
        self.space == space.id()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &SelfMap) -> SelfMap {
        debug_assert_eq!(self.space, inner.space);
        SelfMap {
            space: self.space,
            images: inner.images.iter().map(|&y| self.images[y]).collect(),
        }
    }

    /// The `n`-th iterate; `power(0)` is the identity.
    pub fn power(&self, n: usize) -> SelfMap {
        let mut out = SelfMap {
            space: self.space,
            images: (0..self.images.len()).collect(),
        };
        for _ in 0..n {
            out = self.compose(&out);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &y)| i == y)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.images.len())
            .filter(|&i| self.images[i] == i)
            .collect()
    }

    /// First pair `(x, y)`, `x < y`, with equal images, if any.
    pub fn injectivity_collision(&self) -> Option<(usize, usize)> {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for (x, &img) in self.images.iter().enumerate() {
            if let Some(&first) = seen.get(&img) {
                return Some((first, x));
            }
            seen.insert(img, x);
        }
        None
    }

    pub fn is_injective(&self) -> bool {
        self.injectivity_collision().is_none()
    }

    /// Points `y` with `self(y) = value`, ascending.
    pub fn preimages(&self, value: usize) -> Vec<usize> {
        (0..self.images.len())
            .filter(|&y| self.images[y] == value)
            .collect()
    }
}

/// Builds a map from a label-to-label assignment that must cover every point.
pub fn build_self_map(
    space: &FiniteMetricSpace,
    assignment: &BTreeMap<String, String>,
) -> Result<SelfMap, MapError> {
    for key in assignment.keys() {
        if space.index_of(key).is_none() {
            return Err(MapError::UnknownPoint(key.clone()));
        }
    }
    let mut images = Vec::with_capacity(space.len());
    for label in space.labels() {
        let image = assignment
            .get(label)
            .ok_or_else(|| MapError::PartialAssignment(label.clone()))?;
        let idx = space
            .index_of(image)
            .ok_or_else(|| MapError::ImageOutOfSpace {
                point: label.clone(),
                image: image.clone(),
            })?;
        images.push(idx);
    }
    SelfMap::from_images(space, images)
}

/// The space `{0} ∪ {1/n : 4 <= n <= n_max}` truncated to finitely many
/// points, with the maps `T(1/n) = 1/(n+1)` and `S(1/n) = 1/n^n`.
///
/// Point layout, in index order:
/// `0`, then `1/4 .. 1/n_max` (the core points), then the boundary point
/// `1/(n_max+1)`, then the images `1/n^n` for `4 <= n <= n_max+1`.
/// Both maps follow their closed forms wherever the image is present.
/// Outside that, `T` sends the auxiliary points to `0`, and `S` swaps
/// `1/n` with `1/n^n` on the auxiliary points, so `S` stays injective.
#[derive(Debug, Clone)]
pub struct HarmonicTruncation {
    pub space: FiniteMetricSpace,
    pub t: SelfMap,
    pub s: SelfMap,
    pub n_max: u32,
    values: Vec<f64>,
}

impl HarmonicTruncation {
    /// `0` and `1/n` for `4 <= n <= n_max`.
    pub fn core_points(&self) -> Vec<usize> {
        (0..=(self.n_max as usize - 3)).collect()
    }

    /// Index of `1/n` for `4 <= n <= n_max + 1`.
    pub fn reciprocal(&self, n: u32) -> Option<usize> {
        (4..=self.n_max + 1)
            .contains(&n)
            .then(|| (n - 3) as usize)
    }

    pub fn zero(&self) -> usize {
        0
    }

    /// Coordinate of a point on the real line.
    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }
}

pub fn build_truncated_harmonic_space(n_max: u32) -> Result<HarmonicTruncation, MetricError> {
    if !(4..=HARMONIC_MAX_N).contains(&n_max) {
        return Err(MetricError::ParameterOutOfRange {
            param: "n_max",
            value: n_max as f64,
            reason: "must lie in 4..=120",
        });
    }
    let top = n_max + 1;
    let mut labels = vec!["0".to_string()];
    let mut values = vec![0.0];
    for n in 4..=top {
        labels.push(format!("1/{n}"));
        values.push(1.0 / n as f64);
    }
    let power_base = labels.len();
    for n in 4..=top {
        labels.push(format!("1/{n}^{n}"));
        values.push(1.0 / (n as f64).powi(n as i32));
    }
    let space = build_real_line_space(labels, &values, DEFAULT_TOL)?;

    let reciprocal = |n: u32| (n - 3) as usize;
    let power = |n: u32| power_base + (n - 4) as usize;
    let len = space.len();
    let mut t = vec![0usize; len];
    let mut s = vec![0usize; len];
    for n in 4..=top {
        t[reciprocal(n)] = if n < top { reciprocal(n + 1) } else { 0 };
        s[reciprocal(n)] = power(n);
        // auxiliary image points
        t[power(n)] = 0;
        s[power(n)] = reciprocal(n);
    }
    let t = SelfMap::from_images(&space, t).expect("layout is total");
    let s = SelfMap::from_images(&space, s).expect("layout is total");
    Ok(HarmonicTruncation {
        space,
        t,
        s,
        n_max,
        values,
    })
}
