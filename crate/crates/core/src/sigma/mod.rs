//! Two-argument comparison functions `σ(t, s)` and the axiom systems they are
//! classified against: simulation, manageable, R-functions and σ_c-functions.

mod classify;
mod search;
mod witness;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub use classify::{classify, ClassVerdict, Classification, FunctionClass};
pub use search::{check_axiom, replay_witness, AxiomVerdict, Outcome, SearchConfig};
pub use witness::{Family, Partner, WitnessSequence};

/// The axioms a comparison function (or one of its auxiliary functions) can be
/// checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AxiomKind {
    /// `ζ(0, 0) = 0`.
    OriginZero,
    /// Positivity of `σ(a_n, a_{n-1} + a_n)` forces `a_n → 0`.
    Sigma1,
    /// Positivity along `a_n → L`, `b_n → cL` forces `L = 0`.
    Sigma2,
    /// Positivity of `σ(a_n, b_n)` with `b_n → 0` forces `a_n → 0`.
    Dollar,
    /// `σ(t, s) < s - t` for all `t, s > 0`.
    UpperBound,
    /// Equal positive limits give a negative limsup.
    Zeta3,
    /// `limsup (t_n + η(t_n, s_n)) / s_n < 1` for bounded `t_n`, non-increasing `s_n`.
    Eta2,
    /// Positivity of `ρ(a_{n+1}, a_n)` forces `a_n → 0`.
    Rho1,
    /// Positivity along a common limit `L < a_n` forces `L = 0`.
    Rho2,
    /// The auxiliary function is a Geraghty function.
    Geraghty,
    /// The auxiliary function is an L-function.
    LFunction,
}

impl AxiomKind {
    pub fn name(self) -> &'static str {
        match self {
            AxiomKind::OriginZero => "zeta1",
            AxiomKind::Sigma1 => "sigma1",
            AxiomKind::Sigma2 => "sigma2",
            AxiomKind::Dollar => "dollar",
            AxiomKind::UpperBound => "upper-bound",
            AxiomKind::Zeta3 => "zeta3",
            AxiomKind::Eta2 => "eta2",
            AxiomKind::Rho1 => "rho1",
            AxiomKind::Rho2 => "rho2",
            AxiomKind::Geraghty => "geraghty",
            AxiomKind::LFunction => "l-function",
        }
    }
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An interval of admissible `c` values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CRange {
    pub min: f64,
    pub min_inclusive: bool,
    pub max: f64,
    pub max_inclusive: bool,
}

impl CRange {
    pub const fn open(min: f64, max: f64) -> Self {
        CRange {
            min,
            min_inclusive: false,
            max,
            max_inclusive: false,
        }
    }

    pub const fn closed(min: f64, max: f64) -> Self {
        CRange {
            min,
            min_inclusive: true,
            max,
            max_inclusive: true,
        }
    }

    pub const fn half_open(min: f64, max: f64) -> Self {
        CRange {
            min,
            min_inclusive: true,
            max,
            max_inclusive: false,
        }
    }

    pub fn contains(&self, c: f64) -> bool {
        let lower = if self.min_inclusive {
            c >= self.min
        } else {
            c > self.min
        };
        let upper = if self.max_inclusive {
            c <= self.max
        } else {
            c < self.max
        };
        lower && upper
    }
}

impl fmt::Display for CRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.min_inclusive { '[' } else { '(' };
        let close = if self.max_inclusive { ']' } else { ')' };
        write!(f, "{open}{}, {}{close}", self.min, self.max)
    }
}

/// A closed-form argument that an axiom holds, possibly only for some `c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub axiom: AxiomKind,
    pub c_range: Option<CRange>,
    pub reason: &'static str,
}

impl Certificate {
    fn new(axiom: AxiomKind, reason: &'static str) -> Self {
        Certificate {
            axiom,
            c_range: None,
            reason,
        }
    }

    fn for_c(axiom: AxiomKind, range: CRange, reason: &'static str) -> Self {
        Certificate {
            axiom,
            c_range: Some(range),
            reason,
        }
    }

    pub fn covers(&self, axiom: AxiomKind, c: f64) -> bool {
        self.axiom == axiom && self.c_range.is_none_or(|r| r.contains(c))
    }
}

/// A named one-argument real function, used for π, g, l, ψ and φ.
#[derive(Clone)]
pub struct AuxFn {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl AuxFn {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        AuxFn {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn call(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    /// `g(t) = 1 / (1 + t)`.
    pub fn default_geraghty() -> Self {
        AuxFn::new("1/(1+t)", |t| 1.0 / (1.0 + t))
    }

    /// `l(0) = 0`, `l(t) = t/2`.
    pub fn default_l_function() -> Self {
        AuxFn::new("t/2", |t| if t > 0.0 { t / 2.0 } else { 0.0 })
    }

    /// `π(t) = t/2`.
    pub fn default_pi() -> Self {
        AuxFn::new("t/2", |t| t / 2.0)
    }

    /// `ψ(t) = t/2`.
    pub fn default_psi() -> Self {
        AuxFn::new("t/2", |t| t / 2.0)
    }

    /// `φ(t) = t`.
    pub fn default_phi() -> Self {
        AuxFn::new("t", |t| t)
    }
}

impl fmt::Debug for AuxFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AuxFn({})", self.name)
    }
}

#[derive(Debug, Clone)]
enum Shape {
    /// `s/2 - 3t/2` when `t < s`, else `0`.
    Gamma,
    /// `-1` if `t <= s`, `+1` otherwise.
    StepG,
    /// `-1` if `t < s`, `+1` otherwise.
    StepOmega,
    /// `slope·s - t`; covers β, χ^α, τ and user-supplied slopes.
    Linear { slope: f64 },
    ThetaPi { alpha: f64, pi: AuxFn },
    ThetaGeraghty { alpha: f64, g: AuxFn },
    ThetaL { alpha: f64, l: AuxFn },
    PsiPhi { psi: AuxFn, phi: AuxFn },
}

/// A comparison function `σ(t, s)` on `[0, ∞)²` with its known certificates.
#[derive(Debug, Clone)]
pub struct ComparisonFn {
    name: String,
    params: BTreeMap<String, f64>,
    shape: Shape,
    c_range: Option<CRange>,
    certificates: Vec<Certificate>,
}

impl ComparisonFn {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    /// Admissible `c` values for σ_c membership, when the function claims it.
    pub fn declared_c_range(&self) -> Option<CRange> {
        self.c_range
    }

    pub fn certificates(&self) -> &[Certificate] {
        &self.certificates
    }

    pub fn certificate_for(&self, axiom: AxiomKind, c: f64) -> Option<&Certificate> {
        self.certificates.iter().find(|cert| cert.covers(axiom, c))
    }

    /// Same function with every certificate removed; used to exercise the
    /// witness search on its own.
    pub fn without_certificates(&self) -> Self {
        ComparisonFn {
            certificates: Vec::new(),
            ..self.clone()
        }
    }

    /// The auxiliary function an axiom such as [`AxiomKind::Geraghty`] talks about.
    pub fn aux(&self) -> Option<&AuxFn> {
        match &self.shape {
            Shape::ThetaPi { pi, .. } => Some(pi),
            Shape::ThetaGeraghty { g, .. } => Some(g),
            Shape::ThetaL { l, .. } => Some(l),
            _ => None,
        }
    }

    /// Slope `a` when the function is `a·s - t`.
    pub fn linear_slope(&self) -> Option<f64> {
        match self.shape {
            Shape::Linear { slope } => Some(slope),
            _ => None,
        }
    }

    #[inline]
    pub fn eval(&self, t: f64, s: f64) -> f64 {
        match &self.shape {
            Shape::Gamma => {
                if t < s {
                    s / 2.0 - 3.0 * t / 2.0
                } else {
                    0.0
                }
            }
            Shape::StepG => {
                if t <= s {
                    -1.0
                } else {
                    1.0
                }
            }
            Shape::StepOmega => {
                if t < s {
                    -1.0
                } else {
                    1.0
                }
            }
            Shape::Linear { slope } => slope * s - t,
            Shape::ThetaPi { alpha, pi } => alpha * pi.call(s) - t,
            Shape::ThetaGeraghty { alpha, g } => alpha * g.call(s) * s - t,
            Shape::ThetaL { alpha, l } => alpha * l.call(s) - t,
            Shape::PsiPhi { psi, phi } => psi.call(s) - phi.call(t),
        }
    }

    /// `a·s - t` for an arbitrary positive slope.
    pub fn linear(slope: f64) -> Result<Self, SigmaError> {
        let name = "linear";
        check_range(name, "slope", slope, slope > 0.0, "must be positive")?;
        Ok(Self::linear_named(name, "slope", slope))
    }

    /// `χ^α(t, s) = α·s - t` with `0 < α < 1/2`.
    pub fn chi(alpha: f64) -> Result<Self, SigmaError> {
        check_range("chi", "alpha", alpha, alpha > 0.0 && alpha < 0.5, "need 0 < alpha < 1/2")?;
        Ok(Self::linear_named("chi", "alpha", alpha))
    }

    fn linear_named(name: &str, param: &str, slope: f64) -> Self {
        use AxiomKind::*;
        let mut certificates = vec![Certificate::new(
            Dollar,
            "a_n < slope·b_n, so b_n -> 0 forces a_n -> 0",
        )];
        if slope < 1.0 {
            certificates.push(Certificate::new(
                UpperBound,
                "slope·s - t < s - t whenever slope < 1 and s > 0",
            ));
        }
        let c_range = if slope < 0.5 {
            certificates.push(Certificate::new(
                Sigma1,
                "a_n < a_{n-1}·slope/(1-slope) with ratio below 1",
            ));
            certificates.push(Certificate::for_c(
                Sigma2,
                CRange::open(0.0, 2.0),
                "0 <= L <= c·slope·L < L for c < 2",
            ));
            Some(CRange::open(0.0, 2.0))
        } else {
            certificates.push(Certificate::for_c(
                Sigma2,
                CRange::open(0.0, 1.0 / slope),
                "0 <= L <= c·slope·L < L for c < 1/slope",
            ));
            None
        };
        let mut params = BTreeMap::new();
        params.insert(param.to_string(), slope);
        ComparisonFn {
            name: name.to_string(),
            params,
            shape: Shape::Linear { slope },
            c_range,
            certificates,
        }
    }
}

impl fmt::Display for ComparisonFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.params.is_empty() {
            let parts: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            write!(f, "({})", parts.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SigmaError {
    #[error("unknown gallery function `{0}`")]
    UnknownGallery(String),
    #[error("`{name}` requires parameter `{param}`")]
    MissingParam { name: String, param: &'static str },
    #[error("`{name}`: {param} = {value} is out of range ({reason})")]
    ParamOutOfRange {
        name: String,
        param: &'static str,
        value: f64,
        reason: String,
    },
}

fn check_range(
    name: &str,
    param: &'static str,
    value: f64,
    ok: bool,
    reason: &str,
) -> Result<(), SigmaError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(SigmaError::ParamOutOfRange {
            name: name.to_string(),
            param,
            value,
            reason: reason.to_string(),
        })
    }
}

/// Parameters for [`gallery`]. Missing auxiliary handles fall back to the
/// documented defaults.
#[derive(Debug, Clone, Default)]
pub struct GalleryParams {
    pub alpha: Option<f64>,
    pub slope: Option<f64>,
    pub pi: Option<AuxFn>,
    pub geraghty: Option<AuxFn>,
    pub l_function: Option<AuxFn>,
    pub psi: Option<AuxFn>,
    pub phi: Option<AuxFn>,
}

impl GalleryParams {
    pub fn alpha(alpha: f64) -> Self {
        GalleryParams {
            alpha: Some(alpha),
            ..Default::default()
        }
    }

    pub fn slope(slope: f64) -> Self {
        GalleryParams {
            slope: Some(slope),
            ..Default::default()
        }
    }
}

pub const GALLERY_NAMES: &[&str] = &[
    "gamma",
    "beta",
    "step-g",
    "step-omega",
    "chi",
    "theta-pi",
    "theta-geraghty",
    "theta-l",
    "tau",
    "psi-phi",
    "linear",
];

// Sample points for sanity checks on user-supplied auxiliary functions.
const AUX_PROBES: &[f64] = &[0.0, 1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1e4];

fn require_alpha(name: &str, params: &GalleryParams) -> Result<f64, SigmaError> {
    params.alpha.ok_or_else(|| SigmaError::MissingParam {
        name: name.to_string(),
        param: "alpha",
    })
}

fn probe_aux(
    name: &str,
    param: &'static str,
    f: &AuxFn,
    ok: impl Fn(f64, f64) -> bool,
    reason: &str,
) -> Result<(), SigmaError> {
    for &t in AUX_PROBES {
        let v = f.call(t);
        if !(v.is_finite() && ok(t, v)) {
            return Err(SigmaError::ParamOutOfRange {
                name: name.to_string(),
                param,
                value: v,
                reason: format!("{reason} (failed at t = {t})"),
            });
        }
    }
    Ok(())
}

/// Builds a named member of the function gallery.
pub fn gallery(name: &str, params: &GalleryParams) -> Result<ComparisonFn, SigmaError> {
    use AxiomKind::*;
    let mut p = BTreeMap::new();
    let (shape, c_range, certificates) = match name {
        "gamma" => (
            Shape::Gamma,
            Some(CRange::open(0.0, 3.0)),
            vec![
                Certificate::new(Sigma1, "a_n < a_{n-1}/2"),
                Certificate::for_c(Sigma2, CRange::open(0.0, 3.0), "3L <= cL < 3L forces L = 0"),
                Certificate::new(Dollar, "3a_n < b_n"),
            ],
        ),
        "beta" => (
            Shape::Linear { slope: 0.5 },
            None,
            vec![
                Certificate::new(UpperBound, "s/2 - t < s - t for s > 0"),
                Certificate::new(Zeta3, "limsup equals -L/2 < 0"),
                Certificate::new(Eta2, "(t_n + s_n/2 - t_n)/s_n = 1/2"),
                Certificate::new(Rho1, "a_{n+1} < a_n/2"),
                Certificate::new(Rho2, "L < a_n < b_n/2 -> L/2 forces L = 0"),
                Certificate::new(Dollar, "a_n < b_n/2"),
            ],
        ),
        "step-g" => (
            Shape::StepG,
            Some(CRange::open(1.0, f64::INFINITY)),
            vec![
                Certificate::new(Sigma1, "g(a_n, a_{n-1} + a_n) = -1, premise never holds"),
                Certificate::for_c(
                    Sigma2,
                    CRange::open(1.0, f64::INFINITY),
                    "a_n > b_n gives L >= cL, so L = 0 for c > 1",
                ),
            ],
        ),
        "step-omega" => (
            Shape::StepOmega,
            Some(CRange::open(1.0, f64::INFINITY)),
            vec![
                Certificate::new(Sigma1, "ω(a_n, a_{n-1} + a_n) = -1, premise never holds"),
                Certificate::for_c(
                    Sigma2,
                    CRange::open(1.0, f64::INFINITY),
                    "a_n >= b_n gives L >= cL, so L = 0 for c > 1",
                ),
            ],
        ),
        "chi" => return ComparisonFn::chi(require_alpha(name, params)?),
        "linear" => {
            let slope = params.slope.ok_or_else(|| SigmaError::MissingParam {
                name: name.to_string(),
                param: "slope",
            })?;
            return ComparisonFn::linear(slope);
        }
        "tau" => {
            let mut f = ComparisonFn::linear_named("tau", "slope", 2.0 / 3.0);
            f.params.clear();
            f.certificates.push(Certificate::new(
                Eta2,
                "(t_n + 2s_n/3 - t_n)/s_n = 2/3",
            ));
            return Ok(f);
        }
        "theta-pi" | "theta-l" | "theta-geraghty" => {
            let alpha = require_alpha(name, params)?;
            let (shape, alpha_ok, reason) = match name {
                "theta-pi" => {
                    let pi = params.pi.clone().unwrap_or_else(AuxFn::default_pi);
                    probe_aux(name, "pi", &pi, |t, v| v <= t, "need pi(t) <= t")?;
                    (Shape::ThetaPi { alpha, pi }, alpha < 0.5, "need 0 < alpha < 1/2")
                }
                "theta-l" => {
                    let l = params
                        .l_function
                        .clone()
                        .unwrap_or_else(AuxFn::default_l_function);
                    probe_aux(
                        name,
                        "l",
                        &l,
                        |t, v| if t == 0.0 { v == 0.0 } else { v > 0.0 && v <= t },
                        "need l(0) = 0 and 0 < l(t) <= t",
                    )?;
                    (Shape::ThetaL { alpha, l }, alpha < 0.5, "need 0 < alpha < 1/2")
                }
                _ => {
                    let g = params
                        .geraghty
                        .clone()
                        .unwrap_or_else(AuxFn::default_geraghty);
                    probe_aux(
                        name,
                        "g",
                        &g,
                        |t, v| v >= 0.0 && (v < 1.0 || (t == 0.0 && v <= 1.0)),
                        "need 0 <= g(t) < 1 for t > 0",
                    )?;
                    (
                        Shape::ThetaGeraghty { alpha, g },
                        alpha <= 0.5,
                        "need 0 < alpha <= 1/2",
                    )
                }
            };
            check_range(name, "alpha", alpha, alpha > 0.0 && alpha_ok, reason)?;
            p.insert("alpha".to_string(), alpha);
            (
                shape,
                Some(CRange::closed(1.0, 2.0)),
                vec![
                    Certificate::new(Sigma1, "a_n < alpha·(a_{n-1} + a_n) with alpha <= 1/2"),
                    Certificate::for_c(Sigma2, CRange::closed(1.0, 2.0), "L <= alpha·c·L forces L = 0"),
                    Certificate::new(Dollar, "a_n < alpha·b_n"),
                ],
            )
        }
        "psi-phi" => {
            let psi = params.psi.clone().unwrap_or_else(AuxFn::default_psi);
            let phi = params.phi.clone().unwrap_or_else(AuxFn::default_phi);
            probe_aux(name, "psi", &psi, |t, v| v >= 0.0 && (t == 0.0 || v < t), "need 0 <= psi(t) < t")?;
            probe_aux(name, "phi", &phi, |t, v| v >= 0.0 && v >= t, "need phi(t) >= t >= 0")?;
            (
                Shape::PsiPhi { psi, phi },
                None,
                vec![
                    Certificate::new(UpperBound, "psi(s) - phi(t) < s - t"),
                    Certificate::new(Zeta3, "limsup equals psi(L) - phi(L) < 0"),
                ],
            )
        }
        other => return Err(SigmaError::UnknownGallery(other.to_string())),
    };
    Ok(ComparisonFn {
        name: name.to_string(),
        params: p,
        shape,
        c_range,
        certificates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> ComparisonFn {
        gallery(name, &GalleryParams::default()).unwrap()
    }

    #[test]
    fn gallery_values() {
        let gamma = g("gamma");
        assert_eq!(gamma.eval(1.0, 1.0), 0.0);
        assert_eq!(gamma.eval(1.0, 3.0), 0.0);
        assert_eq!(gamma.eval(1.0, 5.0), 1.0);
        assert_eq!(gamma.eval(2.0, 1.0), 0.0);

        let chi = gallery("chi", &GalleryParams::alpha(0.3)).unwrap();
        assert_eq!(chi.eval(0.0, 0.0), 0.0);
        let chi4 = gallery("chi", &GalleryParams::alpha(0.4)).unwrap();
        assert!((chi4.eval(1.0, 5.0) - 1.0).abs() < 1e-15);

        assert_eq!(g("tau").eval(1.0, 3.0), 1.0);
        assert_eq!(g("beta").eval(1.0, 4.0), 1.0);

        let omega = g("step-omega");
        assert_eq!(omega.eval(1.0, 2.0), -1.0);
        assert_eq!(omega.eval(2.0, 2.0), 1.0);
        assert_eq!(omega.eval(3.0, 0.0), 1.0);
        let step = g("step-g");
        assert_eq!(step.eval(2.0, 2.0), -1.0);
        assert_eq!(step.eval(3.0, 2.0), 1.0);

        let tg = gallery("theta-geraghty", &GalleryParams::alpha(0.5)).unwrap();
        assert!((tg.eval(0.0, 1.0) - 0.25).abs() < 1e-15);
        let tl = gallery("theta-l", &GalleryParams::alpha(0.4)).unwrap();
        assert!((tl.eval(0.0, 1.0) - 0.2).abs() < 1e-15);
        let tp = gallery("theta-pi", &GalleryParams::alpha(0.4)).unwrap();
        assert!((tp.eval(0.1, 1.0) - 0.1).abs() < 1e-15);
        assert_eq!(g("psi-phi").eval(1.0, 4.0), 1.0);

        let lin = gallery("linear", &GalleryParams::slope(3.0 / 7.0)).unwrap();
        assert!((lin.eval(1.0, 3.0) - 2.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn gallery_errors() {
        assert_eq!(
            gallery("zeta", &GalleryParams::default()).unwrap_err(),
            SigmaError::UnknownGallery("zeta".into())
        );
        assert!(matches!(
            gallery("chi", &GalleryParams::default()),
            Err(SigmaError::MissingParam { param: "alpha", .. })
        ));
        assert!(matches!(
            gallery("chi", &GalleryParams::alpha(0.5)),
            Err(SigmaError::ParamOutOfRange { .. })
        ));
        assert!(matches!(
            gallery("linear", &GalleryParams::default()),
            Err(SigmaError::MissingParam { param: "slope", .. })
        ));
        assert!(gallery("theta-geraghty", &GalleryParams::alpha(0.5)).is_ok());
        assert!(gallery("theta-pi", &GalleryParams::alpha(0.5)).is_err());
        let bad_pi = GalleryParams {
            alpha: Some(0.3),
            pi: Some(AuxFn::new("2t", |t| 2.0 * t)),
            ..Default::default()
        };
        assert!(gallery("theta-pi", &bad_pi).is_err());
        let bad_g = GalleryParams {
            alpha: Some(0.3),
            geraghty: Some(AuxFn::new("one", |_| 1.0)),
            ..Default::default()
        };
        assert!(gallery("theta-geraghty", &bad_g).is_err());
    }

    #[test]
    fn every_gallery_name_resolves() {
        let params = GalleryParams {
            alpha: Some(0.4),
            slope: Some(0.4),
            ..Default::default()
        };
        for name in GALLERY_NAMES {
            assert!(gallery(name, &params).is_ok(), "{name}");
        }
    }

    #[test]
    fn certificate_ranges() {
        let gamma = g("gamma");
        assert!(gamma.certificate_for(AxiomKind::Sigma2, 2.9).is_some());
        assert!(gamma.certificate_for(AxiomKind::Sigma2, 3.0).is_none());
        let tau = g("tau");
        assert!(tau.certificate_for(AxiomKind::Sigma1, 1.0).is_none());
        assert!(tau.certificate_for(AxiomKind::Sigma2, 1.0).is_some());
        assert!(tau.certificate_for(AxiomKind::Sigma2, 1.5).is_none());
        let step = g("step-g");
        assert!(step.certificate_for(AxiomKind::Sigma2, 1.0).is_none());
        assert!(step.certificate_for(AxiomKind::Sigma2, 2.0).is_some());
        assert!(CRange::half_open(1.0, 1.5).contains(1.0));
        assert!(!CRange::half_open(1.0, 1.5).contains(1.5));
    }
}
