//! Certificate lookup and witness search for single axioms.
//!
//! Axioms that quantify over all sequences cannot be decided numerically.
//! A verdict is `CertifiedHolds` only when a closed-form certificate covers
//! it (or the axiom is a single point check), `Falsified` only with a
//! replayable witness, and `Undetermined` otherwise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::witness::{Family, Limit, Partner, WitnessSequence};
use super::{AxiomKind, ComparisonFn};

/// Far indices evaluated in addition to the prefix for the families whose
/// positivity is checked term by term.
const TAIL_PROBES: [u64; 2] = [1_000, 1_000_000];

const GRID: [f64; 10] = [1.0, 0.5, 2.0, 0.1, 5.0, 10.0, 0.01, 0.25, 3.0, 7.5];
const GEOMETRIC_RATIOS: [f64; 2] = [0.5, 0.9];
const RANDOM_MAX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    CertifiedHolds,
    Falsified,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Evaluations allowed per axiom.
    pub budget: usize,
    /// Terms realized per witness family.
    pub prefix_len: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: 10_000,
            prefix_len: 64,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomVerdict {
    pub kind: AxiomKind,
    pub c: Option<f64>,
    pub outcome: Outcome,
    pub witness: Option<WitnessSequence>,
    pub evaluations: usize,
    pub certificate: Option<String>,
    pub warnings: Vec<String>,
}

impl AxiomVerdict {
    fn new(kind: AxiomKind, c: Option<f64>, outcome: Outcome) -> Self {
        AxiomVerdict {
            kind,
            c,
            outcome,
            witness: None,
            evaluations: 0,
            certificate: None,
            warnings: Vec::new(),
        }
    }
}

struct Exhausted;

struct Evaluator<'a> {
    f: &'a ComparisonFn,
    used: usize,
    budget: usize,
}

impl<'a> Evaluator<'a> {
    fn new(f: &'a ComparisonFn, budget: usize) -> Self {
        Evaluator { f, used: 0, budget }
    }

    fn eval(&mut self, t: f64, s: f64) -> Result<f64, Exhausted> {
        self.spend()?;
        Ok(self.f.eval(t, s))
    }

    fn aux(&mut self, t: f64) -> Result<f64, Exhausted> {
        self.spend()?;
        // checked by the caller
        Ok(self.f.aux().map_or(f64::NAN, |a| a.call(t)))
    }

    fn spend(&mut self) -> Result<(), Exhausted> {
        if self.used >= self.budget {
            return Err(Exhausted);
        }
        self.used += 1;
        Ok(())
    }
}

fn finite_limit(f: &Family) -> Option<f64> {
    match f.limit() {
        Limit::Finite(l) => Some(l),
        Limit::Infinite => None,
    }
}

fn non_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] >= w[0])
}

fn last_quarter(values: &[f64]) -> &[f64] {
    let start = values.len() - values.len().div_ceil(4);
    &values[start..]
}

/// Tests one candidate. Returns the axiom's function values along the prefix
/// when the candidate defeats the axiom.
fn defeats(
    ev: &mut Evaluator<'_>,
    kind: AxiomKind,
    c: f64,
    a: &Family,
    partner: Option<&Partner>,
    len: usize,
) -> Result<Option<Vec<f64>>, Exhausted> {
    let b = match partner {
        Some(Partner::Family { family }) => Some(*family),
        _ => None,
    };
    let len = len.max(2);
    let mut values = Vec::new();
    match kind {
        AxiomKind::OriginZero => {
            let v = ev.eval(0.0, 0.0)?;
            values.push(v);
            return Ok((v != 0.0).then_some(values));
        }
        AxiomKind::UpperBound => {
            let Some(b) = b else { return Ok(None) };
            let (t, s) = (a.term(1), b.term(1));
            if !(a.is_constant() && b.is_constant() && t > 0.0 && s > 0.0) {
                return Ok(None);
            }
            let v = ev.eval(t, s)?;
            values.push(v);
            return Ok((v >= s - t).then_some(values));
        }
        AxiomKind::Sigma1 => {
            if !a.all_positive() || a.tends_to_zero() || partner != Some(&Partner::ConsecutiveSum) {
                return Ok(None);
            }
            let mut indices: Vec<u64> = if a.is_constant() {
                vec![2]
            } else {
                (2..=len as u64).collect()
            };
            if !a.is_constant() {
                indices.extend(TAIL_PROBES);
            }
            for n in indices {
                let (prev, cur) = (a.term(n - 1), a.term(n));
                let v = ev.eval(cur, prev + cur)?;
                if !(v > 0.0) {
                    return Ok(None);
                }
                values.push(v);
            }
            return Ok(Some(values));
        }
        AxiomKind::Rho1 => {
            if !a.all_positive() || a.tends_to_zero() {
                return Ok(None);
            }
            let mut indices: Vec<u64> = if a.is_constant() {
                vec![1]
            } else {
                (1..len as u64).collect()
            };
            if !a.is_constant() {
                indices.extend(TAIL_PROBES);
            }
            for n in indices {
                let v = ev.eval(a.term(n + 1), a.term(n))?;
                if !(v > 0.0) {
                    return Ok(None);
                }
                values.push(v);
            }
            return Ok(Some(values));
        }
        AxiomKind::Geraghty => {
            if !a.is_constant() {
                return Ok(None);
            }
            let t = a.term(1);
            let v = ev.aux(t)?;
            values.push(v);
            let ok = v >= 0.0 && (v < 1.0 || (t == 0.0 && v <= 1.0));
            return Ok((t >= 0.0 && !ok).then_some(values));
        }
        AxiomKind::LFunction => {
            if !a.is_constant() {
                return Ok(None);
            }
            let t = a.term(1);
            let v = ev.aux(t)?;
            values.push(v);
            let bad = if t == 0.0 {
                v != 0.0
            } else {
                t > 0.0 && (v <= 0.0 || v > t || v.is_nan())
            };
            return Ok(bad.then_some(values));
        }
        _ => {}
    }

    // The remaining axioms compare two families term by term.
    let Some(b) = b else { return Ok(None) };
    if !(a.all_positive() && b.all_positive()) {
        return Ok(None);
    }
    let both_constant = a.is_constant() && b.is_constant();
    match kind {
        AxiomKind::Sigma2 => {
            let (Some(la), Some(lb)) = (finite_limit(a), finite_limit(&b)) else {
                return Ok(None);
            };
            if !(la > 0.0 && (lb - c * la).abs() <= 1e-12 * lb.abs().max(1.0)) {
                return Ok(None);
            }
            let mut indices: Vec<u64> = if both_constant {
                vec![1]
            } else {
                (1..=len as u64).collect()
            };
            if !both_constant {
                indices.extend(TAIL_PROBES);
            }
            for n in indices {
                let v = ev.eval(a.term(n), b.term(n))?;
                if !(v > 0.0) {
                    return Ok(None);
                }
                values.push(v);
            }
            Ok(Some(values))
        }
        AxiomKind::Rho2 => {
            let (Some(la), Some(lb)) = (finite_limit(a), finite_limit(&b)) else {
                return Ok(None);
            };
            if !(la > 0.0 && la == lb) {
                return Ok(None);
            }
            for n in (1..=len as u64).chain(TAIL_PROBES) {
                let (an, bn) = (a.term(n), b.term(n));
                if !(an > la) {
                    return Ok(None);
                }
                let v = ev.eval(an, bn)?;
                if !(v > 0.0) {
                    return Ok(None);
                }
                values.push(v);
            }
            Ok(Some(values))
        }
        AxiomKind::Dollar => {
            if !b.tends_to_zero() || a.tends_to_zero() {
                return Ok(None);
            }
            for n in 1..=len as u64 {
                let v = ev.eval(a.term(n), b.term(n))?;
                if !(v > 0.0) {
                    return Ok(None);
                }
                values.push(v);
            }
            // positivity must persist past the prefix
            Ok(non_decreasing(&values).then_some(values))
        }
        AxiomKind::Zeta3 => {
            let (Some(la), Some(lb)) = (finite_limit(a), finite_limit(&b)) else {
                return Ok(None);
            };
            if !(la > 0.0 && la == lb) {
                return Ok(None);
            }
            if both_constant {
                let v = ev.eval(la, lb)?;
                values.push(v);
                return Ok((v >= 0.0).then_some(values));
            }
            for n in 1..=len as u64 {
                values.push(ev.eval(a.term(n), b.term(n))?);
            }
            let tail = last_quarter(&values);
            Ok((tail.iter().all(|&v| v >= 0.0) && non_decreasing(tail)).then_some(values))
        }
        AxiomKind::Eta2 => {
            if !(a.is_bounded() && b.is_non_increasing()) {
                return Ok(None);
            }
            let ratio = |ev: &mut Evaluator<'_>, n: u64| -> Result<f64, Exhausted> {
                let (t, s) = (a.term(n), b.term(n));
                Ok((t + ev.eval(t, s)?) / s)
            };
            if both_constant {
                let r = ratio(ev, 1)?;
                values.push(r);
                return Ok((r >= 1.0).then_some(values));
            }
            for n in 1..=len as u64 {
                values.push(ratio(ev, n)?);
            }
            let tail = last_quarter(&values);
            Ok((tail.iter().all(|&r| r >= 1.0) && non_decreasing(tail)).then_some(values))
        }
        _ => Ok(None),
    }
}

type Candidate = (Family, Option<Partner>);

fn constant(value: f64) -> Family {
    Family::Constant { value }
}

fn with(family: Family) -> Option<Partner> {
    Some(Partner::Family { family })
}

/// Structured candidates tried before random sampling.
fn structured(kind: AxiomKind, c: f64) -> Vec<Candidate> {
    let sum = Some(Partner::ConsecutiveSum);
    let mut out = Vec::new();
    match kind {
        AxiomKind::OriginZero => out.push((constant(0.0), with(constant(0.0)))),
        AxiomKind::UpperBound => {
            out.extend(GRID.iter().map(|&v| (constant(v), with(constant(v)))));
            for &t in &GRID {
                for &s in &GRID {
                    if t != s {
                        out.push((constant(t), with(constant(s))));
                    }
                }
            }
        }
        AxiomKind::Sigma1 => {
            out.extend(GRID.iter().map(|&v| (constant(v), sum)));
            out.extend(GRID.iter().map(|&v| (Family::Harmonic { scale: v }, sum)));
            out.extend(GRID.iter().map(|&v| (Family::Linear { scale: v }, sum)));
        }
        AxiomKind::Sigma2 => {
            out.extend(GRID.iter().map(|&l| (constant(l), with(constant(c * l)))));
            for &l in &GRID {
                out.push((constant(l), with(Family::Harmonic { scale: c * l })));
                out.push((Family::Harmonic { scale: l }, with(constant(c * l))));
            }
        }
        AxiomKind::Dollar => {
            let mut lefts: Vec<Family> = GRID.iter().map(|&v| constant(v)).collect();
            lefts.push(Family::Harmonic { scale: 1.0 });
            lefts.push(Family::Linear { scale: 1.0 });
            for a in lefts {
                for &start in &GRID {
                    for &ratio in &GEOMETRIC_RATIOS {
                        out.push((a, with(Family::Geometric { start, ratio })));
                    }
                }
            }
        }
        AxiomKind::Zeta3 => {
            for &l in &GRID {
                out.push((constant(l), with(constant(l))));
            }
            for &l in &GRID {
                out.push((Family::Harmonic { scale: l }, with(constant(l))));
                out.push((constant(l), with(Family::Harmonic { scale: l })));
            }
        }
        AxiomKind::Eta2 => {
            out.extend(GRID.iter().map(|&v| (constant(v), with(constant(v)))));
            for &t in &GRID {
                for &s in &GRID {
                    if t != s {
                        out.push((constant(t), with(constant(s))));
                    }
                }
            }
        }
        AxiomKind::Rho1 => {
            out.extend(GRID.iter().map(|&v| (constant(v), None)));
            out.extend(GRID.iter().map(|&v| (Family::Harmonic { scale: v }, None)));
            out.extend(GRID.iter().map(|&v| (Family::Linear { scale: v }, None)));
        }
        AxiomKind::Rho2 => {
            for &l in &GRID {
                out.push((Family::Harmonic { scale: l }, with(constant(l))));
                out.push((Family::Harmonic { scale: l }, with(Family::Harmonic { scale: l })));
            }
        }
        AxiomKind::Geraghty | AxiomKind::LFunction => {
            out.push((constant(0.0), None));
            out.extend(GRID.iter().map(|&v| (constant(v), None)));
            out.push((constant(100.0), None));
            out.push((constant(1e4), None));
        }
    }
    out
}

fn random_candidate(kind: AxiomKind, c: f64, rng: &mut ChaCha8Rng) -> Candidate {
    let mut draw = || rng.gen_range(f64::EPSILON..=RANDOM_MAX);
    match kind {
        AxiomKind::OriginZero => (constant(0.0), with(constant(0.0))),
        AxiomKind::UpperBound | AxiomKind::Eta2 => {
            let (t, s) = (draw(), draw());
            (constant(t), with(constant(s)))
        }
        AxiomKind::Sigma1 => (constant(draw()), Some(Partner::ConsecutiveSum)),
        AxiomKind::Sigma2 => {
            let l = draw();
            (constant(l), with(constant(c * l)))
        }
        AxiomKind::Dollar => {
            let (a, start) = (draw(), draw());
            let ratio = if draw() < RANDOM_MAX / 2.0 { 0.5 } else { 0.9 };
            (constant(a), with(Family::Geometric { start, ratio }))
        }
        AxiomKind::Zeta3 => {
            let l = draw();
            (constant(l), with(constant(l)))
        }
        AxiomKind::Rho1 => (constant(draw()), None),
        AxiomKind::Rho2 => {
            let l = draw();
            (Family::Harmonic { scale: l }, with(constant(l)))
        }
        AxiomKind::Geraghty | AxiomKind::LFunction => (constant(draw()), None),
    }
}

fn seed_for(kind: AxiomKind, seed: u64) -> u64 {
    seed ^ (kind as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Decides one axiom for `f` at parameter `c` (only [`AxiomKind::Sigma2`]
/// uses it; defaults to 1).
pub fn check_axiom(
    f: &ComparisonFn,
    kind: AxiomKind,
    c: Option<f64>,
    config: &SearchConfig,
) -> AxiomVerdict {
    let c_used = if kind == AxiomKind::Sigma2 {
        Some(c.unwrap_or(1.0))
    } else {
        None
    };
    let c_val = c_used.unwrap_or(1.0);
    let mut verdict = AxiomVerdict::new(kind, c_used, Outcome::Undetermined);

    if kind == AxiomKind::Sigma2 {
        if !(c_val.is_finite() && c_val > 0.0) {
            verdict
                .warnings
                .push(format!("c = {c_val} is not positive; nothing to check"));
            return verdict;
        }
        if c_val < 1.0 {
            verdict
                .warnings
                .push(format!("c = {c_val} lies below 1, outside the usual c >= 1"));
        }
    }
    if matches!(kind, AxiomKind::Geraghty | AxiomKind::LFunction) && f.aux().is_none() {
        verdict
            .warnings
            .push(format!("`{}` has no auxiliary function to check", f.name()));
        return verdict;
    }

    if let Some(cert) = f.certificate_for(kind, c_val) {
        verdict.outcome = Outcome::CertifiedHolds;
        verdict.certificate = Some(cert.reason.to_string());
        return verdict;
    }
    if is_aux_default_certified(f, kind) {
        verdict.outcome = Outcome::CertifiedHolds;
        verdict.certificate = Some(format!("closed form of {}", f.aux().map_or("", |a| a.name())));
        return verdict;
    }

    let mut ev = Evaluator::new(f, config.budget);
    let len = config.prefix_len.max(20);
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(kind, config.seed));
    let mut found = None;
    let mut attempts = 0usize;

    let structured = structured(kind, c_val);
    'search: {
        for (a, partner) in &structured {
            match defeats(&mut ev, kind, c_val, a, partner.as_ref(), len) {
                Ok(Some(values)) => {
                    found = Some((*a, *partner, values));
                    break 'search;
                }
                Ok(None) => {}
                Err(Exhausted) => break 'search,
            }
        }
        if kind == AxiomKind::OriginZero {
            break 'search;
        }
        while attempts < config.budget {
            attempts += 1;
            let (a, partner) = random_candidate(kind, c_val, &mut rng);
            match defeats(&mut ev, kind, c_val, &a, partner.as_ref(), len) {
                Ok(Some(values)) => {
                    found = Some((a, partner, values));
                    break 'search;
                }
                Ok(None) => {}
                Err(Exhausted) => break 'search,
            }
        }
    }
    verdict.evaluations = ev.used;

    match found {
        Some((a, partner, values)) => {
            let mut w = WitnessSequence::new(a, partner, len);
            w.values = values;
            verdict.outcome = Outcome::Falsified;
            verdict.witness = Some(w);
        }
        None if kind == AxiomKind::OriginZero => {
            verdict.outcome = Outcome::CertifiedHolds;
            verdict.certificate = Some("decided by evaluating at (0, 0)".into());
        }
        None => {}
    }
    verdict
}

fn is_aux_default_certified(f: &ComparisonFn, kind: AxiomKind) -> bool {
    let Some(aux) = f.aux() else { return false };
    match (kind, f.name()) {
        (AxiomKind::Geraghty, "theta-geraghty") => aux.name() == super::AuxFn::default_geraghty().name(),
        (AxiomKind::LFunction, "theta-l") => aux.name() == super::AuxFn::default_l_function().name(),
        _ => false,
    }
}

/// Re-evaluates a stored witness and reports whether it still defeats the
/// axiom. Also checks that the stored prefix matches the closed forms.
pub fn replay_witness(
    f: &ComparisonFn,
    kind: AxiomKind,
    c: Option<f64>,
    witness: &WitnessSequence,
) -> bool {
    if !witness.prefix_matches_family() {
        return false;
    }
    let mut ev = Evaluator::new(f, usize::MAX);
    match defeats(
        &mut ev,
        kind,
        c.unwrap_or(1.0),
        &witness.family,
        witness.partner.as_ref(),
        witness.first_terms.len(),
    ) {
        Ok(Some(values)) => values == witness.values,
        _ => false,
    }
}
