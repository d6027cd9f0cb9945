use serde::Serialize;

/// A closed-form sequence, indexed from `n = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Constant { value: f64 },
    /// `start·ratio^(n-1)`.
    Geometric { start: f64, ratio: f64 },
    /// `scale·(1 + 1/n)`.
    Harmonic { scale: f64 },
    /// `scale·n`.
    Linear { scale: f64 },
}

/// Where a sequence goes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Limit {
    Finite(f64),
    Infinite,
}

impl Family {
    pub fn term(&self, n: u64) -> f64 {
        debug_assert!(n >= 1);
        let n = n as f64;
        match *self {
            Family::Constant { value } => value,
            Family::Geometric { start, ratio } => start * ratio.powf(n - 1.0),
            Family::Harmonic { scale } => scale * (1.0 + 1.0 / n),
            Family::Linear { scale } => scale * n,
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<f64> {
        (1..=len as u64).map(|n| self.term(n)).collect()
    }

    pub(crate) fn limit(&self) -> Limit {
        match *self {
            Family::Constant { value } => Limit::Finite(value),
            Family::Geometric { start, ratio } => {
                if start == 0.0 || ratio.abs() < 1.0 {
                    Limit::Finite(0.0)
                } else if ratio == 1.0 {
                    Limit::Finite(start)
                } else {
                    Limit::Infinite
                }
            }
            Family::Harmonic { scale } => Limit::Finite(scale),
            Family::Linear { scale } => {
                if scale == 0.0 {
                    Limit::Finite(0.0)
                } else {
                    Limit::Infinite
                }
            }
        }
    }

    pub(crate) fn tends_to_zero(&self) -> bool {
        matches!(self.limit(), Limit::Finite(l) if l == 0.0)
    }

    pub(crate) fn is_constant(&self) -> bool {
        match *self {
            Family::Constant { .. } => true,
            Family::Geometric { start, ratio } => start == 0.0 || ratio == 1.0,
            Family::Harmonic { scale } | Family::Linear { scale } => scale == 0.0,
        }
    }

    pub(crate) fn is_bounded(&self) -> bool {
        matches!(self.limit(), Limit::Finite(_))
    }

    pub(crate) fn is_non_increasing(&self) -> bool {
        match *self {
            Family::Constant { .. } => true,
            Family::Geometric { start, ratio } => start >= 0.0 && (0.0..=1.0).contains(&ratio),
            Family::Harmonic { scale } => scale >= 0.0,
            Family::Linear { scale } => scale <= 0.0,
        }
    }

    pub(crate) fn all_positive(&self) -> bool {
        match *self {
            Family::Constant { value } => value > 0.0,
            Family::Geometric { start, ratio } => start > 0.0 && ratio > 0.0,
            Family::Harmonic { scale } | Family::Linear { scale } => scale > 0.0,
        }
    }
}

/// The second sequence of a witness, when the axiom needs one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "partner", rename_all = "kebab-case")]
pub enum Partner {
    /// `b_n = a_{n-1} + a_n`.
    ConsecutiveSum,
    Family { family: Family },
}

/// A sequence (or pair of sequences) that defeats an axiom, together with a
/// realized prefix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessSequence {
    pub family: Family,
    pub partner: Option<Partner>,
    pub first_terms: Vec<f64>,
    pub partner_terms: Vec<f64>,
    /// Function values along the prefix, in the form the axiom uses.
    pub values: Vec<f64>,
}

impl WitnessSequence {
    pub(crate) fn new(family: Family, partner: Option<Partner>, len: usize) -> Self {
        let first_terms = family.prefix(len);
        let partner_terms = match partner {
            None => Vec::new(),
            Some(Partner::ConsecutiveSum) => (2..=len as u64)
                .map(|n| family.term(n - 1) + family.term(n))
                .collect(),
            Some(Partner::Family { family: b }) => b.prefix(len),
        };
        WitnessSequence {
            family,
            partner,
            first_terms,
            partner_terms,
            values: Vec::new(),
        }
    }

    pub fn partner_family(&self) -> Option<Family> {
        match self.partner {
            Some(Partner::Family { family }) => Some(family),
            _ => None,
        }
    }

    /// Checks that the stored prefix is what the closed forms produce.
    pub fn prefix_matches_family(&self) -> bool {
        let len = self.first_terms.len();
        let fresh = WitnessSequence::new(self.family, self.partner, len);
        fresh.first_terms == self.first_terms && fresh.partner_terms == self.partner_terms
    }
}
