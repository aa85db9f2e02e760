//! Triads and the elementary transformations the axioms are phrased in.
//!
//! A triad is a 3x3 positive reciprocal matrix, stored as its three
//! above-diagonal entries `(t12; t13; t23)`. The lower triangle and the unit
//! diagonal are implied, so reciprocity cannot be violated.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Permutation, ReciprocalMatrix};

/// Relative band for deciding that a consistency ratio equals one.
pub const CONSISTENCY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTriad")]
pub struct Triad {
    t12: f64,
    t13: f64,
    t23: f64,
}

#[derive(Deserialize)]
struct RawTriad {
    t12: f64,
    t13: f64,
    t23: f64,
}

impl TryFrom<RawTriad> for Triad {
    type Error = Error;

    fn try_from(raw: RawTriad) -> Result<Self> {
        Triad::new(raw.t12, raw.t13, raw.t23)
    }
}

/// One of the three above-diagonal positions of a triad.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Entry {
    #[serde(rename = "12")]
    T12,
    #[serde(rename = "13")]
    T13,
    #[serde(rename = "23")]
    T23,
}

impl Entry {
    pub const ALL: [Entry; 3] = [Entry::T12, Entry::T13, Entry::T23];

    pub fn as_str(self) -> &'static str {
        match self {
            Entry::T12 => "12",
            Entry::T13 => "13",
            Entry::T23 => "23",
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.as_str())
    }
}

fn check_positive(field: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositive {
            field: field.to_string(),
            value,
        })
    }
}

impl Triad {
    pub fn new(t12: f64, t13: f64, t23: f64) -> Result<Self> {
        Ok(Triad {
            t12: check_positive("t12", t12)?,
            t13: check_positive("t13", t13)?,
            t23: check_positive("t23", t23)?,
        })
    }

    /// The consistent triad induced by a positive weight vector.
    pub fn from_weights(w1: f64, w2: f64, w3: f64) -> Result<Self> {
        check_positive("w1", w1)?;
        check_positive("w2", w2)?;
        check_positive("w3", w3)?;
        Triad::new(w1 / w2, w1 / w3, w2 / w3)
    }

    pub fn t12(&self) -> f64 {
        self.t12
    }

    pub fn t13(&self) -> f64 {
        self.t13
    }

    pub fn t23(&self) -> f64 {
        self.t23
    }

    pub fn entry(&self, position: Entry) -> f64 {
        match position {
            Entry::T12 => self.t12,
            Entry::T13 => self.t13,
            Entry::T23 => self.t23,
        }
    }

    pub fn with_entry(&self, position: Entry, value: f64) -> Result<Self> {
        let mut out = *self;
        let slot = match position {
            Entry::T12 => &mut out.t12,
            Entry::T13 => &mut out.t13,
            Entry::T23 => &mut out.t23,
        };
        *slot = check_positive(&position.to_string(), value)?;
        Ok(out)
    }

    /// `t13 / (t12 * t23)`; equals one exactly on consistent triads.
    pub fn consistency_ratio(&self) -> f64 {
        self.t13 / (self.t12 * self.t23)
    }

    pub fn is_consistent(&self) -> bool {
        (self.consistency_ratio() - 1.0).abs() <= CONSISTENCY_TOL
    }

    /// Full 3x3 view: unit diagonal, reciprocals below.
    pub fn to_rows(&self) -> [[f64; 3]; 3] {
        [
            [1.0, self.t12, self.t13],
            [1.0 / self.t12, 1.0, self.t23],
            [1.0 / self.t13, 1.0 / self.t23, 1.0],
        ]
    }

    pub fn to_matrix(&self) -> ReciprocalMatrix {
        ReciprocalMatrix::from_triad(self)
    }

    /// `A^T`, i.e. every preference inverted.
    pub fn transpose(&self) -> Self {
        Triad {
            t12: 1.0 / self.t12,
            t13: 1.0 / self.t13,
            t23: 1.0 / self.t23,
        }
    }

    /// `P A P^T` for a permutation of the three alternatives.
    pub fn permuted(&self, perm: &Permutation) -> Result<Self> {
        self.to_matrix().apply_permutation(perm)?.to_triad()
    }

    /// Entrywise power `A(b) = [a_ij^b]`.
    pub fn power(&self, b: f64) -> Result<Self> {
        if !b.is_finite() {
            return Err(Error::InvalidParameter {
                name: "b",
                reason: format!("exponent must be finite, got {b}"),
            });
        }
        Triad::new(self.t12.powf(b), self.t13.powf(b), self.t23.powf(b))
    }

    /// Replace one entry of a consistent triad by its `delta`-th power.
    pub fn perturb_entry(&self, position: Entry, delta: f64) -> Result<Self> {
        if !delta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: format!("exponent must be finite, got {delta}"),
            });
        }
        if !self.is_consistent() {
            return Err(Error::Precondition(format!(
                "single-entry perturbation needs a consistent triad, consistency ratio is {}",
                self.consistency_ratio()
            )));
        }
        let value = self.entry(position);
        if (value - 1.0).abs() <= CONSISTENCY_TOL {
            return Err(Error::Precondition(format!(
                "entry {position} equals 1 and cannot be perturbed"
            )));
        }
        self.with_entry(position, value.powf(delta))
    }

    /// `(k t12; k^2 t13; k t23)`.
    pub fn scale(&self, k: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: format!("scale factor must be finite and positive, got {k}"),
            });
        }
        Triad::new(k * self.t12, k * k * self.t13, k * self.t23)
    }

    /// `(1; a; b) -> (1; a/b; 1)`. The first entry is taken to be one and is
    /// reset to exactly one.
    pub fn hta_reduce(&self) -> Self {
        Triad {
            t12: 1.0,
            t13: self.t13 / self.t23,
            t23: 1.0,
        }
    }

    /// Reduce to `(1; r; 1)` with `r = max{x, 1/x}`, recording each step.
    pub fn canonicalize(&self) -> CanonicalForm {
        let mut trace = Vec::with_capacity(3);
        let k = 1.0 / self.t12;
        let mut current = ReductionRule::ScaleInvariance { k }.apply(self);
        trace.push(ReductionStep {
            rule: ReductionRule::ScaleInvariance { k },
            triad: current,
        });
        current = ReductionRule::HomogeneousTreatment.apply(&current);
        trace.push(ReductionStep {
            rule: ReductionRule::HomogeneousTreatment,
            triad: current,
        });
        if current.t13 < 1.0 {
            current = ReductionRule::InversionFlip.apply(&current);
            trace.push(ReductionStep {
                rule: ReductionRule::InversionFlip,
                triad: current,
            });
        }
        CanonicalForm {
            ratio: current.t13,
            trace,
        }
    }
}

impl fmt::Display for Triad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}; {})", self.t12, self.t13, self.t23)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ReductionRule {
    ScaleInvariance { k: f64 },
    HomogeneousTreatment,
    InversionFlip,
}

impl ReductionRule {
    /// Rules are total on valid triads; `k` is always `1/t12 > 0`.
    fn apply(&self, t: &Triad) -> Triad {
        match *self {
            ReductionRule::ScaleInvariance { k } => Triad {
                t12: k * t.t12,
                t13: k * k * t.t13,
                t23: k * t.t23,
            },
            ReductionRule::HomogeneousTreatment => t.hta_reduce(),
            ReductionRule::InversionFlip => t.transpose(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub rule: ReductionRule,
    pub triad: Triad,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub ratio: f64,
    pub trace: Vec<ReductionStep>,
}

impl CanonicalForm {
    pub fn canonical_triad(&self) -> Triad {
        Triad {
            t12: 1.0,
            t13: self.ratio,
            t23: 1.0,
        }
    }

    /// Re-apply the recorded rules to `input`, returning every intermediate
    /// triad. The last one is the canonical triad.
    pub fn replay(&self, input: &Triad) -> Vec<Triad> {
        let mut current = *input;
        self.trace
            .iter()
            .map(|step| {
                current = step.rule.apply(&current);
                current
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn t(a: f64, b: f64, c: f64) -> Triad {
        Triad::new(a, b, c).unwrap()
    }

    #[test]
    fn make_triad_rejects_bad_entries() {
        assert!(Triad::new(1.0, 1.0, 1.0).unwrap().is_consistent());
        assert_eq!(t(1.0, 3.0, 2.0).to_rows()[2], [1.0 / 3.0, 0.5, 1.0]);
        match Triad::new(1.0, 0.0, 2.0) {
            Err(Error::NonPositive { field, .. }) => assert_eq!(field, "t13"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Triad::new(f64::NAN, 1.0, 1.0).is_err());
        assert!(Triad::new(1.0, 1.0, f64::INFINITY).is_err());
        assert!(Triad::new(-2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn consistency_ratio_examples() {
        assert_eq!(t(2.0, 6.0, 3.0).consistency_ratio(), 1.0);
        assert_eq!(t(1.0, 3.0, 2.0).consistency_ratio(), 1.5);
        assert_eq!(t(1.0, 6.0, 4.0).consistency_ratio(), 1.5);
        assert_eq!(Triad::from_weights(6.0, 3.0, 1.0).unwrap(), t(2.0, 6.0, 3.0));
    }

    #[test]
    fn canonicalize_consistent() {
        let cf = t(2.0, 6.0, 3.0).canonicalize();
        assert_eq!(cf.ratio, 1.0);
        assert_eq!(cf.trace.len(), 2);
        assert_eq!(cf.trace[0].rule, ReductionRule::ScaleInvariance { k: 0.5 });
        assert_eq!(cf.trace[1].rule, ReductionRule::HomogeneousTreatment);
    }

    #[test]
    fn canonicalize_without_flip() {
        let cf = t(1.0, 3.0, 2.0).canonicalize();
        assert_eq!(cf.ratio, 1.5);
        let rules: Vec<_> = cf.trace.iter().map(|s| s.rule).collect();
        assert_eq!(
            rules,
            vec![
                ReductionRule::ScaleInvariance { k: 1.0 },
                ReductionRule::HomogeneousTreatment
            ]
        );
        assert_eq!(cf.trace[0].triad, t(1.0, 3.0, 2.0));
    }

    #[test]
    fn canonicalize_flips_below_one() {
        let cf = t(1.0, 1.0, 2.0).canonicalize();
        assert_eq!(cf.ratio, 2.0);
        assert_eq!(cf.trace.len(), 3);
        assert_eq!(cf.trace[1].triad, t(1.0, 0.5, 1.0));
        assert_eq!(cf.trace[2].rule, ReductionRule::InversionFlip);
        assert_eq!(*cf.replay(&t(1.0, 1.0, 2.0)).last().unwrap(), cf.canonical_triad());
    }

    #[test]
    fn power_examples() {
        let s = t(1.0, 3.0, 2.0);
        assert_eq!(s.power(1.0).unwrap(), s);
        assert_eq!(s.power(0.0).unwrap(), t(1.0, 1.0, 1.0));
        assert_eq!(s.power(2.0).unwrap(), t(1.0, 9.0, 4.0));
        assert!(s.power(f64::NAN).is_err());
    }

    #[test]
    fn perturb_examples() {
        let c = t(2.0, 6.0, 3.0);
        assert_eq!(c.perturb_entry(Entry::T13, 1.0).unwrap(), c);
        assert_eq!(c.perturb_entry(Entry::T13, 2.0).unwrap(), t(2.0, 36.0, 3.0));
        for pos in Entry::ALL {
            assert!(matches!(
                t(1.0, 1.0, 1.0).perturb_entry(pos, 2.0),
                Err(Error::Precondition(_))
            ));
        }
        assert!(matches!(
            t(1.0, 3.0, 2.0).perturb_entry(Entry::T13, 2.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn scale_examples() {
        let s = t(1.0, 3.0, 2.0);
        assert_eq!(s.scale(1.0).unwrap(), s);
        assert_eq!(t(1.0, 8.0, 4.0).scale(2.0).unwrap(), t(2.0, 32.0, 8.0));
        let scaled = s.scale(2.0).unwrap();
        assert_eq!(scaled, t(2.0, 12.0, 4.0));
        assert_relative_eq!(scaled.consistency_ratio(), 1.5, max_relative = 1e-12);
        assert!(s.scale(0.0).is_err());
        assert!(s.scale(-1.0).is_err());
    }

    #[test]
    fn serde_rejects_invalid() {
        let ok: Triad = serde_json::from_str(r#"{"t12":1,"t13":3,"t23":2}"#).unwrap();
        assert_eq!(ok, t(1.0, 3.0, 2.0));
        assert!(serde_json::from_str::<Triad>(r#"{"t12":1,"t13":0,"t23":2}"#).is_err());
    }
}
