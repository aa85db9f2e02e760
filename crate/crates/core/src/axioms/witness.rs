//! Replayable counterexamples.

use serde::{Deserialize, Serialize};

use super::{approx_eq, band, Axiom};
use crate::error::{Error, Result};
use crate::indices::IndexDescriptor;
use crate::matrix::Permutation;
use crate::triad::{Entry, Triad};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessPoint {
    pub label: String,
    pub triad: Triad,
    pub value: f64,
}

/// How the points of a witness were obtained from its first point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transform {
    /// Independent points compared against a reference (no derivation).
    Reference,
    Permutation {
        perm: Permutation,
    },
    Transpose,
    Power {
        b: f64,
    },
    /// Points: base, base with `position` raised to `from_delta`, then to `to_delta`.
    SingleEntry {
        position: Entry,
        from_delta: f64,
        to_delta: f64,
    },
    Scale {
        k: f64,
    },
    Hta,
    /// Points: base, entry multiplied by `(1 + coarse)^direction`, then by `(1 + fine)^direction`.
    Continuity {
        position: Entry,
        coarse: f64,
        fine: f64,
        direction: i8,
    },
}

impl Transform {
    /// The full point list implied by `base`, or `None` when the points are
    /// not derived from one another.
    pub fn derive(&self, base: &Triad) -> Result<Option<Vec<Triad>>> {
        let derived = match self {
            Transform::Reference => return Ok(None),
            Transform::Permutation { perm } => vec![*base, base.permuted(perm)?],
            Transform::Transpose => vec![*base, base.transpose()],
            Transform::Power { b } => vec![*base, base.power(*b)?],
            Transform::SingleEntry {
                position,
                from_delta,
                to_delta,
            } => vec![
                *base,
                base.perturb_entry(*position, *from_delta)?,
                base.perturb_entry(*position, *to_delta)?,
            ],
            Transform::Scale { k } => vec![*base, base.scale(*k)?],
            Transform::Hta => vec![*base, base.hta_reduce()],
            Transform::Continuity {
                position,
                coarse,
                fine,
                direction,
            } => {
                let nudge = |eps: f64| {
                    let factor = (1.0 + eps).powi(i32::from(*direction));
                    base.with_entry(*position, base.entry(*position) * factor)
                };
                vec![*base, nudge(*coarse)?, nudge(*fine)?]
            }
        };
        Ok(Some(derived))
    }
}

/// A comparison between witness values, indexed into `points`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Relation {
    /// The two values differ by more than the tolerance band.
    Differs { a: usize, b: usize },
    /// The two values agree to within `tol * max(|a|, |b|)`. Unlike the other
    /// relations there is no unit floor, so a small but nonzero value never
    /// coincides with zero.
    Coincides { a: usize, b: usize },
    /// `value[a] < value[b]` by more than the band.
    Less { a: usize, b: usize },
    /// `value[a] <= value[b] + band`: no strict increase from `b` to `a`.
    NotGreater { a: usize, b: usize },
    /// `|value[fine] - value[base]|` exceeds both the band and half of
    /// `|value[coarse] - value[base]|`.
    JumpPersists { base: usize, coarse: usize, fine: usize },
}

impl Relation {
    pub fn holds(&self, values: &[f64], tol: f64) -> bool {
        match *self {
            Relation::Differs { a, b } => !approx_eq(values[a], values[b], tol),
            Relation::Coincides { a, b } => (values[a] - values[b]).abs() <= tol * values[a].abs().max(values[b].abs()),
            Relation::Less { a, b } => values[a] < values[b] - band(tol, values[a], values[b]),
            Relation::NotGreater { a, b } => values[a] <= values[b] + band(tol, values[a], values[b]),
            Relation::JumpPersists { base, coarse, fine } => {
                let (v0, vc, vf) = (values[base], values[coarse], values[fine]);
                let jump = (vf - v0).abs();
                jump > band(tol, vf, v0) && jump > 0.5 * (vc - v0).abs()
            }
        }
    }

    fn max_point(&self) -> usize {
        match *self {
            Relation::Differs { a, b }
            | Relation::Coincides { a, b }
            | Relation::Less { a, b }
            | Relation::NotGreater { a, b } => a.max(b),
            Relation::JumpPersists { base, coarse, fine } => base.max(coarse).max(fine),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub axiom: Axiom,
    pub index: String,
    pub transform: Transform,
    pub points: Vec<WitnessPoint>,
    pub relation: Relation,
    pub tolerance: f64,
}

impl Witness {
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    /// Re-derive the points, re-evaluate `index` on them and re-check the
    /// violated relation. No randomness is involved.
    pub fn replay(&self, index: &IndexDescriptor) -> Result<()> {
        let fail = |msg: String| Err(Error::Replay(msg));
        if self.points.is_empty() || self.relation.max_point() >= self.points.len() {
            return fail("relation refers to a missing point".into());
        }
        if let Some(derived) = self.transform.derive(&self.points[0].triad)? {
            if derived.len() != self.points.len() {
                return fail(format!(
                    "transform yields {} points, witness has {}",
                    derived.len(),
                    self.points.len()
                ));
            }
            for (p, d) in self.points.iter().zip(&derived) {
                if p.triad != *d {
                    return fail(format!("point '{}' is {} but re-derives to {}", p.label, p.triad, d));
                }
            }
        }
        let values: Vec<f64> = self.points.iter().map(|p| index.evaluate(&p.triad)).collect();
        for (p, v) in self.points.iter().zip(&values) {
            if p.value.to_bits() != v.to_bits() {
                return fail(format!(
                    "point '{}' recorded {} but evaluates to {}",
                    p.label, p.value, v
                ));
            }
        }
        if !self.relation.holds(&values, self.tolerance) {
            return fail(format!("relation {:?} does not hold for {:?}", self.relation, values));
        }
        Ok(())
    }
}
