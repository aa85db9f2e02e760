//! Triad inconsistency indices and the catalog that names them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::axioms::{Axiom, Verdict};
use crate::error::{Error, Result};
use crate::triad::Triad;

/// `max{x, 1/x}` with `x = t13 / (t12 t23)`.
pub fn natural_index(t: &Triad) -> f64 {
    let x = t.consistency_ratio();
    x.max(1.0 / x)
}

/// Sum of the distances of all six off-diagonal entries from the values
/// that would make the triad consistent. Depends on the scale of the entries.
pub fn scale_dependent_index(t: &Triad) -> f64 {
    let (a, b, c) = (t.t12(), t.t13(), t.t23());
    (b - a * c).abs()
        + (1.0 / b - 1.0 / (a * c)).abs()
        + (a - b / c).abs()
        + (1.0 / a - c / b).abs()
        + (c - b / a).abs()
        + (1.0 / c - a / b).abs()
}

/// Koczkodaj's index restricted to a single triad.
pub fn koczkodaj_index(t: &Triad) -> f64 {
    let x = t.consistency_ratio();
    (1.0 - x).abs().min((1.0 - 1.0 / x).abs())
}

/// Principal eigenvalue of the triad's 3x3 matrix, `1 + x^(1/3) + x^(-1/3)`.
pub fn saaty_lambda_max(t: &Triad) -> f64 {
    let c = t.consistency_ratio().cbrt();
    1.0 + c + 1.0 / c
}

/// Saaty's consistency index `(lambda_max - 3) / 2`, evaluated as
/// `(c - 1)^2 / (2c)` with `c = x^(1/3)` so that it stays accurate near zero.
pub fn saaty_ci(t: &Triad) -> f64 {
    let c = t.consistency_ratio().cbrt();
    (c - 1.0) * (c - 1.0) / (2.0 * c)
}

fn constant_zero(_: &Triad) -> f64 {
    0.0
}

fn inverse_natural(t: &Triad) -> f64 {
    -natural_index(t)
}

fn discontinuous_natural(t: &Triad) -> f64 {
    if t.is_consistent() {
        0.0
    } else {
        natural_index(t) + 1.0
    }
}

fn upper_ratio(t: &Triad) -> f64 {
    t.consistency_ratio()
}

fn weighted_natural(t: &Triad) -> f64 {
    let r = t.t12() / t.t23();
    (r + 1.0 / r) * (natural_index(t) - 1.0)
}

fn two_entry_deviation(t: &Triad) -> f64 {
    (t.t12() - t.t13() / t.t23()).abs() + (1.0 / t.t12() - t.t23() / t.t13()).abs()
}

fn discretised_natural(t: &Triad) -> f64 {
    natural_index(t).min(2.0)
}

pub type IndexFn = Arc<dyn Fn(&Triad) -> f64 + Send + Sync>;

/// A named index together with the axiom profile it is expected to show.
#[derive(Clone)]
pub struct IndexDescriptor {
    pub id: String,
    pub label: String,
    pub expected_profile: BTreeMap<Axiom, Verdict>,
    evaluate: IndexFn,
}

impl IndexDescriptor {
    pub fn new(
        id: impl Into<String>,
        label: impl Into<String>,
        expected_profile: BTreeMap<Axiom, Verdict>,
        evaluate: impl Fn(&Triad) -> f64 + Send + Sync + 'static,
    ) -> Self {
        IndexDescriptor {
            id: id.into(),
            label: label.into(),
            expected_profile,
            evaluate: Arc::new(evaluate),
        }
    }

    /// A descriptor with no expectations, for ad-hoc indices.
    pub fn custom(id: impl Into<String>, evaluate: impl Fn(&Triad) -> f64 + Send + Sync + 'static) -> Self {
        let id = id.into();
        Self::new(id.clone(), id, BTreeMap::new(), evaluate)
    }

    pub fn evaluate(&self, t: &Triad) -> f64 {
        (self.evaluate)(t)
    }

    pub fn expected(&self, axiom: Axiom) -> Option<Verdict> {
        self.expected_profile.get(&axiom).copied()
    }
}

impl fmt::Debug for IndexDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndexDescriptor")
            .field("id", &self.id)
            .field("label", &self.label)
            .field("expected_profile", &self.expected_profile)
            .finish_non_exhaustive()
    }
}

/// Profile with every axiom passing except `fails`.
fn profile_failing(fails: &[Axiom]) -> BTreeMap<Axiom, Verdict> {
    Axiom::ALL
        .iter()
        .map(|&a| {
            let v = if fails.contains(&a) {
                Verdict::Fail
            } else {
                Verdict::Pass
            };
            (a, v)
        })
        .collect()
}

fn build_catalog() -> Vec<IndexDescriptor> {
    use Axiom::*;
    let entry = |id: &str, label: &str, fails: &[Axiom], f: fn(&Triad) -> f64| {
        IndexDescriptor::new(id, label, profile_failing(fails), f)
    };
    vec![
        entry("natural", "natural triad inconsistency index", &[], natural_index),
        entry(
            "scale_dependent",
            "scale-dependent triad inconsistency index",
            &[Hta, Si],
            scale_dependent_index,
        ),
        entry("koczkodaj", "Koczkodaj inconsistency index", &[], koczkodaj_index),
        entry("saaty_ci", "Saaty consistency index (triad closed form)", &[], saaty_ci),
        entry("cx1", "constant zero index", &[Urs, Smsc], constant_zero),
        entry("cx2", "inverse natural triad index", &[Mrp, Msc, Smsc], inverse_natural),
        entry(
            "cx3",
            "natural index with a jump at consistency",
            &[Con],
            discontinuous_natural,
        ),
        // Expected to pass MSC and SMSC as published; the engine disagrees.
        entry("cx4", "upper-triangle consistency ratio", &[Ipa, Mrp, Iip], upper_ratio),
        entry(
            "cx5",
            "natural index weighted by t12/t23",
            &[Ipa, Hta],
            weighted_natural,
        ),
        entry("cx6", "two-entry deviation index", &[Ipa, Si], two_entry_deviation),
        entry("flat", "flat triad inconsistency index", &[Urs, Smsc], constant_zero),
        entry(
            "discretised_natural",
            "natural index capped at 2",
            &[Smsc],
            discretised_natural,
        ),
    ]
}

/// The immutable catalog of every built-in index, in a fixed order.
pub fn catalog() -> &'static [IndexDescriptor] {
    static CATALOG: OnceLock<Vec<IndexDescriptor>> = OnceLock::new();
    CATALOG.get_or_init(build_catalog)
}

pub fn index_ids() -> Vec<String> {
    catalog().iter().map(|d| d.id.clone()).collect()
}

pub fn lookup(id: &str) -> Result<&'static IndexDescriptor> {
    catalog()
        .iter()
        .find(|d| d.id == id)
        .ok_or_else(|| Error::UnknownIndex {
            id: id.to_string(),
            valid: index_ids(),
        })
}

pub fn eval_catalog(id: &str, t: &Triad) -> Result<f64> {
    Ok(lookup(id)?.evaluate(t))
}
