//! Falsification engine for the nine triad axioms.
//!
//! Each check runs a fixed list of anchor probes (hand-picked triads) and then
//! `samples` seeded random probes, stopping at the first violation in probe
//! order. A pass means no violation was found at the given configuration.

mod checks;
pub mod sampling;
pub mod witness;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indices::IndexDescriptor;

pub use sampling::{probe_rng, sample_consistent_triad, sample_triad, EntryRange};
pub use witness::{Relation, Transform, Witness, WitnessPoint};

/// Width of the equality band around two values: `tol * max(1, |a|, |b|)`.
pub fn band(tol: f64, a: f64, b: f64) -> f64 {
    tol * 1f64.max(a.abs()).max(b.abs())
}

pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= band(tol, a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axiom {
    /// Unique representation of consistency.
    #[serde(rename = "URS")]
    Urs,
    /// Invariance under permutation of alternatives.
    #[serde(rename = "IPA")]
    Ipa,
    /// Monotonicity under reciprocity-preserving mapping.
    #[serde(rename = "MRP")]
    Mrp,
    /// Monotonicity on single comparisons.
    #[serde(rename = "MSC")]
    Msc,
    /// Continuity.
    #[serde(rename = "CON")]
    Con,
    /// Invariance under inversion of preferences.
    #[serde(rename = "IIP")]
    Iip,
    /// Homogeneous treatment of alternatives.
    #[serde(rename = "HTA")]
    Hta,
    /// Scale invariance.
    #[serde(rename = "SI")]
    Si,
    /// Strong monotonicity on single comparisons.
    #[serde(rename = "SMSC")]
    Smsc,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::Urs,
        Axiom::Ipa,
        Axiom::Mrp,
        Axiom::Msc,
        Axiom::Con,
        Axiom::Iip,
        Axiom::Hta,
        Axiom::Si,
        Axiom::Smsc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Axiom::Urs => "URS",
            Axiom::Ipa => "IPA",
            Axiom::Mrp => "MRP",
            Axiom::Msc => "MSC",
            Axiom::Con => "CON",
            Axiom::Iip => "IIP",
            Axiom::Hta => "HTA",
            Axiom::Si => "SI",
            Axiom::Smsc => "SMSC",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Axiom::Urs => "unique value representing consistency",
            Axiom::Ipa => "invariance under permutation of alternatives",
            Axiom::Mrp => "monotonicity under reciprocity-preserving mapping",
            Axiom::Msc => "monotonicity on single comparisons",
            Axiom::Con => "continuity",
            Axiom::Iip => "invariance under inversion of preferences",
            Axiom::Hta => "homogeneous treatment of alternatives",
            Axiom::Si => "scale invariance",
            Axiom::Smsc => "strong monotonicity on single comparisons",
        }
    }

    /// Random stream id; distinct per axiom so probe sets do not overlap.
    pub(crate) fn stream(self) -> u64 {
        1 + Axiom::ALL.iter().position(|&a| a == self).unwrap() as u64
    }

    /// Parse `"all"` or a comma-separated list into a sorted, deduplicated set.
    pub fn parse_list(list: &str) -> Result<Vec<Axiom>> {
        if list.trim().eq_ignore_ascii_case("all") {
            return Ok(Axiom::ALL.to_vec());
        }
        let mut out = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(Axiom::from_str)
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(Error::InvalidParameter {
                name: "axioms",
                reason: "empty axiom list".into(),
            });
        }
        Ok(out)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axiom::ALL
            .iter()
            .copied()
            .find(|a| a.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownAxiom {
                name: s.to_string(),
                valid: Axiom::ALL.iter().map(|a| a.as_str().to_string()).collect(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub samples: usize,
    pub master_seed: u64,
    pub entry_range: EntryRange,
    pub tolerance: f64,
    pub b_grid: Vec<f64>,
    pub delta_grid: Vec<f64>,
    pub k_grid: Vec<f64>,
    pub continuity_ladder: Vec<f64>,
    /// Single-comparison probes only perturb entries with `|ln a_ij|` at least this large.
    pub entry_margin: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        let grid = vec![0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0];
        AuditConfig {
            samples: 1000,
            master_seed: DEFAULT_SEED,
            entry_range: EntryRange::default(),
            tolerance: 1e-9,
            b_grid: grid.clone(),
            delta_grid: grid,
            k_grid: vec![0.1, 1.0 / 3.0, 0.5, 2.0, 3.0, 10.0],
            continuity_ladder: (1..=8).map(|e| 10f64.powi(-e)).collect(),
            entry_margin: 0.05,
        }
    }
}

impl AuditConfig {
    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |name, reason: &str| {
            Err(Error::InvalidParameter {
                name,
                reason: reason.to_string(),
            })
        };
        if self.samples == 0 {
            return invalid("samples", "must be at least 1");
        }
        self.entry_range.validate()?;
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return invalid("tolerance", "must be finite and positive");
        }
        if self.b_grid.is_empty() || self.b_grid.iter().any(|b| !b.is_finite()) {
            return invalid("b_grid", "must be a non-empty list of finite exponents");
        }
        if self.delta_grid.is_empty() || self.delta_grid.iter().any(|d| !d.is_finite()) {
            return invalid("delta_grid", "must be a non-empty list of finite exponents");
        }
        if self.k_grid.is_empty() || self.k_grid.iter().any(|k| !(k.is_finite() && *k > 0.0)) {
            return invalid("k_grid", "must be a non-empty list of positive factors");
        }
        if self.continuity_ladder.len() < 2
            || self
                .continuity_ladder
                .iter()
                .any(|e| !(e.is_finite() && *e > 0.0 && *e < 1.0))
        {
            return invalid("continuity_ladder", "needs at least two magnitudes in (0, 1)");
        }
        if !(self.entry_margin.is_finite() && self.entry_margin > 0.0) {
            return invalid("entry_margin", "must be finite and positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub status: Verdict,
    pub witness: Option<Witness>,
    /// Random probes evaluated; zero when an anchor probe already failed.
    pub samples_used: usize,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileComparison {
    pub axiom: Axiom,
    pub expected: Option<Verdict>,
    pub observed: Verdict,
    pub matches: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub index: String,
    pub config: AuditConfig,
    pub verdicts: Vec<AxiomVerdict>,
    pub profile: Vec<ProfileComparison>,
}

impl AuditReport {
    pub fn verdict(&self, axiom: Axiom) -> Option<&AxiomVerdict> {
        self.verdicts.iter().find(|v| v.axiom == axiom)
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.status == Verdict::Pass)
    }

    pub fn failed(&self) -> Vec<Axiom> {
        self.verdicts
            .iter()
            .filter(|v| v.status == Verdict::Fail)
            .map(|v| v.axiom)
            .collect()
    }

    /// Axioms whose observed verdict differs from the expected profile.
    pub fn mismatches(&self) -> Vec<Axiom> {
        self.profile
            .iter()
            .filter(|p| p.matches == Some(false))
            .map(|p| p.axiom)
            .collect()
    }
}

pub fn check_axiom(index: &IndexDescriptor, axiom: Axiom, cfg: &AuditConfig) -> Result<AxiomVerdict> {
    cfg.validate()?;
    let outcome = checks::run(index, axiom, cfg);
    Ok(AxiomVerdict {
        axiom,
        status: if outcome.witness.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        },
        witness: outcome.witness,
        samples_used: outcome.samples_used,
        master_seed: cfg.master_seed,
    })
}

pub fn audit(index: &IndexDescriptor, axioms: &[Axiom], cfg: &AuditConfig) -> Result<AuditReport> {
    if axioms.is_empty() {
        return Err(Error::InvalidParameter {
            name: "axioms",
            reason: "empty axiom set".into(),
        });
    }
    cfg.validate()?;
    let mut set = axioms.to_vec();
    set.sort();
    set.dedup();
    let verdicts = set
        .par_iter()
        .map(|&a| check_axiom(index, a, cfg))
        .collect::<Result<Vec<_>>>()?;
    let profile = verdicts
        .iter()
        .map(|v| {
            let expected = index.expected(v.axiom);
            ProfileComparison {
                axiom: v.axiom,
                expected,
                observed: v.status,
                matches: expected.map(|e| e == v.status),
            }
        })
        .collect();
    Ok(AuditReport {
        index: index.id.clone(),
        config: cfg.clone(),
        verdicts,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axiom_names_round_trip() {
        for a in Axiom::ALL {
            assert_eq!(a.as_str().parse::<Axiom>().unwrap(), a);
            assert_eq!(a.as_str().to_lowercase().parse::<Axiom>().unwrap(), a);
        }
        assert!(matches!("XYZ".parse::<Axiom>(), Err(Error::UnknownAxiom { .. })));
        assert_eq!(Axiom::parse_list("all").unwrap().len(), 9);
        assert_eq!(Axiom::parse_list("si, URS,si").unwrap(), vec![Axiom::Urs, Axiom::Si]);
        assert!(Axiom::parse_list("SI,bogus").is_err());
        assert!(Axiom::parse_list(" , ").is_err());
    }

    #[test]
    fn band_has_unit_floor() {
        assert_eq!(band(1e-9, 0.0, 0.0), 1e-9);
        assert_eq!(band(1e-9, -4.0, 2.0), 4e-9);
        assert!(approx_eq(1.0, 1.0 + 5e-10, 1e-9));
        assert!(!approx_eq(0.0, 2e-9, 1e-9));
    }

    #[test]
    fn config_validation() {
        assert!(AuditConfig::default().validate().is_ok());
        assert!(AuditConfig::default().with_samples(0).validate().is_err());
        let mut cfg = AuditConfig::default();
        cfg.tolerance = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = AuditConfig::default();
        cfg.k_grid = vec![2.0, -1.0];
        assert!(cfg.validate().is_err());
        let mut cfg = AuditConfig::default();
        cfg.continuity_ladder = vec![0.1];
        assert!(cfg.validate().is_err());
        let mut cfg = AuditConfig::default();
        cfg.entry_range = EntryRange { lo: 3.0, hi: 2.0 };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn default_grids() {
        let cfg = AuditConfig::default();
        assert_eq!(cfg.continuity_ladder.first(), Some(&0.1));
        assert_eq!(cfg.continuity_ladder.len(), 8);
        assert!((cfg.continuity_ladder[7] - 1e-8).abs() < 1e-20);
        assert_eq!(cfg.master_seed, 42);
    }
}
