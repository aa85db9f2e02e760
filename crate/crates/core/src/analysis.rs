//! Experiments built on the audit engine: the independence table of the six
//! counterexample indices, implication audits between axiom sets, ranking
//! concordance between two indices, and the characterization check against
//! the natural index.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::axioms::{
    approx_eq, audit, probe_rng, sample_triad, AuditConfig, AuditReport, Axiom, AxiomVerdict, Verdict, Witness,
};
use crate::error::{Error, Result};
use crate::indices::{lookup, IndexDescriptor};
use crate::triad::Triad;

const CONCORDANCE_STREAM: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairClass {
    Concordant,
    Discordant,
    TieAOnly,
    TieBOnly,
    TieBoth,
}

/// Classify a pair `(S, T)` by the sign pattern of `a(S) - a(T)` and `b(S) - b(T)`.
pub fn classify_pair(a: [f64; 2], b: [f64; 2], tol: f64) -> PairClass {
    let tie_a = approx_eq(a[0], a[1], tol);
    let tie_b = approx_eq(b[0], b[1], tol);
    match (tie_a, tie_b) {
        (true, true) => PairClass::TieBoth,
        (true, false) => PairClass::TieAOnly,
        (false, true) => PairClass::TieBOnly,
        (false, false) if (a[0] > a[1]) == (b[0] > b[1]) => PairClass::Concordant,
        (false, false) => PairClass::Discordant,
    }
}

/// Tie-adjusted Kendall tau from pair counts; `None` when either index is
/// tied on every pair.
pub fn kendall_tau_b(concordant: u64, discordant: u64, ties_a_only: u64, ties_b_only: u64) -> Option<f64> {
    let strict = (concordant + discordant) as f64;
    let untied_a = strict + ties_b_only as f64;
    let untied_b = strict + ties_a_only as f64;
    let denom = (untied_a * untied_b).sqrt();
    (denom > 0.0).then(|| (concordant as f64 - discordant as f64) / denom)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairWitness {
    pub s: Triad,
    pub t: Triad,
    pub a: [f64; 2],
    pub b: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcordanceStats {
    pub index_a: String,
    pub index_b: String,
    pub pairs: u64,
    pub concordant: u64,
    pub discordant: u64,
    pub ties_a_only: u64,
    pub ties_b_only: u64,
    pub ties_both: u64,
    pub kendall_tau_b: Option<f64>,
    /// First discordant pair in sampling order.
    pub discordant_witness: Option<PairWitness>,
    /// First pair tied under exactly one of the two indices.
    pub one_sided_tie_witness: Option<PairWitness>,
}

impl ConcordanceStats {
    pub fn from_pairs(index_a: &str, index_b: &str, pairs: &[PairWitness], tol: f64) -> Self {
        let mut stats = ConcordanceStats {
            index_a: index_a.to_string(),
            index_b: index_b.to_string(),
            pairs: pairs.len() as u64,
            concordant: 0,
            discordant: 0,
            ties_a_only: 0,
            ties_b_only: 0,
            ties_both: 0,
            kendall_tau_b: None,
            discordant_witness: None,
            one_sided_tie_witness: None,
        };
        for p in pairs {
            match classify_pair(p.a, p.b, tol) {
                PairClass::Concordant => stats.concordant += 1,
                PairClass::Discordant => {
                    stats.discordant += 1;
                    stats.discordant_witness.get_or_insert_with(|| p.clone());
                }
                PairClass::TieAOnly => {
                    stats.ties_a_only += 1;
                    stats.one_sided_tie_witness.get_or_insert_with(|| p.clone());
                }
                PairClass::TieBOnly => {
                    stats.ties_b_only += 1;
                    stats.one_sided_tie_witness.get_or_insert_with(|| p.clone());
                }
                PairClass::TieBoth => stats.ties_both += 1,
            }
        }
        stats.kendall_tau_b = kendall_tau_b(stats.concordant, stats.discordant, stats.ties_a_only, stats.ties_b_only);
        stats
    }

    /// No discordant pair and no tie that only one index sees.
    pub fn order_equivalent(&self) -> bool {
        self.discordant == 0 && self.ties_a_only == 0 && self.ties_b_only == 0
    }
}

/// Compare the orders two indices induce on `cfg.samples` random triad pairs.
pub fn ranking_concordance(a: &IndexDescriptor, b: &IndexDescriptor, cfg: &AuditConfig) -> Result<ConcordanceStats> {
    cfg.validate()?;
    let pairs: Vec<PairWitness> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = probe_rng(cfg.master_seed, CONCORDANCE_STREAM, i as u64);
            let s = sample_triad(&mut rng, cfg.entry_range);
            let t = sample_triad(&mut rng, cfg.entry_range);
            PairWitness {
                s,
                t,
                a: [a.evaluate(&s), a.evaluate(&t)],
                b: [b.evaluate(&s), b.evaluate(&t)],
            }
        })
        .collect();
    Ok(ConcordanceStats::from_pairs(&a.id, &b.id, &pairs, cfg.tolerance))
}

/// Columns of the independence table, in the order of the counterexamples.
pub const INDEPENDENCE_AXIOMS: [Axiom; 6] = [Axiom::Urs, Axiom::Msc, Axiom::Con, Axiom::Iip, Axiom::Hta, Axiom::Si];

/// Counterexample index `cx{i+1}` is built to violate `INDEPENDENCE_AXIOMS[i]` only.
pub const COUNTEREXAMPLES: [&str; 6] = ["cx1", "cx2", "cx3", "cx4", "cx5", "cx6"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceCell {
    pub axiom: Axiom,
    pub expected: Verdict,
    pub observed: Verdict,
    pub witness: Option<Witness>,
}

impl IndependenceCell {
    pub fn matches(&self) -> bool {
        self.expected == self.observed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceRow {
    pub index: String,
    pub designated: Axiom,
    pub cells: Vec<IndependenceCell>,
}

impl IndependenceRow {
    pub fn cell(&self, axiom: Axiom) -> Option<&IndependenceCell> {
        self.cells.iter().find(|c| c.axiom == axiom)
    }

    pub fn matches(&self) -> bool {
        self.cells.iter().all(IndependenceCell::matches)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceTable {
    pub columns: Vec<Axiom>,
    pub rows: Vec<IndependenceRow>,
}

impl IndependenceTable {
    pub fn row(&self, index: &str) -> Option<&IndependenceRow> {
        self.rows.iter().find(|r| r.index == index)
    }

    pub fn matches(&self) -> bool {
        self.rows.iter().all(IndependenceRow::matches)
    }

    /// `(index, axiom)` for every cell whose observation differs from the expected pattern.
    pub fn mismatches(&self) -> Vec<(String, Axiom)> {
        self.rows
            .iter()
            .flat_map(|r| {
                r.cells
                    .iter()
                    .filter(|c| !c.matches())
                    .map(move |c| (r.index.clone(), c.axiom))
            })
            .collect()
    }
}

pub fn independence_table(cfg: &AuditConfig) -> Result<IndependenceTable> {
    let rows = COUNTEREXAMPLES
        .par_iter()
        .zip(INDEPENDENCE_AXIOMS.par_iter())
        .map(|(&id, &designated)| {
            let report = audit(lookup(id)?, &INDEPENDENCE_AXIOMS, cfg)?;
            let cells = INDEPENDENCE_AXIOMS
                .iter()
                .map(|&axiom| {
                    let v = report.verdict(axiom).expect("audited axiom");
                    IndependenceCell {
                        axiom,
                        expected: if axiom == designated {
                            Verdict::Fail
                        } else {
                            Verdict::Pass
                        },
                        observed: v.status,
                        witness: v.witness.clone(),
                    }
                })
                .collect();
            Ok(IndependenceRow {
                index: id.to_string(),
                designated,
                cells,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IndependenceTable {
        columns: INDEPENDENCE_AXIOMS.to_vec(),
        rows,
    })
}

/// An implication between axioms that holds on triads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Implication {
    pub premises: &'static [Axiom],
    pub conclusion: Axiom,
}

pub const IMPLICATIONS: [Implication; 3] = [
    Implication {
        premises: &[Axiom::Iip, Axiom::Hta, Axiom::Si],
        conclusion: Axiom::Ipa,
    },
    Implication {
        premises: &[Axiom::Urs, Axiom::Msc, Axiom::Iip, Axiom::Hta, Axiom::Si],
        conclusion: Axiom::Mrp,
    },
    Implication {
        premises: &[Axiom::Smsc, Axiom::Con, Axiom::Hta, Axiom::Si],
        conclusion: Axiom::Urs,
    },
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImplicationOutcome {
    ConsistentWithLemma,
    CounterexampleToLemma,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImplicationVerdict {
    pub index: String,
    pub premises: Vec<AxiomVerdict>,
    pub conclusion: AxiomVerdict,
    pub outcome: ImplicationOutcome,
    /// Some premise failed, so the implication says nothing about this index.
    pub vacuous: bool,
}

pub fn implication_audit(
    premises: &[Axiom],
    conclusion: Axiom,
    index: &IndexDescriptor,
    cfg: &AuditConfig,
) -> Result<ImplicationVerdict> {
    if premises.is_empty() {
        return Err(Error::InvalidParameter {
            name: "premises",
            reason: "at least one premise is required".into(),
        });
    }
    if premises.contains(&conclusion) {
        return Err(Error::InvalidParameter {
            name: "conclusion",
            reason: format!("{conclusion} is also a premise"),
        });
    }
    let mut axioms = premises.to_vec();
    axioms.push(conclusion);
    let report = audit(index, &axioms, cfg)?;
    let mut premise_verdicts = Vec::new();
    let mut conclusion_verdict = None;
    for v in report.verdicts {
        if v.axiom == conclusion {
            conclusion_verdict = Some(v);
        } else {
            premise_verdicts.push(v);
        }
    }
    let conclusion = conclusion_verdict.expect("conclusion was audited");
    let vacuous = premise_verdicts.iter().any(|v| v.status == Verdict::Fail);
    let outcome = if !vacuous && conclusion.status == Verdict::Fail {
        ImplicationOutcome::CounterexampleToLemma
    } else {
        ImplicationOutcome::ConsistentWithLemma
    };
    Ok(ImplicationVerdict {
        index: index.id.clone(),
        premises: premise_verdicts,
        conclusion,
        outcome,
        vacuous,
    })
}

/// Axioms that pin down the natural index's ranking.
pub const CHARACTERIZING_AXIOMS: [Axiom; 4] = [Axiom::Iip, Axiom::Hta, Axiom::Si, Axiom::Smsc];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CharacterizationStatus {
    OrderEquivalent,
    NotOrderEquivalent,
    PremisesNotMet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Characterization {
    pub index: String,
    pub status: CharacterizationStatus,
    pub failed_premises: Vec<Axiom>,
    pub audit: AuditReport,
    pub concordance: Option<ConcordanceStats>,
}

pub fn characterization_check(index: &IndexDescriptor, cfg: &AuditConfig) -> Result<Characterization> {
    let report = audit(index, &CHARACTERIZING_AXIOMS, cfg)?;
    let failed = report.failed();
    if !failed.is_empty() {
        return Ok(Characterization {
            index: index.id.clone(),
            status: CharacterizationStatus::PremisesNotMet,
            failed_premises: failed,
            audit: report,
            concordance: None,
        });
    }
    let stats = ranking_concordance(index, lookup("natural")?, cfg)?;
    let status = if stats.order_equivalent() {
        CharacterizationStatus::OrderEquivalent
    } else {
        CharacterizationStatus::NotOrderEquivalent
    };
    Ok(Characterization {
        index: index.id.clone(),
        status,
        failed_premises: Vec::new(),
        audit: report,
        concordance: Some(stats),
    })
}
