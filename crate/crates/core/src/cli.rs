//! The `triadic` command line: argument parsing, report assembly and text
//! rendering. [`run`] is the whole program minus the process exit, so it can
//! be driven in-process by tests.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::analysis::{independence_table, ranking_concordance, ConcordanceStats, IndependenceTable};
use crate::axioms::{audit, AuditConfig, AuditReport, Axiom, Verdict, Witness, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::indices::{catalog, lookup};
use crate::io::MatrixFile;
use crate::matrix::Completion;
use crate::report::ReportDocument;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "triadic", version, about = "Triad inconsistency indices and axiom audits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate indices on a 3x3 matrix file.
    Compute(ComputeArgs),
    /// Search for axiom violations of one index.
    Audit(AuditArgs),
    /// Audit the six counterexample indices against the six independent axioms.
    Independence(SamplingArgs),
    /// Compare the rankings two indices induce on random triad pairs.
    Concordance(ConcordanceArgs),
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// JSON or CSV matrix file.
    #[arg(long, value_name = "PATH")]
    pub matrix: PathBuf,
    /// Index id; repeatable. Defaults to the whole catalog.
    #[arg(long = "index", value_name = "ID")]
    pub indices: Vec<String>,
    /// Fill the lower triangle with reciprocals of the upper one.
    #[arg(long)]
    pub complete_lower: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    /// Random probes per axiom (pairs, for concordance).
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Master seed; falls back to PCM_SEED, then 42.
    #[arg(long, env = "PCM_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(value_name = "INDEX")]
    pub index: Option<String>,
    #[arg(long = "index", value_name = "ID", conflicts_with = "index")]
    pub index_flag: Option<String>,
    /// Comma-separated axiom names, or "all".
    #[arg(long, default_value = "all")]
    pub axioms: String,
    /// Exit 1 if any axiom fails.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Args)]
pub struct ConcordanceArgs {
    #[arg(value_name = "INDEX", num_args = 0..=2)]
    pub indices: Vec<String>,
    #[arg(long = "index", value_name = "ID")]
    pub index_flags: Vec<String>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String, code: i32) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code,
        }
    }

    fn error(e: &Error) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: EXIT_USAGE,
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: EXIT_USAGE,
                }
            } else {
                Outcome::ok(text, EXIT_OK)
            };
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => cmd_compute(a),
        Command::Audit(a) => cmd_audit(a),
        Command::Independence(a) => cmd_independence(a),
        Command::Concordance(a) => cmd_concordance(a),
    };
    match result {
        Ok((stdout, code)) => Outcome::ok(stdout, code),
        Err(e) => Outcome::error(&e),
    }
}

fn config(s: &SamplingArgs) -> Result<AuditConfig> {
    let cfg = AuditConfig::default().with_samples(s.samples).with_seed(s.seed);
    cfg.validate()?;
    Ok(cfg)
}

fn emit(doc: &ReportDocument, json: bool, text: impl FnOnce() -> String) -> Result<String> {
    if json {
        doc.to_json()
    } else {
        Ok(text())
    }
}

/// Collects witnesses into the report's top-level list and hands out their positions.
#[derive(Default)]
struct Witnesses(Vec<Witness>);

impl Witnesses {
    fn add(&mut self, w: Option<&Witness>) -> Value {
        match w {
            Some(w) => {
                self.0.push(w.clone());
                json!(self.0.len() - 1)
            }
            None => Value::Null,
        }
    }
}

fn cmd_compute(a: &ComputeArgs) -> Result<(String, i32)> {
    let completion = if a.complete_lower {
        Completion::CompleteLower
    } else {
        Completion::Validate
    };
    let file = MatrixFile::read(&a.matrix, completion)?;
    let triad = file.triad()?;
    let ids: Vec<String> = if a.indices.is_empty() {
        catalog().iter().map(|d| d.id.clone()).collect()
    } else {
        a.indices.clone()
    };
    let descriptors = ids.iter().map(|id| lookup(id)).collect::<Result<Vec<_>>>()?;
    let mut values = Map::new();
    for d in &descriptors {
        values.insert(d.id.clone(), json!(d.evaluate(&triad)));
    }
    let command = json!({
        "name": "compute",
        "matrix": a.matrix.display().to_string(),
        "indices": ids,
        "complete_lower": a.complete_lower,
    });
    let results = json!({
        "triad": triad,
        "labels": file.labels,
        "consistency_ratio": triad.consistency_ratio(),
        "values": values,
    });
    let doc = ReportDocument::new(command, None, results, Vec::new());
    let out = emit(&doc, a.json, || {
        let mut s = format!("triad {triad}\n");
        let width = descriptors.iter().map(|d| d.id.len()).max().unwrap_or(0).max(5);
        let _ = writeln!(s, "{:width$}  value", "index");
        for d in &descriptors {
            let _ = writeln!(s, "{:width$}  {}", d.id, d.evaluate(&triad));
        }
        s
    })?;
    Ok((out, EXIT_OK))
}

pub fn audit_document(report: &AuditReport, strict: bool) -> ReportDocument {
    let mut witnesses = Witnesses::default();
    let verdicts: Vec<Value> = report
        .verdicts
        .iter()
        .zip(&report.profile)
        .map(|(v, p)| {
            json!({
                "axiom": v.axiom,
                "status": v.status,
                "expected": p.expected,
                "matches": p.matches,
                "samples_used": v.samples_used,
                "witness": witnesses.add(v.witness.as_ref()),
            })
        })
        .collect();
    let command = json!({
        "name": "audit",
        "index": report.index,
        "axioms": report.verdicts.iter().map(|v| v.axiom).collect::<Vec<_>>(),
        "strict": strict,
    });
    let results = json!({
        "index": report.index,
        "verdicts": verdicts,
        "all_pass": report.all_pass(),
        "profile_mismatches": report.mismatches(),
    });
    ReportDocument::new(command, Some(report.config.clone()), results, witnesses.0)
}

fn cmd_audit(a: &AuditArgs) -> Result<(String, i32)> {
    let id = a
        .index
        .as_ref()
        .or(a.index_flag.as_ref())
        .ok_or_else(|| Error::InvalidParameter {
            name: "index",
            reason: "an index id is required".into(),
        })?;
    let index = lookup(id)?;
    let axioms = Axiom::parse_list(&a.axioms)?;
    let cfg = config(&a.sampling)?;
    let report = audit(index, &axioms, &cfg)?;
    let code = if a.strict && !report.all_pass() {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    };
    let doc = audit_document(&report, a.strict);
    let out = emit(&doc, a.sampling.json, || render_audit(&report))?;
    Ok((out, code))
}

fn render_audit(report: &AuditReport) -> String {
    let cfg = &report.config;
    let mut s = format!(
        "audit of {} (samples {}, seed {})\n",
        report.index, cfg.samples, cfg.master_seed
    );
    let _ = writeln!(s, "{:<6} {:<8} {:<9} samples", "axiom", "verdict", "expected");
    for (v, p) in report.verdicts.iter().zip(&report.profile) {
        let expected = p.expected.map_or("-".to_string(), |e| e.to_string());
        let mark = if p.matches == Some(false) { "  (mismatch)" } else { "" };
        let _ = writeln!(
            s,
            "{:<6} {:<8} {:<9} {}{}",
            v.axiom.as_str(),
            v.status.to_string(),
            expected,
            v.samples_used,
            mark
        );
    }
    for w in report.verdicts.iter().filter_map(|v| v.witness.as_ref()) {
        s.push_str(&render_witness(w));
    }
    s
}

pub fn render_witness(w: &Witness) -> String {
    let transform = serde_json::to_value(&w.transform).unwrap_or(Value::Null);
    let mut s = format!("{} witness for {}: {}\n", w.axiom, w.index, transform);
    for p in &w.points {
        let _ = writeln!(s, "  {:<12} {:<40} {}", p.label, p.triad.to_string(), p.value);
    }
    let _ = writeln!(s, "  violated: {:?}", w.relation);
    s
}

pub fn independence_document(table: &IndependenceTable, cfg: &AuditConfig) -> ReportDocument {
    let mut witnesses = Witnesses::default();
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            let cells: Vec<Value> = r
                .cells
                .iter()
                .map(|c| {
                    json!({
                        "axiom": c.axiom,
                        "expected": c.expected,
                        "observed": c.observed,
                        "matches": c.matches(),
                        "witness": witnesses.add(c.witness.as_ref()),
                    })
                })
                .collect();
            json!({"index": r.index, "designated": r.designated, "cells": cells})
        })
        .collect();
    let mismatches: Vec<Value> = table
        .mismatches()
        .into_iter()
        .map(|(index, axiom)| json!({"index": index, "axiom": axiom}))
        .collect();
    let results = json!({
        "columns": table.columns,
        "rows": rows,
        "matches": table.matches(),
        "mismatches": mismatches,
    });
    ReportDocument::new(json!({"name": "independence"}), Some(cfg.clone()), results, witnesses.0)
}

fn cmd_independence(a: &SamplingArgs) -> Result<(String, i32)> {
    let cfg = config(a)?;
    let table = independence_table(&cfg)?;
    let code = if table.matches() { EXIT_OK } else { EXIT_VIOLATION };
    let doc = independence_document(&table, &cfg);
    let out = emit(&doc, a.json, || render_independence(&table, &cfg))?;
    Ok((out, code))
}

fn render_independence(table: &IndependenceTable, cfg: &AuditConfig) -> String {
    let mut s = format!(
        "independence table (samples {}, seed {})\n",
        cfg.samples, cfg.master_seed
    );
    let _ = write!(s, "{:<6}", "index");
    for a in &table.columns {
        let _ = write!(s, " {:<8}", a.as_str());
    }
    s.push('\n');
    for r in &table.rows {
        let _ = write!(s, "{:<6}", r.index);
        for c in &r.cells {
            let mut cell = c.observed.to_string();
            if c.expected == Verdict::Fail {
                cell = format!("[{cell}]");
            }
            if !c.matches() {
                cell.push('!');
            }
            let _ = write!(s, " {cell:<8}");
        }
        s.push('\n');
    }
    s.push_str("[..] designated axiom, expected to fail; ! observed differs from expected\n");
    for r in &table.rows {
        for c in &r.cells {
            if let Some(w) = &c.witness {
                s.push_str(&render_witness(w));
            }
        }
    }
    let mismatches = table.mismatches();
    if mismatches.is_empty() {
        s.push_str("pattern matches\n");
    } else {
        for (index, axiom) in mismatches {
            let _ = writeln!(s, "mismatch: {index} on {axiom}");
        }
    }
    s
}

pub fn concordance_document(stats: &ConcordanceStats, cfg: &AuditConfig) -> ReportDocument {
    let command = json!({
        "name": "concordance",
        "index_a": stats.index_a,
        "index_b": stats.index_b,
    });
    let results = serde_json::to_value(stats).expect("stats serialize");
    ReportDocument::new(command, Some(cfg.clone()), results, Vec::new())
}

fn cmd_concordance(a: &ConcordanceArgs) -> Result<(String, i32)> {
    let ids: Vec<&String> = a.indices.iter().chain(&a.index_flags).collect();
    let [ida, idb] = ids.as_slice() else {
        return Err(Error::InvalidParameter {
            name: "index",
            reason: format!("exactly two index ids are required, got {}", ids.len()),
        });
    };
    let (ia, ib) = (lookup(ida)?, lookup(idb)?);
    let cfg = config(&a.sampling)?;
    let stats = ranking_concordance(ia, ib, &cfg)?;
    let doc = concordance_document(&stats, &cfg);
    let out = emit(&doc, a.sampling.json, || {
        let tau = stats.kendall_tau_b.map_or("undefined".to_string(), |t| t.to_string());
        let mut s = format!(
            "{} vs {} over {} pairs (seed {})\n",
            stats.index_a, stats.index_b, stats.pairs, cfg.master_seed
        );
        let _ = writeln!(s, "concordant   {}", stats.concordant);
        let _ = writeln!(s, "discordant   {}", stats.discordant);
        let _ = writeln!(s, "ties {} only {}", stats.index_a, stats.ties_a_only);
        let _ = writeln!(s, "ties {} only {}", stats.index_b, stats.ties_b_only);
        let _ = writeln!(s, "ties both    {}", stats.ties_both);
        let _ = writeln!(s, "tau-b        {tau}");
        if let Some(p) = &stats.discordant_witness {
            let _ = writeln!(s, "discordant pair {} vs {}", p.s, p.t);
        }
        s
    })?;
    Ok((out, EXIT_OK))
}
