//! Subcommand bodies, each generic over the concrete cell space.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use cellspace_core::amenability::{boundary_ratio, folner_defect, Rational};
use cellspace_core::analyzer::report::CheckedWitness;
use cellspace_core::analyzer::{
    entropy_series, goe_report, pre_injectivity_oracle_1d, surjectivity_oracle_1d, verify_witness, AnalysisReport, Budgets,
    GoeWitness, Subject, Verdict,
};
use cellspace_core::automaton::SemiCellularAutomaton;
use cellspace_core::config::{RuleDescriptor, SpaceDescriptor, SpaceVisitor};
use cellspace_core::geometry;
use cellspace_core::rules;
use cellspace_core::space::{CellSet, CellSpace};
use cellspace_core::spaces::Lattice;
use cellspace_core::tiling::{greedy_tiling, interior_hits, verify_tiling};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{cell, e_of, ExperimentConfig, Params};

/// What a subcommand produced and the exit code it asks for.
pub struct Output {
    pub text: String,
    /// Secondary CSV output, written only where the command has one.
    pub csv: Option<String>,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, csv: None, code: 0 }
    }
}

fn pretty<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn rational(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn build_ca<S: CellSpace>(space: S, config: &ExperimentConfig) -> Result<SemiCellularAutomaton<S>> {
    let rule = config.rule.as_ref().context("this command needs a rule; pass --rule or set \"rule\"")?;
    Ok(rule.build(space, config.params.strict.unwrap_or(false))?)
}

// ---------------------------------------------------------------------------

pub struct GeometryCmd<'a>(pub &'a ExperimentConfig);

impl SpaceVisitor for GeometryCmd<'_> {
    type Output = Result<Output>;

    fn visit<S: CellSpace>(self, space: S) -> cellspace_core::Result<Result<Output>> {
        Ok((|| {
            let p = &self.0.params;
            let a = p.set.as_ref().context("geometry needs params.set")?.cells(&space)?;
            let e = e_of(&space, p)?;
            let g = geometry::geometry(&space, &a, &e)?;
            let part = |s: &CellSet<S::Cell>| json!({"size": s.len(), "cells": s});
            Ok(Output::ok(pretty(&json!({
                "set_size": a.len(),
                "e_size": e.len(),
                "interior": part(&g.interior),
                "closure": part(&g.closure),
                "boundary": part(&g.boundary),
            }))?))
        })())
    }
}

// ---------------------------------------------------------------------------

pub struct FolnerCmd<'a>(pub &'a ExperimentConfig);

impl SpaceVisitor for FolnerCmd<'_> {
    type Output = Result<Output>;

    fn visit<S: CellSpace>(self, space: S) -> cellspace_core::Result<Result<Output>> {
        Ok((|| {
            let p = &self.0.params;
            let e = e_of(&space, p)?;
            // one coset if given, otherwise the worst coset of E
            let cosets = match &p.coset {
                Some(v) => vec![space.iota(&cell(&space, v)?)],
                None => e.to_vec(),
            };
            let mut csv = String::from("i,size,defect,boundary_ratio\n");
            for &i in p.folner.clone().unwrap_or_else(|| "1..=16".parse().unwrap()).indices() {
                let f = space.folner_box(i)?;
                let mut defect = Rational::new(0, 1);
                for c in &cosets {
                    defect = defect.max(folner_defect(&space, &f, c)?);
                }
                let ratio = boundary_ratio(&space, &f, &e)?;
                writeln!(csv, "{i},{},{},{}", f.len(), rational(defect), rational(ratio))?;
            }
            Ok(Output::ok(csv))
        })())
    }
}

// ---------------------------------------------------------------------------

pub struct TileCmd<'a>(pub &'a ExperimentConfig);

impl SpaceVisitor for TileCmd<'_> {
    type Output = Result<Output>;

    fn visit<S: CellSpace>(self, space: S) -> cellspace_core::Result<Result<Output>> {
        Ok((|| {
            let p = &self.0.params;
            let e = e_of(&space, p)?;
            let indices = p.folner.clone().unwrap_or_else(|| "1..=16".parse().unwrap());
            let region = match &p.region {
                Some(r) => r.cells(&space)?,
                None => {
                    // the largest table window plus room for every E′-image
                    let last = *indices.indices().iter().max().expect("schedules are non-empty");
                    let reach = e.iter().map(|c| space.coset_radius(c)).max().unwrap_or(0);
                    space.margin_region(&space.folner_box(last)?, 4 * reach + 1)?
                }
            };
            let tiling = greedy_tiling(&space, &region, &e)?;
            let report = verify_tiling(&space, &tiling)?;
            let mut csv = String::from("i,size,tiles,density\n");
            let mut rows = Vec::new();
            for &i in indices.indices() {
                let f = space.folner_box(i)?;
                let hits = interior_hits(&space, &tiling, &f)?;
                let density = Rational::new(hits as u64, f.len() as u64);
                writeln!(csv, "{i},{},{hits},{}", f.len(), rational(density))?;
                rows.push(json!({"i": i, "size": f.len(), "tiles": hits, "density": rational(density)}));
            }
            let text = pretty(&json!({
                "centers": tiling.centers,
                "e_size": tiling.e.len(),
                "e_prime_size": tiling.e_prime.len(),
                "region_size": region.len(),
                "verified": report,
                "density": rows,
            }))?;
            Ok(Output {
                text,
                csv: Some(csv),
                code: if report.passed() { 0 } else { 2 },
            })
        })())
    }
}

// ---------------------------------------------------------------------------

pub struct EntropyCmd<'a>(pub &'a ExperimentConfig);

impl SpaceVisitor for EntropyCmd<'_> {
    type Output = Result<Output>;

    fn visit<S: CellSpace>(self, space: S) -> cellspace_core::Result<Result<Output>> {
        Ok((|| {
            let p = &self.0.params;
            let subject = p.subject.unwrap_or(Subject::Image);
            let ca = match (&self.0.rule, subject) {
                (None, Subject::FullShift) => rules::identity(space.clone(), p.q.unwrap_or(2))?,
                _ => build_ca(space.clone(), self.0)?,
            };
            let windows = p.windows.clone().or(p.entropy.clone()).unwrap_or_else(|| Budgets::default().entropy).windows(&space)?;
            let series = entropy_series(&ca, subject, &windows, p.entropy_mode(), p.budget())?;
            let mut csv = String::from("i,size,count,bits,status\n");
            for r in &series.rows {
                let count = r.count.map(|c| c.to_string()).unwrap_or_default();
                let bits = r.bits.map(|b| b.to_string()).unwrap_or_default();
                let status = serde_json::to_value(r.status)?;
                writeln!(csv, "{},{},{count},{bits},{}", r.index, r.size, status.as_str().unwrap_or_default())?;
            }
            Ok(Output::ok(csv))
        })())
    }
}

// ---------------------------------------------------------------------------

/// The report as JSON, with the descriptors needed to replay it stored under
/// `ca`.
pub fn report_json<C: Serialize>(report: &AnalysisReport<C>, space: &SpaceDescriptor, rule: &RuleDescriptor, strict: bool) -> Result<Value> {
    let mut v = serde_json::to_value(report)?;
    let ca = v["ca"].as_object_mut().expect("report has a ca object");
    ca.insert("space_descriptor".into(), serde_json::to_value(space)?);
    ca.insert("rule_descriptor".into(), serde_json::to_value(rule)?);
    ca.insert("strict".into(), Value::Bool(strict));
    Ok(v)
}

pub struct AnalyzeCmd<'a>(pub &'a ExperimentConfig);

impl SpaceVisitor for AnalyzeCmd<'_> {
    type Output = Result<Output>;

    fn visit<S: CellSpace>(self, space: S) -> cellspace_core::Result<Result<Output>> {
        Ok((|| {
            let c = self.0;
            let ca = build_ca(space, c)?;
            let report = goe_report(&ca, &c.params.budgets())?;
            let strict = c.params.strict.unwrap_or(false);
            let v = report_json(&report, &c.space, c.rule.as_ref().expect("checked by build_ca"), strict)?;
            Ok(Output {
                text: pretty(&v)?,
                csv: None,
                code: if report.consistency_flag { 2 } else { 0 },
            })
        })())
    }
}

/// `eca:all`: both line oracles and the full report for every elementary rule.
pub fn eca_sweep(params: &Params) -> Result<Output> {
    let budgets = params.budgets();
    let mut rows = Vec::with_capacity(256);
    let (mut surjective, mut pre_injective, mut flagged) = (0, 0, 0);
    for k in 0..=255u8 {
        let ca = rules::eca(Lattice::new(), k)?;
        let s = surjectivity_oracle_1d(&ca)?;
        let p = pre_injectivity_oracle_1d(&ca)?;
        let report = goe_report(&ca, &budgets)?;
        surjective += s as usize;
        pre_injective += p as usize;
        flagged += report.consistency_flag as usize;
        let width = |pick: fn(&GoeWitness<[i64; 1]>) -> bool| {
            report.witness.iter().find(|w| pick(&w.witness)).map(|w| w.witness.width())
        };
        rows.push(json!({
            "rule": k,
            "surjective": report.surjective,
            "pre_injective": report.pre_injective,
            "goe_width": width(|w| matches!(w, GoeWitness::GoePattern { .. })),
            "erasable_width": width(|w| matches!(w, GoeWitness::MutuallyErasable { .. })),
            "status": report.status,
        }));
    }
    let text = pretty(&json!({
        "sweep": "eca:all",
        "surjective": surjective,
        "pre_injective": pre_injective,
        "flagged": flagged,
        "budgets": budgets,
        "rules": rows,
    }))?;
    Ok(Output {
        text,
        csv: None,
        code: if flagged > 0 { 2 } else { 0 },
    })
}

// ---------------------------------------------------------------------------

pub struct VerifyCmd<'a> {
    pub report: &'a Value,
    pub recompute: bool,
}

impl SpaceVisitor for VerifyCmd<'_> {
    type Output = Result<Output>;

    fn visit<S: CellSpace>(self, space: S) -> cellspace_core::Result<Result<Output>> {
        Ok((|| {
            let v = self.report;
            let rule: RuleDescriptor = serde_json::from_value(v["ca"]["rule_descriptor"].clone()).context("report has no ca.rule_descriptor")?;
            let strict = v["ca"]["strict"].as_bool().unwrap_or(false);
            let ca = rule.build(space, strict)?;
            let budgets: Budgets = serde_json::from_value(v["budgets"].clone()).context("report has no budgets")?;
            let witnesses: Vec<CheckedWitness<S::Cell>> =
                serde_json::from_value(v["witness"].clone()).context("reading the witness list")?;
            let verdict = |key: &str| -> Result<Verdict> { Ok(serde_json::from_value(v[key].clone())?) };
            let (surjective, pre_injective) = (verdict("surjective")?, verdict("pre_injective")?);

            let mut failures = Vec::new();
            for (i, w) in witnesses.iter().enumerate() {
                let ok = verify_witness(&ca, &w.witness, budgets.patterns)?;
                if ok != w.verified {
                    failures.push(format!("witness {i}: recorded verified = {}, replay gives {ok}", w.verified));
                }
                let claimed = match w.witness {
                    GoeWitness::GoePattern { .. } => surjective,
                    GoeWitness::MutuallyErasable { .. } => pre_injective,
                };
                if ok && claimed != Verdict::No {
                    failures.push(format!("witness {i} re-verifies but the verdict is {claimed:?}"));
                }
            }
            let mut recomputed = Value::Null;
            if self.recompute {
                let fresh = goe_report(&ca, &budgets)?;
                let same = fresh.surjective == surjective
                    && fresh.pre_injective == pre_injective
                    && fresh.witness == witnesses
                    && Some(fresh.consistency_flag) == v["consistency_flag"].as_bool();
                if !same {
                    failures.push("recomputing the report gives different verdicts or witnesses".into());
                }
                recomputed = Value::Bool(same);
            }
            Ok(Output {
                text: pretty(&json!({
                    "witnesses": witnesses.len(),
                    "recomputed_matches": recomputed,
                    "passed": failures.is_empty(),
                    "failures": failures,
                }))?,
                csv: None,
                code: if failures.is_empty() { 0 } else { 2 },
            })
        })())
    }
}

pub fn verify(report: &Value, recompute: bool) -> Result<Output> {
    if report.get("sweep").is_some() {
        bail!("sweep summaries carry no witnesses; verify single-rule reports");
    }
    let space: SpaceDescriptor =
        serde_json::from_value(report["ca"]["space_descriptor"].clone()).context("report has no ca.space_descriptor")?;
    space.build(VerifyCmd { report, recompute })?
}
