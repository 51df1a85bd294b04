use std::fmt::Write as _;

use anyhow::Result;
use serde::Serialize;
use ternary_kloosterman::congruence::{verify_sweep, Sweep, VerifyReport};
use ternary_kloosterman::kloosterman::{kloosterman_all_fast, kloosterman_all_naive, value_coverage, CoverageReport};
use ternary_kloosterman::traces::ProfileTable;

use super::{field_line, reason};
use crate::cli::{Format, ModTarget, VerifyArgs};
use crate::{warn, Session, Status};

#[derive(Debug, Serialize)]
struct ProfileCoverage {
    /// Distinct `(Tr, tauX, tauY)` triples over the field.
    attained: usize,
    possible: usize,
}

#[derive(Debug, Serialize)]
struct CrossCheck {
    elements: usize,
    disagreements: usize,
    first_disagreement: Option<usize>,
}

#[derive(Debug, Serialize)]
struct VerifyDoc {
    seed: String,
    n: usize,
    field_modulus: String,
    reports: Vec<VerifyReport>,
    profile_coverage: ProfileCoverage,
    value_coverage: CoverageReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_check: Option<CrossCheck>,
}

/// Sweeps to run, in canonical order. Explicitly requested sweeps that do
/// not apply at this degree are usage errors; under `all` they are skipped.
fn resolve(n: usize, targets: &[ModTarget]) -> Result<Vec<Sweep>> {
    let mut sweeps = Vec::new();
    for t in targets {
        match *t {
            ModTarget::All => {
                for s in Sweep::ALL {
                    match s.check_degree(n) {
                        Ok(()) => sweeps.push(s),
                        Err(e) => warn(format!("skipping {s}: {}", reason(&e))),
                    }
                }
            }
            ModTarget::Modulus(m) => {
                let s = Sweep::from_modulus(m).expect("moduli are validated at parse time");
                s.check_degree(n)?;
                sweeps.push(s);
            }
        }
    }
    sweeps.sort_by_key(|s| Sweep::ALL.iter().position(|x| x == s));
    sweeps.dedup();
    Ok(sweeps)
}

fn text_report(s: &Session, doc: &VerifyDoc, passed: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "seed: {}", doc.seed);
    let _ = writeln!(out, "field: {}", field_line(&s.field));
    for r in &doc.reports {
        let _ = write!(
            out,
            "  {:<16} {:>6} checked {:>6} mismatches {:>10.2} ms",
            r.check.name(),
            r.total,
            r.mismatches,
            r.elapsed.as_secs_f64() * 1e3
        );
        if let Some(c) = &r.first_counterexample {
            let _ =
                write!(out, "  first: a = {} ({}) predicted {} actual {}", c.index, c.coeffs, c.predicted, c.actual);
        }
        out.push('\n');
    }
    let pc = &doc.profile_coverage;
    let _ = writeln!(out, "profile coverage: {} of {} (Tr, tauX, tauY) triples", pc.attained, pc.possible);
    let vc = &doc.value_coverage;
    let _ = writeln!(
        out,
        "values: |K| <= {}, {} boundary hits, {} out of range, open-range gaps {:?}",
        vc.bound,
        vc.boundary_hits.len(),
        vc.out_of_range.len(),
        vc.missing_open
    );
    if let Some(cc) = &doc.cross_check {
        let _ = writeln!(out, "naive cross-check: {} of {} elements disagree", cc.disagreements, cc.elements);
    }
    let _ = writeln!(out, "result: {}", if passed { "PASS" } else { "FAIL" });
    out
}

pub fn run(s: &Session, args: &VerifyArgs) -> Result<Status> {
    let format = s.format("verify", Format::Text, &[Format::Text, Format::Json])?;
    let ctx = &s.field;
    let sweeps = resolve(ctx.n(), &args.targets)?;

    let table = kloosterman_all_fast(ctx, s.exec)?;
    let profiles = ProfileTable::build(ctx, s.exec)?;
    let reports = sweeps
        .iter()
        .map(|&sweep| verify_sweep(ctx, &profiles, sweep, &table, s.exec))
        .collect::<Result<Vec<_>, _>>()?;

    let cross_check = if args.cross_check {
        let naive = kloosterman_all_naive(ctx, s.exec)?;
        let bad: Vec<usize> = (0..table.len()).filter(|&i| naive.values[i] != table.values[i]).collect();
        Some(CrossCheck { elements: table.len(), disagreements: bad.len(), first_disagreement: bad.first().copied() })
    } else {
        None
    };

    let passed = reports.iter().all(VerifyReport::passed) && cross_check.as_ref().is_none_or(|c| c.disagreements == 0);
    let doc = VerifyDoc {
        seed: format!("{:#x}", s.seed),
        n: ctx.n(),
        field_modulus: ctx.spec().modulus_string(),
        reports,
        profile_coverage: ProfileCoverage { attained: profiles.attained_triples().len(), possible: 27 },
        value_coverage: value_coverage(&table),
        cross_check,
    };
    let bytes = match format {
        Format::Json => crate::output::json(&doc)?,
        _ => text_report(s, &doc, passed).into_bytes(),
    };
    s.emit(&bytes)?;
    Ok(Status::from_pass(passed))
}
