use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;
use ternary_kloosterman::field::FieldContext;
use ternary_kloosterman::kloosterman::{kloosterman_all_fast, sample_elements};
use ternary_kloosterman::padic::{
    cong3_check, gross_koblitz_sweep, stickelberger_sweep, valuation_check, wt1lem_check, CheckReport, FourierChecker,
    GaussCheck, GaussEngine, MAX_PRECISION,
};
use ternary_kloosterman::Error;

use super::field_line;
use crate::cli::{Format, GaussArgs, GaussTarget};
use crate::{warn, Session, Status};

const ALL: [GaussTarget; 6] = [
    GaussTarget::Valuation,
    GaussTarget::Stickelberger,
    GaussTarget::GrossKoblitz,
    GaussTarget::Wt1lem,
    GaussTarget::Firstkl,
    GaussTarget::Cong3,
];

#[derive(Debug, Serialize)]
struct GaussDoc {
    seed: String,
    n: usize,
    field_modulus: String,
    /// Elements used by the Fourier checks.
    sampled_elements: Option<usize>,
    reports: Vec<CheckReport>,
}

/// Precision used when `--k` is absent: enough for every weight in the
/// Stickelberger check, the full `3^n` for the Fourier expansion, 3 otherwise.
fn default_precision(target: GaussTarget, n: usize) -> u32 {
    let n = n as u32;
    match target {
        GaussTarget::Stickelberger => (n + 1).min(MAX_PRECISION),
        GaussTarget::Firstkl => n.min(MAX_PRECISION),
        _ => 3,
    }
}

fn target_name(t: GaussTarget) -> String {
    t.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

struct Runner<'s> {
    session: &'s Session,
    samples: usize,
    sampled: Option<usize>,
}

impl Runner<'_> {
    fn field(&self) -> &FieldContext {
        &self.session.field
    }

    fn check(&mut self, target: GaussTarget) -> Result<Vec<CheckReport>, Error> {
        let s = self.session;
        let n = self.field().n();
        let k = s.k.unwrap_or_else(|| default_precision(target, n));
        let engine = GaussEngine::new(&s.field, k)?;
        Ok(match target {
            GaussTarget::Valuation => vec![valuation_check(&engine, s.exec)?],
            GaussTarget::Stickelberger => vec![stickelberger_sweep(&engine, s.exec)?],
            GaussTarget::GrossKoblitz => vec![gross_koblitz_sweep(&engine, s.exec)?],
            GaussTarget::Wt1lem => vec![wt1lem_check(&engine, s.exec)?],
            GaussTarget::Firstkl => {
                let checker = FourierChecker::new(&engine, s.exec)?;
                let table = kloosterman_all_fast(&s.field, s.exec)?;
                let elements = sample_elements(&s.field, self.samples, s.seed);
                self.sampled = Some(elements.len());
                let (first, hat) = checker.sweep(&table, &elements, s.exec)?;
                std::iter::once(first).chain(hat).collect()
            }
            GaussTarget::Cong3 => {
                let ok = cong3_check(&engine);
                vec![CheckReport {
                    check: GaussCheck::Cong3,
                    n,
                    k,
                    total: 1,
                    passed: u64::from(ok),
                    failed: u64::from(!ok),
                    first_failure: None,
                }]
            }
            GaussTarget::All => unreachable!("expanded before dispatch"),
        })
    }
}

fn text_report(s: &Session, doc: &GaussDoc, passed: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "seed: {}", doc.seed);
    let _ = writeln!(out, "field: {}", field_line(&s.field));
    for r in &doc.reports {
        let _ = write!(out, "  {:<14} k={:<3} {:>7} passed {:>5} failed", r.check.name(), r.k, r.passed, r.failed);
        if let Some(j) = r.first_failure {
            let _ = write!(out, "  first failure at {j}");
        }
        out.push('\n');
    }
    if let Some(m) = doc.sampled_elements {
        let _ = writeln!(out, "fourier checks over {m} elements");
    }
    let _ = writeln!(out, "result: {}", if passed { "PASS" } else { "FAIL" });
    out
}

pub fn run(s: &Session, args: &GaussArgs) -> Result<Status> {
    let format = s.format("gauss", Format::Text, &[Format::Text, Format::Json])?;
    let expand_all = args.check.contains(&GaussTarget::All);
    let mut targets: Vec<GaussTarget> = if expand_all { ALL.to_vec() } else { args.check.clone() };
    targets.sort_unstable();
    targets.dedup();

    let mut runner = Runner { session: s, samples: args.samples, sampled: None };
    let mut by_target = BTreeMap::new();
    for t in targets {
        match runner.check(t) {
            Ok(reports) => {
                by_target.insert(t, reports);
            }
            Err(Error::Usage(msg)) if expand_all => warn(format!("skipping {}: {msg}", target_name(t))),
            Err(e) => return Err(e.into()),
        }
    }
    let reports: Vec<CheckReport> = by_target.into_values().flatten().collect();
    let passed = reports.iter().all(CheckReport::all_passed);
    let doc = GaussDoc {
        seed: format!("{:#x}", s.seed),
        n: s.field.n(),
        field_modulus: s.field.spec().modulus_string(),
        sampled_elements: runner.sampled,
        reports,
    };
    let bytes = match format {
        Format::Json => crate::output::json(&doc)?,
        _ => text_report(s, &doc, passed).into_bytes(),
    };
    s.emit(&bytes)?;
    Ok(Status::from_pass(passed))
}
