//! Acceptance suite. Runs every exit criterion, prints one PASS/FAIL line
//! each, and exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ternary_kloosterman::congruence::{
    mod27_polynomial, mod27_table, mod27_with_tau_z, verify_sweep, Sweep, VerifyReport,
};
use ternary_kloosterman::field::FieldContext;
use ternary_kloosterman::kloosterman::{
    kloosterman_all_fast, kloosterman_all_naive, kloosterman_naive, sample_elements, value_coverage, KloostermanTable,
    DEFAULT_SEED,
};
use ternary_kloosterman::padic::{
    gamma3, gross_koblitz_sweep, stickelberger_sweep, valuation_check, wt1lem_check, CheckReport, FourierChecker,
    GaussEngine,
};
use ternary_kloosterman::par::Execution;
use ternary_kloosterman::traces::ProfileTable;

const EXEC: Execution = Execution::Parallel;

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn pass(detail: impl Into<String>) -> Self {
        Outcome { ok: true, detail: detail.into() }
    }
    fn fail(detail: impl Into<String>) -> Self {
        Outcome { ok: false, detail: detail.into() }
    }
}

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

struct Field {
    ctx: FieldContext,
    table: KloostermanTable,
    profiles: ProfileTable,
}

fn field(n: usize) -> Field {
    let ctx = FieldContext::new(n).expect("field");
    let table = kloosterman_all_fast(&ctx, EXEC).expect("fast table");
    let profiles = ProfileTable::build(&ctx, EXEC).expect("profiles");
    Field { ctx, table, profiles }
}

fn sweep_range(sweeps: &[(Sweep, std::ops::RangeInclusive<usize>)]) -> Outcome {
    let mut reports: Vec<VerifyReport> = Vec::new();
    let max_n = sweeps.iter().map(|(_, r)| *r.end()).max().unwrap_or(0);
    for n in 1..=max_n {
        let wanted: Vec<Sweep> = sweeps.iter().filter(|(_, r)| r.contains(&n)).map(|(s, _)| *s).collect();
        if wanted.is_empty() {
            continue;
        }
        let f = field(n);
        for s in wanted {
            match verify_sweep(&f.ctx, &f.profiles, s, &f.table, EXEC) {
                Ok(r) => reports.push(r),
                Err(e) => return Outcome::fail(format!("{s} n={n}: {e}")),
            }
        }
    }
    let total: u64 = reports.iter().map(|r| r.total).sum();
    match reports.iter().find(|r| !r.passed()) {
        Some(bad) => Outcome::fail(format!(
            "{} n={}: {} mismatches, first {:?}",
            bad.check, bad.n, bad.mismatches, bad.first_counterexample
        )),
        None => Outcome::pass(format!("{} sweeps, {total} elements, 0 mismatches", reports.len())),
    }
}

fn ac1_mod9() -> Outcome {
    sweep_range(&[(Sweep::Mod9, 2..=8)])
}

fn ac2_mod27() -> Outcome {
    let sweep = sweep_range(&[(Sweep::Mod27, 3..=8)]);
    if !sweep.ok {
        return sweep;
    }
    // pointwise agreement of the three mod-27 formulations
    let mut checked = 0usize;
    for n in 3..=8 {
        let f = field(n);
        for a in f.ctx.elements() {
            let p = f.profiles.profile(a);
            let (t, x, y) = p.triple();
            let poly = mod27_polynomial(t, x, y);
            if poly != mod27_with_tau_z(&p) || poly != mod27_table(t, x, y) {
                return Outcome::fail(format!("forms disagree at n={n} a={a}: {p:?}"));
            }
            checked += 1;
        }
    }
    Outcome::pass(format!("{}; three forms agree on {checked} elements", sweep.detail))
}

fn ac3_mod18_mod54() -> Outcome {
    sweep_range(&[(Sweep::Mod18, 2..=7), (Sweep::Mod54, 3..=7)])
}

fn ac4_lisonek() -> Outcome {
    sweep_range(&[(Sweep::Lisonek, 2..=8)])
}

fn ac5_profile_coverage() -> Outcome {
    let all: BTreeSet<(u8, u8, u8)> = (0..27u8).map(|i| (i % 3, (i / 3) % 3, i / 9)).collect();
    let mut notes = Vec::new();
    for n in 3..=6 {
        let seen = field(n).profiles.attained_triples();
        let complete = seen == all;
        notes.push(format!("n={n}:{}", seen.len()));
        if (n == 6) != complete {
            return Outcome::fail(format!("n={n} attains {} of 27 triples", seen.len()));
        }
    }
    Outcome::pass(format!("triples attained {}", notes.join(" ")))
}

fn gauss_reports(ns: std::ops::RangeInclusive<usize>, k: u32, run: fn(&GaussEngine<'_>) -> CheckReport) -> Outcome {
    let mut total = 0;
    for n in ns {
        let ctx = FieldContext::new(n).unwrap();
        let engine = GaussEngine::new(&ctx, k).unwrap();
        let r = run(&engine);
        if !r.all_passed() {
            return Outcome::fail(format!(
                "{} n={n} k={k}: {} failures, first j={:?}",
                r.check, r.failed, r.first_failure
            ));
        }
        total += r.total;
    }
    Outcome::pass(format!("{total} exponents, 0 violations"))
}

fn ac6_valuations() -> Outcome {
    gauss_reports(2..=4, 6, |e| valuation_check(e, EXEC).unwrap())
}

fn ac7_wt1lem() -> Outcome {
    let squares = gauss_reports(2..=4, 3, |e| wt1lem_check(e, EXEC).unwrap());
    if !squares.ok {
        return squares;
    }
    for n in 2..=4 {
        let ctx = FieldContext::new(n).unwrap();
        let engine = GaussEngine::new(&ctx, 2).unwrap();
        let ring = engine.ring();
        let g = engine.gauss_sum(1).unwrap().value;
        if ring.ram_mul(&g, &g) != ring.ram_from_int(6) {
            return Outcome::fail(format!("g(1)^2 != 6 mod 9 at n={n}"));
        }
    }
    Outcome::pass(format!("{}; g(1)^2 = 6 mod 9 for n=2..4", squares.detail))
}

fn ac8_stickelberger_gk() -> Outcome {
    let st = gauss_reports(2..=4, 6, |e| stickelberger_sweep(e, EXEC).unwrap());
    if !st.ok {
        return st;
    }
    let gk = gauss_reports(2..=4, 3, |e| gross_koblitz_sweep(e, EXEC).unwrap());
    if !gk.ok {
        return gk;
    }
    Outcome::pass(format!("Stickelberger (k=6): {}; Gross-Koblitz (k=3): {}", st.detail, gk.detail))
}

fn ac9_gamma() -> Outcome {
    let got = [gamma3(1, 3).unwrap(), gamma3(24, 3).unwrap(), gamma3(234, 3).unwrap()];
    if got == [26, 13, 1] {
        Outcome::pass("Gamma_3(1) = -1, Gamma_3(24) = 13, Gamma_3(234) = 1 (mod 27)")
    } else {
        Outcome::fail(format!("got {got:?}, expected [26, 13, 1]"))
    }
}

fn ac10_fourier() -> Outcome {
    let mut notes = Vec::new();
    for (n, sample) in [(3usize, None), (4, Some(50usize))] {
        let ctx = FieldContext::new(n).unwrap();
        let table = kloosterman_all_fast(&ctx, EXEC).unwrap();
        let engine = GaussEngine::new(&ctx, 3).unwrap();
        let checker = FourierChecker::new(&engine, EXEC).unwrap();
        let elements = match sample {
            Some(c) => sample_elements(&ctx, c, DEFAULT_SEED),
            None => ctx.elements().collect(),
        };
        let (first, hat) = checker.sweep(&table, &elements, EXEC).unwrap();
        let Some(hat) = hat else {
            return Outcome::fail(format!("hat form not evaluated at n={n}"));
        };
        if !first.all_passed() || !hat.all_passed() {
            return Outcome::fail(format!(
                "n={n}: firstKL {:?}, hat form {:?}",
                first.first_failure, hat.first_failure
            ));
        }
        notes.push(format!("n={n}: {} elements", first.total));
    }
    Outcome::pass(format!("{} (seed {DEFAULT_SEED:#x})", notes.join(", ")))
}

fn ac11_oracle() -> Outcome {
    for n in 1..=5 {
        let ctx = FieldContext::new(n).unwrap();
        let naive = kloosterman_all_naive(&ctx, EXEC).unwrap();
        let fast = kloosterman_all_fast(&ctx, EXEC).unwrap();
        if naive.values != fast.values {
            return Outcome::fail(format!("fast != naive at n={n}"));
        }
    }
    for n in 6..=10 {
        let ctx = FieldContext::new(n).unwrap();
        let fast = kloosterman_all_fast(&ctx, EXEC).unwrap();
        let sample = sample_elements(&ctx, 1000, DEFAULT_SEED);
        for a in sample {
            let k = kloosterman_naive(&ctx, a).unwrap();
            if k != fast.get(a) {
                return Outcome::fail(format!("n={n} a={a}: fast {} naive {k}", fast.get(a)));
            }
        }
    }
    Outcome::pass("exhaustive n=1..5, 1000 seeded samples for n=6..10")
}

fn ac12_range() -> Outcome {
    let mut notes = Vec::new();
    for n in 1..=8 {
        let ctx = FieldContext::new(n).unwrap();
        let table = kloosterman_all_fast(&ctx, EXEC).unwrap();
        let cov = value_coverage(&table);
        if !cov.all_divisible_by_3 {
            return Outcome::fail(format!("n={n}: value not divisible by 3"));
        }
        if !cov.closed_bound_holds() {
            return Outcome::fail(format!("n={n}: |K| > 2 sqrt q at {:?}", cov.out_of_range));
        }
        if !cov.boundary_hits.is_empty() {
            notes.push(format!("n={n}: {} boundary hits", cov.boundary_hits.len()));
        }
        if (4..=7).contains(&n) {
            println!(
                "    coverage n={n}: bound {} attained {} multiples of 3, missing in open range {:?}",
                cov.bound,
                cov.attained.len(),
                cov.missing_open
            );
            if !cov.open_range_fully_attained() {
                // only a hard error if the closed bound also failed, which was checked above
                notes.push(format!("n={n}: open-range gaps {:?}", cov.missing_open));
            }
        }
    }
    let detail = if notes.is_empty() { "no exceptions".to_string() } else { notes.join("; ") };
    Outcome::pass(format!("closed bound holds for n=1..8; {detail}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("AC-1  K mod 9 = 3 Tr(a), n=2..8", Some(Duration::from_secs(10)), ac1_mod9),
        ("AC-2  K mod 27 trace formula, n=3..8", Some(Duration::from_secs(10)), ac2_mod27),
        ("AC-3  mod 18 (a != 0, n=2..7) and mod 54 (n=3..7)", Some(Duration::from_secs(30)), ac3_mod18_mod54),
        ("AC-4  9 | K(a) iff Tr(a) = 0, n=2..8", None, ac4_lisonek),
        ("AC-5  (Tr, tau_X, tau_Y) coverage first complete at n=6", None, ac5_profile_coverage),
        ("AC-6  val_pi g(j) = wt_3(j), n=2..4, k=6", Some(Duration::from_secs(30)), ac6_valuations),
        ("AC-7  g(j)^2 mod 27 by weight class, n=2..4", None, ac7_wt1lem),
        ("AC-8  Stickelberger and Gross-Koblitz, n=2..4", Some(Duration::from_secs(60)), ac8_stickelberger_gk),
        ("AC-9  Gamma_3 golden values", None, ac9_gamma),
        ("AC-10 Fourier expansion and hat form of K(a)", None, ac10_fourier),
        ("AC-11 fast transform = naive sum", None, ac11_oracle),
        ("AC-12 |K(a)| <= 2 sqrt q and value coverage", None, ac12_range),
    ];
    let mut failures = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let Some(limit) = budget {
            if elapsed > limit {
                outcome = Outcome::fail(format!("took {elapsed:.2?}, budget {limit:?}; {}", outcome.detail));
            }
        }
        let tag = if outcome.ok { "PASS" } else { "FAIL" };
        println!("[{tag}] {name} ({elapsed:.2?}): {}", outcome.detail);
        failures += usize::from(!outcome.ok);
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
