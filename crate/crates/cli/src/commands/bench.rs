use std::fmt::Write as _;
use std::time::Instant;

use anyhow::Result;
use serde::Serialize;
use ternary_kloosterman::kloosterman::{kloosterman_all_fast, kloosterman_all_naive};

use super::field_line;
use crate::cli::{BenchArgs, Format};
use crate::{Session, Status};

#[derive(Debug, Serialize)]
struct BenchDoc {
    seed: String,
    n: usize,
    q: usize,
    parallel: bool,
    butterflies: u64,
    expected_butterflies: u64,
    fast_ms: f64,
    /// Absent when the naive evaluation was skipped.
    naive_ms: Option<f64>,
    speedup: Option<f64>,
    identical: Option<bool>,
}

fn text_report(s: &Session, d: &BenchDoc) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "seed: {}", d.seed);
    let _ = writeln!(out, "field: {}", field_line(&s.field));
    let _ = writeln!(out, "execution: {}", if d.parallel { "parallel" } else { "sequential" });
    let _ = writeln!(out, "butterflies: {} (n * 3^(n-1) = {})", d.butterflies, d.expected_butterflies);
    let _ = writeln!(out, "fast:  {:>12.3} ms", d.fast_ms);
    match (d.naive_ms, d.speedup, d.identical) {
        (Some(ms), Some(x), Some(same)) => {
            let _ = writeln!(out, "naive: {ms:>12.3} ms");
            let _ = writeln!(out, "speedup: {x:.1}x");
            let _ = writeln!(out, "tables identical: {same}");
        }
        _ => {
            let _ = writeln!(out, "naive: skipped");
        }
    }
    out
}

pub fn run(s: &Session, args: &BenchArgs) -> Result<Status> {
    let format = s.format("bench", Format::Text, &[Format::Text, Format::Json])?;
    let ctx = &s.field;
    let n = ctx.n();

    let start = Instant::now();
    let fast = kloosterman_all_fast(ctx, s.exec)?;
    let fast_ms = start.elapsed().as_secs_f64() * 1e3;

    let (naive_ms, identical) = if n <= args.naive_max {
        let start = Instant::now();
        let naive = kloosterman_all_naive(ctx, s.exec)?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        (Some(ms), Some(naive.values == fast.values))
    } else {
        (None, None)
    };

    let expected = n as u64 * 3u64.pow(n as u32 - 1);
    let doc = BenchDoc {
        seed: format!("{:#x}", s.seed),
        n,
        q: ctx.order(),
        parallel: s.exec.is_parallel(),
        butterflies: fast.butterflies,
        expected_butterflies: expected,
        fast_ms,
        naive_ms,
        speedup: naive_ms.map(|ms| ms / fast_ms.max(1e-6)),
        identical,
    };
    let bytes = match format {
        Format::Json => crate::output::json(&doc)?,
        _ => text_report(s, &doc).into_bytes(),
    };
    s.emit(&bytes)?;
    if identical == Some(false) {
        eprintln!("error: naive and transform tables differ");
    }
    Ok(Status::from_pass(identical != Some(false) && fast.butterflies == expected))
}
