//! Closed-form residues of `K(a)` modulo 2, 9, 18, 27 and 54, and sweeps
//! that compare them with computed Kloosterman values.

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::kloosterman::KloostermanTable;
use crate::par::{self, Execution};
use crate::traces::{ProfileTable, TraceProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `3 Tr(a) mod 9`
    TraceMod9,
    /// square with `Tr(sqrt a) != 0` (or `a = 0`) means even
    SquareTrace,
    /// trace polynomial mod 27, checked against two equivalent forms
    TracePolynomial27,
    Crt18,
    Crt54,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CongruencePrediction {
    pub modulus: u32,
    pub residue: u32,
    pub rule: Rule,
}

/// `k mod m` in `[0, m)`, also for negative `k`.
pub fn canonical_residue(k: i64, m: u32) -> u32 {
    k.rem_euclid(m as i64) as u32
}

/// Unique `x mod m1*m2` with `x = r1 mod m1`, `x = r2 mod m2`, for coprime moduli.
pub fn crt(r1: u32, m1: u32, r2: u32, m2: u32) -> u32 {
    (0..m1 * m2).find(|&x| x % m1 == r1 % m1 && x % m2 == r2 % m2).expect("moduli must be coprime")
}

pub fn predict_mod9(tr: u8) -> CongruencePrediction {
    CongruencePrediction { modulus: 9, residue: 3 * (tr % 3) as u32, rule: Rule::TraceMod9 }
}

/// True when `a` is a nonzero square whose square root has nonzero trace.
fn square_with_tracefull_root(ctx: &FieldContext, a: FieldElement) -> bool {
    // Tr(-b) = -Tr(b), so either root decides the question
    ctx.sqrt(a).is_ok_and(|b| !a.is_zero() && ctx.trace(b) != 0)
}

pub fn predict_mod2(ctx: &FieldContext, a: FieldElement) -> CongruencePrediction {
    let even = a.is_zero() || square_with_tracefull_root(ctx, a);
    CongruencePrediction { modulus: 2, residue: u32::from(!even), rule: Rule::SquareTrace }
}

/// `21 Tr^3 + 18 Tr + 18 tau_X + 9 Tr tau_X + 9 tau_Y mod 27`, with the F_3
/// values lifted to {0,1,2}.
pub fn mod27_polynomial(tr: u8, tau_x: u8, tau_y: u8) -> u32 {
    let (t, x, y) = (tr as u32, tau_x as u32, tau_y as u32);
    (21 * t * t * t + 18 * t + 18 * x + 9 * t * x + 9 * y) % 27
}

/// `21 Tr^3 + 18 tau_Z + 9 tau_Y + 18 tau_X mod 27`.
pub fn mod27_with_tau_z(p: &TraceProfile) -> u32 {
    let (t, x, y, z) = (p.tr as u32, p.tau_x as u32, p.tau_y as u32, p.tau_z as u32);
    (21 * t * t * t + 18 * z + 9 * y + 18 * x) % 27
}

/// `(Tr, selector on (tauX, tauY), residue per selector value)`.
type Mod27Row = (u8, fn(u8, u8) -> u8, [u32; 3]);

/// The nine-row case table: the residue is `3 Tr + 9 c` where the selector
/// `c` depends on the trace class.
pub fn mod27_table(tr: u8, tau_x: u8, tau_y: u8) -> u32 {
    let rows: [Mod27Row; 3] =
        [(0, |x, y| (y + 2 * x) % 3, [0, 9, 18]), (1, |_, y| y % 3, [12, 21, 3]), (2, |x, y| (y + x) % 3, [15, 24, 6])];
    let (_, selector, residues) = rows[tr as usize % 3];
    residues[selector(tau_x, tau_y) as usize]
}

/// The mod-27 residue predicted by the trace profile. All three equivalent
/// formulations are evaluated; disagreement is a hard error.
pub fn predict_mod27(profile: &TraceProfile) -> Result<CongruencePrediction> {
    let (t, x, y) = profile.triple();
    let poly = mod27_polynomial(t, x, y);
    let with_z = mod27_with_tau_z(profile);
    let table = mod27_table(t, x, y);
    if poly != with_z || poly != table {
        return Err(Error::consistency(format!(
            "mod-27 forms disagree for {profile:?}: polynomial {poly}, tau_Z form {with_z}, table {table}"
        )));
    }
    Ok(CongruencePrediction { modulus: 27, residue: poly, rule: Rule::TracePolynomial27 })
}

/// Six-row mod-18 table for nonzero `a`, keyed by trace and by whether `a`
/// is a square with a root of nonzero trace.
pub fn mod18_table(tr: u8, square_tracefull: bool) -> u32 {
    match (tr % 3, square_tracefull) {
        (0, true) => 0,
        (1, false) => 3,
        (2, true) => 6,
        (0, false) => 9,
        (1, true) => 12,
        (2, false) => 15,
        _ => unreachable!(),
    }
}

pub fn predict_mod18(ctx: &FieldContext, a: FieldElement) -> Result<CongruencePrediction> {
    if a.is_zero() {
        return Err(Error::domain("the mod-18 classification covers nonzero a only"));
    }
    let tr = ctx.trace(a);
    let m9 = predict_mod9(tr).residue;
    let m2 = predict_mod2(ctx, a).residue;
    let residue = crt(m9, 9, m2, 2);
    let table = mod18_table(tr, square_with_tracefull_root(ctx, a));
    if residue != table {
        return Err(Error::consistency(format!(
            "mod-18 CRT value {residue} disagrees with table value {table} at {a}"
        )));
    }
    Ok(CongruencePrediction { modulus: 18, residue, rule: Rule::Crt18 })
}

pub fn predict_mod54(ctx: &FieldContext, profile: &TraceProfile, a: FieldElement) -> Result<CongruencePrediction> {
    if ctx.n() < 3 {
        return Err(Error::usage("mod-54 classification requires n >= 3"));
    }
    let m27 = predict_mod27(profile)?.residue;
    let m2 = predict_mod2(ctx, a).residue;
    Ok(CongruencePrediction { modulus: 54, residue: crt(m27, 27, m2, 2), rule: Rule::Crt54 })
}

/// One verification target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sweep {
    Mod2,
    Mod9,
    Mod18,
    Mod27,
    Mod54,
    /// `9 | K(a)` exactly when `Tr(a) = 0`.
    Lisonek,
}

impl Sweep {
    pub const ALL: [Sweep; 6] = [Sweep::Mod2, Sweep::Mod9, Sweep::Lisonek, Sweep::Mod18, Sweep::Mod27, Sweep::Mod54];

    pub fn modulus(self) -> u32 {
        match self {
            Sweep::Mod2 => 2,
            Sweep::Mod9 | Sweep::Lisonek => 9,
            Sweep::Mod18 => 18,
            Sweep::Mod27 => 27,
            Sweep::Mod54 => 54,
        }
    }

    pub fn from_modulus(m: u32) -> Option<Sweep> {
        Some(match m {
            2 => Sweep::Mod2,
            9 => Sweep::Mod9,
            18 => Sweep::Mod18,
            27 => Sweep::Mod27,
            54 => Sweep::Mod54,
            _ => return None,
        })
    }

    pub fn min_degree(self) -> usize {
        match self {
            Sweep::Mod2 => 1,
            Sweep::Mod9 | Sweep::Mod18 | Sweep::Lisonek => 2,
            Sweep::Mod27 | Sweep::Mod54 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sweep::Mod2 => "mod2",
            Sweep::Mod9 => "mod9",
            Sweep::Mod18 => "mod18",
            Sweep::Mod27 => "mod27",
            Sweep::Mod54 => "mod54",
            Sweep::Lisonek => "div9-iff-trace0",
        }
    }

    /// Rejects degrees for which the classification is not asserted.
    pub fn check_degree(self, n: usize) -> Result<()> {
        if n < self.min_degree() {
            return Err(Error::usage(format!("{} requires n >= {} (got n = {n})", self.name(), self.min_degree())));
        }
        Ok(())
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Sweep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub index: usize,
    pub coeffs: String,
    pub predicted: u32,
    pub actual: u32,
}

fn serialize_ms<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

/// Outcome of one exhaustive sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub modulus: u32,
    pub check: Sweep,
    pub total: u64,
    pub mismatches: u64,
    pub first_counterexample: Option<Counterexample>,
    #[serde(rename = "elapsed_ms", serialize_with = "serialize_ms")]
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn empty(n: usize, check: Sweep) -> Self {
        VerifyReport {
            n,
            modulus: check.modulus(),
            check,
            total: 0,
            mismatches: 0,
            first_counterexample: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }

    /// Associative merge: counts add, the counterexample with the smaller
    /// packed index survives.
    pub fn merge(mut self, other: VerifyReport) -> VerifyReport {
        self.total += other.total;
        self.mismatches += other.mismatches;
        self.elapsed = self.elapsed.max(other.elapsed);
        self.first_counterexample = match (self.first_counterexample, other.first_counterexample) {
            (Some(a), Some(b)) => Some(if a.index <= b.index { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Predicted and actual residue for one element, `None` when the element
/// is outside the sweep's domain.
fn compare(
    ctx: &FieldContext,
    profiles: &ProfileTable,
    sweep: Sweep,
    a: FieldElement,
    k: i64,
) -> Result<Option<(u32, u32)>> {
    let m = sweep.modulus();
    let predicted = match sweep {
        Sweep::Mod2 => predict_mod2(ctx, a).residue,
        Sweep::Mod9 => predict_mod9(ctx.trace(a)).residue,
        Sweep::Mod18 if a.is_zero() => return Ok(None),
        Sweep::Mod18 => predict_mod18(ctx, a)?.residue,
        Sweep::Mod27 => predict_mod27(&profiles.profile(a))?.residue,
        Sweep::Mod54 => predict_mod54(ctx, &profiles.profile(a), a)?.residue,
        Sweep::Lisonek => {
            let predicted = u32::from(ctx.trace(a) == 0);
            let actual = u32::from(k % 9 == 0);
            return Ok(Some((predicted, actual)));
        }
    };
    Ok(Some((predicted, canonical_residue(k, m))))
}

/// Compares the closed-form prediction with `table` for every applicable
/// element. Mismatches are counted, not raised.
pub fn verify_sweep(
    ctx: &FieldContext,
    profiles: &ProfileTable,
    sweep: Sweep,
    table: &KloostermanTable,
    exec: Execution,
) -> Result<VerifyReport> {
    let n = ctx.n();
    sweep.check_degree(n)?;
    if table.n != n || table.len() != ctx.order() {
        return Err(Error::usage("Kloosterman table was built for a different field"));
    }
    if profiles.family().n != n {
        return Err(Error::usage("trace profiles were built for a different field"));
    }
    let start = Instant::now();
    let partial = par::map_indices(exec, ctx.order(), |i| {
        let a = ctx.element(i)?;
        let mut r = VerifyReport::empty(n, sweep);
        if let Some((predicted, actual)) = compare(ctx, profiles, sweep, a, table.get(a))? {
            r.total = 1;
            if predicted != actual {
                r.mismatches = 1;
                r.first_counterexample =
                    Some(Counterexample { index: i, coeffs: ctx.format_coeffs(a), predicted, actual });
            }
        }
        Ok(r)
    });
    let mut report = partial
        .into_iter()
        .try_fold(VerifyReport::empty(n, sweep), |acc, r: Result<VerifyReport>| Ok::<_, Error>(acc.merge(r?)))?;
    report.elapsed = start.elapsed();
    Ok(report)
}
