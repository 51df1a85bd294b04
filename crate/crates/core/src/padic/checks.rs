//! Computational checks of the Gauss-sum congruences: valuations,
//! Stickelberger, Gross–Koblitz, the mod-27 squares congruence, the Fourier
//! expansion of `K(a)` and the `T_1` inverse-sum congruence.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::kloosterman::KloostermanTable;
use crate::par::{self, Execution};
use crate::traces::{base3_digits, wt3};

use super::gamma::gamma3_fractional;
use super::gauss::GaussEngine;
use super::ring::{PiValuation, RamifiedElem, UnramifiedElem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GaussCheck {
    Valuation,
    Stickelberger,
    GrossKoblitz,
    Wt1Lem,
    FirstKl,
    HatForm,
    Cong3,
}

impl GaussCheck {
    pub fn name(self) -> &'static str {
        match self {
            GaussCheck::Valuation => "valuation",
            GaussCheck::Stickelberger => "stickelberger",
            GaussCheck::GrossKoblitz => "gross-koblitz",
            GaussCheck::Wt1Lem => "wt1lem",
            GaussCheck::FirstKl => "firstkl",
            GaussCheck::HatForm => "hat-form",
            GaussCheck::Cong3 => "cong3",
        }
    }
}

impl fmt::Display for GaussCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for GaussCheck {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Pass/fail tally of one check over a range of exponents `j` (or field
/// elements, for the Fourier checks).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: GaussCheck,
    pub n: usize,
    pub k: u32,
    pub total: u64,
    pub passed: u64,
    pub failed: u64,
    /// Smallest failing `j` (or packed element index).
    pub first_failure: Option<u64>,
}

impl CheckReport {
    fn tally(check: GaussCheck, engine: &GaussEngine<'_>, outcomes: impl IntoIterator<Item = (u64, bool)>) -> Self {
        let mut r = CheckReport {
            check,
            n: engine.field().n(),
            k: engine.ring().precision(),
            total: 0,
            passed: 0,
            failed: 0,
            first_failure: None,
        };
        for (id, ok) in outcomes {
            r.total += 1;
            if ok {
                r.passed += 1;
            } else {
                r.failed += 1;
                r.first_failure = Some(r.first_failure.map_or(id, |f| f.min(id)));
            }
        }
        r
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn exponents(engine: &GaussEngine<'_>) -> impl Iterator<Item = u64> {
    1..engine.q_minus_1()
}

fn sweep_j<F>(engine: &GaussEngine<'_>, check: GaussCheck, exec: Execution, f: F) -> Result<CheckReport>
where
    F: Fn(u64) -> Result<bool> + Sync + Send,
{
    let count = (engine.q_minus_1() - 1) as usize;
    let outcomes = par::try_map_indices(exec, count, |i| {
        let j = i as u64 + 1;
        f(j).map(|ok| (j, ok))
    })?;
    Ok(CheckReport::tally(check, engine, outcomes))
}

/// `val_pi(g(j)) = wt_3(j)` for every `j`. Valuations at or beyond `2k`
/// are invisible at precision `k`; such `j` pass when the sum vanishes.
pub fn valuation_check(engine: &GaussEngine<'_>, exec: Execution) -> Result<CheckReport> {
    sweep_j(engine, GaussCheck::Valuation, exec, |j| {
        let g = engine.gauss_sum_value(j)?;
        Ok(match engine.ring().pi_valuation(&g) {
            PiValuation::Exact(v) => v == wt3(j),
            PiValuation::AtLeast(v) => wt3(j) >= v,
        })
    })
}

/// `j_0! j_1! ... j_{n-1}!` over the base-3 digits; each digit is at most 2.
pub fn digit_factorial_product(j: u64) -> i64 {
    base3_digits(j, 0).iter().map(|&d| if d == 2 { 2 } else { 1 }).product()
}

/// `g(j) * prod j_i! - pi^wt` lies in `(pi^(wt+2))`.
pub fn stickelberger_check(engine: &GaussEngine<'_>, j: u64) -> Result<bool> {
    let ring = engine.ring();
    let weight = wt3(j);
    let needed = (weight + 2).div_ceil(2);
    if ring.precision() < needed {
        return Err(Error::usage(format!(
            "Stickelberger congruence for j = {j} (weight {weight}) needs precision k >= {needed}"
        )));
    }
    let g = engine.gauss_sum_value(j)?;
    let lhs = ring.ram_scale(&g, digit_factorial_product(j));
    let diff = ring.ram_sub(&lhs, &ring.pi_pow(weight));
    ring.in_pi_ideal(&diff, weight + 2)
}

pub fn stickelberger_sweep(engine: &GaussEngine<'_>, exec: Execution) -> Result<CheckReport> {
    sweep_j(engine, GaussCheck::Stickelberger, exec, |j| stickelberger_check(engine, j))
}

/// Right-hand side `pi^wt * prod_i Gamma_3(<3^i j / (q-1)>)` mod `3^k`.
pub fn gross_koblitz_value(engine: &GaussEngine<'_>, j: u64) -> Result<RamifiedElem> {
    let ring = engine.ring();
    let m = engine.q_minus_1();
    let k = ring.precision();
    let mut gamma_prod = 1u64;
    let mut rotated = j % m;
    for _ in 0..engine.field().n() {
        gamma_prod = gamma_prod * gamma3_fractional(rotated, m, k)? % ring.modulus();
        rotated = 3 * rotated % m;
    }
    Ok(ring.ram_scale(&ring.pi_pow(wt3(j)), gamma_prod as i64))
}

/// `g(j)` equals the Gross–Koblitz product in the ring mod `3^k`.
pub fn gross_koblitz_check(engine: &GaussEngine<'_>, j: u64) -> Result<bool> {
    let g = engine.gauss_sum_value(j)?;
    let rhs = gross_koblitz_value(engine, j)?;
    let ring = engine.ring();
    ring.in_3_ideal(&ring.ram_sub(&g, &rhs), ring.precision())
}

pub fn gross_koblitz_sweep(engine: &GaussEngine<'_>, exec: Execution) -> Result<CheckReport> {
    sweep_j(engine, GaussCheck::GrossKoblitz, exec, |j| gross_koblitz_check(engine, j))
}

/// Expected `g(j)^2 mod 27` by weight class: 6, 9, then 0.
pub fn expected_square_mod27(weight: u32) -> i64 {
    match weight {
        1 => 6,
        2 => 9,
        _ => 0,
    }
}

/// `g(j)^2 mod 27` matches its weight class for every `j`.
pub fn wt1lem_check(engine: &GaussEngine<'_>, exec: Execution) -> Result<CheckReport> {
    let ring = engine.ring();
    if ring.precision() < 3 {
        return Err(Error::usage("the mod-27 squares check needs precision k >= 3"));
    }
    sweep_j(engine, GaussCheck::Wt1Lem, exec, |j| {
        let g = engine.gauss_sum_value(j)?;
        let sq = ring.ram_mul(&g, &g);
        let diff = ring.ram_sub(&sq, &ring.ram_from_int(expected_square_mod27(wt3(j))));
        ring.in_3_ideal(&diff, 3)
    })
}

/// `sum_{z in T_1} omega(z)^{-1} = 1 mod 3`.
pub fn cong3_check(engine: &GaussEngine<'_>) -> bool {
    let ring = engine.ring();
    let sum = engine
        .field()
        .trace_level_set(1)
        .into_iter()
        .fold(ring.zero(), |acc, z| ring.add(&acc, &engine.omega_pow(z, -1)));
    ring.divisible_by_3_pow(&ring.sub(&sum, &ring.one()), 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FourierCheck {
    /// `K(a) = -sum_j g(j)^2 omega^j(a) mod 3^k`.
    pub first_kl: bool,
    /// `K(a) = 21 sum_{wt i = 1} omega^i(a) + 18 sum_{wt i = 2} omega^i(a) mod 27`;
    /// `None` when `n < 3` or `k < 3`.
    pub hat_form: Option<bool>,
}

/// Precomputed `g(j)^2` for evaluating the Fourier expansion of `K(a)`.
#[derive(Debug, Clone)]
pub struct FourierChecker<'e, 'f> {
    engine: &'e GaussEngine<'f>,
    squares: Vec<RamifiedElem>,
    weight1: Vec<u64>,
    weight2: Vec<u64>,
}

impl<'e, 'f> FourierChecker<'e, 'f> {
    /// The expansion only holds mod `q`, so the precision may not exceed `n`.
    pub fn new(engine: &'e GaussEngine<'f>, exec: Execution) -> Result<Self> {
        let (k, n) = (engine.ring().precision(), engine.field().n());
        if k as usize > n {
            return Err(Error::usage(format!(
                "the Fourier congruence holds mod q = 3^{n}; precision k = {k} exceeds n"
            )));
        }
        let ring = engine.ring();
        let squares = par::try_map_indices(exec, (engine.q_minus_1() - 1) as usize, |i| {
            let g = engine.gauss_sum_value(i as u64 + 1)?;
            Ok::<_, Error>(ring.ram_mul(&g, &g))
        })?;
        let weight1 = exponents(engine).filter(|&i| wt3(i) == 1).collect();
        let weight2 = exponents(engine).filter(|&i| wt3(i) == 2).collect();
        Ok(FourierChecker { engine, squares, weight1, weight2 })
    }

    /// `-sum_{j=1}^{q-2} g(j)^2 omega^j(a)` in the ring.
    pub fn expansion(&self, a: FieldElement) -> RamifiedElem {
        let ring = self.engine.ring();
        let sum = self.squares.iter().enumerate().fold(ring.ram_from_int(0), |acc, (i, sq)| {
            let w = self.engine.omega_pow(a, i as i64 + 1);
            ring.ram_add(&acc, &ring.ram_mul_unramified(sq, &w))
        });
        ring.ram_neg(&sum)
    }

    fn power_sum(&self, a: FieldElement, exps: &[u64]) -> UnramifiedElem {
        let ring = self.engine.ring();
        exps.iter().fold(ring.zero(), |acc, &i| ring.add(&acc, &self.engine.omega_pow(a, i as i64)))
    }

    /// `21 sum_{wt i = 1} omega^i(a) + 18 sum_{wt i = 2} omega^i(a)`.
    pub fn hat_form(&self, a: FieldElement) -> UnramifiedElem {
        let ring = self.engine.ring();
        let t1 = ring.scale(&self.power_sum(a, &self.weight1), 21);
        let t2 = ring.scale(&self.power_sum(a, &self.weight2), 18);
        ring.add(&t1, &t2)
    }

    pub fn check(&self, a: FieldElement, k_value: i64) -> Result<FourierCheck> {
        let ring = self.engine.ring();
        let kval = ring.ram_from_int(k_value);
        let first_kl = ring.in_3_ideal(&ring.ram_sub(&kval, &self.expansion(a)), ring.precision())?;
        let hat_form = if self.engine.field().n() >= 3 && ring.precision() >= 3 {
            let diff = ring.sub(&ring.from_int(k_value), &self.hat_form(a));
            Some(ring.divisible_by_3_pow(&diff, 3))
        } else {
            None
        };
        Ok(FourierCheck { first_kl, hat_form })
    }

    /// Runs [`FourierChecker::check`] over `elements`; the hat-form report is
    /// omitted when that form does not apply.
    pub fn sweep(
        &self,
        table: &KloostermanTable,
        elements: &[FieldElement],
        exec: Execution,
    ) -> Result<(CheckReport, Option<CheckReport>)> {
        if table.n != self.engine.field().n() {
            return Err(Error::usage("Kloosterman table was built for a different field"));
        }
        let results = par::try_map_indices(exec, elements.len(), |i| {
            let a = elements[i];
            self.check(a, table.get(a)).map(|c| (a.index() as u64, c))
        })?;
        let first =
            CheckReport::tally(GaussCheck::FirstKl, self.engine, results.iter().map(|(id, c)| (*id, c.first_kl)));
        let hat = if results.iter().all(|(_, c)| c.hat_form.is_some()) && !results.is_empty() {
            Some(CheckReport::tally(
                GaussCheck::HatForm,
                self.engine,
                results.iter().map(|(id, c)| (*id, c.hat_form.unwrap_or(false))),
            ))
        } else {
            None
        };
        Ok((first, hat))
    }
}
