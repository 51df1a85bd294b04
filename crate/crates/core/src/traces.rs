//! Exponent index sets and the generalized traces they define.
//!
//! For an exponent set `S` of residues mod `q - 1` that is closed under
//! multiplication by 3, `tau_S(a) = sum_{s in S} a^s` is fixed by Frobenius
//! and therefore lands in F_3. `W_1 = {3^i}` gives the absolute trace; the
//! sets `X`, `Y`, `Z` below feed the mod-27 classifier.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::par::{self, Execution};

/// Sum of the base-3 digits of `j`.
pub fn wt3(mut j: u64) -> u32 {
    let mut s = 0;
    while j > 0 {
        s += (j % 3) as u32;
        j /= 3;
    }
    s
}

/// Base-3 digits of `j`, least significant first, padded to `n`.
pub fn base3_digits(mut j: u64, n: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(n);
    while j > 0 || out.len() < n {
        out.push((j % 3) as u8);
        j /= 3;
    }
    out
}

/// A residue set mod `q - 1`, sorted, duplicate free and closed under `s -> 3s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentSet {
    q_minus_1: u64,
    residues: Vec<u64>,
}

impl ExponentSet {
    pub fn new(q_minus_1: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self> {
        if q_minus_1 == 0 {
            return Err(Error::usage("exponent modulus q-1 must be positive"));
        }
        let set: BTreeSet<u64> = residues.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&s| s >= q_minus_1) {
            return Err(Error::domain(format!("residue {bad} is not reduced mod {q_minus_1}")));
        }
        let tripled: BTreeSet<u64> = set.iter().map(|&s| (3 * s) % q_minus_1).collect();
        if tripled != set {
            return Err(Error::domain("exponent set is not closed under multiplication by 3 mod q-1"));
        }
        Ok(ExponentSet { q_minus_1, residues: set.into_iter().collect() })
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn q_minus_1(&self) -> u64 {
        self.q_minus_1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexSet {
    W1,
    X,
    Y,
    Z,
}

/// The sets `W_1`, `X`, `Y`, `Z` for one extension degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexSetFamily {
    pub n: usize,
    pub q_minus_1: u64,
    pub w1: ExponentSet,
    pub x: ExponentSet,
    pub y: ExponentSet,
    pub z: ExponentSet,
}

impl IndexSetFamily {
    /// `X = {3^i + 3^j}`, `Y = {3^i + 3^j + 3^k : i,j,k distinct}`,
    /// `Z = {2*3^i + 3^j : i != j}`, all reduced mod `q - 1`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::usage("extension degree n must be at least 1"));
        }
        let m = 3u64.pow(n as u32) - 1;
        let p: Vec<u64> = (0..n as u32).map(|i| 3u64.pow(i)).collect();

        let w1 = p.iter().map(|&a| a % m);
        let mut x = Vec::new();
        let mut z = Vec::new();
        for i in 0..n {
            for j in 0..n {
                x.push((p[i] + p[j]) % m);
                if i != j {
                    z.push(2 * p[i] + p[j]);
                }
            }
        }
        let mut y = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    y.push(p[i] + p[j] + p[k]);
                }
            }
        }
        // Y and Z never wrap: 2*3^(n-1) + 3^(n-2) < 3^n - 1
        if let Some(&big) = y.iter().chain(&z).find(|&&r| r >= m) {
            return Err(Error::consistency(format!("index {big} exceeds q-2 without reduction")));
        }
        let family = IndexSetFamily {
            n,
            q_minus_1: m,
            w1: ExponentSet::new(m, w1)?,
            x: ExponentSet::new(m, x)?,
            y: ExponentSet::new(m, y)?,
            z: ExponentSet::new(m, z)?,
        };
        if family.y.residues.iter().any(|r| family.z.residues.binary_search(r).is_ok()) {
            return Err(Error::consistency("Y and Z overlap"));
        }
        Ok(family)
    }

    pub fn set(&self, which: IndexSet) -> &ExponentSet {
        match which {
            IndexSet::W1 => &self.w1,
            IndexSet::X => &self.x,
            IndexSet::Y => &self.y,
            IndexSet::Z => &self.z,
        }
    }
}

/// `tau_S(a)` as a value in {0,1,2}. Power sums of 0 vanish (`0^s = 0`
/// for every residue, including 0), so `tau_S(0) = 0`.
pub fn tau(ctx: &FieldContext, set: &ExponentSet, a: FieldElement) -> Result<u8> {
    if set.q_minus_1 != (ctx.order() - 1) as u64 {
        return Err(Error::usage("exponent set built for a different field"));
    }
    if a.is_zero() {
        return Ok(0);
    }
    let sum = set.residues.iter().fold(FieldElement::ZERO, |acc, &s| ctx.add(acc, ctx.pow(a, s)));
    if sum.index() > 2 {
        return Err(Error::consistency(format!("tau_S({a}) left the prime field")));
    }
    Ok(sum.index() as u8)
}

/// `(Tr(a), tau_X(a), tau_Y(a), tau_Z(a))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TraceProfile {
    pub tr: u8,
    pub tau_x: u8,
    pub tau_y: u8,
    pub tau_z: u8,
}

impl TraceProfile {
    /// `Tr * tau_X == Tr + 2 tau_Z` in F_3.
    pub fn satisfies_identity(&self) -> bool {
        (self.tr * self.tau_x) % 3 == (self.tr + 2 * self.tau_z) % 3
    }

    /// The `(Tr, tau_X, tau_Y)` triple the mod-27 table is keyed by.
    pub fn triple(&self) -> (u8, u8, u8) {
        (self.tr, self.tau_x, self.tau_y)
    }
}

pub fn trace_profile(ctx: &FieldContext, family: &IndexSetFamily, a: FieldElement) -> Result<TraceProfile> {
    let profile = TraceProfile {
        tr: ctx.trace(a),
        tau_x: tau(ctx, &family.x, a)?,
        tau_y: tau(ctx, &family.y, a)?,
        tau_z: tau(ctx, &family.z, a)?,
    };
    if !profile.satisfies_identity() {
        return Err(Error::consistency(format!("Tr*tau_X != Tr + 2 tau_Z at {a}: {profile:?}")));
    }
    Ok(profile)
}

/// Trace profile of every field element, indexed by packed index.
#[derive(Debug, Clone)]
pub struct ProfileTable {
    family: IndexSetFamily,
    profiles: Vec<TraceProfile>,
}

impl ProfileTable {
    pub fn build(ctx: &FieldContext, exec: Execution) -> Result<Self> {
        let family = IndexSetFamily::new(ctx.n())?;
        let profiles = par::try_map_indices(exec, ctx.order(), |i| trace_profile(ctx, &family, ctx.element(i)?))?;
        Ok(ProfileTable { family, profiles })
    }

    pub fn family(&self) -> &IndexSetFamily {
        &self.family
    }

    pub fn profile(&self, a: FieldElement) -> TraceProfile {
        self.profiles[a.index()]
    }

    pub fn profiles(&self) -> &[TraceProfile] {
        &self.profiles
    }

    /// Distinct `(Tr, tau_X, tau_Y)` triples attained over the field.
    pub fn attained_triples(&self) -> BTreeSet<(u8, u8, u8)> {
        self.profiles.iter().map(TraceProfile::triple).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sets_for_n3() {
        let f = IndexSetFamily::new(3).unwrap();
        assert_eq!(f.x.residues(), &[2, 4, 6, 10, 12, 18]);
        assert_eq!(f.y.residues(), &[13]);
        assert_eq!(f.z.residues(), &[5, 7, 11, 15, 19, 21]);
        assert_eq!(f.w1.residues(), &[1, 3, 9]);
    }

    #[test]
    fn small_degrees() {
        assert!(IndexSetFamily::new(2).unwrap().y.is_empty());
        assert!(IndexSetFamily::new(1).unwrap().z.is_empty());
        assert_eq!(IndexSetFamily::new(4).unwrap().y.len(), 4);
        assert!(IndexSetFamily::new(0).is_err());
    }

    #[test]
    fn x_is_weight_two() {
        for n in 2..=8 {
            let f = IndexSetFamily::new(n).unwrap();
            let by_weight: Vec<u64> = (1..f.q_minus_1).filter(|&r| wt3(r) == 2).collect();
            assert_eq!(f.x.residues(), by_weight.as_slice(), "n={n}");
        }
    }

    #[test]
    fn open_sets_rejected() {
        assert!(matches!(ExponentSet::new(26, [1, 3]), Err(Error::Domain(_))));
        assert!(matches!(ExponentSet::new(26, [30]), Err(Error::Domain(_))));
        assert!(ExponentSet::new(26, [1, 3, 9]).is_ok());
    }

    #[test]
    fn w1_gives_trace() {
        for n in 1..=5 {
            let ctx = FieldContext::new(n).unwrap();
            let fam = IndexSetFamily::new(n).unwrap();
            for a in ctx.elements() {
                assert_eq!(tau(&ctx, &fam.w1, a).unwrap(), ctx.trace(a));
            }
        }
    }

    #[test]
    fn tau_y_in_gf27() {
        let ctx = FieldContext::new(3).unwrap();
        let fam = IndexSetFamily::new(3).unwrap();
        for a in ctx.elements() {
            let p = ctx.pow(a, 13);
            assert!(p.index() <= 2);
            assert_eq!(tau(&ctx, &fam.y, a).unwrap() as usize, p.index());
        }
    }

    #[test]
    fn profile_identity_and_frobenius() {
        for n in 1..=6 {
            let ctx = FieldContext::new(n).unwrap();
            let table = ProfileTable::build(&ctx, Execution::Parallel).unwrap();
            let fam = table.family();
            for a in ctx.elements() {
                let p = table.profile(a);
                assert!(p.satisfies_identity());
                assert_eq!(table.profile(ctx.pow(a, 3)), p);
                assert_eq!(tau(&ctx, &fam.w1, ctx.pow(a, 3)).unwrap(), p.tr);
            }
            assert_eq!(table.profile(FieldElement::ZERO), TraceProfile { tr: 0, tau_x: 0, tau_y: 0, tau_z: 0 });
            let one = table.profile(FieldElement::ONE);
            assert_eq!(one.tr as usize, n % 3);
            assert_eq!(one.tau_x as usize, fam.x.len() % 3);
            assert_eq!(one.tau_y as usize, fam.y.len() % 3);
            assert_eq!(one.tau_z as usize, fam.z.len() % 3);
        }
    }

    #[test]
    fn weights() {
        assert_eq!(wt3(0), 0);
        assert_eq!(wt3(26), 6);
        assert_eq!(wt3(13), 3);
        assert_eq!(base3_digits(5, 3), vec![2, 1, 0]);
    }
}
