//! Ternary Kloosterman sums `K(a) = sum_x zeta^{Tr(x^{q-2} + a x)}`.
//!
//! The sum runs over all of GF(q), with the `x = 0` term contributing 1
//! since `0^{q-2} = 0`. For p = 3 every `K(a)` is a rational integer.
//!
//! Two routes are provided: a direct per-`a` count, and a radix-3 transform
//! over the additive group that produces all `q` values at once.

use std::collections::BTreeSet;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::eisenstein::EisensteinInt;
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::par::{self, Execution};

/// Seed used for sampled checks unless the caller picks another.
pub const DEFAULT_SEED: u64 = 0x5EED_0327;

type Eis = EisensteinInt<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Naive,
    Fast,
}

/// `K(a)` for every field element, indexed by packed index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KloostermanTable {
    pub n: usize,
    pub values: Vec<i64>,
    pub provenance: Provenance,
    /// Radix-3 butterflies performed (0 for the naive route).
    pub butterflies: u64,
}

impl KloostermanTable {
    pub fn get(&self, a: FieldElement) -> i64 {
        self.values[a.index()]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `Tr(x^{q-2})` for every `x`.
fn inverse_trace_table(ctx: &FieldContext) -> Vec<u8> {
    ctx.elements().map(|x| ctx.trace(ctx.inv_or_zero(x))).collect()
}

fn naive_with(ctx: &FieldContext, inv_trace: &[u8], a: FieldElement) -> Result<i64> {
    let mut counts = [0i64; 3];
    for x in ctx.elements() {
        let t = (inv_trace[x.index()] + ctx.trace(ctx.mul(a, x))) % 3;
        counts[t as usize] += 1;
    }
    if counts[1] != counts[2] {
        return Err(Error::consistency(format!("K({a}) is not real: N_1 = {}, N_2 = {}", counts[1], counts[2])));
    }
    Ok(counts[0] - counts[1])
}

/// Direct evaluation: with `N_t = #{x : Tr(x^{q-2} + a x) = t}`, realness
/// forces `N_1 = N_2` and `K(a) = N_0 - N_1`.
pub fn kloosterman_naive(ctx: &FieldContext, a: FieldElement) -> Result<i64> {
    naive_with(ctx, &inverse_trace_table(ctx), a)
}

/// All `q` values by the direct route. Quadratic in `q`.
pub fn kloosterman_all_naive(ctx: &FieldContext, exec: Execution) -> Result<KloostermanTable> {
    let inv_trace = inverse_trace_table(ctx);
    let values = par::try_map_indices(exec, ctx.order(), |i| naive_with(ctx, &inv_trace, elem_at(ctx, i)))?;
    Ok(KloostermanTable { n: ctx.n(), values, provenance: Provenance::Naive, butterflies: 0 })
}

fn elem_at(ctx: &FieldContext, i: usize) -> FieldElement {
    ctx.element(i).expect("index below q")
}

#[inline]
fn butterfly(x0: &mut Eis, x1: &mut Eis, x2: &mut Eis) {
    let (a, b, c) = (*x0, *x1, *x2);
    *x0 = a + b + c;
    *x1 = a + b.mul_zeta() + c.mul_zeta2();
    *x2 = a + b.mul_zeta2() + c.mul_zeta();
}

fn butterfly_block(block: &mut [Eis], stride: usize, exec: Execution) {
    let (lo, rest) = block.split_at_mut(stride);
    let (mid, hi) = rest.split_at_mut(stride);
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && stride >= 1024 {
        use rayon::prelude::*;
        lo.par_iter_mut().zip(mid.par_iter_mut()).zip(hi.par_iter_mut()).for_each(|((a, b), c)| butterfly(a, b, c));
        return;
    }
    let _ = exec;
    for ((a, b), c) in lo.iter_mut().zip(mid.iter_mut()).zip(hi.iter_mut()) {
        butterfly(a, b, c);
    }
}

/// In-place transform `W[c] = sum_x data[x] * zeta^{sum_i x_i c_i}` over the
/// base-3 digits of the index. Returns the number of butterflies.
pub fn radix3_transform(data: &mut [Eis], exec: Execution) -> Result<u64> {
    let len = data.len();
    let mut n = 0;
    let mut size = 1;
    while size < len {
        size *= 3;
        n += 1;
    }
    if size != len {
        return Err(Error::usage(format!("transform length {len} is not a power of 3")));
    }
    let mut stride = 1;
    for _ in 0..n {
        let block_len = 3 * stride;
        #[cfg(feature = "parallel")]
        if exec.is_parallel() && len / block_len >= 8 {
            use rayon::prelude::*;
            data.par_chunks_mut(block_len).for_each(|block| butterfly_block(block, stride, Execution::Sequential));
            stride = block_len;
            continue;
        }
        for block in data.chunks_mut(block_len) {
            butterfly_block(block, stride, exec);
        }
        stride = block_len;
    }
    Ok(if n == 0 { 0 } else { n as u64 * (len as u64 / 3) })
}

/// Packed index of `(Tr(b_0 a), .., Tr(b_{n-1} a))`, where `b_i` is the
/// power basis. The map is `a -> G a` with `G_ij = Tr(b_i b_j)`.
fn character_index_map(ctx: &FieldContext) -> Vec<usize> {
    let n = ctx.n();
    let basis: Vec<FieldElement> = (0..n).map(|i| ctx.element(3usize.pow(i as u32)).expect("basis element")).collect();
    let gram: Vec<Vec<u32>> =
        basis.iter().map(|&bi| basis.iter().map(|&bj| ctx.trace(ctx.mul(bi, bj)) as u32).collect()).collect();
    ctx.elements()
        .map(|a| {
            let coeffs = ctx.coeffs(a);
            (0..n).rev().fold(0usize, |acc, i| {
                let c: u32 = gram[i].iter().zip(&coeffs).map(|(&g, &x)| g * x as u32).sum();
                acc * 3 + (c % 3) as usize
            })
        })
        .collect()
}

/// All `q` values of `K` via one radix-3 transform of `zeta^{Tr(x^{q-2})}`.
pub fn kloosterman_all_fast(ctx: &FieldContext, exec: Execution) -> Result<KloostermanTable> {
    let mut data: Vec<Eis> = inverse_trace_table(ctx).into_iter().map(Eis::zeta_pow).collect();
    let butterflies = radix3_transform(&mut data, exec)?;
    if let Some(pos) = data.iter().position(|w| !w.is_rational()) {
        return Err(Error::consistency(format!("transform output {pos} has nonzero zeta part {}", data[pos].v)));
    }
    let values = character_index_map(ctx).into_iter().map(|c| data[c].u).collect();
    Ok(KloostermanTable { n: ctx.n(), values, provenance: Provenance::Fast, butterflies })
}

/// `count` distinct elements drawn with a seeded ChaCha8 stream, in index
/// order. Asking for at least `q` returns the whole field.
pub fn sample_elements(ctx: &FieldContext, count: usize, seed: u64) -> Vec<FieldElement> {
    let q = ctx.order();
    if count >= q {
        return ctx.elements().collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<usize> = index::sample(&mut rng, q, count).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| elem_at(ctx, i)).collect()
}

/// `floor(2 sqrt(q))`.
pub fn weil_bound(q: u64) -> i64 {
    let target = 4 * q;
    let mut r = (target as f64).sqrt() as u64;
    while r * r > target {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= target {
        r += 1;
    }
    r as i64
}

/// Which multiples of 3 in `[-2 sqrt q, 2 sqrt q]` a table attains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub n: usize,
    /// `floor(2 sqrt q)`
    pub bound: i64,
    pub attained: Vec<i64>,
    /// Multiples of 3 inside the closed range that never occur.
    pub missing: Vec<i64>,
    /// Multiples of 3 strictly inside the open range that never occur.
    pub missing_open: Vec<i64>,
    /// Elements with `|K(a)| = 2 sqrt q` exactly, as `(index, K)`.
    pub boundary_hits: Vec<(usize, i64)>,
    /// Elements with `|K(a)| > 2 sqrt q`, as `(index, K)`.
    pub out_of_range: Vec<(usize, i64)>,
    pub all_divisible_by_3: bool,
}

impl CoverageReport {
    pub fn closed_bound_holds(&self) -> bool {
        self.out_of_range.is_empty()
    }

    pub fn open_range_fully_attained(&self) -> bool {
        self.missing_open.is_empty()
    }
}

pub fn value_coverage(table: &KloostermanTable) -> CoverageReport {
    let q = 3u64.pow(table.n as u32);
    let bound = weil_bound(q);
    let four_q = 4 * q as i64;
    let attained: BTreeSet<i64> = table.values.iter().copied().collect();
    let mut missing = Vec::new();
    let mut missing_open = Vec::new();
    let start = -bound + (bound % 3);
    for v in (start..=bound).step_by(3) {
        if attained.contains(&v) {
            continue;
        }
        missing.push(v);
        if v * v < four_q {
            missing_open.push(v);
        }
    }
    let mut boundary_hits = Vec::new();
    let mut out_of_range = Vec::new();
    for (i, &k) in table.values.iter().enumerate() {
        match (k * k).cmp(&four_q) {
            std::cmp::Ordering::Equal => boundary_hits.push((i, k)),
            std::cmp::Ordering::Greater => out_of_range.push((i, k)),
            std::cmp::Ordering::Less => {}
        }
    }
    CoverageReport {
        n: table.n,
        bound,
        attained: attained.into_iter().collect(),
        missing,
        missing_open,
        boundary_hits,
        out_of_range,
        all_divisible_by_3: table.values.iter().all(|k| k % 3 == 0),
    }
}
