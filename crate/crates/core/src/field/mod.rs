//! Arithmetic in GF(3^n).
//!
//! Elements are base-3 coefficient vectors in the power basis of the field
//! modulus. They are handled as their packed index `sum c_i 3^i`, which is
//! also the key into every per-element table in this crate, so iteration
//! order over the field is fixed by the modulus alone.
//!
//! Multiplication, inversion and powering go through discrete log tables
//! built once per field; addition works digit-wise.

mod poly;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the extension degree. Tables have `3^n` entries.
pub const DEFAULT_MAX_DEGREE: usize = 10;

/// Packed indices are `u32`; 3^20 still fits.
pub const HARD_MAX_DEGREE: usize = 20;

/// A field element, stored as its packed base-3 index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Parameters that pin down a concrete model of GF(3^n).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub n: usize,
    /// `c_0 .. c_{n-1}` of the monic modulus; the leading 1 is implicit.
    pub modulus: Vec<u8>,
    pub generator: FieldElement,
}

impl FieldSpec {
    /// Human-readable modulus, e.g. `x^3 + 2x + 1`.
    pub fn modulus_string(&self) -> String {
        let mut terms = vec![format!("x^{}", self.n)];
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 || i == 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => c.to_string(),
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{i}"),
            });
        }
        if self.n == 1 {
            terms[0] = "x".into();
        }
        terms.join(" + ")
    }
}

/// Discrete log / antilog tables with respect to the field generator.
#[derive(Debug, Clone)]
pub struct LogTables {
    antilog: Vec<u32>,
    log: Vec<u32>,
}

impl LogTables {
    const NO_LOG: u32 = u32::MAX;

    /// `generator^exp`, exponent taken mod `q - 1`.
    pub fn antilog(&self, exp: usize) -> FieldElement {
        FieldElement(self.antilog[exp % self.antilog.len()])
    }

    /// Exponent in `[0, q-2]`, `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<usize> {
        match self.log[a.index()] {
            Self::NO_LOG => None,
            l => Some(l as usize),
        }
    }
}

/// Configures and builds a [`FieldContext`].
#[derive(Debug, Clone)]
pub struct FieldBuilder {
    n: usize,
    modulus: Option<Vec<u8>>,
    max_degree: usize,
}

impl FieldBuilder {
    /// Use a specific monic modulus, given as `c_0 .. c_{n-1}`.
    pub fn modulus(mut self, coeffs: Vec<u8>) -> Self {
        self.modulus = Some(coeffs);
        self
    }

    pub fn max_degree(mut self, cap: usize) -> Self {
        self.max_degree = cap;
        self
    }

    pub fn build(self) -> Result<FieldContext> {
        let n = self.n;
        if n == 0 {
            return Err(Error::usage("extension degree n must be at least 1"));
        }
        let cap = self.max_degree.min(HARD_MAX_DEGREE);
        if n > cap {
            return Err(Error::usage(format!("extension degree {n} exceeds the configured cap of {cap}")));
        }
        let modulus = match self.modulus {
            Some(m) => {
                if m.len() != n {
                    return Err(Error::usage(format!(
                        "modulus override must have {n} coefficients (c_0..c_{}), got {}",
                        n - 1,
                        m.len()
                    )));
                }
                if m.iter().any(|&c| c > 2) {
                    return Err(Error::usage("modulus coefficients must lie in {0,1,2}"));
                }
                let degree = poly::smallest_factor_degree(&monic(&m));
                if degree < n {
                    return Err(Error::Reducible { degree });
                }
                m
            }
            None => default_modulus(n),
        };
        FieldContext::from_modulus(n, modulus)
    }
}

fn monic(modulus: &[u8]) -> Vec<u8> {
    let mut f = modulus.to_vec();
    f.push(1);
    f
}

/// Smallest irreducible monic modulus, ordered by packed index of
/// `(c_0, .., c_{n-1})`.
fn default_modulus(n: usize) -> Vec<u8> {
    let q = 3usize.pow(n as u32);
    (0..q)
        .map(|idx| digits(idx, n))
        .find(|m| poly::smallest_factor_degree(&monic(m)) == n)
        .expect("irreducible polynomials exist in every degree")
}

fn digits(mut idx: usize, n: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push((idx % 3) as u8);
        idx /= 3;
    }
    out
}

fn pack(coeffs: &[u8]) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * 3 + c as u32)
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Immutable GF(3^n) context: modulus, generator, log tables and the
/// absolute trace of every element.
#[derive(Debug, Clone)]
pub struct FieldContext {
    spec: FieldSpec,
    q: usize,
    tables: LogTables,
    trace: Vec<u8>,
}

impl FieldContext {
    /// GF(3^n) with the default modulus and degree cap.
    pub fn new(n: usize) -> Result<Self> {
        Self::builder(n).build()
    }

    pub fn builder(n: usize) -> FieldBuilder {
        FieldBuilder { n, modulus: None, max_degree: DEFAULT_MAX_DEGREE }
    }

    fn from_modulus(n: usize, modulus: Vec<u8>) -> Result<Self> {
        let q = 3usize.pow(n as u32);
        let f = monic(&modulus);
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let poly_pow = |base: &[u8], mut e: u64| {
            let mut acc: Vec<u8> = vec![1];
            let mut b = poly::rem(base, &f);
            while e > 0 {
                if e & 1 == 1 {
                    acc = poly::mul_mod(&acc, &b, &f);
                }
                b = poly::mul_mod(&b, &b, &f);
                e >>= 1;
            }
            acc
        };
        let is_one = |p: &[u8]| p == [1];
        let generator = (1..q)
            .map(|idx| digits(idx, n))
            .find(|g| {
                let mut g = g.clone();
                poly::trim(&mut g);
                is_one(&poly_pow(&g, order)) && factors.iter().all(|&r| !is_one(&poly_pow(&g, order / r)))
            })
            .ok_or_else(|| Error::consistency("no multiplicative generator found"))?;

        let mut antilog = Vec::with_capacity(q - 1);
        let mut log = vec![LogTables::NO_LOG; q];
        let mut cur: Vec<u8> = vec![1];
        let mut gen_poly = generator.clone();
        poly::trim(&mut gen_poly);
        for l in 0..q - 1 {
            let mut padded = cur.clone();
            padded.resize(n, 0);
            let idx = pack(&padded);
            if log[idx as usize] != LogTables::NO_LOG {
                return Err(Error::consistency("generator order is smaller than q-1"));
            }
            log[idx as usize] = l as u32;
            antilog.push(idx);
            cur = poly::mul_mod(&cur, &gen_poly, &f);
        }
        if !is_one(&cur) {
            return Err(Error::consistency("generator^(q-1) != 1"));
        }

        let mut ctx = FieldContext {
            spec: FieldSpec { n, modulus, generator: FieldElement(pack(&generator)) },
            q,
            tables: LogTables { antilog, log },
            trace: Vec::new(),
        };
        ctx.trace = ctx.build_trace_table()?;
        Ok(ctx)
    }

    /// Trace is F_3-linear: evaluate it on the power basis via Frobenius
    /// orbits and extend.
    fn build_trace_table(&self) -> Result<Vec<u8>> {
        let n = self.spec.n;
        let basis: Vec<u8> =
            (0..n).map(|i| self.trace_by_frobenius(FieldElement(3u32.pow(i as u32)))).collect::<Result<_>>()?;
        Ok((0..self.q)
            .map(|idx| {
                let s: u32 = digits(idx, n).iter().zip(&basis).map(|(&c, &t)| c as u32 * t as u32).sum();
                (s % 3) as u8
            })
            .collect())
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// Field order `q = 3^n`.
    pub fn order(&self) -> usize {
        self.q
    }

    pub fn generator(&self) -> FieldElement {
        self.spec.generator
    }

    pub fn tables(&self) -> &LogTables {
        &self.tables
    }

    /// Element with the given packed index.
    pub fn element(&self, index: usize) -> Result<FieldElement> {
        if index >= self.q {
            return Err(Error::usage(format!("element index {index} out of range for q = {}", self.q)));
        }
        Ok(FieldElement(index as u32))
    }

    /// All elements in packed-index order.
    pub fn elements(&self) -> impl ExactSizeIterator<Item = FieldElement> + '_ {
        (0..self.q as u32).map(FieldElement)
    }

    /// The prime-field element `c` (0, 1 or 2) embedded in GF(3^n).
    pub fn from_f3(&self, c: u8) -> FieldElement {
        FieldElement((c % 3) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u8]) -> Result<FieldElement> {
        if coeffs.len() != self.spec.n {
            return Err(Error::usage(format!("expected {} coefficients, got {}", self.spec.n, coeffs.len())));
        }
        if coeffs.iter().any(|&c| c > 2) {
            return Err(Error::usage("coefficients must lie in {0,1,2}"));
        }
        Ok(FieldElement(pack(coeffs)))
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u8> {
        digits(a.index(), self.spec.n)
    }

    /// Text form `c0,c1,...,c_{n-1}`.
    pub fn format_coeffs(&self, a: FieldElement) -> String {
        self.coeffs(a).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    /// Parses either the comma-separated coefficient form or a packed index.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let text = text.trim();
        if text.contains(',') || self.spec.n == 1 && text.len() == 1 {
            let coeffs = text
                .split(',')
                .map(|s| s.trim().parse::<u8>().map_err(|_| Error::usage(format!("bad coefficient {s:?}"))))
                .collect::<Result<Vec<_>>>()?;
            self.from_coeffs(&coeffs)
        } else {
            let idx =
                text.parse::<usize>().map_err(|_| Error::usage(format!("cannot parse field element {text:?}")))?;
            self.element(idx)
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % 3 + y % 3) % 3) * place;
            x /= 3;
            y /= 3;
            place *= 3;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let mut x = a.0;
        let (mut out, mut place) = (0u32, 1u32);
        while x > 0 {
            out += ((3 - x % 3) % 3) * place;
            x /= 3;
            place *= 3;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match (self.tables.log(a), self.tables.log(b)) {
            (Some(la), Some(lb)) => self.tables.antilog(la + lb),
            _ => FieldElement::ZERO,
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        let l = self.tables.log(a).ok_or_else(|| Error::domain("inverse of zero"))?;
        Ok(self.tables.antilog(self.q - 1 - l))
    }

    /// `a^(q-2)`: the inverse for nonzero `a`, and 0 at 0.
    pub fn inv_or_zero(&self, a: FieldElement) -> FieldElement {
        self.inv(a).unwrap_or(FieldElement::ZERO)
    }

    /// `a^e` with `0^0 = 1`; the exponent is reduced mod `q - 1` for nonzero `a`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        match self.tables.log(a) {
            Some(l) => {
                let m = (self.q - 1) as u64;
                self.tables.antilog(((l as u64 * (e % m)) % m) as usize)
            }
            None if e == 0 => FieldElement::ONE,
            None => FieldElement::ZERO,
        }
    }

    /// Absolute trace `Tr(a)` in {0,1,2}.
    pub fn trace(&self, a: FieldElement) -> u8 {
        self.trace[a.index()]
    }

    /// `a + a^3 + ... + a^(3^(n-1))` evaluated directly; must land in F_3.
    pub fn trace_by_frobenius(&self, a: FieldElement) -> Result<u8> {
        let mut acc = FieldElement::ZERO;
        let mut conj = a;
        for _ in 0..self.spec.n {
            acc = self.add(acc, conj);
            conj = self.pow(conj, 3);
        }
        if acc.0 > 2 {
            return Err(Error::consistency(format!("trace of {a} left the prime field")));
        }
        Ok(acc.0 as u8)
    }

    /// `T_r = { a : Tr(a) = r }` in packed-index order.
    pub fn trace_level_set(&self, r: u8) -> Vec<FieldElement> {
        self.elements().filter(|&a| self.trace(a) == r % 3).collect()
    }

    pub fn is_square(&self, a: FieldElement) -> bool {
        self.tables.log(a).is_none_or(|l| l % 2 == 0)
    }

    /// `generator^(log a / 2)`; `sqrt(0) = 0`.
    pub fn sqrt(&self, a: FieldElement) -> Result<FieldElement> {
        match self.tables.log(a) {
            None => Ok(FieldElement::ZERO),
            Some(l) if l % 2 == 0 => Ok(self.tables.antilog(l / 2)),
            Some(_) => Err(Error::domain(format!("{a} is not a square"))),
        }
    }
}
