//! Truncated 3-adic rings.
//!
//! `UnramifiedRing` is `(Z/3^k)[x] / (f)` with `f` the field modulus lifted
//! to integer coefficients; it is the unramified extension of Z_3 of degree
//! `n`, truncated at precision `k`. Adjoining `pi` with `pi^2 = -3` gives
//! the ramified ring that holds `zeta` and the Gauss sums.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};

/// Coefficients stay below 3^19, so products fit in a u64.
pub const MAX_PRECISION: u32 = 19;

/// Element of the unramified ring: `n` coefficients in `[0, 3^k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct UnramifiedElem(pub Vec<u64>);

/// `u + v pi` with `pi^2 = -3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RamifiedElem {
    pub u: UnramifiedElem,
    pub v: UnramifiedElem,
}

/// pi-adic valuation of a truncated element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PiValuation {
    Exact(u32),
    /// The element vanishes at this precision, so only a lower bound is known.
    AtLeast(u32),
}

#[derive(Debug, Clone)]
pub struct UnramifiedRing {
    n: usize,
    k: u32,
    modulus_3k: u64,
    /// Lifted modulus coefficients `c_0..c_{n-1}`; leading 1 implicit.
    poly: Vec<u64>,
}

impl UnramifiedRing {
    pub fn new(field: &FieldContext, k: u32) -> Result<Self> {
        if k == 0 || k > MAX_PRECISION {
            return Err(Error::usage(format!("precision k must lie in 1..={MAX_PRECISION}, got {k}")));
        }
        Ok(UnramifiedRing {
            n: field.n(),
            k,
            modulus_3k: 3u64.pow(k),
            poly: field.spec().modulus.iter().map(|&c| c as u64).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    /// `3^k`.
    pub fn modulus(&self) -> u64 {
        self.modulus_3k
    }

    pub fn lifted_modulus(&self) -> &[u64] {
        &self.poly
    }

    fn reduce_int(&self, c: i64) -> u64 {
        c.rem_euclid(self.modulus_3k as i64) as u64
    }

    pub fn zero(&self) -> UnramifiedElem {
        UnramifiedElem(vec![0; self.n])
    }

    pub fn from_int(&self, c: i64) -> UnramifiedElem {
        let mut e = self.zero();
        e.0[0] = self.reduce_int(c);
        e
    }

    pub fn one(&self) -> UnramifiedElem {
        self.from_int(1)
    }

    /// Coefficient-wise lift of a field element with digits in {0,1,2}.
    pub fn naive_lift(&self, field: &FieldContext, a: FieldElement) -> UnramifiedElem {
        UnramifiedElem(field.coeffs(a).into_iter().map(u64::from).collect())
    }

    /// Reduction mod 3 back into the field.
    pub fn reduce_mod3(&self, field: &FieldContext, a: &UnramifiedElem) -> FieldElement {
        let digits: Vec<u8> = a.0.iter().map(|&c| (c % 3) as u8).collect();
        field.from_coeffs(&digits).expect("n digits in {0,1,2}")
    }

    pub fn add(&self, a: &UnramifiedElem, b: &UnramifiedElem) -> UnramifiedElem {
        let m = self.modulus_3k;
        UnramifiedElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + y) % m).collect())
    }

    pub fn neg(&self, a: &UnramifiedElem) -> UnramifiedElem {
        let m = self.modulus_3k;
        UnramifiedElem(a.0.iter().map(|&x| (m - x) % m).collect())
    }

    pub fn sub(&self, a: &UnramifiedElem, b: &UnramifiedElem) -> UnramifiedElem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &UnramifiedElem, c: i64) -> UnramifiedElem {
        let m = self.modulus_3k;
        let c = self.reduce_int(c);
        UnramifiedElem(a.0.iter().map(|&x| x * c % m).collect())
    }

    pub fn mul(&self, a: &UnramifiedElem, b: &UnramifiedElem) -> UnramifiedElem {
        let (n, m) = (self.n, self.modulus_3k);
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y % m) % m;
            }
        }
        // x^n = -(c_0 + c_1 x + ... + c_{n-1} x^{n-1})
        for d in (n..2 * n - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &f) in self.poly.iter().enumerate() {
                let t = c * f % m;
                prod[d - n + i] = (prod[d - n + i] + m - t) % m;
            }
        }
        prod.truncate(n);
        UnramifiedElem(prod)
    }

    pub fn pow(&self, a: &UnramifiedElem, mut e: u64) -> UnramifiedElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn is_zero(&self, a: &UnramifiedElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    /// Largest `e <= k` with every coefficient divisible by `3^e`.
    pub fn val3(&self, a: &UnramifiedElem) -> u32 {
        a.0.iter()
            .filter(|&&c| c != 0)
            .map(|&c| {
                let (mut c, mut v) = (c, 0);
                while c % 3 == 0 {
                    c /= 3;
                    v += 1;
                }
                v
            })
            .min()
            .unwrap_or(self.k)
    }

    pub fn divisible_by_3_pow(&self, a: &UnramifiedElem, e: u32) -> bool {
        self.val3(a) >= e
    }

    // ---- ramified layer ----

    pub fn embed(&self, u: UnramifiedElem) -> RamifiedElem {
        RamifiedElem { u, v: self.zero() }
    }

    pub fn ram_from_int(&self, c: i64) -> RamifiedElem {
        self.embed(self.from_int(c))
    }

    pub fn pi(&self) -> RamifiedElem {
        RamifiedElem { u: self.zero(), v: self.one() }
    }

    /// `pi^e` computed as `(-3)^(e/2)` times `pi` when `e` is odd.
    pub fn pi_pow(&self, e: u32) -> RamifiedElem {
        let mut half = self.one();
        for _ in 0..e / 2 {
            half = self.scale(&half, -3);
        }
        if e.is_multiple_of(2) {
            self.embed(half)
        } else {
            RamifiedElem { u: self.zero(), v: half }
        }
    }

    /// `zeta = (-1 - pi) / 2`, the cube root of unity with `pi = -2 zeta - 1`.
    pub fn zeta(&self) -> RamifiedElem {
        let half = self.inverse_of_two();
        RamifiedElem { u: self.from_int(-half), v: self.from_int(-half) }
    }

    fn inverse_of_two(&self) -> i64 {
        // 2 * (3^k + 1)/2 = 3^k + 1
        self.modulus_3k.div_ceil(2) as i64
    }

    pub fn ram_add(&self, a: &RamifiedElem, b: &RamifiedElem) -> RamifiedElem {
        RamifiedElem { u: self.add(&a.u, &b.u), v: self.add(&a.v, &b.v) }
    }

    pub fn ram_sub(&self, a: &RamifiedElem, b: &RamifiedElem) -> RamifiedElem {
        RamifiedElem { u: self.sub(&a.u, &b.u), v: self.sub(&a.v, &b.v) }
    }

    pub fn ram_neg(&self, a: &RamifiedElem) -> RamifiedElem {
        RamifiedElem { u: self.neg(&a.u), v: self.neg(&a.v) }
    }

    pub fn ram_scale(&self, a: &RamifiedElem, c: i64) -> RamifiedElem {
        RamifiedElem { u: self.scale(&a.u, c), v: self.scale(&a.v, c) }
    }

    /// `(u1 + v1 pi)(u2 + v2 pi) = u1 u2 - 3 v1 v2 + (u1 v2 + v1 u2) pi`
    pub fn ram_mul(&self, a: &RamifiedElem, b: &RamifiedElem) -> RamifiedElem {
        let vv = self.scale(&self.mul(&a.v, &b.v), -3);
        RamifiedElem {
            u: self.add(&self.mul(&a.u, &b.u), &vv),
            v: self.add(&self.mul(&a.u, &b.v), &self.mul(&a.v, &b.u)),
        }
    }

    pub fn ram_mul_unramified(&self, a: &RamifiedElem, c: &UnramifiedElem) -> RamifiedElem {
        RamifiedElem { u: self.mul(&a.u, c), v: self.mul(&a.v, c) }
    }

    pub fn ram_is_zero(&self, a: &RamifiedElem) -> bool {
        self.is_zero(&a.u) && self.is_zero(&a.v)
    }

    /// `min(2 val_3(u), 1 + 2 val_3(v))`.
    pub fn pi_valuation(&self, a: &RamifiedElem) -> PiValuation {
        let cap = 2 * self.k;
        let vu = if self.is_zero(&a.u) { cap } else { 2 * self.val3(&a.u) };
        let vv = if self.is_zero(&a.v) { cap } else { 1 + 2 * self.val3(&a.v) };
        let v = vu.min(vv);
        if v >= cap {
            PiValuation::AtLeast(cap)
        } else {
            PiValuation::Exact(v)
        }
    }

    /// Membership in `(pi^m)`: for `m = 2e` both parts lie in `(3^e)`; for
    /// `m = 2e + 1`, `u` lies in `(3^(e+1))` and `v` in `(3^e)`. Only
    /// decidable while `(pi^m)` contains `(3^k)`, i.e. `m <= 2k`.
    pub fn in_pi_ideal(&self, a: &RamifiedElem, m: u32) -> Result<bool> {
        if m > 2 * self.k {
            return Err(Error::usage(format!(
                "ideal (pi^{m}) needs precision k >= {}, ring has k = {}",
                m.div_ceil(2),
                self.k
            )));
        }
        let e = m / 2;
        let (eu, ev) = if m.is_multiple_of(2) { (e, e) } else { (e + 1, e) };
        Ok(self.divisible_by_3_pow(&a.u, eu) && self.divisible_by_3_pow(&a.v, ev))
    }

    /// Membership in `(3^e) = (pi^(2e))`.
    pub fn in_3_ideal(&self, a: &RamifiedElem, e: u32) -> Result<bool> {
        self.in_pi_ideal(a, 2 * e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize, k: u32) -> (FieldContext, UnramifiedRing) {
        let f = FieldContext::new(n).unwrap();
        let r = UnramifiedRing::new(&f, k).unwrap();
        (f, r)
    }

    #[test]
    fn zeta_and_pi_relations() {
        for k in 1..=6 {
            let (_, r) = ring(2, k);
            let z = r.zeta();
            let one = r.ram_from_int(1);
            let z2 = r.ram_mul(&z, &z);
            assert!(r.ram_is_zero(&r.ram_add(&r.ram_add(&z2, &z), &one)), "k={k}");
            let pi = r.pi();
            assert_eq!(r.ram_mul(&pi, &pi), r.ram_from_int(-3));
            // pi = -2 zeta - 1
            assert_eq!(pi, r.ram_sub(&r.ram_scale(&z, -2), &one));
            // pi = zeta - 1 mod pi^2
            let diff = r.ram_sub(&pi, &r.ram_sub(&z, &one));
            assert!(r.in_pi_ideal(&diff, 2).unwrap());
        }
    }

    #[test]
    fn valuations() {
        let (_, r) = ring(2, 3);
        assert_eq!(r.pi_valuation(&r.pi()), PiValuation::Exact(1));
        assert_eq!(r.pi_valuation(&r.ram_from_int(9)), PiValuation::Exact(4));
        assert_eq!(r.pi_valuation(&r.pi_pow(5)), PiValuation::Exact(5));
        assert_eq!(r.pi_valuation(&r.ram_from_int(27)), PiValuation::AtLeast(6));
        assert_eq!(r.pi_valuation(&r.pi_pow(6)), PiValuation::AtLeast(6));
    }

    #[test]
    fn ideal_membership() {
        let (_, r) = ring(2, 3);
        let x = r.ram_from_int(3);
        assert!(r.in_pi_ideal(&x, 2).unwrap());
        assert!(!r.in_pi_ideal(&x, 3).unwrap());
        assert!(r.in_pi_ideal(&r.pi_pow(3), 3).unwrap());
        assert!(!r.in_pi_ideal(&r.pi_pow(3), 4).unwrap());
        assert!(matches!(r.in_pi_ideal(&x, 7), Err(Error::Usage(_))));
    }

    #[test]
    fn reduction_matches_field() {
        let (f, r) = ring(3, 4);
        for a in f.elements() {
            for b in f.elements() {
                let prod = r.mul(&r.naive_lift(&f, a), &r.naive_lift(&f, b));
                assert_eq!(r.reduce_mod3(&f, &prod), f.mul(a, b));
            }
        }
    }

    #[test]
    fn precision_bounds() {
        let f = FieldContext::new(2).unwrap();
        assert!(UnramifiedRing::new(&f, 0).is_err());
        assert!(UnramifiedRing::new(&f, MAX_PRECISION + 1).is_err());
        let r = UnramifiedRing::new(&f, MAX_PRECISION).unwrap();
        let big = r.from_int(-1);
        assert_eq!(r.mul(&big, &big), r.one());
    }
}
