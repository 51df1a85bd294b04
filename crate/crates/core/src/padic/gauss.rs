//! Teichmüller character and Gauss sums `g(j) = -sum_x omega(x)^{-j} zeta^{Tr x}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::par::{self, Execution};
use crate::traces::wt3;

use super::ring::{PiValuation, RamifiedElem, UnramifiedElem, UnramifiedRing};

/// Teichmüller lift of `a`: the root of `X^q = X` reducing to `a` mod 3.
/// Found by iterating `X <- X^q` from the coefficient-wise lift; each round
/// gains one 3-adic digit, so `k` rounds suffice.
pub fn teichmuller(ring: &UnramifiedRing, field: &FieldContext, a: FieldElement) -> UnramifiedElem {
    let q = field.order() as u64;
    let mut x = ring.naive_lift(field, a);
    for _ in 0..=ring.precision() {
        let next = ring.pow(&x, q);
        if next == x {
            break;
        }
        x = next;
    }
    x
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaussSumRecord {
    pub j: u64,
    pub weight: u32,
    pub value: RamifiedElem,
}

/// Everything needed to evaluate Gauss sums over one field at one precision.
///
/// `omega(g)` for the field generator `g` plays the role of the primitive
/// `(q-1)`-th root of unity, so `omega(g^l)` is just its `l`-th power.
#[derive(Debug, Clone)]
pub struct GaussEngine<'f> {
    field: &'f FieldContext,
    ring: UnramifiedRing,
    /// `omega(g)^l` for `l` in `[0, q-2]`.
    root_powers: Vec<UnramifiedElem>,
    /// `zeta^0, zeta^1, zeta^2`.
    zeta_powers: [RamifiedElem; 3],
}

impl<'f> GaussEngine<'f> {
    pub fn new(field: &'f FieldContext, k: u32) -> Result<Self> {
        let ring = UnramifiedRing::new(field, k)?;
        let xi = teichmuller(&ring, field, field.generator());
        let order = field.order() - 1;
        let mut root_powers = Vec::with_capacity(order);
        let mut cur = ring.one();
        for _ in 0..order {
            root_powers.push(cur.clone());
            cur = ring.mul(&cur, &xi);
        }
        if cur != ring.one() {
            return Err(Error::consistency("Teichmüller lift of the generator is not a (q-1)-th root of unity"));
        }
        let zeta = ring.zeta();
        let zeta2 = ring.ram_mul(&zeta, &zeta);
        let zeta_powers = [ring.ram_from_int(1), zeta, zeta2];
        Ok(GaussEngine { field, ring, root_powers, zeta_powers })
    }

    pub fn field(&self) -> &'f FieldContext {
        self.field
    }

    pub fn ring(&self) -> &UnramifiedRing {
        &self.ring
    }

    pub fn q_minus_1(&self) -> u64 {
        (self.field.order() - 1) as u64
    }

    pub fn zeta_power(&self, e: u8) -> &RamifiedElem {
        &self.zeta_powers[(e % 3) as usize]
    }

    /// `omega(a)`, with `omega(0) = 0`.
    pub fn omega(&self, a: FieldElement) -> UnramifiedElem {
        match self.field.tables().log(a) {
            Some(l) => self.root_powers[l].clone(),
            None => self.ring.zero(),
        }
    }

    /// `omega(a)^e`; the exponent is read mod `q - 1` and `omega(0)^e = 0`.
    pub fn omega_pow(&self, a: FieldElement, e: i64) -> UnramifiedElem {
        match self.field.tables().log(a) {
            Some(l) => {
                let m = self.q_minus_1() as i64;
                let idx = ((l as i64 % m) * e.rem_euclid(m)).rem_euclid(m);
                self.root_powers[idx as usize].clone()
            }
            None => self.ring.zero(),
        }
    }

    fn check_exponent(&self, j: u64) -> Result<()> {
        let top = self.q_minus_1();
        if j == 0 || j >= top {
            return Err(Error::usage(format!("Gauss sum exponent must lie in [1, {}], got {j}", top - 1)));
        }
        Ok(())
    }

    /// Raw evaluation without the valuation postcondition.
    pub(crate) fn gauss_sum_value(&self, j: u64) -> Result<RamifiedElem> {
        self.check_exponent(j)?;
        let r = &self.ring;
        let m = self.q_minus_1();
        // Collect the omega^{-j} mass on each trace class, then pair with zeta^t.
        let mut by_trace = [r.zero(), r.zero(), r.zero()];
        for l in 0..m {
            let x = self.field.tables().antilog(l as usize);
            let t = self.field.trace(x) as usize;
            let e = (m - (l * j) % m) % m;
            by_trace[t] = r.add(&by_trace[t], &self.root_powers[e as usize]);
        }
        let mut sum = r.ram_from_int(0);
        for (t, mass) in by_trace.iter().enumerate() {
            sum = r.ram_add(&sum, &r.ram_mul_unramified(&self.zeta_powers[t], mass));
        }
        Ok(r.ram_neg(&sum))
    }

    /// `g(j)` for `1 <= j <= q-2`. Postcondition: the pi-adic valuation of
    /// the result equals `wt_3(j)` (or the value vanishes at this precision
    /// when `wt_3(j) >= 2k`).
    pub fn gauss_sum(&self, j: u64) -> Result<GaussSumRecord> {
        let value = self.gauss_sum_value(j)?;
        let weight = wt3(j);
        let ok = match self.ring.pi_valuation(&value) {
            PiValuation::Exact(v) => v == weight,
            PiValuation::AtLeast(v) => weight >= v,
        };
        if !ok {
            return Err(Error::consistency(format!(
                "g({j}) has pi-valuation {:?}, expected wt_3 = {weight}",
                self.ring.pi_valuation(&value)
            )));
        }
        Ok(GaussSumRecord { j, weight, value })
    }

    /// `g(1), .., g(q-2)` in order.
    pub fn all_gauss_sums(&self, exec: Execution) -> Result<Vec<GaussSumRecord>> {
        par::try_map_indices(exec, (self.q_minus_1() - 1) as usize, |i| self.gauss_sum(i as u64 + 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmuller_basics() {
        let f = FieldContext::new(2).unwrap();
        let r = UnramifiedRing::new(&f, 3).unwrap();
        assert_eq!(teichmuller(&r, &f, FieldElement::ONE), r.one());
        assert_eq!(teichmuller(&r, &f, f.from_f3(2)), r.from_int(26));
        assert_eq!(teichmuller(&r, &f, FieldElement::ZERO), r.zero());
    }

    #[test]
    fn teichmuller_is_multiplicative_lift() {
        for n in 1..=4 {
            let f = FieldContext::new(n).unwrap();
            let engine = GaussEngine::new(&f, 3).unwrap();
            let r = engine.ring();
            let q = f.order() as u64;
            for a in f.elements() {
                let w = engine.omega(a);
                assert_eq!(w, teichmuller(r, &f, a));
                assert_eq!(r.reduce_mod3(&f, &w), a);
                assert_eq!(r.pow(&w, q), w);
                assert_eq!(r.pow(&w, 3), engine.omega(f.pow(a, 3)));
                for b in f.elements() {
                    assert_eq!(r.mul(&w, &engine.omega(b)), engine.omega(f.mul(a, b)));
                }
            }
        }
    }

    #[test]
    fn exponent_range() {
        let f = FieldContext::new(2).unwrap();
        let e = GaussEngine::new(&f, 3).unwrap();
        assert!(matches!(e.gauss_sum(0), Err(Error::Usage(_))));
        assert!(matches!(e.gauss_sum(8), Err(Error::Usage(_))));
        assert!(e.gauss_sum(7).is_ok());
    }

    #[test]
    fn g1_squared_in_gf9() {
        let f = FieldContext::new(2).unwrap();
        let e = GaussEngine::new(&f, 2).unwrap();
        let r = e.ring();
        let g = e.gauss_sum(1).unwrap().value;
        let sq = r.ram_mul(&g, &g);
        assert_eq!(sq, r.ram_from_int(6));
    }

    #[test]
    fn frobenius_invariance() {
        for n in 2..=4 {
            let f = FieldContext::new(n).unwrap();
            let e = GaussEngine::new(&f, 4).unwrap();
            let m = e.q_minus_1();
            for j in 1..m {
                assert_eq!(e.gauss_sum_value(j).unwrap(), e.gauss_sum_value(3 * j % m).unwrap(), "n={n} j={j}");
            }
        }
    }
}
