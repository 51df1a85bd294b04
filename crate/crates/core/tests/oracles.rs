//! Independent oracles: everything here recomputes from schoolbook
//! polynomial arithmetic over F_3 without touching the library's log
//! tables, trace table or transform.

use std::time::Instant;

use ternary_kloosterman::congruence::{verify_sweep, Sweep};
use ternary_kloosterman::field::FieldContext;
use ternary_kloosterman::kloosterman::{kloosterman_all_fast, kloosterman_all_naive};
use ternary_kloosterman::par::Execution;
use ternary_kloosterman::traces::ProfileTable;
use ternary_kloosterman::Error;

fn digits(mut idx: usize, len: usize) -> Vec<u8> {
    (0..len)
        .map(|_| {
            let d = (idx % 3) as u8;
            idx /= 3;
            d
        })
        .collect()
}

fn poly_mul(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % 3;
        }
    }
    out
}

/// Monic polynomial from packed low coefficients.
fn monic(idx: usize, deg: usize) -> Vec<u8> {
    let mut p = digits(idx, deg);
    p.push(1);
    p
}

/// Reducible iff it is a product of two monic polynomials of degree >= 1.
fn brute_reducible(f: &[u8]) -> bool {
    let n = f.len() - 1;
    (1..=n / 2).any(|d| {
        (0..3usize.pow(d as u32))
            .any(|gi| (0..3usize.pow((n - d) as u32)).any(|hi| poly_mul(&monic(gi, d), &monic(hi, n - d)) == f))
    })
}

/// Schoolbook GF(3^n) model.
struct Model {
    n: usize,
    modulus: Vec<u8>,
}

impl Model {
    fn mul(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let mut p = poly_mul(a, b);
        for d in (self.n..p.len()).rev() {
            let c = p[d];
            p[d] = 0;
            for i in 0..self.n {
                p[d - self.n + i] = (p[d - self.n + i] + 3 * 3 - c * self.modulus[i]) % 3;
            }
        }
        p.truncate(self.n);
        p.resize(self.n, 0);
        p
    }

    fn add(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        a.iter().zip(b).map(|(x, y)| (x + y) % 3).collect()
    }

    fn trace(&self, a: &[u8]) -> u8 {
        let mut acc = vec![0; self.n];
        let mut conj = a.to_vec();
        for _ in 0..self.n {
            acc = self.add(&acc, &conj);
            conj = self.mul(&self.mul(&conj, &conj), &conj);
        }
        assert!(acc[1..].iter().all(|&c| c == 0));
        acc[0]
    }

    fn inv_or_zero(&self, a: &[u8]) -> Vec<u8> {
        let q = 3usize.pow(self.n as u32);
        let one = digits(1, self.n);
        (1..q).map(|i| digits(i, self.n)).find(|b| self.mul(a, b) == one).unwrap_or_else(|| vec![0; self.n])
    }

    fn kloosterman(&self, a: &[u8]) -> i64 {
        let q = 3usize.pow(self.n as u32);
        let mut counts = [0i64; 3];
        for xi in 0..q {
            let x = digits(xi, self.n);
            let t = (self.trace(&self.inv_or_zero(&x)) + self.trace(&self.mul(a, &x))) % 3;
            counts[t as usize] += 1;
        }
        assert_eq!(counts[1], counts[2]);
        counts[0] - counts[1]
    }
}

#[test]
fn default_modulus_is_first_irreducible() {
    for n in 1..=5 {
        let expected = (0..3usize.pow(n as u32)).find(|&i| !brute_reducible(&monic(i, n))).unwrap();
        let ctx = FieldContext::new(n).unwrap();
        assert_eq!(ctx.spec().modulus, digits(expected, n), "n={n}");
    }
    assert_eq!(FieldContext::new(2).unwrap().spec().modulus_string(), "x^2 + 1");
    assert_eq!(FieldContext::new(3).unwrap().spec().modulus_string(), "x^3 + 2x + 1");
}

#[test]
fn override_accepted_iff_irreducible() {
    for n in 2..=4 {
        for idx in 0..3usize.pow(n as u32) {
            let coeffs = digits(idx, n);
            let built = FieldContext::builder(n).modulus(coeffs.clone()).build();
            if brute_reducible(&monic(idx, n)) {
                assert!(matches!(built, Err(Error::Reducible { .. })), "n={n} {coeffs:?}");
            } else {
                assert!(built.is_ok(), "n={n} {coeffs:?}");
            }
        }
    }
}

#[test]
fn reported_factor_degree_is_smallest() {
    let quad = [2u8, 1, 1]; // x^2 + x + 2, irreducible
    let square = poly_mul(&quad, &quad);
    let err = FieldContext::builder(4).modulus(square[..4].to_vec()).build().unwrap_err();
    assert_eq!(err, Error::Reducible { degree: 2 });
    let cubic_times_linear = poly_mul(&[1, 2, 0, 1], &[1, 1]);
    let err = FieldContext::builder(4).modulus(cubic_times_linear[..4].to_vec()).build().unwrap_err();
    assert_eq!(err, Error::Reducible { degree: 1 });
}

#[test]
fn table_arithmetic_matches_schoolbook() {
    for n in 1..=4 {
        let ctx = FieldContext::new(n).unwrap();
        let model = Model { n, modulus: ctx.spec().modulus.clone() };
        for a in ctx.elements() {
            let ca = ctx.coeffs(a);
            assert_eq!(ctx.trace(a), model.trace(&ca));
            for b in ctx.elements() {
                let cb = ctx.coeffs(b);
                assert_eq!(ctx.coeffs(ctx.mul(a, b)), model.mul(&ca, &cb));
                assert_eq!(ctx.coeffs(ctx.add(a, b)), model.add(&ca, &cb));
            }
        }
    }
}

#[test]
fn kloosterman_values_match_schoolbook_sum() {
    for n in 1..=4 {
        let ctx = FieldContext::new(n).unwrap();
        let model = Model { n, modulus: ctx.spec().modulus.clone() };
        let fast = kloosterman_all_fast(&ctx, Execution::Parallel).unwrap();
        for a in ctx.elements() {
            assert_eq!(fast.get(a), model.kloosterman(&ctx.coeffs(a)), "n={n} a={a}");
        }
    }
    // GF(9), a = 1: N_0 = 7, N_1 = N_2 = 1
    let model = Model { n: 2, modulus: vec![1, 0] };
    assert_eq!(model.kloosterman(&[1, 0]), 6);
}

#[test]
fn results_do_not_depend_on_the_modulus() {
    for n in 3..=4 {
        let moduli: Vec<Vec<u8>> =
            (0..3usize.pow(n as u32)).filter(|&i| !brute_reducible(&monic(i, n))).map(|i| digits(i, n)).collect();
        let mut reference: Option<Vec<i64>> = None;
        for m in moduli {
            let ctx = FieldContext::builder(n).modulus(m.clone()).build().unwrap();
            let table = kloosterman_all_fast(&ctx, Execution::Parallel).unwrap();
            let profiles = ProfileTable::build(&ctx, Execution::Parallel).unwrap();
            for sweep in Sweep::ALL {
                let r = verify_sweep(&ctx, &profiles, sweep, &table, Execution::Parallel).unwrap();
                assert!(r.passed(), "modulus {m:?}: {r:?}");
            }
            let mut sorted = table.values.clone();
            sorted.sort_unstable();
            match &reference {
                None => reference = Some(sorted),
                Some(r) => assert_eq!(r, &sorted, "value multiset differs for modulus {m:?}"),
            }
        }
    }
}

#[test]
fn fast_transform_beats_naive_at_n6() {
    let ctx = FieldContext::new(6).unwrap();
    let t0 = Instant::now();
    let naive = kloosterman_all_naive(&ctx, Execution::Sequential).unwrap();
    let naive_time = t0.elapsed();
    let t1 = Instant::now();
    let fast = kloosterman_all_fast(&ctx, Execution::Sequential).unwrap();
    let fast_time = t1.elapsed();
    assert_eq!(naive.values, fast.values);
    assert_eq!(fast.butterflies, 6 * 243);
    assert!(fast_time < naive_time, "fast {fast_time:?} vs naive {naive_time:?}");
}
