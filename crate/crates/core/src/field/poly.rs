//! Dense polynomials over F_3, little-endian coefficient vectors.
//! Only what field construction needs: products, remainders, gcd.

pub(crate) type Poly = Vec<u8>;

pub(crate) fn trim(p: &mut Poly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

pub(crate) fn degree(p: &[u8]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

fn inv3(c: u8) -> u8 {
    // 1 and 2 are their own inverses mod 3
    debug_assert!(c == 1 || c == 2);
    c
}

pub(crate) fn sub(a: &[u8], b: &[u8]) -> Poly {
    let len = a.len().max(b.len());
    let mut out: Poly = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + 3 - y) % 3
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u8], b: &[u8]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % 3;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem(a: &[u8], m: &[u8]) -> Poly {
    let dm = degree(m).expect("division by the zero polynomial");
    let lead_inv = inv3(m[dm]);
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = (r[dr] * lead_inv) % 3;
        let shift = dr - dm;
        for (i, &mc) in m.iter().enumerate().take(dm + 1) {
            r[shift + i] = (r[shift + i] + 3 * 3 - c * mc) % 3;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u8], b: &[u8], m: &[u8]) -> Poly {
    rem(&mul(a, b), m)
}

pub(crate) fn gcd(a: &[u8], b: &[u8]) -> Poly {
    let mut x: Poly = a.to_vec();
    let mut y: Poly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    // normalise to monic
    if let Some(d) = degree(&x) {
        let s = inv3(x[d]);
        for c in x.iter_mut() {
            *c = (*c * s) % 3;
        }
    }
    x
}

/// Degree of the smallest irreducible factor of `f` (monic, degree >= 1).
///
/// Uses the fact that `x^(3^d) - x` is the product of all monic irreducibles
/// of degree dividing `d`; the first `d` giving a nontrivial gcd is the
/// smallest factor degree. Returns `deg f` when `f` is irreducible.
pub(crate) fn smallest_factor_degree(f: &[u8]) -> usize {
    let n = degree(f).expect("nonzero polynomial");
    let x: Poly = vec![0, 1];
    let mut frob = rem(&x, f);
    for d in 1..=n / 2 {
        // frob <- frob^3 mod f
        frob = mul_mod(&mul_mod(&frob, &frob, f), &frob, f);
        let g = gcd(&sub(&frob, &x), f);
        if degree(&g).unwrap_or(0) > 0 {
            return d;
        }
    }
    n
}
