//! Morita's 3-adic Gamma function, truncated mod `3^k`.

use crate::error::{Error, Result};

use super::ring::MAX_PRECISION;

fn check_precision(k: u32) -> Result<u64> {
    if k == 0 || k > MAX_PRECISION {
        return Err(Error::usage(format!("precision k must lie in 1..={MAX_PRECISION}, got {k}")));
    }
    Ok(3u64.pow(k))
}

/// `Gamma_3(m) = (-1)^m prod_{t < m, 3 does not divide t} t  (mod 3^k)`, as a
/// residue in `[0, 3^k)`.
pub fn gamma3(m: u64, k: u32) -> Result<u64> {
    let modulus = check_precision(k)?;
    if m == 0 {
        return Err(Error::domain("Gamma_3 is evaluated at positive integers only"));
    }
    let prod = (1..m).filter(|t| t % 3 != 0).fold(1u64, |acc, t| acc * (t % modulus) % modulus);
    Ok(if m % 2 == 1 { (modulus - prod) % modulus } else { prod })
}

/// Inverse of `a` mod `m` for `gcd(a, m) = 1`.
fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// `Gamma_3(s / denom) mod 3^k` for `0 < s < denom`, `3` not dividing `denom`.
///
/// The rational `s/denom` is a 3-adic integer; it agrees mod `3^k` with the
/// positive integer `y = s * denom^{-1} mod 3^k` (taken in `[1, 3^k]`), and
/// `Gamma_3` respects congruences mod `3^k`, so the value is `Gamma_3(y)`.
pub fn gamma3_fractional(s: u64, denom: u64, k: u32) -> Result<u64> {
    let modulus = check_precision(k)?;
    if denom.is_multiple_of(3) {
        return Err(Error::domain(format!("denominator {denom} is divisible by 3")));
    }
    if s == 0 || s >= denom {
        return Err(Error::domain(format!("{s}/{denom} is not a proper fraction in (0, 1)")));
    }
    let inv = mod_inverse(denom % modulus, modulus).expect("denominator coprime to 3");
    let y = match (s % modulus) * inv % modulus {
        0 => modulus,
        y => y,
    };
    gamma3(y, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Product of the integers below m that are prime to 3, no reduction.
    fn exact_product(m: u64) -> u128 {
        (1..m as u128).filter(|t| t % 3 != 0).product()
    }

    #[test]
    fn golden_values() {
        assert_eq!(gamma3(1, 3).unwrap(), 26);
        assert_eq!(gamma3(1, 5).unwrap(), 242);
        // 1*2*4*5*7*8*...*23, 16 factors, reduced mod 27
        assert_eq!((exact_product(24) % 27) as u64, 13);
        assert_eq!(gamma3(24, 3).unwrap(), 13);
        assert_eq!(gamma3(234, 3).unwrap(), 1);
    }

    #[test]
    fn wilson_congruence() {
        for k in 1..=4u32 {
            let m = 3u64.pow(k);
            for x in 1..=2 * m {
                assert_eq!(gamma3(x, k).unwrap(), gamma3(x + m, k).unwrap(), "x={x} k={k}");
            }
        }
    }

    #[test]
    fn fractional_arguments() {
        assert_eq!(gamma3_fractional(3, 26, 3).unwrap(), 13);
        assert_eq!(gamma3_fractional(9, 26, 3).unwrap(), 1);
        assert_eq!(gamma3_fractional(3, 80, 3).unwrap(), 13);
        assert_eq!(gamma3_fractional(27, 80, 3).unwrap(), 1);
        assert!(matches!(gamma3_fractional(1, 27, 3), Err(Error::Domain(_))));
        assert!(matches!(gamma3_fractional(26, 26, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(26, 27), Some(26));
        assert_eq!(mod_inverse(2, 9), Some(5));
        assert_eq!(mod_inverse(3, 9), None);
    }
}
