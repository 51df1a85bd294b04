//! Exact elements `u + v*zeta` of Z[zeta], `zeta^2 + zeta + 1 = 0`.
//!
//! Generic over the coefficient type so the transform can run on `i64`
//! while tests (and anyone who needs it) can use a bignum.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EisensteinInt<T = i64> {
    pub u: T,
    pub v: T,
}

impl<T> EisensteinInt<T> {
    pub const fn new(u: T, v: T) -> Self {
        EisensteinInt { u, v }
    }
}

impl<T: Zero> EisensteinInt<T> {
    pub fn from_int(u: T) -> Self {
        EisensteinInt { u, v: T::zero() }
    }

    /// A value is a rational integer exactly when its zeta part vanishes.
    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }
}

impl<T: Zero + One> EisensteinInt<T> {
    pub fn zeta() -> Self {
        EisensteinInt { u: T::zero(), v: T::one() }
    }

    /// `zeta^e` for `e` in {0,1,2} (taken mod 3).
    pub fn zeta_pow(e: u8) -> Self
    where
        T: Neg<Output = T>,
    {
        match e % 3 {
            0 => Self::one_value(),
            1 => Self::zeta(),
            _ => EisensteinInt { u: -T::one(), v: -T::one() },
        }
    }

    fn one_value() -> Self {
        EisensteinInt { u: T::one(), v: T::zero() }
    }
}

impl<T> EisensteinInt<T>
where
    T: Clone + Sub<Output = T> + Neg<Output = T>,
{
    /// `zeta * (u + v zeta) = -v + (u - v) zeta`
    pub fn mul_zeta(&self) -> Self {
        EisensteinInt { u: -self.v.clone(), v: self.u.clone() - self.v.clone() }
    }

    /// `zeta^2 * (u + v zeta) = (v - u) - u zeta`
    pub fn mul_zeta2(&self) -> Self {
        EisensteinInt { u: self.v.clone() - self.u.clone(), v: -self.u.clone() }
    }

    /// Complex conjugation, `zeta -> zeta^2`: `(u - v) - v zeta`.
    pub fn conj(&self) -> Self {
        EisensteinInt { u: self.u.clone() - self.v.clone(), v: -self.v.clone() }
    }
}

impl<T> EisensteinInt<T>
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    /// Field norm `u^2 - uv + v^2`.
    pub fn norm(&self) -> T {
        let (u, v) = (self.u.clone(), self.v.clone());
        u.clone() * u.clone() - u * v.clone() + v.clone() * v
    }
}

impl<T: Add<Output = T>> Add for EisensteinInt<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        EisensteinInt { u: self.u + rhs.u, v: self.v + rhs.v }
    }
}

impl<T: Sub<Output = T>> Sub for EisensteinInt<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        EisensteinInt { u: self.u - rhs.u, v: self.v - rhs.v }
    }
}

impl<T: Neg<Output = T>> Neg for EisensteinInt<T> {
    type Output = Self;
    fn neg(self) -> Self {
        EisensteinInt { u: -self.u, v: -self.v }
    }
}

impl<T> Mul for EisensteinInt<T>
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    type Output = Self;
    // (a + b z)(c + d z) = ac + (ad + bc) z + bd z^2,  z^2 = -1 - z
    fn mul(self, rhs: Self) -> Self {
        let bd = self.v.clone() * rhs.v.clone();
        EisensteinInt { u: self.u.clone() * rhs.u.clone() - bd.clone(), v: self.u * rhs.v + self.v * rhs.u - bd }
    }
}

impl<T: Zero> Zero for EisensteinInt<T> {
    fn zero() -> Self {
        EisensteinInt { u: T::zero(), v: T::zero() }
    }
    fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }
}

impl<T> One for EisensteinInt<T>
where
    T: Zero + One + Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    fn one() -> Self {
        EisensteinInt { u: T::one(), v: T::zero() }
    }
}
