//! Integer scalars for the elimination kernels.
//!
//! Every kernel is written once over [`Scalar`] and first run on `i64`
//! with checked arithmetic. On overflow it is rerun on `BigInt`, so results
//! are always exact.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) type Checked<T> = Result<T, Overflow>;

pub(crate) trait Scalar: Clone + Eq + Ord + Debug + Send + Sync {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn add_c(&self, o: &Self) -> Checked<Self>;
    fn sub_c(&self, o: &Self) -> Checked<Self>;
    fn mul_c(&self, o: &Self) -> Checked<Self>;
    fn neg_c(&self) -> Checked<Self>;
    /// Floor division.
    fn fdiv(&self, o: &Self) -> Checked<Self>;
    /// Remainder with the sign of the divisor (floor semantics).
    fn fmod(&self, o: &Self) -> Checked<Self>;

    fn abs_c(&self) -> Checked<Self> {
        if self.is_neg() {
            self.neg_c()
        } else {
            Ok(self.clone())
        }
    }

    fn divides(&self, o: &Self) -> Checked<bool> {
        if self.is_nil() {
            return Ok(o.is_nil());
        }
        Ok(o.fmod(self)?.is_nil())
    }
}

impl Scalar for i64 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        // Keep a margin so single products of inputs stay representable more often.
        v.to_i64().filter(|x| x.unsigned_abs() < (1u64 << 62))
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn add_c(&self, o: &Self) -> Checked<Self> {
        self.checked_add(*o).ok_or(Overflow)
    }
    fn sub_c(&self, o: &Self) -> Checked<Self> {
        self.checked_sub(*o).ok_or(Overflow)
    }
    fn mul_c(&self, o: &Self) -> Checked<Self> {
        self.checked_mul(*o).ok_or(Overflow)
    }
    fn neg_c(&self) -> Checked<Self> {
        self.checked_neg().ok_or(Overflow)
    }
    fn fdiv(&self, o: &Self) -> Checked<Self> {
        if *self == i64::MIN && *o == -1 {
            return Err(Overflow);
        }
        Ok(Integer::div_floor(self, o))
    }
    fn fmod(&self, o: &Self) -> Checked<Self> {
        if *o == -1 {
            return Ok(0);
        }
        Ok(Integer::mod_floor(self, o))
    }
}

impl Scalar for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add_c(&self, o: &Self) -> Checked<Self> {
        Ok(self + o)
    }
    fn sub_c(&self, o: &Self) -> Checked<Self> {
        Ok(self - o)
    }
    fn mul_c(&self, o: &Self) -> Checked<Self> {
        Ok(self * o)
    }
    fn neg_c(&self) -> Checked<Self> {
        Ok(-self)
    }
    fn fdiv(&self, o: &Self) -> Checked<Self> {
        Ok(Integer::div_floor(self, o))
    }
    fn fmod(&self, o: &Self) -> Checked<Self> {
        Ok(Integer::mod_floor(self, o))
    }
}

/// Extended gcd: returns `(g, s, t)` with `g = s*a + t*b` and `g >= 0`.
pub(crate) fn ext_gcd<T: Scalar>(a: &T, b: &T) -> Checked<(T, T, T)> {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (T::unit(), T::nil());
    let (mut t0, mut t1) = (T::nil(), T::unit());
    while !r1.is_nil() {
        let q = r0.fdiv(&r1)?;
        let r2 = r0.sub_c(&q.mul_c(&r1)?)?;
        let s2 = s0.sub_c(&q.mul_c(&s1)?)?;
        let t2 = t0.sub_c(&q.mul_c(&t1)?)?;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_neg() {
        Ok((r0.neg_c()?, s0.neg_c()?, t0.neg_c()?))
    } else {
        Ok((r0, s0, t0))
    }
}

/// Runs `f` on `i64` when every input fits, falling back to `BigInt` on overflow.
pub(crate) fn with_fallback<R>(
    fits_small: bool,
    small: impl FnOnce() -> Checked<R>,
    big: impl FnOnce() -> R,
) -> R {
    if fits_small {
        if let Ok(r) = small() {
            return r;
        }
    }
    big()
}
