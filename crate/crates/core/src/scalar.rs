//! Scalar abstraction shared by the matrix, trinomial and Lucas code.
//!
//! Prime-field elements carry their modulus at runtime, so the usual
//! `num_traits::Zero::zero()` constructor cannot build one. The traits here
//! derive constants from an existing value instead. Any `num_traits::Num`
//! type (machine integers, `BigInt`, `BigRational`) gets [`Ring`] for free,
//! which lets the same recurrences run over the integers as an oracle.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed};

/// Commutative ring with unit whose constants are taken from a sample value.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// Image of the integer `v` under the canonical map Z -> R.
    fn int_like(&self, v: i64) -> Self;

    fn is_zero_elem(&self) -> bool {
        *self == self.zero_like()
    }

    fn pow_u64(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

/// A [`Ring`] in which every nonzero element is invertible.
pub trait Field: Ring {
    /// `None` exactly for zero.
    fn inverse(&self) -> Option<Self>;
}

impl<T> Ring for T
where
    T: Num + Clone + Debug + Neg<Output = T>,
{
    fn zero_like(&self) -> Self {
        T::zero()
    }

    fn one_like(&self) -> Self {
        T::one()
    }

    fn int_like(&self, v: i64) -> Self {
        // binary expansion keeps this independent of primitive conversions
        let mut acc = T::zero();
        let mut bit = T::one();
        let mut m = v.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = acc + bit.clone();
            }
            bit = bit.clone() + bit;
            m >>= 1;
        }
        if v < 0 {
            -acc
        } else {
            acc
        }
    }

    fn is_zero_elem(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

impl<T> Field for Ratio<T>
where
    T: Integer + Signed + Clone + Debug,
{
    fn inverse(&self) -> Option<Self> {
        if num_traits::Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}
