use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::scalar::{Field, Ring};

/// A prime modulus. Construction verifies primality.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldCtx {
    p: u64,
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldCtx {
    /// Products of two residues must fit in a `u64`.
    pub const MAX_MODULUS: u64 = 1 << 31;

    pub fn new(p: u64) -> Result<Self> {
        if p >= Self::MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldCtx { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    pub(crate) fn require_odd(&self) -> Result<()> {
        if self.is_odd() {
            Ok(())
        } else {
            Err(Error::CharacteristicTwo)
        }
    }

    /// Reduces `v` into the canonical range.
    #[inline]
    pub fn elem(&self, v: u64) -> Fp {
        Fp {
            value: v % self.p,
            p: self.p,
        }
    }

    pub fn from_i64(&self, v: i64) -> Fp {
        let r = v.rem_euclid(self.p as i64);
        Fp {
            value: r as u64,
            p: self.p,
        }
    }

    pub fn zero(&self) -> Fp {
        self.elem(0)
    }

    pub fn one(&self) -> Fp {
        self.elem(1)
    }

    /// All p elements in ascending order.
    pub fn elements(&self) -> impl Iterator<Item = Fp> + '_ {
        (0..self.p).map(move |v| self.elem(v))
    }

    /// Nonzero elements 1..p-1.
    pub fn units(&self) -> impl Iterator<Item = Fp> + '_ {
        (1..self.p).map(move |v| self.elem(v))
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// Canonical residue `0..p` tagged with its modulus.
///
/// Mixing moduli in one operation panics.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    p: u64,
}

impl Fp {
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn ctx(&self) -> FieldCtx {
        FieldCtx { p: self.p }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    #[inline]
    fn same_field(&self, other: &Fp) {
        assert_eq!(
            self.p, other.p,
            "arithmetic between F_{} and F_{}",
            self.p, other.p
        );
    }

    /// Square-and-multiply. `0^0 = 1`.
    pub fn pow(&self, mut e: u64) -> Fp {
        let mut base = self.value;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        Fp {
            value: acc,
            p: self.p,
        }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self) -> Result<Fp> {
        if self.value == 0 {
            return Err(Error::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.p as i64, self.value as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.ctx().from_i64(t0))
    }

    /// Quadratic character by Euler's criterion: 0, +1 or -1.
    pub fn legendre(&self) -> Result<i8> {
        self.ctx().require_odd()?;
        if self.value == 0 {
            return Ok(0);
        }
        let e = self.pow((self.p - 1) / 2);
        Ok(if e.value == 1 { 1 } else { -1 })
    }

    /// χ(self) embedded in the field: -1 maps to p - 1.
    pub fn chi(&self) -> Result<Fp> {
        Ok(self.ctx().from_i64(self.legendre()? as i64))
    }

    /// Square root by Tonelli–Shanks. Returns the smaller of the two roots,
    /// or `None` for a non-residue.
    pub fn sqrt(&self) -> Result<Option<Fp>> {
        if self.legendre()? == -1 {
            return Ok(None);
        }
        if self.value == 0 {
            return Ok(Some(*self));
        }
        let p = self.p;
        let ctx = self.ctx();
        let root = if p % 4 == 3 {
            self.pow((p + 1) / 4)
        } else {
            // p - 1 = q * 2^s with q odd
            let mut q = p - 1;
            let mut s = 0u32;
            while q.is_multiple_of(2) {
                q /= 2;
                s += 1;
            }
            let z = ctx
                .units()
                .find(|z| z.legendre() == Ok(-1))
                .expect("odd prime has a non-residue");
            let mut m = s;
            let mut c = z.pow(q);
            let mut t = self.pow(q);
            let mut r = self.pow(q.div_ceil(2));
            while t.value != 1 {
                let mut i = 0;
                let mut t2 = t;
                while t2.value != 1 {
                    t2 = t2 * t2;
                    i += 1;
                }
                let b = c.pow(1u64 << (m - i - 1));
                m = i;
                c = b * b;
                t *= c;
                r *= b;
            }
            r
        };
        debug_assert_eq!(root * root, *self);
        let other = -root;
        Ok(Some(if other.value < root.value {
            other
        } else {
            root
        }))
    }

    /// Both square roots (equal only for zero), smaller first.
    pub fn sqrt_pair(&self) -> Result<Option<(Fp, Fp)>> {
        Ok(self.sqrt()?.map(|r| (r, -r)))
    }

    pub fn is_primitive_root(&self) -> bool {
        if self.value == 0 {
            return false;
        }
        let n = self.p - 1;
        prime_factors(n)
            .into_iter()
            .all(|q| self.pow(n / q).value != 1)
    }

    /// Lifts to the symmetric range `(-p/2, p/2]`.
    pub fn to_signed(&self) -> i64 {
        if self.value > self.p / 2 {
            self.value as i64 - self.p as i64
        } else {
            self.value as i64
        }
    }
}

/// Smallest g >= 2 of multiplicative order p - 1.
pub fn primitive_root(ctx: FieldCtx) -> Result<Fp> {
    if ctx.p() < 3 {
        return Err(Error::CharacteristicTwo);
    }
    Ok((2..ctx.p())
        .map(|g| ctx.elem(g))
        .find(Fp::is_primitive_root)
        .expect("multiplicative group of a prime field is cyclic"))
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        self.same_field(&rhs);
        let s = self.value + rhs.value;
        Fp {
            value: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        self.same_field(&rhs);
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.p - rhs.value
        };
        Fp {
            value: v,
            p: self.p,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        self.same_field(&rhs);
        Fp {
            value: self.value * rhs.value % self.p,
            p: self.p,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        Fp {
            value: if self.value == 0 {
                0
            } else {
                self.p - self.value
            },
            p: self.p,
        }
    }
}

/// Panics on division by zero.
impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv().expect("division by zero in F_p")
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, rhs: Fp) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fp {
    fn sub_assign(&mut self, rhs: Fp) {
        *self = *self - rhs;
    }
}

impl MulAssign for Fp {
    fn mul_assign(&mut self, rhs: Fp) {
        *self = *self * rhs;
    }
}

impl Ring for Fp {
    fn zero_like(&self) -> Self {
        self.ctx().zero()
    }

    fn one_like(&self) -> Self {
        self.ctx().one()
    }

    fn int_like(&self, v: i64) -> Self {
        self.ctx().from_i64(v)
    }

    fn is_zero_elem(&self) -> bool {
        self.value == 0
    }

    fn pow_u64(&self, e: u64) -> Self {
        self.pow(e)
    }
}

impl Field for Fp {
    fn inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
}
