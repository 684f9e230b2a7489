use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{FieldCtx, Fp};
use crate::error::{Error, Result};
use crate::scalar::{Field, Ring};

/// F_p(√Δ) for a quadratic non-residue Δ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp2Ctx {
    base: FieldCtx,
    delta: Fp,
}

impl Fp2Ctx {
    pub fn new(delta: Fp) -> Result<Self> {
        if delta.legendre()? != -1 {
            return Err(Error::NotNonResidue(delta.value(), delta.modulus()));
        }
        Ok(Fp2Ctx {
            base: delta.ctx(),
            delta,
        })
    }

    /// Extension generated by the smallest non-residue.
    pub fn smallest(base: FieldCtx) -> Result<Self> {
        base.require_odd()?;
        let delta = base
            .units()
            .find(|a| a.legendre() == Ok(-1))
            .expect("odd prime has a non-residue");
        Ok(Fp2Ctx { base, delta })
    }

    pub fn base(&self) -> FieldCtx {
        self.base
    }

    pub fn delta(&self) -> Fp {
        self.delta
    }

    pub fn elem(&self, a: Fp, b: Fp) -> Fp2 {
        assert_eq!(a.modulus(), self.base.p());
        assert_eq!(b.modulus(), self.base.p());
        Fp2 {
            a,
            b,
            delta: self.delta,
        }
    }

    pub fn embed(&self, a: Fp) -> Fp2 {
        self.elem(a, self.base.zero())
    }
}

/// `a + b√Δ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp2 {
    a: Fp,
    b: Fp,
    delta: Fp,
}

impl Fp2 {
    pub fn a(&self) -> Fp {
        self.a
    }

    pub fn b(&self) -> Fp {
        self.b
    }

    pub fn ctx(&self) -> Fp2Ctx {
        Fp2Ctx {
            base: self.delta.ctx(),
            delta: self.delta,
        }
    }

    pub fn is_base(&self) -> bool {
        self.b.is_zero()
    }

    /// The F_p value when the √Δ component vanishes.
    pub fn base_value(&self) -> Option<Fp> {
        self.is_base().then_some(self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> Fp2 {
        Fp2 {
            a: self.a,
            b: -self.b,
            delta: self.delta,
        }
    }

    /// `a² - Δb²`, the product with the conjugate.
    pub fn norm(&self) -> Fp {
        self.a * self.a - self.delta * self.b * self.b
    }

    pub fn pow(&self, e: u64) -> Fp2 {
        self.pow_u64(e)
    }

    pub fn inv(&self) -> Result<Fp2> {
        let n = self.norm().inv()?;
        Ok(Fp2 {
            a: self.a * n,
            b: -self.b * n,
            delta: self.delta,
        })
    }

    fn same_ext(&self, other: &Fp2) {
        assert_eq!(
            self.delta, other.delta,
            "arithmetic between different quadratic extensions"
        );
    }
}

impl fmt::Debug for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}·√{} (mod {})",
            self.a.value(),
            self.b.value(),
            self.delta.value(),
            self.delta.modulus()
        )
    }
}

impl Add for Fp2 {
    type Output = Fp2;
    fn add(self, rhs: Fp2) -> Fp2 {
        self.same_ext(&rhs);
        Fp2 {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            delta: self.delta,
        }
    }
}

impl Sub for Fp2 {
    type Output = Fp2;
    fn sub(self, rhs: Fp2) -> Fp2 {
        self.same_ext(&rhs);
        Fp2 {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
            delta: self.delta,
        }
    }
}

impl Mul for Fp2 {
    type Output = Fp2;
    fn mul(self, rhs: Fp2) -> Fp2 {
        self.same_ext(&rhs);
        Fp2 {
            a: self.a * rhs.a + self.delta * self.b * rhs.b,
            b: self.a * rhs.b + rhs.a * self.b,
            delta: self.delta,
        }
    }
}

impl Neg for Fp2 {
    type Output = Fp2;
    fn neg(self) -> Fp2 {
        Fp2 {
            a: -self.a,
            b: -self.b,
            delta: self.delta,
        }
    }
}

impl Ring for Fp2 {
    fn zero_like(&self) -> Self {
        self.ctx().embed(self.a.ctx().zero())
    }

    fn one_like(&self) -> Self {
        self.ctx().embed(self.a.ctx().one())
    }

    fn int_like(&self, v: i64) -> Self {
        self.ctx().embed(self.a.ctx().from_i64(v))
    }
}

impl Field for Fp2 {
    fn inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
}

/// Roots α = (−c+√(c²−4))/2 and β = (−c−√(c²−4))/2 of x² + cx + 1.
///
/// When c² − 4 is a square both roots have zero √Δ component (over the
/// smallest non-residue); otherwise Δ = c² − 4 and the roots are conjugate.
pub fn quad_roots(c: Fp) -> Result<(Fp2, Fp2)> {
    let ctx = c.ctx();
    ctx.require_odd()?;
    let disc = c * c - ctx.elem(4);
    let half = ctx.elem(2).inv()?;
    match disc.legendre()? {
        0 => Err(Error::DegenerateRoots(c.value())),
        1 => {
            let d = disc.sqrt()?.expect("residue has a root");
            let ext = Fp2Ctx::smallest(ctx)?;
            Ok((ext.embed((-c + d) * half), ext.embed((-c - d) * half)))
        }
        _ => {
            let ext = Fp2Ctx::new(disc)?;
            Ok((ext.elem(-c * half, half), ext.elem(-c * half, -half)))
        }
    }
}
