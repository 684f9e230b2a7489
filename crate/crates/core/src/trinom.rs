//! Trinomial coefficients `binom(n,k)_c`, the coefficient of `x^k` in
//! `(x + c + 1/x)^n`, and the closed forms for rows `p`, `p − 1`, `p − 2`.
//!
//! [`trinom_row`] is the ground truth. Every closed form in this module is
//! checked against it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::ffcore::{quad_roots, Fp, Fp2};
use crate::scalar::{Field, Ring};

/// Row `n` of trinomial coefficients, stored for `k = 0..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrinomRow<T> {
    n: usize,
    c: T,
    coeffs: Vec<T>,
}

impl<T: Ring> TrinomRow<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> &T {
        &self.c
    }

    /// Coefficients for `k = 0..=n`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `binom(n,k)_c` for any integer `k`; negative `k` resolves by symmetry.
    pub fn get(&self, k: i64) -> T {
        let k = k.unsigned_abs() as usize;
        if k > self.n {
            self.c.zero_like()
        } else {
            self.coeffs[k].clone()
        }
    }

    /// `Σ_k binom(n,k)_c x^k` over the full range `−n..=n`.
    pub fn evaluate(&self, x: &T) -> T
    where
        T: Field,
    {
        let x_inv = x.inverse().expect("evaluation point must be a unit");
        let mut acc = self.coeffs[0].clone();
        let (mut xp, mut xm) = (x.one_like(), x.one_like());
        for coeff in &self.coeffs[1..] {
            xp = xp * x.clone();
            xm = xm * x_inv.clone();
            acc = acc + coeff.clone() * (xp.clone() + xm.clone());
        }
        acc
    }

    /// Next row via `binom(n+1,k) = binom(n,k−1) + c·binom(n,k) + binom(n,k+1)`.
    pub fn next_row(&self) -> TrinomRow<T> {
        let n = self.n + 1;
        let coeffs = (0..=n as i64)
            .map(|k| self.get(k - 1) + self.c.clone() * self.get(k) + self.get(k + 1))
            .collect();
        TrinomRow {
            n,
            c: self.c.clone(),
            coeffs,
        }
    }
}

/// Row `n`, built bottom-up from row 0 in O(n²) ring operations.
pub fn trinom_row<T: Ring>(n: usize, c: T) -> TrinomRow<T> {
    let mut row = TrinomRow {
        n: 0,
        coeffs: vec![c.one_like()],
        c,
    };
    for _ in 0..n {
        row = row.next_row();
    }
    row
}

pub fn trinom_coeff<T: Ring>(n: usize, k: i64, c: T) -> T {
    if k.unsigned_abs() as usize > n {
        return c.zero_like();
    }
    trinom_row(n, c).get(k)
}

/// Central coefficients `binom(n,0)_c` for `n = 0..=nmax`.
///
/// Uses `(n+1) u_{n+1} = (2n+1) c u_n − n (c² − 4) u_{n−1}`; whenever `n + 1`
/// is not invertible (`n + 1 ≡ 0 mod p`) the value comes from the full row.
pub fn central_seq<T: Field>(nmax: usize, c: T) -> Vec<T> {
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(c.one_like());
    if nmax == 0 {
        return out;
    }
    out.push(c.clone());
    let disc = c.clone() * c.clone() - c.int_like(4);
    for n in 1..nmax {
        let m = c.int_like(n as i64 + 1);
        let next = match m.inverse() {
            Some(m_inv) => {
                let lhs = c.int_like(2 * n as i64 + 1) * c.clone() * out[n].clone()
                    - c.int_like(n as i64) * disc.clone() * out[n - 1].clone();
                lhs * m_inv
            }
            None => trinom_row(n + 1, c.clone()).get(0),
        };
        out.push(next);
    }
    out
}

/// Row `p`: `(x + c + 1/x)^p = x^p + c + x^{−p}` in characteristic p.
pub fn row_p_closed(c: Fp, k: i64) -> Fp {
    let ctx = c.ctx();
    if k == 0 {
        c
    } else if k.unsigned_abs() == ctx.p() {
        ctx.one()
    } else {
        ctx.zero()
    }
}

/// `binom(p−1,0)_c = χ(c² − 4)`.
pub fn central_pm1(c: Fp) -> Result<Fp> {
    (c * c - c.ctx().elem(4)).chi()
}

fn require_nondegenerate(c: Fp) -> Result<Fp> {
    let ctx = c.ctx();
    ctx.require_odd()?;
    let disc = c * c - ctx.elem(4);
    if disc.is_zero() {
        return Err(Error::DegenerateRoots(c.value()));
    }
    Ok(disc)
}

fn require_p_at_least_5(c: Fp) -> Result<()> {
    if c.modulus() < 5 {
        return Err(Error::Precondition(format!(
            "requires p >= 5, got p = {}",
            c.modulus()
        )));
    }
    Ok(())
}

/// `(binom(p−2,0)_c, binom(p−2,1)_c) = (χ·c/(c²−4), −χ·2/(c²−4))` with
/// `χ = χ(c² − 4)`.
pub fn pm2_anchors(c: Fp) -> Result<(Fp, Fp)> {
    require_p_at_least_5(c)?;
    let disc = require_nondegenerate(c)?;
    let chi = disc.chi()?;
    let inv = disc.inv()?;
    let two = c.ctx().elem(2);
    Ok((chi * c * inv, -chi * two * inv))
}

/// The printed closed form for `binom(p−2,(p−1)/2)_c`, transcribed as is:
/// `c/(2(c²−4))·χ(−c−2)` when `χ(c²−4) = 1` and `−c/(c²−4)·χ(−c−2)` when
/// `χ(c²−4) = −1`.
///
/// The second branch does not agree with [`trinom_row`] in general; see
/// `checks::check_lemma26`.
pub fn pm2_half_paper(c: Fp) -> Result<Fp> {
    require_p_at_least_5(c)?;
    let disc = require_nondegenerate(c)?;
    let ctx = c.ctx();
    let sign = (-c - ctx.elem(2)).chi()?;
    let inv = disc.inv()?;
    Ok(if disc.legendre()? == 1 {
        c * (ctx.elem(2) * disc).inv()? * sign
    } else {
        -c * inv * sign
    })
}

fn pow_signed(x: Fp2, e: i64) -> Fp2 {
    if e >= 0 {
        x.pow(e as u64)
    } else {
        x.inv()
            .expect("root of x² + cx + 1 is a unit")
            .pow(e.unsigned_abs())
    }
}

/// `binom(p−1,k)_c` from the roots α, β of `x² + cx + 1`:
/// `−(α^{k−1} − β^{k−1})/(α − β)` when `χ(c²−4) = 1`, and
/// `−(α^{k+1} − β^{k+1})/(α − β)` when `χ(c²−4) = −1`.
pub fn pm1_row_closed(c: Fp, k: i64) -> Result<Fp> {
    let disc = require_nondegenerate(c)?;
    let p = c.modulus() as i64;
    if !(0..p).contains(&k) {
        return Err(Error::Precondition(format!("k = {k} outside 0..=p-1")));
    }
    let (alpha, beta) = quad_roots(c)?;
    let shift = if disc.legendre()? == 1 { k - 1 } else { k + 1 };
    let diff = (alpha - beta).inv()?;
    let value: Fp2 = -(pow_signed(alpha, shift) - pow_signed(beta, shift)) * diff;
    value
        .base_value()
        .ok_or_else(|| Error::ExtensionLeak(format!("{value:?} at c = {}, k = {k}", c.value())))
}

type RowKey = (usize, u64, u64);

/// Keyed cache of F_p rows shared across threads.
///
/// Results are immutable once inserted, so a hit returns the same row a
/// fresh computation would.
#[derive(Default)]
pub struct RowCache {
    rows: Mutex<HashMap<RowKey, Arc<TrinomRow<Fp>>>>,
}

impl RowCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn row(&self, n: usize, c: Fp) -> Arc<TrinomRow<Fp>> {
        let key = (n, c.value(), c.modulus());
        if let Some(row) = self.rows.lock().unwrap().get(&key) {
            return Arc::clone(row);
        }
        // computed outside the lock; a concurrent duplicate is identical
        let row = Arc::new(trinom_row(n, c));
        Arc::clone(self.rows.lock().unwrap().entry(key).or_insert(row))
    }

    pub fn len(&self) -> usize {
        self.rows.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffcore::FieldCtx;

    fn fp(p: u64) -> FieldCtx {
        FieldCtx::new(p).unwrap()
    }

    fn vals(row: &TrinomRow<Fp>) -> Vec<u64> {
        row.coeffs().iter().map(Fp::value).collect()
    }

    #[test]
    fn row_examples() {
        let r: TrinomRow<i64> = trinom_row(2, 1);
        assert_eq!(r.coeffs(), &[3, 2, 1]);
        assert_eq!(vals(&trinom_row(3, fp(5).one())), vec![2, 1, 3, 1]);
        let c = fp(11).elem(7);
        assert_eq!(trinom_row(1, c).coeffs(), &[c, fp(11).one()]);
        assert_eq!(trinom_row(0, c).coeffs(), &[fp(11).one()]);
    }

    #[test]
    fn coeff_examples() {
        // (1 + x + x²)³ = 1, 3, 6, 7, 6, 3, 1
        assert_eq!(trinom_coeff(3, -2, 1i64), 3);
        assert_eq!(trinom_coeff(3, -1, 1i64), 6);
        assert_eq!(trinom_coeff(3, -1, fp(5).one()).value(), 1);
        assert_eq!(trinom_coeff(3, -2, fp(5).one()).value(), 3);
        assert_eq!(trinom_coeff(2, 5, fp(7).elem(3)).value(), 0);
        assert_eq!(trinom_coeff(5, 3, fp(7).one()).value(), 1);
        assert_eq!(trinom_coeff(5, 3, 1i64), 15);
    }

    #[test]
    fn central_seq_examples() {
        let ints: Vec<i64> = trinom_row(4, 1i64).coeffs().to_vec();
        assert_eq!(ints[0], 19);
        let seq = central_seq(4, fp(101).one());
        assert_eq!(
            seq.iter().map(Fp::value).collect::<Vec<_>>(),
            vec![1, 1, 3, 7, 19]
        );
        assert_eq!(central_seq(3, fp(101).elem(2))[3].value(), 20);
        assert_eq!(central_seq(1, fp(13).elem(9))[1].value(), 9);
        assert_eq!(central_seq(0, fp(13).elem(9)).len(), 1);
    }

    #[test]
    fn central_seq_crosses_the_modulus() {
        // n + 1 = 5, 10 are not invertible mod 5
        for c in fp(5).elements() {
            let seq = central_seq(12, c);
            for (n, v) in seq.iter().enumerate() {
                assert_eq!(*v, trinom_row(n, c).get(0), "n={n} c={c:?}");
            }
        }
    }

    #[test]
    fn row_p_examples() {
        let c = fp(5).elem(3);
        assert_eq!(row_p_closed(c, 0).value(), 3);
        assert_eq!(row_p_closed(c, 5).value(), 1);
        assert_eq!(row_p_closed(c, -5).value(), 1);
        assert_eq!(row_p_closed(c, 2).value(), 0);
        assert_eq!(trinom_row(5, c).get(2).value(), 0);
    }

    #[test]
    fn central_pm1_examples() {
        assert_eq!(central_pm1(fp(5).one()).unwrap().value(), 4);
        assert_eq!(trinom_row(4, fp(5).one()).get(0).value(), 4);
        assert_eq!(central_pm1(fp(7).zero()).unwrap().value(), 6);
        assert_eq!(central_pm1(fp(7).elem(2)).unwrap().value(), 0);
    }

    #[test]
    fn pm2_anchor_examples() {
        let (a0, a1) = pm2_anchors(fp(5).one()).unwrap();
        assert_eq!((a0.value(), a1.value()), (2, 1));
        let (a0, _) = pm2_anchors(fp(7).elem(3)).unwrap();
        assert_eq!(a0.value(), 5);
        assert_eq!(trinom_row(5, fp(7).elem(3)).get(0).value(), 5);
        assert_eq!(pm2_anchors(fp(7).elem(5)), Err(Error::DegenerateRoots(5)));
        assert!(matches!(
            pm2_anchors(fp(3).zero()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn pm2_half_paper_examples() {
        assert_eq!(pm2_half_paper(fp(5).one()).unwrap().value(), 3);
        assert_eq!(pm2_half_paper(fp(7).one()).unwrap().value(), 1);
        assert_eq!(pm2_half_paper(fp(7).zero()).unwrap().value(), 0);
        // the recurrence disagrees at (7, 0)
        assert_eq!(trinom_coeff(5, 3, fp(7).zero()).value(), 5);
        assert_eq!(
            pm2_half_paper(fp(7).elem(2)),
            Err(Error::DegenerateRoots(2))
        );
    }

    #[test]
    fn pm1_row_closed_examples() {
        let c = fp(5).one();
        assert_eq!(pm1_row_closed(c, 0).unwrap().value(), 4);
        assert_eq!(pm1_row_closed(c, 1).unwrap().value(), 1);
        assert_eq!(pm1_row_closed(c, 2).unwrap().value(), 0);
        assert!(pm1_row_closed(c, 5).is_err());
        assert_eq!(
            pm1_row_closed(fp(5).elem(3), 1),
            Err(Error::DegenerateRoots(3))
        );
    }

    #[test]
    fn cache_returns_identical_rows() {
        let cache = RowCache::new();
        let c = fp(13).elem(4);
        let a = cache.row(11, c);
        let b = cache.row(11, c);
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(*a, trinom_row(11, c));
        assert_eq!(cache.len(), 1);
    }
}
