//! Lucas sequences `u_n(A,B)`: `u_0 = 0`, `u_1 = 1`,
//! `u_{n+1} = A·u_n − B·u_{n−1}`.

use crate::error::{Error, Result};
use crate::ffcore::Fp;
use crate::scalar::Ring;

#[derive(Clone, Debug, PartialEq)]
pub struct LucasParams<T> {
    pub a: T,
    pub b: T,
}

impl<T: Ring> LucasParams<T> {
    pub fn new(a: T, b: T) -> Self {
        LucasParams { a, b }
    }
}

/// Iterative evaluation, O(n) ring operations.
pub fn lucas_u<T: Ring>(n: u64, params: &LucasParams<T>) -> T {
    let mut prev = params.a.zero_like();
    let mut cur = params.a.one_like();
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = params.a.clone() * cur.clone() - params.b.clone() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Predicted `u_{(p−1)/2}` and `u_{(p+1)/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfIndexValues {
    pub u_half_minus: Fp,
    pub u_half_plus: Fp,
}

/// Half-index values for `B = b²` a nonzero square:
///
/// * `χ(A² − 4B) = 1`: `u_{(p−1)/2} = 0`, `u_{(p+1)/2} = χ(A − 2b)`;
/// * `χ(A² − 4B) = −1`: `u_{(p−1)/2} = χ(A − 2b)/b`, `u_{(p+1)/2} = 0`.
pub fn lucas_half_closed(params: &LucasParams<Fp>, b: Fp) -> Result<HalfIndexValues> {
    let ctx = params.a.ctx();
    ctx.require_odd()?;
    if params.b.legendre()? != 1 {
        return Err(Error::Precondition(format!(
            "B = {} is not a nonzero square",
            params.b.value()
        )));
    }
    if b * b != params.b {
        return Err(Error::Precondition(format!(
            "b = {} does not square to B = {}",
            b.value(),
            params.b.value()
        )));
    }
    let disc = params.a * params.a - ctx.elem(4) * params.b;
    let sign = (params.a - ctx.elem(2) * b).chi()?;
    match disc.legendre()? {
        0 => Err(Error::Precondition("A² − 4B = 0".into())),
        1 => Ok(HalfIndexValues {
            u_half_minus: ctx.zero(),
            u_half_plus: sign,
        }),
        _ => Ok(HalfIndexValues {
            u_half_minus: sign * b.inv()?,
            u_half_plus: ctx.zero(),
        }),
    }
}
