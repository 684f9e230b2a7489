use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use trinomial_fp::{
    central_pm1, central_seq, enumerate_primes, row_p_closed, trinom_row, FieldCtx, Fp, RowCache,
    TrinomRow,
};

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Σ_j n!/(j!(j+k)!(n−2j−k)!) c^{n−2j−k}
fn multinomial(n: u64, k: i64, c: i64) -> BigInt {
    let k = k.unsigned_abs();
    if k > n {
        return BigInt::zero();
    }
    let mut total = BigInt::zero();
    let mut j = 0;
    while 2 * j + k <= n {
        let rest = n - 2 * j - k;
        let term = factorial(n) / (factorial(j) * factorial(j + k) * factorial(rest));
        total += term * BigInt::from(c).pow(rest as u32);
        j += 1;
    }
    total
}

fn reduce(x: &BigInt, ctx: FieldCtx) -> Fp {
    let p = BigInt::from(ctx.p());
    let r = ((x % &p) + &p) % &p;
    ctx.elem(r.try_into().unwrap())
}

#[test]
fn integer_rows_match_multinomial_sum() {
    for c in -3i64..=3 {
        for n in 0..=25usize {
            let row: TrinomRow<BigInt> = trinom_row(n, BigInt::from(c));
            for k in -(n as i64) - 1..=n as i64 + 1 {
                assert_eq!(row.get(k), multinomial(n as u64, k, c), "n={n} k={k} c={c}");
            }
        }
    }
}

#[test]
fn sign_symmetry() {
    for c in 1i64..=4 {
        for n in 0..=20usize {
            let pos = trinom_row(n, BigInt::from(c));
            let neg = trinom_row(n, BigInt::from(-c));
            for k in -(n as i64)..=n as i64 {
                let sign = if (n as i64 + k) % 2 == 0 { 1 } else { -1 };
                assert_eq!(neg.get(k), pos.get(k) * sign);
            }
        }
    }
}

#[test]
fn reduction_commutes_with_recurrence() {
    for p in [5u64, 7, 13, 31] {
        let ctx = FieldCtx::new(p).unwrap();
        for c in -3i64..=3 {
            for n in 0..=30usize {
                let z = trinom_row(n, BigInt::from(c));
                let f = trinom_row(n, ctx.from_i64(c));
                for k in 0..=n as i64 {
                    assert_eq!(f.get(k), reduce(&z.get(k), ctx));
                }
            }
        }
    }
}

#[test]
fn evaluation_at_plus_and_minus_one() {
    let ctx = FieldCtx::new(101).unwrap();
    for c in ctx.elements().step_by(7) {
        for n in 0..=30usize {
            let row = trinom_row(n, c);
            let one = ctx.one();
            assert_eq!(row.evaluate(&one), (c + ctx.elem(2)).pow(n as u64));
            assert_eq!(row.evaluate(&-one), (c - ctx.elem(2)).pow(n as u64));
        }
    }
}

#[test]
fn row_p_and_central_p_minus_1() {
    for p in enumerate_primes(3, 31).unwrap() {
        let ctx = FieldCtx::new(p).unwrap();
        for c in ctx.elements() {
            let row = trinom_row(p as usize, c);
            for k in -(p as i64) - 1..=p as i64 + 1 {
                assert_eq!(row.get(k), row_p_closed(c, k), "p={p} c={c} k={k}");
            }
            assert_eq!(
                trinom_row(p as usize - 1, c).get(0),
                central_pm1(c).unwrap()
            );
        }
    }
}

#[test]
fn derivative_and_p_minus_1_recurrence() {
    for p in enumerate_primes(5, 31).unwrap() {
        let ctx = FieldCtx::new(p).unwrap();
        let pi = p as i64;
        for c in ctx.elements() {
            let m1 = trinom_row(p as usize - 1, c);
            let m2 = trinom_row(p as usize - 2, c);
            for k in -(pi - 1)..=pi - 1 {
                assert_eq!(
                    ctx.from_i64(k) * m1.get(k),
                    m2.get(k + 1) - m2.get(k - 1),
                    "p={p} c={c} k={k}"
                );
            }
            for k in 1..=pi - 2 {
                assert_eq!(m1.get(k + 1), -c * m1.get(k) - m1.get(k - 1));
            }
        }
    }
}

#[test]
fn central_sequence_agrees_with_rows() {
    for p in [3u64, 5, 7, 13] {
        let ctx = FieldCtx::new(p).unwrap();
        for c in ctx.elements() {
            let seq = central_seq(3 * p as usize + 2, c);
            let mut row = trinom_row(0, c);
            for (n, v) in seq.iter().enumerate() {
                assert_eq!(*v, row.get(0), "p={p} c={c} n={n}");
                row = row.next_row();
            }
        }
    }
    // over Q the recurrence never falls back
    let seq = central_seq(20, BigRational::from_integer(BigInt::from(3)));
    for (n, v) in seq.iter().enumerate() {
        assert_eq!(*v, BigRational::from_integer(multinomial(n as u64, 0, 3)));
    }
}

#[test]
fn shared_cache_is_consistent() {
    let cache = RowCache::new();
    let ctx = FieldCtx::new(29).unwrap();
    std::thread::scope(|s| {
        for t in 0..4u64 {
            let cache = &cache;
            s.spawn(move || {
                for c in ctx.elements() {
                    let n = (c.value() + t) as usize % 30;
                    assert_eq!(*cache.row(n, c), trinom_row(n, c));
                }
            });
        }
    });
    assert!(!cache.is_empty());
}
