//! Dense matrices with exact determinants, and builders for the specific
//! matrices studied here: `D_p(c,d)`, circulants, Cauchy matrices and the
//! half-range matrix `[1/(i² + j²)]`.

use std::fmt::{self, Display, Write as _};

use crate::error::{Error, Result};
use crate::ffcore::{FieldCtx, Fp};
use crate::scalar::{Field, Ring};

/// Row-major dense matrix. `zero` pins the scalar context so empty
/// and all-zero matrices still know their field.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    nrows: usize,
    ncols: usize,
    entries: Vec<T>,
    zero: T,
}

impl<T: Ring> Matrix<T> {
    pub fn from_fn(
        nrows: usize,
        ncols: usize,
        sample: &T,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Self {
        let mut entries = Vec::with_capacity(nrows * ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                entries.push(f(i, j));
            }
        }
        Matrix {
            nrows,
            ncols,
            entries,
            zero: sample.zero_like(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let zero = rows
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| Error::Dimension("empty matrix has no scalar context".into()))?
            .zero_like();
        Ok(Matrix {
            nrows,
            ncols,
            entries: rows.into_iter().flatten().collect(),
            zero,
        })
    }

    pub fn identity(n: usize, sample: &T) -> Self {
        let one = sample.one_like();
        Self::from_fn(n, n, sample, |i, j| {
            if i == j {
                one.clone()
            } else {
                sample.zero_like()
            }
        })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.ncols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, &self.zero, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.nrows == self.ncols
            && (0..self.nrows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        if self.ncols != rhs.nrows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.nrows, self.ncols, rhs.nrows, rhs.ncols
            )));
        }
        Ok(Self::from_fn(self.nrows, rhs.ncols, &self.zero, |i, j| {
            (0..self.ncols).fold(self.zero.clone(), |acc, k| {
                acc + self.get(i, k).clone() * rhs.get(k, j).clone()
            })
        }))
    }
}

impl<T: Field> Matrix<T> {
    /// Gaussian elimination with first-nonzero pivoting.
    pub fn det(&self) -> Result<T> {
        if self.nrows != self.ncols {
            return Err(Error::NotSquare(self.nrows, self.ncols));
        }
        let n = self.nrows;
        let mut a = self.entries.clone();
        let mut det = self.zero.one_like();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero_elem()) else {
                return Ok(self.zero.clone());
            };
            if pivot != col {
                for k in col..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let pv = a[col * n + col].clone();
            det = det * pv.clone();
            let pv_inv = pv.inverse().expect("pivot is nonzero");
            for r in col + 1..n {
                let factor = a[r * n + col].clone() * pv_inv.clone();
                if factor.is_zero_elem() {
                    continue;
                }
                for k in col..n {
                    let t = a[r * n + k].clone() - factor.clone() * a[col * n + k].clone();
                    a[r * n + k] = t;
                }
            }
        }
        Ok(det)
    }
}

impl<T: Display> Matrix<T> {
    /// Row-major decimal dump: one row per line, entries space-separated.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for i in 0..self.nrows {
            let row = &self.entries[i * self.ncols..(i + 1) * self.ncols];
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    out.push(' ');
                }
                write!(out, "{x}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

impl<T: Display> Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// `x^{p−2}`: the inverse of a unit, zero for zero.
fn inv_or_zero(x: Fp) -> Fp {
    x.inv().unwrap_or(x)
}

/// `D_p(c,d)`: the (p−1)×(p−1) matrix with entries `(i² + cij + dj²)^{p−2}`
/// for `1 ≤ i, j ≤ p−1`.
pub fn build_dp(c: Fp, d: Fp) -> Result<Matrix<Fp>> {
    let ctx = c.ctx();
    assert_eq!(ctx, d.ctx(), "c and d from different fields");
    ctx.require_odd()?;
    let m = (ctx.p() - 1) as usize;
    Ok(Matrix::from_fn(m, m, &c, |i, j| {
        let (x, y) = (ctx.elem(i as u64 + 1), ctx.elem(j as u64 + 1));
        inv_or_zero(x * x + c * x * y + d * y * y)
    }))
}

/// Generator of a circulant matrix `C(a_0, …, a_{m−1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct CirculantProfile<T> {
    a: Vec<T>,
}

impl<T: Ring> CirculantProfile<T> {
    pub fn new(a: Vec<T>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Dimension(
                "circulant profile must be nonempty".into(),
            ));
        }
        Ok(CirculantProfile { a })
    }

    pub fn as_slice(&self) -> &[T] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `a_i = a_{m−i}` for `1 ≤ i ≤ m−1`.
    pub fn is_palindromic(&self) -> bool {
        let m = self.a.len();
        (1..m).all(|i| self.a[i] == self.a[m - i])
    }

    /// `Σ a_i`.
    pub fn sum(&self) -> T {
        self.a
            .iter()
            .skip(1)
            .fold(self.a[0].clone(), |acc, x| acc + x.clone())
    }

    /// `Σ (−1)^i a_i`.
    pub fn alternating_sum(&self) -> T {
        self.a
            .iter()
            .enumerate()
            .skip(1)
            .fold(self.a[0].clone(), |acc, (i, x)| {
                if i % 2 == 0 {
                    acc + x.clone()
                } else {
                    acc - x.clone()
                }
            })
    }
}

/// m×m matrix with entry `(i,j) = a_{(i−j) mod m}`.
pub fn build_circulant<T: Ring>(profile: &CirculantProfile<T>) -> Matrix<T> {
    let m = profile.len();
    Matrix::from_fn(m, m, &profile.a[0], |i, j| {
        profile.a[(i + m - j) % m].clone()
    })
}

/// `a_i = g^i / (g^{2i} + c g^i + 1)` for `0 ≤ i ≤ p−2`, with the zero
/// convention when the denominator vanishes.
pub fn circulant_profile(c: Fp, g: Fp) -> Result<CirculantProfile<Fp>> {
    let ctx = c.ctx();
    assert_eq!(ctx, g.ctx(), "c and g from different fields");
    ctx.require_odd()?;
    if !g.is_primitive_root() {
        return Err(Error::NotPrimitiveRoot(g.value(), ctx.p()));
    }
    let mut gi = ctx.one();
    let mut a = Vec::with_capacity(ctx.p() as usize - 1);
    for _ in 0..ctx.p() - 1 {
        a.push(gi * inv_or_zero(gi * gi + c * gi + ctx.one()));
        gi *= g;
    }
    CirculantProfile::new(a)
}

/// Cauchy matrix `[1/(x_i + y_j)]`. Fails if some `x_i + y_j = 0`.
pub fn cauchy_matrix<T: Field>(xs: &[T], ys: &[T]) -> Result<Matrix<T>> {
    cauchy_shape(xs, ys)?;
    let mut failed = false;
    let m = Matrix::from_fn(xs.len(), ys.len(), &xs[0], |i, j| {
        (xs[i].clone() + ys[j].clone())
            .inverse()
            .unwrap_or_else(|| {
                failed = true;
                xs[0].zero_like()
            })
    });
    if failed {
        return Err(Error::FormulaInapplicable("some x_i + y_j = 0".into()));
    }
    Ok(m)
}

fn cauchy_shape<T>(xs: &[T], ys: &[T]) -> Result<()> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::Dimension(format!(
            "xs has {} entries, ys has {}",
            xs.len(),
            ys.len()
        )));
    }
    Ok(())
}

/// `det[1/(x_i + y_j)] = Π_{i<j} (x_i − x_j)(y_i − y_j) / Π_{i,j} (x_i + y_j)`.
pub fn cauchy_det<T: Field>(xs: &[T], ys: &[T]) -> Result<T> {
    cauchy_shape(xs, ys)?;
    let one = xs[0].one_like();
    let n = xs.len();
    let mut num = one.clone();
    let mut den = one;
    for i in 0..n {
        for j in 0..n {
            den = den * (xs[i].clone() + ys[j].clone());
            if i < j {
                num = num * (xs[i].clone() - xs[j].clone()) * (ys[i].clone() - ys[j].clone());
            }
        }
    }
    let den_inv = den
        .inverse()
        .ok_or_else(|| Error::FormulaInapplicable("some x_i + y_j = 0".into()))?;
    Ok(num * den_inv)
}

/// `det[1/(i² + j²)]` for `1 ≤ i, j ≤ (p−1)/2`, p ≡ 3 (mod 4).
pub fn sun_half_det(ctx: FieldCtx) -> Result<Fp> {
    if ctx.p() % 4 != 3 {
        return Err(Error::Precondition(format!(
            "p = {} is not 3 mod 4",
            ctx.p()
        )));
    }
    let m = ((ctx.p() - 1) / 2) as usize;
    let mat = Matrix::from_fn(m, m, &ctx.zero(), |i, j| {
        let (x, y) = (ctx.elem(i as u64 + 1), ctx.elem(j as u64 + 1));
        // −1 is a non-residue, so i² + j² never vanishes
        (x * x + y * y)
            .inv()
            .expect("i² + j² is nonzero for p ≡ 3 mod 4")
    });
    mat.det()
}

/// Sign of the permutation `x ↦ a·x` of F_p, from its cycle decomposition.
pub fn perm_sign_mul(a: Fp) -> Result<i8> {
    if a.is_zero() {
        return Err(Error::Precondition("multiplier must be nonzero".into()));
    }
    let p = a.modulus() as usize;
    let mut seen = vec![false; p];
    let mut sign = 1i8;
    for start in 0..p {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            x = (x as u64 * a.value() % a.modulus()) as usize;
        }
        if len.is_multiple_of(2) {
            sign = -sign;
        }
    }
    Ok(sign)
}
