//! The elimination kernel behind the Smith normal form.
//!
//! One generic routine runs over two scalar types: `i128` with
//! overflow-checked arithmetic (fast path) and `BigInt` (fallback when the
//! input does not fit or an intermediate product overflows). Both paths are
//! exact; the fast path never silently wraps.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntMatrix;

/// Scalar operations needed by the elimination. `None` signals overflow and
/// aborts the fast path; the `BigInt` implementation never returns `None`.
pub(crate) trait ElimEntry: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    /// Compares absolute values.
    fn abs_cmp(&self, other: &Self) -> Ordering;
    /// Nearest-integer quotient: the remainder of `self - q * divisor` has
    /// absolute value at most |divisor| / 2.
    fn nearest_quotient(&self, divisor: &Self) -> Option<Self>;
    /// `self - q * b`.
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    fn checked_add(&self, other: &Self) -> Option<Self>;
    fn is_multiple_of(&self, divisor: &Self) -> bool;
    fn is_unit(&self) -> bool;
    fn abs(&self) -> Self;
}

impl ElimEntry for i128 {
    fn is_zero(&self) -> bool {
        *self == 0
    }

    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }

    fn nearest_quotient(&self, divisor: &Self) -> Option<Self> {
        let q0 = self.checked_div_euclid(*divisor)?;
        let r = self.checked_sub(q0.checked_mul(*divisor)?)?; // 0 <= r < |d|
        let adj = if r.unsigned_abs() * 2 > divisor.unsigned_abs() {
            if *divisor > 0 {
                1
            } else {
                -1
            }
        } else {
            0
        };
        q0.checked_add(adj)
    }

    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*b)?)
    }

    fn checked_add(&self, other: &Self) -> Option<Self> {
        i128::checked_add(*self, *other)
    }

    fn is_multiple_of(&self, divisor: &Self) -> bool {
        self % divisor == 0
    }

    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }

    fn abs(&self) -> Self {
        i128::abs(*self)
    }
}

impl ElimEntry for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }

    fn nearest_quotient(&self, divisor: &Self) -> Option<Self> {
        let (q0, r) = self.div_mod_floor(divisor);
        // floor division gives 0 <= r < d for d > 0 and d < r <= 0 for
        // d < 0; in both cases r - d is the other candidate remainder, so
        // whenever |2r| > |d| the symmetric choice is q0 + 1.
        let bound = Signed::abs(divisor);
        if &r * 2 > bound || &r * -2 > bound {
            Some(q0 + 1)
        } else {
            Some(q0)
        }
    }

    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }

    fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }

    fn is_multiple_of(&self, divisor: &Self) -> bool {
        Zero::is_zero(&self.mod_floor(divisor))
    }

    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

struct Grid<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: ElimEntry> Grid<T> {
    fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_i -= q * row_k over columns `from..`.
    fn row_sub_mul(&mut self, i: usize, k: usize, q: &T, from: usize) -> Option<()> {
        for j in from..self.cols {
            let v = self.at(i, j).sub_mul(q, self.at(k, j))?;
            self.set(i, j, v);
        }
        Some(())
    }

    /// col_j -= q * col_k over rows `from..`.
    fn col_sub_mul(&mut self, j: usize, k: usize, q: &T, from: usize) -> Option<()> {
        for i in from..self.rows {
            let v = self.at(i, j).sub_mul(q, self.at(i, k))?;
            self.set(i, j, v);
        }
        Some(())
    }

    fn row_add(&mut self, dst: usize, src: usize, from: usize) -> Option<()> {
        for j in from..self.cols {
            let v = self.at(dst, j).checked_add(self.at(src, j))?;
            self.set(dst, j, v);
        }
        Some(())
    }

    /// Minimal-absolute-value nonzero entry of the trailing submatrix,
    /// ties broken by lowest row then lowest column.
    fn find_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in k..self.rows {
            for j in k..self.cols {
                let e = self.at(i, j);
                if e.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if e.abs_cmp(self.at(bi, bj)) != Ordering::Less => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }
}

/// Diagonalizes the grid in place and returns the positive diagonal with the
/// divisibility chain d_i | d_{i+1}, or `None` if checked arithmetic
/// overflowed.
fn diagonalize<T: ElimEntry>(g: &mut Grid<T>) -> Option<Vec<T>> {
    let min_dim = g.rows.min(g.cols);
    let mut k = 0;
    'outer: while k < min_dim {
        loop {
            let Some((pi, pj)) = g.find_pivot(k) else {
                break 'outer;
            };
            g.swap_rows(k, pi);
            g.swap_cols(k, pj);

            // clear column k; symmetric remainders shrink strictly below the
            // pivot, so a re-entry picks a smaller pivot
            let mut dirty = false;
            for i in k + 1..g.rows {
                if g.at(i, k).is_zero() {
                    continue;
                }
                let q = g.at(i, k).nearest_quotient(g.at(k, k))?;
                if !q.is_zero() {
                    g.row_sub_mul(i, k, &q, k)?;
                }
                dirty |= !g.at(i, k).is_zero();
            }
            if dirty {
                continue;
            }

            // clear row k; column operations leave column k untouched
            for j in k + 1..g.cols {
                if g.at(k, j).is_zero() {
                    continue;
                }
                let q = g.at(k, j).nearest_quotient(g.at(k, k))?;
                if !q.is_zero() {
                    g.col_sub_mul(j, k, &q, k)?;
                }
                dirty |= !g.at(k, j).is_zero();
            }
            if dirty {
                continue;
            }

            // the pivot must divide the rest of the submatrix; folding an
            // offending row into row k shrinks the pivot to a gcd
            if !g.at(k, k).is_unit() {
                let bad = (k + 1..g.rows).find(|&i| {
                    (k + 1..g.cols).any(|j| !g.at(i, j).is_multiple_of(g.at(k, k)))
                });
                if let Some(i) = bad {
                    g.row_add(k, i, k)?;
                    continue;
                }
            }
            break;
        }
        k += 1;
    }
    Some((0..k).map(|i| g.at(i, i).abs()).collect())
}

fn to_i128_grid(m: &IntMatrix) -> Option<Grid<i128>> {
    let data: Option<Vec<i128>> = m.entries().iter().map(ToPrimitive::to_i128).collect();
    Some(Grid {
        rows: m.rows(),
        cols: m.cols(),
        data: data?,
    })
}

pub(crate) fn eliminate(m: &IntMatrix) -> Vec<BigInt> {
    if let Some(mut grid) = to_i128_grid(m) {
        if let Some(diag) = diagonalize(&mut grid) {
            return diag.into_iter().map(BigInt::from).collect();
        }
    }
    let mut grid = Grid {
        rows: m.rows(),
        cols: m.cols(),
        data: m.entries().to_vec(),
    };
    diagonalize(&mut grid).expect("BigInt elimination cannot overflow")
}
