//! Torsion via gcds of maximal-rank minors.
//!
//! This is a second, algebraically independent route to the torsion of a
//! cokernel: the gcd of the nonzero r x r minors (r = rank) equals the
//! product of the invariant factors. Rank and determinants are computed by
//! fraction-free Bareiss elimination, not by the Smith-form kernel, so the
//! two routes cross-check each other.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{smith_normal_form, IntMatrix};

/// Rank over the rationals by fraction-free Bareiss elimination with full
/// pivoting.
pub fn bareiss_rank(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    bareiss_rank_inner(&mut a, m.cols())
}

fn bareiss_rank_inner(a: &mut [Vec<BigInt>], cols: usize) -> usize {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut k = 0;
    while k < rows.min(cols) {
        let Some((pi, pj)) = find_nonzero(a, cols, k) else {
            break;
        };
        a.swap(k, pi);
        if pj != k {
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
        }
        for i in k + 1..rows {
            for j in k + 1..cols {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev; // exact by the Bareiss identity
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
        k += 1;
    }
    k
}

fn find_nonzero(a: &[Vec<BigInt>], cols: usize, k: usize) -> Option<(usize, usize)> {
    for i in k..a.len() {
        for j in k..cols {
            if !a[i][j].is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Exact determinant of the square submatrix picked out by `rows`/`cols`.
fn submatrix_det(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
    let n = rows.len();
    debug_assert_eq!(n, cols.len());
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| m.entry(i, j).clone()).collect())
        .collect();
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    if sign < 0 {
        -a[n - 1][n - 1].clone()
    } else {
        a[n - 1][n - 1].clone()
    }
}

/// Guard against combinatorial explosion: above this count of maximal
/// minors the computation falls back to the Smith-form product, which gives
/// the same value.
const MAX_MINOR_COUNT: u128 = 1_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Gcd of all nonzero maximal-rank minors; 1 for the zero matrix. Equals
/// the product of the invariant factors. Enumeration stops early once the
/// running gcd reaches 1.
pub fn torsion_via_minor_gcd(m: &IntMatrix) -> BigInt {
    let r = bareiss_rank(m);
    if r == 0 {
        return BigInt::one();
    }
    let count = binomial(m.rows(), r).saturating_mul(binomial(m.cols(), r));
    if count > MAX_MINOR_COUNT {
        return smith_normal_form(m).factor_product();
    }
    let mut gcd = BigInt::zero();
    for row_pick in (0..m.rows()).combinations(r) {
        for col_pick in (0..m.cols()).combinations(r) {
            let det = submatrix_det(m, &row_pick, &col_pick);
            if det.is_zero() {
                continue;
            }
            gcd = gcd.gcd(&det);
            if gcd.is_one() {
                return gcd;
            }
        }
    }
    debug_assert!(!gcd.is_zero(), "rank-many independent rows must give a nonzero minor");
    gcd.abs()
}
