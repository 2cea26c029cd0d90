//! Finite-index sublattices of Z^r and coset enumeration.
//!
//! A sublattice is stored with a column-style Hermite form: lower
//! triangular, positive diagonal, entries left of the diagonal reduced into
//! [0, diagonal). Canonical coset representatives are the vectors with
//! i-th coordinate in [0, h_ii), obtained by reducing coordinates
//! successively from the top row down.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::IntMatrix;

use super::LaurentElt;

/// Hard cap on enumerable coset counts; lattices of larger index are
/// rejected rather than allocating unbounded tables.
const MAX_COSETS: u64 = 1 << 24;

/// Finite-index sublattice P <= Z^r. The columns of `basis` generate P;
/// the index [Z^r : P] equals |det basis|.
#[derive(Debug, Clone)]
pub struct Sublattice {
    rank: usize,
    basis: IntMatrix,
    /// Column Hermite form of the basis, row-major, entries fit in i64.
    hnf: Vec<Vec<i64>>,
    index: BigInt,
}

impl Sublattice {
    pub fn from_basis(basis: IntMatrix) -> Result<Self> {
        if basis.rows() != basis.cols() {
            return Err(Error::NonSquareBasis {
                rows: basis.rows(),
                cols: basis.cols(),
            });
        }
        let rank = basis.rows();
        let hnf_big = column_hermite_form(&basis)?;
        let mut index = BigInt::one();
        for (i, row) in hnf_big.iter().enumerate() {
            index *= &row[i];
        }
        let hnf: Vec<Vec<i64>> = hnf_big
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.to_i64().ok_or(Error::LatticeCoordinateOverflow))
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<_>>()?;
        Ok(Sublattice {
            rank,
            basis,
            hnf,
            index,
        })
    }

    /// The scaled lattice n * Z^rank.
    pub fn scaled(rank: usize, n: i64) -> Result<Self> {
        let mut basis = IntMatrix::zero(rank, rank);
        for i in 0..rank {
            basis.set(i, i, BigInt::from(n));
        }
        Sublattice::from_basis(basis)
    }

    /// The full lattice Z^rank (index 1).
    pub fn identity(rank: usize) -> Self {
        Sublattice::from_basis(IntMatrix::identity(rank)).expect("identity basis is unimodular")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Index [Z^r : P] = |det basis| = number of cosets.
    pub fn index(&self) -> &BigInt {
        &self.index
    }

    pub fn hermite_diagonal(&self) -> Vec<i64> {
        (0..self.rank).map(|i| self.hnf[i][i]).collect()
    }

    /// Enumerates the cosets of Z^r / P.
    pub fn coset_table(&self) -> Result<CosetTable> {
        let m = self
            .index
            .to_u64()
            .filter(|&m| m <= MAX_COSETS)
            .ok_or_else(|| Error::LatticeIndexTooLarge {
                index: self.index.to_string(),
            })? as usize;
        let diag = self.hermite_diagonal();
        let mut strides = vec![1usize; self.rank];
        for i in (0..self.rank.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (diag[i + 1] as usize);
        }
        // mixed-radix counting with the first coordinate most significant
        // enumerates representatives in lexicographic order
        let mut reps = Vec::with_capacity(m);
        let mut current = vec![0i64; self.rank];
        for _ in 0..m {
            reps.push(current.clone());
            for axis in (0..self.rank).rev() {
                current[axis] += 1;
                if current[axis] < diag[axis] {
                    break;
                }
                current[axis] = 0;
            }
        }
        Ok(CosetTable {
            rank: self.rank,
            hnf: self.hnf.clone(),
            diag,
            strides,
            reps,
        })
    }
}

/// Enumerated cosets of Z^r / P with a retraction onto canonical
/// representatives.
#[derive(Debug, Clone)]
pub struct CosetTable {
    rank: usize,
    hnf: Vec<Vec<i64>>,
    diag: Vec<i64>,
    strides: Vec<usize>,
    reps: Vec<Vec<i64>>,
}

impl CosetTable {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.reps.len()
    }

    /// Canonical representatives in lexicographic order.
    pub fn representatives(&self) -> &[Vec<i64>] {
        &self.reps
    }

    /// Canonical representative of the coset of `v`: coordinates reduced
    /// into [0, diagonal) from the top row down.
    pub fn reduce(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.rank {
            return Err(Error::ExponentLength {
                expected: self.rank,
                got: v.len(),
            });
        }
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for i in 0..self.rank {
            let d = self.diag[i] as i128;
            let q = w[i].div_euclid(d);
            if q != 0 {
                for row in i..self.rank {
                    w[row] -= q * self.hnf[row][i] as i128;
                }
            }
        }
        Ok(w.into_iter().map(|x| x as i64).collect())
    }

    /// Position of the coset of `v` in `representatives()`.
    pub fn index_of(&self, v: &[i64]) -> Result<usize> {
        let rep = self.reduce(v)?;
        Ok(rep
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum())
    }
}

/// Replaces every monomial exponent by its canonical coset representative,
/// summing coefficients that land on the same coset. The l1 norm never
/// increases.
pub fn reduce_mod_lattice(a: &LaurentElt, table: &CosetTable) -> Result<LaurentElt> {
    if a.rank() != table.rank() {
        return Err(Error::RankMismatch {
            left: a.rank(),
            right: table.rank(),
        });
    }
    let mut out = LaurentElt::zero(a.rank());
    for (exps, coeff) in a.terms() {
        out.add_term(table.reduce(exps)?, coeff.clone());
    }
    Ok(out)
}

/// Column-style Hermite form: acts by unimodular column operations only.
/// Returns a lower-triangular matrix with positive diagonal and the entries
/// left of each diagonal reduced into [0, diagonal). Errors on singular
/// input.
fn column_hermite_form(basis: &IntMatrix) -> Result<Vec<Vec<BigInt>>> {
    let r = basis.rows();
    let mut a: Vec<Vec<BigInt>> = (0..r).map(|i| basis.row(i).to_vec()).collect();
    for i in 0..r {
        loop {
            // pick the column with the smallest nonzero entry in row i
            let mut best: Option<usize> = None;
            for j in i..r {
                if a[i][j].is_zero() {
                    continue;
                }
                match best {
                    Some(b) if a[i][j].magnitude() >= a[i][b].magnitude() => {}
                    _ => best = Some(j),
                }
            }
            let piv = best.ok_or(Error::SingularLattice)?;
            swap_cols(&mut a, i, piv);
            let mut clean = true;
            for j in i + 1..r {
                if a[i][j].is_zero() {
                    continue;
                }
                let q = a[i][j].div_floor(&a[i][i]);
                sub_col(&mut a, j, i, &q);
                clean &= a[i][j].is_zero();
            }
            if clean {
                break;
            }
        }
        if a[i][i].is_negative() {
            for row in a.iter_mut() {
                row[i] = -row[i].clone();
            }
        }
        // normalize entries to the left of the diagonal into [0, diag)
        for j in 0..i {
            let q = a[i][j].div_floor(&a[i][i]);
            if !q.is_zero() {
                sub_col(&mut a, j, i, &q);
            }
        }
    }
    Ok(a)
}

fn swap_cols(a: &mut [Vec<BigInt>], x: usize, y: usize) {
    if x == y {
        return;
    }
    for row in a.iter_mut() {
        row.swap(x, y);
    }
}

/// col_j -= q * col_i.
fn sub_col(a: &mut [Vec<BigInt>], j: usize, i: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        let delta = q * &row[i];
        row[j] -= delta;
    }
}
