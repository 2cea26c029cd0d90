//! Exact integer linear algebra: dense arbitrary-precision matrices,
//! Smith normal form, minor gcds and l1 row norms.
//!
//! Everything in this module is a pure function on immutable inputs and is
//! safe to call concurrently.

mod minors;
mod snf;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use minors::{bareiss_rank, torsion_via_minor_gcd};

/// Dense integer matrix in row-major order. Entries are exact; no rounding
/// ever occurs in this module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from machine-integer rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows: every row must have length {ncols}"
        );
        IntMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        IntMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &BigInt) {
        self.entries[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    /// Parses the fixture format: first line "rows cols", then row-major
    /// integers separated by whitespace.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty matrix text".into(),
        })?;
        let mut parts = header.split_whitespace();
        let rows: usize = parse_field(parts.next(), 1, "row count")?;
        let cols: usize = parse_field(parts.next(), 1, "column count")?;
        if parts.next().is_some() {
            return Err(Error::Parse {
                line: 1,
                message: "header must be exactly \"rows cols\"".into(),
            });
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for (lineno, line) in lines.enumerate() {
            for tok in line.split_whitespace() {
                let v: BigInt = tok.parse().map_err(|_| Error::Parse {
                    line: lineno + 2,
                    message: format!("invalid integer {tok:?}"),
                })?;
                entries.push(v);
            }
        }
        if entries.len() != rows * cols {
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "expected {} entries for a {rows}x{cols} matrix, found {}",
                    rows * cols,
                    entries.len()
                ),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Inverse of [`IntMatrix::parse`].
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row = self
                .row(i)
                .iter()
                .map(BigInt::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(out, "{row}").unwrap();
        }
        out
    }
}

fn parse_field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.and_then(|t| t.parse().ok()).ok_or(Error::Parse {
        line,
        message: format!("missing or invalid {what}"),
    })
}

/// Invariant factors d_1 | d_2 | ... | d_s of an integer matrix, all
/// positive; `rank` is the rank over the rationals and equals the number
/// of factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    /// Product of the invariant factors; 1 for an empty list.
    pub fn factor_product(&self) -> BigInt {
        self.invariant_factors
            .iter()
            .fold(BigInt::one(), |acc, d| acc * d)
    }
}

/// Structure of a finitely generated abelian group Z^n / (row span):
/// torsion factors in divisibility order, free rank and the torsion size
/// both exactly and as a binary logarithm for reporting. The exact value
/// is authoritative.
#[derive(Debug, Clone, PartialEq)]
pub struct AbelianInvariants {
    pub torsion_factors: Vec<BigInt>,
    pub free_rank: usize,
    pub torsion_size: BigInt,
    pub log2_torsion: f64,
}

impl AbelianInvariants {
    pub fn trivial(free_rank: usize) -> Self {
        AbelianInvariants {
            torsion_factors: Vec::new(),
            free_rank,
            torsion_size: BigInt::one(),
            log2_torsion: 0.0,
        }
    }
}

/// Smith normal form by exact integer elimination. The pivot is always a
/// nonzero entry of minimal absolute value (ties broken by lowest row,
/// then column), which keeps coefficient growth in check. Total function:
/// empty and zero matrices yield an empty factor list.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let diagonal = snf::eliminate(m);
    let rank = diagonal.len();
    SmithForm {
        invariant_factors: diagonal,
        rank,
    }
}

/// Invariants of the abelian group Z^ambient_rank / (row span of
/// `relations`).
pub fn abelian_invariants(relations: &IntMatrix, ambient_rank: usize) -> Result<AbelianInvariants> {
    if relations.cols() != ambient_rank {
        return Err(Error::DimensionMismatch {
            cols: relations.cols(),
            ambient: ambient_rank,
        });
    }
    let snf = smith_normal_form(relations);
    let torsion_size = snf.factor_product();
    let torsion_factors: Vec<BigInt> = snf
        .invariant_factors
        .iter()
        .filter(|d| !d.is_one())
        .cloned()
        .collect();
    let log2_torsion = log2_bigint(&torsion_size);
    Ok(AbelianInvariants {
        torsion_factors,
        free_rank: ambient_rank - snf.rank,
        torsion_size,
        log2_torsion,
    })
}

/// Per-row sums of absolute values.
pub fn l1_row_norms(m: &IntMatrix) -> Vec<BigInt> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(Signed::abs).sum())
        .collect()
}

/// Product of the `cols` largest l1 row norms. Rows with norm zero
/// contribute a factor 1 (only nonzero minors matter), and the list is
/// padded with 1s when the matrix has fewer rows than columns.
pub fn torsion_upper_bound_l1(m: &IntMatrix) -> BigInt {
    let n = m.cols();
    let mut norms: Vec<BigInt> = l1_row_norms(m)
        .into_iter()
        .map(|v| if v.is_zero() { BigInt::one() } else { v })
        .collect();
    norms.resize(norms.len().max(n), BigInt::one());
    norms.sort_unstable_by(|a, b| b.cmp(a));
    norms.into_iter().take(n).product()
}

/// Binary logarithm of a positive integer, accurate to f64 precision.
/// Exact for powers of two.
pub fn log2_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "log2 of a non-positive integer");
    let mag = x.magnitude();
    let bits = mag.bits();
    if mag.count_ones() == 1 {
        return (bits - 1) as f64;
    }
    if bits <= 53 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}
