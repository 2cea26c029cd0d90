//! Exact arithmetic in the integral group ring Z[Z^r], i.e. multivariate
//! Laurent polynomials with arbitrary-precision coefficients.
//!
//! Exponent vectors are fixed-width i64; coefficient growth is unbounded
//! but exponents at this scale stay tiny, so any operation whose exponents
//! would overflow is rejected instead of widened.

mod lattice;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use lattice::{reduce_mod_lattice, CosetTable, Sublattice};

/// Element of Z[Z^r]: a finite map from exponent vectors to nonzero
/// coefficients. Zero coefficients are never stored, so equality is
/// structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentElt {
    rank: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentElt {
    pub fn zero(rank: usize) -> Self {
        LaurentElt {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, value: impl Into<BigInt>) -> Self {
        let mut elt = LaurentElt::zero(rank);
        elt.add_term(vec![0; rank], value.into());
        elt
    }

    pub fn one(rank: usize) -> Self {
        LaurentElt::constant(rank, 1)
    }

    /// The single term coeff * x^exponents.
    pub fn monomial(rank: usize, exponents: Vec<i64>, coeff: impl Into<BigInt>) -> Result<Self> {
        if exponents.len() != rank {
            return Err(Error::ExponentLength {
                expected: rank,
                got: exponents.len(),
            });
        }
        let mut elt = LaurentElt::zero(rank);
        elt.add_term(exponents, coeff.into());
        Ok(elt)
    }

    /// The generator x_axis.
    pub fn variable(rank: usize, axis: usize) -> Result<Self> {
        if axis >= rank {
            return Err(Error::AxisOutOfRange { axis, rank });
        }
        let mut exps = vec![0; rank];
        exps[axis] = 1;
        LaurentElt::monomial(rank, exps, 1)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exponents: &[i64]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_else(BigInt::zero)
    }

    fn add_term(&mut self, exponents: Vec<i64>, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exponents) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentElt {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return LaurentElt::zero(self.rank);
        }
        LaurentElt {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * factor))
                .collect(),
        }
    }

    /// Convolution product. Rejects rank mismatches and exponent overflow.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = LaurentElt::zero(self.rank);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = add_exponents(ea, eb)?;
                out.add_term(exps, ca * cb);
            }
        }
        Ok(out)
    }

    /// Translation by a single monomial: self * x^shift.
    pub fn mul_monomial(&self, shift: &[i64]) -> Result<Self> {
        if shift.len() != self.rank {
            return Err(Error::ExponentLength {
                expected: self.rank,
                got: shift.len(),
            });
        }
        let mut out = LaurentElt::zero(self.rank);
        for (e, c) in &self.terms {
            out.add_term(add_exponents(e, shift)?, c.clone());
        }
        Ok(out)
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(Signed::abs).sum()
    }

    /// Parses the textual syntax used by fixtures and configs: terms like
    /// `3*x0^-2*x1` joined by `+`/`-`. Round-trips exactly with `Display`.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        parse_laurent(text, rank)
    }
}

fn add_exponents(a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| x.checked_add(y).ok_or(Error::ExponentOverflow))
        .collect()
}

/// The geometric sum 1 + x_axis + ... + x_axis^(n-1); its l1 norm is n.
pub fn nu(n: u64, axis: usize, rank: usize) -> Result<LaurentElt> {
    if n == 0 {
        return Err(Error::ZeroCount);
    }
    if axis >= rank {
        return Err(Error::AxisOutOfRange { axis, rank });
    }
    let n_i64 = i64::try_from(n).map_err(|_| Error::ExponentOverflow)?;
    let mut elt = LaurentElt::zero(rank);
    for k in 0..n_i64 {
        let mut exps = vec![0; rank];
        exps[axis] = k;
        elt.add_term(exps, BigInt::one());
    }
    Ok(elt)
}

/// The weight w with [g^n, h^n] = [g, h]^w in any metabelian group, the
/// conjugation acting through the abelianization: nu(n, 0) * nu(n, 1) =
/// sum of x^k y^l over 0 <= k, l < n. Its l1 norm is exactly n^2.
pub fn commutator_conjugation_weight(n: u64) -> Result<LaurentElt> {
    nu(n, 0, 2)?.mul(&nu(n, 1, 2)?)
}

impl fmt::Display for LaurentElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (exps, coeff)) in self.terms.iter().enumerate() {
            let neg = coeff.is_negative();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coeff.abs();
            let mut factors: Vec<String> = Vec::new();
            for (axis, &e) in exps.iter().enumerate() {
                if e == 1 {
                    factors.push(format!("x{axis}"));
                } else if e != 0 {
                    factors.push(format!("x{axis}^{e}"));
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn parse_laurent(text: &str, rank: usize) -> Result<LaurentElt> {
    let err = |message: String| Error::Parse { line: 1, message };
    let mut out = LaurentElt::zero(rank);
    let mut chars = text.chars().peekable();
    let mut sign = BigInt::one();
    let mut seen_term = false;
    loop {
        skip_ws(&mut chars);
        match chars.peek() {
            None if seen_term => break,
            None => return Err(err("empty expression".into())),
            Some('+') if seen_term => {
                chars.next();
                sign = BigInt::one();
            }
            Some('-') => {
                chars.next();
                sign = BigInt::from(-1);
            }
            Some(_) if !seen_term => {}
            Some(c) => return Err(err(format!("expected '+' or '-', found {c:?}"))),
        }
        skip_ws(&mut chars);
        // one term: optional integer, then '*'-separated variable factors
        let mut coeff = sign.clone();
        let mut exps = vec![0i64; rank];
        let mut have_factor = false;
        if matches!(chars.peek(), Some(c) if c.is_ascii_digit()) {
            coeff *= read_integer(&mut chars).map_err(err)?;
            have_factor = true;
        }
        loop {
            skip_ws(&mut chars);
            if have_factor {
                if chars.peek() == Some(&'*') {
                    chars.next();
                    skip_ws(&mut chars);
                } else {
                    break;
                }
            }
            match chars.peek() {
                Some('x') => {
                    chars.next();
                    let axis: usize = read_integer(&mut chars)
                        .map_err(&err)?
                        .try_into()
                        .map_err(|_| err("variable index out of range".into()))?;
                    if axis >= rank {
                        return Err(Error::AxisOutOfRange { axis, rank });
                    }
                    let mut power = 1i64;
                    if chars.peek() == Some(&'^') {
                        chars.next();
                        let mut exp_sign = 1i64;
                        if chars.peek() == Some(&'-') {
                            chars.next();
                            exp_sign = -1;
                        }
                        let raw: i64 = read_integer(&mut chars)
                            .map_err(&err)?
                            .try_into()
                            .map_err(|_| Error::ExponentOverflow)?;
                        power = exp_sign * raw;
                    }
                    exps[axis] = exps[axis].checked_add(power).ok_or(Error::ExponentOverflow)?;
                    have_factor = true;
                }
                Some(c) if have_factor => {
                    return Err(err(format!("unexpected character {c:?} in term")))
                }
                None if have_factor => break,
                other => return Err(err(format!("expected a term, found {other:?}"))),
            }
        }
        out.add_term(exps, coeff);
        seen_term = true;
        sign = BigInt::one();
        skip_ws(&mut chars);
        if chars.peek().is_none() {
            break;
        }
    }
    Ok(out)
}

fn skip_ws(chars: &mut std::iter::Peekable<std::str::Chars>) {
    while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
        chars.next();
    }
}

fn read_integer(chars: &mut std::iter::Peekable<std::str::Chars>) -> std::result::Result<BigInt, String> {
    let mut digits = String::new();
    while matches!(chars.peek(), Some(c) if c.is_ascii_digit()) {
        digits.push(chars.next().unwrap());
    }
    if digits.is_empty() {
        return Err("expected digits".into());
    }
    digits.parse().map_err(|e| format!("bad integer: {e}"))
}
