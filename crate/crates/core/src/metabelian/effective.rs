//! Effective element arithmetic in C_m wr Z^r: finitely supported lamp
//! configurations over Z^r together with a shift. Used as an independent
//! oracle for commutator identities; nothing here touches the normal-form
//! pipeline.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use crate::groupring::{commutator_conjugation_weight, LaurentElt};

/// Element (lamp, shift) of C_m wr Z^r. Lamp values are reduced mod m and
/// zero entries are dropped, so derived equality is group equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectiveElement {
    modulus: u64,
    rank: usize,
    lamp: BTreeMap<Vec<i64>, u64>,
    shift: Vec<i64>,
}

impl EffectiveElement {
    pub fn identity(modulus: u64, rank: usize) -> Self {
        assert!(modulus >= 2);
        EffectiveElement {
            modulus,
            rank,
            lamp: BTreeMap::new(),
            shift: vec![0; rank],
        }
    }

    /// The lamp generator: value 1 at the origin, no shift.
    pub fn lamp_generator(modulus: u64, rank: usize) -> Self {
        let mut e = EffectiveElement::identity(modulus, rank);
        e.lamp.insert(vec![0; rank], 1);
        e
    }

    /// The translation generator along `axis`.
    pub fn shift_generator(modulus: u64, rank: usize, axis: usize) -> Self {
        assert!(axis < rank);
        let mut e = EffectiveElement::identity(modulus, rank);
        e.shift[axis] = 1;
        e
    }

    pub fn shift(&self) -> &[i64] {
        &self.shift
    }

    pub fn lamp(&self) -> &BTreeMap<Vec<i64>, u64> {
        &self.lamp
    }

    fn add_lamp(&mut self, pos: Vec<i64>, value: u64) {
        let v = (self.lamp.get(&pos).copied().unwrap_or(0) + value) % self.modulus;
        if v == 0 {
            self.lamp.remove(&pos);
        } else {
            self.lamp.insert(pos, v);
        }
    }

    /// Group law: (c, u)(c', v) = (c + u.c', u + v) where (u.c')(x) = c'(x - u).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (pos, &val) in &other.lamp {
            let moved: Vec<i64> = pos.iter().zip(&self.shift).map(|(&p, &s)| p + s).collect();
            out.add_lamp(moved, val);
        }
        out.shift = self
            .shift
            .iter()
            .zip(&other.shift)
            .map(|(&a, &b)| a + b)
            .collect();
        out
    }

    pub fn inv(&self) -> Self {
        let mut out = EffectiveElement::identity(self.modulus, self.rank);
        out.shift = self.shift.iter().map(|&s| -s).collect();
        for (pos, &val) in &self.lamp {
            let moved: Vec<i64> = pos.iter().zip(&self.shift).map(|(&p, &s)| p - s).collect();
            out.add_lamp(moved, self.modulus - val);
        }
        out
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = EffectiveElement::identity(self.modulus, self.rank);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// [a, b] = a^-1 b^-1 a b.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.inv().mul(&b.inv()).mul(a).mul(b)
    }

    /// Conjugate g^-1 self g.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.inv().mul(self).mul(g)
    }
}

/// Verifies by direct group arithmetic in C_m wr Z^2 that
/// [g^n, h^n] = [g, h]^w with w = `commutator_conjugation_weight(n)`,
/// the monomial x^k y^l acting as conjugation by g^k h^l.
pub fn effective_commutator_check(modulus: u64, n: u64) -> bool {
    assert!(modulus >= 2 && n >= 1);
    let lamp = EffectiveElement::lamp_generator(modulus, 2);
    let g = lamp.mul(&EffectiveElement::shift_generator(modulus, 2, 0));
    let h = lamp.mul(&EffectiveElement::shift_generator(modulus, 2, 1));

    let lhs = EffectiveElement::commutator(&g.pow(n), &h.pow(n));

    let base = EffectiveElement::commutator(&g, &h);
    debug_assert!(base.shift().iter().all(|&s| s == 0));
    let weight = commutator_conjugation_weight(n).expect("n >= 1");
    let rhs = apply_weight(&base, &weight, &g, &h);
    lhs == rhs
}

/// Applies a group-ring element to a configuration in the base group:
/// each monomial x^k y^l conjugates by g^k h^l, coefficients repeat the
/// summand.
fn apply_weight(
    base: &EffectiveElement,
    weight: &LaurentElt,
    g: &EffectiveElement,
    h: &EffectiveElement,
) -> EffectiveElement {
    let modulus = base.modulus;
    let mut out = EffectiveElement::identity(modulus, base.rank);
    for (exps, coeff) in weight.terms() {
        let conjugator = g.pow(exps[0] as u64).mul(&h.pow(exps[1] as u64));
        let moved = base.conjugate_by(&conjugator);
        let reps = coeff
            .to_u64()
            .expect("weights used here have small positive coefficients");
        for (pos, &val) in &moved.lamp {
            out.add_lamp(pos.clone(), (val * (reps % modulus)) % modulus);
        }
    }
    out
}
