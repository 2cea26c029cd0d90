//! Split metabelian groups G = A x| Z^r, their standard finite-index
//! subgroups H = B x| P, and exact abelianization invariants.
//!
//! A family constructor supplies the normal module A, a presentation of the
//! derived submodule G' = A(Q-1), and the generator count used by the bound
//! formulas. Only the split shape with standard subgroups is modelled; in
//! exchange every invariant is computed exactly by the coinvariant
//! pushdown.

mod effective;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::groupring::{LaurentElt, Sublattice};
use crate::intlinalg::AbelianInvariants;
use crate::modules::ModulePresentation;

pub use effective::{effective_commutator_check, EffectiveElement};

/// Which built-in family a group came from; some constructions (ideal
/// subgroups, the brute-force index oracle) are only defined on
/// lamplighters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    Lamplighter { modulus: u64 },
    BaumslagSolitar { multiplier: u64 },
    FreeWreath,
}

impl FamilyKind {
    fn describe(&self) -> String {
        match self {
            FamilyKind::Lamplighter { modulus } => format!("C{modulus} wr Z^r"),
            FamilyKind::BaumslagSolitar { multiplier } => format!("BS(1,{multiplier}) module"),
            FamilyKind::FreeWreath => "Z wr Z^r".into(),
        }
    }
}

/// G = A x| Z^r with A a finitely presented Z[Z^r]-module.
#[derive(Debug, Clone)]
pub struct SplitMetabelianGroup {
    name: String,
    top_rank: usize,
    module: ModulePresentation,
    derived: ModulePresentation,
    gen_count: usize,
    kind: FamilyKind,
}

impl SplitMetabelianGroup {
    /// The lamplighter family C_m wr Z^r: A is Z[Z^r] / (m) on one
    /// generator, the derived submodule is the augmentation ideal of the
    /// mod-m group ring, and the natural generating set has r + 1 elements.
    pub fn lamplighter(modulus: u64, top_rank: usize) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::ModulusTooSmall(modulus));
        }
        if top_rank == 0 {
            return Err(Error::ZeroRank);
        }
        let module = ModulePresentation::new(
            top_rank,
            1,
            vec![vec![LaurentElt::constant(top_rank, modulus as i64)]],
        )?;
        let derived = augmentation_ideal_presentation(top_rank, Some(modulus))?;
        Ok(SplitMetabelianGroup {
            name: format!("C{modulus} wr Z^{top_rank}"),
            top_rank,
            module,
            derived,
            gen_count: top_rank + 1,
            kind: FamilyKind::Lamplighter { modulus },
        })
    }

    /// The BS(1,k) module family: A = Z[1/k] as a Z[t^(+-1)]-module with
    /// the single relation (t - k) e. Multiplication by (t - 1) is
    /// injective on A, so the derived submodule has the same presentation.
    pub fn bs_module(multiplier: u64) -> Result<Self> {
        if multiplier < 2 {
            return Err(Error::MultiplierTooSmall(multiplier));
        }
        let rel = || -> Result<LaurentElt> {
            LaurentElt::variable(1, 0)?
                .sub(&LaurentElt::constant(1, multiplier as i64))
        };
        let module = ModulePresentation::new(1, 1, vec![vec![rel()?]])?;
        let derived = ModulePresentation::new(1, 1, vec![vec![rel()?]])?;
        Ok(SplitMetabelianGroup {
            name: format!("BS(1,{multiplier})"),
            top_rank: 1,
            module,
            derived,
            gen_count: 2,
            kind: FamilyKind::BaumslagSolitar { multiplier },
        })
    }

    /// The torsion-free contrast family Z wr Z^r: A is free of rank one.
    pub fn free_wreath(top_rank: usize) -> Result<Self> {
        if top_rank == 0 {
            return Err(Error::ZeroRank);
        }
        let module = ModulePresentation::free(top_rank, 1);
        let derived = augmentation_ideal_presentation(top_rank, None)?;
        Ok(SplitMetabelianGroup {
            name: format!("Z wr Z^{top_rank}"),
            top_rank,
            module,
            derived,
            gen_count: top_rank + 1,
            kind: FamilyKind::FreeWreath,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn top_rank(&self) -> usize {
        self.top_rank
    }

    pub fn module(&self) -> &ModulePresentation {
        &self.module
    }

    pub fn derived(&self) -> &ModulePresentation {
        &self.derived
    }

    /// Generator count d used in the bound formulas: module generators
    /// plus top rank.
    pub fn gen_count(&self) -> usize {
        self.gen_count
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    /// The standard subgroup H = A x| P: full module part, so a = 1 and
    /// H contains the derived subgroup.
    pub fn subgroup_from_lattice(&self, lattice: Sublattice) -> Result<StandardSubgroup> {
        if lattice.rank() != self.top_rank {
            return Err(Error::RankMismatch {
                left: lattice.rank(),
                right: self.top_rank,
            });
        }
        Ok(StandardSubgroup {
            submodule: self.module.clone(),
            lattice,
            index_in_module: BigInt::one(),
            contains_derived: true,
        })
    }

    /// The standard subgroup H = (f A) x| P for a lamplighter with prime
    /// modulus m. Over F_m[t^(+-1)] a nonzero f generates a free submodule,
    /// so B inherits the presentation of A; the index [A : fA] is
    /// m^(degree span of f), and B contains the derived submodule exactly
    /// when f divides t - 1 mod m.
    pub fn subgroup_from_ideal(
        &self,
        f: &LaurentElt,
        lattice: Sublattice,
    ) -> Result<StandardSubgroup> {
        let modulus = match self.kind {
            FamilyKind::Lamplighter { modulus } if self.top_rank == 1 => modulus,
            _ => {
                return Err(Error::UnsupportedFamily {
                    expected: "a lamplighter over Z".into(),
                    got: self.kind.describe(),
                })
            }
        };
        if !is_prime(modulus) {
            return Err(Error::CompositeModulus(modulus));
        }
        if f.rank() != 1 {
            return Err(Error::RankMismatch {
                left: f.rank(),
                right: 1,
            });
        }
        if lattice.rank() != 1 {
            return Err(Error::RankMismatch {
                left: lattice.rank(),
                right: 1,
            });
        }
        let coeffs = checked_support_mod(f, modulus)?;
        let (lo, _) = *coeffs.first().unwrap();
        let (hi, _) = *coeffs.last().unwrap();
        let span = (hi - lo) as u32;
        let index_in_module = BigInt::from(modulus).pow(span);
        let nonzero: Vec<(i64, u64)> = coeffs.iter().copied().filter(|&(_, c)| c != 0).collect();
        let contains_derived = divides_t_minus_one(&nonzero, modulus);
        Ok(StandardSubgroup {
            submodule: self.module.clone(),
            lattice,
            index_in_module,
            contains_derived,
        })
    }

    /// Abelianization invariants of a standard subgroup. The derived
    /// subgroup of H = B x| P is B(P-1), so the torsion comes entirely from
    /// the coinvariants and the top lattice contributes top_rank to the
    /// free rank.
    pub fn subgroup_abelianization(&self, h: &StandardSubgroup) -> Result<AbelianInvariants> {
        if h.submodule.rank() != self.top_rank || h.lattice.rank() != self.top_rank {
            return Err(Error::RankMismatch {
                left: h.lattice.rank(),
                right: self.top_rank,
            });
        }
        let inv = h.submodule.coinvariant_invariants(&h.lattice)?;
        Ok(AbelianInvariants {
            free_rank: inv.free_rank + self.top_rank,
            ..inv
        })
    }

    /// Abelianization of the whole group: the subgroup H = A x| Z^r.
    pub fn abelianization(&self) -> AbelianInvariants {
        let h = self
            .subgroup_from_lattice(Sublattice::identity(self.top_rank))
            .expect("identity lattice has matching rank");
        self.subgroup_abelianization(&h)
            .expect("full-lattice pushdown cannot fail")
    }

    /// Certifies the family formula [A : fA] = m^(deg span f) for a prime
    /// lamplighter by exhibiting the quotient on the basis 1, t, ...,
    /// t^(span-1) via division with remainder (extreme coefficients are
    /// invertible, so division works in both directions of the Laurent
    /// ring) and checking the t-action is bijective on it.
    pub fn brute_force_module_index(&self, f: &LaurentElt) -> Result<BigInt> {
        let modulus = match self.kind {
            FamilyKind::Lamplighter { modulus } if self.top_rank == 1 => modulus,
            _ => {
                return Err(Error::UnsupportedFamily {
                    expected: "a lamplighter over Z".into(),
                    got: self.kind.describe(),
                })
            }
        };
        if !is_prime(modulus) || modulus > 5 {
            return Err(Error::CompositeModulus(modulus));
        }
        let coeffs = checked_support_mod(f, modulus)?;
        let (lo, _) = *coeffs.first().unwrap();
        let (hi, _) = *coeffs.last().unwrap();
        let span = (hi - lo) as usize;
        if span > 12 {
            return Err(Error::HypothesisViolation(format!(
                "degree span {span} exceeds the brute-force limit 12"
            )));
        }
        // normalized monic divisor with nonzero constant term
        let mut divisor = vec![0u64; span + 1];
        for &(e, c) in &coeffs {
            divisor[(e - lo) as usize] = c;
        }
        let lead_inv = mod_inverse(divisor[span], modulus);
        for c in divisor.iter_mut() {
            *c = (*c * lead_inv) % modulus;
        }
        certify_quotient(&divisor, span, modulus)?;
        Ok(BigInt::from(modulus).pow(span as u32))
    }
}

/// Presentation of the augmentation-ideal submodule sum (x_i - 1) A inside
/// a rank-one module, optionally with a torsion relation m f_i per
/// generator. The generators x_1 - 1, ..., x_r - 1 form a regular
/// sequence, so the Koszul relations (x_i - 1) f_j = (x_j - 1) f_i present
/// the first syzygies completely. For r = 1 the ideal is free of rank one.
fn augmentation_ideal_presentation(
    top_rank: usize,
    modulus: Option<u64>,
) -> Result<ModulePresentation> {
    let r = top_rank;
    let mut relations: Vec<Vec<LaurentElt>> = Vec::new();
    if let Some(m) = modulus {
        for i in 0..r {
            let mut rel = vec![LaurentElt::zero(r); r];
            rel[i] = LaurentElt::constant(r, m as i64);
            relations.push(rel);
        }
    }
    for i in 0..r {
        for j in i + 1..r {
            let mut rel = vec![LaurentElt::zero(r); r];
            let xi_minus_1 = LaurentElt::variable(r, i)?.sub(&LaurentElt::one(r))?;
            let xj_minus_1 = LaurentElt::variable(r, j)?.sub(&LaurentElt::one(r))?;
            rel[j] = xi_minus_1;
            rel[i] = xj_minus_1.neg();
            relations.push(rel);
        }
    }
    ModulePresentation::new(r, r, relations)
}

/// Standard subgroup H = B x| P of a split metabelian group.
#[derive(Debug, Clone)]
pub struct StandardSubgroup {
    submodule: ModulePresentation,
    lattice: Sublattice,
    index_in_module: BigInt,
    contains_derived: bool,
}

impl StandardSubgroup {
    pub fn submodule(&self) -> &ModulePresentation {
        &self.submodule
    }

    pub fn lattice(&self) -> &Sublattice {
        &self.lattice
    }

    /// a = [A : B], supplied by the family constructor.
    pub fn index_in_module(&self) -> &BigInt {
        &self.index_in_module
    }

    pub fn contains_derived(&self) -> bool {
        self.contains_derived
    }

    /// Total index [G : H] = a * [Z^r : P].
    pub fn index(&self) -> BigInt {
        &self.index_in_module * self.lattice.index()
    }
}

/// Coefficients of a univariate Laurent polynomial reduced mod m, keyed by
/// ascending exponent over the integer support of f. Rejects polynomials
/// that vanish mod m or whose extreme coefficients do (those do not define
/// a finite-index free submodule in the advertised way).
fn checked_support_mod(f: &LaurentElt, modulus: u64) -> Result<Vec<(i64, u64)>> {
    use num_integer::Integer;
    let m = BigInt::from(modulus);
    let coeffs: Vec<(i64, u64)> = f
        .terms()
        .map(|(exps, coeff)| {
            let c = coeff.mod_floor(&m);
            (exps[0], u64::try_from(c).expect("reduced residue fits u64"))
        })
        .collect();
    if coeffs.iter().all(|&(_, c)| c == 0) {
        return Err(Error::DegenerateIdeal(format!("{f} vanishes mod {modulus}")));
    }
    if coeffs.first().unwrap().1 == 0 || coeffs.last().unwrap().1 == 0 {
        return Err(Error::DegenerateIdeal(format!(
            "extreme coefficient of {f} vanishes mod {modulus}"
        )));
    }
    Ok(coeffs)
}

/// Whether f divides t - 1 in F_m[t^(+-1)]: up to a monomial unit, f must
/// be a constant or an associate of t - 1.
fn divides_t_minus_one(coeffs: &[(i64, u64)], modulus: u64) -> bool {
    match coeffs {
        [(_, c)] => *c != 0,
        [(lo, a), (hi, b)] if hi - lo == 1 => {
            // a + b t ~ t - 1 up to a unit scalar: need a = -b mod m
            (*a + *b) % modulus == 0
        }
        _ => false,
    }
}

/// Division with remainder of t^k against the monic normalized divisor,
/// in both directions of the Laurent ring; verifies the quotient on the
/// claimed basis is an F_m[t^(+-1)]-module with bijective t-action.
fn certify_quotient(divisor: &[u64], span: usize, modulus: u64) -> Result<()> {
    if span == 0 {
        return Ok(());
    }
    // companion action of t on the basis 1, t, ..., t^(span-1)
    let reduce_t_multiple = |vec: &[u64]| -> Vec<u64> {
        // multiply by t then reduce the overflowing top coefficient
        let mut out = vec![0u64; span + 1];
        for (i, &c) in vec.iter().enumerate() {
            out[i + 1] = c;
        }
        let top = out[span];
        if top != 0 {
            for i in 0..=span {
                out[i] = (out[i] + (modulus - top) * divisor[i] % modulus) % modulus;
            }
        }
        out.truncate(span);
        out
    };
    let mut action = Vec::with_capacity(span);
    for i in 0..span {
        let mut basis = vec![0u64; span];
        basis[i] = 1;
        action.push(reduce_t_multiple(&basis));
    }
    // bijectivity of t <=> nonzero determinant mod prime m
    if det_mod(&action, modulus) == 0 {
        return Err(Error::DegenerateIdeal(
            "t does not act invertibly on the candidate quotient basis".into(),
        ));
    }
    // spot-check: the divisor itself reduces to zero through the action
    let mut acc = vec![0u64; span];
    let mut power = vec![0u64; span];
    power[0] = 1; // class of t^0
    for (i, &c) in divisor.iter().enumerate() {
        if i > 0 {
            power = reduce_t_multiple(&power);
        }
        for (a, &p) in acc.iter_mut().zip(&power) {
            *a = (*a + c * p) % modulus;
        }
    }
    if acc.iter().any(|&c| c != 0) {
        return Err(Error::DegenerateIdeal(
            "divisor does not vanish on the candidate quotient".into(),
        ));
    }
    Ok(())
}

fn det_mod(matrix: &[Vec<u64>], modulus: u64) -> u64 {
    let n = matrix.len();
    let mut a: Vec<Vec<u64>> = matrix.to_vec();
    let mut det = 1u64;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] % modulus != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            det = (modulus - det) % modulus;
        }
        let inv = mod_inverse(a[k][k] % modulus, modulus);
        det = det * (a[k][k] % modulus) % modulus;
        for i in k + 1..n {
            let factor = a[i][k] % modulus * inv % modulus;
            if factor == 0 {
                continue;
            }
            for j in k..n {
                a[i][j] = (a[i][j] + (modulus - factor) * a[k][j]) % modulus;
            }
        }
    }
    det % modulus
}

fn mod_inverse(a: u64, modulus: u64) -> u64 {
    // Fermat: modulus is prime here
    let mut result = 1u64;
    let mut base = a % modulus;
    let mut exp = modulus - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    result
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn torsion(inv: &AbelianInvariants) -> i64 {
        inv.torsion_size.to_i64().unwrap()
    }

    #[test]
    fn lamplighter_construction() {
        let g = SplitMetabelianGroup::lamplighter(2, 1).unwrap();
        assert_eq!(g.gen_count(), 2);
        assert_eq!(g.module().gens(), 1);
        assert_eq!(g.derived().max_relation_norm(), BigInt::from(2));
        assert!(SplitMetabelianGroup::lamplighter(1, 1).is_err());
        let g22 = SplitMetabelianGroup::lamplighter(2, 2).unwrap();
        assert_eq!(g22.gen_count(), 3);
    }

    #[test]
    fn group_abelianizations() {
        let lamp = SplitMetabelianGroup::lamplighter(2, 1).unwrap();
        let inv = lamp.abelianization();
        assert_eq!(torsion(&inv), 2);
        assert_eq!(inv.free_rank, 1);

        let free = SplitMetabelianGroup::free_wreath(1).unwrap();
        let inv = free.abelianization();
        assert_eq!(torsion(&inv), 1);
        assert_eq!(inv.free_rank, 2);

        let bs = SplitMetabelianGroup::bs_module(2).unwrap();
        let inv = bs.abelianization();
        assert_eq!(torsion(&inv), 1);
        assert_eq!(inv.free_rank, 1);
    }

    #[test]
    fn lamplighter_standard_subgroups() {
        let g = SplitMetabelianGroup::lamplighter(2, 1).unwrap();
        let h7 = g
            .subgroup_from_lattice(Sublattice::scaled(1, 7).unwrap())
            .unwrap();
        assert_eq!(h7.index(), BigInt::from(7));
        let inv = g.subgroup_abelianization(&h7).unwrap();
        assert_eq!(torsion(&inv), 128);
        assert_eq!(inv.free_rank, 1);
    }

    #[test]
    fn free_wreath_subgroups_are_torsion_free() {
        let g = SplitMetabelianGroup::free_wreath(1).unwrap();
        let h = g
            .subgroup_from_lattice(Sublattice::scaled(1, 5).unwrap())
            .unwrap();
        let inv = g.subgroup_abelianization(&h).unwrap();
        assert_eq!(torsion(&inv), 1);
        assert_eq!(inv.free_rank, 6);
    }

    #[test]
    fn bs_subgroup_torsion() {
        let g = SplitMetabelianGroup::bs_module(2).unwrap();
        let h6 = g
            .subgroup_from_lattice(Sublattice::scaled(1, 6).unwrap())
            .unwrap();
        let inv = g.subgroup_abelianization(&h6).unwrap();
        assert_eq!(torsion(&inv), 63);
    }

    #[test]
    fn ideal_subgroup_t_plus_one() {
        let g = SplitMetabelianGroup::lamplighter(2, 1).unwrap();
        let f = LaurentElt::parse("x0 + 1", 1).unwrap();
        let h = g.subgroup_from_ideal(&f, Sublattice::identity(1)).unwrap();
        assert_eq!(h.index_in_module(), &BigInt::from(2));
        assert_eq!(h.index(), BigInt::from(2));
        // mod 2, t + 1 = t - 1, so B contains the derived submodule
        assert!(h.contains_derived());
        assert_eq!(
            g.brute_force_module_index(&f).unwrap(),
            BigInt::from(2)
        );
    }

    #[test]
    fn ideal_subgroup_unit() {
        let g = SplitMetabelianGroup::lamplighter(2, 1).unwrap();
        let f = LaurentElt::one(1);
        let h = g.subgroup_from_ideal(&f, Sublattice::identity(1)).unwrap();
        assert_eq!(h.index_in_module(), &BigInt::one());
        assert!(h.contains_derived());
        assert_eq!(g.brute_force_module_index(&f).unwrap(), BigInt::one());
    }

    #[test]
    fn ideal_subgroup_cubic() {
        let g = SplitMetabelianGroup::lamplighter(2, 1).unwrap();
        let f = LaurentElt::parse("x0^3 + x0 + 1", 1).unwrap();
        let h = g
            .subgroup_from_ideal(&f, Sublattice::scaled(1, 4).unwrap())
            .unwrap();
        assert_eq!(h.index(), BigInt::from(32));
        assert!(!h.contains_derived());
        assert_eq!(g.brute_force_module_index(&f).unwrap(), BigInt::from(8));
    }

    #[test]
    fn ideal_subgroup_rejects_composite_and_degenerate() {
        let g4 = SplitMetabelianGroup::lamplighter(4, 1).unwrap();
        let f = LaurentElt::parse("x0 + 1", 1).unwrap();
        assert_eq!(
            g4.subgroup_from_ideal(&f, Sublattice::identity(1)).unwrap_err(),
            Error::CompositeModulus(4)
        );
        let g = SplitMetabelianGroup::lamplighter(2, 1).unwrap();
        let even = LaurentElt::parse("2*x0", 1).unwrap();
        assert!(matches!(
            g.subgroup_from_ideal(&even, Sublattice::identity(1)),
            Err(Error::DegenerateIdeal(_))
        ));
        let bad_lead = LaurentElt::parse("2*x0^2 + 1", 1).unwrap();
        assert!(matches!(
            g.subgroup_from_ideal(&bad_lead, Sublattice::identity(1)),
            Err(Error::DegenerateIdeal(_))
        ));
    }

    #[test]
    fn brute_force_index_f3() {
        let g = SplitMetabelianGroup::lamplighter(3, 1).unwrap();
        let f = LaurentElt::parse("x0^2 + 1", 1).unwrap();
        assert_eq!(g.brute_force_module_index(&f).unwrap(), BigInt::from(9));
    }

    #[test]
    fn brute_force_certifies_family_index() {
        let g = SplitMetabelianGroup::lamplighter(2, 1).unwrap();
        for src in ["x0 + 1", "x0^2 + x0 + 1", "x0^3 + x0 + 1", "x0^-2 + x0"] {
            let f = LaurentElt::parse(src, 1).unwrap();
            let h = g.subgroup_from_ideal(&f, Sublattice::identity(1)).unwrap();
            assert_eq!(
                h.index_in_module(),
                &g.brute_force_module_index(&f).unwrap(),
                "family formula vs brute force for {src}"
            );
        }
    }

    #[test]
    fn subgroup_rank_mismatch() {
        let g = SplitMetabelianGroup::lamplighter(2, 2).unwrap();
        assert!(g
            .subgroup_from_lattice(Sublattice::scaled(1, 2).unwrap())
            .is_err());
    }
}
