//! Executable checkers for the torsion inequalities and growth limits,
//! plus growth-sequence analytics (fitted exponential base, tail ratio
//! decay).
//!
//! Every checker is pure given its seed; randomized corpora use a seeded
//! ChaCha stream so reports are reproducible byte for byte.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groupring::{commutator_conjugation_weight, LaurentElt, Sublattice};
use crate::intlinalg::{
    abelian_invariants, log2_bigint, smith_normal_form, torsion_upper_bound_l1,
    torsion_via_minor_gcd, IntMatrix,
};
use crate::metabelian::{effective_commutator_check, SplitMetabelianGroup, StandardSubgroup};

/// One side of a checked inequality: exact integer where possible, a real
/// only for ratio-style checks.
#[derive(Debug, Clone, PartialEq)]
pub enum CheckValue {
    Exact(BigInt),
    Real(f64),
}

impl CheckValue {
    fn log2(&self) -> f64 {
        match self {
            CheckValue::Exact(v) if v.is_positive() => log2_bigint(v),
            CheckValue::Exact(_) => f64::NEG_INFINITY,
            CheckValue::Real(x) => x.log2(),
        }
    }
}

impl std::fmt::Display for CheckValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CheckValue::Exact(v) => write!(f, "{v}"),
            CheckValue::Real(x) => write!(f, "{x:.14e}"),
        }
    }
}

/// Outcome of one inequality check: `holds` is true exactly when
/// lhs <= rhs (compared exactly when both sides are integers).
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub label: String,
    pub lhs: CheckValue,
    pub rhs: CheckValue,
    pub holds: bool,
    /// log2(rhs) - log2(lhs); finite slack even for astronomically large
    /// sides.
    pub slack_log2: f64,
}

impl BoundReport {
    fn exact(label: impl Into<String>, lhs: BigInt, rhs: BigInt) -> Self {
        let holds = lhs <= rhs;
        let lhs = CheckValue::Exact(lhs);
        let rhs = CheckValue::Exact(rhs);
        let slack_log2 = rhs.log2() - lhs.log2();
        BoundReport {
            label: label.into(),
            lhs,
            rhs,
            holds,
            slack_log2,
        }
    }

    fn real(label: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        BoundReport {
            label: label.into(),
            holds: lhs <= rhs,
            slack_log2: rhs.log2() - lhs.log2(),
            lhs: CheckValue::Real(lhs),
            rhs: CheckValue::Real(rhs),
        }
    }

    /// Encodes an equality as a pair of two-sided inequality reports.
    fn equality_pair(label: &str, a: BigInt, b: BigInt) -> [Self; 2] {
        [
            BoundReport::exact(format!("{label} (<=)"), a.clone(), b.clone()),
            BoundReport::exact(format!("{label} (>=)"), b, a),
        ]
    }

    /// A plain pass/fail fact, encoded as 0 <= 0 or 1 <= 0.
    fn fact(label: impl Into<String>, pass: bool) -> Self {
        BoundReport::exact(
            label,
            if pass { BigInt::zero() } else { BigInt::one() },
            BigInt::zero(),
        )
    }
}

/// One subgroup's worth of data in a growth experiment.
#[derive(Debug, Clone)]
pub struct GrowthRecord {
    /// Schedule step parameter.
    pub step: i64,
    /// Total index [G : H].
    pub index: BigInt,
    /// a = [A : A meet H].
    pub a: BigInt,
    /// m = [Q : P], the lattice index.
    pub m: BigInt,
    pub torsion: BigInt,
    pub log2_torsion: f64,
    /// (ln torsion) / [G : H].
    pub ratio: f64,
    pub free_rank: usize,
}

/// Runs the abelianization pipeline over a labelled subgroup schedule.
pub fn growth_sequence(
    group: &SplitMetabelianGroup,
    schedule: &[(i64, StandardSubgroup)],
) -> Result<Vec<GrowthRecord>> {
    assert!(!schedule.is_empty(), "growth_sequence needs a non-empty schedule");
    schedule
        .iter()
        .map(|(step, h)| {
            let inv = group.subgroup_abelianization(h)?;
            let index = h.index();
            let index_f = index.to_f64().expect("indices stay in f64 range");
            let ratio = inv.log2_torsion * std::f64::consts::LN_2 / index_f;
            Ok(GrowthRecord {
                step: *step,
                index,
                a: h.index_in_module().clone(),
                m: h.lattice().index().clone(),
                torsion: inv.torsion_size.clone(),
                log2_torsion: inv.log2_torsion,
                ratio,
                free_rank: inv.free_rank,
            })
        })
        .collect()
}

/// Empirical minimal exponential base: max over records of
/// torsion^(1/index).
pub fn fit_exponential_base(records: &[GrowthRecord]) -> f64 {
    assert!(!records.is_empty(), "fit_exponential_base needs records");
    records
        .iter()
        .map(|r| {
            let index_f = r.index.to_f64().expect("indices stay in f64 range");
            (r.log2_torsion / index_f).exp2()
        })
        .fold(1.0_f64, f64::max)
}

/// Finite surrogate for "(log torsion) / index tends to zero": every ratio
/// in the final `tail_fraction` of the records must fall below `threshold`
/// and below the maximum of the earlier ratios. Requires the module
/// indices a to be strictly increasing (the growth hypothesis); violating
/// that is an error, not a failed bound.
pub fn subexp_ratio_check(
    records: &[GrowthRecord],
    tail_fraction: f64,
    threshold: f64,
) -> Result<BoundReport> {
    if records.is_empty() {
        return Err(Error::HypothesisViolation("empty record list".into()));
    }
    for pair in records.windows(2) {
        if pair[1].index < pair[0].index {
            return Err(Error::HypothesisViolation(
                "records must be sorted by index".into(),
            ));
        }
        if pair[1].a <= pair[0].a {
            return Err(Error::HypothesisViolation(format!(
                "module indices must increase strictly: a = {} then {}",
                pair[0].a, pair[1].a
            )));
        }
    }
    let tail_len = ((records.len() as f64 * tail_fraction).ceil() as usize)
        .clamp(1, records.len());
    let split = records.len() - tail_len;
    let tail_max = records[split..]
        .iter()
        .map(|r| r.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    let head_max = records[..split]
        .iter()
        .map(|r| r.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    let decayed = split == 0 || tail_max < head_max;
    let mut report = BoundReport::real(
        format!(
            "tail ratio max (last {tail_len} of {} records; threshold {threshold})",
            records.len()
        ),
        tail_max,
        threshold,
    );
    report.holds = report.holds && decayed;
    Ok(report)
}

/// Torsion of Z^n / (row span) straight through the Smith-form pipeline.
fn lattice_torsion(rows: &IntMatrix, ambient: usize) -> BigInt {
    abelian_invariants(rows, ambient)
        .expect("corpus matrices match their ambient rank")
        .torsion_size
}

/// Random corpus for the sandwich t(N) <= t(G) <= t(N) t(G/N) over nested
/// lattices L1 <= L2 <= Z^n, with the equality t(N) = t(G) checked whenever
/// G/N is torsion-free.
pub fn check_t_multiplicativity(trials: usize, seed: u64) -> Vec<BoundReport> {
    assert!(trials >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    for trial in 0..trials {
        let n = rng.gen_range(1..=4usize);
        // random full-rank basis of L2
        let basis = loop {
            let candidate = IntMatrix::from_rows(
                &(0..n)
                    .map(|_| (0..n).map(|_| rng.gen_range(-5..=5i64)).collect())
                    .collect::<Vec<_>>(),
            );
            if crate::intlinalg::bareiss_rank(&candidate) == n {
                break candidate;
            }
        };
        // L1 = C * basis for a random integer matrix C, so L1 <= L2 and the
        // coordinates of L1 inside L2 are exactly the rows of C
        let k = rng.gen_range(n..=n + 2);
        let c = IntMatrix::from_rows(
            &(0..k)
                .map(|_| (0..n).map(|_| rng.gen_range(-5..=5i64)).collect())
                .collect::<Vec<_>>(),
        );
        let product = mat_mul(&c, &basis);

        let t_g = lattice_torsion(&product, n);
        let t_q = lattice_torsion(&basis, n);
        let t_n = lattice_torsion(&c, n);

        reports.push(BoundReport::exact(
            format!("t(N) <= t(G) [trial {trial}]"),
            t_n.clone(),
            t_g.clone(),
        ));
        reports.push(BoundReport::exact(
            format!("t(G) <= t(N) t(G/N) [trial {trial}]"),
            t_g.clone(),
            &t_n * &t_q,
        ));
        if t_q.is_one() {
            reports.extend(BoundReport::equality_pair(
                &format!("torsion-free quotient forces t(N) = t(G) [trial {trial}]"),
                t_n,
                t_g,
            ));
        }
    }
    reports
}

fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols(), b.rows());
    let mut out = IntMatrix::zero(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut acc = BigInt::zero();
            for l in 0..a.cols() {
                acc += a.entry(i, l) * b.entry(l, j);
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// Random corpus for [M(G-1) : L(G-1)] <= [M : L]^d on finite modules
/// M = (Z/N)^k with d commuting invertible action matrices and random
/// invariant submodules L, everything enumerated exhaustively.
pub fn check_fin_lemma(trials: usize, seed: u64) -> Vec<BoundReport> {
    assert!(trials >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    for trial in 0..trials {
        let modulus = rng.gen_range(2..=8u64);
        let k = rng.gen_range(1..=3usize);
        let d = rng.gen_range(1..=2usize);

        let g1 = random_invertible(&mut rng, k, modulus);
        let mut actions = vec![g1.clone()];
        if d == 2 {
            // a polynomial in g1 commutes with it; retry until invertible
            let g2 = loop {
                let c0 = rng.gen_range(0..modulus);
                let c1 = rng.gen_range(0..modulus);
                let c2 = rng.gen_range(0..modulus);
                let candidate = mat_poly(&g1, &[c0, c1, c2], modulus);
                if mat_invertible(&candidate, modulus) {
                    break candidate;
                }
            };
            actions.push(g2);
        }

        let full = enumerate_module(k, modulus);
        let gens: Vec<Vec<u64>> = (0..rng.gen_range(1..=k))
            .map(|_| (0..k).map(|_| rng.gen_range(0..modulus)).collect())
            .collect();
        let submodule = submodule_closure(&gens, &actions, modulus);

        let m_image = difference_subgroup(&full, &actions, modulus);
        let l_image = difference_subgroup(&submodule, &actions, modulus);

        let index_images = BigInt::from(m_image.len() as u64 / l_image.len() as u64);
        let index_ml = BigInt::from(full.len() as u64 / submodule.len() as u64);
        reports.push(BoundReport::exact(
            format!(
                "[M(G-1):L(G-1)] <= [M:L]^{d} [trial {trial}; M=(Z/{modulus})^{k}]"
            ),
            index_images,
            index_ml.pow(d as u32),
        ));
    }
    reports
}

fn mat_mul_mod(a: &[Vec<u64>], b: &[Vec<u64>], modulus: u64) -> Vec<Vec<u64>> {
    let k = a.len();
    let mut out = vec![vec![0u64; k]; k];
    for i in 0..k {
        for j in 0..k {
            let mut acc = 0u64;
            for l in 0..k {
                acc = (acc + a[i][l] * b[l][j]) % modulus;
            }
            out[i][j] = acc;
        }
    }
    out
}

fn mat_poly(g: &[Vec<u64>], coeffs: &[u64], modulus: u64) -> Vec<Vec<u64>> {
    let k = g.len();
    let mut power = vec![vec![0u64; k]; k];
    for (i, row) in power.iter_mut().enumerate() {
        row[i] = 1;
    }
    let mut out = vec![vec![0u64; k]; k];
    for &c in coeffs {
        for i in 0..k {
            for j in 0..k {
                out[i][j] = (out[i][j] + c * power[i][j]) % modulus;
            }
        }
        power = mat_mul_mod(&power, g, modulus);
    }
    out
}

/// Invertible mod a possibly composite modulus: the determinant must be a
/// unit. Determinant via integer arithmetic on small matrices.
fn mat_invertible(a: &[Vec<u64>], modulus: u64) -> bool {
    let k = a.len();
    let det: i128 = match k {
        1 => a[0][0] as i128,
        2 => a[0][0] as i128 * a[1][1] as i128 - a[0][1] as i128 * a[1][0] as i128,
        3 => {
            let m = |i: usize, j: usize| a[i][j] as i128;
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        }
        _ => unreachable!("k <= 3"),
    };
    let d = det.rem_euclid(modulus as i128) as u64;
    gcd_u64(d, modulus) == 1
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

fn random_invertible(rng: &mut ChaCha8Rng, k: usize, modulus: u64) -> Vec<Vec<u64>> {
    loop {
        let candidate: Vec<Vec<u64>> = (0..k)
            .map(|_| (0..k).map(|_| rng.gen_range(0..modulus)).collect())
            .collect();
        if mat_invertible(&candidate, modulus) {
            return candidate;
        }
    }
}

fn enumerate_module(k: usize, modulus: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..modulus).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

fn apply_action(x: &[u64], g: &[Vec<u64>], modulus: u64) -> Vec<u64> {
    // row vector times matrix
    let k = x.len();
    (0..k)
        .map(|j| (0..k).map(|i| x[i] * g[i][j] % modulus).sum::<u64>() % modulus)
        .collect()
}

/// Smallest subset containing `gens`, closed under addition and the module
/// actions. Plain worklist closure; the ambient module has at most 8^3
/// elements.
fn submodule_closure(gens: &[Vec<u64>], actions: &[Vec<Vec<u64>>], modulus: u64) -> Vec<Vec<u64>> {
    use std::collections::BTreeSet;
    let k = gens.first().map_or(0, Vec::len);
    let mut set: BTreeSet<Vec<u64>> = BTreeSet::new();
    set.insert(vec![0; k]);
    let mut work: Vec<Vec<u64>> = gens.to_vec();
    while let Some(x) = work.pop() {
        if !set.insert(x.clone()) {
            continue;
        }
        let snapshot: Vec<Vec<u64>> = set.iter().cloned().collect();
        for y in snapshot {
            let sum: Vec<u64> = x.iter().zip(&y).map(|(&a, &b)| (a + b) % modulus).collect();
            if !set.contains(&sum) {
                work.push(sum);
            }
        }
        for g in actions {
            let image = apply_action(&x, g, modulus);
            if !set.contains(&image) {
                work.push(image);
            }
        }
    }
    set.into_iter().collect()
}

/// The subgroup sum_i S(g_i - 1), generated by x g_i - x over x in S.
fn difference_subgroup(
    s: &[Vec<u64>],
    actions: &[Vec<Vec<u64>>],
    modulus: u64,
) -> Vec<Vec<u64>> {
    let mut gens = Vec::new();
    for x in s {
        for g in actions {
            let gx = apply_action(x, g, modulus);
            let diff: Vec<u64> = gx
                .iter()
                .zip(x)
                .map(|(&a, &b)| (a + modulus - b) % modulus)
                .collect();
            gens.push(diff);
        }
    }
    // additive closure only: the difference set is already action-stable
    // because the actions commute, but closing under them too is free
    submodule_closure(&gens, actions, modulus)
}

/// Random matrix corpus tying the three torsion routes together: the
/// minor-gcd value must equal the invariant-factor product and stay below
/// the l1 bound.
pub fn check_torsion_lemma_corpus(cases: usize, seed: u64) -> Vec<BoundReport> {
    assert!(cases >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    for case in 0..cases {
        let rows = rng.gen_range(1..=6usize);
        let cols = rng.gen_range(1..=8usize);
        let m = IntMatrix::from_rows(
            &(0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-9..=9i64)).collect())
                .collect::<Vec<_>>(),
        );
        let via_minors = torsion_via_minor_gcd(&m);
        let via_snf = smith_normal_form(&m).factor_product();
        let bound = torsion_upper_bound_l1(&m);
        reports.extend(BoundReport::equality_pair(
            &format!("minor gcd = invariant factor product [case {case}]"),
            via_minors.clone(),
            via_snf,
        ));
        reports.push(BoundReport::exact(
            format!("torsion <= l1 bound [case {case}]"),
            via_minors,
            bound,
        ));
    }
    reports
}

/// t(H^ab) <= [G:H]^r t(G^ab) for standard subgroups with full lattice part
/// (that is exactly when H A = G, the hypothesis of the inequality).
pub fn check_ma(group: &SplitMetabelianGroup, h: &StandardSubgroup) -> Result<BoundReport> {
    if !h.lattice().index().is_one() {
        return Err(Error::HypothesisViolation(
            "check_ma needs the full lattice part (HA = G fails otherwise)".into(),
        ));
    }
    let lhs = group.subgroup_abelianization(h)?.torsion_size;
    let index = h.index();
    let rhs = index.pow(group.top_rank() as u32) * group.abelianization().torsion_size;
    Ok(BoundReport::exact(
        format!("t(H^ab) <= [G:H]^{} t(G^ab) [{}; index {}]", group.top_rank(), group.name(), h.index()),
        lhs,
        rhs,
    ))
}

/// The exponential bound for subgroups containing the derived subgroup:
/// the intermediate inequality
/// t(H^ab) <= t(G^ab) (n^2)^(d(d-1)/2) c^(n d(d-1)/2)
/// with n = [G:H], d the generator count and c the largest derived-relation
/// norm, plus the packaged form t(H^ab) <= C^n with
/// C = (t(G^ab) 3 c)^(d^2/2). The packaged comparison is squared so it
/// stays in exact integers when d is odd.
pub fn prop_exp_bound(
    group: &SplitMetabelianGroup,
    h: &StandardSubgroup,
) -> Result<Vec<BoundReport>> {
    if !h.contains_derived() {
        return Err(Error::MissingDerived);
    }
    let n = h
        .index()
        .to_u32()
        .ok_or_else(|| Error::HypothesisViolation("index too large for the bound grid".into()))?;
    let d = group.gen_count() as u32;
    let e = d * (d - 1) / 2;
    let t_g = group.abelianization().torsion_size;
    // an empty relation list contributes no norms; the bound then runs over
    // fewer vectors and each missing factor is 1
    let c = group.derived().max_relation_norm().max(BigInt::one());
    let lhs = group.subgroup_abelianization(h)?.torsion_size;
    let rhs = &t_g * BigInt::from(n).pow(2 * e) * c.pow(n * e);
    let intermediate = BoundReport::exact(
        format!(
            "t(H^ab) <= t(G^ab) (n^2)^{e} c^{} [{}; n = {n}]",
            n * e,
            group.name()
        ),
        lhs.clone(),
        rhs,
    );
    let packaged_base = t_g * BigInt::from(3) * &c;
    let packaged = BoundReport::exact(
        format!(
            "t(H^ab)^2 <= (t(G^ab) 3 c)^(n d^2) [{}; n = {n}; squared comparison]",
            group.name()
        ),
        &lhs * &lhs,
        packaged_base.pow(n * d * d),
    );
    Ok(vec![intermediate, packaged])
}

/// All ideal subgroups f with degree span up to `max_deg` for a prime
/// lamplighter, with full lattice part, run through `check_ma`.
pub fn check_ma_grid(modulus: u64, max_deg: usize) -> Result<Vec<BoundReport>> {
    let group = SplitMetabelianGroup::lamplighter(modulus, 1)?;
    let mut reports = Vec::new();
    for f in ideal_polynomials(modulus, max_deg) {
        let h = group.subgroup_from_ideal(&f, Sublattice::identity(1))?;
        let mut report = check_ma(&group, &h)?;
        report.label = format!("{} [f = {f}]", report.label);
        reports.push(report);
    }
    Ok(reports)
}

/// Every univariate polynomial over Z/m with nonzero constant and leading
/// coefficients and degree span at most `max_deg` (degree 0 units
/// included).
fn ideal_polynomials(modulus: u64, max_deg: usize) -> Vec<LaurentElt> {
    let mut out = Vec::new();
    for deg in 0..=max_deg {
        let positions = if deg == 0 { 1 } else { deg + 1 };
        let mut coeffs = vec![0u64; positions];
        loop {
            let lo_ok = coeffs[0] != 0;
            let hi_ok = *coeffs.last().unwrap() != 0;
            if lo_ok && hi_ok {
                let mut elt = LaurentElt::zero(1);
                for (e, &c) in coeffs.iter().enumerate() {
                    if c != 0 {
                        elt = elt
                            .add(&LaurentElt::monomial(1, vec![e as i64], c as i64).unwrap())
                            .unwrap();
                    }
                }
                out.push(elt);
            }
            // increment base-m counter
            let mut i = 0;
            loop {
                if i == positions {
                    break;
                }
                coeffs[i] += 1;
                if coeffs[i] < modulus {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == positions {
                break;
            }
        }
    }
    out
}

/// The exponential-bound grid over lamplighter subgroups H_n, n up to
/// `n_max`.
pub fn check_exp_grid(modulus: u64, n_max: i64) -> Result<Vec<BoundReport>> {
    let group = SplitMetabelianGroup::lamplighter(modulus, 1)?;
    let mut reports = Vec::new();
    for n in 1..=n_max {
        let h = group.subgroup_from_lattice(Sublattice::scaled(1, n)?)?;
        reports.extend(prop_exp_bound(&group, &h)?);
    }
    Ok(reports)
}

/// The scaled lattice schedule H_n = A x| n Z^r for n = 1..=n_max.
pub fn scaled_lattice_schedule(
    group: &SplitMetabelianGroup,
    n_max: i64,
) -> Result<Vec<(i64, StandardSubgroup)>> {
    (1..=n_max)
        .map(|n| {
            let lattice = Sublattice::scaled(group.top_rank(), n)?;
            Ok((n, group.subgroup_from_lattice(lattice)?))
        })
        .collect()
}

/// The escalating ideal schedule B_i = (1 + t^i) A with P_i = iZ: the
/// module index a_i = m^i grows geometrically, so the ratio decay
/// hypothesis applies.
pub fn escalating_ideal_schedule(
    group: &SplitMetabelianGroup,
    i_max: i64,
) -> Result<Vec<(i64, StandardSubgroup)>> {
    (1..=i_max)
        .map(|i| {
            let f = LaurentElt::one(1).add(&LaurentElt::monomial(1, vec![i], 1)?)?;
            let h = group.subgroup_from_ideal(&f, Sublattice::scaled(1, i)?)?;
            Ok((i, h))
        })
        .collect()
}

/// Growth suite: the escalating ideal schedule must show strictly
/// decreasing ratios with a sub-threshold tail, and the fitted base of the
/// lattice schedule must equal 2 exactly (the sharp family).
pub fn check_growth_suite() -> Result<Vec<BoundReport>> {
    let group = SplitMetabelianGroup::lamplighter(2, 1)?;
    let mut reports = Vec::new();

    let schedule = escalating_ideal_schedule(&group, 12)?;
    let records = growth_sequence(&group, &schedule)?;
    for pair in records.windows(2) {
        reports.push(BoundReport::fact(
            format!(
                "ratio strictly decreases [step {} to {}; {:.6e} to {:.6e}]",
                pair[0].step, pair[1].step, pair[0].ratio, pair[1].ratio
            ),
            pair[1].ratio < pair[0].ratio,
        ));
    }
    reports.push(subexp_ratio_check(&records, 0.3, 0.05)?);

    let lattice_records = growth_sequence(&group, &scaled_lattice_schedule(&group, 40)?)?;
    let base = fit_exponential_base(&lattice_records);
    reports.push(BoundReport::fact(
        format!("fitted exponential base is 2.0 [got {base:.15}]"),
        (base - 2.0).abs() < 1e-12,
    ));
    Ok(reports)
}

/// Commutator-expansion suite: direct group arithmetic for small n plus
/// the exact norm law |w_n| = n^2 for the conjugation weights.
pub fn check_commutator_suite(modulus: u64, n_direct: u64, n_norm: u64) -> Vec<BoundReport> {
    let mut reports = Vec::new();
    for n in 1..=n_direct {
        reports.push(BoundReport::fact(
            format!("[g^n, h^n] = [g,h]^w in C{modulus} wr Z^2 [n = {n}]"),
            effective_commutator_check(modulus, n),
        ));
    }
    for n in 1..=n_norm {
        let norm = commutator_conjugation_weight(n)
            .expect("n >= 1")
            .l1_norm();
        reports.extend(BoundReport::equality_pair(
            &format!("|w_n|_1 = n^2 [n = {n}]"),
            norm,
            BigInt::from(n * n),
        ));
    }
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicativity_fixed_example() {
        // L1 = 6 Z^2 inside L2 = 2 Z^2: t(G) = 36, t(G/N) = 4, t(N) = 9
        let l2 = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        let c = IntMatrix::from_rows(&[vec![3, 0], vec![0, 3]]);
        let l1 = mat_mul(&c, &l2);
        assert_eq!(lattice_torsion(&l1, 2), BigInt::from(36));
        assert_eq!(lattice_torsion(&l2, 2), BigInt::from(4));
        assert_eq!(lattice_torsion(&c, 2), BigInt::from(9));
        assert!(BigInt::from(9) <= BigInt::from(36));
        assert!(BigInt::from(36) <= BigInt::from(9) * BigInt::from(4));
    }

    #[test]
    fn multiplicativity_random_corpus_holds() {
        let reports = check_t_multiplicativity(50, 7);
        assert!(reports.iter().all(|r| r.holds));
    }

    #[test]
    fn fin_lemma_fixed_example() {
        // M = Z/4, g = multiplication by 3, L = 2M
        let actions = vec![vec![vec![3u64]]];
        let full = enumerate_module(1, 4);
        let l = submodule_closure(&[vec![2]], &actions, 4);
        assert_eq!(l.len(), 2);
        let m_img = difference_subgroup(&full, &actions, 4);
        let l_img = difference_subgroup(&l, &actions, 4);
        // x(g-1) = 2x mod 4: image of M is {0, 2}, image of L is {0}
        assert_eq!(m_img.len(), 2);
        assert_eq!(l_img.len(), 1);
        let index = m_img.len() / l_img.len();
        let d = 1;
        assert!(index as u64 <= ((full.len() / l.len()) as u64).pow(d));
    }

    #[test]
    fn fin_lemma_random_corpus_holds() {
        let reports = check_fin_lemma(50, 11);
        assert!(reports.iter().all(|r| r.holds));
    }

    #[test]
    fn torsion_lemma_corpus_holds() {
        let reports = check_torsion_lemma_corpus(100, 3);
        assert!(reports.iter().all(|r| r.holds));
    }

    #[test]
    fn ma_examples() {
        let g = SplitMetabelianGroup::lamplighter(2, 1).unwrap();
        let f = LaurentElt::parse("x0 + 1", 1).unwrap();
        let h = g.subgroup_from_ideal(&f, Sublattice::identity(1)).unwrap();
        let report = check_ma(&g, &h).unwrap();
        assert!(report.holds);
        assert_eq!(report.lhs, CheckValue::Exact(BigInt::from(2)));
        assert_eq!(report.rhs, CheckValue::Exact(BigInt::from(4)));

        // H = G is the degenerate base case t(G^ab) <= t(G^ab)
        let whole = g.subgroup_from_lattice(Sublattice::identity(1)).unwrap();
        let report = check_ma(&g, &whole).unwrap();
        assert!(report.holds);

        let f3 = LaurentElt::parse("x0^3 + x0 + 1", 1).unwrap();
        let h3 = g.subgroup_from_ideal(&f3, Sublattice::identity(1)).unwrap();
        let report = check_ma(&g, &h3).unwrap();
        assert!(report.holds);
        assert_eq!(report.lhs, CheckValue::Exact(BigInt::from(2)));
        assert_eq!(report.rhs, CheckValue::Exact(BigInt::from(16)));
    }

    #[test]
    fn ma_rejects_partial_lattice() {
        let g = SplitMetabelianGroup::lamplighter(2, 1).unwrap();
        let h = g
            .subgroup_from_lattice(Sublattice::scaled(1, 2).unwrap())
            .unwrap();
        assert!(matches!(check_ma(&g, &h), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn exp_bound_n4() {
        let g = SplitMetabelianGroup::lamplighter(2, 1).unwrap();
        let h = g
            .subgroup_from_lattice(Sublattice::scaled(1, 4).unwrap())
            .unwrap();
        let reports = prop_exp_bound(&g, &h).unwrap();
        assert_eq!(reports[0].lhs, CheckValue::Exact(BigInt::from(16)));
        assert_eq!(reports[0].rhs, CheckValue::Exact(BigInt::from(512)));
        assert!(reports.iter().all(|r| r.holds));
    }

    #[test]
    fn exp_bound_requires_derived() {
        let g = SplitMetabelianGroup::lamplighter(2, 1).unwrap();
        let f = LaurentElt::parse("x0^3 + x0 + 1", 1).unwrap();
        let h = g.subgroup_from_ideal(&f, Sublattice::identity(1)).unwrap();
        assert!(matches!(prop_exp_bound(&g, &h), Err(Error::MissingDerived)));
    }

    #[test]
    fn exp_bound_c3() {
        let g = SplitMetabelianGroup::lamplighter(3, 1).unwrap();
        let h = g
            .subgroup_from_lattice(Sublattice::scaled(1, 3).unwrap())
            .unwrap();
        let reports = prop_exp_bound(&g, &h).unwrap();
        assert_eq!(reports[0].lhs, CheckValue::Exact(BigInt::from(27)));
        assert!(reports.iter().all(|r| r.holds));
    }

    #[test]
    fn growth_and_fit_on_lamplighter() {
        let g = SplitMetabelianGroup::lamplighter(2, 1).unwrap();
        let schedule = scaled_lattice_schedule(&g, 10).unwrap();
        let records = growth_sequence(&g, &schedule).unwrap();
        assert_eq!(records.len(), 10);
        for (i, r) in records.iter().enumerate() {
            let n = i as u32 + 1;
            assert_eq!(r.torsion, BigInt::from(2u64).pow(n));
            assert!((r.ratio - std::f64::consts::LN_2).abs() < 1e-12);
        }
        assert_eq!(fit_exponential_base(&records), 2.0);
    }

    #[test]
    fn fit_base_is_one_without_torsion() {
        let g = SplitMetabelianGroup::free_wreath(1).unwrap();
        let schedule = scaled_lattice_schedule(&g, 8).unwrap();
        let records = growth_sequence(&g, &schedule).unwrap();
        assert_eq!(fit_exponential_base(&records), 1.0);
    }

    #[test]
    fn fit_base_on_bs_approaches_two_from_below() {
        let g = SplitMetabelianGroup::bs_module(2).unwrap();
        let schedule = scaled_lattice_schedule(&g, 30).unwrap();
        let records = growth_sequence(&g, &schedule).unwrap();
        // torsion 2^n - 1 at index n: every per-record base is below 2 and
        // increases toward it
        let bases: Vec<f64> = records
            .iter()
            .map(|r| (r.log2_torsion / r.index.to_f64().unwrap()).exp2())
            .collect();
        for pair in bases.windows(2) {
            assert!(pair[0] < pair[1] && pair[1] < 2.0);
        }
        let fitted = fit_exponential_base(&records);
        assert!(fitted < 2.0 && fitted > 1.999);
    }

    #[test]
    fn ratio_check_requires_increasing_a() {
        let g = SplitMetabelianGroup::lamplighter(2, 1).unwrap();
        let schedule = scaled_lattice_schedule(&g, 6).unwrap();
        let records = growth_sequence(&g, &schedule).unwrap();
        // a = 1 throughout: the growth hypothesis fails
        assert!(matches!(
            subexp_ratio_check(&records, 0.3, 0.05),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn ratio_check_on_escalating_schedule() {
        let g = SplitMetabelianGroup::lamplighter(2, 1).unwrap();
        let schedule = escalating_ideal_schedule(&g, 10).unwrap();
        let records = growth_sequence(&g, &schedule).unwrap();
        for pair in records.windows(2) {
            assert!(pair[1].ratio < pair[0].ratio, "ratios must strictly decrease");
        }
        let report = subexp_ratio_check(&records, 0.3, 0.05).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn commutator_suite_holds() {
        let reports = check_commutator_suite(2, 4, 8);
        assert!(reports.iter().all(|r| r.holds));
    }
}
