//! The level invariants `N(f^n, g^n)`, `NP_n(f, g)` and `NPhi_n(f, g)` for
//! commuting torus pairs, together with the inversion formulas and the
//! hypothesis checks that make those formulas legal.
//!
//! Two routes are kept apart on purpose:
//!
//! * the *direct* route counts irreducible classes by inclusion-exclusion over
//!   explicit image lattices ([`np_direct`], [`nphi`]); it needs nothing beyond
//!   commutation,
//! * the *formula* routes ([`np_mobius`], [`nphi_toral`], [`nphi_tree`]) only
//!   see Nielsen numbers and are refused unless their hypotheses are verified.
//!
//! Tori are weakly Jiang: `N = |det(G^n - F^n)|`, and every class is essential
//! exactly when that determinant is nonzero.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::divisor::{divisors, gcd, nonempty_subsets, prime_divisors, DivisorLattice};
use crate::error::{Error, Hypothesis, Result};
use crate::exactint::Matrix;
use crate::reidemeister::{
    boost_map, image_subgroup, injective_on_boosts, reid_set, Order, ReidClass, ReidSet, TorusPair,
};
use crate::{Int, IntLattice, IntMatrix};

/// Class budget used when a formula path has to fall back on brute force.
pub const DEFAULT_CLASS_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    EssentiallyReducible,
    InjectiveBoosts,
    GcdReducible,
    WeaklyJiangAssumed,
}

impl Flag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Flag::EssentiallyReducible => "essentially_reducible",
            Flag::InjectiveBoosts => "injective_boosts",
            Flag::GcdReducible => "gcd_reducible",
            Flag::WeaklyJiangAssumed => "weakly_jiang_assumed",
        }
    }
}

/// Invariants at one divisor level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelReport {
    pub m: u64,
    pub reid_order: Order,
    pub nielsen: Int,
    pub np: Option<Int>,
    pub nphi: Option<Int>,
    pub flags: BTreeSet<Flag>,
}

/// `N(f^n, g^n) = |det(G^n - F^n)|`.
pub fn nielsen_number(pair: &TorusPair, n: u64) -> Int {
    pair.relation_det(n).abs()
}

/// Intermediate quantities of the direct `NP_n` count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NpBreakdown {
    pub n: u64,
    pub reid_order: Int,
    /// `(levels, order)` for each nonempty set of maximal proper divisors:
    /// the order of the intersection of their images.
    pub intersections: Vec<(Vec<u64>, Int)>,
    pub union_size: Int,
    pub np: Int,
}

impl NpBreakdown {
    pub fn intersection_order(&self, levels: &[u64]) -> Option<&Int> {
        self.intersections
            .iter()
            .find(|(ls, _)| ls.as_slice() == levels)
            .map(|(_, o)| o)
    }
}

/// `|R_n| - #(union of im iota_{n/p, n})` with the union counted by
/// inclusion-exclusion over explicit lattice intersections. `None` when
/// `det(G^n - F^n) = 0` (no essential classes).
///
/// Only maximal proper divisors are needed: for `m | q | n`,
/// `iota_{m,n} = iota_{q,n} iota_{m,q}`, so smaller images are already inside.
pub fn np_direct_breakdown(pair: &TorusPair, n: u64) -> Result<Option<NpBreakdown>> {
    let target = reid_set(pair, n)?;
    let Some(order) = target.order().finite().cloned() else {
        return Ok(None);
    };
    let maximal = DivisorLattice::new(n).maximal_proper;
    let images: Vec<IntLattice> = maximal
        .iter()
        .map(|&m| Ok(image_subgroup(&boost_map(pair, m, n)?, &target)?.lattice))
        .collect::<Result<_>>()?;
    let mut intersections = Vec::new();
    let mut union_size = Int::zero();
    for subset in nonempty_subsets(&(0..maximal.len()).collect::<Vec<_>>()) {
        let mut lat = images[subset[0]].clone();
        for &i in &subset[1..] {
            lat = lat.intersect(&images[i])?;
        }
        let sub_order = &order / lat.index();
        if subset.len() % 2 == 1 {
            union_size += &sub_order;
        } else {
            union_size -= &sub_order;
        }
        intersections.push((subset.iter().map(|&i| maximal[i]).collect(), sub_order));
    }
    let np = &order - &union_size;
    Ok(Some(NpBreakdown {
        n,
        reid_order: order,
        intersections,
        union_size,
        np,
    }))
}

/// Number of irreducible essential classes at level `n`.
pub fn np_direct(pair: &TorusPair, n: u64) -> Result<Int> {
    Ok(np_direct_breakdown(pair, n)?.map_or_else(Int::zero, |b| b.np))
}

/// True iff for all `k | m | n`, `det(A_m) != 0` implies `det(A_k) != 0`.
pub fn essentially_reducible_check(pair: &TorusPair, n: u64) -> bool {
    let nonzero: HashMap<u64, bool> = divisors(n)
        .into_iter()
        .map(|d| (d, !pair.relation_det(d).is_zero()))
        .collect();
    divisors(n)
        .into_iter()
        .all(|m| !nonzero[&m] || divisors(m).into_iter().all(|k| nonzero[&k]))
}

/// `(N(f^n,g^n) - sum_p N(f^{n/p}, g^{n/p}), N(f^n,g^n))`, lower end floored at 0.
pub fn np_bounds(pair: &TorusPair, n: u64) -> Result<(Int, Int)> {
    if !essentially_reducible_check(pair, n) {
        return Err(Error::Precondition {
            hypothesis: Hypothesis::EssentiallyReducible,
            detail: format!("some essential level below {n} has a singular relation"),
        });
    }
    let upper = nielsen_number(pair, n);
    let below: Int = prime_divisors(n).into_iter().map(|p| nielsen_number(pair, n / p)).sum();
    let lower = (&upper - below).max(Int::zero());
    Ok((lower, upper))
}

/// One signed term `(-1)^{#tau} N(f^{m:tau}, g^{m:tau})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MobiusTerm {
    pub level: u64,
    pub sign: i8,
    #[serde(serialize_with = "crate::report::ser_int")]
    pub value: Int,
}

/// Terms of `sum_{tau subset p(m)} (-1)^{#tau} N(m:tau)`, largest level first.
pub fn mobius_terms(m: u64, mut nielsen: impl FnMut(u64) -> Int) -> Vec<MobiusTerm> {
    let primes = prime_divisors(m);
    let mut terms: Vec<MobiusTerm> = (0u64..(1 << primes.len()))
        .map(|mask| {
            let mut level = m;
            let mut count = 0;
            for (i, p) in primes.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    level /= p;
                    count += 1;
                }
            }
            MobiusTerm {
                level,
                sign: if count % 2 == 0 { 1 } else { -1 },
                value: nielsen(level),
            }
        })
        .collect();
    terms.sort_by_key(|t| std::cmp::Reverse(t.level));
    terms
}

pub fn mobius_total(terms: &[MobiusTerm]) -> Int {
    terms
        .iter()
        .map(|t| if t.sign > 0 { t.value.clone() } else { -t.value.clone() })
        .sum()
}

/// A hypothesis that did not hold, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub hypothesis: String,
    pub detail: String,
    #[serde(skip)]
    pub kind: Hypothesis,
}

impl Violation {
    pub fn new(kind: Hypothesis, detail: impl Into<String>) -> Self {
        Violation {
            hypothesis: kind.to_string(),
            detail: detail.into(),
            kind,
        }
    }

    fn into_error(self) -> Error {
        Error::Precondition {
            hypothesis: self.kind,
            detail: self.detail,
        }
    }
}

/// Whether a formula path may run when its hypotheses fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Safety {
    #[default]
    Checked,
    /// Evaluate anyway; the result carries its violations.
    ForceUnsafe,
}

/// A formula value with the hypotheses it was computed under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guarded {
    pub value: Int,
    pub violations: Vec<Violation>,
}

impl Guarded {
    pub fn is_unsafe(&self) -> bool {
        !self.violations.is_empty()
    }
}

fn guard(value: impl FnOnce() -> Int, violations: Vec<Violation>, safety: Safety) -> Result<Guarded> {
    if safety == Safety::Checked {
        if let Some(v) = violations.into_iter().next() {
            return Err(v.into_error());
        }
        return Ok(Guarded {
            value: value(),
            violations: Vec::new(),
        });
    }
    Ok(Guarded {
        value: value(),
        violations,
    })
}

/// How reducibility to the gcd was established at a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GcdEvidence {
    /// Circle pair with coprime degrees.
    CoprimeCircleDegrees,
    /// Unimodular `G` with injective boosts.
    InvertibleG,
    /// Exhaustive class search.
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcdVerdict {
    pub holds: bool,
    pub evidence: GcdEvidence,
    /// Levels `(m, k)` of a witnessed failure.
    pub failure: Option<(u64, u64)>,
}

/// Brute-force verdict on reducibility to the gcd at level `n`.
///
/// For every pair of proper divisors `m <= k` and classes `beta` at `m`,
/// `gamma` at `k` boosting to the same class at `n`, looks for `delta` at
/// `gcd(m, k)` boosting to both. Every level must be finite and
/// `|R_n| <= budget`.
pub fn gcd_reducible_check(pair: &TorusPair, n: u64, budget: u64) -> Result<bool> {
    Ok(gcd_reducible_search(pair, n, budget)?.is_none())
}

/// Like [`gcd_reducible_check`], returning the failing levels if any.
pub fn gcd_reducible_search(pair: &TorusPair, n: u64, budget: u64) -> Result<Option<(u64, u64)>> {
    let levels = divisors(n);
    let mut sets = HashMap::new();
    for &d in &levels {
        let s = reid_set(pair, d)?;
        if !s.is_finite() {
            return Err(Error::InfiniteLevel(d));
        }
        sets.insert(d, s);
    }
    let top = sets[&n].order().finite().expect("finite").clone();
    if top > BigInt::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: top.to_string(),
            budget,
        });
    }
    let proper: Vec<u64> = levels.iter().copied().filter(|&d| d != n).collect();
    let mut tables = BoostTables::new(pair, &sets, &proper, budget)?;

    for (i, &m) in proper.iter().enumerate() {
        for &k in &proper[i..] {
            let d = gcd(m, k);
            let to_n_m = tables.table(m, n)?.clone();
            let to_n_k = tables.table(k, n)?.clone();
            let mut by_image: HashMap<&ReidClass, Vec<usize>> = HashMap::new();
            for (beta, alpha) in to_n_m.iter().enumerate() {
                by_image.entry(alpha).or_default().push(beta);
            }
            let common: HashSet<(ReidClass, ReidClass)> = tables
                .table(d, m)?
                .clone()
                .into_iter()
                .zip(tables.table(d, k)?.iter().cloned())
                .collect();
            let (cm, ck) = (&tables.classes[&m], &tables.classes[&k]);
            for (gamma, alpha) in to_n_k.iter().enumerate() {
                if let Some(betas) = by_image.get(alpha) {
                    if betas
                        .iter()
                        .any(|&beta| !common.contains(&(cm[beta].clone(), ck[gamma].clone())))
                    {
                        return Ok(Some((m, k)));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Enumerated classes at the proper levels and memoized boost images.
struct BoostTables<'a> {
    pair: &'a TorusPair,
    sets: &'a HashMap<u64, ReidSet>,
    classes: HashMap<u64, Vec<ReidClass>>,
    tables: HashMap<(u64, u64), Vec<ReidClass>>,
}

impl<'a> BoostTables<'a> {
    fn new(pair: &'a TorusPair, sets: &'a HashMap<u64, ReidSet>, levels: &[u64], budget: u64) -> Result<Self> {
        let classes = levels
            .iter()
            .map(|&d| Ok((d, sets[&d].classes(budget)?)))
            .collect::<Result<_>>()?;
        Ok(BoostTables {
            pair,
            sets,
            classes,
            tables: HashMap::new(),
        })
    }

    /// Image of every level-`from` class at level `to`.
    fn table(&mut self, from: u64, to: u64) -> Result<&Vec<ReidClass>> {
        if !self.tables.contains_key(&(from, to)) {
            let b = boost_map(self.pair, from, to)?;
            let target = &self.sets[&to];
            let t = self.classes[&from]
                .iter()
                .map(|c| target.canonicalize(&b.matrix().mul_vec(c.witness())?))
                .collect::<Result<Vec<_>>>()?;
            self.tables.insert((from, to), t);
        }
        Ok(&self.tables[&(from, to)])
    }
}

/// Reducibility to the gcd at level `n`, using the cheapest applicable
/// criterion: coprime circle degrees, then unimodular `G` with injective
/// boosts, then brute force within `budget`.
pub fn gcd_reducible_at(pair: &TorusPair, n: u64, budget: u64) -> Result<GcdVerdict> {
    if pair.dim() == 1 {
        let a = pair.f().get(0, 0);
        let b = pair.g().get(0, 0);
        if a.gcd(b).is_one() {
            return Ok(GcdVerdict {
                holds: true,
                evidence: GcdEvidence::CoprimeCircleDegrees,
                failure: None,
            });
        }
    }
    if pair.g().det()?.abs().is_one() && injective_into(pair, n)? {
        return Ok(GcdVerdict {
            holds: true,
            evidence: GcdEvidence::InvertibleG,
            failure: None,
        });
    }
    let failure = gcd_reducible_search(pair, n, budget)?;
    Ok(GcdVerdict {
        holds: failure.is_none(),
        evidence: GcdEvidence::BruteForce,
        failure,
    })
}

/// Injective on essential boosts into level `n` from every divisor.
fn injective_into(pair: &TorusPair, n: u64) -> Result<bool> {
    for m in divisors(n) {
        if !injective_on_boosts(pair, m, n)?.injective {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hypotheses of the Moebius inversion theorem at level `m`.
pub fn npeqn_violations(pair: &TorusPair, m: u64, budget: u64) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    if nielsen_number(pair, m).is_zero() {
        out.push(Violation::new(
            Hypothesis::WeaklyJiangNonzero,
            format!("N(f^{m}, g^{m}) = 0"),
        ));
    }
    if !injective_into(pair, m)? {
        out.push(Violation::new(
            Hypothesis::InjectiveOnBoosts,
            format!("some boost into level {m} has a kernel"),
        ));
    }
    match gcd_reducible_at(pair, m, budget) {
        Ok(GcdVerdict { holds: true, .. }) => {}
        Ok(GcdVerdict { failure, .. }) => {
            let detail = match failure {
                Some((a, b)) => format!("gcd-reducibility fails at levels ({a},{b})"),
                None => "gcd-reducibility fails".to_string(),
            };
            out.push(Violation::new(Hypothesis::GcdReducible, detail));
        }
        Err(e @ (Error::BudgetExceeded { .. } | Error::InfiniteLevel(_))) => {
            out.push(Violation::new(Hypothesis::GcdReducible, format!("undecided: {e}")));
        }
        Err(e) => return Err(e),
    }
    Ok(out)
}

/// `sum_{tau subset p(m)} (-1)^{#tau} N(f^{m:tau}, g^{m:tau})`, legal only
/// under the inversion hypotheses.
pub fn np_mobius(pair: &TorusPair, m: u64, safety: Safety) -> Result<Guarded> {
    if m == 0 {
        return Err(Error::ZeroLevel);
    }
    let violations = npeqn_violations(pair, m, DEFAULT_CLASS_BUDGET)?;
    guard(
        || mobius_total(&mobius_terms(m, |d| nielsen_number(pair, d))),
        violations,
        safety,
    )
}

/// `NPhi_n = sum_{m | n} NP_m`, valid for essentially reducible pairs (all
/// commuting torus pairs).
pub fn nphi(pair: &TorusPair, n: u64) -> Result<Int> {
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    divisors(n).into_iter().map(|m| np_direct(pair, m)).sum()
}

/// `NPhi_n = N(f^n, g^n)` under the inversion hypotheses at level `n`.
pub fn nphi_toral(pair: &TorusPair, n: u64, safety: Safety) -> Result<Guarded> {
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    let violations = npeqn_violations(pair, n, DEFAULT_CLASS_BUDGET)?;
    guard(|| nielsen_number(pair, n), violations, safety)
}

/// Inclusion-exclusion over the essential levels
/// `M = {m | n : N(f^m, g^m) != 0}`:
/// `sum_{mu} (-1)^{#mu - 1} N(f^{gcd mu}, g^{gcd mu})`.
pub fn nphi_tree(pair: &TorusPair, n: u64, safety: Safety) -> Result<Guarded> {
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    let nielsen: HashMap<u64, Int> = divisors(n).into_iter().map(|d| (d, nielsen_number(pair, d))).collect();
    let essential: Vec<u64> = divisors(n).into_iter().filter(|d| !nielsen[d].is_zero()).collect();
    let mut violations = Vec::new();
    for &m in &essential {
        violations.extend(npeqn_violations(pair, m, DEFAULT_CLASS_BUDGET)?);
    }
    guard(
        || {
            nonempty_subsets(&essential)
                .map(|mu| {
                    let xi = mu.iter().copied().fold(0, gcd);
                    // gcd of divisors of n is a divisor of n
                    let v = nielsen[&xi].clone();
                    if mu.len() % 2 == 1 {
                        v
                    } else {
                        -v
                    }
                })
                .sum()
        },
        violations,
        safety,
    )
}

/// Identity checks available when `G` is invertible over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertibleCrosscheck {
    pub n: u64,
    /// `|det(G^n - F^n)|`
    pub coincidence_det: Int,
    /// `|det(I - G^{-n} F^n)|`
    pub periodic_det: Int,
    /// Moebius sum over `|det(I - (G^{-1}F)^k)|`.
    pub periodic_mobius: Int,
    /// `np_mobius(pair, n)` when its hypotheses hold.
    pub coincidence_mobius: Option<Int>,
}

impl InvertibleCrosscheck {
    pub fn determinants_agree(&self) -> bool {
        self.coincidence_det == self.periodic_det
    }

    /// `None` when the coincidence formula was refused.
    pub fn mobius_agrees(&self) -> Option<bool> {
        self.coincidence_mobius.as_ref().map(|v| v == &self.periodic_mobius)
    }

    pub fn passed(&self) -> bool {
        self.determinants_agree() && self.mobius_agrees() != Some(false)
    }
}

pub fn invertible_g_crosscheck(pair: &TorusPair, n: u64) -> Result<InvertibleCrosscheck> {
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    let g_inv = pair.g().unimodular_inverse()?;
    let id: IntMatrix = Matrix::identity(pair.dim());
    let gn_inv = pair.g().pow(n)?.unimodular_inverse()?;
    let periodic_det = (&id - &(&gn_inv * &pair.f().pow(n)?)).det()?.abs();
    let h = &g_inv * pair.f();
    let periodic_mobius = mobius_total(&mobius_terms(n, |k| {
        (&id - &h.pow(k).expect("square")).det().expect("square").abs()
    }));
    let coincidence_mobius = match np_mobius(pair, n, Safety::Checked) {
        Ok(g) => Some(g.value),
        Err(Error::Precondition { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(InvertibleCrosscheck {
        n,
        coincidence_det: nielsen_number(pair, n),
        periodic_det,
        periodic_mobius,
        coincidence_mobius,
    })
}

/// Per-divisor reports for a commuting torus pair.
pub fn level_reports(pair: &TorusPair, n: u64, budget: u64) -> Result<Vec<LevelReport>> {
    level_reports_with(pair, n, |m| {
        Ok(matches!(
            gcd_reducible_at(pair, m, budget),
            Ok(GcdVerdict { holds: true, .. })
        ))
    })
}

/// [`level_reports`] with the gcd-reducibility flag supplied by the caller.
pub(crate) fn level_reports_with(
    pair: &TorusPair,
    n: u64,
    mut gcd_flag: impl FnMut(u64) -> Result<bool>,
) -> Result<Vec<LevelReport>> {
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    let levels = divisors(n);
    let mut np: HashMap<u64, Int> = HashMap::new();
    for &m in &levels {
        np.insert(m, np_direct(pair, m)?);
    }
    levels
        .iter()
        .map(|&m| {
            let mut flags = BTreeSet::from([Flag::WeaklyJiangAssumed]);
            if essentially_reducible_check(pair, m) {
                flags.insert(Flag::EssentiallyReducible);
            }
            if injective_into(pair, m)? {
                flags.insert(Flag::InjectiveBoosts);
            }
            if gcd_flag(m)? {
                flags.insert(Flag::GcdReducible);
            }
            let nphi = divisors(m).iter().map(|d| np[d].clone()).sum();
            Ok(LevelReport {
                m,
                reid_order: reid_set(pair, m)?.order().clone(),
                nielsen: nielsen_number(pair, m),
                np: Some(np[&m].clone()),
                nphi: Some(nphi),
                flags,
            })
        })
        .collect()
}

/// Determinant formulas for a pair of linearizations without the commutation
/// gate. Only the Nielsen-number side of the theory makes sense here; every
/// formula value is returned with the failed hypotheses attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaPair {
    f: IntMatrix,
    g: IntMatrix,
}

impl FormulaPair {
    pub fn new(f: IntMatrix, g: IntMatrix) -> Result<Self> {
        if !f.is_square() || !g.is_square() || f.rows() != g.rows() {
            return Err(Error::DimensionMismatch(format!(
                "F is {}x{}, G is {}x{}",
                f.rows(),
                f.cols(),
                g.rows(),
                g.cols()
            )));
        }
        Ok(FormulaPair { f, g })
    }

    pub fn commutes(&self) -> bool {
        &self.f * &self.g == &self.g * &self.f
    }

    /// The checked pair, when the linearizations commute.
    pub fn to_torus_pair(&self) -> Result<TorusPair> {
        TorusPair::new(self.f.clone(), self.g.clone())
    }

    pub fn nielsen(&self, n: u64) -> Int {
        (&self.g.pow(n).expect("square") - &self.f.pow(n).expect("square"))
            .det()
            .expect("square")
            .abs()
    }

    pub fn mobius_terms(&self, m: u64) -> Vec<MobiusTerm> {
        mobius_terms(m, |d| self.nielsen(d))
    }

    fn violations(&self, m: u64) -> Result<Vec<Violation>> {
        match self.to_torus_pair() {
            Ok(pair) => npeqn_violations(&pair, m, DEFAULT_CLASS_BUDGET),
            Err(_) => Ok(vec![Violation::new(
                Hypothesis::Commuting,
                "F*G != G*F, so boosts are not defined on classes",
            )]),
        }
    }

    pub fn np_mobius(&self, m: u64, safety: Safety) -> Result<Guarded> {
        let v = self.violations(m)?;
        guard(|| mobius_total(&self.mobius_terms(m)), v, safety)
    }

    pub fn nphi_toral(&self, n: u64, safety: Safety) -> Result<Guarded> {
        let v = self.violations(n)?;
        guard(|| self.nielsen(n), v, safety)
    }
}

/// Order of a finite Reidemeister set as `u64`, when it fits.
pub fn small_order(order: &Order) -> Option<u64> {
    order.finite().and_then(|o| o.to_u64())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Int {
        Int::from(v)
    }

    fn circle(a: i64, b: i64) -> TorusPair {
        TorusPair::circle(int(a), int(b))
    }

    fn diag_two() -> TorusPair {
        TorusPair::from_i64(&[&[2, 0], &[0, 2]], &[&[1, 0], &[0, 1]]).unwrap()
    }

    /// Commuting unimodular companion of the printed torus example: G = 5I + 2F.
    fn companion() -> TorusPair {
        TorusPair::from_i64(&[&[-2, 2], &[1, 2]], &[&[1, 4], &[2, 9]]).unwrap()
    }

    #[test]
    fn nielsen_numbers() {
        assert_eq!(nielsen_number(&circle(3, 3), 4), int(0));
        let p = circle(6, 2);
        let v: Vec<Int> = [1, 2, 3, 6].iter().map(|&n| nielsen_number(&p, n)).collect();
        assert_eq!(v, [4, 32, 208, 46592].map(int).to_vec());
    }

    #[test]
    fn direct_np_on_the_circle() {
        let p = circle(6, 2);
        assert_eq!(np_direct(&p, 1).unwrap(), int(4));
        assert_eq!(np_direct(&p, 2).unwrap(), int(28));
        assert_eq!(np_direct(&p, 3).unwrap(), int(204));
        let b = np_direct_breakdown(&p, 6).unwrap().unwrap();
        assert_eq!(b.np, int(46368));
        assert_eq!(b.intersection_order(&[3]), Some(&int(208)));
        assert_eq!(b.intersection_order(&[2]), Some(&int(32)));
        assert_eq!(b.intersection_order(&[3, 2]), Some(&int(16)));
        assert_eq!(np_direct(&circle(5, 5), 6).unwrap(), int(0));
    }

    #[test]
    fn bounds() {
        let p = circle(6, 2);
        assert_eq!(np_bounds(&p, 6).unwrap(), (int(46352), int(46592)));
        assert_eq!(np_bounds(&p, 1).unwrap(), (int(4), int(4)));
        assert_eq!(np_bounds(&circle(2, 0), 4).unwrap(), (int(12), int(16)));
    }

    #[test]
    fn mobius_refuses_the_circle_counterexample() {
        let p = circle(6, 2);
        let err = np_mobius(&p, 6, Safety::Checked).unwrap_err();
        match err {
            Error::Precondition { hypothesis, detail } => {
                assert_eq!(hypothesis, Hypothesis::GcdReducible);
                assert!(detail.contains("(2,3)"), "{detail}");
            }
            other => panic!("unexpected {other:?}"),
        }
        let forced = np_mobius(&p, 6, Safety::ForceUnsafe).unwrap();
        assert!(forced.is_unsafe());
        assert_eq!(forced.value, int(46356));
        assert_ne!(forced.value, np_direct(&p, 6).unwrap());
        // prime-power levels are legal and agree with the direct count
        assert_eq!(np_mobius(&p, 2, Safety::Checked).unwrap().value, int(28));
    }

    #[test]
    fn mobius_on_diagonal_torus() {
        let p = diag_two();
        assert_eq!(np_mobius(&p, 2, Safety::Checked).unwrap().value, int(8));
        assert_eq!(np_direct(&p, 2).unwrap(), int(8));
        assert_eq!(nphi_toral(&p, 2, Safety::Checked).unwrap().value, int(9));
        assert_eq!(nphi_tree(&p, 6, Safety::Checked).unwrap().value, int(63 * 63));
    }

    #[test]
    fn nphi_sums() {
        assert_eq!(nphi(&circle(6, 2), 6).unwrap(), int(46604));
        for (p, k) in [(2u64, 1u32), (2, 2), (3, 1), (3, 2)] {
            let n = p.pow(k);
            assert_eq!(nphi(&circle(2, 0), n).unwrap(), int(1) << n);
        }
        assert!(matches!(
            nphi_toral(&circle(6, 2), 6, Safety::Checked),
            Err(Error::Precondition {
                hypothesis: Hypothesis::GcdReducible,
                ..
            })
        ));
    }

    #[test]
    fn companion_routes_agree_at_thirty() {
        let p = companion();
        let toral = nphi_toral(&p, 30, Safety::Checked).unwrap().value;
        assert_eq!(toral, nielsen_number(&p, 30));
        assert_eq!(nphi(&p, 30).unwrap(), toral);
        assert_eq!(nphi_tree(&p, 30, Safety::Checked).unwrap().value, toral);
        for m in divisors(30) {
            assert_eq!(
                np_mobius(&p, m, Safety::Checked).unwrap().value,
                np_direct(&p, m).unwrap(),
                "level {m}"
            );
        }
    }

    #[test]
    fn essential_reducibility() {
        assert!(essentially_reducible_check(&circle(6, 2), 6));
        assert!(essentially_reducible_check(&circle(4, 4), 6));
        assert!(essentially_reducible_check(&companion(), 30));
    }

    #[test]
    fn brute_force_gcd() {
        assert!(!gcd_reducible_check(&circle(6, 2), 6, 100_000).unwrap());
        assert!(gcd_reducible_check(&circle(2, 3), 6, 100_000).unwrap());
        assert!(gcd_reducible_check(&circle(6, 2), 5, 100_000).unwrap());
        assert!(matches!(
            gcd_reducible_check(&circle(6, 2), 6, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            gcd_reducible_check(&circle(1, -1), 2, 1000),
            Err(Error::InfiniteLevel(2))
        ));
    }

    #[test]
    fn invertible_crosscheck() {
        let id = TorusPair::from_i64(&[&[3, 1], &[1, 2]], &[&[1, 0], &[0, 1]]).unwrap();
        let c = invertible_g_crosscheck(&id, 3).unwrap();
        assert!(c.determinants_agree());
        assert_eq!(c.mobius_agrees(), Some(true));
        let c = invertible_g_crosscheck(&companion(), 30).unwrap();
        assert!(c.passed());
        assert_eq!(c.mobius_agrees(), Some(true));
        assert!(matches!(
            invertible_g_crosscheck(&diag_two().clone(), 2).map(|_| ()),
            Ok(())
        ));
        let bad = TorusPair::from_i64(&[&[1, 0], &[0, 1]], &[&[2, 0], &[0, 2]]).unwrap();
        assert!(matches!(invertible_g_crosscheck(&bad, 2), Err(Error::NotUnimodular(_))));
    }

    #[test]
    fn formula_pair_reproduces_printed_example() {
        let fp = FormulaPair::new(
            IntMatrix::from_i64_rows(&[&[-2, 2], &[1, 2]]).unwrap(),
            IntMatrix::from_i64_rows(&[&[-1, 0], &[1, 1]]).unwrap(),
        )
        .unwrap();
        assert!(!fp.commutes());
        assert_eq!(fp.nielsen(2), int(25));
        assert!(matches!(
            fp.np_mobius(30, Safety::Checked),
            Err(Error::Precondition {
                hypothesis: Hypothesis::Commuting,
                ..
            })
        ));
        let g = fp.np_mobius(30, Safety::ForceUnsafe).unwrap();
        assert!(g.is_unsafe());
        assert_eq!(g.value.to_string(), "221073919719322744136580");
    }

    #[test]
    fn level_report_flags() {
        let reports = level_reports(&circle(6, 2), 6, DEFAULT_CLASS_BUDGET).unwrap();
        assert_eq!(reports.len(), 4);
        let top = reports.last().unwrap();
        assert_eq!(top.np, Some(int(46368)));
        assert_eq!(top.nphi, Some(int(46604)));
        assert!(!top.flags.contains(&Flag::GcdReducible));
        assert!(top.flags.contains(&Flag::InjectiveBoosts));
        let deg = level_reports(&circle(3, 3), 2, DEFAULT_CLASS_BUDGET).unwrap();
        assert_eq!(deg[0].reid_order, Order::Infinite);
        assert_eq!(deg[0].nielsen, int(0));
    }
}
