//! Reidemeister sets of commuting torus linearizations and the boosting maps
//! between levels.
//!
//! For abelian `pi_1 = Z^r` the Reidemeister set at level `n` is the cokernel of
//! `A_n = G^n - F^n`. Classes are stored by their Smith coordinates: with
//! `U A_n V = D`, a vector `v` maps to `U v` with coordinate `i` reduced modulo
//! the invariant factor `d_i` (left alone when `d_i = 0`).

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactint::{snf, solve_linear, Lattice, Matrix, SnfDecomposition};
use crate::scalar::IntScalar;
use crate::{Int, IntMatrix};

/// A pair of commuting linearizations `(F, G)` of self-maps of `T^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusPair {
    f: IntMatrix,
    g: IntMatrix,
}

impl TorusPair {
    pub fn new(f: IntMatrix, g: IntMatrix) -> Result<Self> {
        if !f.is_square() {
            return Err(Error::NotSquare {
                rows: f.rows(),
                cols: f.cols(),
            });
        }
        if !g.is_square() {
            return Err(Error::NotSquare {
                rows: g.rows(),
                cols: g.cols(),
            });
        }
        if f.rows() != g.rows() {
            return Err(Error::DimensionMismatch(format!(
                "F is {0}x{0}, G is {1}x{1}",
                f.rows(),
                g.rows()
            )));
        }
        if &f * &g != &g * &f {
            return Err(Error::NonCommuting);
        }
        Ok(TorusPair { f, g })
    }

    /// Degree-`a`, degree-`b` circle maps as 1x1 linearizations.
    pub fn circle(a: Int, b: Int) -> Self {
        TorusPair {
            f: Matrix::scalar(a),
            g: Matrix::scalar(b),
        }
    }

    pub fn from_i64(f: &[&[i64]], g: &[&[i64]]) -> Result<Self> {
        TorusPair::new(Matrix::from_i64_rows(f)?, Matrix::from_i64_rows(g)?)
    }

    pub fn dim(&self) -> usize {
        self.f.rows()
    }

    pub fn f(&self) -> &IntMatrix {
        &self.f
    }

    pub fn g(&self) -> &IntMatrix {
        &self.g
    }

    /// `A_n = G^n - F^n`.
    pub fn relation(&self, n: u64) -> IntMatrix {
        &self.g.pow(n).expect("square") - &self.f.pow(n).expect("square")
    }

    /// `det(G^n - F^n)`.
    pub fn relation_det(&self, n: u64) -> Int {
        self.relation(n).det().expect("square")
    }
}

/// Cardinality of a Reidemeister set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(Int),
    Infinite,
}

impl Order {
    pub fn finite(&self) -> Option<&Int> {
        match self {
            Order::Finite(v) => Some(v),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A doubly-twisted conjugacy class at some level, held by its canonical
/// Smith coordinates. `witness` is one element of `Z^r` in the coset and does
/// not take part in equality.
#[derive(Debug, Clone)]
pub struct ReidClass {
    level: u64,
    rep: Vec<Int>,
    witness: Vec<Int>,
}

impl ReidClass {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn rep(&self) -> &[Int] {
        &self.rep
    }

    pub fn witness(&self) -> &[Int] {
        &self.witness
    }
}

impl PartialEq for ReidClass {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.rep == other.rep
    }
}

impl Eq for ReidClass {}

impl Hash for ReidClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.level.hash(state);
        self.rep.hash(state);
    }
}

impl PartialOrd for ReidClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ReidClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.level, &self.rep).cmp(&(other.level, &other.rep))
    }
}

/// `R(f^n_*, g^n_*) = coker(G^n - F^n)`.
#[derive(Debug, Clone)]
pub struct ReidSet {
    level: u64,
    relation: IntMatrix,
    snf: SnfDecomposition<Int>,
    u_inv: IntMatrix,
    order: Order,
}

impl ReidSet {
    pub fn from_relation(level: u64, relation: IntMatrix) -> Result<Self> {
        if level == 0 {
            return Err(Error::ZeroLevel);
        }
        let det = relation.det()?;
        let snf = snf(&relation);
        let u_inv = snf.u.unimodular_inverse()?;
        let order = if det.is_zero() {
            Order::Infinite
        } else {
            Order::Finite(det.abs())
        };
        Ok(ReidSet {
            level,
            relation,
            snf,
            u_inv,
            order,
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn relation(&self) -> &IntMatrix {
        &self.relation
    }

    pub fn snf(&self) -> &SnfDecomposition<Int> {
        &self.snf
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.order, Order::Finite(_))
    }

    pub fn dim(&self) -> usize {
        self.relation.rows()
    }

    fn finite_order(&self) -> Result<&Int> {
        self.order.finite().ok_or(Error::InfiniteLevel(self.level))
    }

    /// Canonical class of `v + A_n Z^r`.
    pub fn canonicalize(&self, v: &[Int]) -> Result<ReidClass> {
        let y = self.snf.u.mul_vec(v)?;
        let rep = y
            .iter()
            .zip(&self.snf.factors)
            .map(|(yi, di)| yi.reduce_mod(di))
            .collect();
        Ok(ReidClass {
            level: self.level,
            rep,
            witness: v.to_vec(),
        })
    }

    pub fn zero_class(&self) -> ReidClass {
        let zero = vec![Int::zero(); self.dim()];
        ReidClass {
            level: self.level,
            rep: zero.clone(),
            witness: zero,
        }
    }

    /// The element of `Z^r` sitting at the canonical coordinates of `c`.
    pub fn lift(&self, c: &ReidClass) -> Result<Vec<Int>> {
        self.check_level(c)?;
        self.u_inv.mul_vec(&c.rep)
    }

    pub fn contains_relation(&self, v: &[Int]) -> Result<bool> {
        Ok(self.canonicalize(v)?.rep.iter().all(Zero::is_zero))
    }

    fn check_level(&self, c: &ReidClass) -> Result<()> {
        if c.level != self.level {
            return Err(Error::LevelMismatch {
                expected: self.level,
                got: c.level,
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &ReidClass, b: &ReidClass) -> Result<ReidClass> {
        self.check_level(a)?;
        self.check_level(b)?;
        let w: Vec<Int> = a.witness.iter().zip(&b.witness).map(|(x, y)| x + y).collect();
        self.canonicalize(&w)
    }

    /// Every class, in lexicographic order of canonical coordinates.
    /// Refused for infinite sets or when the order exceeds `budget`.
    pub fn classes(&self, budget: u64) -> Result<Vec<ReidClass>> {
        let order = self.finite_order()?;
        if order > &BigInt::from(budget) {
            return Err(Error::BudgetExceeded {
                needed: order.to_string(),
                budget,
            });
        }
        let radices: Vec<u64> = self
            .snf
            .factors
            .iter()
            .map(|d| d.to_u64().expect("within budget"))
            .collect();
        let total: u64 = radices.iter().product();
        let mut out = Vec::with_capacity(total as usize);
        for mut idx in 0..total {
            let mut rep = vec![Int::zero(); radices.len()];
            for i in (0..radices.len()).rev() {
                rep[i] = Int::from(idx % radices[i]);
                idx /= radices[i];
            }
            let witness = self.u_inv.mul_vec(&rep)?;
            out.push(ReidClass {
                level: self.level,
                rep,
                witness,
            });
        }
        Ok(out)
    }
}

/// `iota_{m,n}` as the matrix `sum_{l=0}^{n/m-1} G^{n-(l+1)m} F^{lm}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoostMap {
    from_level: u64,
    to_level: u64,
    matrix: IntMatrix,
}

impl BoostMap {
    pub fn from_level(&self) -> u64 {
        self.from_level
    }

    pub fn to_level(&self) -> u64 {
        self.to_level
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }
}

pub(crate) fn check_divides(m: u64, n: u64) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::ZeroLevel);
    }
    if !n.is_multiple_of(m) {
        return Err(Error::NotDivisor { m, n });
    }
    Ok(())
}

pub fn reid_set(pair: &TorusPair, n: u64) -> Result<ReidSet> {
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    ReidSet::from_relation(n, pair.relation(n))
}

pub fn boost_map(pair: &TorusPair, m: u64, n: u64) -> Result<BoostMap> {
    check_divides(m, n)?;
    let fm = pair.f.pow(m)?;
    let gm = pair.g.pow(m)?;
    let terms = n / m;
    // term l is G^{(terms-1-l)m} F^{lm}
    let mut g_pows = Vec::with_capacity(terms as usize);
    let mut acc = Matrix::identity(pair.dim());
    for _ in 0..terms {
        g_pows.push(acc.clone());
        acc = &acc * &gm;
    }
    let mut f_pow = Matrix::identity(pair.dim());
    let mut sum = Matrix::zeros(pair.dim(), pair.dim());
    for l in 0..terms {
        let g_pow = &g_pows[(terms - 1 - l) as usize];
        sum = &sum + &(g_pow * &f_pow);
        f_pow = &f_pow * &fm;
    }
    Ok(BoostMap {
        from_level: m,
        to_level: n,
        matrix: sum,
    })
}

pub fn canonicalize(set: &ReidSet, v: &[Int]) -> Result<ReidClass> {
    set.canonicalize(v)
}

pub fn boost_class(b: &BoostMap, c: &ReidClass, target: &ReidSet) -> Result<ReidClass> {
    if c.level != b.from_level {
        return Err(Error::LevelMismatch {
            expected: b.from_level,
            got: c.level,
        });
    }
    if target.level != b.to_level {
        return Err(Error::LevelMismatch {
            expected: b.to_level,
            got: target.level,
        });
    }
    target.canonicalize(&b.matrix.mul_vec(&c.witness)?)
}

/// `im(iota_{m,n})` as the lattice `B Z^r + A_n Z^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageSubgroup {
    pub lattice: Lattice<Int>,
    /// `|det A_n| / [Z^r : lattice]`; `None` for infinite targets.
    pub order: Option<Int>,
}

pub fn image_subgroup(b: &BoostMap, target: &ReidSet) -> Result<ImageSubgroup> {
    if target.level != b.to_level {
        return Err(Error::LevelMismatch {
            expected: b.to_level,
            got: target.level,
        });
    }
    let gens = b.matrix.hstack(&target.relation)?;
    let lattice = Lattice::from_columns(&gens, target.dim())?;
    let order = target.order.finite().map(|o| o / lattice.index());
    Ok(ImageSubgroup { lattice, order })
}

/// The fiber of `iota_{m,n}` over `c`: every level-`m` class boosting to `c`.
pub fn preimage_classes(b: &BoostMap, c: &ReidClass, source: &ReidSet) -> Result<BTreeSet<ReidClass>> {
    if source.level != b.from_level {
        return Err(Error::LevelMismatch {
            expected: b.from_level,
            got: source.level,
        });
    }
    if c.level != b.to_level {
        return Err(Error::LevelMismatch {
            expected: b.to_level,
            got: c.level,
        });
    }
    source.finite_order()?;
    let r = source.dim();
    // A_n = B_{m,n} A_m, so the target relation needs no extra data.
    let target_relation = &b.matrix * &source.relation;
    let system = b.matrix.hstack(&target_relation)?;
    let Some(sol) = solve_linear(&system, &c.witness)? else {
        return Ok(BTreeSet::new());
    };
    let base = source.canonicalize(&sol.particular[..r])?;
    let gens: Vec<ReidClass> = (0..sol.kernel.cols())
        .map(|j| source.canonicalize(&sol.kernel.column(j)[..r]))
        .collect::<Result<_>>()?;
    let kernel = subgroup_closure(source, &gens)?;
    kernel.iter().map(|k| source.add(&base, k)).collect()
}

/// Subgroup of a finite Reidemeister set generated by `gens`.
fn subgroup_closure(set: &ReidSet, gens: &[ReidClass]) -> Result<HashSet<ReidClass>> {
    let mut seen = HashSet::new();
    let zero = set.zero_class();
    seen.insert(zero.clone());
    let mut queue = VecDeque::from([zero]);
    let gens: Vec<&ReidClass> = gens.iter().filter(|g| g.rep.iter().any(|x| !x.is_zero())).collect();
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = set.add(&x, g)?;
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

/// Which criterion settled [`injective_on_boosts`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InjectivityReason {
    /// `det(G^n - F^n) != 0`, so `Coin(f^n_*, g^n_*) = 0`.
    TrivialCoincidenceGroup,
    /// The source is finite and the image has the same order.
    ImageOrderMatchesSource,
    /// Some nonzero class boosts to zero.
    NontrivialKernel,
    /// The source level has an infinite Reidemeister set.
    InfiniteSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InjectivityVerdict {
    pub injective: bool,
    pub reason: InjectivityReason,
}

pub fn injective_on_boosts(pair: &TorusPair, m: u64, n: u64) -> Result<InjectivityVerdict> {
    check_divides(m, n)?;
    if !pair.relation_det(n).is_zero() {
        return Ok(InjectivityVerdict {
            injective: true,
            reason: InjectivityReason::TrivialCoincidenceGroup,
        });
    }
    let source = reid_set(pair, m)?;
    if !source.is_finite() {
        return Ok(InjectivityVerdict {
            injective: false,
            reason: InjectivityReason::InfiniteSource,
        });
    }
    let b = boost_map(pair, m, n)?;
    let target = reid_set(pair, n)?;
    let fiber = preimage_classes(&b, &target.zero_class(), &source)?;
    Ok(if fiber.len() == 1 {
        InjectivityVerdict {
            injective: true,
            reason: InjectivityReason::ImageOrderMatchesSource,
        }
    } else {
        InjectivityVerdict {
            injective: false,
            reason: InjectivityReason::NontrivialKernel,
        }
    })
}
