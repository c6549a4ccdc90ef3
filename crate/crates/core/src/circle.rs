//! Circle pairs: everything reduces to integers. Level-`n` classes form
//! `Z_{|b^n - a^n|}` and each boost is multiplication by an integer.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::divisor::gcd;
use crate::error::{Error, Result};
use crate::invariants::{level_reports_with, LevelReport};
use crate::reidemeister::{boost_map, check_divides, preimage_classes, reid_set, Order, TorusPair};
use crate::scalar::ipow;
use crate::Int;

/// Degrees `a` of `f` and `b` of `g`. Zero and negative degrees are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CirclePair {
    #[serde(serialize_with = "crate::report::ser_int")]
    pub a: Int,
    #[serde(serialize_with = "crate::report::ser_int")]
    pub b: Int,
}

impl CirclePair {
    pub fn new(a: impl Into<Int>, b: impl Into<Int>) -> Self {
        CirclePair {
            a: a.into(),
            b: b.into(),
        }
    }

    /// The same pair as 1x1 linearizations.
    pub fn torus(&self) -> TorusPair {
        TorusPair::circle(self.a.clone(), self.b.clone())
    }

    /// `b^n - a^n`, signed.
    pub fn relation(&self, n: u64) -> Int {
        ipow(&self.b, n) - ipow(&self.a, n)
    }
}

/// `|b^n - a^n|`, infinite when `a^n = b^n`.
pub fn circle_reid_order(p: &CirclePair, n: u64) -> Order {
    let d = p.relation(n).abs();
    if d.is_zero() {
        Order::Infinite
    } else {
        Order::Finite(d)
    }
}

/// `sum_{l=0}^{n/m-1} b^{n-(l+1)m} a^{lm}`.
pub fn circle_iota(p: &CirclePair, m: u64, n: u64) -> Result<Int> {
    check_divides(m, n)?;
    Ok((0..n / m)
        .map(|l| ipow(&p.b, n - (l + 1) * m) * ipow(&p.a, l * m))
        .sum())
}

/// `gcd(|a|, |b|) = 1`, with `gcd(x, 0) = |x|`.
pub fn circle_gcd_reducible(p: &CirclePair) -> bool {
    p.a.gcd(&p.b).is_one()
}

/// The three conditions of the coprime-levels equivalence lemma.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaEquivalence {
    pub k: u64,
    pub m: u64,
    /// Every class reducing to both levels `k` and `m` reduces to level 1
    /// (decided by exhaustive preimage search).
    pub common_reductions_reduce_to_one: bool,
    /// `lcm(iota_{m,n}, iota_{k,n}) = |iota_{1,n}|`.
    pub lcm_condition: bool,
    /// `gcd(iota_{1,k}, iota_{1,m}) = 1`.
    pub gcd_condition: bool,
}

impl LemmaEquivalence {
    pub fn consistent(&self) -> bool {
        self.common_reductions_reduce_to_one == self.lcm_condition && self.lcm_condition == self.gcd_condition
    }
}

pub fn lemma_equivalent_check(p: &CirclePair, k: u64, m: u64) -> Result<LemmaEquivalence> {
    if k == 0 || m == 0 {
        return Err(Error::ZeroLevel);
    }
    if gcd(k, m) != 1 {
        return Err(Error::NotCoprime(k, m));
    }
    let n = k * m;
    let pair = p.torus();
    let target = reid_set(&pair, n)?;
    for level in [1, k, m, n] {
        if circle_reid_order(p, level) == Order::Infinite {
            return Err(Error::InfiniteLevel(level));
        }
    }
    let from_k = reid_set(&pair, k)?;
    let from_m = reid_set(&pair, m)?;
    let from_one = reid_set(&pair, 1)?;
    let b_kn = boost_map(&pair, k, n)?;
    let b_mn = boost_map(&pair, m, n)?;
    let b_1n = boost_map(&pair, 1, n)?;

    let mut common_ok = true;
    let budget = u64::try_from(from_k.order().finite().expect("finite")).unwrap_or(u64::MAX);
    for beta in from_k.classes(budget)? {
        let alpha = target.canonicalize(&b_kn.matrix().mul_vec(beta.witness())?)?;
        if preimage_classes(&b_mn, &alpha, &from_m)?.is_empty() {
            continue;
        }
        if preimage_classes(&b_1n, &alpha, &from_one)?.is_empty() {
            common_ok = false;
            break;
        }
    }

    let iota = |s, t| circle_iota(p, s, t);
    let lcm_condition = iota(m, n)?.lcm(&iota(k, n)?) == iota(1, n)?.abs();
    let gcd_condition = iota(1, k)?.gcd(&iota(1, m)?).is_one();
    Ok(LemmaEquivalence {
        k,
        m,
        common_reductions_reduce_to_one: common_ok,
        lcm_condition,
        gcd_condition,
    })
}

/// Per-divisor reports; the gcd flag comes from the coprime-degree criterion.
pub fn circle_report(p: &CirclePair, n: u64) -> Result<Vec<LevelReport>> {
    let reducible = circle_gcd_reducible(p);
    level_reports_with(&p.torus(), n, |_| Ok(reducible))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::Flag;

    fn int(v: i64) -> Int {
        Int::from(v)
    }

    #[test]
    fn orders() {
        let p = CirclePair::new(6, 2);
        assert_eq!(circle_reid_order(&p, 6), Order::Finite(int(46592)));
        assert_eq!(circle_reid_order(&CirclePair::new(3, 3), 2), Order::Infinite);
        assert_eq!(circle_reid_order(&CirclePair::new(2, 0), 3), Order::Finite(int(8)));
        assert_eq!(circle_reid_order(&CirclePair::new(1, -1), 2), Order::Infinite);
    }

    #[test]
    fn iotas() {
        let p = CirclePair::new(6, 2);
        assert_eq!(circle_iota(&p, 1, 6).unwrap(), int(11648));
        assert_eq!(circle_iota(&p, 2, 6).unwrap(), int(1456));
        assert_eq!(circle_iota(&p, 3, 6).unwrap(), int(224));
        assert_eq!(circle_iota(&p, 6, 6).unwrap(), int(1));
        assert!(matches!(circle_iota(&p, 4, 6), Err(Error::NotDivisor { m: 4, n: 6 })));
        let c = CirclePair::new(2, 0);
        for (m, n) in [(1, 4), (2, 4), (1, 9), (3, 9)] {
            assert_eq!(circle_iota(&c, m, n).unwrap(), int(1) << (n - m));
        }
    }

    #[test]
    fn iota_is_the_boost_entry() {
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                let p = CirclePair::new(a, b);
                for (m, n) in [(1, 6), (2, 6), (3, 6), (2, 4), (1, 5)] {
                    let bm = boost_map(&p.torus(), m, n).unwrap();
                    assert_eq!(bm.matrix().get(0, 0), &circle_iota(&p, m, n).unwrap());
                }
            }
        }
    }

    #[test]
    fn gcd_criterion() {
        assert!(!circle_gcd_reducible(&CirclePair::new(6, 2)));
        assert!(circle_gcd_reducible(&CirclePair::new(2, 3)));
        assert!(!circle_gcd_reducible(&CirclePair::new(2, 0)));
        assert!(circle_gcd_reducible(&CirclePair::new(-1, 0)));
    }

    #[test]
    fn lemma_examples() {
        let l = lemma_equivalent_check(&CirclePair::new(6, 2), 2, 3).unwrap();
        assert!(!l.common_reductions_reduce_to_one && !l.lcm_condition && !l.gcd_condition);
        let l = lemma_equivalent_check(&CirclePair::new(2, 3), 2, 3).unwrap();
        assert!(l.common_reductions_reduce_to_one && l.lcm_condition && l.gcd_condition);
        let l = lemma_equivalent_check(&CirclePair::new(6, 2), 1, 5).unwrap();
        assert!(l.consistent() && l.gcd_condition);
        assert!(matches!(
            lemma_equivalent_check(&CirclePair::new(6, 2), 2, 4),
            Err(Error::NotCoprime(2, 4))
        ));
        assert!(matches!(
            lemma_equivalent_check(&CirclePair::new(1, -1), 2, 3),
            Err(Error::InfiniteLevel(2))
        ));
    }

    #[test]
    fn lemma_agrees_on_small_pairs() {
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                let p = CirclePair::new(a, b);
                for (k, m) in [(2, 3), (3, 2), (1, 4)] {
                    match lemma_equivalent_check(&p, k, m) {
                        Ok(l) => assert!(l.consistent(), "a={a} b={b} {l:?}"),
                        Err(Error::InfiniteLevel(_)) => {}
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn common_divisor_identity() {
        for a in -7i64..=7 {
            for b in -7i64..=7 {
                let p = CirclePair::new(a, b);
                for k in 1..=7 {
                    let lhs = (int(a) - int(b)) * circle_iota(&p, 1, k).unwrap();
                    assert_eq!(lhs, ipow(&int(a), k) - ipow(&int(b), k));
                }
            }
        }
    }

    #[test]
    fn reports() {
        let r = circle_report(&CirclePair::new(6, 2), 6).unwrap();
        let top = r.last().unwrap();
        assert_eq!(top.np, Some(int(46368)));
        assert_eq!(top.nphi, Some(int(46604)));
        assert!(!top.flags.contains(&Flag::GcdReducible));

        let r = circle_report(&CirclePair::new(2, 0), 4).unwrap();
        assert_eq!(r.last().unwrap().np, Some(int(12)));
        assert_eq!(r.last().unwrap().nphi, Some(int(16)));

        for rep in circle_report(&CirclePair::new(3, 3), 6).unwrap() {
            assert_eq!(rep.nielsen, int(0));
            assert_eq!(rep.np, Some(int(0)));
            assert_eq!(rep.reid_order, Order::Infinite);
        }
    }
}
