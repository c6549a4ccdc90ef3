//! Klein bottle pairs through the closed-form Nielsen number and the
//! Moebius/toral formula paths. Reidemeister sets here are non-abelian and are
//! not computed; the gcd and injectivity hypotheses enter as gates.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::divisor::divisors;
use crate::error::{Error, Hypothesis, Result};
use crate::invariants::{mobius_terms, mobius_total, Guarded, MobiusTerm, Safety, Violation};
use crate::scalar::ipow;
use crate::Int;

/// The map `(s, t) -> (q s, r t)` on the Klein bottle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct KleinMap {
    #[serde(serialize_with = "crate::report::ser_int")]
    pub q: Int,
    #[serde(serialize_with = "crate::report::ser_int")]
    pub r: Int,
}

impl KleinMap {
    /// Well defined iff `r` is odd, or `r` is even and `q = 0`.
    pub fn new(q: impl Into<Int>, r: impl Into<Int>) -> Result<Self> {
        let (q, r) = (q.into(), r.into());
        if r.is_even() && !q.is_zero() {
            return Err(Error::InvalidKleinMap {
                q: q.to_string(),
                r: r.to_string(),
            });
        }
        Ok(KleinMap { q, r })
    }
}

/// `f = (a, c)`, `g = (b, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KleinPair {
    pub f: KleinMap,
    pub g: KleinMap,
    /// `gcd(a, b) = 1`
    pub coprime_ab: bool,
    /// `gcd(c, d) = 1`
    pub coprime_cd: bool,
}

impl KleinPair {
    pub fn new(f: KleinMap, g: KleinMap) -> Self {
        let coprime_ab = f.q.gcd(&g.q).is_one();
        let coprime_cd = f.r.gcd(&g.r).is_one();
        KleinPair {
            f,
            g,
            coprime_ab,
            coprime_cd,
        }
    }

    pub fn from_i64((a, c): (i64, i64), (b, d): (i64, i64)) -> Result<Self> {
        Ok(KleinPair::new(KleinMap::new(a, c)?, KleinMap::new(b, d)?))
    }

    pub fn gates_hold(&self) -> bool {
        self.coprime_ab && self.coprime_cd
    }

    fn gate_violations(&self) -> Vec<Violation> {
        if self.gates_hold() {
            Vec::new()
        } else {
            vec![Violation::new(
                Hypothesis::KleinCoprimeDegrees,
                format!(
                    "gcd(a,b) = {}, gcd(c,d) = {}",
                    self.f.q.gcd(&self.g.q),
                    self.f.r.gcd(&self.g.r)
                ),
            )]
        }
    }
}

/// `|c^n - d^n| / 2 * (|a^n + b^n| + |a^n - b^n|)`.
pub fn klein_nielsen(p: &KleinPair, n: u64) -> Result<Int> {
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    let (an, bn) = (ipow(&p.f.q, n), ipow(&p.g.q, n));
    let diff = (ipow(&p.f.r, n) - ipow(&p.g.r, n)).abs();
    if diff.is_odd() {
        return Err(Error::NonIntegralHalf(diff.to_string()));
    }
    Ok((diff / 2) * ((&an + &bn).abs() + (&an - &bn).abs()))
}

/// Signed Nielsen terms of the Moebius sum at level `m`.
pub fn klein_mobius_terms(p: &KleinPair, m: u64) -> Result<Vec<MobiusTerm>> {
    let levels = divisors(m);
    let values = levels
        .iter()
        .map(|&d| Ok((d, klein_nielsen(p, d)?)))
        .collect::<Result<std::collections::HashMap<_, _>>>()?;
    Ok(mobius_terms(m, |d| values[&d].clone()))
}

/// `NP_m` by Moebius inversion, gated on coprime degrees.
pub fn klein_np(p: &KleinPair, m: u64, safety: Safety) -> Result<Guarded> {
    let terms = klein_mobius_terms(p, m)?;
    guarded(mobius_total(&terms), p.gate_violations(), safety)
}

fn guarded(value: Int, violations: Vec<Violation>, safety: Safety) -> Result<Guarded> {
    match (safety, violations.first()) {
        (Safety::Checked, Some(v)) => Err(Error::Precondition {
            hypothesis: v.kind,
            detail: v.detail.clone(),
        }),
        _ => Ok(Guarded { value, violations }),
    }
}

/// `NPhi_n = N(f^n, g^n)` together with the divisor-sum cross-check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KleinNphi {
    pub value: Guarded,
    /// `sum_{m | n} NP_m`
    pub divisor_sum: Int,
}

impl KleinNphi {
    pub fn consistent(&self) -> bool {
        self.value.value == self.divisor_sum
    }
}

pub fn klein_nphi(p: &KleinPair, n: u64, safety: Safety) -> Result<KleinNphi> {
    let nielsen = klein_nielsen(p, n)?;
    let mut violations = p.gate_violations();
    if nielsen.is_zero() {
        violations.push(Violation::new(
            Hypothesis::WeaklyJiangNonzero,
            format!("N(f^{n}, g^{n}) = 0"),
        ));
    }
    let value = guarded(nielsen, violations, safety)?;
    let divisor_sum = divisors(n)
        .into_iter()
        .map(|m| Ok(mobius_total(&klein_mobius_terms(p, m)?)))
        .sum::<Result<Int>>()?;
    Ok(KleinNphi { value, divisor_sum })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked() -> KleinPair {
        KleinPair::from_i64((2, 3), (3, 5)).unwrap()
    }

    fn int(v: i64) -> Int {
        Int::from(v)
    }

    #[test]
    fn validity() {
        assert!(KleinMap::new(0, 2).is_ok());
        assert!(KleinMap::new(5, -3).is_ok());
        assert!(matches!(KleinMap::new(1, 2), Err(Error::InvalidKleinMap { .. })));
        assert!(matches!(KleinMap::new(-1, 0), Err(Error::InvalidKleinMap { .. })));
        let p = KleinPair::from_i64((2, 3), (4, 5)).unwrap();
        assert!(!p.coprime_ab && p.coprime_cd);
    }

    #[test]
    fn nielsen_values() {
        let p = worked();
        let v: Vec<Int> = [1, 2, 3, 6].iter().map(|&n| klein_nielsen(&p, n).unwrap()).collect();
        assert_eq!(v, [6, 144, 2646, 10859184].map(int).to_vec());
        let odd = KleinPair::from_i64((0, 2), (1, 3)).unwrap();
        assert!(matches!(klein_nielsen(&odd, 1), Err(Error::NonIntegralHalf(_))));
    }

    #[test]
    fn np_values() {
        let p = worked();
        assert_eq!(klein_np(&p, 6, Safety::Checked).unwrap().value, int(10856400));
        assert_eq!(klein_np(&p, 1, Safety::Checked).unwrap().value, int(6));
        assert_eq!(klein_np(&p, 2, Safety::Checked).unwrap().value, int(138));
        assert_eq!(klein_np(&p, 3, Safety::Checked).unwrap().value, int(2640));
        let bad = KleinPair::from_i64((2, 3), (4, 5)).unwrap();
        assert!(matches!(
            klein_np(&bad, 2, Safety::Checked),
            Err(Error::Precondition {
                hypothesis: Hypothesis::KleinCoprimeDegrees,
                ..
            })
        ));
        assert!(klein_np(&bad, 2, Safety::ForceUnsafe).unwrap().is_unsafe());
    }

    #[test]
    fn nphi_value_and_crosscheck() {
        let r = klein_nphi(&worked(), 6, Safety::Checked).unwrap();
        assert_eq!(r.value.value, int(10859184));
        assert!(r.consistent());
        let zero = KleinPair::from_i64((2, 3), (3, 3)).unwrap();
        assert!(matches!(
            klein_nphi(&zero, 2, Safety::Checked),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn divisor_sums_match_for_gated_pairs() {
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                for c in [-5i64, -3, -1, 1, 3, 5] {
                    for d in [-5i64, -3, -1, 1, 3, 5] {
                        let p = KleinPair::from_i64((a, c), (b, d)).unwrap();
                        if !p.gates_hold() {
                            continue;
                        }
                        for n in 1..=12 {
                            if klein_nielsen(&p, n).unwrap().is_zero() {
                                continue;
                            }
                            let r = klein_nphi(&p, n, Safety::Checked).unwrap();
                            assert!(r.consistent(), "({a},{c}),({b},{d}) n={n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn positive_off_the_diagonal() {
        for (a, b, c, d) in [(2, 3, 3, 5), (1, 2, 1, 3), (-3, 1, 5, -1), (0, 1, 3, 1)] {
            if a == b || a == -b || c == d || c == -d {
                continue;
            }
            let p = KleinPair::from_i64((a, c), (b, d)).unwrap();
            for n in 1..=8 {
                assert!(klein_nielsen(&p, n).unwrap().is_positive());
            }
        }
    }
}
