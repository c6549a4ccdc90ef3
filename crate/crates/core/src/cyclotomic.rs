//! Integer polynomials for the coprime-levels lemma: cyclotomic polynomials,
//! the boost polynomials `sigma_{p,q}` and the quotient `p(x)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Mul;
use std::sync::{OnceLock, RwLock};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::circle::{circle_iota, CirclePair};
use crate::divisor::{divisors, gcd};
use crate::error::{Error, Result};
use crate::reidemeister::check_divides;
use crate::scalar::ipow;
use crate::Int;

/// Polynomial over the integers, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<Int>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<Int>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn one() -> Self {
        IntPoly::monomial(0, Int::one())
    }

    /// `c x^d`.
    pub fn monomial(d: usize, c: Int) -> Self {
        let mut coeffs = vec![Int::zero(); d + 1];
        coeffs[d] = c;
        IntPoly::new(coeffs)
    }

    /// `x^d - 1`.
    pub fn x_pow_minus_one(d: usize) -> Self {
        let mut p = IntPoly::monomial(d, Int::one());
        p.coeffs[0] -= 1;
        IntPoly::new(p.coeffs)
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `p(x^k)`.
    pub fn compose_power(&self, k: usize) -> Self {
        let mut coeffs = vec![Int::zero(); (self.coeffs.len().max(1) - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        IntPoly::new(coeffs)
    }

    pub fn eval(&self, x: &Int) -> Int {
        self.coeffs.iter().rev().fold(Int::zero(), |acc, c| acc * x + c)
    }

    /// Exact quotient; a remainder or a non-integral step is an error.
    pub fn div_exact(&self, d: &IntPoly) -> Result<IntPoly> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision(format!("({self}) / ({d}) leaves remainder {r}")));
        }
        Ok(q)
    }

    fn div_rem(&self, d: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        let Some(dd) = d.degree() else {
            return Err(Error::InexactDivision("division by the zero polynomial".into()));
        };
        let lead = &d.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Int::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let (q, r) = rem[top].div_rem(lead);
            if !r.is_zero() {
                return Err(Error::InexactDivision(format!(
                    "leading coefficient {lead} does not divide {}",
                    rem[top]
                )));
            }
            let shift = top - dd;
            for (i, c) in d.coeffs.iter().enumerate() {
                rem[shift + i] -= &q * c;
            }
            quot[shift] = q;
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        Ok((IntPoly::new(quot), IntPoly::new(rem)))
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![Int::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl std::iter::Product for IntPoly {
    fn product<I: Iterator<Item = IntPoly>>(iter: I) -> Self {
        iter.fold(IntPoly::one(), |acc, p| &acc * &p)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

/// `sum_{i=0}^{q/p-1} x^{ip}`.
pub fn sigma(p: u64, q: u64) -> Result<IntPoly> {
    check_divides(p, q)?;
    let mut coeffs = vec![Int::zero(); (q - p + 1) as usize];
    for i in 0..q / p {
        coeffs[(i * p) as usize] = Int::one();
    }
    Ok(IntPoly::new(coeffs))
}

fn phi_cache() -> &'static RwLock<HashMap<u64, IntPoly>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, IntPoly>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `Phi_d`, from `x^d - 1 = prod_{e | d} Phi_e`.
///
/// # Panics
/// If `d = 0`, or if a division in the recursion is inexact.
pub fn cyclotomic_poly(d: u64) -> IntPoly {
    assert!(d >= 1, "cyclotomic index must be positive");
    if let Some(p) = phi_cache().read().expect("cache poisoned").get(&d) {
        return p.clone();
    }
    let below: IntPoly = divisors(d)
        .into_iter()
        .filter(|&e| e != d)
        .map(cyclotomic_poly)
        .product();
    let phi = IntPoly::x_pow_minus_one(d as usize)
        .div_exact(&below)
        .expect("x^d - 1 is divisible by the lower cyclotomic factors");
    // A concurrent fill computed the same polynomial; either copy is fine.
    phi_cache()
        .write()
        .expect("cache poisoned")
        .entry(d)
        .or_insert(phi)
        .clone()
}

/// `p(x)` with `sigma_{k,n} = p sigma_{1,m}`, `sigma_{m,n} = p sigma_{1,k}` and
/// `sigma_{1,n} = p sigma_{1,k} sigma_{1,m}` for coprime `k`, `m`, `n = km`.
///
/// # Panics
/// If any identity fails: that would contradict the lemma and means an
/// arithmetic bug.
pub fn cyclolemma_quotient(k: u64, m: u64) -> Result<IntPoly> {
    let (p, holds) = cyclolemma_identities(k, m)?;
    assert!(
        holds.iter().all(|&h| h),
        "lemma identities fail for k={k}, m={m}: {holds:?}"
    );
    Ok(p)
}

/// The candidate `p = sigma_{k,n} / sigma_{1,m}` and whether each of the three
/// identities holds, in the order listed on [`cyclolemma_quotient`].
pub fn cyclolemma_identities(k: u64, m: u64) -> Result<(IntPoly, [bool; 3])> {
    if k == 0 || m == 0 {
        return Err(Error::ZeroLevel);
    }
    if gcd(k, m) != 1 {
        return Err(Error::NotCoprime(k, m));
    }
    let n = k * m;
    let s1k = sigma(1, k)?;
    let s1m = sigma(1, m)?;
    let skn = sigma(k, n)?;
    let (p, first) = match skn.div_exact(&s1m) {
        Ok(p) => (p, true),
        Err(_) => (IntPoly::zero(), false),
    };
    let second = &p * &s1k == sigma(m, n)?;
    let third = &(&p * &s1k) * &s1m == sigma(1, n)?;
    Ok((p, [first, second, third]))
}

/// Indices `r = ab` with `a | m`, `b | k`, `a != 1`, `b != 1`: the cyclotomic
/// factors of the lemma quotient.
pub fn cyclolemma_factor_indices(k: u64, m: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for a in divisors(m).into_iter().filter(|&a| a != 1) {
        for b in divisors(k).into_iter().filter(|&b| b != 1) {
            out.insert(a * b);
        }
    }
    out
}

/// Both sides of the set identity from the lemma proof:
/// `R = {r : exists c != 1, c | m, lcm(r, k) = ck}` and
/// `S = {ab : a | m, b | k, a != 1}`.
pub fn cyclolemma_sets(k: u64, m: u64) -> (BTreeSet<u64>, BTreeSet<u64>) {
    let mut r_set = BTreeSet::new();
    for c in divisors(m).into_iter().filter(|&c| c != 1) {
        // lcm(r, k) = ck forces r | ck
        for r in divisors(c * k) {
            if r.lcm(&k) == c * k {
                r_set.insert(r);
            }
        }
    }
    let mut s_set = BTreeSet::new();
    for a in divisors(m).into_iter().filter(|&a| a != 1) {
        for b in divisors(k) {
            s_set.insert(a * b);
        }
    }
    (r_set, s_set)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiComposition {
    pub c: u64,
    pub k: u64,
    /// `Phi_c(x^k)`
    pub lhs: IntPoly,
    /// Indices `r` with `lcm(r, k) = ck`.
    pub factors: Vec<u64>,
    /// Product of `Phi_r` over `factors`.
    pub rhs: IntPoly,
    pub equal: bool,
    /// `c = 1`, outside the range where the identity is invoked.
    pub degenerate: bool,
}

/// Checks `Phi_c(x^k) = prod_{lcm(r,k) = ck} Phi_r(x)` for coprime `c`, `k`.
pub fn phi_composition(c: u64, k: u64) -> Result<PhiComposition> {
    if c == 0 || k == 0 {
        return Err(Error::ZeroLevel);
    }
    if gcd(c, k) != 1 {
        return Err(Error::NotCoprime(c, k));
    }
    let lhs = cyclotomic_poly(c).compose_power(k as usize);
    let factors: Vec<u64> = divisors(c * k).into_iter().filter(|r| r.lcm(&k) == c * k).collect();
    let rhs: IntPoly = factors.iter().map(|&r| cyclotomic_poly(r)).product();
    Ok(PhiComposition {
        c,
        k,
        equal: lhs == rhs,
        lhs,
        factors,
        rhs,
        degenerate: c == 1,
    })
}

/// `a^{n-m} sigma_{m,n}(b/a)` cleared of denominators:
/// `sum_i b^{im} a^{n-m-im}`.
pub fn iota_via_sigma(pair: &CirclePair, m: u64, n: u64) -> Result<Int> {
    check_divides(m, n)?;
    if pair.a.is_zero() {
        return Err(Error::ZeroDegree);
    }
    let s = sigma(m, n)?;
    let top = n - m;
    Ok(s.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| c * ipow(&pair.b, i as u64) * ipow(&pair.a, top - i as u64))
        .sum())
}

/// `iota_via_sigma` agrees with the defining sum.
pub fn iota_crosscheck(pair: &CirclePair, m: u64, n: u64) -> Result<bool> {
    Ok(iota_via_sigma(pair, m, n)? == circle_iota(pair, m, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn canonical_form_and_display() {
        assert_eq!(poly(&[1, 2, 0, 0]).coeffs().len(), 2);
        assert!(poly(&[0, 0]).is_zero());
        assert_eq!(poly(&[1, -1, 1]).to_string(), "x^2 - x + 1");
        assert_eq!(poly(&[-1, 1]).to_string(), "x - 1");
        assert_eq!(poly(&[0, 0, -3]).to_string(), "-3x^2");
        assert_eq!(serde_json::to_string(&poly(&[1, 0, -1])).unwrap(), r#"["1","0","-1"]"#);
    }

    #[test]
    fn sigmas() {
        assert_eq!(sigma(1, 2).unwrap(), poly(&[1, 1]));
        assert_eq!(sigma(2, 6).unwrap(), poly(&[1, 0, 1, 0, 1]));
        assert_eq!(sigma(3, 6).unwrap(), poly(&[1, 0, 0, 1]));
        assert_eq!(sigma(4, 4).unwrap(), IntPoly::one());
        assert!(sigma(4, 6).is_err());
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), poly(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4), poly(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), poly(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(10), poly(&[1, -1, 1, -1, 1]));
        // first cyclotomic polynomial with a coefficient outside {-1,0,1}
        assert!(cyclotomic_poly(105).coeffs().iter().any(|c| c == &Int::from(-2)));
    }

    #[test]
    fn concurrent_fills_agree() {
        let handles: Vec<_> = (0..8)
            .map(|t| std::thread::spawn(move || (1..=60).map(|d| cyclotomic_poly(d + t)).collect::<Vec<_>>()))
            .collect();
        for (t, h) in handles.into_iter().enumerate() {
            for (i, p) in h.join().unwrap().into_iter().enumerate() {
                assert_eq!(p, cyclotomic_poly(i as u64 + 1 + t as u64));
            }
        }
    }

    #[test]
    fn quotients() {
        assert_eq!(cyclolemma_quotient(2, 3).unwrap(), cyclotomic_poly(6));
        assert_eq!(cyclolemma_quotient(2, 5).unwrap(), poly(&[1, -1, 1, -1, 1]));
        assert_eq!(cyclolemma_quotient(1, 7).unwrap(), IntPoly::one());
        assert!(matches!(cyclolemma_quotient(2, 4), Err(Error::NotCoprime(2, 4))));
        let p: IntPoly = cyclolemma_factor_indices(3, 4)
            .into_iter()
            .map(cyclotomic_poly)
            .product();
        assert_eq!(p, cyclolemma_quotient(3, 4).unwrap());
    }

    #[test]
    fn compositions() {
        let r = phi_composition(3, 2).unwrap();
        assert_eq!(r.factors, vec![3, 6]);
        assert!(r.equal);
        assert_eq!(r.lhs, poly(&[1, 0, 1, 0, 1]));
        let r = phi_composition(2, 3).unwrap();
        assert_eq!(r.factors, vec![2, 6]);
        assert_eq!(r.lhs, poly(&[1, 0, 0, 1]));
        assert!(r.equal);
        let r = phi_composition(1, 4).unwrap();
        assert!(r.degenerate && r.equal);
        assert!(phi_composition(2, 4).is_err());
    }

    #[test]
    fn sigma_iotas() {
        let p = CirclePair::new(6, 2);
        assert_eq!(iota_via_sigma(&p, 3, 6).unwrap(), Int::from(224));
        assert_eq!(iota_via_sigma(&p, 1, 6).unwrap(), Int::from(11648));
        assert_eq!(iota_via_sigma(&p, 6, 6).unwrap(), Int::from(1));
        assert!(matches!(
            iota_via_sigma(&CirclePair::new(0, 3), 1, 2),
            Err(Error::ZeroDegree)
        ));
        for a in -5i64..=5 {
            for b in -5i64..=5 {
                if a == 0 {
                    continue;
                }
                for (m, n) in [(1, 6), (2, 6), (3, 6), (1, 4), (2, 8), (5, 10)] {
                    assert!(iota_crosscheck(&CirclePair::new(a, b), m, n).unwrap());
                }
            }
        }
    }
}
