//! Divisor bookkeeping for levels.

use serde::Serialize;

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Distinct primes dividing `n`, increasing.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut rest = n;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            out.push(p);
            while rest.is_multiple_of(p) {
                rest /= p;
            }
        }
        p += 1;
    }
    if rest > 1 {
        out.push(rest);
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Divisor poset of a level `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorLattice {
    pub n: u64,
    pub divisors: Vec<u64>,
    /// `n / p` for each prime `p | n`, in order of increasing `p`.
    pub maximal_proper: Vec<u64>,
}

impl DivisorLattice {
    pub fn new(n: u64) -> Self {
        DivisorLattice {
            n,
            divisors: divisors(n),
            maximal_proper: prime_divisors(n).into_iter().map(|p| n / p).collect(),
        }
    }

    pub fn proper_divisors(&self) -> impl Iterator<Item = u64> + '_ {
        self.divisors.iter().copied().filter(move |&d| d != self.n)
    }
}

/// Nonempty subsets of `items`, as index masks paired with the chosen items.
pub(crate) fn nonempty_subsets<T: Clone>(items: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    (1u64..(1u64 << items.len())).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, v)| v.clone())
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(30), vec![1, 2, 3, 5, 6, 10, 15, 30]);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
        assert_eq!(prime_divisors(30), vec![2, 3, 5]);
        assert_eq!(prime_divisors(1), Vec::<u64>::new());
        assert_eq!(prime_divisors(49), vec![7]);
    }

    #[test]
    fn maximal_divisors_of_thirty() {
        let d = DivisorLattice::new(30);
        assert_eq!(d.maximal_proper, vec![15, 10, 6]);
        assert_eq!(d.proper_divisors().count(), 7);
    }

    #[test]
    fn divisor_facts_by_factorization() {
        for n in 1..=240u64 {
            let d = divisors(n);
            // d(n) is multiplicative over the prime-power factorization
            let mut expected = 1;
            let mut rest = n;
            for p in prime_divisors(n) {
                let mut e = 0;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    e += 1;
                }
                expected *= e + 1;
            }
            assert_eq!(d.len(), expected, "n = {n}");
            assert!(d.windows(2).all(|w| w[0] < w[1]));
            for m in DivisorLattice::new(n).maximal_proper {
                assert!(d.contains(&m) && m < n);
            }
        }
    }

    #[test]
    fn subsets_are_all_nonempty_masks() {
        let s: Vec<Vec<u64>> = nonempty_subsets(&[2, 3, 5]).collect();
        assert_eq!(s.len(), 7);
        assert!(s.contains(&vec![2, 5]));
    }
}
