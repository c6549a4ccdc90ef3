//! Randomized structural properties.

use coincidence_iterates::circle::{circle_reid_order, CirclePair};
use coincidence_iterates::cyclotomic::{cyclotomic_poly, IntPoly};
use coincidence_iterates::divisor::divisors;
use coincidence_iterates::exactint::{snf, Lattice, Matrix};
use coincidence_iterates::invariants::{nielsen_number, np_bounds, np_direct, nphi};
use coincidence_iterates::reidemeister::{boost_map, reid_set, Order, TorusPair};
use coincidence_iterates::{Int, IntMatrix};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-bound..=bound, rows * cols)
        .prop_map(move |v| Matrix::new(rows, cols, v.into_iter().map(Int::from).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn snf_is_a_valid_decomposition(a in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c, 9))) {
        let s = snf(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert!(s.u.det().unwrap().abs() == Int::from(1));
        prop_assert!(s.v.det().unwrap().abs() == Int::from(1));
        for w in s.factors.windows(2) {
            prop_assert!(!w[0].is_negative());
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
        if a.is_square() {
            prop_assert_eq!(a.det().unwrap().abs(), s.factors.iter().product::<Int>());
        }
    }

    #[test]
    fn lattice_intersection_index(a in matrix(2, 2, 6), b in matrix(2, 2, 6)) {
        prop_assume!(!a.det().unwrap().is_zero() && !b.det().unwrap().is_zero());
        let la = Lattice::from_columns(&a, 2).unwrap();
        let lb = Lattice::from_columns(&b, 2).unwrap();
        let meet = la.intersect(&lb).unwrap();
        let join = la.sum(&lb).unwrap();
        prop_assert!(meet.is_sublattice_of(&la) && meet.is_sublattice_of(&lb));
        prop_assert!(la.is_sublattice_of(&join) && lb.is_sublattice_of(&join));
        // [Z^2 : A cap B] [Z^2 : A + B] = [Z^2 : A] [Z^2 : B]
        prop_assert_eq!(meet.index() * join.index(), la.index() * lb.index());
    }

    #[test]
    fn circle_orders_and_np(a in -7i64..=7, b in -7i64..=7, n in 1u64..=8) {
        let p = CirclePair::new(a, b);
        let t = p.torus();
        let want = (Int::from(b).pow(n as u32) - Int::from(a).pow(n as u32)).abs();
        let order = circle_reid_order(&p, n);
        if want.is_zero() {
            prop_assert_eq!(order, Order::Infinite);
        } else {
            prop_assert_eq!(order, Order::Finite(want.clone()));
            prop_assert_eq!(reid_set(&t, n).unwrap().order().clone(), Order::Finite(want.clone()));
            prop_assert_eq!(nielsen_number(&t, n), want.clone());
            if divisors(n).iter().all(|&m| !t.relation_det(m).is_zero()) {
                let np = np_direct(&t, n).unwrap();
                let (lo, hi) = np_bounds(&t, n).unwrap();
                prop_assert!(lo <= np && np <= hi && hi == want);
                let total: Int = divisors(n).into_iter().map(|m| np_direct(&t, m).unwrap()).sum();
                prop_assert_eq!(nphi(&t, n).unwrap(), total);
            }
        }
    }

    #[test]
    fn boosts_telescope_for_commuting_pairs(
        base in matrix(2, 2, 2),
        cf in (-2i64..=2, -2i64..=2),
        cg in (-2i64..=2, -2i64..=2),
        (m, n) in (1u64..=6).prop_flat_map(|m| (Just(m), (1u64..=3).prop_map(move |j| m * j))),
    ) {
        let id: IntMatrix = Matrix::identity(2);
        let poly = |c: (i64, i64)| &id.scale(&Int::from(c.0)) + &base.scale(&Int::from(c.1));
        let pair = TorusPair::new(poly(cf), poly(cg)).unwrap();
        let b = boost_map(&pair, m, n).unwrap();
        prop_assert_eq!(b.matrix() * &pair.relation(m), pair.relation(n));
    }

    #[test]
    fn cyclotomic_evaluations(n in 1u64..=60, x in -4i64..=4) {
        let prod = divisors(n).into_iter().map(|d| cyclotomic_poly(d).eval(&Int::from(x))).product::<Int>();
        prop_assert_eq!(prod, IntPoly::x_pow_minus_one(n as usize).eval(&Int::from(x)));
    }
}
