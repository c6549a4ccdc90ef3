//! Scalar abstraction for the exact integer layer.
//!
//! Every routine in [`crate::exactint`] is written against [`IntScalar`], so the
//! same Smith/Hermite code runs on machine integers (handy for fast sweeps where
//! magnitudes are known to be small) and on [`num_bigint::BigInt`], which is what
//! the invariant computations use.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact signed integer ring with Euclidean division.
pub trait IntScalar:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync
{
    fn lit(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("i64 fits every IntScalar")
    }

    /// Least nonnegative residue modulo `|m|`; `m = 0` leaves the value untouched.
    fn reduce_mod(&self, m: &Self) -> Self {
        if m.is_zero() {
            self.clone()
        } else {
            self.mod_floor(&m.abs())
        }
    }
}

impl<T> IntScalar for T where
    T: Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync
{
}

/// `base^exp` by repeated squaring.
pub fn ipow<T: IntScalar>(base: &T, exp: u64) -> T {
    let mut acc = T::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b.clone();
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * b;
        }
    }
    acc
}
