//! Exact scalar types used by the dense linear algebra.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed};

/// An exact ordered field. Floating point types are deliberately excluded:
/// every verdict produced downstream depends on exact zero tests.
pub trait ExactScalar:
    Clone + Debug + Display + Eq + Ord + Hash + Num + Signed + FromPrimitive + Send + Sync
{
    fn to_big_rational(&self) -> BigRational;
}

impl ExactScalar for Ratio<i64> {
    fn to_big_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

impl ExactScalar for Ratio<i128> {
    fn to_big_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

impl ExactScalar for BigRational {
    fn to_big_rational(&self) -> BigRational {
        self.clone()
    }
}

/// Splits a positive rational `q` as `2^a * r^2` with `r` rational.
/// Returns `None` when the odd part is not a square.
pub fn two_power_square_class<S: ExactScalar>(q: &S) -> Option<i64> {
    use num_traits::Zero;
    let q = q.to_big_rational();
    if q <= BigRational::zero() {
        return None;
    }
    let (mut n, mut d) = (q.numer().clone(), q.denom().clone());
    let mut a = 0i64;
    let two = BigInt::from(2);
    while (&n % &two).is_zero() {
        n /= &two;
        a += 1;
    }
    while (&d % &two).is_zero() {
        d /= &two;
        a -= 1;
    }
    let odd = n * d;
    let root = odd.sqrt();
    if &root * &root == odd {
        Some(a)
    } else {
        None
    }
}
