//! The integer scalar abstraction for the numeric layer.
//!
//! Polynomials, linear forms and the exact linear algebra are generic over
//! any signed integer type implementing the num-traits/num-integer
//! interfaces.  `i64`, `i128` and `BigInt` all qualify; the crate-level
//! alias [`crate::Int`] picks `BigInt` so that no intermediate value can
//! overflow.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed};

pub trait Scalar:
    Integer + Signed + FromPrimitive + Clone + Hash + Debug + Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Integer + Signed + FromPrimitive + Clone + Hash + Debug + Display + Send + Sync + 'static
{
}

/// Checked conversion from `i64`.
pub fn from_i64<S: Scalar>(v: i64) -> S {
    <S as FromPrimitive>::from_i64(v).expect("scalar conversion from i64")
}

/// Sign of a scalar as -1, 0 or 1.
pub fn signum_i8<S: Scalar>(v: &S) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// gcd of a slice, nonnegative; zero for an empty slice or all-zero input.
pub fn gcd_all<S: Scalar>(values: &[S]) -> S {
    let mut g = S::zero();
    for v in values {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Binomial coefficient as a scalar; zero outside the Pascal triangle.
pub fn binomial<S: Scalar>(n: i64, k: i64) -> S {
    if k < 0 || k > n || n < 0 {
        return S::zero();
    }
    let mut num = S::one();
    let mut den = S::one();
    for i in 0..k {
        num = num * from_i64::<S>(n - i);
        den = den * from_i64::<S>(i + 1);
    }
    num / den
}

/// Factorial as a scalar.
pub fn factorial<S: Scalar>(n: u64) -> S {
    let mut f = S::one();
    for i in 2..=n {
        f = f * from_i64::<S>(i as i64);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn works_over_multiple_scalar_types() {
        fn probe<S: Scalar>() -> S {
            let g = gcd_all(&[from_i64::<S>(12), from_i64::<S>(-18), from_i64::<S>(30)]);
            g * binomial::<S>(5, 2) + factorial::<S>(4)
        }
        assert_eq!(probe::<i64>(), 84);
        assert_eq!(probe::<i128>(), 84);
        assert_eq!(probe::<BigInt>(), BigInt::from(84));
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial::<i64>(4, 0), 1);
        assert_eq!(binomial::<i64>(4, 5), 0);
        assert_eq!(binomial::<i64>(4, -1), 0);
        assert_eq!(binomial::<i64>(6, 3), 20);
    }
}
