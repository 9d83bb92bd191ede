//! Exact integer scalar abstraction.
//!
//! Every closed form in [`crate::formulas`] is written against [`ExactInt`]
//! rather than a fixed integer type, so the same code runs on primitive
//! integers (fast, overflow-checked in tests) and on big integers (the
//! crate-root defaults [`crate::Int`] / [`crate::Rat`], safe at any size).

use std::fmt;

use num_integer::Integer;
use num_traits::NumAssign;

/// An exact integer scalar: arbitrary precision or a primitive wide enough
/// for the parameters at hand.
pub trait ExactInt: Integer + NumAssign + Clone + From<u32> + fmt::Debug + fmt::Display {}

impl<T> ExactInt for T where T: Integer + NumAssign + Clone + From<u32> + fmt::Debug + fmt::Display {}

/// `base^exp` by repeated squaring.
pub fn ipow<T: ExactInt>(base: u32, exp: u32) -> T {
    num_traits::pow(T::from(base), exp as usize)
}

/// Binomial coefficient `C(n, k)`, exact at every intermediate step.
pub fn binomial<T: ExactInt>(n: u32, k: u32) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut c = T::one();
    for i in 1..=k {
        // the running product is divisible by i after multiplying in n-k+i
        c = c * T::from(n - k + i) / T::from(i);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn powers() {
        assert_eq!(ipow::<i128>(3, 0), 1);
        assert_eq!(ipow::<i128>(2, 10), 1024);
        assert_eq!(
            ipow::<BigInt>(10, 30).to_string(),
            format!("1{}", "0".repeat(30))
        );
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial::<i128>(4, 0), 1);
        assert_eq!(binomial::<i128>(4, 1), 4);
        assert_eq!(binomial::<i128>(4, 2), 6);
        assert_eq!(binomial::<i128>(3, 5), 0);
        assert_eq!(
            binomial::<BigInt>(60, 30),
            BigInt::from(118_264_581_564_861_424u64)
        );
    }

    #[test]
    fn primitive_and_bigint_agree() {
        for n in 0..20u32 {
            for k in 0..=n {
                assert_eq!(
                    BigInt::from(binomial::<i128>(n, k)),
                    binomial::<BigInt>(n, k)
                );
            }
        }
    }
}
