//! Rational enclosures of `ln` and `sqrt` with directed rounding.
//!
//! The typicality bounds and concentration thresholds involve `ln n` and
//! square roots. Instead of floating point, each value is bracketed by a
//! pair of exact rationals `lo <= value <= hi`, so callers can round in
//! whichever direction keeps a comparison conservative.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Rat;

/// A rational bracket `lo <= value <= hi` around a real number.
#[derive(Debug, Clone, PartialEq)]
pub struct Enclosure {
    pub lo: Rat,
    pub hi: Rat,
}

impl Enclosure {
    fn exact(v: Rat) -> Self {
        Enclosure {
            lo: v.clone(),
            hi: v,
        }
    }

    /// Width of the bracket.
    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }
}

/// Encloses `sqrt(x)` for `x >= 0` within `2^-bits`.
pub fn sqrt_enclosure(x: &Rat, bits: u32) -> Enclosure {
    assert!(!x.is_negative(), "sqrt of a negative rational");
    if x.is_zero() {
        return Enclosure::exact(Rat::zero());
    }
    // sqrt(a/b) = sqrt(a*b)/b; scale by 4^bits before the integer sqrt
    let scaled: BigInt = (x.numer() * x.denom()) << (2 * bits);
    let root = scaled.sqrt();
    let den: BigInt = x.denom() << bits;
    Enclosure {
        lo: Rat::new(root.clone(), den.clone()),
        hi: Rat::new(root + 1, den),
    }
}

/// Encloses `ln(x)` for `x >= 1` within roughly `2^-bits`.
pub fn ln_enclosure(x: &Rat, bits: u32) -> Enclosure {
    assert!(*x >= Rat::one(), "ln enclosure requires x >= 1");
    if x.is_one() {
        return Enclosure::exact(Rat::zero());
    }
    // x = 2^k * m with m in [1, 2)
    let two = Rat::from_integer(BigInt::from(2));
    let mut m = x.clone();
    let mut k = 0u32;
    while m >= two {
        m /= &two;
        k += 1;
    }
    let ln2 = atanh_times_two(&Rat::new(BigInt::one(), BigInt::from(3)), bits);
    let lnm = if m.is_one() {
        Enclosure::exact(Rat::zero())
    } else {
        let z = (&m - Rat::one()) / (&m + Rat::one());
        atanh_times_two(&z, bits)
    };
    let k = Rat::from_integer(BigInt::from(k));
    Enclosure {
        lo: &k * &ln2.lo + lnm.lo,
        hi: &k * &ln2.hi + lnm.hi,
    }
}

/// `2*atanh(z) = 2*sum_{j>=0} z^(2j+1)/(2j+1)` for `0 < z <= 1/2`.
///
/// The partial sum is a strict lower bound; the geometric tail bound
/// `2 z^(2J+3) / ((2J+3)(1 - z^2))` gives the upper bound.
fn atanh_times_two(z: &Rat, bits: u32) -> Enclosure {
    debug_assert!(z > &Rat::zero() && *z <= Rat::new(BigInt::one(), BigInt::from(2)));
    let eps = Rat::new(BigInt::one(), BigInt::one() << bits);
    let two = Rat::from_integer(BigInt::from(2));
    let z2 = z * z;
    let one_minus_z2 = Rat::one() - &z2;
    let mut zpow = z.clone(); // z^(2j+1)
    let mut sum = Rat::zero();
    let mut j = 0u32;
    loop {
        sum += &two * &zpow / Rat::from_integer(BigInt::from(2 * j + 1));
        zpow *= &z2; // now z^(2j+3)
        let tail = &two * &zpow / (Rat::from_integer(BigInt::from(2 * j + 3)) * &one_minus_z2);
        if tail < eps {
            return Enclosure {
                hi: &sum + tail,
                lo: sum,
            };
        }
        j += 1;
    }
}
