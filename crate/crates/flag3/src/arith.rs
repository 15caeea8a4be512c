//! Exact big-integer arithmetic helpers.
//!
//! Everything in this crate that feeds a decision is integer or rational
//! arithmetic; floating point never appears. The two square-root helpers
//! here return exact floors and are verified against their defining
//! inequalities before returning.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Floor of `√n`, exact.
pub fn floor_sqrt(n: &BigUint) -> BigUint {
    let r = n.sqrt();
    debug_assert!(&r * &r <= *n && (&r + 1u32) * (&r + 1u32) > *n);
    r
}

/// Largest `k` with `k²·den ≤ num`, i.e. the floor of `√(num/den)` as an
/// exact rational square root.
///
/// Panics if `den` is zero.
pub fn floor_sqrt_ratio(num: &BigUint, den: &BigUint) -> BigUint {
    assert!(!den.is_zero(), "floor_sqrt_ratio: zero denominator");
    // floor(√(num/den)) = floor(√floor(num/den)); the adjustment loops keep
    // the result exact even if that identity were ever violated.
    let mut k = floor_sqrt(&(num / den));
    while &(&k + 1u32) * &(&k + 1u32) * den <= *num {
        k += 1u32;
    }
    while !k.is_zero() && &(&k * &k) * den > *num {
        k -= 1u32;
    }
    k
}

/// `n` as a signed big integer.
pub fn to_int(n: &BigUint) -> BigInt {
    BigInt::from(n.clone())
}

/// `n` as an exact rational.
pub fn to_ratio(n: &BigUint) -> BigRational {
    BigRational::from_integer(to_int(n))
}

/// `⌈a/b⌉` on unsigned big integers. Panics if `b` is zero.
pub fn div_ceil(a: &BigUint, b: &BigUint) -> BigUint {
    assert!(!b.is_zero(), "div_ceil: zero divisor");
    if a.is_zero() {
        BigUint::zero()
    } else {
        (a - BigUint::one()) / b + BigUint::one()
    }
}
