//! Big-integer binomials and factorials.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// `binom(n, k)` via the multiplicative formula; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial with a signed lower index: `binom(n, k) = 0` for `k < 0`.
pub fn binomial_signed(n: u64, k: i64) -> BigUint {
    if k < 0 {
        BigUint::zero()
    } else {
        binomial(n, k as u64)
    }
}

/// Number of degree-`d` monomials in `n` variables, `binom(n+d-1, d)`.
/// Zero variables carry only the constant monomial.
pub fn monomial_count(n: usize, d: usize) -> BigUint {
    if n == 0 {
        return if d == 0 { BigUint::one() } else { BigUint::zero() };
    }
    binomial((n + d - 1) as u64, d as u64)
}

/// Like [`monomial_count`] but saturating into a `u128`.
pub fn monomial_count_u128(n: usize, d: usize) -> u128 {
    monomial_count(n, d).to_u128().unwrap_or(u128::MAX)
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Usize binomial for index arithmetic; panics on overflow.
pub fn binomial_usize(n: usize, k: usize) -> usize {
    binomial(n as u64, k as u64)
        .to_usize()
        .expect("binomial overflows usize")
}
