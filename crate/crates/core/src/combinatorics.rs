//! Integer combinatorics in arbitrary precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn binomial_q(n: i64, k: i64) -> BigRational {
    BigRational::from_integer(binomial(n, k))
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
