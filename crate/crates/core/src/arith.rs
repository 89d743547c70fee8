//! Small integer helpers shared by the solver modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

/// Square root of `n` if it is a perfect square.
pub(crate) fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// `Some(1)` if `a ≡ 1`, `Some(-1)` if `a ≡ -1 (mod m)`, otherwise `None`.
/// When both hold (`m <= 2`) the answer is `1`.
pub(crate) fn pm_one(a: &BigInt, m: &BigInt) -> Option<i8> {
    let r = a.mod_floor(m);
    if r == BigInt::one().mod_floor(m) {
        Some(1)
    } else if r == (-BigInt::one()).mod_floor(m) {
        Some(-1)
    } else {
        None
    }
}

/// Number of distinct prime divisors, with the convention `ω(1) = 1`.
pub fn distinct_prime_count(mut n: u64) -> u32 {
    assert!(n >= 1, "distinct_prime_count of 0");
    if n == 1 {
        return 1;
    }
    let mut count = 0;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            count += 1;
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        count += 1;
    }
    count
}

/// All positive divisors of `n`, ascending.
pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
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

/// Whether `x^2 ≡ -1 (mod m)` has a solution.
pub(crate) fn minus_one_is_square_mod(m: u64) -> bool {
    if m == 1 {
        return true;
    }
    (0..m).any(|x| (x * x + 1) % m == 0)
}
