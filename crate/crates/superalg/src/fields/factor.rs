//! Integer factorization: trial division up to 10^6, then Pollard rho.
//!
//! Inputs beyond 128 bits fail with `FactorizationTooHard` instead of
//! risking a wrong square-class answer.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

const TRIAL_BOUND: u64 = 1_000_000;

/// Factor |n| into primes. `n` must be nonzero; the sign is ignored.
pub fn factor(n: &BigInt) -> Result<BTreeMap<u64, u32>> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mag = n.abs();
    let mut m = mag
        .to_u128()
        .ok_or_else(|| Error::FactorizationTooHard(format!("{} exceeds 128 bits", n)))?;
    let mut out = BTreeMap::new();
    for p in std::iter::once(2u64).chain((3..=TRIAL_BOUND).step_by(2)) {
        let p128 = p as u128;
        if p128 * p128 > m {
            break;
        }
        while m % p128 == 0 {
            *out.entry(p).or_insert(0) += 1;
            m /= p128;
        }
    }
    if m > 1 {
        factor_u128(m, &mut out)?;
    }
    Ok(out)
}

fn factor_u128(n: u128, out: &mut BTreeMap<u64, u32>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime_u128(n) {
        let p = u64::try_from(n)
            .map_err(|_| Error::FactorizationTooHard(format!("prime factor {} exceeds 64 bits", n)))?;
        *out.entry(p).or_insert(0) += 1;
        return Ok(());
    }
    let d = pollard_rho(n)?;
    factor_u128(d, out)?;
    factor_u128(n / d, out)
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    // Schoolbook 128x128 mod via split; m < 2^127 here.
    if let (Some(prod), true) = (a.checked_mul(b), true) {
        return prod % m;
    }
    let mut result = 0u128;
    let mut a = a % m;
    let mut b = b;
    while b > 0 {
        if b & 1 == 1 {
            result = (result + a) % m;
        }
        a = (a << 1) % m;
        b >>= 1;
    }
    result
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u128 (witness set valid to 3.3 * 10^24,
/// plus a few extra rounds for larger inputs).
pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u128) -> Result<u128> {
    if n % 2 == 0 {
        return Ok(2);
    }
    let mut c = 1u128;
    loop {
        if c > 64 {
            return Err(Error::FactorizationTooHard(format!("pollard rho gave up on {}", n)));
        }
        let mut x = 2u128;
        let mut y = 2u128;
        let mut d = 1u128;
        let f = |v: u128| (mul_mod(v, v, n) + c) % n;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u128(x.abs_diff(y), n);
        }
        if d != n {
            return Ok(d);
        }
        c += 1;
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn small_factorizations() {
        let f = factor(&BigInt::from(360)).unwrap();
        assert_eq!(f.get(&2), Some(&3));
        assert_eq!(f.get(&3), Some(&2));
        assert_eq!(f.get(&5), Some(&1));
    }

    #[test]
    fn negative_sign_ignored() {
        let f = factor(&BigInt::from(-12)).unwrap();
        assert_eq!(f.get(&2), Some(&2));
        assert_eq!(f.get(&3), Some(&1));
    }

    #[test]
    fn large_semiprime() {
        // 1000003 * 1000033, both above the trial bound.
        let n = BigInt::from(1000003u64) * BigInt::from(1000033u64);
        let f = factor(&n).unwrap();
        assert_eq!(f.get(&1000003), Some(&1));
        assert_eq!(f.get(&1000033), Some(&1));
    }

    #[test]
    fn zero_rejected() {
        assert!(factor(&BigInt::from(0)).is_err());
    }

    #[test]
    fn primality() {
        assert!(is_prime_u128(2));
        assert!(is_prime_u128(1000003));
        assert!(!is_prime_u128(1000001)); // 101 * 9901
    }
}
