//! Small-integer number theory used throughout the crate: primality,
//! Kronecker symbols, modular square roots and trial factorization.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Inverse of `a` modulo the prime `p`; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    let (g, x, _) = ext_gcd(a as i128 % p as i128, p as i128);
    debug_assert_eq!(g, 1, "{a} not invertible mod {p}");
    x.rem_euclid(p as i128) as u64
}

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

/// All primes `<= n` by a plain sieve.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Kronecker symbol `(d | p)` for a prime `p`.
pub fn kronecker(d: i64, p: u64) -> i32 {
    if p == 2 {
        if d % 2 == 0 {
            return 0;
        }
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        };
    }
    let a = d.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// A square root of `a` modulo the prime `p`, if one exists (Tonelli-Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Reduces a big integer modulo `m` into `[0, m)`.
pub fn big_mod(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits in u64")
}

/// Trial limit above which [`prime_divisors`] gives up on a cofactor.
const TRIAL_LIMIT: u64 = 10_000_000;

/// Distinct prime divisors of a nonzero integer by trial division.
///
/// Returns `None` when a cofactor survives trial division up to the internal
/// limit without being provably prime.
pub fn prime_divisors(n: &BigInt) -> Option<Vec<u64>> {
    assert!(!n.is_zero(), "prime_divisors of zero");
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        if (&m % &bp).is_zero() {
            out.push(p);
            while (&m % &bp).is_zero() {
                m /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m.is_one() {
        return Some(out);
    }
    let bp = BigInt::from(p);
    if &bp * &bp > m {
        // what remains has no factor below its square root
        let q = m.to_u64()?;
        out.push(q);
        out.sort_unstable();
        return Some(out);
    }
    match m.to_u64() {
        Some(q) if is_prime(q) => {
            out.push(q);
            out.sort_unstable();
            Some(out)
        }
        _ => None,
    }
}

/// `p`-adic valuation of a nonzero big integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(n.sign() != Sign::NoSign);
    let bp = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while (&m % &bp).is_zero() {
        m /= &bp;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_sieve() {
        let sieve = primes_up_to(2000);
        for n in 0..=2000u64 {
            assert_eq!(is_prime(n), sieve.binary_search(&n).is_ok(), "n = {n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn kronecker_against_squares() {
        for &p in &primes_up_to(60) {
            for d in [-23i64, -20, -3, -4, -7, -8, -47] {
                let expected = if p == 2 {
                    if d % 2 == 0 {
                        0
                    } else {
                        // split iff x^2 - x + (1-d)/4 has a root mod 2
                        let c = ((1 - d) / 4).rem_euclid(2);
                        if c == 0 {
                            1
                        } else {
                            -1
                        }
                    }
                } else if d.rem_euclid(p as i64) == 0 {
                    0
                } else if (0..p).any(|x| (x * x) as i64 % p as i64 == d.rem_euclid(p as i64)) {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(d, p), expected, "d = {d}, p = {p}");
            }
        }
    }

    #[test]
    fn sqrt_mod_roundtrip() {
        for &p in &primes_up_to(300) {
            for a in 0..p {
                if let Some(r) = sqrt_mod(a, p) {
                    assert_eq!(mul_mod(r, r, p), a % p);
                }
            }
        }
    }

    #[test]
    fn prime_divisors_small() {
        assert_eq!(prime_divisors(&BigInt::from(-23 * 23)), Some(vec![23]));
        assert_eq!(prime_divisors(&BigInt::from(147456)), Some(vec![2, 3]));
        assert_eq!(prime_divisors(&BigInt::from(1)), Some(vec![]));
        assert_eq!(
            prime_divisors(&BigInt::from(2 * 1_000_000_007u64)),
            Some(vec![2, 1_000_000_007])
        );
    }
}
