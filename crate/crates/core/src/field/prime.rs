//! Integer helpers for small characteristics.

/// Deterministic trial-division primality test.
///
/// Characteristics handled by this crate stay below 2^62, so the divisor
/// loop never runs past 2^31.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d: u64 = 5;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q` as `p^d` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    let divs = prime_divisors(q);
    if divs.len() != 1 {
        return None;
    }
    let p = divs[0];
    let mut d = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        d += 1;
    }
    Some((p, d))
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `a` must be nonzero mod `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_prime(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn agrees_with_naive_below_ten_thousand() {
        for n in 0..10_000 {
            assert_eq!(is_prime(n), naive_prime(n), "n = {n}");
        }
    }

    #[test]
    fn known_values() {
        assert!(is_prime(2309));
        assert!(is_prime(2));
        assert!(!is_prime(2310));
        assert_eq!(next_prime_above(2304), 2309);
        assert_eq!(prime_power(6561), Some((3, 8)));
        assert_eq!(prime_power(101), Some((101, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_divisors(12), vec![2, 3]);
        assert_eq!(inv_mod(2, 5), 3);
    }
}
