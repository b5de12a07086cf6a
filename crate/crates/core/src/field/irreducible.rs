use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::prime::{is_prime, prime_divisors};
use super::{Degree, FieldError, RingPoly};

/// Rabin's irreducibility test for a monic polynomial over `F_p`.
///
/// `mu` of degree `d` is irreducible iff `x^(p^d) = x mod mu` and
/// `gcd(x^(p^(d/r)) - x, mu) = 1` for every prime `r | d`.
pub fn is_irreducible(mu: &RingPoly) -> Result<bool, FieldError> {
    let p = mu.characteristic();
    let d = match mu.degree() {
        Degree::Finite(d) if d >= 1 => d,
        _ => return Err(FieldError::ConstantModulus),
    };
    if d == 1 {
        return Ok(true);
    }
    let x = RingPoly::x(p);
    // frob[j] = x^(p^j) mod mu
    let mut frob = Vec::with_capacity(d + 1);
    frob.push(x.rem(mu)?);
    for j in 1..=d {
        let next = frob[j - 1].pow_mod(p as u128, mu)?;
        frob.push(next);
    }
    if frob[d] != frob[0] {
        return Ok(false);
    }
    for r in prime_divisors(d as u64) {
        let h = frob[d / r as usize].try_sub(&x)?;
        if h.gcd(mu)?.degree() != Degree::Finite(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Seeded search for a monic irreducible polynomial of degree `d` over `F_p`.
///
/// Roughly one monic polynomial in `d` is irreducible, so the loop ends
/// quickly; the same `(p, d, seed)` always yields the same polynomial.
pub fn find_irreducible(p: u64, d: usize, seed: u64) -> Result<RingPoly, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::CompositeCharacteristic(p));
    }
    if d == 0 {
        return Err(FieldError::ConstantModulus);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 8) ^ d as u64);
    loop {
        let mut c: Vec<u64> = (0..d).map(|_| rng.random_range(0..p)).collect();
        c.push(1);
        // A zero constant term means x divides it.
        if d > 1 && c[0] == 0 {
            continue;
        }
        let mu = RingPoly::new(p, c);
        if is_irreducible(&mu)? {
            return Ok(mu);
        }
    }
}
