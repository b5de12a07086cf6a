use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};
use smallvec::SmallVec;

use super::prime::{inv_mod, mul_mod};
use super::{FieldError, FieldSpec, RingPoly};

pub(crate) type Coeffs = SmallVec<[u64; 12]>;

/// An element of a [`FieldSpec`], stored as `d` little-endian coefficients.
#[derive(Clone)]
pub struct FieldElement {
    field: FieldSpec,
    coeffs: Coeffs,
}

impl FieldElement {
    pub(crate) fn from_parts(field: FieldSpec, coeffs: Coeffs) -> Self {
        FieldElement { field, coeffs }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [u64] {
        &mut self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let p = self.field.p();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| {
                let s = a + b;
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect();
        Ok(Self::from_parts(self.field.clone(), coeffs))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let p = self.field.p();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| if a >= b { a - b } else { a + p - b })
            .collect();
        Ok(Self::from_parts(self.field.clone(), coeffs))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let coeffs = mul_reduce(&self.field, &self.coeffs, &other.coeffs);
        Ok(Self::from_parts(self.field.clone(), coeffs))
    }

    /// Multiplicative inverse; `DivisionByZero` for zero.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let p = self.field.p();
        match self.field.modulus() {
            None => Ok(self.field.from_u64(inv_mod(self.coeffs[0], p))),
            Some(m) => {
                let a = RingPoly::new(p, self.coeffs.to_vec());
                let inv = a
                    .inverse_mod(m)?
                    .expect("nonzero element of a field is invertible");
                self.field.from_ring(&inv)
            }
        }
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, mut exp: u128) -> Self {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplies by an integer from the prime subfield.
    pub fn scale(&self, c: u64) -> Self {
        let p = self.field.p();
        let c = c % p;
        let coeffs = self.coeffs.iter().map(|&a| mul_mod(a, c, p)).collect();
        Self::from_parts(self.field.clone(), coeffs)
    }

    /// The element as a polynomial in the adjoined root.
    pub fn to_ring(&self) -> RingPoly {
        RingPoly::new(self.field.p(), self.coeffs.to_vec())
    }
}

/// Schoolbook product followed by folding with the stored modulus.
fn mul_reduce(field: &FieldSpec, a: &[u64], b: &[u64]) -> Coeffs {
    let p = field.p();
    let d = field.d();
    if d == 1 {
        return smallvec::smallvec![mul_mod(a[0], b[0], p)];
    }
    let neg = field.neg_modulus();
    let mut t: SmallVec<[u64; 24]> = smallvec::smallvec![0; 2 * d - 1];
    if field.narrow() {
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (o, &y) in t[i..].iter_mut().zip(b) {
                *o += x * y;
            }
        }
        for o in t.iter_mut() {
            *o %= p;
        }
        for i in (d..2 * d - 1).rev() {
            let c = t[i] % p;
            if c == 0 {
                continue;
            }
            for (o, &m) in t[i - d..i].iter_mut().zip(neg) {
                *o += c * m;
            }
        }
        t.truncate(d);
        for o in t.iter_mut() {
            *o %= p;
        }
    } else {
        let addm = |x: u64, y: u64| {
            let s = x as u128 + y as u128;
            (s % p as u128) as u64
        };
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                t[i + j] = addm(t[i + j], mul_mod(x, y, p));
            }
        }
        for i in (d..2 * d - 1).rev() {
            let c = t[i];
            if c == 0 {
                continue;
            }
            for j in 0..d {
                t[i - d + j] = addm(t[i - d + j], mul_mod(c, neg[j], p));
            }
        }
        t.truncate(d);
    }
    t.into_iter().collect()
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field == other.field
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on coefficients (lowest degree first); only meaningful
/// within one field, used for canonical representatives.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "{:?}", self.coeffs.as_slice())
        }
    }
}

/// Serialized as its coefficient array; decoding needs the owning field,
/// see [`FieldSpec::element`].
impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs.as_slice().serialize(s)
    }
}

macro_rules! fe_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        /// Panics if the operands live in different fields.
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$inner(rhs).expect("field element operands from different fields")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

fe_binop!(Add, add, try_add);
fe_binop!(Sub, sub, try_sub);
fe_binop!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.field.p();
        let coeffs = self.coeffs.iter().map(|&c| (p - c) % p).collect();
        FieldElement::from_parts(self.field.clone(), coeffs)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{find_irreducible, FieldSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.from_u64(2).inv().unwrap(), f5.from_u64(3));
        assert_eq!(f5.zero().inv(), Err(FieldError::DivisionByZero));

        let f9 = FieldSpec::extension(3, RingPoly::new(3, vec![1, 0, 1])).unwrap();
        let x = f9.generator().unwrap();
        assert_eq!(&x * &x, f9.from_u64(2));
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = FieldSpec::prime(5).unwrap().one();
        let b = FieldSpec::prime(7).unwrap().one();
        assert_eq!(a.try_add(&b), Err(FieldError::FieldMismatch));
    }

    #[test]
    fn wide_characteristic_extension() {
        // 2^61 - 1 is prime; x^2 - 3 is irreducible there (3 is a non-residue).
        let p = (1u64 << 61) - 1;
        let f = FieldSpec::extension(p, RingPoly::from_signed(p, &[-3, 0, 1])).unwrap();
        assert!(!f.narrow());
        let x = f.generator().unwrap();
        assert_eq!(&x * &x, f.from_u64(3));
        let a = f.element(&[p - 5, 12345]).unwrap();
        assert!((&a * &a.inv().unwrap()).is_one());
    }

    fn axioms(field: &FieldSpec, cases: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = field.order().unwrap() as u128;
        let p = field.characteristic() as u128;
        for _ in 0..cases {
            let a = field.random_element(&mut rng);
            let b = field.random_element(&mut rng);
            let c = field.random_element(&mut rng);
            assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            assert_eq!(&(&a - &b) + &b, a);
            assert_eq!(&a + &(-&a), field.zero());
            if !a.is_zero() {
                assert!((&a * &a.inv().unwrap()).is_one());
                assert!(a.pow(q - 1).is_one());
            }
            // Frobenius
            assert_eq!((&a + &b).pow(p), &a.pow(p) + &b.pow(p));
        }
    }

    #[test]
    fn field_axioms_on_random_triples() {
        for (p, d) in [(3u64, 1usize), (3, 2), (3, 8), (3, 12), (5, 4), (2309, 1), (2309, 2), (2, 8)] {
            let field = if d == 1 {
                FieldSpec::prime(p).unwrap()
            } else {
                FieldSpec::extension(p, find_irreducible(p, d, 7).unwrap()).unwrap()
            };
            axioms(&field, 10_000, p * 31 + d as u64);
        }
    }
}
