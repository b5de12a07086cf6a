//! Exact arithmetic in `F_p`, explicit extensions `F_p[x]/(mu)`, and the plain
//! polynomial ring `F_p[x]`.

mod element;
mod irreducible;
pub mod prime;
mod ring;

pub use element::FieldElement;
pub use irreducible::{find_irreducible, is_irreducible};
pub use ring::{Degree, RingPoly};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus must have degree at least 1")]
    ConstantModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("characteristic mismatch: {left} vs {right}")]
    CharacteristicMismatch { left: u64, right: u64 },
    #[error("polynomial division was not exact")]
    InexactDivision,
    #[error("invalid element for F_{p}^{d}: {reason}")]
    InvalidElement { p: u64, d: usize, reason: String },
    #[error("field order {p}^{d} does not fit in 64 bits")]
    OrderOverflow { p: u64, d: usize },
}

#[derive(Debug, PartialEq, Eq)]
struct FieldInner {
    p: u64,
    d: usize,
    /// Monic modulus, `None` for prime fields.
    modulus: Option<RingPoly>,
    /// `(p - mu_j) mod p`, used when folding high coefficients back down.
    neg_modulus: Vec<u64>,
    /// Products and folds can be accumulated in u64 before reducing.
    narrow: bool,
}

/// A finite field `F_p` or `F_p[x]/(mu)`; cheap to clone and share.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldInner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.modulus {
            None => write!(f, "F_{}", self.0.p),
            Some(m) => write!(f, "F_{}^{} mod ({})", self.0.p, self.0.d, m),
        }
    }
}

impl FieldSpec {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if !prime::is_prime(p) {
            return Err(FieldError::CompositeCharacteristic(p));
        }
        Ok(Self::build(p, None))
    }

    /// The extension `F_p[x]/(mu)`; `mu` must be monic and irreducible.
    pub fn extension(p: u64, mu: RingPoly) -> Result<Self, FieldError> {
        if !prime::is_prime(p) {
            return Err(FieldError::CompositeCharacteristic(p));
        }
        if mu.characteristic() != p {
            return Err(FieldError::CharacteristicMismatch {
                left: p,
                right: mu.characteristic(),
            });
        }
        if !matches!(mu.degree(), Degree::Finite(d) if d >= 1) {
            return Err(FieldError::ConstantModulus);
        }
        if !mu.is_monic() {
            return Err(FieldError::NotMonic);
        }
        if !is_irreducible(&mu)? {
            return Err(FieldError::ReducibleModulus(p));
        }
        Ok(Self::build(p, Some(mu)))
    }

    /// `F_{p^d}` with a seeded irreducible modulus.
    pub fn with_degree(p: u64, d: usize, seed: u64) -> Result<Self, FieldError> {
        if d == 1 {
            return Self::prime(p);
        }
        let mu = find_irreducible(p, d, seed)?;
        Self::extension(p, mu)
    }

    fn build(p: u64, modulus: Option<RingPoly>) -> Self {
        let d = modulus
            .as_ref()
            .and_then(|m| m.degree().finite())
            .unwrap_or(1);
        let neg_modulus = modulus
            .as_ref()
            .map(|m| (0..d).map(|j| (p - m.coeff(j)) % p).collect())
            .unwrap_or_default();
        let p2 = p as u128 * p as u128;
        let narrow = p2 * (d as u128 + 1) < (1u128 << 63);
        FieldSpec(Arc::new(FieldInner {
            p,
            d,
            modulus,
            neg_modulus,
            narrow,
        }))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.d
    }

    pub fn modulus(&self) -> Option<&RingPoly> {
        self.0.modulus.as_ref()
    }

    /// Field order `q = p^d`.
    pub fn order(&self) -> Result<u64, FieldError> {
        (self.0.p as u128)
            .checked_pow(self.0.d as u32)
            .filter(|&q| q <= u64::MAX as u128)
            .map(|q| q as u64)
            .ok_or(FieldError::OrderOverflow {
                p: self.0.p,
                d: self.0.d,
            })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_parts(self.clone(), smallvec::smallvec![0; self.0.d])
    }

    pub fn one(&self) -> FieldElement {
        self.from_u64(1)
    }

    /// The image of the integer `c` in the prime subfield.
    pub fn from_u64(&self, c: u64) -> FieldElement {
        let mut e = self.zero();
        e.coeffs_mut()[0] = c % self.0.p;
        e
    }

    /// The image of a signed integer in the prime subfield.
    pub fn from_i64(&self, c: i64) -> FieldElement {
        self.from_u64((c as i128).rem_euclid(self.0.p as i128) as u64)
    }

    /// The class of `x` (the adjoined root), or `None` for prime fields.
    pub fn generator(&self) -> Option<FieldElement> {
        (self.0.d > 1).then(|| {
            let mut e = self.zero();
            e.coeffs_mut()[1] = 1;
            e
        })
    }

    /// Validates a little-endian coefficient vector of length `d`.
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        let bad = |reason: String| FieldError::InvalidElement {
            p: self.0.p,
            d: self.0.d,
            reason,
        };
        if coeffs.len() != self.0.d {
            return Err(bad(format!("expected {} coefficients, got {}", self.0.d, coeffs.len())));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.0.p) {
            return Err(bad(format!("coefficient {c} not reduced")));
        }
        Ok(FieldElement::from_parts(self.clone(), coeffs.into()))
    }

    /// Reduces a polynomial over `F_p` into the field.
    pub fn from_ring(&self, f: &RingPoly) -> Result<FieldElement, FieldError> {
        if f.characteristic() != self.0.p {
            return Err(FieldError::CharacteristicMismatch {
                left: self.0.p,
                right: f.characteristic(),
            });
        }
        let r = match &self.0.modulus {
            Some(m) => f.rem(m)?,
            None if f.degree() <= Degree::Finite(0) => f.clone(),
            None => {
                return Err(FieldError::InvalidElement {
                    p: self.0.p,
                    d: 1,
                    reason: "non-constant polynomial has no image in a prime field".into(),
                })
            }
        };
        let mut e = self.zero();
        for (i, c) in r.coeffs().iter().enumerate() {
            e.coeffs_mut()[i] = *c;
        }
        Ok(e)
    }

    /// Element whose base-`p` digits (least significant first) are `index`.
    pub fn element_from_index(&self, mut index: u64) -> FieldElement {
        let mut e = self.zero();
        for c in e.coeffs_mut().iter_mut() {
            *c = index % self.0.p;
            index /= self.0.p;
        }
        e
    }

    /// Inverse of [`element_from_index`](Self::element_from_index).
    pub fn index_of(&self, e: &FieldElement) -> u64 {
        e.coeffs()
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.0.p + c)
    }

    /// Every element in index order; only sensible for small fields.
    pub fn elements(&self) -> Result<impl Iterator<Item = FieldElement> + '_, FieldError> {
        let q = self.order()?;
        Ok((0..q).map(move |i| self.element_from_index(i)))
    }

    pub fn random_element<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let mut e = self.zero();
        for c in e.coeffs_mut().iter_mut() {
            *c = rng.random_range(0..self.0.p);
        }
        e
    }

    pub(crate) fn p(&self) -> u64 {
        self.0.p
    }

    pub(crate) fn d(&self) -> usize {
        self.0.d
    }

    pub(crate) fn neg_modulus(&self) -> &[u64] {
        &self.0.neg_modulus
    }

    pub(crate) fn narrow(&self) -> bool {
        self.0.narrow
    }
}

/// Wire form: `{"p": <int>, "d": <int>, "modulus": [c_0, ..., c_d] | null}`.
#[derive(Serialize, Deserialize)]
struct FieldSpecWire {
    p: u64,
    d: usize,
    #[serde(default)]
    modulus: Option<Vec<u64>>,
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FieldSpecWire {
            p: self.0.p,
            d: self.0.d,
            modulus: self.0.modulus.as_ref().map(|m| m.coeffs().to_vec()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = FieldSpecWire::deserialize(de)?;
        let spec = match (w.d, w.modulus) {
            (1, None) => FieldSpec::prime(w.p),
            (_, None) => return Err(D::Error::custom("extension field requires a modulus")),
            (d, Some(m)) => {
                if m.iter().any(|&c| c >= w.p) {
                    return Err(D::Error::custom("modulus coefficient not reduced"));
                }
                let mu = RingPoly::new(w.p, m);
                if mu.degree() != Degree::Finite(d) {
                    return Err(D::Error::custom("modulus degree does not match d"));
                }
                FieldSpec::extension(w.p, mu)
            }
        };
        spec.map_err(D::Error::custom)
    }
}
