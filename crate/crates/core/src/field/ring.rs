//! Dense univariate polynomials over a prime field, `F_p[x]`, with no modulus.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::prime::{inv_mod, mul_mod};
use super::{FieldElement, FieldError};

/// Degree of a polynomial; the zero polynomial sits below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Polynomial over `F_p`, little-endian coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingPoly {
    p: u64,
    coeffs: Vec<u64>,
}

/// Below this length both operands are multiplied schoolbook.
const KARATSUBA_CUTOFF: usize = 256;

impl RingPoly {
    /// Builds a polynomial from arbitrary coefficients, reducing them mod `p`.
    pub fn new(p: u64, coeffs: impl Into<Vec<u64>>) -> Self {
        let mut coeffs = coeffs.into();
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        Self::from_reduced(p, coeffs)
    }

    /// Signed coefficients, e.g. `x^2 - 1` as `[-1, 0, 1]`.
    pub fn from_signed(p: u64, coeffs: &[i64]) -> Self {
        let pi = p as i128;
        let v: Vec<u64> = coeffs
            .iter()
            .map(|&c| (c as i128).rem_euclid(pi) as u64)
            .collect();
        Self::from_reduced(p, v)
    }

    pub(crate) fn from_reduced(p: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        RingPoly { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        RingPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, 1)
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::new(p, vec![c])
    }

    /// The indeterminate `x`.
    pub fn x(p: u64) -> Self {
        Self::monomial(p, 1, 1)
    }

    pub fn monomial(p: u64, c: u64, exp: usize) -> Self {
        let mut v = vec![0; exp + 1];
        v[exp] = c;
        Self::new(p, v)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(FieldError::CharacteristicMismatch {
                left: self.p,
                right: other.p,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| {
                let s = self.coeff(i) + other.coeff(i);
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect();
        Ok(Self::from_reduced(p, v))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| {
                let (a, b) = (self.coeff(i), other.coeff(i));
                if a >= b {
                    a - b
                } else {
                    a + p - b
                }
            })
            .collect();
        Ok(Self::from_reduced(p, v))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.p));
        }
        let v = mul_slices(&self.coeffs, &other.coeffs, self.p);
        Ok(Self::from_reduced(self.p, v))
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.p;
        let v = self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect();
        Self::from_reduced(self.p, v)
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = Self::one(self.p);
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

    /// Euclidean division; errors on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), FieldError> {
        self.check(divisor)?;
        if divisor.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let p = self.p;
        let dl = divisor.coeffs.len();
        if self.coeffs.len() < dl {
            return Ok((Self::zero(p), self.clone()));
        }
        let lead_inv = inv_mod(divisor.leading_coeff(), p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dl + 1];
        for i in (0..quot.len()).rev() {
            let c = mul_mod(rem[i + dl - 1], lead_inv, p);
            quot[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &dj) in divisor.coeffs.iter().enumerate() {
                let t = mul_mod(c, dj, p);
                let r = &mut rem[i + j];
                *r = if *r >= t { *r - t } else { *r + p - t };
            }
        }
        rem.truncate(dl - 1);
        Ok((Self::from_reduced(p, quot), Self::from_reduced(p, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self, FieldError> {
        self.div_rem(divisor).map(|(_, r)| r)
    }

    /// Division that is known to be exact (used by fraction-free elimination).
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, FieldError> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(FieldError::InexactDivision);
        }
        Ok(q)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading_coeff(), self.p))
    }

    /// `self * other mod modulus`.
    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Result<Self, FieldError> {
        self.try_mul(other)?.rem(modulus)
    }

    /// `self^exp mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, mut exp: u128, modulus: &Self) -> Result<Self, FieldError> {
        let mut acc = Self::one(self.p).rem(modulus)?;
        let mut base = self.rem(modulus)?;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod(&base, modulus)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_mod(&base, modulus)?;
            }
        }
        Ok(acc)
    }

    /// Inverse of `self` modulo `modulus`, if they are coprime.
    pub fn inverse_mod(&self, modulus: &Self) -> Result<Option<Self>, FieldError> {
        self.check(modulus)?;
        let p = self.p;
        let (mut r0, mut r1) = (modulus.clone(), self.rem(modulus)?);
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let t = t0.try_sub(&q.try_mul(&t1)?)?;
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.degree() != Degree::Finite(0) {
            return Ok(None);
        }
        let c = inv_mod(r0.leading_coeff(), p);
        Ok(Some(t0.scale(c).rem(modulus)?))
    }

    /// Horner evaluation at an element of any field of the same characteristic.
    pub fn eval_at(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        let field = a.field();
        if field.characteristic() != self.p {
            return Err(FieldError::CharacteristicMismatch {
                left: self.p,
                right: field.characteristic(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .rev()
            .fold(field.zero(), |acc, &c| &(&acc * a) + &field.from_u64(c)))
    }

    /// Horner evaluation at an element of the prime field.
    pub fn eval(&self, x: u64) -> u64 {
        let x = x % self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }
}

impl fmt::Display for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

macro_rules! ring_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&RingPoly> for &RingPoly {
            type Output = RingPoly;
            fn $method(self, rhs: &RingPoly) -> RingPoly {
                self.$inner(rhs).expect("ring operands of different characteristic")
            }
        }
        impl $tr<RingPoly> for RingPoly {
            type Output = RingPoly;
            fn $method(self, rhs: RingPoly) -> RingPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

ring_binop!(Add, add, try_add);
ring_binop!(Sub, sub, try_sub);
ring_binop!(Mul, mul, try_mul);

impl Neg for &RingPoly {
    type Output = RingPoly;
    fn neg(self) -> RingPoly {
        RingPoly::zero(self.p).try_sub(self).unwrap()
    }
}

/// Product of two nonempty coefficient slices over `F_p`.
pub(crate) fn mul_slices(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.len().min(b.len()) <= KARATSUBA_CUTOFF {
        schoolbook(a, b, p)
    } else {
        karatsuba(a, b, p)
    }
}

fn schoolbook(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    let terms = a.len().min(b.len()) as u128;
    let p128 = p as u128;
    if p128 * p128 * terms < (1u128 << 63) {
        // Every partial sum fits in u64, reduce once per output coefficient.
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (o, &y) in out[i..].iter_mut().zip(b) {
                *o += x * y;
            }
        }
        for o in out.iter_mut() {
            *o %= p;
        }
    } else {
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                let s = out[i + j] + mul_mod(x, y, p);
                out[i + j] = if s >= p { s - p } else { s };
            }
        }
    }
    out
}

fn add_into(acc: &mut [u64], src: &[u64], p: u64) {
    for (a, &s) in acc.iter_mut().zip(src) {
        let t = *a + s;
        *a = if t >= p { t - p } else { t };
    }
}

fn sub_into(acc: &mut [u64], src: &[u64], p: u64) {
    for (a, &s) in acc.iter_mut().zip(src) {
        *a = if *a >= s { *a - s } else { *a + p - s };
    }
}

fn karatsuba(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.len().min(b.len()) <= KARATSUBA_CUTOFF {
        return schoolbook(a, b, p);
    }
    let h = a.len().max(b.len()) / 2;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    if a.len() <= h || b.len() <= h {
        // Lopsided: split only the longer operand.
        let (short, long) = if a.len() <= h { (a, b) } else { (b, a) };
        let lo = mul_slices(short, &long[..h], p);
        let hi = mul_slices(short, &long[h..], p);
        add_into(&mut out, &lo, p);
        add_into(&mut out[h..], &hi, p);
        return out;
    }
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = mul_slices(a0, b0, p);
    let z2 = mul_slices(a1, b1, p);
    let sum = |lo: &[u64], hi: &[u64]| {
        let mut s = lo.to_vec();
        s.resize(lo.len().max(hi.len()), 0);
        add_into(&mut s, hi, p);
        s
    };
    let mut z1 = mul_slices(&sum(a0, a1), &sum(b0, b1), p);
    sub_into(&mut z1, &z0, p);
    sub_into(&mut z1, &z2, p);
    add_into(&mut out, &z0, p);
    add_into(&mut out[h..], &z1, p);
    add_into(&mut out[2 * h..], &z2, p);
    out
}
