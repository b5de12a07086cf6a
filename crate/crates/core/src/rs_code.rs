//! Reed–Solomon codes: evaluation vectors, encoding, interpolation, and rates.

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RsError {
    #[error("need 1 <= k and 2k - 1 <= n (got n = {n}, k = {k})")]
    InvalidDimension { n: usize, k: usize },
    #[error("length {n} exceeds the field order {q}")]
    TooLong { n: usize, q: u64 },
    #[error("evaluation points {i} and {j} coincide")]
    RepeatedEvaluationPoint { i: usize, j: usize },
    #[error("interpolation points share an x-coordinate")]
    DuplicatePoint,
    #[error("expected {expected} values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An `[n, k]` Reed–Solomon code given by its evaluation vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsCode {
    field: FieldSpec,
    k: usize,
    alphas: Vec<FieldElement>,
}

/// A message polynomial `f_0 + f_1 x + ... + f_{k-1} x^{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MessagePoly {
    coeffs: Vec<FieldElement>,
}

/// Rate, relative insdel radius and the half-Singleton right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RateReport {
    pub rate: Ratio<u64>,
    pub delta: Ratio<u64>,
    pub half_singleton_rhs: Ratio<u64>,
}

impl RsCode {
    pub fn new(field: FieldSpec, k: usize, alphas: Vec<FieldElement>) -> Result<Self, RsError> {
        let n = alphas.len();
        if k == 0 || 2 * k - 1 > n {
            return Err(RsError::InvalidDimension { n, k });
        }
        if let Ok(q) = field.order() {
            if n as u64 > q {
                return Err(RsError::TooLong { n, q });
            }
        }
        if alphas.iter().any(|a| a.field() != &field) {
            return Err(FieldError::FieldMismatch.into());
        }
        let mut seen = std::collections::HashMap::with_capacity(n);
        for (j, a) in alphas.iter().enumerate() {
            if let Some(i) = seen.insert(a.clone(), j) {
                return Err(RsError::RepeatedEvaluationPoint { i: i + 1, j: j + 1 });
            }
        }
        Ok(RsCode { field, k, alphas })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alphas(&self) -> &[FieldElement] {
        &self.alphas
    }

    pub fn encode(&self, f: &MessagePoly) -> Result<Vec<FieldElement>, RsError> {
        if f.coeffs.len() != self.k {
            return Err(RsError::WrongLength {
                expected: self.k,
                got: f.coeffs.len(),
            });
        }
        if f.coeffs.iter().any(|c| c.field() != &self.field) {
            return Err(FieldError::FieldMismatch.into());
        }
        Ok(self.alphas.iter().map(|a| f.eval(a)).collect())
    }

    /// The insdel radius `n - 2k + 1` the construction is meant to attain.
    pub fn correction_radius(&self) -> usize {
        self.n() + 1 - 2 * self.k
    }

    pub fn rate_report(&self) -> RateReport {
        let n = self.n() as u64;
        let k = self.k as u64;
        let rate = Ratio::new(k, n);
        let delta = Ratio::new(self.correction_radius() as u64, n);
        let half_singleton_rhs = (Ratio::from_integer(1) - delta) / 2;
        RateReport {
            rate,
            delta,
            half_singleton_rhs,
        }
    }

    /// Every message polynomial in index order; `q^k` of them.
    pub fn messages(&self) -> Result<impl Iterator<Item = MessagePoly> + '_, FieldError> {
        let q = self.field.order()?;
        let total = (q as u128)
            .checked_pow(self.k as u32)
            .filter(|&t| t <= u64::MAX as u128)
            .ok_or(FieldError::OrderOverflow {
                p: q,
                d: self.k,
            })? as u64;
        Ok((0..total).map(move |mut idx| {
            let coeffs = (0..self.k)
                .map(|_| {
                    let c = self.field.element_from_index(idx % q);
                    idx /= q;
                    c
                })
                .collect();
            MessagePoly { coeffs }
        }))
    }
}

impl MessagePoly {
    pub fn new(coeffs: Vec<FieldElement>) -> Result<Self, RsError> {
        if let Some(first) = coeffs.first() {
            if coeffs.iter().any(|c| c.field() != first.field()) {
                return Err(FieldError::FieldMismatch.into());
            }
        }
        Ok(MessagePoly { coeffs })
    }

    pub fn zero(field: &FieldSpec, k: usize) -> Self {
        MessagePoly {
            coeffs: vec![field.zero(); k],
        }
    }

    pub fn random<R: rand::Rng + ?Sized>(field: &FieldSpec, k: usize, rng: &mut R) -> Self {
        MessagePoly {
            coeffs: (0..k).map(|_| field.random_element(rng)).collect(),
        }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn k(&self) -> usize {
        self.coeffs.len()
    }

    /// Horner evaluation; `x` must come from the coefficients' field.
    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = x.field().zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Decodes the wire form (array of coefficient arrays).
    pub fn from_wire(field: &FieldSpec, coeffs: &[Vec<u64>]) -> Result<Self, RsError> {
        let coeffs = coeffs
            .iter()
            .map(|c| field.element(c))
            .collect::<Result<_, _>>()?;
        Ok(MessagePoly { coeffs })
    }
}

impl Serialize for MessagePoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

/// Lagrange interpolation of the unique polynomial of degree `< k` through
/// exactly `k` points with distinct x-coordinates.
pub fn interpolate(points: &[(FieldElement, FieldElement)], k: usize) -> Result<MessagePoly, RsError> {
    if points.len() != k {
        return Err(RsError::WrongLength {
            expected: k,
            got: points.len(),
        });
    }
    let Some((x0, _)) = points.first() else {
        return Ok(MessagePoly { coeffs: Vec::new() });
    };
    let field = x0.field().clone();
    for (i, (xi, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(xj, _)| xj == xi) {
            return Err(RsError::DuplicatePoint);
        }
    }
    let mut result = vec![field.zero(); k];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis numerator prod_{j != i} (x - x_j), built up coefficient-wise
        let mut basis = vec![field.one()];
        let mut denom = field.one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![field.zero(); basis.len() + 1];
            for (t, b) in basis.iter().enumerate() {
                next[t + 1] = &next[t + 1] + b;
                next[t] = &next[t] - &(b * xj);
            }
            basis = next;
            denom = denom.try_mul(&xi.try_sub(xj)?)?;
        }
        let scale = yi.try_mul(&denom.inv()?)?;
        for (r, b) in result.iter_mut().zip(&basis) {
            *r = &*r + &(b * &scale);
        }
    }
    Ok(MessagePoly { coeffs: result })
}

/// Wire form: `{"field": <FieldSpec>, "n": int, "k": int, "alphas": [[...], ...]}`.
#[derive(Serialize, Deserialize)]
pub(crate) struct RsCodeWire {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub alphas: Vec<Vec<u64>>,
}

impl Serialize for RsCode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RsCodeWire {
            field: self.field.clone(),
            n: self.n(),
            k: self.k,
            alphas: self.alphas.iter().map(|a| a.coeffs().to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RsCode {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = RsCodeWire::deserialize(de)?;
        if w.alphas.len() != w.n {
            return Err(D::Error::custom(format!(
                "n = {} but {} evaluation points given",
                w.n,
                w.alphas.len()
            )));
        }
        let alphas = w
            .alphas
            .iter()
            .map(|a| w.field.element(a))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        RsCode::new(w.field, w.k, alphas).map_err(D::Error::custom)
    }
}
