//! Evaluation-point constructions and the field-size lower bound.

mod abc;
mod parity;
mod random;
mod sidon;

pub use abc::{construct_abc, verify_abc, AbcArtifact, AbcParams, ABC_WORK_CAP};
pub use parity::{construct_parity_check, ParityMatrix};
pub use random::{random_construction, RandomConstruction};
pub use sidon::{construct_sidon, is_sidon, is_sidon_basis, SidonSpace, SIDON_ENUMERATION_CAP};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criterion::CriterionError;
use crate::field::{FieldElement, FieldError};
use crate::rs_code::{RsCode, RsError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("parameter m = {0} is outside the supported range 1..=3")]
    UnsupportedM(usize),
    #[error("no valid candidate after {tried} tries")]
    SearchExhausted { tried: u64 },
    #[error("space has {size} elements, above the enumeration cap {cap}")]
    TooLargeToEnumerate { size: u64, cap: u64 },
    #[error("k = {k} needs polynomials of degree {ell}; pass force to run it anyway")]
    WorkCapExceeded { k: usize, ell: u64 },
    #[error("parameters overflow 64-bit arithmetic")]
    Overflow,
    #[error("need 2k - 1 < n <= p, got k = {k}, n = {n}, p = {p}")]
    InvalidAbcLength { k: usize, n: usize, p: u64 },
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of size {q} has fewer than n = {n} points")]
    FieldTooSmall { q: u64, n: usize },
    #[error("no passing code in {attempts} attempts ({failed} failed verification)")]
    AttemptsExhausted { attempts: u64, failed: u64 },
    #[error("lower bound is degenerate for k = {0}")]
    DegenerateDimension(usize),
    #[error("independence check failed: columns {0:?} are dependent over F_3")]
    DependentQuadruple(Vec<usize>),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Code(#[from] RsError),
    #[error(transparent)]
    Criterion(#[from] CriterionError),
}

/// Where an artifact came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    pub params: serde_json::Value,
    pub seed: u64,
}

/// A code plus the record of how it was built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeArtifact {
    #[serde(flatten)]
    pub code: RsCode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

/// Output of the `k = 2` construction over `F_{3^{4m}}`.
#[derive(Clone, Debug)]
pub struct K2Construction {
    pub code: RsCode,
    pub sidon: SidonSpace,
    pub parity: ParityMatrix,
}

impl K2Construction {
    pub fn artifact(&self, seed: u64) -> CodeArtifact {
        CodeArtifact {
            code: self.code.clone(),
            provenance: Some(Provenance {
                construction: "sidon-k2".into(),
                params: serde_json::json!({
                    "m": self.sidon.m(),
                    "gamma": self.sidon.gamma(),
                    "parity": self.parity,
                }),
                seed,
            }),
        }
    }
}

/// Dimension-2 code of length `(3^m + 1)/2` over `F_{3^{4m}}`.
///
/// The points are `alpha_j = sum_i s_i h_{i,j}` where `s_i` spans a Sidon
/// space and the columns of `H` are 4-wise independent over `F_3`.
pub fn construct_k2(m: usize, seed: u64) -> Result<K2Construction, ConstructionError> {
    if !(1..=3).contains(&m) {
        return Err(ConstructionError::UnsupportedM(m));
    }
    let sidon = construct_sidon(m, seed)?;
    let parity = construct_parity_check(m, seed)?;
    let field = sidon.field().clone();
    let alphas: Vec<FieldElement> = (0..parity.cols())
        .map(|j| {
            sidon
                .basis()
                .iter()
                .enumerate()
                .fold(field.zero(), |acc, (i, s)| &acc + &s.scale(parity.digit(i, j) as u64))
        })
        .collect();
    if let Some(bad) = dependent_quadruple(&alphas) {
        return Err(ConstructionError::DependentQuadruple(bad));
    }
    let code = RsCode::new(field, 2, alphas)?;
    Ok(K2Construction { code, sidon, parity })
}

/// First 4-subset (1-based) of the points that is dependent over `F_3`.
pub fn dependent_quadruple(points: &[FieldElement]) -> Option<Vec<usize>> {
    use itertools::Itertools;
    let vecs: Vec<Vec<u64>> = points.iter().map(|a| a.coeffs().to_vec()).collect();
    (0..vecs.len())
        .combinations(4.min(vecs.len()))
        .find(|q| f3_rank(q.iter().map(|&i| vecs[i].clone()).collect()) < q.len())
        .map(|q| q.iter().map(|i| i + 1).collect())
}

/// Rank over `F_3` of a set of equal-length digit vectors.
pub(crate) fn f3_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] % 3 != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        // 1 and 2 are their own inverses mod 3
        let inv = rows[rank][col] % 3;
        for v in rows[rank].iter_mut() {
            *v = *v * inv % 3;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] % 3 != 0 {
                let f = rows[r][col] % 3;
                for c in 0..width {
                    rows[r][c] = (rows[r][c] + 3 - f * rows[rank][c] % 3) % 3;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The bound `q >= 1/2 (n / ((2k-1)(k-1)))^{(2k-1)/(k-1)}` on the field
/// size of any code correcting `n - 2k + 1` insdel errors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowerBound {
    pub value: f64,
    /// Exact value when the exponent is an integer (`k = 2`).
    pub exact: Option<Ratio<u128>>,
}

impl Serialize for LowerBound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let exact = self.exact.map(|r| serde_json::json!([r.numer().to_string(), r.denom().to_string()]));
        serde_json::json!({ "value": self.value, "exact": exact }).serialize(s)
    }
}

pub fn field_size_lower_bound(n: u64, k: u64) -> Result<LowerBound, ConstructionError> {
    if k < 2 {
        return Err(ConstructionError::DegenerateDimension(k as usize));
    }
    let c = ((2 * k - 1) * (k - 1)) as f64;
    let exponent = (2 * k - 1) as f64 / (k - 1) as f64;
    let value = 0.5 * (n as f64 / c).powf(exponent);
    let exact = (k == 2).then(|| {
        let n = n as u128;
        Ratio::new(n * n * n, 54)
    });
    Ok(LowerBound { value, exact })
}
