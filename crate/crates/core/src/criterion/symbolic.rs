//! Integer polynomials in the indeterminates `X_1, .., X_n`, used to expand
//! `det V_{I,J}(X)` exactly for small `k`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::matrix::Matrix;
use super::{check_pair_shape, CriterionError, IncreasingVector};
use crate::field::{FieldElement, FieldError};

/// Variable index (1-based) to exponent; absent variables have exponent 0.
pub type Monomial = BTreeMap<usize, u32>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct MultiPoly {
    #[serde(serialize_with = "serialize_terms")]
    terms: BTreeMap<Monomial, i64>,
}

fn serialize_terms<S: serde::Serializer>(
    terms: &BTreeMap<Monomial, i64>,
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(terms.len()))?;
    for (mono, c) in terms {
        let vars: Vec<(usize, u32)> = mono.iter().map(|(&v, &e)| (v, e)).collect();
        seq.serialize_element(&(c, vars))?;
    }
    seq.end()
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(Monomial::new(), c);
        }
        MultiPoly { terms }
    }

    /// `X_var^exp`.
    pub fn var_power(var: usize, exp: u32) -> Self {
        let mut mono = Monomial::new();
        if exp > 0 {
            mono.insert(var, exp);
        }
        let mut terms = BTreeMap::new();
        terms.insert(mono, 1);
        MultiPoly { terms }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.values().sum()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (mono, &c) in &other.terms {
            let entry = terms.entry(mono.clone()).or_insert(0);
            *entry += c;
            if *entry == 0 {
                terms.remove(mono);
            }
        }
        MultiPoly { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = MultiPoly::zero();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let mut mono = ma.clone();
                for (&v, &e) in mb {
                    *mono.entry(v).or_insert(0) += e;
                }
                let entry = out.terms.entry(mono.clone()).or_insert(0);
                *entry += ca * cb;
                if *entry == 0 {
                    out.terms.remove(&mono);
                }
            }
        }
        out
    }

    /// Evaluates at `X_v = point(v)`, reducing coefficients into the field.
    pub fn eval<F>(&self, zero: &FieldElement, point: F) -> Result<FieldElement, FieldError>
    where
        F: Fn(usize) -> FieldElement,
    {
        let mut acc = zero.clone();
        for (mono, &c) in &self.terms {
            let mut term = zero.field().from_i64(c);
            for (&v, &e) in mono {
                term = term.try_mul(&point(v).pow(e as u128))?;
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }
}

/// Exact expansion of `det V_{I,J}(X)`; limited to `k <= 3` (a 5 x 5 matrix).
pub fn symbolic_determinant(
    i: &IncreasingVector,
    j: &IncreasingVector,
    k: usize,
) -> Result<MultiPoly, CriterionError> {
    if k > 3 {
        return Err(CriterionError::DimensionTooLarge { k });
    }
    check_pair_shape(i, j, k)?;
    let rows = i
        .as_slice()
        .iter()
        .zip(j.as_slice())
        .map(|(&a, &b)| {
            let mut row: Vec<MultiPoly> = (0..k as u32).map(|e| MultiPoly::var_power(a, e)).collect();
            row.extend((1..k as u32).map(|e| MultiPoly::var_power(b, e)));
            row
        })
        .collect();
    Ok(Matrix::from_rows(rows).determinant())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn iv(v: &[usize]) -> IncreasingVector {
        IncreasingVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn k2_expansion_is_the_cross_difference() {
        // det [[1,x1,y1],[1,x2,y2],[1,x3,y3]] with x=(1,2,3), y=(2,3,4)
        let det = symbolic_determinant(&iv(&[1, 2, 3]), &iv(&[2, 3, 4]), 2).unwrap();
        let f = FieldSpec::prime(101).unwrap();
        let pts: Vec<_> = [5u64, 17, 33, 60].iter().map(|&v| f.from_u64(v)).collect();
        let val = det.eval(&f.zero(), |v| pts[v - 1].clone()).unwrap();
        let (x1, x2, x3) = (&pts[0], &pts[1], &pts[2]);
        let (y1, y2, y3) = (&pts[1], &pts[2], &pts[3]);
        let expect = &(&(y1 - y2) * &(x2 - x3)) - &(&(y2 - y3) * &(x1 - x2));
        assert_eq!(val, -expect);
    }

    #[test]
    fn dimension_cap() {
        let i = iv(&[1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(
            symbolic_determinant(&i, &i, 4),
            Err(CriterionError::DimensionTooLarge { k: 4 })
        );
    }

    #[test]
    fn arithmetic() {
        let x = MultiPoly::var_power(1, 1);
        let y = MultiPoly::var_power(2, 1);
        let s = x.add(&y);
        let d = x.add(&y.mul(&MultiPoly::constant(-1)));
        let prod = s.mul(&d);
        let expect = MultiPoly::var_power(1, 2).add(&MultiPoly::var_power(2, 2).mul(&MultiPoly::constant(-1)));
        assert_eq!(prod, expect);
        assert_eq!(prod.total_degree(), Some(2));
        assert!(x.add(&x.mul(&MultiPoly::constant(-1))).is_zero());
    }
}
