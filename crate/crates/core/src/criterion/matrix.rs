//! The `(2k-1) x (2k-1)` matrices `V_{I,J}` and their determinants over the
//! three entry domains: field elements, `F_p[x]`, and integer polynomials.

use super::symbolic::MultiPoly;
use super::{CriterionError, IncreasingVector};
use crate::field::{FieldElement, RingPoly};

/// Entry types a criterion matrix can be built from.
pub trait Entry: Clone {
    fn one_like(&self) -> Self;
    fn times(&self, other: &Self) -> Self;
}

impl Entry for FieldElement {
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

impl Entry for RingPoly {
    fn one_like(&self) -> Self {
        RingPoly::one(self.characteristic())
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

impl Entry for MultiPoly {
    fn one_like(&self) -> Self {
        MultiPoly::one()
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
}

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: Vec<Vec<E>>,
}

impl<E> Matrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == rows.len()));
        Matrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<E>] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.rows[r][c]
    }
}

/// `points[i][e] = alpha_{i+1}^e` for `e < k`.
#[derive(Clone, Debug)]
pub(crate) struct PowerTable<E> {
    powers: Vec<Vec<E>>,
}

impl<E: Entry> PowerTable<E> {
    pub(crate) fn new(points: &[E], k: usize) -> Self {
        let powers = points
            .iter()
            .map(|a| {
                let mut row = Vec::with_capacity(k);
                row.push(a.one_like());
                for e in 1..k {
                    let next = row[e - 1].times(a);
                    row.push(next);
                }
                row
            })
            .collect();
        PowerTable { powers }
    }

    /// Row `r` is `(1, a, .., a^{k-1}, b, .., b^{k-1})` with `a = alpha_{I_r}`,
    /// `b = alpha_{J_r}`.
    pub(crate) fn matrix(&self, i: &[usize], j: &[usize], k: usize) -> Matrix<E> {
        let rows = i
            .iter()
            .zip(j)
            .map(|(&a, &b)| {
                let pa = &self.powers[a - 1];
                let pb = &self.powers[b - 1];
                let mut row = Vec::with_capacity(2 * k - 1);
                row.extend(pa.iter().cloned());
                row.extend(pb[1..].iter().cloned());
                row
            })
            .collect();
        Matrix { rows }
    }
}

/// Builds `V_{I,J}(alpha)`; indices in `I`, `J` are 1-based.
pub fn build_matrix<E: Entry>(
    alphas: &[E],
    i: &IncreasingVector,
    j: &IncreasingVector,
    k: usize,
) -> Result<Matrix<E>, CriterionError> {
    let s = 2 * k - 1;
    for v in [i, j] {
        if v.len() != s {
            return Err(CriterionError::WrongLength {
                expected: s,
                got: v.len(),
            });
        }
        if let Some(&bad) = v.as_slice().iter().find(|&&x| x > alphas.len()) {
            return Err(CriterionError::IndexOutOfRange {
                index: bad,
                n: alphas.len(),
            });
        }
    }
    // only the points that appear are needed
    let table = PowerTable::new(alphas, k);
    Ok(table.matrix(i.as_slice(), j.as_slice(), k))
}

impl Matrix<FieldElement> {
    /// Gaussian elimination with exact inverses.
    pub fn determinant(&self) -> FieldElement {
        let n = self.dim();
        let field = self.rows[0][0].field().clone();
        let mut m = self.rows.clone();
        let mut det = field.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return field.zero();
            };
            if piv != col {
                m.swap(piv, col);
                det = -det;
            }
            let pivot = m[col][col].clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("pivot is nonzero");
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] * &inv;
                for c in col..n {
                    let t = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - &t;
                }
            }
        }
        det
    }
}

impl Matrix<RingPoly> {
    /// Fraction-free Bareiss elimination; every division is exact in `F_p[x]`.
    pub fn determinant(&self) -> RingPoly {
        let n = self.dim();
        let p = self.rows[0][0].characteristic();
        let mut m = self.rows.clone();
        let mut prev = RingPoly::one(p);
        let mut negate = false;
        let is_one = |x: &RingPoly| x.coeffs() == [1];
        for col in 0..n.saturating_sub(1) {
            let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return RingPoly::zero(p);
            };
            if piv != col {
                m.swap(piv, col);
                negate = !negate;
            }
            let pivot = m[col][col].clone();
            for r in col + 1..n {
                for c in col + 1..n {
                    let lhs = if is_one(&pivot) {
                        m[r][c].clone()
                    } else {
                        &m[r][c] * &pivot
                    };
                    let rhs = if m[r][col].is_zero() || m[col][c].is_zero() {
                        RingPoly::zero(p)
                    } else {
                        &m[r][col] * &m[col][c]
                    };
                    let num = &lhs - &rhs;
                    m[r][c] = if is_one(&prev) {
                        num
                    } else {
                        num.div_exact(&prev).expect("Bareiss division is exact")
                    };
                }
            }
            prev = pivot;
        }
        let det = m[n - 1][n - 1].clone();
        if negate {
            -&det
        } else {
            det
        }
    }
}

impl Matrix<MultiPoly> {
    /// Leibniz expansion over all permutations.
    pub fn determinant(&self) -> MultiPoly {
        use itertools::Itertools;
        let n = self.dim();
        let mut acc = MultiPoly::zero();
        for perm in (0..n).permutations(n) {
            let mut term = MultiPoly::constant(permutation_sign(&perm));
            for (r, &c) in perm.iter().enumerate() {
                term = term.mul(&self.rows[r][c]);
                if term.is_zero() {
                    break;
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}

pub(crate) fn permutation_sign(perm: &[usize]) -> i64 {
    let inversions = (0..perm.len())
        .flat_map(|a| (a + 1..perm.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| perm[a] > perm[b])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}
