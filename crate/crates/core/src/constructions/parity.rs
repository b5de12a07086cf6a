use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{f3_rank, ConstructionError};
use crate::field::prime::prime_divisors;
use crate::field::FieldSpec;

/// `2m x n` matrix over `F_3`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityMatrix {
    rows: usize,
    cols: usize,
    digits: Vec<u8>,
}

impl ParityMatrix {
    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<u8>]) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        let cols = columns.len();
        let digits = (0..rows)
            .flat_map(|i| columns.iter().map(move |c| c[i] % 3))
            .collect();
        ParityMatrix { rows, cols, digits }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn digit(&self, i: usize, j: usize) -> u8 {
        self.digits[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.digit(i, j)).collect()
    }

    /// First set of four columns (0-based) that is linearly dependent.
    pub fn dependent_quadruple(&self) -> Option<Vec<usize>> {
        (0..self.cols).combinations(4.min(self.cols)).find(|q| {
            let vecs = q
                .iter()
                .map(|&j| self.column(j).into_iter().map(u64::from).collect())
                .collect();
            f3_rank(vecs) < q.len()
        })
    }
}

/// Parity-check matrix of a ternary code of length `(3^m + 1)/2` with
/// minimum distance at least 5.
///
/// Columns are the powers of an element `u` of order `3^m + 1` in
/// `F_{3^{2m}}`, one per pair `{u^i, -u^i}`, written in a polynomial basis.
/// The seed selects the modulus and `u`. Every 4-column subset is checked
/// before returning.
pub fn construct_parity_check(m: usize, seed: u64) -> Result<ParityMatrix, ConstructionError> {
    if !(1..=3).contains(&m) {
        return Err(ConstructionError::UnsupportedM(m));
    }
    let field = FieldSpec::with_degree(3, 2 * m, seed)?;
    let order = 3u64.pow(m as u32) + 1;
    let cofactor = (field.order()? - 1) / order;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = (0..4096)
        .map(|_| field.random_element(&mut rng))
        .filter(|h| !h.is_zero())
        .map(|h| h.pow(cofactor as u128))
        .find(|u| {
            prime_divisors(order)
                .into_iter()
                .all(|r| !u.pow((order / r) as u128).is_one())
        })
        .ok_or(ConstructionError::SearchExhausted { tried: 4096 })?;
    // -1 = u^{order/2}, so the first half of the powers hits each pair once
    let mut columns = Vec::with_capacity(order as usize / 2);
    let mut x = field.one();
    for _ in 0..order / 2 {
        columns.push(x.coeffs().iter().map(|&c| c as u8).collect::<Vec<_>>());
        x = &x * &u;
    }
    let h = ParityMatrix::from_columns(&columns);
    if let Some(q) = h.dependent_quadruple() {
        return Err(ConstructionError::DependentQuadruple(q.iter().map(|j| j + 1).collect()));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_and_independence() {
        for (m, cols) in [(1usize, 2usize), (2, 5), (3, 14)] {
            let h = construct_parity_check(m, 0).unwrap();
            assert_eq!((h.rows(), h.cols()), (2 * m, cols));
            assert!(h.dependent_quadruple().is_none());
            assert_eq!(h, construct_parity_check(m, 0).unwrap());
        }
    }

    #[test]
    fn exhaustive_quadruple_combinations() {
        // all 80 nontrivial combinations of every 4 columns are nonzero
        let h = construct_parity_check(3, 7).unwrap();
        for q in (0..h.cols()).combinations(4) {
            for mut c in 1..81u32 {
                let mut acc = vec![0u32; h.rows()];
                for &j in &q {
                    let coef = c % 3;
                    c /= 3;
                    for (i, a) in acc.iter_mut().enumerate() {
                        *a += coef * h.digit(i, j) as u32;
                    }
                }
                assert!(acc.iter().any(|a| a % 3 != 0), "{q:?}");
            }
        }
    }

    #[test]
    fn repeated_column_is_rejected() {
        let cols = vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 1, 0, 0]];
        let h = ParityMatrix::from_columns(&cols);
        assert_eq!(h.dependent_quadruple(), Some(vec![0, 1, 2, 3]));
        let id = ParityMatrix::from_columns(&cols[..3]);
        assert!(id.dependent_quadruple().is_none());
    }

    #[test]
    fn json_is_row_major() {
        let h = ParityMatrix::from_columns(&[vec![1, 2], vec![0, 1], vec![2, 2]]);
        assert_eq!(
            serde_json::to_value(&h).unwrap(),
            serde_json::json!({"rows": 2, "cols": 3, "digits": [1, 0, 2, 2, 1, 2]})
        );
    }
}
