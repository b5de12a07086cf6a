//! The determinant criterion: a code with evaluation points `alpha` corrects
//! `n - 2k + 1` insdel errors when `det V_{I,J}(alpha) != 0` for every pair of
//! increasing `(2k-1)`-vectors agreeing on at most `k - 1` coordinates.

mod matrix;
mod symbolic;

pub use matrix::{build_matrix, Entry, Matrix};
pub use symbolic::{symbolic_determinant, Monomial, MultiPoly};

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Degree, FieldElement, FieldError, RingPoly};
use crate::rs_code::RsCode;
use matrix::PowerTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriterionError {
    #[error("vectors have different lengths {left} and {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("indices must be positive and strictly increasing")]
    NotIncreasing,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("index {index} outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("expected vectors of length {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("symbolic expansion is limited to k <= 3, got k = {k}")]
    DimensionTooLarge { k: usize },
    #[error("determinant for I={i:?}, J={j:?} has degree {degree} >= bound {bound}")]
    DegreeOverflow {
        i: Vec<usize>,
        j: Vec<usize>,
        degree: usize,
        bound: usize,
    },
    #[error("k = {k} is invalid for n = {n} points")]
    InvalidDimension { n: usize, k: usize },
    #[error("worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Strictly increasing tuple of 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct IncreasingVector(Vec<usize>);

impl IncreasingVector {
    pub fn new(indices: Vec<usize>) -> Result<Self, CriterionError> {
        let positive = indices.first().is_none_or(|&f| f >= 1);
        if !positive || indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CriterionError::NotIncreasing);
        }
        Ok(IncreasingVector(indices))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based access.
    pub fn get(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }
}

impl TryFrom<Vec<usize>> for IncreasingVector {
    type Error = CriterionError;
    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        IncreasingVector::new(v)
    }
}

impl From<IncreasingVector> for Vec<usize> {
    fn from(v: IncreasingVector) -> Self {
        v.0
    }
}

/// All `C(n, s)` increasing vectors in lexicographic order.
pub fn increasing_vectors(n: usize, s: usize) -> impl Iterator<Item = IncreasingVector> {
    (1..=n).combinations(s).map(IncreasingVector)
}

/// Number of positions where `I` and `J` coincide.
pub fn agreement_count(i: &IncreasingVector, j: &IncreasingVector) -> Result<usize, CriterionError> {
    if i.len() != j.len() {
        return Err(CriterionError::LengthMismatch {
            left: i.len(),
            right: j.len(),
        });
    }
    Ok(agreement(i.as_slice(), j.as_slice()))
}

fn agreement(i: &[usize], j: &[usize]) -> usize {
    i.iter().zip(j).filter(|(a, b)| a == b).count()
}

/// Returns 1-based `(i, j)`, `i != j`, with `I_i` not in `J` and `J_j` not in `I`.
///
/// Whichever vector starts lower has its first entry missing from the other.
/// The partner index is the first position (other than that one) whose entry
/// the other vector lacks.
pub fn find_disjoint_pair(
    i: &IncreasingVector,
    j: &IncreasingVector,
) -> Result<(usize, usize), CriterionError> {
    let s = i.len();
    if agreement_count(i, j)? != 0 {
        return Err(CriterionError::Precondition("vectors agree on a coordinate".into()));
    }
    if s < 2 {
        return Err(CriterionError::Precondition("length must be at least 2".into()));
    }
    let (lo, hi, swapped) = if i.get(1) < j.get(1) { (i, j, false) } else { (j, i, true) };
    let partner = (2..=s)
        .find(|&t| !lo.contains(hi.get(t)))
        .ok_or_else(|| CriterionError::Precondition("no disjoint partner index".into()))?;
    Ok(if swapped { (partner, 1) } else { (1, partner) })
}

pub(crate) fn check_pair_shape(
    i: &IncreasingVector,
    j: &IncreasingVector,
    k: usize,
) -> Result<(), CriterionError> {
    let s = 2 * k - 1;
    for v in [i, j] {
        if v.len() != s {
            return Err(CriterionError::WrongLength {
                expected: s,
                got: v.len(),
            });
        }
    }
    Ok(())
}

/// Singularity test for `k = 2`: `V_{I,J}` with rows `(1, x_r, y_r)` is
/// singular iff `(y1 - y2)(x2 - x3) = (y2 - y3)(x1 - x2)`.
pub fn cross_ratio_singular(x: [&FieldElement; 3], y: [&FieldElement; 3]) -> bool {
    let lhs = &(y[0] - y[1]) * &(x[1] - x[2]);
    let rhs = &(y[1] - y[2]) * &(x[0] - x[1]);
    lhs == rhs
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    #[default]
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailingPair {
    #[serde(rename = "I")]
    pub i: IncreasingVector,
    #[serde(rename = "J")]
    pub j: IncreasingVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub pairs_checked: u64,
    pub first_failure: Option<FailingPair>,
    pub ms: u64,
    /// Present only when every pair was scanned.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failures: Option<u64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Scan every pair and count failures instead of stopping at the first.
    pub full: bool,
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
    /// Single-threaded lexicographic scan.
    pub deterministic: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            full: false,
            jobs: 1,
            deterministic: false,
        }
    }
}

/// Checks every qualifying pair of `code`.
pub fn verify_code(code: &RsCode, opts: &VerifyOptions) -> Result<VerificationReport, CriterionError> {
    let start = Instant::now();
    let (n, k) = (code.n(), code.k());
    if k == 1 {
        // 1 x 1 matrices are all (1).
        let pairs = (n * n.saturating_sub(1) / 2) as u64;
        return Ok(finish(start, Scan { pairs_checked: pairs, ..Scan::default() }, opts));
    }
    let alphas = code.alphas();
    let scan = if k == 2 {
        scan_pairs(n, k, opts, |i, j| {
            let x = [&alphas[i[0] - 1], &alphas[i[1] - 1], &alphas[i[2] - 1]];
            let y = [&alphas[j[0] - 1], &alphas[j[1] - 1], &alphas[j[2] - 1]];
            Ok(cross_ratio_singular(x, y))
        })?
    } else {
        let table = PowerTable::new(alphas, k);
        scan_pairs(n, k, opts, |i, j| Ok(table.matrix(i, j, k).determinant().is_zero()))?
    };
    Ok(finish(start, scan, opts))
}

/// Checks every qualifying pair with entries in `F_p[x]`; each nonzero
/// determinant must have degree below `degree_bound` for the certificate to
/// transfer to the extension field.
pub fn verify_ring_code(
    alphas: &[RingPoly],
    k: usize,
    degree_bound: usize,
    opts: &VerifyOptions,
) -> Result<VerificationReport, CriterionError> {
    let start = Instant::now();
    let n = alphas.len();
    if k == 0 || n < 2 * k - 1 {
        return Err(CriterionError::InvalidDimension { n, k });
    }
    if let Some(w) = alphas.windows(2).find(|w| w[0].characteristic() != w[1].characteristic()) {
        return Err(FieldError::CharacteristicMismatch {
            left: w[0].characteristic(),
            right: w[1].characteristic(),
        }
        .into());
    }
    let table = PowerTable::new(alphas, k);
    let scan = scan_pairs(n, k, opts, |i, j| {
        let det = table.matrix(i, j, k).determinant();
        match det.degree() {
            Degree::NegInfinity => Ok(true),
            Degree::Finite(d) if d >= degree_bound => Err(CriterionError::DegreeOverflow {
                i: i.to_vec(),
                j: j.to_vec(),
                degree: d,
                bound: degree_bound,
            }),
            Degree::Finite(_) => Ok(false),
        }
    })?;
    Ok(finish(start, scan, opts))
}

fn finish(start: Instant, scan: Scan, opts: &VerifyOptions) -> VerificationReport {
    VerificationReport {
        verdict: if scan.first_failure.is_some() { Verdict::Fail } else { Verdict::Pass },
        pairs_checked: scan.pairs_checked,
        first_failure: scan.first_failure,
        ms: start.elapsed().as_millis() as u64,
        failures: opts.full.then_some(scan.failures),
    }
}

#[derive(Default)]
struct Scan {
    pairs_checked: u64,
    first_failure: Option<FailingPair>,
    failures: u64,
}

#[derive(Default)]
struct RowScan {
    qualifying: u64,
    failures: u64,
    first: Option<usize>,
}

/// Walks unordered pairs `(V[a], V[b])`, `a < b`, in lexicographic order.
///
/// Rows `a` are spread over workers. Results do not depend on the worker
/// count: the reported failure is always the lexicographically first, and
/// `pairs_checked` counts qualifying pairs up to and including it.
fn scan_pairs<F>(n: usize, k: usize, opts: &VerifyOptions, singular: F) -> Result<Scan, CriterionError>
where
    F: Fn(&[usize], &[usize]) -> Result<bool, CriterionError> + Sync,
{
    let vectors: Vec<Vec<usize>> = (1..=n).combinations(2 * k - 1).collect();
    let max_agree = k - 1;
    let scan_row = |a: usize, stop_at_first: bool| -> Result<RowScan, CriterionError> {
        let mut row = RowScan::default();
        for b in a + 1..vectors.len() {
            if agreement(&vectors[a], &vectors[b]) > max_agree {
                continue;
            }
            row.qualifying += 1;
            if singular(&vectors[a], &vectors[b])? {
                row.failures += 1;
                row.first.get_or_insert(b);
                if stop_at_first {
                    break;
                }
            }
        }
        Ok(row)
    };
    let rows: Vec<Result<RowScan, CriterionError>> = if opts.deterministic || opts.jobs == 1 {
        let mut out = Vec::new();
        for a in 0..vectors.len() {
            let r = scan_row(a, !opts.full);
            let stop = !opts.full && r.as_ref().map_or(true, |r| r.first.is_some());
            out.push(r);
            if stop {
                break;
            }
        }
        out
    } else {
        // lowest row index known to stop the scan
        let stop_row = AtomicUsize::new(usize::MAX);
        let work = || {
            (0..vectors.len())
                .into_par_iter()
                .map(|a| {
                    if !opts.full && a > stop_row.load(Ordering::Relaxed) {
                        return None;
                    }
                    let r = scan_row(a, !opts.full);
                    if !opts.full && r.as_ref().map_or(true, |r| r.first.is_some()) {
                        stop_row.fetch_min(a, Ordering::Relaxed);
                    }
                    Some(r)
                })
                .collect::<Vec<_>>()
        };
        let collected = if opts.jobs == 0 {
            work()
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.jobs)
                .build()
                .map_err(|e| CriterionError::Pool(e.to_string()))?
                .install(work)
        };
        let last = stop_row.load(Ordering::Relaxed);
        collected
            .into_iter()
            .enumerate()
            .take_while(|&(a, _)| a <= last)
            .map(|(_, r)| r.expect("rows up to the stopping row are scanned"))
            .collect()
    };
    let mut scan = Scan::default();
    for (a, row) in rows.into_iter().enumerate() {
        let row = row?;
        scan.pairs_checked += row.qualifying;
        scan.failures += row.failures;
        if scan.first_failure.is_none() {
            if let Some(b) = row.first {
                scan.first_failure = Some(FailingPair {
                    i: IncreasingVector(vectors[a].clone()),
                    j: IncreasingVector(vectors[b].clone()),
                });
            }
        }
    }
    Ok(scan)
}

/// Number of unordered qualifying pairs for `(n, k)`.
pub fn qualifying_pair_count(n: usize, k: usize) -> u64 {
    if k == 1 {
        return (n * n.saturating_sub(1) / 2) as u64;
    }
    let vectors: Vec<Vec<usize>> = (1..=n).combinations(2 * k - 1).collect();
    let mut count = 0u64;
    for a in 0..vectors.len() {
        for b in a + 1..vectors.len() {
            if agreement(&vectors[a], &vectors[b]) < k {
                count += 1;
            }
        }
    }
    count
}
