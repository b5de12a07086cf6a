//! Longest common subsequence, insertion/deletion edit distance, and edit
//! scripts over arbitrary symbol types.

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default ceiling on the number of scripts an exhaustive enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("edit at position {pos} is out of range for a string of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("enumeration would produce {count} scripts, above the cap of {cap}")]
    BudgetTooLarge { count: u128, cap: u128 },
}

/// Length of a longest common subsequence, two-row dynamic program.
pub fn lcs<T: PartialEq>(s: &[T], t: &[T]) -> usize {
    if s.is_empty() || t.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; t.len() + 1];
    let mut cur = vec![0usize; t.len() + 1];
    for a in s {
        for (j, b) in t.iter().enumerate() {
            cur[j + 1] = if a == b {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[t.len()]
}

/// Minimum number of single-symbol insertions and deletions turning `s` into `t`.
pub fn edit_distance<T: PartialEq>(s: &[T], t: &[T]) -> usize {
    s.len() + t.len() - 2 * lcs(s, t)
}

/// Edit distance if it is at most `bound`, computed on the diagonal band
/// `|i - j| <= bound` with early exit.
pub fn edit_distance_within<T: PartialEq>(s: &[T], t: &[T], bound: usize) -> Option<usize> {
    let (n, m) = (s.len(), t.len());
    if n.abs_diff(m) > bound {
        return None;
    }
    const INF: usize = usize::MAX / 2;
    let mut prev = vec![INF; m + 1];
    let mut cur = vec![INF; m + 1];
    for (j, v) in prev.iter_mut().enumerate().take(bound.min(m) + 1) {
        *v = j;
    }
    for i in 1..=n {
        let lo = i.saturating_sub(bound);
        let hi = (i + bound).min(m);
        cur.iter_mut().for_each(|v| *v = INF);
        if lo == 0 {
            cur[0] = i;
        }
        let mut row_min = cur[0].min(INF);
        for j in lo.max(1)..=hi {
            let v = if s[i - 1] == t[j - 1] {
                prev[j - 1]
            } else {
                1 + prev[j].min(cur[j - 1])
            };
            cur[j] = v;
            row_min = row_min.min(v);
        }
        if row_min > bound {
            return None;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Some(prev[m]).filter(|&d| d <= bound)
}

/// One insertion or deletion; positions index the string as it stands when
/// the operation is applied.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum EditOp<T> {
    #[serde(rename = "del")]
    Delete { pos: usize },
    #[serde(rename = "ins")]
    Insert { pos: usize, sym: T },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EditScript<T>(pub Vec<EditOp<T>>);

impl<T> Default for EditScript<T> {
    fn default() -> Self {
        EditScript(Vec::new())
    }
}

impl<T> EditScript<T> {
    pub fn new(ops: Vec<EditOp<T>>) -> Self {
        EditScript(ops)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ops(&self) -> &[EditOp<T>] {
        &self.0
    }

    pub fn deletions(&self) -> usize {
        self.0
            .iter()
            .filter(|op| matches!(op, EditOp::Delete { .. }))
            .count()
    }

    pub fn insertions(&self) -> usize {
        self.len() - self.deletions()
    }

    /// Converts symbols, e.g. between field elements and their wire form.
    pub fn try_map<U, E>(&self, mut f: impl FnMut(&T) -> Result<U, E>) -> Result<EditScript<U>, E> {
        self.0
            .iter()
            .map(|op| match op {
                EditOp::Delete { pos } => Ok(EditOp::Delete { pos: *pos }),
                EditOp::Insert { pos, sym } => Ok(EditOp::Insert {
                    pos: *pos,
                    sym: f(sym)?,
                }),
            })
            .collect::<Result<_, E>>()
            .map(EditScript)
    }
}

/// Applies `script` to `s` operation by operation.
pub fn apply_edits<T: Clone>(s: &[T], script: &EditScript<T>) -> Result<Vec<T>, SequenceError> {
    let mut out = s.to_vec();
    for op in &script.0 {
        match op {
            EditOp::Delete { pos } => {
                if *pos >= out.len() {
                    return Err(SequenceError::PositionOutOfRange {
                        pos: *pos,
                        len: out.len(),
                    });
                }
                out.remove(*pos);
            }
            EditOp::Insert { pos, sym } => {
                if *pos > out.len() {
                    return Err(SequenceError::PositionOutOfRange {
                        pos: *pos,
                        len: out.len(),
                    });
                }
                out.insert(*pos, sym.clone());
            }
        }
    }
    Ok(out)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of canonical scripts of at most `budget` operations on a string
/// of length `len` over an alphabet of `alphabet` symbols.
pub fn count_edit_scripts(len: usize, budget: usize, alphabet: usize) -> u128 {
    let mut total = 0u128;
    for dels in 0..=budget.min(len) {
        let remaining = len - dels;
        let del_sets = binomial(len as u128, dels as u128);
        for ins in 0..=(budget - dels) {
            // insertion gap multisets times symbol choices
            let gaps = binomial((remaining + ins) as u128, ins as u128);
            let syms = (alphabet as u128).saturating_pow(ins as u32);
            total = total.saturating_add(del_sets.saturating_mul(gaps).saturating_mul(syms));
        }
    }
    total
}

/// Every canonical script of at most `budget` operations, with the default cap.
///
/// See [`enumerate_edit_scripts_capped`].
pub fn enumerate_edit_scripts<'a, T: Clone + 'a>(
    s: &[T],
    budget: usize,
    alphabet: &'a [T],
) -> Result<impl Iterator<Item = EditScript<T>> + 'a, SequenceError> {
    enumerate_edit_scripts_capped(s.len(), budget, alphabet, DEFAULT_ENUMERATION_CAP)
}

/// Canonical scripts: deletions first (highest original position first, so
/// every position refers to the untouched prefix), then insertions left to
/// right. Every string reachable with at most `budget` operations is produced
/// at least once. The order is deterministic: by deletion count, deletion
/// set, insertion count, insertion gaps, then symbols.
pub fn enumerate_edit_scripts_capped<'a, T: Clone + 'a>(
    len: usize,
    budget: usize,
    alphabet: &'a [T],
    cap: u128,
) -> Result<impl Iterator<Item = EditScript<T>> + 'a, SequenceError> {
    let count = count_edit_scripts(len, budget, alphabet.len());
    if count > cap {
        return Err(SequenceError::BudgetTooLarge { count, cap });
    }
    let iter = (0..=budget.min(len)).flat_map(move |dels| {
        (0..len).combinations(dels).flat_map(move |del_set| {
            let remaining = len - dels;
            (0..=(budget - dels)).flat_map(move |ins| {
                let del_set = del_set.clone();
                (0..=remaining)
                    .combinations_with_replacement(ins)
                    .flat_map(move |gaps| {
                        let del_set = del_set.clone();
                        symbol_tuples(alphabet, ins).map(move |syms| {
                            let mut ops: Vec<EditOp<T>> = del_set
                                .iter()
                                .rev()
                                .map(|&pos| EditOp::Delete { pos })
                                .collect();
                            // the t-th insertion lands after the t earlier ones
                            ops.extend(gaps.iter().zip(syms).enumerate().map(|(t, (&g, sym))| {
                                EditOp::Insert { pos: g + t, sym }
                            }));
                            EditScript(ops)
                        })
                    })
            })
        })
    });
    Ok(iter)
}

fn symbol_tuples<T: Clone>(alphabet: &[T], len: usize) -> Box<dyn Iterator<Item = Vec<T>> + '_> {
    if len == 0 {
        Box::new(std::iter::once(Vec::new()))
    } else {
        Box::new(
            (0..len)
                .map(|_| alphabet.iter().cloned())
                .multi_cartesian_product(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn binary_example() {
        let (s, t) = (bits("100110"), bits("1101100"));
        assert_eq!(lcs(&s, &t), 5);
        assert_eq!(edit_distance(&s, &t), 3);
        let script = EditScript(vec![
            EditOp::Insert { pos: 0, sym: 1 },
            EditOp::Insert { pos: 7, sym: 0 },
            EditOp::Delete { pos: 2 },
        ]);
        assert_eq!(apply_edits(&s, &script).unwrap(), t);
    }

    #[test]
    fn degenerate_inputs() {
        let s = bits("0110");
        assert_eq!(lcs(&s, &s), 4);
        assert_eq!(lcs(&s, &[]), 0);
        assert_eq!(edit_distance(&s, &s), 0);
        assert_eq!(edit_distance(&[], &s), 4);
        assert_eq!(apply_edits(&s, &EditScript::default()).unwrap(), s);
        assert_eq!(
            apply_edits(b"abc", &EditScript(vec![EditOp::Delete { pos: 5 }])),
            Err(SequenceError::PositionOutOfRange { pos: 5, len: 3 })
        );
    }

    #[test]
    fn script_wire_format() {
        let script = EditScript(vec![EditOp::Delete { pos: 2 }, EditOp::Insert { pos: 0, sym: 7u64 }]);
        let json = serde_json::to_string(&script).unwrap();
        assert_eq!(json, r#"[{"op":"del","pos":2},{"op":"ins","pos":0,"sym":7}]"#);
        assert_eq!(serde_json::from_str::<EditScript<u64>>(&json).unwrap(), script);
    }

    #[test]
    fn enumeration_counts() {
        let alphabet = [0u8, 1, 2, 3, 4];
        let s = [9u8, 9, 9];
        assert_eq!(enumerate_edit_scripts(&s, 0, &alphabet).unwrap().count(), 1);
        let one: Vec<_> = enumerate_edit_scripts(&s, 1, &alphabet)
            .unwrap()
            .filter(|e| e.len() == 1)
            .collect();
        assert_eq!(one.iter().filter(|e| e.deletions() == 1).count(), 3);
        assert_eq!(one.iter().filter(|e| e.insertions() == 1).count(), 4 * alphabet.len());
        for budget in 0..=3 {
            let n = enumerate_edit_scripts(&s, budget, &alphabet).unwrap().count() as u128;
            assert_eq!(n, count_edit_scripts(3, budget, alphabet.len()));
        }
    }

    #[test]
    fn enumeration_cap_is_an_error() {
        let alphabet: Vec<u32> = (0..100).collect();
        let s = vec![0u32; 20];
        assert!(matches!(
            enumerate_edit_scripts(&s, 6, &alphabet),
            Err(SequenceError::BudgetTooLarge { .. })
        ));
    }

    /// Strings within edit distance `b` of `s`, by brute force over all
    /// strings of plausible length.
    fn ball(s: &[u8], b: usize) -> std::collections::BTreeSet<Vec<u8>> {
        let mut out = std::collections::BTreeSet::new();
        for len in s.len().saturating_sub(b)..=s.len() + b {
            for idx in 0..(1u32 << len) {
                let t: Vec<u8> = (0..len).map(|i| ((idx >> i) & 1) as u8).collect();
                if edit_distance(s, &t) <= b {
                    out.insert(t);
                }
            }
        }
        out
    }

    #[test]
    fn enumeration_reaches_the_whole_ball() {
        let s = bits("01");
        let reached: std::collections::BTreeSet<Vec<u8>> = enumerate_edit_scripts(&s, 2, &[0u8, 1])
            .unwrap()
            .map(|e| {
                let out = apply_edits(&s, &e).unwrap();
                assert!(edit_distance(&s, &out) <= e.len());
                out
            })
            .collect();
        assert_eq!(reached, ball(&s, 2));

        let s = bits("0110");
        let reached: std::collections::BTreeSet<Vec<u8>> = enumerate_edit_scripts(&s, 3, &[0u8, 1])
            .unwrap()
            .map(|e| apply_edits(&s, &e).unwrap())
            .collect();
        assert_eq!(reached, ball(&s, 3));
    }

    fn small_string() -> impl Strategy<Value = Vec<u8>> {
        prop::collection::vec(0u8..3, 0..12)
    }

    proptest! {
        #[test]
        fn metric_axioms(a in small_string(), b in small_string(), c in small_string()) {
            prop_assert_eq!(edit_distance(&a, &b), edit_distance(&b, &a));
            prop_assert_eq!(edit_distance(&a, &b) == 0, a == b);
            prop_assert!(edit_distance(&a, &c) <= edit_distance(&a, &b) + edit_distance(&b, &c));
        }

        #[test]
        fn appending_a_common_symbol_extends_lcs(a in small_string(), b in small_string(), x in 0u8..3) {
            let (mut a2, mut b2) = (a.clone(), b.clone());
            a2.push(x);
            b2.push(x);
            prop_assert_eq!(lcs(&a2, &b2), lcs(&a, &b) + 1);
        }

        #[test]
        fn banded_agrees_with_full(a in small_string(), b in small_string(), bound in 0usize..10) {
            let full = edit_distance(&a, &b);
            let expected = (full <= bound).then_some(full);
            prop_assert_eq!(edit_distance_within(&a, &b, bound), expected);
        }
    }
}
