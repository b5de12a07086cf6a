//! Reference implementations written without the library's algorithms, used
//! to cross-check its answers.

#![allow(dead_code)]

use std::collections::HashMap;

use insdel_core::field::{FieldElement, FieldSpec};

/// Insertion/deletion distance by the textbook recurrence, no LCS involved.
pub fn insdel_distance(s: &[u8], t: &[u8]) -> usize {
    let mut d = vec![vec![0usize; t.len() + 1]; s.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=t.len() {
        d[0][j] = j;
    }
    for i in 1..=s.len() {
        for j in 1..=t.len() {
            d[i][j] = if s[i - 1] == t[j - 1] {
                d[i - 1][j - 1]
            } else {
                1 + d[i - 1][j].min(d[i][j - 1])
            };
        }
    }
    d[s.len()][t.len()]
}

/// Longest common subsequence by memoized recursion over suffixes.
pub fn lcs_by_recursion<T: PartialEq>(s: &[T], t: &[T]) -> usize {
    fn go<T: PartialEq>(s: &[T], t: &[T], i: usize, j: usize, memo: &mut HashMap<(usize, usize), usize>) -> usize {
        if i == s.len() || j == t.len() {
            return 0;
        }
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let v = if s[i] == t[j] {
            1 + go(s, t, i + 1, j + 1, memo)
        } else {
            go(s, t, i + 1, j, memo).max(go(s, t, i, j + 1, memo))
        };
        memo.insert((i, j), v);
        v
    }
    go(s, t, 0, 0, &mut HashMap::new())
}

/// Unordered pairs of increasing `s`-vectors over `[n]` agreeing in fewer than `k` places.
pub fn qualifying_pairs(n: usize, s: usize, k: usize) -> u64 {
    let mut vecs: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..s {
        vecs = vecs
            .into_iter()
            .flat_map(|v| {
                let start = v.last().map_or(1, |&x| x + 1);
                (start..=n).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    let mut count = 0;
    for a in 0..vecs.len() {
        for b in a + 1..vecs.len() {
            let agree = vecs[a].iter().zip(&vecs[b]).filter(|(x, y)| x == y).count();
            if agree < k {
                count += 1;
            }
        }
    }
    count
}

/// Sidon check by grouping every ordered product of nonzero elements of the
/// span and requiring a single unordered pair of lines per product.
pub fn sidon_by_products(field: &FieldSpec, basis: &[FieldElement]) -> (bool, usize) {
    let size = 3u64.pow(basis.len() as u32);
    let mut all: Vec<FieldElement> = Vec::new();
    for idx in 1..size {
        let mut c = idx;
        let mut v = field.zero();
        for b in basis {
            for _ in 0..c % 3 {
                v = &v + b;
            }
            c /= 3;
        }
        all.push(v);
    }
    let line = |v: &FieldElement| std::cmp::min(v.clone(), -v.clone());
    let mut groups: HashMap<FieldElement, (FieldElement, FieldElement)> = HashMap::new();
    let mut ok = true;
    let mut products = 0;
    for a in &all {
        for b in &all {
            products += 1;
            let (la, lb) = (line(a), line(b));
            let pair = if la <= lb { (la, lb) } else { (lb, la) };
            let prev = groups.entry(a * b).or_insert_with(|| pair.clone());
            ok &= *prev == pair;
        }
    }
    (ok, products)
}

/// True when no nontrivial `F_3` combination of four of the points vanishes.
pub fn four_wise_independent(points: &[FieldElement]) -> (bool, u64) {
    let n = points.len();
    let mut checked = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    for mut code in 1..81u64 {
                        let mut acc = points[a].field().zero();
                        for p in [a, b, c, d] {
                            acc = &acc + &points[p].scale(code % 3);
                            code /= 3;
                        }
                        checked += 1;
                        if acc.is_zero() {
                            return (false, checked);
                        }
                    }
                }
            }
        }
    }
    (true, checked)
}
