//! Adversarial insdel channel and a brute-force alignment decoder.
//!
//! The decoder guesses which `k` received symbols survive from which `k`
//! codeword positions, interpolates, and keeps every message whose codeword
//! is within the radius. On a code that passes the criterion at most one
//! message survives; more than one is reported as a counterexample.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::rs_code::{interpolate, MessagePoly, RsCode, RsError};
use crate::sequence::{apply_edits, edit_distance, edit_distance_within, lcs, EditOp, EditScript, SequenceError};

/// Codeword pairs an exhaustive adversary may scan before falling back to sampling.
pub const DEFAULT_PAIR_CAP: u128 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChannelError {
    #[error("radius {radius} exceeds the correction radius {max}")]
    RadiusTooLarge { radius: usize, max: usize },
    #[error("symbol {index} of the received word is not in the code's field")]
    ForeignSymbol { index: usize },
    #[error("worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Code(#[from] RsError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Encodes `f` and pushes the codeword through `script`.
pub fn transmit(
    code: &RsCode,
    f: &MessagePoly,
    script: &EditScript<FieldElement>,
) -> Result<Vec<FieldElement>, ChannelError> {
    let word = code.encode(f)?;
    Ok(apply_edits(&word, script)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// Fewer than `k` symbols arrived.
    TooShort,
    NoCandidate,
    /// Several messages lie within the radius; the code is not insdel-correcting.
    Ambiguous(Vec<MessagePoly>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Decoded { message: MessagePoly, distance: usize },
    Failure(Failure),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub outcome: Outcome,
    /// Distinct candidate messages whose codewords were compared.
    pub candidates_examined: u64,
}

impl Serialize for DecodeResult {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let body = match &self.outcome {
            Outcome::Decoded { message, distance } => serde_json::json!({
                "outcome": "ok",
                "message": message,
                "ed": distance,
            }),
            Outcome::Failure(Failure::TooShort) => serde_json::json!({"outcome": "too_short"}),
            Outcome::Failure(Failure::NoCandidate) => serde_json::json!({"outcome": "no_candidate"}),
            Outcome::Failure(Failure::Ambiguous(ms)) => serde_json::json!({
                "outcome": "ambiguous",
                "messages": ms,
            }),
        };
        let mut body = body;
        body["candidates_examined"] = self.candidates_examined.into();
        body.serialize(s)
    }
}

/// Decoder state for one code: inverse Vandermonde matrices for every
/// `k`-subset of evaluation points.
pub struct Decoder<'a> {
    code: &'a RsCode,
    subsets: Vec<(Vec<usize>, Vec<Vec<FieldElement>>)>,
}

impl<'a> Decoder<'a> {
    pub fn new(code: &'a RsCode) -> Result<Self, ChannelError> {
        let k = code.k();
        let field = code.field();
        let subsets = (0..code.n())
            .combinations(k)
            .map(|b| {
                // row t holds the coefficients of the t-th Lagrange basis polynomial
                let rows = (0..k)
                    .map(|t| {
                        let pts = b
                            .iter()
                            .enumerate()
                            .map(|(s, &j)| {
                                let y = if s == t { field.one() } else { field.zero() };
                                (code.alphas()[j].clone(), y)
                            })
                            .collect::<Vec<_>>();
                        Ok(interpolate(&pts, k)?.coeffs().to_vec())
                    })
                    .collect::<Result<Vec<_>, RsError>>()?;
                Ok((b, rows))
            })
            .collect::<Result<_, ChannelError>>()?;
        Ok(Decoder { code, subsets })
    }

    pub fn code(&self) -> &RsCode {
        self.code
    }

    /// Every message whose codeword is within `radius` of `received`.
    ///
    /// Only alignments that can start a common subsequence long enough for
    /// the radius are tried: with `L` the least admissible common length,
    /// the `t`-th matched index is at most `len - L + t` on either side, and
    /// matched indices differ by at most `radius`.
    pub fn decode(&self, received: &[FieldElement], radius: usize) -> Result<DecodeResult, ChannelError> {
        let (n, k) = (self.code.n(), self.code.k());
        let max = self.code.correction_radius();
        if radius > max {
            return Err(ChannelError::RadiusTooLarge { radius, max });
        }
        if let Some(index) = received.iter().position(|s| s.field() != self.code.field()) {
            return Err(ChannelError::ForeignSymbol { index });
        }
        let m = received.len();
        if m < k {
            let reason = if k == 1 { Failure::NoCandidate } else { Failure::TooShort };
            return Ok(DecodeResult {
                outcome: Outcome::Failure(reason),
                candidates_examined: 0,
            });
        }
        // ed = n + m - 2 lcs <= radius, and each side keeps at least len - radius
        let min_common = (n + m).saturating_sub(radius).div_ceil(2).max(n.saturating_sub(radius));
        if min_common > n.min(m) {
            return Ok(DecodeResult {
                outcome: Outcome::Failure(Failure::NoCandidate),
                candidates_examined: 0,
            });
        }
        let field = self.code.field();
        let per_subset: Vec<BTreeSet<Vec<FieldElement>>> = self
            .subsets
            .par_iter()
            .filter(|(b, _)| b.iter().enumerate().all(|(t, &bt)| bt + min_common <= n + t))
            .map(|(b, inv)| {
                let mut found = BTreeSet::new();
                let mut a = Vec::with_capacity(k);
                for_each_alignment(&mut a, b, m, min_common, radius, &mut |a| {
                    let coeffs = (0..k)
                        .map(|c| {
                            (0..k).fold(field.zero(), |acc, t| &acc + &(&received[a[t]] * &inv[t][c]))
                        })
                        .collect();
                    found.insert(coeffs);
                });
                found
            })
            .collect();
        let candidates: BTreeSet<Vec<FieldElement>> = per_subset.into_iter().flatten().collect();
        let examined = candidates.len() as u64;
        let accepted: Vec<(MessagePoly, usize)> = candidates
            .into_par_iter()
            .filter_map(|coeffs| {
                let msg = MessagePoly::new(coeffs).ok()?;
                let word = self.code.encode(&msg).ok()?;
                edit_distance_within(&word, received, radius).map(|d| (msg, d))
            })
            .collect();
        let outcome = match accepted.len() {
            0 => Outcome::Failure(Failure::NoCandidate),
            1 => {
                let (message, distance) = accepted.into_iter().next().expect("one element");
                Outcome::Decoded { message, distance }
            }
            _ => Outcome::Failure(Failure::Ambiguous(accepted.into_iter().map(|(m, _)| m).collect())),
        };
        Ok(DecodeResult {
            outcome,
            candidates_examined: examined,
        })
    }
}

/// Increasing `a` into a received word of length `m`, matched against `b`.
fn for_each_alignment(
    a: &mut Vec<usize>,
    b: &[usize],
    m: usize,
    min_common: usize,
    radius: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    let t = a.len();
    if t == b.len() {
        visit(a);
        return;
    }
    let lo = a.last().map_or(0, |&x| x + 1).max(b[t].saturating_sub(radius));
    let hi = (b[t] + radius).min(m + t - min_common);
    for at in lo..=hi {
        a.push(at);
        for_each_alignment(a, b, m, min_common, radius, visit);
        a.pop();
    }
}

/// One-shot decode; build a [`Decoder`] to amortize setup over many words.
pub fn decode(code: &RsCode, received: &[FieldElement], radius: usize) -> Result<DecodeResult, ChannelError> {
    Decoder::new(code)?.decode(received, radius)
}

/// Uniformly random script of exactly `ops` operations on a word of length
/// `len`; a deletion is only drawn when the current word is nonempty.
pub fn random_script<R: Rng + ?Sized>(
    field: &FieldSpec,
    len: usize,
    ops: usize,
    rng: &mut R,
) -> EditScript<FieldElement> {
    let mut cur = len;
    let mut out = Vec::with_capacity(ops);
    for _ in 0..ops {
        if cur > 0 && rng.random_bool(0.5) {
            out.push(EditOp::Delete {
                pos: rng.random_range(0..cur),
            });
            cur -= 1;
        } else {
            out.push(EditOp::Insert {
                pos: rng.random_range(0..=cur),
                sym: field.random_element(rng),
            });
            cur += 1;
        }
    }
    EditScript::new(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdversaryReport {
    pub requested: SearchMode,
    pub mode: SearchMode,
    /// True when exhaustive search was requested but the pair count exceeded the cap.
    pub downgraded: bool,
    pub pairs_examined: u64,
    pub max_lcs: usize,
    pub witness: Option<(MessagePoly, MessagePoly)>,
    /// `max_lcs <= 2k - 2`.
    pub passed: bool,
}

/// Largest LCS over pairs of distinct codewords.
///
/// Exhaustive mode scans all pairs when there are at most `pair_cap` of them
/// and otherwise samples `samples` random pairs. The witness is the first
/// pair (in scan order) reaching the maximum.
pub fn adversary_search(
    code: &RsCode,
    mode: SearchMode,
    samples: u64,
    seed: u64,
    pair_cap: u128,
) -> Result<AdversaryReport, ChannelError> {
    let q = code.field().order()? as u128;
    let words = q.checked_pow(code.k() as u32);
    let total_pairs = words.map(|w| w * (w - 1) / 2);
    let fits = total_pairs.is_some_and(|t| t <= pair_cap);
    let used = if mode == SearchMode::Exhaustive && fits { SearchMode::Exhaustive } else { SearchMode::Sampled };
    let pairs: Vec<(MessagePoly, MessagePoly)> = match used {
        SearchMode::Exhaustive => {
            let msgs: Vec<MessagePoly> = code.messages()?.collect();
            (0..msgs.len())
                .tuple_combinations()
                .map(|(a, b)| (msgs[a].clone(), msgs[b].clone()))
                .collect()
        }
        SearchMode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(samples as usize);
            while (out.len() as u64) < samples {
                let f = MessagePoly::random(code.field(), code.k(), &mut rng);
                let g = MessagePoly::random(code.field(), code.k(), &mut rng);
                if f != g {
                    out.push((f, g));
                }
            }
            out
        }
    };
    let lens: Vec<usize> = pairs
        .par_iter()
        .map(|(f, g)| {
            let (cf, cg) = (code.encode(f)?, code.encode(g)?);
            Ok(lcs(&cf, &cg))
        })
        .collect::<Result<_, ChannelError>>()?;
    let best = lens.iter().enumerate().max_by_key(|&(i, &l)| (l, std::cmp::Reverse(i)));
    let max_lcs = best.map_or(0, |(_, &l)| l);
    let witness = best.map(|(i, _)| pairs[i].clone());
    Ok(AdversaryReport {
        requested: mode,
        mode: used,
        downgraded: mode != used,
        pairs_examined: pairs.len() as u64,
        max_lcs,
        witness,
        passed: max_lcs + 2 <= 2 * code.k(),
    })
}

/// One line of a simulation transcript.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub message: MessagePoly,
    pub script: EditScript<FieldElement>,
    pub received: Vec<FieldElement>,
    /// `ok`, `no_candidate`, `ambiguous`, `too_short`, or `mismatch` (decoded to a different message).
    pub outcome: &'static str,
    /// Edit distance between the sent codeword and the received word.
    pub ed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SimulationSummary {
    pub trials: u64,
    pub ok: u64,
    pub no_candidate: u64,
    pub ambiguous: u64,
    pub too_short: u64,
    pub mismatch: u64,
}

impl SimulationSummary {
    pub fn all_ok(&self) -> bool {
        self.ok == self.trials
    }
}

/// Random messages through random scripts of `0..=budget` operations,
/// decoded at radius `budget`.
///
/// Trial `i` draws from its own stream of the seeded generator, so the
/// transcript does not depend on the number of workers.
pub fn simulate(
    code: &RsCode,
    trials: u64,
    budget: usize,
    seed: u64,
    jobs: usize,
) -> Result<(Vec<TrialRecord>, SimulationSummary), ChannelError> {
    let decoder = Decoder::new(code)?;
    let run = |i: u64| -> Result<TrialRecord, ChannelError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        let message = MessagePoly::random(code.field(), code.k(), &mut rng);
        let ops = rng.random_range(0..=budget);
        let script = random_script(code.field(), code.n(), ops, &mut rng);
        let word = code.encode(&message)?;
        let received = apply_edits(&word, &script)?;
        let ed = edit_distance(&word, &received);
        let result = decoder.decode(&received, budget)?;
        let outcome = match result.outcome {
            Outcome::Decoded { message: ref got, .. } if *got == message => "ok",
            Outcome::Decoded { .. } => "mismatch",
            Outcome::Failure(Failure::NoCandidate) => "no_candidate",
            Outcome::Failure(Failure::Ambiguous(_)) => "ambiguous",
            Outcome::Failure(Failure::TooShort) => "too_short",
        };
        Ok(TrialRecord { message, script, received, outcome, ed })
    };
    let records: Vec<TrialRecord> = if jobs == 1 {
        (0..trials).map(run).collect::<Result<_, _>>()?
    } else {
        let work = || (0..trials).into_par_iter().map(run).collect::<Result<Vec<_>, _>>();
        if jobs == 0 {
            work()?
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| ChannelError::Pool(e.to_string()))?
                .install(work)?
        }
    };
    let mut summary = SimulationSummary {
        trials,
        ..Default::default()
    };
    for r in &records {
        match r.outcome {
            "ok" => summary.ok += 1,
            "no_candidate" => summary.no_candidate += 1,
            "ambiguous" => summary.ambiguous += 1,
            "too_short" => summary.too_short += 1,
            _ => summary.mismatch += 1,
        }
    }
    Ok((records, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::construct_k2;
    use crate::criterion::{verify_code, VerifyOptions};
    use crate::sequence::enumerate_edit_scripts;

    fn consecutive() -> RsCode {
        let f = FieldSpec::prime(7).unwrap();
        RsCode::new(f.clone(), 2, (1..=5).map(|v| f.from_u64(v)).collect()).unwrap()
    }

    fn msg(field: &FieldSpec, c: &[u64]) -> MessagePoly {
        MessagePoly::new(c.iter().map(|&v| field.from_u64(v)).collect()).unwrap()
    }

    #[test]
    fn transmit_basics() {
        let code = consecutive();
        let f = msg(code.field(), &[1, 1]);
        let word = code.encode(&f).unwrap();
        assert_eq!(transmit(&code, &f, &EditScript::default()).unwrap(), word);
        let dels = EditScript::new(vec![EditOp::Delete { pos: 4 }, EditOp::Delete { pos: 0 }]);
        let got = transmit(&code, &f, &dels).unwrap();
        assert_eq!(got.len(), 3);
        assert!(edit_distance(&word, &got) <= 2);
        let bad = EditScript::new(vec![EditOp::Delete { pos: 9 }]);
        assert!(matches!(transmit(&code, &f, &bad), Err(ChannelError::Sequence(_))));
    }

    #[test]
    fn radius_zero_is_codeword_lookup() {
        let c = construct_k2(2, 0).unwrap();
        let dec = Decoder::new(&c.code).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let f = MessagePoly::random(c.code.field(), 2, &mut rng);
            let word = c.code.encode(&f).unwrap();
            let r = dec.decode(&word, 0).unwrap();
            assert_eq!(r.outcome, Outcome::Decoded { message: f.clone(), distance: 0 });
            // a corrupted symbol is no codeword at all for this code
            let mut bent = word.clone();
            bent[2] = &bent[2] + &c.code.field().one();
            assert_eq!(dec.decode(&bent, 0).unwrap().outcome, Outcome::Failure(Failure::NoCandidate));
        }
    }

    #[test]
    fn single_deletions_decode() {
        let c = construct_k2(2, 0).unwrap();
        let dec = Decoder::new(&c.code).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let f = MessagePoly::random(c.code.field(), 2, &mut rng);
            for pos in 0..5 {
                let y = transmit(&c.code, &f, &EditScript::new(vec![EditOp::Delete { pos }])).unwrap();
                let r = dec.decode(&y, 2).unwrap();
                assert_eq!(r.outcome, Outcome::Decoded { message: f.clone(), distance: 1 });
            }
        }
    }

    #[test]
    fn short_and_oversized() {
        let c = construct_k2(2, 0).unwrap();
        let f = c.code.field();
        assert_eq!(
            decode(&c.code, &[f.one()], 2).unwrap().outcome,
            Outcome::Failure(Failure::TooShort)
        );
        assert_eq!(
            decode(&c.code, &[], 3),
            Err(ChannelError::RadiusTooLarge { radius: 3, max: 2 })
        );
        let other = FieldSpec::prime(7).unwrap();
        assert_eq!(
            decode(&c.code, &[other.one(), other.one()], 1),
            Err(ChannelError::ForeignSymbol { index: 0 })
        );
    }

    #[test]
    fn exhaustive_scripts_on_small_verified_code() {
        // every script of budget <= 2 over the full alphabet of F_31
        let f = FieldSpec::prime(31).unwrap();
        let code = (0..31u64)
            .combinations(5)
            .map(|pts| RsCode::new(f.clone(), 2, pts.iter().map(|&v| f.from_u64(v)).collect()).unwrap())
            .find(|c| verify_code(c, &VerifyOptions::default()).unwrap().passed())
            .unwrap();
        let dec = Decoder::new(&code).unwrap();
        let alphabet: Vec<FieldElement> = f.elements().unwrap().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..2 {
            let m = MessagePoly::random(&f, 2, &mut rng);
            let word = code.encode(&m).unwrap();
            for script in enumerate_edit_scripts(&word, 2, &alphabet).unwrap() {
                let y = apply_edits(&word, &script).unwrap();
                match dec.decode(&y, 2).unwrap().outcome {
                    Outcome::Decoded { message, distance } => {
                        assert_eq!(message, m);
                        assert_eq!(distance, edit_distance(&word, &y));
                    }
                    other => panic!("{other:?} for {script:?}"),
                }
            }
        }
    }

    #[test]
    fn consecutive_points_are_ambiguous() {
        let code = consecutive();
        let f = code.field().clone();
        // x and x + 1 share 2,3,4,5; drop the leading 1 of the first
        let y = transmit(&code, &msg(&f, &[0, 1]), &EditScript::new(vec![EditOp::Delete { pos: 0 }])).unwrap();
        match decode(&code, &y, 2).unwrap().outcome {
            Outcome::Failure(Failure::Ambiguous(ms)) => {
                assert!(ms.contains(&msg(&f, &[0, 1])) && ms.contains(&msg(&f, &[1, 1])))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn adversary_on_consecutive_points() {
        let code = consecutive();
        let r = adversary_search(&code, SearchMode::Exhaustive, 0, 0, DEFAULT_PAIR_CAP).unwrap();
        assert_eq!(r.mode, SearchMode::Exhaustive);
        assert!(!r.passed);
        assert!(r.max_lcs >= 4);
        assert_eq!(r.pairs_examined, 49 * 48 / 2);
        let (a, b) = r.witness.unwrap();
        assert_eq!(lcs(&code.encode(&a).unwrap(), &code.encode(&b).unwrap()), r.max_lcs);
    }

    #[test]
    fn adversary_on_verified_code_and_downgrade() {
        let c = construct_k2(2, 0).unwrap();
        let r = adversary_search(&c.code, SearchMode::Exhaustive, 5_000, 3, DEFAULT_PAIR_CAP).unwrap();
        assert!(r.downgraded);
        assert_eq!(r.mode, SearchMode::Sampled);
        assert_eq!(r.pairs_examined, 5_000);
        assert!(r.passed && r.max_lcs <= 2);
    }

    #[test]
    fn adversary_k1_is_vacuous() {
        let f = FieldSpec::prime(5).unwrap();
        let code = RsCode::new(f.clone(), 1, vec![f.one(), f.from_u64(2)]).unwrap();
        let r = adversary_search(&code, SearchMode::Exhaustive, 0, 0, DEFAULT_PAIR_CAP).unwrap();
        assert!(r.passed);
        assert_eq!(r.max_lcs, 0);
    }

    #[test]
    fn simulation_is_reproducible_across_workers() {
        let c = construct_k2(2, 1).unwrap();
        let (a, sa) = simulate(&c.code, 200, 2, 4, 1).unwrap();
        let (b, sb) = simulate(&c.code, 200, 2, 4, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(sa, sb);
        assert!(sa.all_ok(), "{sa:?}");
        assert!(a.iter().all(|r| r.ed <= 2));
        let line = serde_json::to_value(&a[0]).unwrap();
        for key in ["message", "script", "received", "outcome", "ed"] {
            assert!(line.get(key).is_some());
        }
    }

    #[test]
    fn decode_result_json() {
        let code = consecutive();
        let f = msg(code.field(), &[3, 2]);
        let r = decode(&code, &code.encode(&f).unwrap(), 0).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["outcome"], "ok");
        assert_eq!(v["ed"], 0);
        assert_eq!(v["message"], serde_json::json!([[3], [2]]));
    }
}
