use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{CodeArtifact, ConstructionError, Provenance};
use crate::criterion::{verify_code, VerificationReport, VerifyOptions};
use crate::field::prime::prime_power;
use crate::field::FieldSpec;
use crate::rs_code::RsCode;

#[derive(Clone, Debug, Serialize)]
pub struct RandomConstruction {
    pub code: RsCode,
    pub report: VerificationReport,
    /// Samples drawn, including the successful one.
    pub attempts: u64,
    pub seed: u64,
}

impl RandomConstruction {
    /// Fraction of samples that passed.
    pub fn success_rate(&self) -> f64 {
        1.0 / self.attempts as f64
    }

    pub fn artifact(&self) -> CodeArtifact {
        CodeArtifact {
            code: self.code.clone(),
            provenance: Some(Provenance {
                construction: "random".into(),
                params: serde_json::json!({
                    "n": self.code.n(),
                    "k": self.code.k(),
                    "q": self.code.field().order().ok(),
                    "attempts": self.attempts,
                }),
                seed: self.seed,
            }),
        }
    }
}

/// Las Vegas search: draw a uniform `n`-subset of `F_q` until it passes the
/// criterion.
pub fn random_construction(
    n: usize,
    k: usize,
    q: u64,
    seed: u64,
    max_attempts: u64,
    opts: &VerifyOptions,
) -> Result<RandomConstruction, ConstructionError> {
    let (p, d) = prime_power(q).ok_or(ConstructionError::NotPrimePower(q))?;
    if (n as u64) > q {
        return Err(ConstructionError::FieldTooSmall { q, n });
    }
    let field = FieldSpec::with_degree(p, d, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let alphas = rand::seq::index::sample(&mut rng, q as usize, n)
            .into_iter()
            .map(|i| field.element_from_index(i as u64))
            .collect();
        let code = RsCode::new(field.clone(), k, alphas)?;
        let report = verify_code(&code, opts)?;
        if report.passed() {
            return Ok(RandomConstruction {
                code,
                report,
                attempts: attempt,
                seed,
            });
        }
    }
    Err(ConstructionError::AttemptsExhausted {
        attempts: max_attempts,
        failed: max_attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_a_code_over_f101() {
        let opts = VerifyOptions::default();
        let r = random_construction(6, 2, 101, 0, 100_000, &opts).unwrap();
        assert!(r.report.passed());
        assert!(verify_code(&r.code, &opts).unwrap().passed());
        let again = random_construction(6, 2, 101, 0, 100_000, &opts).unwrap();
        assert_eq!(again.code, r.code);
        assert_eq!(again.attempts, r.attempts);
    }

    #[test]
    fn whole_of_f5() {
        // every sample is all of F_5 in some order
        let opts = VerifyOptions::default();
        match random_construction(5, 2, 5, 1, 20, &opts) {
            Ok(r) => {
                let mut pts: Vec<u64> = r.code.alphas().iter().map(|a| a.coeffs()[0]).collect();
                pts.sort();
                assert_eq!(pts, vec![0, 1, 2, 3, 4]);
            }
            Err(e) => assert_eq!(e, ConstructionError::AttemptsExhausted { attempts: 20, failed: 20 }),
        }
    }

    #[test]
    fn argument_errors() {
        let opts = VerifyOptions::default();
        assert_eq!(
            random_construction(6, 2, 5, 0, 10, &opts).unwrap_err(),
            ConstructionError::FieldTooSmall { q: 5, n: 6 }
        );
        assert_eq!(
            random_construction(3, 2, 6, 0, 10, &opts).unwrap_err(),
            ConstructionError::NotPrimePower(6)
        );
    }

    #[test]
    fn extension_field_q() {
        let r = random_construction(5, 2, 81, 2, 100_000, &VerifyOptions::default()).unwrap();
        assert_eq!(r.code.field().degree(), 4);
    }
}
