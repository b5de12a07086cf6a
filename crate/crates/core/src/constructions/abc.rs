use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::criterion::{verify_ring_code, VerificationReport, VerifyOptions};
use crate::field::prime::next_prime_above;
use crate::field::RingPoly;

/// Largest `ell` built without `force`; `k = 2` gives 576, `k = 3` gives 518400.
pub const ABC_WORK_CAP: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbcParams {
    pub k: usize,
    pub n: usize,
    /// `((2k)!)^2`
    pub ell: u64,
    /// Smallest prime above `k^2 ell` that is at least `n`.
    pub p: u64,
    /// `k^2 ell`, the degree of the extension the points live in.
    pub degree_bound: u64,
}

/// Points `(x - i)^ell` in `F_p[x]`, serialized with their parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbcArtifact {
    pub characteristic: u64,
    pub n: usize,
    pub k: usize,
    pub ell: u64,
    pub degree_bound: u64,
    pub alphas: Vec<Vec<u64>>,
}

impl AbcArtifact {
    pub fn new(params: &AbcParams, alphas: &[RingPoly]) -> Self {
        AbcArtifact {
            characteristic: params.p,
            n: params.n,
            k: params.k,
            ell: params.ell,
            degree_bound: params.degree_bound,
            alphas: alphas.iter().map(|a| a.coeffs().to_vec()).collect(),
        }
    }

    pub fn params(&self) -> AbcParams {
        AbcParams {
            k: self.k,
            n: self.n,
            ell: self.ell,
            p: self.characteristic,
            degree_bound: self.degree_bound,
        }
    }

    pub fn ring_alphas(&self) -> Vec<RingPoly> {
        self.alphas
            .iter()
            .map(|c| RingPoly::new(self.characteristic, c.clone()))
            .collect()
    }
}

fn abc_params(k: usize, n: usize) -> Result<AbcParams, ConstructionError> {
    let fact = (1..=2 * k as u64).try_fold(1u64, |acc, v| acc.checked_mul(v));
    let ell = fact.and_then(|f| f.checked_mul(f)).ok_or(ConstructionError::Overflow)?;
    let degree_bound = ell
        .checked_mul((k * k) as u64)
        .ok_or(ConstructionError::Overflow)?;
    let p = next_prime_above(degree_bound.max(n.saturating_sub(1) as u64));
    Ok(AbcParams { k, n, ell, p, degree_bound })
}

/// Evaluation points `alpha_i = (x - i)^ell`, `1 <= i <= n`, over `F_p`.
pub fn construct_abc(k: usize, n: usize, force: bool) -> Result<(AbcParams, Vec<RingPoly>), ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::InvalidAbcLength { k, n, p: 0 });
    }
    let params = abc_params(k, n)?;
    if n <= 2 * k - 1 || n as u64 > params.p {
        return Err(ConstructionError::InvalidAbcLength { k, n, p: params.p });
    }
    if params.ell > ABC_WORK_CAP && !force {
        return Err(ConstructionError::WorkCapExceeded { k, ell: params.ell });
    }
    let p = params.p;
    let alphas = (1..=n as u64)
        .map(|i| RingPoly::new(p, vec![(p - i % p) % p, 1]).pow(params.ell))
        .collect();
    Ok((params, alphas))
}

/// Runs the ring-level criterion with the certificate bound `k^2 ell`.
pub fn verify_abc(
    params: &AbcParams,
    alphas: &[RingPoly],
    opts: &VerifyOptions,
) -> Result<VerificationReport, ConstructionError> {
    Ok(verify_ring_code(alphas, params.k, params.degree_bound as usize, opts)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criterion::CriterionError;
    use crate::field::Degree;

    #[test]
    fn parameters_for_k2() {
        let (params, alphas) = construct_abc(2, 8, false).unwrap();
        assert_eq!((params.ell, params.p, params.degree_bound), (576, 2309, 2304));
        assert_eq!(alphas.len(), 8);
        assert!(alphas.iter().all(|a| a.degree() == Degree::Finite(576)));
        assert_eq!(alphas[0].eval(1), 0);
        assert_eq!(alphas[2].eval(3), 0);
        assert_eq!(alphas[0].eval(0), 1);
    }

    #[test]
    fn rejected_parameters() {
        assert!(matches!(construct_abc(2, 3, false), Err(ConstructionError::InvalidAbcLength { .. })));
        assert_eq!(abc_params(2, 2310).unwrap().p, 2311);
        assert_eq!(
            construct_abc(3, 8, false),
            Err(ConstructionError::WorkCapExceeded { k: 3, ell: 518_400 })
        );
        assert_eq!(abc_params(3, 8).unwrap().p, 4_665_653);
    }

    #[test]
    fn small_length_verifies_and_bound_matters() {
        let (params, alphas) = construct_abc(2, 4, false).unwrap();
        let opts = VerifyOptions::default();
        let rep = verify_abc(&params, &alphas, &opts).unwrap();
        assert!(rep.passed());
        let tight = AbcParams { degree_bound: params.ell, ..params };
        match verify_abc(&tight, &alphas, &opts) {
            Err(ConstructionError::Criterion(CriterionError::DegreeOverflow { degree, .. })) => {
                assert!(degree as u64 >= params.ell && degree <= 1152)
            }
            other => panic!("{other:?}"),
        }
        let mut tampered = alphas.clone();
        tampered[1] = tampered[0].clone();
        tampered[2] = tampered[0].clone();
        assert!(!verify_abc(&params, &tampered, &opts).unwrap().passed());
    }

    #[test]
    fn artifact_round_trip() {
        let (params, alphas) = construct_abc(2, 5, false).unwrap();
        let art = AbcArtifact::new(&params, &alphas);
        let back: AbcArtifact = serde_json::from_str(&serde_json::to_string(&art).unwrap()).unwrap();
        assert_eq!(back.params(), params);
        assert_eq!(back.ring_alphas(), alphas);
    }
}
