//! Bad primes of a defining set: detect vanishing maximal minors over
//! `Z[ζ_n]`, take absolute norms of the others, factor them, and collect the
//! prime divisors.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycInt;
use crate::cycmatrix::{build_generator_matrix, enumerate_minors, CodeSpec, DEFAULT_MINOR_BUDGET};
use crate::error::{Error, Result};
use crate::numth::{factorize, primes_up_to, FactorBudget, FactoredInt};
use crate::serde_dec;

/// Resource limits shared by the whole pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    pub minors: u128,
    pub factor: FactorBudget,
    pub codewords: u128,
    pub chebotarev_max_n: u32,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            minors: DEFAULT_MINOR_BUDGET,
            factor: FactorBudget::default(),
            codewords: 10_000_000,
            chebotarev_max_n: 11,
        }
    }
}

/// One maximal minor with its norm and factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorCertificate {
    /// 1-based column indices.
    pub subset: Vec<usize>,
    pub det: CycInt,
    #[serde(with = "serde_dec::biguint")]
    pub abs_norm: BigUint,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub factors: Option<FactoredInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadPrimeReport {
    pub spec: CodeSpec,
    pub has_zero_minor: bool,
    /// 1-based column subsets whose minor vanishes.
    pub zero_minor_subsets: Vec<Vec<usize>>,
    #[serde(with = "serde_dec::vec_biguint")]
    pub bad_primes: Vec<BigUint>,
    pub certificates: Vec<MinorCertificate>,
}

impl BadPrimeReport {
    pub fn contains(&self, p: u64) -> bool {
        let p = BigUint::from(p);
        self.bad_primes.binary_search(&p).is_ok()
    }

    pub fn bad_primes_u64(&self) -> Vec<u64> {
        self.bad_primes.iter().filter_map(|p| p.to_u64()).collect()
    }
}

/// Full bad-prime report for `spec`. Vanishing minors are recorded but do not
/// stop the computation.
pub fn compute_bad_primes(spec: &CodeSpec, budgets: &Budgets) -> Result<BadPrimeReport> {
    let g = build_generator_matrix(spec);
    let minors = enumerate_minors(&g, spec.k(), budgets.minors)?;

    // Many minors share a value up to sign; each distinct value is normed once.
    let mut distinct: Vec<&CycInt> = minors.iter().map(|m| &m.det).filter(|d| !d.is_zero()).collect();
    distinct.sort_by(|a, b| a.coords().cmp(b.coords()));
    distinct.dedup();
    let norms: HashMap<&CycInt, BigUint> = distinct
        .par_iter()
        .map(|&d| (d, d.norm().abs().to_biguint().expect("absolute value")))
        .collect();

    let mut distinct_norms: Vec<&BigUint> = norms.values().collect();
    distinct_norms.sort();
    distinct_norms.dedup();
    let factored: HashMap<&BigUint, FactoredInt> = distinct_norms
        .par_iter()
        .map(|&v| factorize(v, budgets.factor).map(|f| (v, f)))
        .collect::<Result<_>>()?;

    let mut bad = BTreeSet::new();
    let mut zero_subsets = Vec::new();
    let certificates: Vec<MinorCertificate> = minors
        .iter()
        .map(|m| {
            let subset: Vec<usize> = m.subset.iter().map(|c| c + 1).collect();
            if m.det.is_zero() {
                zero_subsets.push(subset.clone());
                return MinorCertificate {
                    subset,
                    det: m.det.clone(),
                    abs_norm: BigUint::zero(),
                    factors: None,
                };
            }
            let abs_norm = norms[&m.det].clone();
            let factors = factored[&abs_norm].clone();
            bad.extend(factors.primes().cloned());
            MinorCertificate {
                subset,
                det: m.det.clone(),
                abs_norm,
                factors: Some(factors),
            }
        })
        .collect();

    Ok(BadPrimeReport {
        spec: spec.clone(),
        has_zero_minor: !zero_subsets.is_empty(),
        zero_minor_subsets: zero_subsets,
        bad_primes: bad.into_iter().collect(),
        certificates,
    })
}

/// Primes `p ≤ limit` with `p ∉ P_bad` and `p ∤ n`, optionally restricted to
/// `p ≡ 1 (mod n)`.
pub fn good_primes(report: &BadPrimeReport, limit: u64, split_only: bool) -> Result<Vec<u64>> {
    if report.has_zero_minor {
        return Err(Error::ZeroMinorPresent);
    }
    let n = report.spec.n() as u64;
    Ok(primes_up_to(limit)
        .into_iter()
        .filter(|&p| n % p != 0 && !report.contains(p))
        .filter(|&p| !split_only || p % n == 1)
        .collect())
}

/// The first `count` good primes, searching upward without a fixed limit.
pub fn first_good_primes(report: &BadPrimeReport, count: usize) -> Result<Vec<u64>> {
    let mut limit = 128u64;
    loop {
        let found = good_primes(report, limit, false)?;
        if found.len() >= count {
            return Ok(found[..count].to_vec());
        }
        limit *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::build_field;
    use crate::numth::is_prime_u64;

    fn report(n: u32, j: &[u32]) -> BadPrimeReport {
        compute_bad_primes(&CodeSpec::new(n, j.to_vec()).unwrap(), &Budgets::default()).unwrap()
    }

    #[test]
    fn small_examples() {
        let r = report(7, &[0, 1, 3]);
        assert!(!r.has_zero_minor);
        assert_eq!(r.bad_primes_u64(), vec![2, 7]);
        assert_eq!(r.certificates.len(), 35);
        assert_eq!(r.certificates[0].subset, vec![1, 2, 3]);

        assert_eq!(report(7, &[0, 1, 4]).bad_primes_u64(), vec![7]);

        let r = report(12, &[0, 1, 2, 5]);
        assert!(r.has_zero_minor);
        assert_eq!(r.bad_primes_u64(), vec![2, 3, 5, 13, 37]);
    }

    #[test]
    fn full_matrix_minor() {
        let r = report(4, &[0, 1, 2, 3]);
        assert_eq!(r.certificates.len(), 1);
        assert_eq!(r.certificates[0].subset, vec![1, 2, 3, 4]);
        // Fourier matrix of order 4: det² = ±4⁴·unit, so only 2 appears
        assert_eq!(r.bad_primes_u64(), vec![2]);
    }

    #[test]
    fn certificate_invariants() {
        for (n, j) in [(9u32, vec![0u32, 1, 4]), (12, vec![0, 1, 2, 5]), (8, vec![0, 2, 3])] {
            let r = report(n, &j);
            assert_eq!(r.has_zero_minor, !r.zero_minor_subsets.is_empty());
            let mut union = BTreeSet::new();
            for c in &r.certificates {
                assert_eq!(c.abs_norm, c.det.norm().abs().to_biguint().unwrap());
                assert_eq!(c.abs_norm.is_zero(), c.det.is_zero());
                match &c.factors {
                    Some(f) => {
                        assert_eq!(f.recompose(), c.abs_norm);
                        union.extend(f.primes().cloned());
                    }
                    None => assert!(c.det.is_zero()),
                }
            }
            assert_eq!(r.bad_primes, union.into_iter().collect::<Vec<_>>());
        }
    }

    #[test]
    fn good_prime_examples() {
        let r = report(5, &[0, 1, 3]);
        assert_eq!(good_primes(&r, 100, true).unwrap(), vec![11, 31, 41, 61, 71]);
        let r = report(7, &[0, 1, 3]);
        assert_eq!(good_primes(&r, 100, true).unwrap(), vec![29, 43, 71]);
        assert_eq!(good_primes(&report(9, &[0, 1, 4]), 100, false), Err(Error::ZeroMinorPresent));
        assert_eq!(first_good_primes(&r, 3).unwrap(), vec![3, 5, 11]);
    }

    #[test]
    fn every_unramified_bad_prime_has_a_vanishing_witness() {
        for (n, j) in [(7u32, vec![0u32, 1, 3]), (7, vec![0, 2, 3]), (8, vec![0, 2, 3]), (12, vec![0, 2, 7])] {
            let r = report(n, &j);
            for p in r.bad_primes_u64() {
                if n as u64 % p == 0 {
                    continue;
                }
                let ctx = build_field(p, n as u64).unwrap();
                let roots = ctx.conjugate_contexts();
                let witnessed = r.certificates.iter().any(|c| {
                    roots
                        .iter()
                        .any(|z| z.reduce_element(&c.det).unwrap().is_zero())
                });
                assert!(witnessed, "n={n} J={j:?} p={p}");
            }
        }
    }

    #[test]
    fn good_primes_keep_every_minor_nonzero() {
        for (n, j) in [(7u32, vec![0u32, 1, 3]), (8, vec![1, 2, 4]), (10, vec![0, 1, 4])] {
            let r = report(n, &j);
            for p in good_primes(&r, 60, false).unwrap() {
                let ctx = build_field(p, n as u64).unwrap();
                for c in &r.certificates {
                    assert!(!ctx.reduce_element(&c.det).unwrap().is_zero(), "n={n} p={p}");
                }
            }
            // and each listed bad prime is prime
            assert!(r.bad_primes_u64().iter().all(|&p| is_prime_u64(p)));
        }
    }

    #[test]
    fn invariant_under_affine_change_of_defining_set() {
        // J ↦ J + t multiplies row i by a unit column scaling, J ↦ uJ permutes
        // columns; both leave P_bad unchanged.
        let base = report(7, &[0, 1, 3]);
        let shifted = report(7, &[1, 2, 4]);
        let scaled = report(7, &[0, 2, 6]);
        assert_eq!(base.bad_primes, shifted.bad_primes);
        assert_eq!(base.bad_primes, scaled.bad_primes);
    }

    #[test]
    fn json_round_trip() {
        let r = report(7, &[0, 1, 3]);
        let text = serde_json::to_string(&r).unwrap();
        let back: BadPrimeReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        let zero = report(9, &[0, 1, 4]);
        let back: BadPrimeReport = serde_json::from_str(&serde_json::to_string(&zero).unwrap()).unwrap();
        assert_eq!(back, zero);
    }
}
