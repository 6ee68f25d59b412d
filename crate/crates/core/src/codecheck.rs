//! Analysis of the reduced code over `F_q`: MDS test, exhaustive minimum
//! distance, cyclicity, Schur square, and the RS / non-RS verdict.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::badprimes::{compute_bad_primes, first_good_primes, BadPrimeReport, Budgets};
use crate::cycmatrix::{build_generator_matrix, subsets_lex, CodeSpec};
use crate::error::{Error, Result};
use crate::ffield::{build_field, Fe, FieldCtx, FieldSummary};
use crate::linalg::{FqMatrix, FqMatrixRepr};
use crate::numth::is_prime_u64;
use crate::serde_dec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "RS")]
    Rs,
    #[serde(rename = "NonRS")]
    NonRs,
    Indeterminate,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Rs => "RS",
            Classification::NonRs => "NonRS",
            Classification::Indeterminate => "Indeterminate",
        })
    }
}

/// Which code the Schur-square test was applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestedSide {
    Code,
    Dual,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsVerdict {
    pub classification: Classification,
    pub side: TestedSide,
    /// Dimension of the tested code and of its Schur square.
    pub tested_dim: usize,
    pub tested_schur_dim: usize,
}

/// All maximal minors are nonzero. Fails with `RankDeficient` when the rows
/// are dependent.
pub fn is_mds(m: &FqMatrix, ctx: &FieldCtx) -> Result<bool> {
    let k = m.rows();
    let rank = m.rank(ctx);
    if rank < k {
        return Err(Error::RankDeficient { rank, rows: k });
    }
    let subsets = subsets_lex(m.cols(), k);
    subsets
        .par_iter()
        .map(|s| m.select_columns(s).determinant(ctx).map(|d| !d.is_zero()))
        .try_reduce(|| true, |a, b| Ok(a && b))
}

/// Exact minimum weight over all nonzero codewords, by enumerating the
/// `q^k` messages.
pub fn brute_min_distance(m: &FqMatrix, ctx: &FieldCtx, budget: u128) -> Result<usize> {
    let k = m.rows();
    let n = m.cols();
    let f = ctx.degree();
    let p = ctx.p();
    let words = (ctx.order() as u128)
        .checked_pow(k as u32)
        .filter(|&w| w <= budget)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "{}^{k} codewords exceed the budget of {budget}",
                ctx.order()
            ))
        })?;
    if words <= 1 {
        return Err(Error::DimensionMismatch("code has no nonzero codewords".into()));
    }

    // digit t scales row t / f by x^(t % f); a message is a base-p number
    let steps: Vec<Vec<Fe>> = (0..k * f)
        .map(|t| {
            let mut c = vec![0u64; f];
            c[t % f] = 1;
            let s = ctx.from_coords(&c);
            m.row(t / f).iter().map(|&a| ctx.mul(s, a)).collect()
        })
        .collect();
    let digits = k * f;
    let mut top = 0;
    while top < digits && (p as u128).pow(top as u32) < 256 {
        top += 1;
    }
    let low = digits - top;
    let chunks = (p as u64).pow(top as u32);

    let best = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut word = vec![Fe::ZERO; n];
            let mut rest = chunk;
            for t in low..digits {
                let d = rest % p;
                rest /= p;
                for _ in 0..d {
                    for (w, &s) in word.iter_mut().zip(&steps[t]) {
                        *w = ctx.add(*w, s);
                    }
                }
            }
            let weight = |w: &[Fe]| w.iter().filter(|e| !e.is_zero()).count();
            let mut best = usize::MAX;
            let mut current = weight(&word);
            if current > 0 {
                best = current;
            }
            let mut counter = vec![0u64; low];
            'outer: loop {
                let mut t = 0;
                loop {
                    if t == low {
                        break 'outer;
                    }
                    for (w, &s) in word.iter_mut().zip(&steps[t]) {
                        let old = !w.is_zero();
                        *w = ctx.add(*w, s);
                        let new = !w.is_zero();
                        current = current + new as usize - old as usize;
                    }
                    counter[t] += 1;
                    if counter[t] < p {
                        break;
                    }
                    counter[t] = 0;
                    t += 1;
                }
                if current > 0 && current < best {
                    best = current;
                }
            }
            best
        })
        .min()
        .unwrap_or(usize::MAX);
    if best == usize::MAX {
        return Err(Error::RankDeficient { rank: 0, rows: k });
    }
    Ok(best)
}

fn shift_right(v: &[Fe]) -> Vec<Fe> {
    let n = v.len();
    (0..n).map(|i| v[(i + n - 1) % n]).collect()
}

/// The right cyclic shift of every basis row stays in the row space.
pub fn is_cyclic(m: &FqMatrix, ctx: &FieldCtx) -> bool {
    let basis = m.row_space_basis(ctx);
    (0..basis.rows()).all(|i| basis.spans(&shift_right(basis.row(i)), ctx))
}

/// Rank of all coordinate-wise products of pairs of basis rows.
pub fn schur_square_dim(m: &FqMatrix, ctx: &FieldCtx) -> usize {
    let basis = m.row_space_basis(ctx);
    let k = basis.rows();
    if k == 0 {
        return 0;
    }
    let mut products = Vec::with_capacity(k * (k + 1) / 2);
    for i in 0..k {
        for j in i..k {
            products.push(
                basis
                    .row(i)
                    .iter()
                    .zip(basis.row(j))
                    .map(|(&a, &b)| ctx.mul(a, b))
                    .collect(),
            );
        }
    }
    FqMatrix::from_rows(products).rank(ctx)
}

/// RS verdict for an MDS code through the Schur-square dimension: for
/// `k ≤ (n−1)/2` the code is GRS iff `dim C² = 2k − 1`. Otherwise the dual is
/// tested when it qualifies.
pub fn classify_rs(m: &FqMatrix, ctx: &FieldCtx) -> Result<RsVerdict> {
    if !is_mds(m, ctx)? {
        return Err(Error::NotMds);
    }
    let n = m.cols();
    let k = m.rows();
    let verdict = |code: &FqMatrix, dim: usize, side: TestedSide| {
        let schur = schur_square_dim(code, ctx);
        RsVerdict {
            classification: if schur == 2 * dim - 1 {
                Classification::Rs
            } else {
                Classification::NonRs
            },
            side,
            tested_dim: dim,
            tested_schur_dim: schur,
        }
    };
    if 2 * k < n {
        return Ok(verdict(m, k, TestedSide::Code));
    }
    let dual_dim = n - k;
    if dual_dim >= 1 && 2 * dual_dim < n {
        let dual = m.nullspace(ctx);
        return Ok(verdict(&dual, dual_dim, TestedSide::Dual));
    }
    Ok(RsVerdict {
        classification: Classification::Indeterminate,
        side: TestedSide::Neither,
        tested_dim: 0,
        tested_schur_dim: 0,
    })
}

/// `J` (sorted, distinct) has constant consecutive differences.
pub fn is_arithmetic_progression(j: &[u32]) -> bool {
    j.windows(3).all(|w| w[1] - w[0] == w[2] - w[1])
}

/// `|{(a + b) mod n : a, b ∈ J}|`.
pub fn sumset_mod_size(j: &[u32], n: u32) -> usize {
    let mut sums = BTreeSet::new();
    for &a in j {
        for &b in j {
            sums.insert((a + b) % n);
        }
    }
    sums.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeReport {
    pub spec: CodeSpec,
    pub field: FieldSummary,
    #[serde(with = "serde_dec::vec_biguint")]
    pub bad_primes: Vec<BigUint>,
    pub generator: FqMatrixRepr,
    pub is_mds: bool,
    pub is_cyclic: bool,
    pub min_distance: Option<usize>,
    pub schur_dim: usize,
    pub classification: Classification,
    pub verdict: RsVerdict,
    pub ap_flag: bool,
    pub sumset_mod_size: usize,
}

/// Full pipeline at a given prime, reusing a bad-prime report.
pub fn analyze_with_report(report: &BadPrimeReport, p: u64, budgets: &Budgets) -> Result<CodeReport> {
    let spec = &report.spec;
    if report.has_zero_minor {
        return Err(Error::ZeroMinorPresent);
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if spec.n() as u64 % p == 0 || report.contains(p) {
        return Err(Error::BadPrime { p });
    }
    let ctx = build_field(p, spec.n() as u64)?;
    analyze_in_field(report, &ctx, budgets)
}

/// Pipeline in an explicit field (any root choice). The caller is
/// responsible for the prime being good.
pub fn analyze_in_field(report: &BadPrimeReport, ctx: &FieldCtx, budgets: &Budgets) -> Result<CodeReport> {
    let spec = &report.spec;
    let g = build_generator_matrix(spec);
    let reduced = ctx.reduce_matrix(&g)?;
    let mds = match is_mds(&reduced, ctx) {
        Ok(v) => v,
        Err(Error::RankDeficient { .. }) => false,
        Err(e) => return Err(e),
    };
    if !mds {
        return Err(Error::InternalConsistency(format!(
            "{spec} reduces to a non-MDS code at good prime {}",
            ctx.p()
        )));
    }
    let n = spec.n() as usize;
    let k = spec.k();
    let min_distance = match brute_min_distance(&reduced, ctx, budgets.codewords) {
        Ok(d) => Some(d),
        Err(Error::BudgetExceeded(_)) => None,
        Err(e) => return Err(e),
    };
    if let Some(d) = min_distance {
        if d != n - k + 1 {
            return Err(Error::InternalConsistency(format!(
                "{spec} has minimum distance {d} over F_{}, expected {}",
                ctx.order(),
                n - k + 1
            )));
        }
    }
    let verdict = classify_rs(&reduced, ctx)?;
    Ok(CodeReport {
        spec: spec.clone(),
        field: ctx.summary(),
        bad_primes: report.bad_primes.clone(),
        generator: reduced.to_repr(ctx),
        is_mds: mds,
        is_cyclic: is_cyclic(&reduced, ctx),
        min_distance,
        schur_dim: schur_square_dim(&reduced, ctx),
        classification: verdict.classification,
        verdict,
        ap_flag: is_arithmetic_progression(spec.defining_set()),
        sumset_mod_size: sumset_mod_size(spec.defining_set(), spec.n()),
    })
}

pub fn analyze(spec: &CodeSpec, p: u64, budgets: &Budgets) -> Result<CodeReport> {
    let report = compute_bad_primes(spec, budgets)?;
    analyze_with_report(&report, p, budgets)
}

/// Reports at the first `count` good primes not exceeding `prime_limit`.
pub fn analyze_auto(spec: &CodeSpec, prime_limit: u64, count: usize, budgets: &Budgets) -> Result<Vec<CodeReport>> {
    let report = compute_bad_primes(spec, budgets)?;
    let primes = crate::badprimes::good_primes(&report, prime_limit, false)?;
    primes
        .into_iter()
        .take(count)
        .map(|p| analyze_with_report(&report, p, budgets))
        .collect()
}

/// Smallest good prime for `spec`, with its report.
pub fn analyze_smallest(spec: &CodeSpec, budgets: &Budgets) -> Result<CodeReport> {
    let report = compute_bad_primes(spec, budgets)?;
    let p = first_good_primes(&report, 1)?[0];
    analyze_with_report(&report, p, budgets)
}

/// `J = {0, 1, 2, 4, …, 2^{k−2}}` and `n = 2^s + 1`.
pub fn binary_defining_set(s: u32, k: usize) -> Result<CodeSpec> {
    if s < 3 || k < 4 {
        return Err(Error::PreconditionViolated(format!(
            "need s ≥ 3 and k ≥ 4, got s = {s}, k = {k}"
        )));
    }
    if s > 20 || k - 2 >= 32 {
        return Err(Error::PreconditionViolated(format!("s = {s}, k = {k} out of range")));
    }
    let n = (1u32 << s) + 1;
    let top = 1u64 << (k - 2);
    if 2 * top >= n as u64 {
        return Err(Error::PreconditionViolated(format!(
            "2^{} = {top} is not below n/2 = {n}/2",
            k - 2
        )));
    }
    let mut j = vec![0u32];
    j.extend((0..=k - 2).map(|e| 1u32 << e));
    CodeSpec::new(n, j)
}

/// The binary family: analysis at `p = 2` over `F_{2^{2s}}`.
pub fn binary_construction(s: u32, k: usize, budgets: &Budgets) -> Result<CodeReport> {
    let spec = binary_defining_set(s, k)?;
    let report = analyze(&spec, 2, budgets)?;
    if report.field.f != 2 * s as u64 {
        return Err(Error::InternalConsistency(format!(
            "order of 2 modulo {} is {}, expected {}",
            spec.n(),
            report.field.f,
            2 * s
        )));
    }
    Ok(report)
}
