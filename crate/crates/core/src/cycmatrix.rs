//! Matrices over `Z[ζ_n]`: the generator matrix `G = (ζ^{j_i·l})`, exact
//! determinants, maximal-minor enumeration, the Fourier-matrix check for
//! prime `n`, and lifting of finite-field matrices back to `Z[ζ_n]`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{ring, CycInt, CycRing};
use crate::error::{Error, Result};
use crate::ffield::FieldCtx;
use crate::linalg::FqMatrix;
use crate::numth::is_prime_u64;

/// Default cap on the number of maximal minors enumerated.
pub const DEFAULT_MINOR_BUDGET: u128 = 1_000_000;

/// Length `n` and defining set `J` of the code generated by `(ζ_n^{j·l})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeSpec {
    n: u32,
    j: Vec<u32>,
}

impl CodeSpec {
    /// `J` must be strictly increasing with entries in `[0, n)`.
    pub fn new(n: u32, j: Vec<u32>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec(format!("length {n} is too small")));
        }
        if j.is_empty() || j.len() > n as usize {
            return Err(Error::InvalidSpec(format!(
                "defining set must have between 1 and {n} elements, got {}",
                j.len()
            )));
        }
        if let Some(bad) = j.iter().find(|&&x| x >= n) {
            return Err(Error::InvalidSpec(format!("{bad} is not in [0, {n})")));
        }
        if j.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec(format!(
                "defining set {j:?} is not strictly increasing"
            )));
        }
        Ok(CodeSpec { n, j })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.j.len()
    }

    pub fn defining_set(&self) -> &[u32] {
        &self.j
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j: Vec<String> = self.j.iter().map(u32::to_string).collect();
        write!(f, "(n={}, J={{{}}})", self.n, j.join(","))
    }
}

/// Row-major matrix over `Z[ζ_n]`.
///
/// When every entry is a power of `ζ` the exponents are kept alongside the
/// entries; determinants of such matrices never leave the exponent domain
/// until the final reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycMatrix {
    n: u32,
    rows: usize,
    cols: usize,
    entries: Vec<CycInt>,
    exponents: Option<Vec<u32>>,
}

impl CycMatrix {
    pub fn new(n: u32, rows: usize, cols: usize, entries: Vec<CycInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| e.conductor() != n) {
            return Err(Error::ConductorMismatch(n, e.conductor()));
        }
        Ok(CycMatrix {
            n,
            rows,
            cols,
            entries,
            exponents: None,
        })
    }

    /// Entry `(i, j)` is `ζ_n^{exps[i·cols + j]}`.
    pub fn from_exponents(n: u32, rows: usize, cols: usize, exps: Vec<u32>) -> Self {
        assert_eq!(exps.len(), rows * cols);
        let exps: Vec<u32> = exps.into_iter().map(|e| e % n).collect();
        let entries = exps
            .iter()
            .map(|&e| CycInt::from_power(n, e as i64))
            .collect();
        CycMatrix {
            n,
            rows,
            cols,
            entries,
            exponents: Some(exps),
        }
    }

    /// Entry `(i, j)` is `ζ_n^{row_exps[i] · col_nodes[j]}`.
    pub fn power_matrix(n: u32, row_exps: &[u32], col_nodes: &[u32]) -> Self {
        let exps = row_exps
            .iter()
            .flat_map(|&r| col_nodes.iter().map(move |&c| ((r as u64 * c as u64) % n as u64) as u32))
            .collect();
        Self::from_exponents(n, row_exps.len(), col_nodes.len(), exps)
    }

    pub fn identity(n: u32, size: usize) -> Self {
        let entries = (0..size * size)
            .map(|i| {
                if i / size == i % size {
                    CycInt::one(n)
                } else {
                    CycInt::zero(n)
                }
            })
            .collect();
        CycMatrix::new(n, size, size, entries).unwrap()
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycInt {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[CycInt] {
        &self.entries
    }

    pub fn exponents(&self) -> Option<&[u32]> {
        self.exponents.as_deref()
    }

    /// The same matrix without exponent bookkeeping, forcing generic
    /// arithmetic.
    pub fn without_exponents(&self) -> Self {
        CycMatrix {
            exponents: None,
            ..self.clone()
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let pick = |v: &[CycInt]| -> Vec<CycInt> {
            (0..self.rows)
                .flat_map(|i| cols.iter().map(move |&j| v[i * self.cols + j].clone()))
                .collect()
        };
        let exponents = self.exponents.as_ref().map(|e| {
            (0..self.rows)
                .flat_map(|i| cols.iter().map(move |&j| e[i * self.cols + j]))
                .collect()
        });
        CycMatrix {
            n: self.n,
            rows: self.rows,
            cols: cols.len(),
            entries: pick(&self.entries),
            exponents,
        }
    }

    pub fn swap_columns(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
            if let Some(e) = self.exponents.as_mut() {
                e.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

/// `G_{i,l} = ζ_n^{j_i · l}` for `0 ≤ l < n`.
pub fn build_generator_matrix(spec: &CodeSpec) -> CycMatrix {
    let nodes: Vec<u32> = (0..spec.n()).collect();
    CycMatrix::power_matrix(spec.n(), spec.defining_set(), &nodes)
}

fn require_square(m: &CycMatrix) -> Result<()> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    Ok(())
}

/// Exact determinant. Power matrices go through the exponent-domain
/// expansion; otherwise cofactor expansion up to 6×6 and Berkowitz above.
pub fn determinant(m: &CycMatrix) -> Result<CycInt> {
    require_square(m)?;
    if m.rows == 0 {
        return Ok(CycInt::one(m.n));
    }
    if m.exponents.is_some() {
        let mut minors = enumerate_minors_unchecked(m);
        return Ok(minors.pop().unwrap().det);
    }
    if m.rows <= 6 {
        determinant_cofactor(m)
    } else {
        determinant_berkowitz(m)
    }
}

/// Laplace expansion, always along the line with the most zero entries.
pub fn determinant_cofactor(m: &CycMatrix) -> Result<CycInt> {
    require_square(m)?;
    let idx: Vec<usize> = (0..m.rows).collect();
    Ok(cofactor(m, &idx, &idx))
}

fn cofactor(m: &CycMatrix, rows: &[usize], cols: &[usize]) -> CycInt {
    let size = rows.len();
    match size {
        0 => return CycInt::one(m.n),
        1 => return m.get(rows[0], cols[0]).clone(),
        2 => {
            let a = m.get(rows[0], cols[0]) * m.get(rows[1], cols[1]);
            let b = m.get(rows[0], cols[1]) * m.get(rows[1], cols[0]);
            return &a - &b;
        }
        _ => {}
    }
    let zeros_in_col = |c: usize| rows.iter().filter(|&&r| m.get(r, c).is_zero()).count();
    let zeros_in_row = |r: usize| cols.iter().filter(|&&c| m.get(r, c).is_zero()).count();
    let (best_col, col_zeros) = cols
        .iter()
        .enumerate()
        .map(|(pos, &c)| (pos, zeros_in_col(c)))
        .max_by_key(|&(pos, z)| (z, std::cmp::Reverse(pos)))
        .unwrap();
    let (best_row, row_zeros) = rows
        .iter()
        .enumerate()
        .map(|(pos, &r)| (pos, zeros_in_row(r)))
        .max_by_key(|&(pos, z)| (z, std::cmp::Reverse(pos)))
        .unwrap();

    let mut acc = CycInt::zero(m.n);
    if row_zeros > col_zeros {
        let r = rows[best_row];
        let sub_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
        for (pos, &c) in cols.iter().enumerate() {
            let a = m.get(r, c);
            if a.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a * &cofactor(m, &sub_rows, &sub_cols);
            acc = if (best_row + pos) % 2 == 0 { &acc + &term } else { &acc - &term };
        }
    } else {
        let c = cols[best_col];
        let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        for (pos, &r) in rows.iter().enumerate() {
            let a = m.get(r, c);
            if a.is_zero() {
                continue;
            }
            let sub_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
            let term = a * &cofactor(m, &sub_rows, &sub_cols);
            acc = if (best_col + pos) % 2 == 0 { &acc + &term } else { &acc - &term };
        }
    }
    acc
}

/// Division-free determinant through Berkowitz's characteristic polynomial
/// recurrence.
pub fn determinant_berkowitz(m: &CycMatrix) -> Result<CycInt> {
    require_square(m)?;
    let n = m.n;
    let size = m.rows;
    if size == 0 {
        return Ok(CycInt::one(n));
    }
    let zero = CycInt::zero(n);
    // coefficients of det(xI − A_r), highest degree first
    let mut charpoly = vec![CycInt::one(n), -m.get(0, 0)];
    for r in 1..size {
        // Toeplitz column: 1, −a_rr, −R·C, −R·A·C, …, −R·A^{r−1}·C
        let mut toeplitz = Vec::with_capacity(r + 2);
        toeplitz.push(CycInt::one(n));
        toeplitz.push(-m.get(r, r));
        let mut v: Vec<CycInt> = (0..r).map(|i| m.get(i, r).clone()).collect();
        for _ in 0..r {
            let rc = (0..r).fold(zero.clone(), |acc, j| &acc + &(m.get(r, j) * &v[j]));
            toeplitz.push(-rc);
            v = (0..r)
                .map(|i| (0..r).fold(zero.clone(), |acc, j| &acc + &(m.get(i, j) * &v[j])))
                .collect();
        }
        charpoly = (0..r + 2)
            .map(|i| {
                (0..=i.min(r))
                    .fold(zero.clone(), |acc, j| &acc + &(&toeplitz[i - j] * &charpoly[j]))
            })
            .collect();
    }
    let last = charpoly.pop().unwrap();
    Ok(if size % 2 == 0 { last } else { -last })
}

/// A maximal minor: 0-based column subset and its exact determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minor {
    pub subset: Vec<usize>,
    pub det: CycInt,
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets_lex(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n as u64, k as u64) as usize);
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            break;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

struct ColexRanker {
    table: Vec<Vec<usize>>,
}

impl ColexRanker {
    fn new(n: usize, k: usize) -> Self {
        let table = (0..=n)
            .map(|c| (0..=k).map(|i| binomial(c as u64, i as u64) as usize).collect())
            .collect();
        ColexRanker { table }
    }

    fn rank(&self, subset: &[usize]) -> usize {
        subset
            .iter()
            .enumerate()
            .map(|(i, &c)| self.table[c][i + 1])
            .sum()
    }

    fn rank_without(&self, subset: &[usize], skip: usize) -> usize {
        subset
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .enumerate()
            .map(|(i, (_, &c))| self.table[c][i + 1])
            .sum()
    }
}

// Row-by-row Laplace expansion over column subsets for a power matrix. Level
// r holds det(rows 0..r, C) for every r-subset C, as a vector indexed by
// exponent mod n. Returns the level-`rows` values in lexicographic subset
// order, or None if a coefficient leaves the i64 range.
fn exponent_minors_cyclic(
    n: u32,
    rows: usize,
    cols: usize,
    exps: &[u32],
) -> Option<Vec<(Vec<usize>, Vec<i64>)>> {
    let width = n as usize;
    let ranker = ColexRanker::new(cols, rows);
    let mut unit = vec![0i64; width];
    unit[0] = 1;
    let mut prev: Vec<Vec<i64>> = vec![unit];
    for r in 1..=rows {
        let subsets = subsets_lex(cols, r);
        let computed: Option<Vec<(usize, Vec<i64>)>> = subsets
            .par_iter()
            .map(|subset| {
                let mut acc = vec![0i64; width];
                for (t, &c) in subset.iter().enumerate() {
                    let sub = &prev[ranker.rank_without(subset, t)];
                    let shift = exps[(r - 1) * cols + c] as usize;
                    let negate = (r - 1 + t) % 2 == 1;
                    for (e, &v) in sub.iter().enumerate() {
                        if v == 0 {
                            continue;
                        }
                        let slot = &mut acc[(e + shift) % width];
                        *slot = if negate {
                            slot.checked_sub(v)?
                        } else {
                            slot.checked_add(v)?
                        };
                    }
                }
                Some((ranker.rank(subset), acc))
            })
            .collect();
        let computed = computed?;
        if r == rows {
            return Some(
                subsets
                    .into_iter()
                    .zip(computed)
                    .map(|(s, (_, v))| (s, v))
                    .collect(),
            );
        }
        let mut level = vec![Vec::new(); computed.len()];
        for (rank, v) in computed {
            level[rank] = v;
        }
        prev = level;
    }
    unreachable!("rows >= 1")
}

// Same expansion with generic ring arithmetic.
fn generic_minors(m: &CycMatrix) -> Vec<Minor> {
    let ranker = ColexRanker::new(m.cols, m.rows);
    let mut prev: Vec<CycInt> = vec![CycInt::one(m.n)];
    for r in 1..=m.rows {
        let subsets = subsets_lex(m.cols, r);
        let computed: Vec<(usize, CycInt)> = subsets
            .par_iter()
            .map(|subset| {
                let mut acc = CycInt::zero(m.n);
                for (t, &c) in subset.iter().enumerate() {
                    let a = m.get(r - 1, c);
                    if a.is_zero() {
                        continue;
                    }
                    let term = a * &prev[ranker.rank_without(subset, t)];
                    acc = if (r - 1 + t) % 2 == 1 { &acc - &term } else { &acc + &term };
                }
                (ranker.rank(subset), acc)
            })
            .collect();
        if r == m.rows {
            return subsets
                .into_iter()
                .zip(computed)
                .map(|(subset, (_, det))| Minor { subset, det })
                .collect();
        }
        let mut level = vec![CycInt::zero(m.n); computed.len()];
        for (rank, v) in computed {
            level[rank] = v;
        }
        prev = level;
    }
    unreachable!("rows >= 1")
}

fn enumerate_minors_unchecked(g: &CycMatrix) -> Vec<Minor> {
    if let Some(exps) = g.exponents.as_deref() {
        if let Some(cyclic) = exponent_minors_cyclic(g.n, g.rows, g.cols, exps) {
            let ring: Arc<CycRing> = ring(g.n);
            return cyclic
                .into_par_iter()
                .map(|(subset, v)| Minor {
                    subset,
                    det: CycInt::from_cyclic_i64(ring.clone(), &v),
                })
                .collect();
        }
    }
    generic_minors(g)
}

/// Every `k×k` column minor of `g` (with `k = g.rows()`), in lexicographic
/// subset order. The order and values do not depend on thread scheduling.
pub fn enumerate_minors(g: &CycMatrix, k: usize, budget: u128) -> Result<Vec<Minor>> {
    if k != g.rows {
        return Err(Error::DimensionMismatch(format!(
            "minor size {k} does not match {} rows",
            g.rows
        )));
    }
    if k == 0 || k > g.cols {
        return Err(Error::DimensionMismatch(format!(
            "cannot take {k}x{k} minors of a {}x{} matrix",
            g.rows, g.cols
        )));
    }
    let count = binomial(g.cols as u64, k as u64);
    if count > budget {
        return Err(Error::MinorBudgetExceeded { count, budget });
    }
    Ok(enumerate_minors_unchecked(g))
}

/// Outcome of the exhaustive Fourier-matrix check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChebotarevOutcome {
    pub n: u32,
    pub submatrices: u128,
    /// First vanishing submatrix found, as (rows, cols).
    pub counterexample: Option<(Vec<usize>, Vec<usize>)>,
}

impl ChebotarevOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Check that every square submatrix of `(ζ_n^{ij})_{0≤i,j<n}` is
/// nonsingular over `Z[ζ_n]`, for prime `n ≤ max_n`.
pub fn chebotarev_check(n: u32, max_n: u32) -> Result<ChebotarevOutcome> {
    if !is_prime_u64(n as u64) {
        return Err(Error::NotPrime(n as u64));
    }
    if n > max_n {
        return Err(Error::BudgetExceeded(format!(
            "Fourier matrix of size {n} exceeds the limit {max_n}"
        )));
    }
    let ring = ring(n);
    let nodes: Vec<u32> = (0..n).collect();
    let mut count = 0u128;
    for k in 1..=n as usize {
        for rows in subsets_lex(n as usize, k) {
            let row_exps: Vec<u32> = rows.iter().map(|&r| r as u32).collect();
            let v = CycMatrix::power_matrix(n, &row_exps, &nodes);
            let exps = v.exponents.as_deref().unwrap();
            let zero_at = match exponent_minors_cyclic(n, k, n as usize, exps) {
                Some(cyclic) => cyclic.into_iter().find_map(|(cols, c)| {
                    let is_zero = match ring.reduce_cyclic_i64(&c) {
                        Some(red) => red.iter().all(|&x| x == 0),
                        None => CycInt::from_cyclic_i64(ring.clone(), &c).is_zero(),
                    };
                    is_zero.then_some(cols)
                }),
                None => generic_minors(&v)
                    .into_iter()
                    .find(|m| m.det.is_zero())
                    .map(|m| m.subset),
            };
            count += binomial(n as u64, k as u64);
            if let Some(cols) = zero_at {
                return Ok(ChebotarevOutcome {
                    n,
                    submatrices: count,
                    counterexample: Some((rows, cols)),
                });
            }
        }
    }
    Ok(ChebotarevOutcome {
        n,
        submatrices: count,
        counterexample: None,
    })
}

/// Map a finite-field matrix whose nonzero entries are powers of `ζ′` to
/// `Z[ζ_n]`: `0 ↦ 0`, `ζ′^e ↦ ζ_n^e`.
pub fn lift_matrix(m: &FqMatrix, ctx: &FieldCtx) -> Result<CycMatrix> {
    let n = ctx.conductor() as u32;
    let logs: HashMap<_, u32> = (0..n).map(|e| (ctx.zeta_pow(e as i64), e)).collect();
    let mut exps = Vec::with_capacity(m.rows() * m.cols());
    let mut any_zero = false;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let a = m.get(i, j);
            if a.is_zero() {
                any_zero = true;
                exps.push(None);
                continue;
            }
            match logs.get(&a) {
                Some(&e) => exps.push(Some(e)),
                None => return Err(Error::NotInCyclicGroup { row: i, col: j }),
            }
        }
    }
    if !any_zero {
        let exps = exps.into_iter().map(Option::unwrap).collect();
        return Ok(CycMatrix::from_exponents(n, m.rows(), m.cols(), exps));
    }
    let entries = exps
        .into_iter()
        .map(|e| match e {
            Some(e) => CycInt::from_power(n, e as i64),
            None => CycInt::zero(n),
        })
        .collect();
    CycMatrix::new(n, m.rows(), m.cols(), entries)
}

/// `∏_{i<j} (x_j − x_i)` for nodes `x_t = ζ^{c_t}`.
pub fn vandermonde_product(n: u32, nodes: &[u32]) -> CycInt {
    let mut acc = CycInt::one(n);
    for j in 0..nodes.len() {
        for i in 0..j {
            let d = &CycInt::from_power(n, nodes[j] as i64) - &CycInt::from_power(n, nodes[i] as i64);
            acc = &acc * &d;
        }
    }
    acc
}

#[allow(dead_code)]
fn scalar(n: u32, v: i64) -> CycInt {
    CycInt::from_int(n, BigInt::from(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::build_field;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: u32, size: usize, sparse: bool) -> CycMatrix {
        let phi = crate::numth::euler_phi(n as u64) as usize;
        let entries = (0..size * size)
            .map(|_| {
                if sparse && rng.gen_bool(0.3) {
                    return CycInt::zero(n);
                }
                let c = (0..phi).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect();
                CycInt::from_coords(n, c).unwrap()
            })
            .collect();
        CycMatrix::new(n, size, size, entries).unwrap()
    }

    // Leibniz formula over all permutations: the slowest, most literal route.
    fn leibniz(m: &CycMatrix) -> CycInt {
        fn perms(k: usize) -> Vec<(Vec<usize>, bool)> {
            if k == 0 {
                return vec![(vec![], true)];
            }
            let mut out = Vec::new();
            for (p, even) in perms(k - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, k - 1);
                    // inserting at pos from the end adds (len − pos) inversions
                    let flips = p.len() - pos;
                    out.push((q, even ^ (flips % 2 == 1)));
                }
            }
            out
        }
        let size = m.rows();
        perms(size).into_iter().fold(CycInt::zero(m.conductor()), |acc, (p, even)| {
            let term = (0..size).fold(CycInt::one(m.conductor()), |t, i| &t * m.get(i, p[i]));
            if even { &acc + &term } else { &acc - &term }
        })
    }

    #[test]
    fn generator_matrix_examples() {
        let spec = CodeSpec::new(7, vec![0, 1, 3]).unwrap();
        let g = build_generator_matrix(&spec);
        assert_eq!((g.rows(), g.cols()), (3, 7));
        for l in 0..7 {
            assert!(g.get(0, l).is_one());
            assert_eq!(g.get(1, l), &CycInt::from_power(7, l as i64));
        }
        let row3: Vec<u32> = g.exponents().unwrap()[14..].to_vec();
        assert_eq!(row3, vec![0, 3, 6, 2, 5, 1, 4]);

        let single = build_generator_matrix(&CodeSpec::new(6, vec![0]).unwrap());
        assert!(single.entries().iter().all(CycInt::is_one));

        let vdm = build_generator_matrix(&CodeSpec::new(5, vec![0, 1, 2]).unwrap());
        for l in 0..5 {
            let x = CycInt::from_power(5, l as i64);
            assert_eq!(vdm.get(2, l), &(&x * &x));
        }
    }

    #[test]
    fn spec_validation() {
        assert!(CodeSpec::new(7, vec![0, 3, 1]).is_err());
        assert!(CodeSpec::new(7, vec![0, 1, 7]).is_err());
        assert!(CodeSpec::new(7, vec![]).is_err());
        assert!(CodeSpec::new(7, vec![1, 1]).is_err());
        assert!(CodeSpec::new(4, vec![0, 1, 2, 3]).is_ok());
    }

    #[test]
    fn determinant_examples() {
        assert!(determinant(&CycMatrix::identity(7, 3)).unwrap().is_one());
        let g = build_generator_matrix(&CodeSpec::new(7, vec![0, 1, 3]).unwrap());
        let repeated = g.select_columns(&[1, 4, 1]);
        assert!(determinant(&repeated).unwrap().is_zero());
        assert!(determinant_cofactor(&repeated.without_exponents()).unwrap().is_zero());
        assert!(matches!(determinant(&g), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn j013_minor_factors_through_node_sum() {
        // det = (x2−x1)(x3−x1)(x3−x2)(x1+x2+x3) for J = {0,1,3}
        for n in [7u32, 8, 9, 10, 12] {
            let spec = CodeSpec::new(n, vec![0, 1, 3]).unwrap();
            let g = build_generator_matrix(&spec);
            for minor in enumerate_minors(&g, 3, DEFAULT_MINOR_BUDGET).unwrap() {
                let nodes: Vec<u32> = minor.subset.iter().map(|&c| c as u32).collect();
                let sum = nodes
                    .iter()
                    .fold(CycInt::zero(n), |acc, &c| &acc + &CycInt::from_power(n, c as i64));
                let expected = &vandermonde_product(n, &nodes) * &sum;
                assert_eq!(minor.det, expected, "n={n} S={nodes:?}");
                assert_eq!(minor.det.is_zero(), sum.is_zero());
            }
        }
    }

    #[test]
    fn minor_counts_and_vanishing() {
        let g7 = build_generator_matrix(&CodeSpec::new(7, vec![0, 1, 3]).unwrap());
        assert_eq!(enumerate_minors(&g7, 3, DEFAULT_MINOR_BUDGET).unwrap().len(), 35);
        let g23 = build_generator_matrix(&CodeSpec::new(23, vec![0, 1, 2, 4]).unwrap());
        let minors = enumerate_minors(&g23, 4, DEFAULT_MINOR_BUDGET).unwrap();
        assert_eq!(minors.len(), 8855);
        assert!(minors.windows(2).all(|w| w[0].subset < w[1].subset));
        let g9 = build_generator_matrix(&CodeSpec::new(9, vec![0, 1, 4]).unwrap());
        assert!(enumerate_minors(&g9, 3, DEFAULT_MINOR_BUDGET)
            .unwrap()
            .iter()
            .any(|m| m.det.is_zero()));
        assert!(matches!(
            enumerate_minors(&g23, 4, 100),
            Err(Error::MinorBudgetExceeded { count: 8855, budget: 100 })
        ));
        // k = n: one minor, the full determinant
        let g4 = build_generator_matrix(&CodeSpec::new(4, vec![0, 1, 2, 3]).unwrap());
        let full = enumerate_minors(&g4, 4, DEFAULT_MINOR_BUDGET).unwrap();
        assert_eq!(full.len(), 1);
        assert_eq!(full[0].det, determinant_cofactor(&g4.without_exponents()).unwrap());
    }

    #[test]
    fn exponent_route_matches_generic_route() {
        for (n, j) in [(7, vec![0, 2, 5]), (12, vec![0, 1, 2, 5]), (9, vec![0, 1, 4]), (8, vec![1, 2, 4])] {
            let g = build_generator_matrix(&CodeSpec::new(n, j).unwrap());
            let fast = enumerate_minors(&g, g.rows(), DEFAULT_MINOR_BUDGET).unwrap();
            let slow = generic_minors(&g.without_exponents());
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn algorithms_agree_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rng.gen_range(3..=12);
            let size = rng.gen_range(1..=5);
            let sparse = rng.gen_bool(0.5);
            let m = random_matrix(&mut rng, n, size, sparse);
            let c = determinant_cofactor(&m).unwrap();
            assert_eq!(c, determinant_berkowitz(&m).unwrap());
            assert_eq!(c, leibniz(&m));
            assert_eq!(c, generic_minors(&m)[0].det);
        }
        // above the cofactor threshold
        for _ in 0..3 {
            let m = random_matrix(&mut rng, 5, 7, true);
            assert_eq!(determinant(&m).unwrap(), determinant_cofactor(&m).unwrap());
        }
    }

    #[test]
    fn chebotarev_small_primes() {
        for (n, count) in [(5u32, 251u128), (7, 3431)] {
            let out = chebotarev_check(n, 11).unwrap();
            assert!(out.passed());
            let closed_form: u128 = (1..=n as u64).map(|k| binomial(n as u64, k).pow(2)).sum();
            assert_eq!(out.submatrices, closed_form);
            assert_eq!(out.submatrices, count);
        }
        assert_eq!(chebotarev_check(12, 11), Err(Error::NotPrime(12)));
        assert!(matches!(chebotarev_check(13, 11), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn prime_length_minors_never_vanish() {
        for n in [5u32, 7, 11, 13] {
            for k in 1..=4usize {
                for j in subsets_lex(n as usize, k) {
                    let spec = CodeSpec::new(n, j.iter().map(|&x| x as u32).collect()).unwrap();
                    let g = build_generator_matrix(&spec);
                    let minors = enumerate_minors(&g, k, DEFAULT_MINOR_BUDGET).unwrap();
                    assert!(minors.iter().all(|m| !m.det.is_zero()), "{spec}");
                }
            }
        }
    }

    #[test]
    fn lift_examples() {
        let ctx = build_field(2, 7).unwrap();
        let zero = FqMatrix::zeros(3, 7);
        let lifted = lift_matrix(&zero, &ctx).unwrap();
        assert!(lifted.entries().iter().all(CycInt::is_zero));

        let spec = CodeSpec::new(7, vec![0, 1, 3]).unwrap();
        let g = build_generator_matrix(&spec);
        let reduced = ctx.reduce_matrix(&g).unwrap();
        assert_eq!(lift_matrix(&reduced, &ctx).unwrap(), g);

        let outside = (0..8)
            .map(|t| ctx.element_from_index(t))
            .find(|&a| !a.is_zero() && (0..7).all(|e| ctx.zeta_pow(e) != a));
        assert!(outside.is_none(), "F_8^* is cyclic of order 7");
        let ctx29 = build_field(29, 7).unwrap();
        let mut bad = ctx29.reduce_matrix(&g).unwrap();
        bad.set(1, 2, ctx29.from_i64(2));
        assert_eq!(
            lift_matrix(&bad, &ctx29),
            Err(Error::NotInCyclicGroup { row: 1, col: 2 })
        );
    }

    #[test]
    fn lift_of_mds_matrix_has_nonzero_minors() {
        // an MDS 3x7 matrix over F_8 with entries in <ζ′>, some zero entries
        let ctx = build_field(2, 7).unwrap();
        let z = |e: i64| ctx.zeta_pow(e);
        let m = FqMatrix::from_rows(vec![
            vec![z(0), z(0), z(0), z(0), z(0), z(0), Fe::ZERO],
            vec![z(0), z(1), z(2), z(3), z(4), z(5), Fe::ZERO],
            vec![z(0), z(2), z(4), z(6), z(1), z(3), z(0)],
        ]);
        let all_nonzero = subsets_lex(7, 3)
            .iter()
            .all(|s| !m.select_columns(s).determinant(&ctx).unwrap().is_zero());
        assert!(all_nonzero, "fixture must be MDS over F_8");
        let lifted = lift_matrix(&m, &ctx).unwrap();
        for s in subsets_lex(7, 3) {
            assert!(!determinant(&lifted.select_columns(&s)).unwrap().is_zero());
        }
    }

    use crate::ffield::Fe;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn determinant_is_alternating(
            n in 3u32..=12,
            k in 2usize..=4,
            seed in any::<u64>(),
            a in 0usize..4, b in 0usize..4,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, n, k, false);
            let (a, b) = (a % k, b % k);
            prop_assume!(a != b);
            let mut swapped = m.clone();
            swapped.swap_columns(a, b);
            prop_assert_eq!(determinant(&swapped).unwrap(), -determinant(&m).unwrap());
            let mut cols: Vec<usize> = (0..k).collect();
            cols[a] = b;
            prop_assert!(determinant(&m.select_columns(&cols)).unwrap().is_zero());
        }
    }
}
