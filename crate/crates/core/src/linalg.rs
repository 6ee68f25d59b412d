//! Dense matrices over a [`FieldCtx`] and Gaussian elimination.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{Fe, FieldCtx};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

/// Row-major matrix of packed field elements, as stored in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FqMatrixRepr {
    pub rows: usize,
    pub cols: usize,
    /// Each element as its coefficient vector, lowest degree first.
    pub entries: Vec<Vec<Vec<u64>>>,
}

impl FqMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Fe>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        FqMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Fe::ZERO; rows * cols])
    }

    pub fn from_rows(rows: Vec<Vec<Fe>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Self::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    pub fn select_columns(&self, cols: &[usize]) -> FqMatrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            data.extend(cols.iter().map(|&j| self.get(i, j)));
        }
        FqMatrix::new(self.rows, cols.len(), data)
    }

    pub fn to_repr(&self, ctx: &FieldCtx) -> FqMatrixRepr {
        FqMatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|i| self.row(i).iter().map(|&e| ctx.coords(e)).collect())
                .collect(),
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, ctx: &FieldCtx) -> (FqMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = ctx.inv(m.get(r, c));
            for j in c..m.cols {
                let v = ctx.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = ctx.sub(m.get(i, j), ctx.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        self.rref(ctx).1.len()
    }

    pub fn determinant(&self, ctx: &FieldCtx) -> Result<Fe> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut m = self.clone();
        let mut det = Fe::ONE;
        for c in 0..m.cols {
            let Some(piv) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Fe::ZERO);
            };
            if piv != c {
                m.swap_rows(c, piv);
                det = ctx.neg(det);
            }
            let pivot = m.get(c, c);
            det = ctx.mul(det, pivot);
            let inv = ctx.inv(pivot);
            for i in c + 1..m.rows {
                let factor = ctx.mul(m.get(i, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = ctx.sub(m.get(i, j), ctx.mul(factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// A basis of the row space (nonzero rows of the RREF).
    pub fn row_space_basis(&self, ctx: &FieldCtx) -> FqMatrix {
        let (r, pivots) = self.rref(ctx);
        let keep = pivots.len();
        FqMatrix::new(keep, self.cols, r.data[..keep * self.cols].to_vec())
    }

    /// Basis (as rows) of `{x : M xᵀ = 0}`; for a generator matrix this is a
    /// generator matrix of the dual code.
    pub fn nullspace(&self, ctx: &FieldCtx) -> FqMatrix {
        let (r, pivots) = self.rref(ctx);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![Fe::ZERO; self.cols];
            v[fc] = Fe::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = ctx.neg(r.get(i, fc));
            }
            out.push(v);
        }
        if out.is_empty() {
            return FqMatrix::zeros(0, self.cols);
        }
        FqMatrix::from_rows(out)
    }

    pub fn mul_vec_transposed(&self, v: &[Fe], ctx: &FieldCtx) -> Vec<Fe> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Fe::ZERO, |acc, (&a, &b)| ctx.add(acc, ctx.mul(a, b)))
            })
            .collect()
    }

    /// Whether `v` lies in the row space.
    pub fn spans(&self, v: &[Fe], ctx: &FieldCtx) -> bool {
        let base = self.rank(ctx);
        let mut rows: Vec<Vec<Fe>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        rows.push(v.to_vec());
        FqMatrix::from_rows(rows).rank(ctx) == base
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::build_field;

    fn mat(ctx: &FieldCtx, rows: &[&[i64]]) -> FqMatrix {
        FqMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| ctx.from_i64(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn determinant_and_rank_over_prime_field() {
        let ctx = build_field(7, 3).unwrap();
        let m = mat(&ctx, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        // integer determinant is -3
        assert_eq!(m.determinant(&ctx).unwrap(), ctx.from_i64(-3));
        assert_eq!(m.rank(&ctx), 3);
        let singular = mat(&ctx, &[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert!(singular.determinant(&ctx).unwrap().is_zero());
        assert_eq!(singular.rank(&ctx), 2);
        assert!(matches!(
            mat(&ctx, &[&[1, 2]]).determinant(&ctx),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn nullspace_is_orthogonal_and_complementary() {
        let ctx = build_field(2, 9).unwrap();
        let m = FqMatrix::from_rows(vec![
            (0..9).map(|l| ctx.zeta_pow(l)).collect(),
            (0..9).map(|l| ctx.zeta_pow(3 * l)).collect(),
            vec![Fe::ONE; 9],
        ]);
        let dual = m.nullspace(&ctx);
        assert_eq!(dual.rows() + m.rank(&ctx), 9);
        for i in 0..dual.rows() {
            assert!(m
                .mul_vec_transposed(dual.row(i), &ctx)
                .iter()
                .all(|e| e.is_zero()));
        }
    }

    #[test]
    fn row_space_membership() {
        let ctx = build_field(5, 4).unwrap();
        let m = mat(&ctx, &[&[1, 0, 2], &[0, 1, 3]]);
        assert!(m.spans(&[ctx.from_i64(2), ctx.from_i64(3), ctx.from_i64(13)], &ctx));
        assert!(!m.spans(&[Fe::ZERO, Fe::ZERO, Fe::ONE], &ctx));
        assert_eq!(m.row_space_basis(&ctx).rows(), 2);
    }
}
