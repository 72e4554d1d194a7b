//! Sparse exact Gaussian elimination.

use crate::field::Field;

/// A row-major sparse matrix. Each row is a list of `(column, value)` pairs
/// sorted by column with no explicit zeros.
#[derive(Debug, Clone)]
pub struct SparseMatrix<F> {
    cols: usize,
    rows: Vec<Vec<(usize, F)>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn new(cols: usize) -> Self {
        SparseMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<(usize, F)>] {
        &self.rows
    }

    /// Appends a row given as unsorted `(column, value)` pairs. Repeated
    /// columns are summed and zeros are dropped.
    pub fn push_row(&mut self, mut entries: Vec<(usize, F)>) {
        entries.sort_by_key(|(c, _)| *c);
        let mut row: Vec<(usize, F)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            assert!(c < self.cols, "column {c} out of range");
            match row.last_mut() {
                Some((lc, lv)) if *lc == c => {
                    *lv = lv.clone() + v;
                    if lv.is_zero() {
                        row.pop();
                    }
                }
                _ => {
                    if !v.is_zero() {
                        row.push((c, v));
                    }
                }
            }
        }
        if !row.is_empty() {
            self.rows.push(row);
        }
    }

    pub fn from_dense(dense: &[Vec<F>]) -> Self {
        let cols = dense.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::new(cols);
        for r in dense {
            m.push_row(r.iter().cloned().enumerate().collect());
        }
        m
    }

    /// Rank by row reduction. Consumes the matrix.
    pub fn rank(self) -> usize {
        let mut pivots: Vec<Option<Vec<(usize, F)>>> = vec![None; self.cols];
        let mut rank = 0;
        for mut row in self.rows {
            while let Some((lead, coeff)) = row.first().cloned() {
                match &pivots[lead] {
                    Some(pivot) => row = axpy(&row, &coeff, pivot),
                    None => {
                        let inv = F::one() / coeff;
                        let normalized =
                            row.into_iter().map(|(c, v)| (c, v * inv.clone())).collect();
                        pivots[lead] = Some(normalized);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }
}

/// `row - coeff * pivot`, where `pivot` has a unit leading entry.
fn axpy<F: Field>(row: &[(usize, F)], coeff: &F, pivot: &[(usize, F)]) -> Vec<(usize, F)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        match (row.get(i), pivot.get(j)) {
            (Some((ci, vi)), Some((cj, vj))) if ci == cj => {
                let v = vi.clone() - coeff.clone() * vj.clone();
                if !v.is_zero() {
                    out.push((*ci, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ci, vi)), Some((cj, _))) if ci < cj => {
                out.push((*ci, vi.clone()));
                i += 1;
            }
            (Some((ci, vi)), None) => {
                out.push((*ci, vi.clone()));
                i += 1;
            }
            (_, Some((cj, vj))) => {
                out.push((*cj, -(coeff.clone() * vj.clone())));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Product of two dense matrices.
pub fn dense_mul<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(F::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone())
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rational, Gf};
    use crate::Rational;
    use proptest::prelude::*;

    fn gf2(rows: &[&[u8]]) -> SparseMatrix<Gf<2>> {
        let dense: Vec<Vec<Gf<2>>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Gf::new(x as i64)).collect())
            .collect();
        SparseMatrix::from_dense(&dense)
    }

    #[test]
    fn small_ranks() {
        assert_eq!(gf2(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]).rank(), 2);
        assert_eq!(gf2(&[&[1, 0], &[0, 1]]).rank(), 2);
        assert_eq!(gf2(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(SparseMatrix::<Gf<2>>::new(5).rank(), 0);
    }

    #[test]
    fn characteristic_matters() {
        // [[1,1],[1,-1]] has determinant -2.
        let q = SparseMatrix::from_dense(&[
            vec![rational(1), rational(1)],
            vec![rational(1), rational(-1)],
        ]);
        assert_eq!(q.rank(), 2);
        let g = SparseMatrix::from_dense(&[
            vec![Gf::<2>::new(1), Gf::new(1)],
            vec![Gf::new(1), Gf::new(-1)],
        ]);
        assert_eq!(g.rank(), 1);
    }

    #[test]
    fn push_row_merges_duplicates() {
        let mut m = SparseMatrix::<Rational>::new(3);
        m.push_row(vec![(2, rational(1)), (0, rational(2)), (2, rational(-1))]);
        assert_eq!(m.rows()[0], vec![(0, rational(2))]);
        m.push_row(vec![(1, rational(1)), (1, rational(-1))]);
        assert_eq!(m.rows().len(), 1);
    }

    /// Brute-force GF(2) rank: log2 of the size of the row span.
    fn span_rank(rows: &[Vec<u8>]) -> usize {
        let mut span = std::collections::HashSet::new();
        let n = rows.len();
        for mask in 0u32..(1 << n) {
            let width = rows.first().map_or(0, |r| r.len());
            let mut v = vec![0u8; width];
            for (i, r) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (a, b) in v.iter_mut().zip(r) {
                        *a ^= b;
                    }
                }
            }
            span.insert(v);
        }
        span.len().trailing_zeros() as usize
    }

    proptest! {
        #[test]
        fn gf2_rank_matches_span_size(rows in prop::collection::vec(prop::collection::vec(0u8..2, 5), 0..7)) {
            let dense: Vec<Vec<Gf<2>>> = rows.iter().map(|r| r.iter().map(|&x| Gf::new(x as i64)).collect()).collect();
            let m = SparseMatrix::from_dense(&dense);
            prop_assert_eq!(m.rank(), span_rank(&rows));
        }

        #[test]
        fn rank_is_transpose_invariant(rows in prop::collection::vec(prop::collection::vec(-2i64..3, 4), 1..6)) {
            let dense: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| rational(x)).collect()).collect();
            let t: Vec<Vec<Rational>> = (0..4).map(|j| dense.iter().map(|r| r[j].clone()).collect()).collect();
            prop_assert_eq!(SparseMatrix::from_dense(&dense).rank(), SparseMatrix::from_dense(&t).rank());
        }
    }
}
