//! Order complexes of posets and their Betti numbers over a field.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::{Field, FieldSpec, FieldVisitor};
use crate::linalg::SparseMatrix;
use crate::quiver::Quiver;
use crate::reach::{reachability_poset, Poset};

/// A simplicial complex stored as its simplices per dimension. Each simplex
/// is a strictly increasing chain of poset elements, listed bottom to top.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplex {
    pub labels: Vec<String>,
    pub simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Top dimension, `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.f_vector())
    }

    /// Boundary map from `k`-simplices to `(k-1)`-simplices, one row per
    /// `k`-simplex (the transpose of the usual matrix; ranks agree).
    pub fn boundary<F: Field>(&self, k: usize) -> SparseMatrix<F> {
        let (Some(faces), Some(cells)) = (
            k.checked_sub(1).and_then(|d| self.simplices.get(d)),
            self.simplices.get(k),
        ) else {
            return SparseMatrix::new(
                k.checked_sub(1)
                    .and_then(|d| self.simplices.get(d))
                    .map_or(0, Vec::len),
            );
        };
        let index: HashMap<&[usize], usize> = faces
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i))
            .collect();
        let mut m = SparseMatrix::new(faces.len());
        let mut face = Vec::with_capacity(k);
        for cell in cells {
            let mut row = Vec::with_capacity(k + 1);
            for drop in 0..=k {
                face.clear();
                face.extend(
                    cell.iter()
                        .enumerate()
                        .filter(|&(i, _)| i != drop)
                        .map(|(_, &v)| v),
                );
                let sign = if drop % 2 == 0 { F::one() } else { -F::one() };
                row.push((index[face.as_slice()], sign));
            }
            m.push_row(row);
        }
        m
    }
}

pub fn alternating_sum(values: &[usize]) -> i64 {
    values
        .iter()
        .enumerate()
        .map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) })
        .sum()
}

/// All strict chains of `p`, up to dimension `max_dim` when given. Chains in
/// each dimension are sorted lexicographically by element index.
pub fn order_complex(p: &Poset, max_dim: Option<usize>) -> SimplicialComplex {
    let above: Vec<Vec<usize>> = (0..p.len())
        .map(|a| p.strictly_above(a).collect())
        .collect();
    let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut chain = Vec::new();
    fn grow(
        at: usize,
        above: &[Vec<usize>],
        max_dim: Option<usize>,
        chain: &mut Vec<usize>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        chain.push(at);
        let dim = chain.len() - 1;
        if out.len() <= dim {
            out.push(Vec::new());
        }
        out[dim].push(chain.clone());
        if max_dim.is_none_or(|m| dim < m) {
            for &b in &above[at] {
                grow(b, above, max_dim, chain, out);
            }
        }
        chain.pop();
    }
    for a in 0..p.len() {
        grow(a, &above, max_dim, &mut chain, &mut simplices);
    }
    for level in &mut simplices {
        level.sort();
    }
    SimplicialComplex {
        labels: p.elements.clone(),
        simplices,
    }
}

/// `β_0 … β_max_dim` over `F`. Simplices up to dimension `max_dim + 1` must
/// be present for the top number to be exact.
pub fn betti<F: Field>(c: &SimplicialComplex, max_dim: usize) -> Vec<usize> {
    let ranks: Vec<usize> = (0..=max_dim + 1)
        .into_par_iter()
        .map(|k| c.boundary::<F>(k).rank())
        .collect();
    let f = c.f_vector();
    (0..=max_dim)
        .map(|k| f.get(k).copied().unwrap_or(0) - ranks[k] - ranks[k + 1])
        .collect()
}

struct BettiVisitor<'a> {
    complex: &'a SimplicialComplex,
    max_dim: usize,
}

impl FieldVisitor for BettiVisitor<'_> {
    type Output = Vec<usize>;
    fn visit<F: Field>(self) -> Vec<usize> {
        betti::<F>(self.complex, self.max_dim)
    }
}

/// [`betti`] with the field chosen at run time.
pub fn betti_with(c: &SimplicialComplex, field: FieldSpec, max_dim: usize) -> Result<Vec<usize>> {
    field.dispatch(BettiVisitor {
        complex: c,
        max_dim,
    })
}

/// Betti numbers, f-vector, and Euler characteristic of an order complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub betti: Vec<usize>,
    pub f_vector: Vec<usize>,
    pub euler: i64,
}

/// Homology of the order complex of `p`, in degrees up to `max_dim`
/// (default: the dimension of the complex).
pub fn poset_homology(
    p: &Poset,
    field: FieldSpec,
    max_dim: Option<usize>,
) -> Result<HomologyReport> {
    let c = order_complex(p, max_dim.map(|d| d + 1));
    let top = max_dim.unwrap_or_else(|| c.dimension().unwrap_or(0));
    let betti = betti_with(&c, field, top)?;
    let f_vector = c.f_vector();
    let euler = alternating_sum(&f_vector);
    Ok(HomologyReport {
        betti,
        f_vector,
        euler,
    })
}

/// Betti numbers of the nerve of the reachability poset of `q`.
pub fn nerve_betti_of_quiver(
    q: &Quiver,
    field: FieldSpec,
    max_dim: Option<usize>,
) -> Result<Vec<usize>> {
    Ok(poset_homology(&reachability_poset(q).poset, field, max_dim)?.betti)
}

/// Pads two Betti vectors with zeros to a common length.
pub fn padded(a: &[usize], len: usize) -> Vec<usize> {
    let mut v = a.to_vec();
    v.resize(len.max(a.len()), 0);
    v
}
