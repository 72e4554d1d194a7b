//! Commuting and incidence algebras of thin categories: dimensions, structure
//! constants, Happel's first Hochschild numbers, Morita equivalence,
//! global-dimension bounds, and a brute-force Hochschild cochain computation.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, FieldVisitor};
use crate::linalg::SparseMatrix;
use crate::quiver::{
    count_paths_exact, diameter, is_weakly_connected, reachability_closure, topological_order,
    Quiver,
};
use crate::reach::{contains_b11_subposet, poset_isomorphic, reachability_poset, Poset, Preorder};

/// A finite category with at most one morphism between any two objects.
pub trait ThinCategory {
    fn size(&self) -> usize;
    fn leq(&self, a: usize, b: usize) -> bool;
    fn label(&self, a: usize) -> &str;

    /// The morphisms, row-major.
    fn basis(&self) -> Vec<BasisElement> {
        let n = self.size();
        (0..n)
            .flat_map(|a| {
                (0..n).map(move |b| BasisElement {
                    source: a,
                    target: b,
                })
            })
            .filter(|e| self.leq(e.source, e.target))
            .collect()
    }
}

impl ThinCategory for Preorder {
    fn size(&self) -> usize {
        self.len()
    }
    fn leq(&self, a: usize, b: usize) -> bool {
        Preorder::leq(self, a, b)
    }
    fn label(&self, a: usize) -> &str {
        &self.elements[a]
    }
}

impl ThinCategory for Poset {
    fn size(&self) -> usize {
        self.len()
    }
    fn leq(&self, a: usize, b: usize) -> bool {
        Poset::leq(self, a, b)
    }
    fn label(&self, a: usize) -> &str {
        &self.elements[a]
    }
}

/// The unique morphism `source → target` of a thin category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisElement {
    pub source: usize,
    pub target: usize,
}

impl BasisElement {
    pub fn new(source: usize, target: usize) -> Self {
        BasisElement { source, target }
    }
}

/// `f · g = f ∘ g`: with `g: a → b` and `f: b → c` the product is `a → c`;
/// it is zero when `g` does not end where `f` starts.
pub fn structure_product<C: ThinCategory + ?Sized>(
    cat: &C,
    f: BasisElement,
    g: BasisElement,
) -> Result<Option<BasisElement>> {
    for e in [f, g] {
        if e.source >= cat.size() || e.target >= cat.size() || !cat.leq(e.source, e.target) {
            let name = |i: usize| {
                if i < cat.size() {
                    cat.label(i).to_string()
                } else {
                    i.to_string()
                }
            };
            return Err(Error::InvalidBasisElement(name(e.source), name(e.target)));
        }
    }
    Ok((g.target == f.source).then_some(BasisElement {
        source: g.source,
        target: f.target,
    }))
}

/// Dimension of the commuting algebra: one basis element per reachable pair.
pub fn commuting_algebra_dim(q: &Quiver) -> usize {
    reachability_closure(q).count_true()
}

/// Dimension of the incidence algebra: the number of pairs `a ≤ b`.
pub fn incidence_algebra_dim(p: &Poset) -> usize {
    p.relation_count()
}

/// First Hochschild numbers of a path algebra, from path counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HappelNumbers {
    #[serde(serialize_with = "big_as_number")]
    pub hh0: BigUint,
    #[serde(serialize_with = "big_as_number")]
    pub hh1: BigUint,
}

pub(crate) fn big_as_number<S: Serializer>(
    n: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match n.to_u64() {
        Some(small) => s.serialize_u64(small),
        None => s.serialize_str(&n.to_string()),
    }
}

/// For a connected quiver without oriented cycles: `hh0 = 1` and
/// `hh1 = 1 - |V| + Σ_e #paths(s(e), t(e))`. Higher degrees vanish.
pub fn happel_hh(q: &Quiver) -> Result<HappelNumbers> {
    if !is_weakly_connected(q) {
        return Err(Error::Disconnected);
    }
    topological_order(q)?;
    let counts = count_paths_exact(q)?;
    let total: BigUint = q.edges().iter().map(|e| &counts[e.src][e.dst]).sum();
    // connected: |E| ≥ |V| - 1 and every edge contributes at least one path
    let hh1 = total + 1u32 - BigUint::from(q.vertex_count());
    Ok(HappelNumbers {
        hh0: BigUint::from(1u32),
        hh1,
    })
}

/// A Morita equivalence witness: matching reachability classes.
pub type MoritaWitness = Vec<(String, String)>;

/// The commuting algebras of two quivers are Morita equivalent exactly when
/// their reachability posets are isomorphic.
pub fn morita_equivalent(q1: &Quiver, q2: &Quiver) -> Option<MoritaWitness> {
    let p1 = reachability_poset(q1).poset;
    let p2 = reachability_poset(q2).poset;
    poset_isomorphic(&p1, &p2).map(|iso| {
        iso.iter()
            .enumerate()
            .map(|(a, &b)| (p1.elements[a].clone(), p2.elements[b].clone()))
            .collect()
    })
}

/// What can be said about the global dimension of the commuting algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GldimReport {
    /// The diameter of the quiver bounds the global dimension from above.
    pub upper_bound: usize,
    /// R(Q) has a strict relation and no four-element diamond subposet.
    pub is_one: bool,
    /// R(Q) has no strict relation, so the algebra is semisimple.
    pub antichain: bool,
    /// The global dimension when one of the criteria pins it down.
    pub exact: Option<usize>,
    /// A diamond `(x, v, w, y)` in R(Q), if present.
    pub b11_witness: Option<[String; 4]>,
}

pub fn gldim_report(q: &Quiver) -> GldimReport {
    let p = reachability_poset(q).poset;
    let antichain = !p.has_strict_relation();
    let witness = contains_b11_subposet(&p);
    let is_one = !antichain && witness.is_none();
    GldimReport {
        upper_bound: diameter(q),
        is_one,
        antichain,
        exact: if antichain {
            Some(0)
        } else if is_one {
            Some(1)
        } else {
            None
        },
        b11_witness: witness.map(|w| w.map(|i| p.elements[i].clone())),
    }
}

/// Everything the algebra module knows about one quiver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraSummary {
    pub dimension: usize,
    pub incidence_dimension: usize,
    #[serde(serialize_with = "optional_big")]
    pub hh0: Option<BigUint>,
    #[serde(serialize_with = "optional_big")]
    pub hh1: Option<BigUint>,
    pub happel_applicable: bool,
    pub gldim_upper: usize,
    /// `None` when R(Q) is an antichain.
    pub gldim_is_one: Option<bool>,
    pub gldim: GldimReport,
}

fn optional_big<S: Serializer>(n: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n {
        Some(n) => big_as_number(n, s),
        None => s.serialize_none(),
    }
}

pub fn algebra_summary(q: &Quiver) -> AlgebraSummary {
    let happel = happel_hh(q).ok();
    let gldim = gldim_report(q);
    AlgebraSummary {
        dimension: commuting_algebra_dim(q),
        incidence_dimension: incidence_algebra_dim(&reachability_poset(q).poset),
        happel_applicable: happel.is_some(),
        hh0: happel.as_ref().map(|h| h.hh0.clone()),
        hh1: happel.map(|h| h.hh1),
        gldim_upper: gldim.upper_bound,
        gldim_is_one: (!gldim.antichain).then_some(gldim.is_one),
        gldim,
    }
}

/// Largest matrix, counted as `(dim A)^(k+2)` rows, the oracle will build.
pub const ORACLE_ROW_LIMIT: usize = 65_536;
/// Highest degree the oracle computes.
pub const ORACLE_MAX_DEGREE: usize = 3;

/// Structure constants of the incidence algebra in basis-index form.
struct Multiplication {
    dim: usize,
    /// `table[f][g]` = index of `f · g`, if nonzero.
    table: Vec<Vec<Option<usize>>>,
}

impl Multiplication {
    fn new(p: &Poset) -> Self {
        let basis = p.basis();
        let index: HashMap<BasisElement, usize> =
            basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let table = basis
            .iter()
            .map(|&f| {
                basis
                    .iter()
                    .map(|&g| {
                        structure_product(p, f, g)
                            .expect("basis elements are valid")
                            .map(|h| index[&h])
                    })
                    .collect()
            })
            .collect();
        Multiplication {
            dim: basis.len(),
            table,
        }
    }
}

/// Coboundary `δ^k: C^k → C^{k+1}` of the Hochschild cochain complex
/// `C^k = Hom(A^{⊗k}, A)`, in the basis `(a_1, …, a_k; b)` of functions
/// sending one basis tuple to one basis element. One row per coordinate of
/// the target, i.e. the transpose of the usual matrix.
fn coboundary<F: Field>(m: &Multiplication, k: usize) -> SparseMatrix<F> {
    let d = m.dim;
    let cols = d.pow(k as u32 + 1);
    let mut out = SparseMatrix::new(cols);
    // column index of the cochain (a_1..a_k; b): mixed radix, b last
    let column = |tuple: &[usize], b: usize| tuple.iter().fold(0, |acc, &a| acc * d + a) * d + b;
    let mut tuple = vec![0usize; k + 1];
    let mut shorter = vec![0usize; k];
    for _ in 0..d.pow(k as u32 + 1) {
        for c in 0..d {
            // (δf)(a_1..a_{k+1}) evaluated at output coordinate c
            let mut row: Vec<(usize, F)> = Vec::with_capacity(k + 2);
            // a_1 · f(a_2..a_{k+1}) = c
            for b in 0..d {
                if m.table[tuple[0]][b] == Some(c) {
                    row.push((column(&tuple[1..], b), F::one()));
                }
            }
            // Σ (-1)^i f(.., a_i a_{i+1}, ..)
            for i in 0..k {
                if let Some(prod) = m.table[tuple[i]][tuple[i + 1]] {
                    shorter.clear();
                    shorter.extend_from_slice(&tuple[..i]);
                    shorter.push(prod);
                    shorter.extend_from_slice(&tuple[i + 2..]);
                    let sign = if (i + 1) % 2 == 0 {
                        F::one()
                    } else {
                        -F::one()
                    };
                    row.push((column(&shorter, c), sign));
                }
            }
            // (-1)^{k+1} f(a_1..a_k) · a_{k+1} = c
            for b in 0..d {
                if m.table[b][tuple[k]] == Some(c) {
                    let sign = if (k + 1).is_multiple_of(2) {
                        F::one()
                    } else {
                        -F::one()
                    };
                    row.push((column(&tuple[..k], b), sign));
                }
            }
            out.push_row(row);
        }
        // next tuple in mixed radix
        for slot in tuple.iter_mut().rev() {
            *slot += 1;
            if *slot < d {
                break;
            }
            *slot = 0;
        }
    }
    out
}

/// `dim HH^k` of the incidence algebra of `p` over `F`, straight from the
/// Hochschild cochain complex.
pub fn hochschild_oracle<F: Field>(p: &Poset, k: usize) -> Result<usize> {
    if k > ORACLE_MAX_DEGREE {
        return Err(Error::BadDegree(k));
    }
    let d = incidence_algebra_dim(p);
    let rows = (d as u128).pow(k as u32 + 2);
    if rows > ORACLE_ROW_LIMIT as u128 {
        return Err(Error::TooLarge(format!(
            "algebra of dimension {d} needs {rows} coboundary rows in degree {k} (limit {ORACLE_ROW_LIMIT})"
        )));
    }
    if d.is_zero() {
        return Ok(0);
    }
    let m = Multiplication::new(p);
    let cochains = d.pow(k as u32 + 1);
    let rank_out = coboundary::<F>(&m, k).rank();
    let rank_in = if k == 0 {
        0
    } else {
        coboundary::<F>(&m, k - 1).rank()
    };
    Ok(cochains - rank_out - rank_in)
}

struct OracleVisitor<'a> {
    poset: &'a Poset,
    degree: usize,
}

impl FieldVisitor for OracleVisitor<'_> {
    type Output = Result<usize>;
    fn visit<F: Field>(self) -> Result<usize> {
        hochschild_oracle::<F>(self.poset, self.degree)
    }
}

/// [`hochschild_oracle`] with the field chosen at run time.
pub fn hochschild_oracle_with(p: &Poset, k: usize, field: FieldSpec) -> Result<usize> {
    field.dispatch(OracleVisitor {
        poset: p,
        degree: k,
    })?
}
