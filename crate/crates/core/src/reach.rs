//! The reachability preorder of a quiver, its quotient poset R(Q), the quiver
//! T(Q) underlying R(Q), and order isomorphism.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bitmatrix::BoolMatrix;
use crate::error::{Error, Result};
use crate::quiver::{
    condensation, reachability_closure, transitive_closure, validate_morphism, Quiver,
    QuiverMorphism,
};

/// A finite set with a reflexive and transitive relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preorder {
    pub elements: Vec<String>,
    pub relation: BoolMatrix,
}

impl Preorder {
    pub fn new(elements: Vec<String>, relation: BoolMatrix) -> Result<Self> {
        check_size(&elements, &relation)?;
        if !relation.is_reflexive() {
            return Err(Error::NotAnOrder("reflexive relation"));
        }
        if !relation.is_transitive() {
            return Err(Error::NotAnOrder("transitive relation"));
        }
        Ok(Preorder { elements, relation })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.relation.get(a, b)
    }
}

/// A finite partially ordered set with labelled elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poset {
    pub elements: Vec<String>,
    pub relation: BoolMatrix,
}

fn check_size(elements: &[String], relation: &BoolMatrix) -> Result<()> {
    if elements.len() != relation.size() {
        return Err(Error::InvalidValue(format!(
            "{} labels for a {}x{} relation",
            elements.len(),
            relation.size(),
            relation.size()
        )));
    }
    Ok(())
}

impl Poset {
    pub fn new(elements: Vec<String>, relation: BoolMatrix) -> Result<Self> {
        let pre = Preorder::new(elements, relation)?;
        if !pre.relation.is_antisymmetric() {
            return Err(Error::NotAnOrder("antisymmetric relation"));
        }
        Ok(Poset {
            elements: pre.elements,
            relation: pre.relation,
        })
    }

    /// Poset on `0..n` generated by the given strict relations.
    pub fn from_relations(n: usize, less: &[(usize, usize)]) -> Result<Self> {
        let q = Quiver::from_arrows(n, less);
        let closure = reachability_closure(&q);
        Poset::new(q.vertices().to_vec(), closure.matrix)
    }

    pub fn chain(n: usize) -> Self {
        let less: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_relations(n, &less).expect("chain is an order")
    }

    pub fn antichain(n: usize) -> Self {
        Poset::from_relations(n, &[]).expect("antichain is an order")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.relation.get(a, b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.relation.get(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }

    /// Number of pairs `a ≤ b`, identities included.
    pub fn relation_count(&self) -> usize {
        self.relation.count_true()
    }

    pub fn has_strict_relation(&self) -> bool {
        self.relation_count() > self.len()
    }

    /// Elements strictly above `a`.
    pub fn strictly_above(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&b| self.lt(a, b))
    }

    /// Number of elements in the longest chain ending at each element, minus one.
    pub fn heights(&self) -> Vec<usize> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| (0..n).filter(|&b| self.lt(b, a)).count());
        let mut h = vec![0; n];
        for &a in &order {
            h[a] = (0..n)
                .filter(|&b| self.lt(b, a))
                .map(|b| h[b] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }

    /// The same poset with elements reordered: element `i` of the result is
    /// element `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Poset {
        let n = self.len();
        let mut m = BoolMatrix::new(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.leq(perm[i], perm[j]));
            }
        }
        Poset {
            elements: perm.iter().map(|&p| self.elements[p].clone()).collect(),
            relation: m,
        }
    }

    pub fn as_preorder(&self) -> Preorder {
        Preorder {
            elements: self.elements.clone(),
            relation: self.relation.clone(),
        }
    }
}

/// The reachability preorder on the vertices of `q`.
pub fn reach_preorder(q: &Quiver) -> Preorder {
    Preorder {
        elements: q.vertices().to_vec(),
        relation: reachability_closure(q).matrix,
    }
}

/// R(Q) together with the quotient map from vertices to classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachabilityPoset {
    pub poset: Poset,
    /// Class index of each vertex of the quiver.
    pub quotient: Vec<usize>,
}

impl ReachabilityPoset {
    /// Quotient map by ids: vertex id → class label.
    pub fn quotient_map(&self, q: &Quiver) -> BTreeMap<String, String> {
        q.vertices()
            .iter()
            .zip(&self.quotient)
            .map(|(v, &c)| (v.clone(), self.poset.elements[c].clone()))
            .collect()
    }
}

/// Identifies mutually reachable vertices. Classes are labelled by their
/// smallest vertex id and listed in order of first appearance in the vertex list.
pub fn reachability_poset(q: &Quiver) -> ReachabilityPoset {
    let reach = reachability_closure(q);
    let n = q.vertex_count();
    let mut quotient = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for v in 0..n {
        if quotient[v] != usize::MAX {
            continue;
        }
        let class = reps.len();
        let mut rep = v;
        for (w, slot) in quotient.iter_mut().enumerate().skip(v) {
            if reach.reaches(v, w) && reach.reaches(w, v) {
                *slot = class;
                if q.vertex_id(w) < q.vertex_id(rep) {
                    rep = w;
                }
            }
        }
        reps.push(rep);
    }
    let k = reps.len();
    let mut m = BoolMatrix::new(k);
    for i in 0..k {
        for j in 0..k {
            m.set(i, j, reach.reaches(reps[i], reps[j]));
        }
    }
    let elements = reps.iter().map(|&r| q.vertex_id(r).to_string()).collect();
    ReachabilityPoset {
        poset: Poset {
            elements,
            relation: m,
        },
        quotient,
    }
}

/// Underlying quiver of R(Q): one vertex per class, one edge `t<i>` per
/// strict relation, and an identity loop at every class unless `strip_loops`.
pub fn t_quiver(q: &Quiver, strip_loops: bool) -> Quiver {
    let p = reachability_poset(q).poset;
    let t = poset_quiver(&p, strip_loops);
    debug_assert!(
        matches_condensed_closure(q, &t),
        "T(Q) disagrees with the condensed transitive closure"
    );
    t
}

/// The quiver of a poset's relation (row-major edge order).
pub fn poset_quiver(p: &Poset, strip_loops: bool) -> Quiver {
    let mut t = Quiver::new();
    for label in &p.elements {
        t.add_vertex(label.clone()).expect("labels are distinct");
    }
    let mut next = 0;
    for i in 0..p.len() {
        for j in 0..p.len() {
            if p.leq(i, j) && !(strip_loops && i == j) {
                t.push_edge(format!("t{next}"), i, j).expect("fresh id");
                next += 1;
            }
        }
    }
    t
}

/// Edge pairs of a quiver by vertex id, loops removed.
pub fn loop_free_pairs(q: &Quiver) -> std::collections::BTreeSet<(String, String)> {
    q.edges()
        .iter()
        .filter(|e| !e.is_loop())
        .map(|e| {
            (
                q.vertex_id(e.src).to_string(),
                q.vertex_id(e.dst).to_string(),
            )
        })
        .collect()
}

fn matches_condensed_closure(q: &Quiver, t: &Quiver) -> bool {
    let c = condensation(&transitive_closure(q));
    let mut cv = c.vertices().to_vec();
    let mut tv = t.vertices().to_vec();
    cv.sort();
    tv.sort();
    cv == tv && loop_free_pairs(&c) == loop_free_pairs(t)
}

/// Per-element data preserved by order isomorphisms.
fn invariants(p: &Poset) -> Vec<(usize, usize, usize)> {
    let n = p.len();
    let heights = p.heights();
    (0..n)
        .map(|a| {
            let down = (0..n).filter(|&b| p.leq(b, a)).count();
            let up = (0..n).filter(|&b| p.leq(a, b)).count();
            (down, up, heights[a])
        })
        .collect()
}

/// An order isomorphism `p1 → p2` as an index map, or `None`. Candidates are
/// tried in lexicographic label order, so the witness is deterministic.
pub fn poset_isomorphic(p1: &Poset, p2: &Poset) -> Option<Vec<usize>> {
    let n = p1.len();
    if n != p2.len() || p1.relation_count() != p2.relation_count() {
        return None;
    }
    let inv1 = invariants(p1);
    let inv2 = invariants(p2);
    let mut s1 = inv1.clone();
    let mut s2 = inv2.clone();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return None;
    }
    let mut by_label: Vec<usize> = (0..n).collect();
    by_label.sort_by(|&a, &b| p2.elements[a].cmp(&p2.elements[b]));
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            by_label
                .iter()
                .copied()
                .filter(|&b| inv1[a] == inv2[b])
                .collect()
        })
        .collect();

    let mut assignment = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        a: usize,
        p1: &Poset,
        p2: &Poset,
        candidates: &[Vec<usize>],
        assignment: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if a == assignment.len() {
            return true;
        }
        for &b in &candidates[a] {
            if used[b] {
                continue;
            }
            let consistent = (0..a).all(|c| {
                let d = assignment[c];
                p1.leq(a, c) == p2.leq(b, d) && p1.leq(c, a) == p2.leq(d, b)
            });
            if consistent {
                assignment[a] = b;
                used[b] = true;
                if extend(a + 1, p1, p2, candidates, assignment, used) {
                    return true;
                }
                used[b] = false;
            }
        }
        false
    }
    extend(0, p1, p2, &candidates, &mut assignment, &mut used).then_some(assignment)
}

/// Distinct `(x, v, w, y)` with `x < v < y`, `x < w < y`, and `v`, `w`
/// incomparable; the first such quadruple in index order with `v < w`.
pub fn contains_b11_subposet(p: &Poset) -> Option<[usize; 4]> {
    let n = p.len();
    for x in 0..n {
        for y in p.strictly_above(x) {
            let middle: Vec<usize> = p.strictly_above(x).filter(|&m| p.lt(m, y)).collect();
            for (i, &v) in middle.iter().enumerate() {
                if let Some(&w) = middle[i + 1..].iter().find(|&&w| !p.comparable(v, w)) {
                    return Some([x, v, w, y]);
                }
            }
        }
    }
    None
}

/// Vertex map of a quiver morphism, viewed as a monotone map of reachability preorders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneMap {
    pub map: Vec<usize>,
}

impl MonotoneMap {
    pub fn is_monotone(&self, src: &Preorder, dst: &Preorder) -> bool {
        (0..src.len())
            .all(|a| (0..src.len()).all(|b| !src.leq(a, b) || dst.leq(self.map[a], self.map[b])))
    }

    /// `self` followed by `then`.
    pub fn then(&self, then: &MonotoneMap) -> MonotoneMap {
        MonotoneMap {
            map: self.map.iter().map(|&v| then.map[v]).collect(),
        }
    }
}

/// The functorial action of the reachability construction on a morphism.
pub fn map_preorder(f: &QuiverMorphism, src: &Quiver, dst: &Quiver) -> Result<MonotoneMap> {
    if !validate_morphism(f, src, dst)?.valid {
        return Err(Error::NotAMorphism);
    }
    let r = f.resolve(src, dst)?;
    let map = MonotoneMap { map: r.vertex_map };
    debug_assert!(map.is_monotone(&reach_preorder(src), &reach_preorder(dst)));
    Ok(map)
}

/// The induced map `R(src) → R(dst)` on classes.
pub fn map_poset(f: &QuiverMorphism, src: &Quiver, dst: &Quiver) -> Result<MonotoneMap> {
    let vertex_map = map_preorder(f, src, dst)?;
    let rs = reachability_poset(src);
    let rd = reachability_poset(dst);
    let mut map = vec![usize::MAX; rs.poset.len()];
    for (v, &class) in rs.quotient.iter().enumerate() {
        let image = rd.quotient[vertex_map.map[v]];
        debug_assert!(
            map[class] == usize::MAX || map[class] == image,
            "class map must be constant on classes"
        );
        map[class] = image;
    }
    Ok(MonotoneMap { map })
}
