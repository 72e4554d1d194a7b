//! Seeded random quivers for property tests and the self-test.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::quiver::{count_paths_saturating, Quiver, QuiverMorphism};
use crate::reach::Poset;

/// A uniformly random permutation of `0..n`.
pub fn permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Any quiver with 1..=`max_vertices` vertices and 0..=`max_edges` edges.
pub fn random_quiver<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_edges: usize,
    loops: bool,
) -> Quiver {
    let n = rng.random_range(1..=max_vertices);
    let m = rng.random_range(0..=max_edges);
    let arrows: Vec<_> = (0..m)
        .filter_map(|_| {
            let (s, t) = (rng.random_range(0..n), rng.random_range(0..n));
            (loops || s != t).then_some((s, t))
        })
        .collect();
    Quiver::from_arrows(n, &arrows)
}

/// Random spanning tree on `n` vertices with random orientations.
fn tree_arrows<R: Rng>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    (1..n)
        .map(|v| {
            let u = rng.random_range(0..v);
            if rng.random_bool(0.5) {
                (u, v)
            } else {
                (v, u)
            }
        })
        .collect()
}

/// Weakly connected quiver on 1..=`max_vertices` vertices: a random spanning
/// tree plus up to `max_extra` further edges (loops allowed).
pub fn random_connected_quiver<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_extra: usize,
) -> Quiver {
    let n = rng.random_range(1..=max_vertices);
    let mut arrows = tree_arrows(rng, n);
    for _ in 0..rng.random_range(0..=max_extra) {
        arrows.push((rng.random_range(0..n), rng.random_range(0..n)));
    }
    arrows.shuffle(rng);
    Quiver::from_arrows(n, &arrows)
}

/// Strongly connected quiver: a Hamiltonian cycle in random vertex order plus extra edges.
pub fn random_strongly_connected<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_extra: usize,
) -> Quiver {
    let n = rng.random_range(1..=max_vertices);
    let order = permutation(rng, n);
    let mut arrows: Vec<_> = if n == 1 {
        Vec::new()
    } else {
        (0..n).map(|i| (order[i], order[(i + 1) % n])).collect()
    };
    for _ in 0..rng.random_range(0..=max_extra) {
        arrows.push((rng.random_range(0..n), rng.random_range(0..n)));
    }
    arrows.shuffle(rng);
    Quiver::from_arrows(n, &arrows)
}

/// Weakly connected acyclic quiver: every edge points forward in a hidden random order.
pub fn random_connected_acyclic<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_extra: usize,
) -> Quiver {
    let n = rng.random_range(1..=max_vertices);
    let rank = permutation(rng, n);
    let orient = |(a, b): (usize, usize)| if rank[a] < rank[b] { (a, b) } else { (b, a) };
    let mut arrows: Vec<_> = tree_arrows(rng, n).into_iter().map(orient).collect();
    if n > 1 {
        for _ in 0..rng.random_range(0..=max_extra) {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a != b {
                arrows.push(orient((a, b)));
            }
        }
    }
    arrows.shuffle(rng);
    Quiver::from_arrows(n, &arrows)
}

/// Connected acyclic quiver with at most one path between any two vertices.
/// Drawn by rejection from [`random_connected_acyclic`]; trees always qualify.
pub fn random_connected_no_quasi_bigon<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_extra: usize,
) -> Quiver {
    loop {
        let q = if rng.random_bool(0.3) {
            random_alternating(rng, max_vertices)
        } else {
            random_connected_acyclic(rng, max_vertices, max_extra)
        };
        let counts = count_paths_saturating(&q, 2).expect("acyclic by construction");
        if counts.max_off_diagonal() <= 1 && crate::quiver::is_weakly_connected(&q) {
            return q;
        }
    }
}

/// Connected simple alternating quiver: a random connected bipartite graph
/// oriented from the first side to the second.
pub fn random_alternating<R: Rng>(rng: &mut R, max_vertices: usize) -> Quiver {
    let n = rng.random_range(1..=max_vertices);
    if n == 1 {
        return Quiver::from_arrows(1, &[]);
    }
    let sources = rng.random_range(1..n);
    let side = |v: usize| v < sources;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    // spanning tree alternating between sides
    let mut order = permutation(rng, n);
    order.sort_by_key(|&v| !side(v));
    let mut placed = vec![order[0]];
    let mut rest: Vec<usize> = order[1..].to_vec();
    rest.shuffle(rng);
    while let Some(pos) = rest
        .iter()
        .position(|&v| placed.iter().any(|&u| side(u) != side(v)))
    {
        let v = rest.remove(pos);
        let partners: Vec<usize> = placed
            .iter()
            .copied()
            .filter(|&u| side(u) != side(v))
            .collect();
        let u = *partners.choose(rng).expect("partner exists");
        pairs.push(if side(u) { (u, v) } else { (v, u) });
        placed.push(v);
    }
    for s in 0..sources {
        for t in sources..n {
            if rng.random_bool(0.25) && !pairs.contains(&(s, t)) {
                pairs.push((s, t));
            }
        }
    }
    pairs.shuffle(rng);
    Quiver::from_arrows(n, &pairs)
}

/// A random poset on `n` elements: the transitive closure of random forward
/// relations in a hidden order.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> Poset {
    let rank = permutation(rng, n);
    let mut less = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if rank[a] < rank[b] && rng.random_bool(density) {
                less.push((a, b));
            }
        }
    }
    Poset::from_relations(n, &less).expect("forward relations form an order")
}

/// A copy of `q` with fresh ids and shuffled vertex and edge order, and the
/// isomorphism from `q` to it.
pub fn relabel<R: Rng>(q: &Quiver, rng: &mut R) -> (Quiver, QuiverMorphism) {
    let vperm = permutation(rng, q.vertex_count());
    let eperm = permutation(rng, q.edge_count());
    let vname = |v: usize| format!("n{}", vperm[v]);
    let ename = |e: usize| format!("f{}", eperm[e]);
    let mut vorder: Vec<usize> = (0..q.vertex_count()).collect();
    vorder.sort_by_key(|&v| vperm[v]);
    let mut eorder: Vec<usize> = (0..q.edge_count()).collect();
    eorder.sort_by_key(|&e| eperm[e]);

    let mut out = Quiver::new();
    for &v in &vorder {
        out.add_vertex(vname(v)).expect("fresh ids");
    }
    for &e in &eorder {
        let edge = q.edge(e);
        out.add_edge(ename(e), &vname(edge.src), &vname(edge.dst))
            .expect("fresh ids");
    }
    let f = QuiverMorphism {
        vertex_map: (0..q.vertex_count())
            .map(|v| (q.vertex_id(v).to_string(), vname(v)))
            .collect(),
        edge_map: (0..q.edge_count())
            .map(|e| (q.edge(e).id.clone(), ename(e)))
            .collect(),
    };
    (out, f)
}

/// Identifies two random vertices of `q` (when it has at least two) and
/// returns the quotient quiver with the projection morphism.
pub fn collapse_random_pair<R: Rng>(q: &Quiver, rng: &mut R) -> (Quiver, QuiverMorphism) {
    let n = q.vertex_count();
    let (keep, drop) = if n < 2 {
        (0, 0)
    } else {
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        (a.min(b), a.max(b))
    };
    let image = |v: usize| if v == drop { keep } else { v };
    let mut out = Quiver::new();
    for v in 0..n {
        if n < 2 || v != drop {
            out.add_vertex(q.vertex_id(v)).expect("ids unique");
        }
    }
    for e in q.edges() {
        out.add_edge(
            e.id.clone(),
            q.vertex_id(image(e.src)),
            q.vertex_id(image(e.dst)),
        )
        .expect("ids unique");
    }
    let f = QuiverMorphism {
        vertex_map: (0..n)
            .map(|v| {
                (
                    q.vertex_id(v).to_string(),
                    q.vertex_id(image(v)).to_string(),
                )
            })
            .collect(),
        edge_map: q
            .edges()
            .iter()
            .map(|e| (e.id.clone(), e.id.clone()))
            .collect(),
    };
    (out, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{is_acyclic, is_weakly_connected, scc_partition, validate_morphism};
    use crate::reduction::is_simple_alternating;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_meet_their_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            assert!(is_weakly_connected(&random_connected_quiver(
                &mut rng, 6, 5
            )));
            assert_eq!(
                scc_partition(&random_strongly_connected(&mut rng, 7, 4)).len(),
                1
            );
            let q = random_connected_acyclic(&mut rng, 6, 5);
            assert!(is_acyclic(&q) && is_weakly_connected(&q));
            let q = random_alternating(&mut rng, 6);
            assert!(is_weakly_connected(&q));
            assert!(is_simple_alternating(&q).holds);
            let q = random_connected_no_quasi_bigon(&mut rng, 6, 4);
            assert!(count_paths_saturating(&q, 2).unwrap().max_off_diagonal() <= 1);
        }
    }

    #[test]
    fn relabel_and_collapse_are_morphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let q = random_quiver(&mut rng, 6, 9, true);
            let (r, f) = relabel(&q, &mut rng);
            assert!(validate_morphism(&f, &q, &r).unwrap().valid);
            assert_eq!(
                (r.vertex_count(), r.edge_count()),
                (q.vertex_count(), q.edge_count())
            );
            let (c, g) = collapse_random_pair(&q, &mut rng);
            assert!(validate_morphism(&g, &q, &c).unwrap().valid);
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_quiver(&mut ChaCha8Rng::seed_from_u64(3), 7, 12, true);
        let b = random_quiver(&mut ChaCha8Rng::seed_from_u64(3), 7, 12, true);
        assert_eq!(a, b);
    }
}
