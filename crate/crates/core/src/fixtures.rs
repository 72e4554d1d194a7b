//! Small named quivers used in tests, examples, and the self-test.

use crate::quiver::{parse_morphism, Quiver, QuiverMorphism};

/// Square with two routes from 0 to 3: edges `a: 0→1`, `b: 0→2`, `c: 1→3`, `d: 2→3`.
pub fn two_route_square() -> Quiver {
    labeled(
        &["0", "1", "2", "3"],
        &[
            ("a", "0", "1"),
            ("b", "0", "2"),
            ("c", "1", "3"),
            ("d", "2", "3"),
        ],
    )
}

/// Alternating square: sources 0 and 3, sinks 1 and 2.
pub fn alternating_square() -> Quiver {
    labeled(
        &["0", "1", "2", "3"],
        &[
            ("a", "0", "1"),
            ("b", "0", "2"),
            ("c", "3", "1"),
            ("d", "3", "2"),
        ],
    )
}

/// Two parallel edges `a, b: 0 → 1`.
pub fn kronecker() -> Quiver {
    labeled(&["0", "1"], &[("a", "0", "1"), ("b", "0", "1")])
}

/// Linear quiver `0 → 1 → … → n` (n edges).
pub fn linear(n: usize) -> Quiver {
    let arrows: Vec<_> = (0..n).map(|i| (i, i + 1)).collect();
    Quiver::from_arrows(n + 1, &arrows)
}

/// Directed cycle on `k ≥ 1` vertices.
pub fn cycle(k: usize) -> Quiver {
    let arrows: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    Quiver::from_arrows(k, &arrows)
}

/// Line on `n + 1` vertices with an edge in each direction between neighbours.
pub fn bidirected_line(n: usize) -> Quiver {
    let arrows: Vec<_> = (0..n).flat_map(|i| [(i, i + 1), (i + 1, i)]).collect();
    Quiver::from_arrows(n + 1, &arrows)
}

/// Two internally disjoint paths from `x` to `y` with `m` and `n` inner
/// vertices: `x → v1 → … → vm → y` (edges `u0..um`) and
/// `x → w1 → … → wn → y` (edges `l0..ln`).
pub fn bigon(m: usize, n: usize) -> Quiver {
    let mut q = Quiver::new();
    q.add_vertex("x").unwrap();
    q.add_vertex("y").unwrap();
    for (prefix, len, edge) in [("v", m, "u"), ("w", n, "l")] {
        let mut prev = "x".to_string();
        for i in 1..=len {
            let id = format!("{prefix}{i}");
            q.add_vertex(id.clone()).unwrap();
            q.add_edge(format!("{edge}{}", i - 1), &prev, &id).unwrap();
            prev = id;
        }
        q.add_edge(format!("{edge}{len}"), &prev, "y").unwrap();
    }
    q
}

/// Two sources feeding a path that runs into a directed 3-cycle, with a
/// further source attached to the cycle.
pub fn fan_into_cycle() -> Quiver {
    labeled(
        &["x", "z", "v1", "v2", "v3", "v4", "w"],
        &[
            ("e1", "x", "v1"),
            ("e2", "z", "v1"),
            ("e3", "v1", "v2"),
            ("e4", "v2", "v3"),
            ("e5", "v4", "v3"),
            ("e6", "v3", "w"),
            ("e7", "w", "v2"),
        ],
    )
}

/// Path reduction of [`fan_into_cycle`]: three sources into a vertex carrying a loop.
pub fn fan_into_loop() -> Quiver {
    labeled(
        &["x", "z", "c", "s"],
        &[
            ("a", "x", "c"),
            ("b", "z", "c"),
            ("d", "s", "c"),
            ("l", "c", "c"),
        ],
    )
}

/// Triangle `0 → 1 → 2` with the shortcut `0 → 2`.
pub fn triangle() -> Quiver {
    labeled(
        &["0", "1", "2"],
        &[("a", "0", "1"), ("b", "0", "2"), ("c", "1", "2")],
    )
}

/// Hasse diagram of the face poset of the boundary of a triangle: vertices
/// `p, q, r` below edges `pq, qr, pr`.
pub fn hollow_triangle_faces() -> Quiver {
    labeled(
        &["p", "q", "r", "pq", "qr", "pr"],
        &[
            ("a", "p", "pq"),
            ("b", "q", "pq"),
            ("c", "q", "qr"),
            ("d", "r", "qr"),
            ("e", "p", "pr"),
            ("f", "r", "pr"),
        ],
    )
}

/// Hasse diagram of the face poset of the boundary of a tetrahedron, a 2-sphere.
pub fn hollow_tetrahedron_faces() -> Quiver {
    let points = ["a", "b", "c", "d"];
    let mut q = Quiver::new();
    let mut faces: Vec<String> = Vec::new();
    for size in 1..=3 {
        for mask in 0u32..16 {
            if mask.count_ones() == size {
                let face: String = (0..4)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| points[i])
                    .collect();
                q.add_vertex(face.clone()).unwrap();
                faces.push(face);
            }
        }
    }
    let mut next = 0;
    for lower in &faces {
        for upper in &faces {
            if upper.len() == lower.len() + 1 && lower.chars().all(|ch| upper.contains(ch)) {
                q.add_edge(format!("h{next}"), lower, upper).unwrap();
                next += 1;
            }
        }
    }
    q
}

/// The collapse of the Kronecker quiver onto a single loop: both vertices to
/// `•`, both edges to `∗`. Returns `(source, target, map)`.
pub fn collapse_morphism() -> (Quiver, Quiver, QuiverMorphism) {
    let src = kronecker();
    let dst = labeled(&["•"], &[("∗", "•", "•")]);
    let f = parse_morphism("vm 0 •\nvm 1 •\nem a ∗\nem b ∗\n").expect("fixture parses");
    (src, dst, f)
}

fn labeled(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Quiver {
    let mut q = Quiver::new();
    for v in vertices {
        q.add_vertex(*v).unwrap();
    }
    for (id, s, t) in edges {
        q.add_edge(*id, s, t).unwrap();
    }
    q
}
