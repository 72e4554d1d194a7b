//! Isomorphism of small quivers up to renaming of vertices and edges.

use crate::quiver::Quiver;

fn multiplicities(q: &Quiver) -> Vec<Vec<usize>> {
    let n = q.vertex_count();
    let mut m = vec![vec![0; n]; n];
    for e in q.edges() {
        m[e.src][e.dst] += 1;
    }
    m
}

/// A vertex bijection `a → b` preserving edge multiplicities, if any.
pub fn quiver_isomorphism(a: &Quiver, b: &Quiver) -> Option<Vec<usize>> {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    let ma = multiplicities(a);
    let mb = multiplicities(b);
    let signature = |m: &[Vec<usize>], v: usize| {
        let out: usize = m[v].iter().sum();
        let inc: usize = m.iter().map(|row| row[v]).sum();
        (out, inc, m[v][v])
    };
    let sa: Vec<_> = (0..n).map(|v| signature(&ma, v)).collect();
    let sb: Vec<_> = (0..n).map(|v| signature(&mb, v)).collect();
    let mut assignment = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn extend(
        u: usize,
        ma: &[Vec<usize>],
        mb: &[Vec<usize>],
        sa: &[(usize, usize, usize)],
        sb: &[(usize, usize, usize)],
        assignment: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if u == assignment.len() {
            return true;
        }
        for w in 0..assignment.len() {
            if used[w] || sa[u] != sb[w] {
                continue;
            }
            let fits = (0..u)
                .all(|p| ma[u][p] == mb[w][assignment[p]] && ma[p][u] == mb[assignment[p]][w]);
            if fits {
                assignment[u] = w;
                used[w] = true;
                if extend(u + 1, ma, mb, sa, sb, assignment, used) {
                    return true;
                }
                used[w] = false;
            }
        }
        false
    }
    extend(0, &ma, &mb, &sa, &sb, &mut assignment, &mut used).then_some(assignment)
}

pub fn quivers_isomorphic(a: &Quiver, b: &Quiver) -> bool {
    quiver_isomorphism(a, b).is_some()
}
