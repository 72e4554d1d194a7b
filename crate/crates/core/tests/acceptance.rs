//! Acceptance gate: one line per criterion, exact equality throughout.
//! Exits nonzero if any criterion fails unexpectedly.

use std::collections::BTreeSet;
use std::process::ExitCode;

use num_bigint::BigUint;
use quiverreach::algebra::{
    commuting_algebra_dim, gldim_report, happel_hh, hochschild_oracle, morita_equivalent,
};
use quiverreach::fixtures;
use quiverreach::gen;
use quiverreach::homology::{betti, nerve_betti_of_quiver, order_complex};
use quiverreach::isomorphism::quivers_isomorphic;
use quiverreach::persistence::{betti_at, hh_betti_curves, parse_filtration};
use quiverreach::quiver::{condensation, transitive_closure};
use quiverreach::reach::{poset_isomorphic, reachability_poset, t_quiver};
use quiverreach::reduction::{
    is_simple_alternating, path_reach_isomorphic, path_reduction, PathReachCertificate,
    ReductionOrder,
};
use quiverreach::{FieldSpec, Gf2, Poset, Quiver, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

enum Outcome {
    Pass(String),
    Fail(String),
    /// A claim refuted by a concrete counterexample, documented rather than hidden.
    Refuted(String),
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    if ok {
        Outcome::Pass(detail.into())
    } else {
        Outcome::Fail(detail.into())
    }
}

// ---- independent oracles ----

/// Adjacency as plain lists, built from the edge list.
fn successors(q: &Quiver) -> Vec<Vec<usize>> {
    let mut succ = vec![Vec::new(); q.vertex_count()];
    for e in q.edges() {
        succ[e.src].push(e.dst);
    }
    succ
}

/// Number of directed paths from `from` to `to` of positive length, by DFS
/// enumeration, stopping at `cap`. Returns `None` if a directed cycle is reachable.
fn enumerate_paths(succ: &[Vec<usize>], from: usize, to: usize, cap: usize) -> Option<usize> {
    fn go(
        succ: &[Vec<usize>],
        v: usize,
        to: usize,
        cap: usize,
        on_path: &mut Vec<bool>,
        count: &mut usize,
    ) -> bool {
        for &w in &succ[v] {
            if on_path[w] {
                return false;
            }
            if w == to {
                *count += 1;
            }
            if *count >= cap {
                return true;
            }
            on_path[w] = true;
            let ok = go(succ, w, to, cap, on_path, count);
            on_path[w] = false;
            if !ok {
                return false;
            }
        }
        true
    }
    let mut on_path = vec![false; succ.len()];
    on_path[from] = true;
    let mut count = 0;
    go(succ, from, to, cap, &mut on_path, &mut count).then_some(count)
}

/// Acyclic with at most one path between any two vertices, by enumeration.
fn thin_and_acyclic(q: &Quiver) -> bool {
    let succ = successors(q);
    let n = q.vertex_count();
    (0..n).all(|a| (0..n).all(|b| enumerate_paths(&succ, a, b, 2).is_some_and(|c| c <= 1)))
}

fn warshall(q: &Quiver) -> Vec<Vec<bool>> {
    let n = q.vertex_count();
    let mut r = vec![vec![false; n]; n];
    for (v, row) in r.iter_mut().enumerate() {
        row[v] = true;
    }
    for e in q.edges() {
        r[e.src][e.dst] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

/// Number of reachable ordered pairs, identities included.
fn reachable_pairs(q: &Quiver) -> usize {
    warshall(q).iter().flatten().filter(|&&b| b).count()
}

/// Strict relations of the reachability poset, as (class, class) pairs of
/// sorted member lists.
type Class = Vec<usize>;

fn reach_order(q: &Quiver) -> (BTreeSet<Class>, BTreeSet<(Class, Class)>) {
    let r = warshall(q);
    let n = q.vertex_count();
    let class = |v: usize| (0..n).filter(|&w| r[v][w] && r[w][v]).collect::<Vec<_>>();
    let classes: BTreeSet<Vec<usize>> = (0..n).map(class).collect();
    let mut less = BTreeSet::new();
    for a in &classes {
        for b in &classes {
            if a != b && r[a[0]][b[0]] {
                less.insert((a.clone(), b.clone()));
            }
        }
    }
    (classes, less)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Poset isomorphism by trying every permutation.
fn brute_poset_iso(a: &Poset, b: &Poset) -> bool {
    let n = a.len();
    n == b.len()
        && permutations(n)
            .iter()
            .any(|p| (0..n).all(|i| (0..n).all(|j| a.leq(i, j) == b.leq(p[i], p[j]))))
}

fn components(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while parent[r] != r {
            r = parent[r];
        }
        parent[v] = r;
        r
    }
    let mut count = n;
    for (a, b) in pairs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}

fn strip_loops(q: &Quiver) -> Quiver {
    q.subquiver(|_| true, |e| !q.edge(e).is_loop())
}

fn nerve(q: &Quiver) -> Vec<usize> {
    nerve_betti_of_quiver(q, FieldSpec::Prime(2), None).expect("GF(2) is supported")
}

fn is_point_homology(b: &[usize]) -> bool {
    b.first() == Some(&1) && b[1..].iter().all(|&x| x == 0)
}

/// All posets on `n` elements up to isomorphism: transitive relations
/// compatible with the natural order, deduplicated.
fn posets_up_to_iso(n: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut found: Vec<Poset> = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let less: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let has = |a: usize, b: usize| less.contains(&(a, b));
        let transitive = less
            .iter()
            .all(|&(a, b)| (b + 1..n).all(|c| !has(b, c) || has(a, c)));
        if !transitive {
            continue;
        }
        let p = Poset::from_relations(n, &less).expect("forward relations");
        if !found.iter().any(|f| poset_isomorphic(f, &p).is_some()) {
            found.push(p);
        }
    }
    found
}

// ---- criteria ----

fn two_route_square() -> Outcome {
    let q = fixtures::two_route_square();
    let dim = commuting_algebra_dim(&q);
    let diamond = Poset::from_relations(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
    let r = reachability_poset(&q).poset;
    let is_diamond = brute_poset_iso(&r, &diamond);
    let b2 = nerve(&q);
    let bq = nerve_betti_of_quiver(&q, FieldSpec::Rational, None).unwrap();
    let hh1 = happel_hh(&q).unwrap().hh1;
    // Happel: 1 - |V| + sum over edges of the number of paths between its ends
    let succ = successors(&q);
    let expected_hh1 = 1 + q
        .edges()
        .iter()
        .map(|e| enumerate_paths(&succ, e.src, e.dst, usize::MAX).unwrap())
        .sum::<usize>()
        - q.vertex_count();
    let iso = path_reach_isomorphic(&q).unwrap();
    let witness = match &iso.certificate {
        PathReachCertificate::QuasiBigon(b) => b.x == "0" && b.y == "3" && b.upper != b.lower,
        _ => false,
    };
    check(
        dim == 9
            && dim == reachable_pairs(&q)
            && is_diamond
            && is_point_homology(&b2)
            && is_point_homology(&bq)
            && hh1 == BigUint::from(1u32)
            && hh1 == BigUint::from(expected_hh1)
            && !iso.isomorphic
            && witness,
        format!("dim {dim}, diamond {is_diamond}, nerve {b2:?}, hh1 {hh1}, isomorphic {}, quasi-bigon 0→3 {witness}", iso.isomorphic),
    )
}

fn alternating_square() -> Outcome {
    let q = fixtures::alternating_square();
    let iso = path_reach_isomorphic(&q).unwrap().isomorphic;
    let (r, _) = path_reduction(&q, &ReductionOrder::Lex).unwrap();
    let alt = is_simple_alternating(&r).holds;
    let b = nerve(&q);
    let gl = gldim_report(&q);
    check(
        iso && alt && b == [1, 1] && gl.is_one && thin_and_acyclic(&q),
        format!(
            "isomorphic {iso}, reduction simple alternating {alt}, nerve {b:?}, gldim one {}",
            gl.is_one
        ),
    )
}

fn strongly_connected_collapse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c);
    let mut quivers: Vec<Quiver> = (1..=6).map(fixtures::bidirected_line).collect();
    quivers.extend((0..50).map(|_| gen::random_strongly_connected(&mut rng, 7, 6)));
    let bad = quivers.iter().filter(|q| {
        let (classes, _) = reach_order(q);
        reachability_poset(q).poset.len() != 1
            || classes.len() != 1
            || !is_point_homology(&nerve(q))
    });
    let bad = bad.count();
    check(
        bad == 0,
        format!("{} quivers, {bad} not collapsing to a point", quivers.len()),
    )
}

fn tiny_quivers() -> Vec<Quiver> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        for mask in 0u32..(1 << slots.len()) {
            let arrows: Vec<_> = slots
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &s)| s)
                .collect();
            out.push(Quiver::from_arrows(n, &arrows));
        }
    }
    out
}

fn t_quiver_vs_condensed_closure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x46);
    let mut quivers = tiny_quivers();
    let tiny = quivers.len();
    quivers.extend((0..500).map(|_| gen::random_quiver(&mut rng, 5, 8, true)));
    let bad = quivers
        .iter()
        .filter(|q| {
            let t = t_quiver(q, true);
            let c = strip_loops(&condensation(&transitive_closure(q)));
            let (classes, less) = reach_order(q);
            !(quivers_isomorphic(&t, &c)
                && t.vertex_count() == classes.len()
                && t.edge_count() == less.len())
        })
        .count();
    check(
        bad == 0,
        format!("{tiny} exhaustive + 500 random, {bad} mismatches"),
    )
}

fn path_reach_characterisation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x38);
    let (mut oracle_mismatch, mut alt_not_iso, mut iso_not_alt, mut isomorphic) = (0, 0, 0, 0);
    for _ in 0..500 {
        let q = gen::random_connected_quiver(&mut rng, 6, 5);
        let iso = path_reach_isomorphic(&q).unwrap().isomorphic;
        let oracle = thin_and_acyclic(&q);
        let alt = is_simple_alternating(&path_reduction(&q, &ReductionOrder::Lex).unwrap().0).holds;
        isomorphic += usize::from(iso);
        oracle_mismatch += usize::from(iso != oracle);
        alt_not_iso += usize::from(alt && !iso);
        iso_not_alt += usize::from(iso && !alt);
    }
    // acyclic, at most one path per pair, yet every ordering folds the 5-cycle
    let counterexample = Quiver::from_arrows(6, &[(0, 2), (3, 1), (4, 3), (5, 0), (0, 1), (4, 2)]);
    let ce_iso = path_reach_isomorphic(&counterexample).unwrap().isomorphic
        && thin_and_acyclic(&counterexample);
    let ce_alt = is_simple_alternating(
        &path_reduction(&counterexample, &ReductionOrder::Lex)
            .unwrap()
            .0,
    )
    .holds;
    let detail = format!(
        "500 samples ({isomorphic} isomorphic): iso vs enumeration {oracle_mismatch} mismatches, \
         alternating but not iso {alt_not_iso}, iso but not alternating {iso_not_alt}; \
         counterexample edges 0→2 3→1 4→3 5→0 0→1 4→2: iso {ce_iso}, reduction simple alternating {ce_alt}"
    );
    if oracle_mismatch > 0 || alt_not_iso > 0 {
        Outcome::Fail(detail)
    } else if ce_iso && !ce_alt {
        Outcome::Refuted(format!(
            "{detail}; the iso ⇒ simple alternating reduction leg does not hold"
        ))
    } else {
        check(iso_not_alt == 0, detail)
    }
}

fn hochschild_vs_order_complex() -> Outcome {
    let mut counts = Vec::new();
    let mut bad = Vec::new();
    let mut checked = 0;
    for n in 1..=5 {
        let posets = posets_up_to_iso(n);
        counts.push(posets.len());
        for p in &posets {
            let c = order_complex(p, None);
            let b2 = betti::<Gf2>(&c, 2);
            let bq = betti::<Rational>(&c, 2);
            for k in 0..=2 {
                checked += 2;
                if hochschild_oracle::<Gf2>(p, k).ok() != Some(b2[k])
                    || hochschild_oracle::<Rational>(p, k).ok() != Some(bq[k])
                {
                    bad.push((n, k));
                }
            }
        }
    }
    check(
        counts == [1, 2, 5, 16, 63] && bad.is_empty(),
        format!("posets per size {counts:?}, {checked} comparisons, mismatches {bad:?}"),
    )
}

fn happel_vs_nerve() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x47);
    let mut bad = 0;
    for _ in 0..200 {
        let q = gen::random_connected_no_quasi_bigon(&mut rng, 6, 4);
        let expected = q.edge_count()
            + components(q.vertex_count(), q.edges().iter().map(|e| (e.src, e.dst)))
            - q.vertex_count();
        let hh1 = happel_hh(&q).unwrap().hh1;
        let b = nerve_betti_of_quiver(&q, FieldSpec::Prime(2), Some(1)).unwrap();
        if !thin_and_acyclic(&q) || hh1 != BigUint::from(expected) || b[1] != expected {
            bad += 1;
        }
    }
    let kronecker = happel_hh(&fixtures::kronecker()).unwrap().hh1;
    check(
        bad == 0 && kronecker == BigUint::from(3u32),
        format!("200 samples, {bad} mismatches; Kronecker hh1 {kronecker}"),
    )
}

fn distinct_pairs() -> Vec<(Quiver, Quiver)> {
    let a = Quiver::from_arrows;
    vec![
        (fixtures::linear(1), fixtures::linear(2)),
        (fixtures::linear(2), fixtures::linear(3)),
        (fixtures::linear(3), fixtures::linear(4)),
        (fixtures::two_route_square(), fixtures::alternating_square()),
        (fixtures::two_route_square(), fixtures::linear(4)),
        (fixtures::alternating_square(), fixtures::linear(4)),
        (fixtures::triangle(), a(3, &[(0, 1), (0, 2)])),
        (a(3, &[(0, 1), (0, 2)]), a(3, &[(1, 0), (2, 0)])),
        (fixtures::kronecker(), a(2, &[])),
        (fixtures::cycle(3), fixtures::linear(2)),
        (fixtures::bidirected_line(3), a(2, &[])),
        (fixtures::fan_into_cycle(), fixtures::fan_into_loop()),
        (fixtures::bigon(1, 1), fixtures::bigon(1, 0)),
        (
            fixtures::hollow_triangle_faces(),
            fixtures::hollow_tetrahedron_faces(),
        ),
        (fixtures::linear(5), a(5, &[(0, 1), (0, 2), (0, 3), (0, 4)])),
        (
            a(4, &[(0, 1), (1, 2), (1, 3)]),
            a(4, &[(0, 1), (0, 2), (2, 3)]),
        ),
        (a(3, &[(0, 1)]), a(3, &[])),
        (
            a(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4)]),
            fixtures::linear(3),
        ),
        (
            a(6, &[(0, 1), (2, 1), (2, 3), (4, 3), (4, 5), (0, 5)]),
            fixtures::alternating_square(),
        ),
        (a(4, &[(0, 1), (2, 1), (2, 3)]), fixtures::linear(4)),
    ]
}

fn morita() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x54);
    let mut relabel_fail = 0;
    let mut sample = Vec::new();
    for _ in 0..100 {
        let q = gen::random_quiver(&mut rng, 6, 9, true);
        let (r, _) = gen::relabel(&q, &mut rng);
        relabel_fail += usize::from(morita_equivalent(&q, &r).is_none());
        if sample.len() < 24 {
            sample.push(q);
            sample.push(r);
        }
    }
    let pairs = distinct_pairs();
    let pair_fail = pairs
        .iter()
        .filter(|(a, b)| {
            let distinct =
                !brute_poset_iso(&reachability_poset(a).poset, &reachability_poset(b).poset);
            !distinct || morita_equivalent(a, b).is_some()
        })
        .count();
    for (a, b) in &pairs {
        sample.push(a.clone());
        sample.push(b.clone());
    }
    let n = sample.len();
    let eq: Vec<Vec<bool>> = sample
        .iter()
        .map(|a| {
            sample
                .iter()
                .map(|b| morita_equivalent(a, b).is_some())
                .collect()
        })
        .collect();
    let reflexive = (0..n).all(|i| eq[i][i]);
    let symmetric = (0..n).all(|i| (0..n).all(|j| eq[i][j] == eq[j][i]));
    let transitive =
        (0..n).all(|i| (0..n).all(|j| !eq[i][j] || (0..n).all(|k| !eq[j][k] || eq[i][k])));
    check(
        relabel_fail == 0 && pair_fail == 0 && pairs.len() == 20 && reflexive && symmetric && transitive,
        format!(
            "relabelings {relabel_fail}/100 rejected, distinct pairs {pair_fail}/20 accepted, \
             laws on {n} quivers: reflexive {reflexive}, symmetric {symmetric}, transitive {transitive}"
        ),
    )
}

fn persistence() -> Outcome {
    let square = parse_filtration(
        "v 0 0\nv 1 0\nv 2 0\nv 3 0\ne a 0 1 1\ne b 2 3 2\ne c 0 2 3\ne d 1 3 4\n",
    )
    .unwrap();
    let curve = hh_betti_curves(&square, FieldSpec::Prime(2), None, 0).unwrap();
    let csv = curve.to_csv();
    let pairs: Vec<(usize, usize)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<usize> = l.split(',').skip(1).map(|x| x.parse().unwrap()).collect();
            (f[0], f[1])
        })
        .collect();
    let recomputed: Vec<(usize, usize)> = square
        .critical_values()
        .iter()
        .map(|t| {
            let b = betti_at(&square, &t.value, FieldSpec::Rational, Some(1)).unwrap();
            let sub = square.sublevel(&t.value);
            assert_eq!(
                b[0],
                components(
                    sub.vertex_count(),
                    sub.edges().iter().map(|e| (e.src, e.dst))
                )
            );
            (b[0], b[1])
        })
        .collect();
    let expected = vec![(4, 0), (3, 0), (2, 0), (1, 0), (1, 0)];

    let pair = parse_filtration("v a 0\nv b 0\ne f a b 1\ne g b a 2\n").unwrap();
    let b0: Vec<usize> = hh_betti_curves(&pair, FieldSpec::Prime(2), None, 0)
        .unwrap()
        .points
        .iter()
        .map(|p| p.betti[0])
        .collect();
    let b0_oracle: Vec<usize> = pair
        .critical_values()
        .iter()
        .map(|t| {
            let sub = pair.sublevel(&t.value);
            components(
                sub.vertex_count(),
                sub.edges().iter().map(|e| (e.src, e.dst)),
            )
        })
        .collect();
    check(
        pairs == expected && recomputed == expected && b0 == [2, 1, 1] && b0 == b0_oracle,
        format!("square (β0,β1) {pairs:?}; reciprocal pair β0 {b0:?}"),
    )
}

fn reduction_goldens() -> Outcome {
    let reduce = |q: &Quiver| path_reduction(q, &ReductionOrder::Lex).unwrap().0;
    let b00 = fixtures::bigon(0, 0);
    let bigons_bad = (0..=3)
        .flat_map(|m| (0..=3).map(move |n| (m, n)))
        .filter(|&(m, n)| !quivers_isomorphic(&reduce(&fixtures::bigon(m, n)), &b00))
        .count();
    let reciprocal = Quiver::from_arrows(2, &[(0, 1), (1, 0)]);
    let cycles_bad = (2..=6)
        .filter(|&k| !quivers_isomorphic(&reduce(&fixtures::cycle(k)), &reciprocal))
        .count();
    let fan = quivers_isomorphic(
        &reduce(&fixtures::fan_into_cycle()),
        &fixtures::fan_into_loop(),
    );
    check(
        bigons_bad == 0 && cycles_bad == 0 && fan && b00.vertex_count() == 2 && b00.edge_count() == 2,
        format!("bigons m,n ≤ 3: {bigons_bad} wrong; cycles 2..=6: {cycles_bad} wrong; fan into cycle → fan into loop {fan}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("two-route square", two_route_square),
        ("alternating square", alternating_square),
        (
            "strongly connected quivers collapse to a point",
            strongly_connected_collapse,
        ),
        (
            "T(Q) vs condensed transitive closure",
            t_quiver_vs_condensed_closure,
        ),
        ("Path ≅ Reach characterisation", path_reach_characterisation),
        (
            "Hochschild oracle vs order complex",
            hochschild_vs_order_complex,
        ),
        ("Happel hh1 vs nerve β1", happel_vs_nerve),
        ("Morita equivalence", morita),
        ("persistence fixtures", persistence),
        ("path reduction goldens", reduction_goldens),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Outcome::Pass(d) => println!("PASS {:>2} {name}: {d}", i + 1),
            Outcome::Fail(d) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {d}", i + 1);
            }
            Outcome::Refuted(d) => {
                println!("FAIL {:>2} {name} (claim refuted, documented): {d}", i + 1)
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
