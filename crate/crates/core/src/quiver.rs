//! Finite quivers: representation, the QVR text format, morphisms, and the
//! elementary graph algorithms everything else is built on (reachability,
//! strongly connected components, condensation, path counting).

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet, VecDeque};
use std::ops::Add;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bitmatrix::BoolMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.src == self.dst
    }
}

/// A finite quiver with opaque string ids. Loops and parallel edges are allowed.
///
/// Vertices and edges are stored in insertion order; the `usize` handles used
/// throughout the crate are positions in these lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    vertex_index: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, usize>,
}

impl Quiver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Quiver on vertices `"0"..n` with edges `"e0".."ek"` given by index pairs.
    pub fn from_arrows(n: usize, arrows: &[(usize, usize)]) -> Self {
        let mut q = Quiver::new();
        for v in 0..n {
            q.add_vertex(v.to_string()).expect("fresh vertex id");
        }
        for (i, &(s, t)) in arrows.iter().enumerate() {
            q.push_edge(format!("e{i}"), s, t).expect("fresh edge id");
        }
        q
    }

    pub fn add_vertex(&mut self, id: impl Into<String>) -> Result<usize> {
        let id = id.into();
        if self.vertex_index.contains_key(&id) {
            return Err(Error::Duplicate { kind: "vertex", id });
        }
        let ix = self.vertices.len();
        self.vertex_index.insert(id.clone(), ix);
        self.vertices.push(id);
        Ok(ix)
    }

    /// Adds an edge between existing vertices given by id.
    pub fn add_edge(&mut self, id: impl Into<String>, src: &str, dst: &str) -> Result<usize> {
        let s = self.vertex(src).ok_or_else(|| unknown("vertex", src))?;
        let t = self.vertex(dst).ok_or_else(|| unknown("vertex", dst))?;
        self.push_edge(id, s, t)
    }

    /// Adds an edge between existing vertices given by index.
    pub fn push_edge(&mut self, id: impl Into<String>, src: usize, dst: usize) -> Result<usize> {
        let id = id.into();
        assert!(
            src < self.vertices.len() && dst < self.vertices.len(),
            "vertex index out of range"
        );
        if self.edge_index.contains_key(&id) {
            return Err(Error::Duplicate { kind: "edge", id });
        }
        let ix = self.edges.len();
        self.edge_index.insert(id.clone(), ix);
        self.edges.push(Edge { id, src, dst });
        Ok(ix)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_by_id(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    /// Outgoing edge indices per vertex, in edge order.
    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertex_count()];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.src].push(i);
        }
        out
    }

    /// Incoming edge indices per vertex, in edge order.
    pub fn in_edges(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count()];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.dst].push(i);
        }
        inc
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(Edge::is_loop)
    }

    /// Serializes to the QVR text format.
    pub fn to_qvr(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&format!("v {v}\n"));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "e {} {} {}\n",
                e.id, self.vertices[e.src], self.vertices[e.dst]
            ));
        }
        out
    }

    pub fn to_json(&self) -> QuiverJson {
        QuiverJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    id: e.id.clone(),
                    src: self.vertices[e.src].clone(),
                    dst: self.vertices[e.dst].clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &QuiverJson) -> Result<Self> {
        let mut q = Quiver::new();
        for v in &json.vertices {
            q.add_vertex(v.clone())?;
        }
        for e in &json.edges {
            q.add_edge(e.id.clone(), &e.src, &e.dst)?;
        }
        Ok(q)
    }

    /// The subquiver induced by a vertex subset and an edge subset. Edges whose
    /// endpoints are not kept are dropped.
    pub fn subquiver(
        &self,
        keep_vertex: impl Fn(usize) -> bool,
        keep_edge: impl Fn(usize) -> bool,
    ) -> Quiver {
        let mut q = Quiver::new();
        let mut map = vec![None; self.vertex_count()];
        for (v, id) in self.vertices.iter().enumerate() {
            if keep_vertex(v) {
                map[v] = Some(q.add_vertex(id.clone()).expect("ids unique in parent"));
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if let (true, Some(s), Some(t)) = (keep_edge(i), map[e.src], map[e.dst]) {
                q.push_edge(e.id.clone(), s, t)
                    .expect("ids unique in parent");
            }
        }
        q
    }
}

fn unknown(kind: &'static str, id: &str) -> Error {
    Error::UnknownId {
        kind,
        id: id.to_string(),
    }
}

/// JSON form of a quiver, arrays in input order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// Meaningful lines of a line-oriented document: `(line number, tokens)`,
/// skipping blanks and `#` comments.
pub(crate) fn tokenized_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

/// Parses the QVR format: `v <id>` and `e <id> <src> <dst>` lines, `#` comments.
pub fn parse_quiver(text: &str) -> Result<Quiver> {
    let mut q = Quiver::new();
    let mut pending = Vec::new();
    for (line, tokens) in tokenized_lines(text) {
        match tokens.as_slice() {
            ["v", id] => {
                q.add_vertex(*id).map_err(|_| Error::DuplicateId {
                    line,
                    kind: "vertex",
                    id: id.to_string(),
                })?;
            }
            ["e", id, src, dst] => pending.push((line, *id, *src, *dst)),
            ["v", ..] => return Err(syntax(line, "expected `v <id>`")),
            ["e", ..] => return Err(syntax(line, "expected `e <id> <src> <dst>`")),
            [other, ..] => return Err(syntax(line, &format!("unknown directive `{other}`"))),
            [] => unreachable!(),
        }
    }
    for (line, id, src, dst) in pending {
        for end in [src, dst] {
            if q.vertex(end).is_none() {
                return Err(Error::UndeclaredVertex {
                    line,
                    edge: id.to_string(),
                    vertex: end.to_string(),
                });
            }
        }
        q.add_edge(id, src, dst).map_err(|_| Error::DuplicateId {
            line,
            kind: "edge",
            id: id.to_string(),
        })?;
    }
    Ok(q)
}

pub(crate) fn syntax(line: usize, message: &str) -> Error {
    Error::Syntax {
        line,
        message: message.to_string(),
    }
}

/// A path: a start vertex and a composable edge sequence. The empty sequence is
/// the identity path at `start`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: usize,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn identity(v: usize) -> Self {
        Path {
            start: v,
            edges: Vec::new(),
        }
    }

    /// Builds a path from a non-empty edge sequence, checking composability.
    pub fn from_edges(q: &Quiver, edges: Vec<usize>) -> Result<Self> {
        let first = *edges
            .first()
            .ok_or_else(|| Error::NotAPath("empty edge sequence".into()))?;
        let p = Path {
            start: q.edge(first).src,
            edges,
        };
        p.validate(q)?;
        Ok(p)
    }

    pub fn from_edge_ids(q: &Quiver, ids: &[&str]) -> Result<Self> {
        let edges = ids
            .iter()
            .map(|id| q.edge_by_id(id).ok_or_else(|| unknown("edge", id)))
            .collect::<Result<_>>()?;
        Path::from_edges(q, edges)
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn end(&self, q: &Quiver) -> usize {
        self.edges.last().map_or(self.start, |&e| q.edge(e).dst)
    }

    /// Visited vertices, `len() + 1` of them.
    pub fn vertices(&self, q: &Quiver) -> Vec<usize> {
        std::iter::once(self.start)
            .chain(self.edges.iter().map(|&e| q.edge(e).dst))
            .collect()
    }

    pub fn validate(&self, q: &Quiver) -> Result<()> {
        let mut at = self.start;
        for &e in &self.edges {
            let edge = q
                .edges
                .get(e)
                .ok_or_else(|| Error::NotAPath(format!("edge index {e} out of range")))?;
            if edge.src != at {
                return Err(Error::NotAPath(format!(
                    "edge `{}` does not start at `{}`",
                    edge.id,
                    q.vertex_id(at)
                )));
            }
            at = edge.dst;
        }
        Ok(())
    }

    /// No loop edges and no repeated vertex.
    pub fn is_simple(&self, q: &Quiver) -> bool {
        let vs = self.vertices(q);
        let distinct: HashSet<_> = vs.iter().collect();
        distinct.len() == vs.len()
    }

    pub fn edge_ids<'a>(&self, q: &'a Quiver) -> Vec<&'a str> {
        self.edges.iter().map(|&e| q.edge(e).id.as_str()).collect()
    }

    pub fn to_json(&self, q: &Quiver) -> PathJson {
        PathJson {
            start: q.vertex_id(self.start).to_string(),
            edges: self.edge_ids(q).into_iter().map(String::from).collect(),
            vertices: self
                .vertices(q)
                .into_iter()
                .map(|v| q.vertex_id(v).to_string())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathJson {
    pub start: String,
    pub edges: Vec<String>,
    pub vertices: Vec<String>,
}

/// Existence of paths between vertices; entry `(v, w)` is true iff some path
/// `v → w` exists. Reflexive through identity paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachMatrix {
    pub matrix: BoolMatrix,
}

impl ReachMatrix {
    pub fn reaches(&self, v: usize, w: usize) -> bool {
        self.matrix.get(v, w)
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    pub fn count_true(&self) -> usize {
        self.matrix.count_true()
    }
}

/// Reflexive-transitive closure of the edge relation, by BFS from every vertex.
pub fn reachability_closure(q: &Quiver) -> ReachMatrix {
    let n = q.vertex_count();
    let out = q.out_edges();
    let mut m = BoolMatrix::new(n);
    let mut queue = VecDeque::new();
    for v in 0..n {
        m.set(v, v, true);
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            for &e in &out[u] {
                let w = q.edge(e).dst;
                if !m.get(v, w) {
                    m.set(v, w, true);
                    queue.push_back(w);
                }
            }
        }
    }
    ReachMatrix { matrix: m }
}

/// The transitive closure as a quiver: one edge `v → w` for every path of
/// length ≥ 1 (a loop at `v` when `v` lies on a directed cycle). Computed
/// with Warshall's algorithm, independently of [`reachability_closure`].
pub fn transitive_closure(q: &Quiver) -> Quiver {
    let n = q.vertex_count();
    let mut r = BoolMatrix::new(n);
    for e in q.edges() {
        r.set(e.src, e.dst, true);
    }
    for k in 0..n {
        for i in 0..n {
            if r.get(i, k) {
                for j in 0..n {
                    if r.get(k, j) {
                        r.set(i, j, true);
                    }
                }
            }
        }
    }
    let mut out = q.subquiver(|_| true, |_| false);
    let mut next = 0;
    for i in 0..n {
        for j in 0..n {
            if r.get(i, j) {
                out.push_edge(format!("tc{next}"), i, j).expect("fresh id");
                next += 1;
            }
        }
    }
    out
}

/// Strongly connected components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccPartition {
    /// Blocks in a topological order of the condensation; members sorted by index.
    pub blocks: Vec<Vec<usize>>,
    /// Block position of each vertex.
    pub block_of: Vec<usize>,
    /// Representative of each block: the member with the smallest id.
    pub representatives: Vec<usize>,
}

impl SccPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Tarjan's algorithm, iterative. Blocks come out in a topological order of
/// the condensation (sources first), ties broken by smallest vertex index.
pub fn scc_partition(q: &Quiver) -> SccPartition {
    let n = q.vertex_count();
    let succ: Vec<Vec<usize>> = q
        .out_edges()
        .iter()
        .map(|es| es.iter().map(|&e| q.edge(e).dst).collect())
        .collect();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut blocks: Vec<Vec<usize>> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut block = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        block.push(w);
                        if w == v {
                            break;
                        }
                    }
                    block.sort_unstable();
                    blocks.push(block);
                }
            }
        }
    }
    let mut block_of = vec![0; n];
    for (b, block) in blocks.iter().enumerate() {
        for &v in block {
            block_of[v] = b;
        }
    }
    // canonical order: Kahn on the block DAG, smallest first vertex first
    let mut indeg = vec![0usize; blocks.len()];
    let mut block_succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); blocks.len()];
    for e in q.edges() {
        let (a, b) = (block_of[e.src], block_of[e.dst]);
        if a != b && block_succ[a].insert(b) {
            indeg[b] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<(usize, usize)>> = (0..blocks.len())
        .filter(|&b| indeg[b] == 0)
        .map(|b| Reverse((blocks[b][0], b)))
        .collect();
    let mut order = Vec::with_capacity(blocks.len());
    while let Some(Reverse((_, b))) = ready.pop() {
        order.push(b);
        for &c in &block_succ[b] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                ready.push(Reverse((blocks[c][0], c)));
            }
        }
    }
    let blocks: Vec<Vec<usize>> = order
        .into_iter()
        .map(|b| std::mem::take(&mut blocks[b]))
        .collect();
    for (b, block) in blocks.iter().enumerate() {
        for &v in block {
            block_of[v] = b;
        }
    }
    let representatives = blocks
        .iter()
        .map(|b| {
            *b.iter()
                .min_by_key(|&&v| q.vertex_id(v))
                .expect("non-empty block")
        })
        .collect();
    SccPartition {
        blocks,
        block_of,
        representatives,
    }
}

/// Quiver of strongly connected components. A block gets a loop iff it
/// contains an edge; parallel edges collapse. Each condensation edge reuses
/// the id of the first original edge projecting onto it.
pub fn condensation(q: &Quiver) -> Quiver {
    let scc = scc_partition(q);
    condensation_with(q, &scc)
}

pub(crate) fn condensation_with(q: &Quiver, scc: &SccPartition) -> Quiver {
    let mut c = Quiver::new();
    for &r in &scc.representatives {
        c.add_vertex(q.vertex_id(r))
            .expect("representatives distinct");
    }
    let mut seen = HashSet::new();
    for e in q.edges() {
        let pair = (scc.block_of[e.src], scc.block_of[e.dst]);
        if seen.insert(pair) {
            c.push_edge(e.id.clone(), pair.0, pair.1)
                .expect("edge ids unique");
        }
    }
    c
}

/// Kahn topological order. Fails on any directed cycle, loops included.
pub fn topological_order(q: &Quiver) -> Result<Vec<usize>> {
    let n = q.vertex_count();
    let mut indeg = vec![0usize; n];
    for e in q.edges() {
        indeg[e.dst] += 1;
    }
    let out = q.out_edges();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &e in &out[v] {
            let w = q.edge(e).dst;
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err(Error::CyclicQuiver)
    }
}

pub fn is_acyclic(q: &Quiver) -> bool {
    topological_order(q).is_ok()
}

/// Some directed cycle (a loop counts), or `None` for acyclic quivers.
pub fn find_directed_cycle(q: &Quiver) -> Option<Path> {
    if let Some(e) = q.edges().iter().position(Edge::is_loop) {
        return Some(Path {
            start: q.edge(e).src,
            edges: vec![e],
        });
    }
    let n = q.vertex_count();
    let out = q.out_edges();
    // 0 = unvisited, 1 = on the DFS stack, 2 = finished
    let mut color = vec![0u8; n];
    let mut via = vec![usize::MAX; n];
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut call = vec![(root, 0usize)];
        color[root] = 1;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&e) = out[v].get(*pos) {
                *pos += 1;
                let w = q.edge(e).dst;
                match color[w] {
                    0 => {
                        color[w] = 1;
                        via[w] = e;
                        call.push((w, 0));
                    }
                    1 => {
                        let mut edges = vec![e];
                        let mut at = v;
                        while at != w {
                            edges.push(via[at]);
                            at = q.edge(via[at]).src;
                        }
                        edges.reverse();
                        return Some(Path { start: w, edges });
                    }
                    _ => {}
                }
            } else {
                color[v] = 2;
                call.pop();
            }
        }
    }
    None
}

/// Number of connected components of the underlying undirected graph.
pub fn weak_components(q: &Quiver) -> usize {
    let n = q.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for e in q.edges() {
        let (a, b) = (find(&mut parent, e.src), find(&mut parent, e.dst));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components
}

/// Connected as an undirected graph. The empty quiver is not connected.
pub fn is_weakly_connected(q: &Quiver) -> bool {
    q.vertex_count() > 0 && weak_components(q) == 1
}

/// First Betti number of the underlying undirected graph, loops included:
/// `|E| - |V| + components`.
pub fn undirected_betti1(q: &Quiver) -> usize {
    q.edge_count() + weak_components(q) - q.vertex_count()
}

/// Path counts on an acyclic quiver, DP over a topological order. `clamp`
/// is applied after every accumulation. Diagonal entries count the identity path.
fn path_count_table<C>(q: &Quiver, clamp: impl Fn(C) -> C) -> Result<Vec<Vec<C>>>
where
    C: Clone + Zero + One + Add<Output = C>,
{
    let order = topological_order(q)?;
    let n = q.vertex_count();
    let out = q.out_edges();
    let mut table: Vec<Vec<C>> = vec![Vec::new(); n];
    for &v in order.iter().rev() {
        let mut row = vec![C::zero(); n];
        row[v] = C::one();
        for &e in &out[v] {
            let u = q.edge(e).dst;
            for (acc, add) in row.iter_mut().zip(&table[u]) {
                *acc = clamp(acc.clone() + add.clone());
            }
        }
        table[v] = row;
    }
    Ok(table)
}

/// Number of distinct paths between each ordered pair, saturated at `cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCounts {
    pub cap: u64,
    pub counts: Vec<Vec<u64>>,
}

impl PathCounts {
    pub fn get(&self, v: usize, w: usize) -> u64 {
        self.counts[v][w]
    }

    /// Largest off-diagonal entry (0 for fewer than two vertices).
    pub fn max_off_diagonal(&self) -> u64 {
        let n = self.counts.len();
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.counts[i][j])
            .max()
            .unwrap_or(0)
    }
}

pub const DEFAULT_PATH_CAP: u64 = 2;

/// Saturating path counts. Errors with [`Error::CyclicQuiver`] if `q` has a
/// directed cycle (loops included).
pub fn count_paths_saturating(q: &Quiver, cap: u64) -> Result<PathCounts> {
    assert!(cap >= 1, "cap must be positive");
    let counts = path_count_table::<u64>(q, |c| c.min(cap))?;
    Ok(PathCounts { cap, counts })
}

/// Exact path counts on an acyclic quiver.
pub fn count_paths_exact(q: &Quiver) -> Result<Vec<Vec<BigUint>>> {
    path_count_table::<BigUint>(q, |c| c)
}

/// Length of the longest directed simple path in the loop-free part of T(Q),
/// i.e. the longest chain of the reachability poset.
pub fn diameter(q: &Quiver) -> usize {
    let t = crate::reach::t_quiver(q, true);
    let order = topological_order(&t).expect("loop-free T(Q) is acyclic");
    let out = t.out_edges();
    let mut longest = vec![0usize; t.vertex_count()];
    for &v in order.iter().rev() {
        longest[v] = out[v]
            .iter()
            .map(|&e| longest[t.edge(e).dst] + 1)
            .max()
            .unwrap_or(0);
    }
    longest.into_iter().max().unwrap_or(0)
}

/// A quiver morphism given by id maps.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverMorphism {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, String>,
}

/// Index form of a morphism whose maps are total and land in the codomain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedMorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Square {
    Source,
    Target,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareViolation {
    pub edge: String,
    pub square: Square,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismCheck {
    pub valid: bool,
    pub violation: Option<SquareViolation>,
}

impl QuiverMorphism {
    pub fn identity(q: &Quiver) -> Self {
        QuiverMorphism {
            vertex_map: q
                .vertices()
                .iter()
                .map(|v| (v.clone(), v.clone()))
                .collect(),
            edge_map: q
                .edges()
                .iter()
                .map(|e| (e.id.clone(), e.id.clone()))
                .collect(),
        }
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &QuiverMorphism) -> QuiverMorphism {
        let compose = |a: &BTreeMap<String, String>, b: &BTreeMap<String, String>| {
            a.iter()
                .filter_map(|(k, v)| b.get(v).map(|w| (k.clone(), w.clone())))
                .collect()
        };
        QuiverMorphism {
            vertex_map: compose(&self.vertex_map, &then.vertex_map),
            edge_map: compose(&self.edge_map, &then.edge_map),
        }
    }

    pub fn resolve(&self, src: &Quiver, dst: &Quiver) -> Result<ResolvedMorphism> {
        for k in self.vertex_map.keys() {
            src.vertex(k).ok_or_else(|| unknown("vertex", k))?;
        }
        for k in self.edge_map.keys() {
            src.edge_by_id(k).ok_or_else(|| unknown("edge", k))?;
        }
        let vertex_map = src
            .vertices()
            .iter()
            .map(|v| {
                let image = self.vertex_map.get(v).ok_or_else(|| Error::NotTotal {
                    kind: "vertex",
                    id: v.clone(),
                })?;
                dst.vertex(image).ok_or_else(|| unknown("vertex", image))
            })
            .collect::<Result<_>>()?;
        let edge_map = src
            .edges()
            .iter()
            .map(|e| {
                let image = self.edge_map.get(&e.id).ok_or_else(|| Error::NotTotal {
                    kind: "edge",
                    id: e.id.clone(),
                })?;
                dst.edge_by_id(image).ok_or_else(|| unknown("edge", image))
            })
            .collect::<Result<_>>()?;
        Ok(ResolvedMorphism {
            vertex_map,
            edge_map,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.vertex_map {
            out.push_str(&format!("vm {k} {v}\n"));
        }
        for (k, v) in &self.edge_map {
            out.push_str(&format!("em {k} {v}\n"));
        }
        out
    }
}

impl ResolvedMorphism {
    /// Image of a path: the edge-wise image, anchored at the image of the start.
    pub fn map_path(&self, path: &Path) -> Path {
        Path {
            start: self.vertex_map[path.start],
            edges: path.edges.iter().map(|&e| self.edge_map[e]).collect(),
        }
    }
}

/// Parses a morphism file of `vm <src> <dst>` and `em <src-edge> <dst-edge>` lines.
pub fn parse_morphism(text: &str) -> Result<QuiverMorphism> {
    let mut f = QuiverMorphism::default();
    for (line, tokens) in tokenized_lines(text) {
        let (map, kind, a, b) = match tokens.as_slice() {
            ["vm", a, b] => (&mut f.vertex_map, "vertex", *a, *b),
            ["em", a, b] => (&mut f.edge_map, "edge", *a, *b),
            ["vm", ..] => return Err(syntax(line, "expected `vm <src> <dst>`")),
            ["em", ..] => return Err(syntax(line, "expected `em <src-edge> <dst-edge>`")),
            [other, ..] => return Err(syntax(line, &format!("unknown directive `{other}`"))),
            [] => unreachable!(),
        };
        if map.insert(a.to_string(), b.to_string()).is_some() {
            return Err(Error::DuplicateId {
                line,
                kind,
                id: a.to_string(),
            });
        }
    }
    Ok(f)
}

/// Checks both commuting squares `f_V ∘ s = s' ∘ f_E` and `f_V ∘ t = t' ∘ f_E`
/// edge by edge, reporting the first failure.
pub fn validate_morphism(f: &QuiverMorphism, src: &Quiver, dst: &Quiver) -> Result<MorphismCheck> {
    let r = f.resolve(src, dst)?;
    for (i, e) in src.edges().iter().enumerate() {
        let image = dst.edge(r.edge_map[i]);
        let square = if r.vertex_map[e.src] != image.src {
            Some(Square::Source)
        } else if r.vertex_map[e.dst] != image.dst {
            Some(Square::Target)
        } else {
            None
        };
        if let Some(square) = square {
            return Ok(MorphismCheck {
                valid: false,
                violation: Some(SquareViolation {
                    edge: e.id.clone(),
                    square,
                }),
            });
        }
    }
    Ok(MorphismCheck {
        valid: true,
        violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parse_kronecker() {
        let q = parse_quiver("v 0\nv 1\ne a 0 1\ne b 0 1").unwrap();
        assert_eq!(q.vertex_count(), 2);
        assert_eq!(q.edge_count(), 2);
        assert!(q.edges().iter().all(|e| e.src == 0 && e.dst == 1));
    }

    #[test]
    fn parse_single_vertex_and_loop() {
        let q = parse_quiver("v 0").unwrap();
        assert_eq!((q.vertex_count(), q.edge_count()), (1, 0));
        let q = parse_quiver("v 0\ne a 0 0").unwrap();
        assert!(q.edge(0).is_loop());
    }

    #[test]
    fn parse_comments_and_forward_references() {
        let q = parse_quiver("# header\n\ne a x y\n  v x\nv y\n").unwrap();
        assert_eq!(q.vertices(), &["x", "y"]);
        assert_eq!(q.edge(0).src, 0);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_quiver("v 0\nv 0"),
            Err(Error::DuplicateId {
                line: 2,
                kind: "vertex",
                id: "0".into()
            })
        );
        assert_eq!(
            parse_quiver("v 0\ne a 0 1"),
            Err(Error::UndeclaredVertex {
                line: 2,
                edge: "a".into(),
                vertex: "1".into()
            })
        );
        assert!(matches!(
            parse_quiver("v 0\ne a 0"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_quiver("x 0"),
            Err(Error::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_quiver("v 0\ne a 0 0\ne a 0 0"),
            Err(Error::DuplicateId {
                line: 3,
                kind: "edge",
                ..
            })
        ));
    }

    #[test]
    fn qvr_and_json_round_trip() {
        let q = fixtures::two_route_square();
        assert_eq!(parse_quiver(&q.to_qvr()).unwrap(), q);
        let json = serde_json::to_string(&q.to_json()).unwrap();
        assert_eq!(
            json,
            r#"{"vertices":["0","1","2","3"],"edges":[{"id":"a","src":"0","dst":"1"},{"id":"b","src":"0","dst":"2"},{"id":"c","src":"1","dst":"3"},{"id":"d","src":"2","dst":"3"}]}"#
        );
        let back: QuiverJson = serde_json::from_str(&json).unwrap();
        assert_eq!(Quiver::from_json(&back).unwrap(), q);
    }

    #[test]
    fn closure_of_square() {
        let r = reachability_closure(&fixtures::two_route_square());
        assert_eq!(r.count_true(), 9);
        assert!(r.reaches(0, 3));
        assert!(!r.reaches(1, 2));
        assert!(!r.reaches(3, 0));
    }

    #[test]
    fn closure_of_edgeless_and_cycle() {
        let r = reachability_closure(&Quiver::from_arrows(4, &[]));
        assert_eq!(r.matrix, BoolMatrix::identity(4));
        assert_eq!(reachability_closure(&fixtures::cycle(3)).count_true(), 9);
    }

    #[test]
    fn scc_examples() {
        let s = scc_partition(&fixtures::cycle(3));
        assert_eq!(s.blocks, vec![vec![0, 1, 2]]);
        let s = scc_partition(&fixtures::bidirected_line(4));
        assert_eq!(s.blocks.len(), 1);
        assert_eq!(s.blocks[0].len(), 5);
        let s = scc_partition(&fixtures::two_route_square());
        assert_eq!(s.len(), 4);
        // topological: 0 first, 3 last
        assert_eq!(s.blocks.first(), Some(&vec![0]));
        assert_eq!(s.blocks.last(), Some(&vec![3]));
    }

    #[test]
    fn scc_representative_is_lexicographic_minimum() {
        let mut q = Quiver::new();
        for id in ["b", "10", "2"] {
            q.add_vertex(id).unwrap();
        }
        q.add_edge("x", "b", "10").unwrap();
        q.add_edge("y", "10", "2").unwrap();
        q.add_edge("z", "2", "b").unwrap();
        let s = scc_partition(&q);
        assert_eq!(q.vertex_id(s.representatives[0]), "10");
    }

    #[test]
    fn condensation_examples() {
        let c = condensation(&fixtures::cycle(3));
        assert_eq!((c.vertex_count(), c.edge_count()), (1, 1));
        assert!(c.edge(0).is_loop());

        let edgeless = Quiver::from_arrows(3, &[]);
        assert_eq!(condensation(&edgeless), edgeless);

        // 0 ⇄ 1 → 2
        let q = Quiver::from_arrows(3, &[(0, 1), (1, 0), (1, 2)]);
        let c = condensation(&q);
        assert_eq!(c.vertices(), &["0", "2"]);
        let pairs: Vec<_> = c
            .edges()
            .iter()
            .map(|e| (c.vertex_id(e.src), c.vertex_id(e.dst)))
            .collect();
        assert_eq!(pairs, vec![("0", "0"), ("0", "2")]);
    }

    #[test]
    fn path_counts() {
        let p = count_paths_saturating(&fixtures::two_route_square(), 2).unwrap();
        assert_eq!(p.get(0, 3), 2);
        assert_eq!(p.get(0, 1), 1);
        assert_eq!(p.get(3, 0), 0);
        assert_eq!(p.get(2, 2), 1);

        let p = count_paths_saturating(&fixtures::linear(4), 2).unwrap();
        assert_eq!(p.max_off_diagonal(), 1);
        assert_eq!(
            count_paths_saturating(&fixtures::cycle(3), 2),
            Err(Error::CyclicQuiver)
        );
        assert_eq!(
            count_paths_saturating(&Quiver::from_arrows(1, &[(0, 0)]), 2),
            Err(Error::CyclicQuiver)
        );
    }

    #[test]
    fn exact_counts_do_not_saturate() {
        // chain of 10 Kronecker pieces: 2^10 paths end to end
        let arrows: Vec<_> = (0..10).flat_map(|i| [(i, i + 1), (i, i + 1)]).collect();
        let q = Quiver::from_arrows(11, &arrows);
        assert_eq!(
            count_paths_exact(&q).unwrap()[0][10],
            BigUint::from(1024u32)
        );
        assert_eq!(count_paths_saturating(&q, 2).unwrap().get(0, 10), 2);
    }

    #[test]
    fn diameters() {
        for n in 0..=5 {
            assert_eq!(diameter(&fixtures::linear(n)), n);
        }
        assert_eq!(diameter(&fixtures::cycle(4)), 0);
        assert_eq!(diameter(&fixtures::two_route_square()), 2);
    }

    #[test]
    fn directed_cycles() {
        assert!(find_directed_cycle(&fixtures::two_route_square()).is_none());
        let q = fixtures::cycle(4);
        let c = find_directed_cycle(&q).unwrap();
        c.validate(&q).unwrap();
        assert_eq!(c.end(&q), c.start);
        assert_eq!(c.len(), 4);
        let q = Quiver::from_arrows(3, &[(0, 1), (1, 2), (2, 2)]);
        assert_eq!(find_directed_cycle(&q).unwrap().edges, vec![2]);
    }

    #[test]
    fn collapse_morphism_is_valid() {
        let (src, dst, f) = fixtures::collapse_morphism();
        assert_eq!(
            validate_morphism(&f, &src, &dst).unwrap(),
            MorphismCheck {
                valid: true,
                violation: None
            }
        );
    }

    #[test]
    fn identity_morphism_is_valid() {
        let q = fixtures::fan_into_cycle();
        assert!(
            validate_morphism(&QuiverMorphism::identity(&q), &q, &q)
                .unwrap()
                .valid
        );
    }

    #[test]
    fn reversed_edge_breaks_source_square() {
        let src = Quiver::from_arrows(2, &[(0, 1)]);
        let dst = Quiver::from_arrows(2, &[(1, 0)]);
        let f = parse_morphism("vm 0 0\nvm 1 1\nem e0 e0\n").unwrap();
        let check = validate_morphism(&f, &src, &dst).unwrap();
        assert_eq!(
            check.violation,
            Some(SquareViolation {
                edge: "e0".into(),
                square: Square::Source
            })
        );
    }

    #[test]
    fn morphism_domain_errors() {
        let q = Quiver::from_arrows(2, &[(0, 1)]);
        let f = parse_morphism("vm 0 0\nem e0 e0").unwrap();
        assert_eq!(
            validate_morphism(&f, &q, &q),
            Err(Error::NotTotal {
                kind: "vertex",
                id: "1".into()
            })
        );
        let f = parse_morphism("vm 0 0\nvm 1 9\nem e0 e0").unwrap();
        assert_eq!(
            validate_morphism(&f, &q, &q),
            Err(Error::UnknownId {
                kind: "vertex",
                id: "9".into()
            })
        );
        let f = parse_morphism("vm 0 0\nvm 1 1\nvm 7 1\nem e0 e0").unwrap();
        assert!(validate_morphism(&f, &q, &q).is_err());
        assert!(matches!(
            parse_morphism("vm 0"),
            Err(Error::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_morphism("vm 0 0\nvm 0 1"),
            Err(Error::DuplicateId { line: 2, .. })
        ));
    }

    #[test]
    fn morphism_text_round_trip() {
        let (_, _, f) = fixtures::collapse_morphism();
        assert_eq!(parse_morphism(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn transitive_closure_adds_loops_on_cycles() {
        let t = transitive_closure(&Quiver::from_arrows(3, &[(0, 1), (1, 0), (1, 2)]));
        // pairs with a path of length >= 1: 0→0,0→1,0→2,1→0,1→1,1→2
        assert_eq!(t.edge_count(), 6);
        let t = transitive_closure(&fixtures::linear(3));
        assert_eq!(t.edge_count(), 6);
        assert!(!t.has_loops());
    }

    #[test]
    fn undirected_betti_counts_loops_and_parallels() {
        assert_eq!(undirected_betti1(&fixtures::two_route_square()), 1);
        assert_eq!(undirected_betti1(&fixtures::kronecker()), 1);
        assert_eq!(undirected_betti1(&Quiver::from_arrows(2, &[(0, 0)])), 1);
        assert_eq!(weak_components(&Quiver::from_arrows(2, &[(0, 0)])), 2);
        assert!(!is_weakly_connected(&Quiver::new()));
    }
}
