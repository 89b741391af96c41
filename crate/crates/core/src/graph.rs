//! The relative g-noncommuting graph and the small-graph queries run on it.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{ElementId, ElementSet, FiniteGroup, Subgroup, MAX_ORDER};

/// Vertex limit for exact domination and isomorphism search.
pub const SEARCH_LIMIT: usize = 24;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph has {n} vertices; exact search is limited to {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("cannot write {path}: {source}")]
    File { path: String, source: std::io::Error },
}

/// Shape of a graph, tested in the order the variants are listed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum ShapeClass {
    EmptyGraph,
    CompleteGraph,
    Star { center: usize },
    Tree,
    /// `K_clique` with a pendant path of `path` extra vertices.
    Lollipop { clique: usize, path: usize },
    /// `K_clique` joined to an edgeless graph on the remaining vertices.
    JoinCompleteWithIsolatedRest { clique: usize },
    Other,
}

impl ShapeClass {
    pub fn name(&self) -> &'static str {
        match self {
            ShapeClass::EmptyGraph => "EmptyGraph",
            ShapeClass::CompleteGraph => "CompleteGraph",
            ShapeClass::Star { .. } => "Star",
            ShapeClass::Tree => "Tree",
            ShapeClass::Lollipop { .. } => "Lollipop",
            ShapeClass::JoinCompleteWithIsolatedRest { .. } => "JoinCompleteWithIsolatedRest",
            ShapeClass::Other => "Other",
        }
    }

    /// Stars are trees too.
    pub fn is_tree(&self) -> bool {
        matches!(self, ShapeClass::Tree | ShapeClass::Star { .. })
    }
}

/// A simple undirected graph on at most 128 vertices, one bit row per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjGraph {
    n: usize,
    rows: Vec<u128>,
}

impl AdjGraph {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_ORDER, "at most {MAX_ORDER} vertices");
        AdjGraph { n, rows: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = AdjGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loop at {u}");
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> ElementSet {
        ElementSet::from_bits(self.rows[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        let total: usize = self.degrees().iter().sum();
        debug_assert!(total.is_multiple_of(2));
        total / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.neighbors(u).iter().map(move |v| (u, v.index())))
            .filter(|&(u, v)| u < v)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let full = ElementSet::full(self.n).bits();
        let mut seen = 1u128;
        let mut frontier = 1u128;
        while frontier != 0 {
            let mut next = 0;
            for v in ElementSet::from_bits(frontier).iter() {
                next |= self.rows[v.index()];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == full
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges().iter().all(|&(u, v)| self.rows[u] & self.rows[v] == 0)
    }

    pub fn classify_shape(&self) -> ShapeClass {
        let n = self.n;
        let m = self.edge_count();
        if m == 0 {
            return ShapeClass::EmptyGraph;
        }
        if m == n * (n - 1) / 2 {
            return ShapeClass::CompleteGraph;
        }
        let connected = self.is_connected();
        if connected && m == n - 1 {
            if let Some(center) = (0..n).find(|&v| self.degree(v) == n - 1) {
                return ShapeClass::Star { center };
            }
            return ShapeClass::Tree;
        }
        if connected {
            if let Some((clique, path)) = self.lollipop() {
                return ShapeClass::Lollipop { clique, path };
            }
        }
        let universal: ElementSet = (0..n).filter(|&v| self.degree(v) == n - 1).map(ElementId).collect();
        let rest = ElementSet::full(n).difference(universal);
        if !universal.is_empty() && rest.iter().all(|v| self.neighbors(v.index()) == universal) {
            return ShapeClass::JoinCompleteWithIsolatedRest { clique: universal.len() };
        }
        ShapeClass::Other
    }

    /// Clique size and path length if this is a complete graph on at least
    /// three vertices with a path hanging off exactly one of them.
    fn lollipop(&self) -> Option<(usize, usize)> {
        let leaves: Vec<usize> = (0..self.n).filter(|&v| self.degree(v) == 1).collect();
        let &[leaf] = leaves.as_slice() else {
            return None;
        };
        let mut path = ElementSet::singleton(ElementId(leaf));
        let mut path_len = 1;
        let mut prev = None;
        let mut cur = leaf;
        let attach = loop {
            let mut forward = self.neighbors(cur);
            if let Some(p) = prev {
                forward.remove(ElementId(p));
            }
            let next = forward.first()?.index();
            if forward.len() != 1 || path.contains(ElementId(next)) {
                return None;
            }
            match self.degree(next) {
                1 => return None,
                2 => {
                    path.insert(ElementId(next));
                    path_len += 1;
                    prev = Some(cur);
                    cur = next;
                }
                _ => break next,
            }
        };
        let clique = ElementSet::full(self.n).difference(path);
        let m = clique.len();
        if m < 3 {
            return None;
        }
        for v in clique.iter() {
            let mut inside = clique;
            inside.remove(v);
            let mut expected = inside;
            if v.index() == attach {
                expected.insert(ElementId(cur));
            }
            if self.neighbors(v.index()) != expected {
                return None;
            }
        }
        (self.edge_count() == m * (m - 1) / 2 + path_len).then_some((m, path_len))
    }

    /// Size of a smallest dominating set, by exact search.
    ///
    /// Iterative deepening on the set size, branching on which vertex
    /// dominates the first undominated one.
    pub fn domination_number(&self) -> Result<usize, GraphError> {
        if self.n > SEARCH_LIMIT {
            return Err(GraphError::TooLarge { n: self.n, limit: SEARCH_LIMIT });
        }
        let closed: Vec<u128> = (0..self.n).map(|v| self.rows[v] | 1 << v).collect();
        let full = ElementSet::full(self.n).bits();
        let widest = closed.iter().map(|c| c.count_ones()).max().unwrap_or(0);
        Ok((0..=self.n)
            .find(|&k| dominate(&closed, full, 0, k, widest))
            .expect("the whole vertex set dominates"))
    }

    /// Row-wise bits, for callers that want raw access.
    pub fn rows(&self) -> &[u128] {
        &self.rows
    }
}

fn dominate(closed: &[u128], full: u128, covered: u128, budget: usize, widest: u32) -> bool {
    let open = full & !covered;
    if open == 0 {
        return true;
    }
    if budget == 0 || open.count_ones() > budget as u32 * widest {
        return false;
    }
    let v = open.trailing_zeros() as usize;
    ElementSet::from_bits(closed[v])
        .iter()
        .any(|u| dominate(closed, full, covered | closed[u.index()], budget - 1, widest))
}

/// Finds a vertex bijection `f` with `u ~ v` iff `f(u) ~ f(v)`, or `None`.
///
/// Both graphs are colour-refined together starting from vertex degrees;
/// the search then only pairs vertices of equal colour and checks adjacency
/// against everything already mapped.
pub fn graphs_isomorphic(a: &AdjGraph, b: &AdjGraph) -> Result<Option<Vec<usize>>, GraphError> {
    for g in [a, b] {
        if g.n > SEARCH_LIMIT {
            return Err(GraphError::TooLarge { n: g.n, limit: SEARCH_LIMIT });
        }
    }
    if a.n != b.n || a.edge_count() != b.edge_count() {
        return Ok(None);
    }
    let (ca, cb) = refine_colours(a, b);
    let histogram = |c: &[usize]| {
        let mut h = c.to_vec();
        h.sort_unstable();
        h
    };
    if histogram(&ca) != histogram(&cb) {
        return Ok(None);
    }

    // Visit order: rare colours first, then prefer vertices with many
    // already-placed neighbours.
    let class_size = |c: usize| ca.iter().filter(|&&x| x == c).count();
    let mut order: Vec<usize> = Vec::with_capacity(a.n);
    let mut placed = 0u128;
    while order.len() < a.n {
        let next = (0..a.n)
            .filter(|&v| placed >> v & 1 == 0)
            .min_by_key(|&v| {
                let linked = (a.rows[v] & placed).count_ones();
                (std::cmp::Reverse(linked), class_size(ca[v]), v)
            })
            .unwrap();
        placed |= 1 << next;
        order.push(next);
    }

    let mut map = vec![usize::MAX; a.n];
    let mut used = 0u128;
    Ok(extend(a, b, &ca, &cb, &order, 0, &mut map, &mut used).then_some(map))
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &AdjGraph,
    b: &AdjGraph,
    ca: &[usize],
    cb: &[usize],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut u128,
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    for w in 0..b.n {
        if *used >> w & 1 == 1 || cb[w] != ca[v] {
            continue;
        }
        let consistent =
            order[..depth].iter().all(|&u| a.has_edge(u, v) == b.has_edge(map[u], w));
        if !consistent {
            continue;
        }
        map[v] = w;
        *used |= 1 << w;
        if extend(a, b, ca, cb, order, depth + 1, map, used) {
            return true;
        }
        *used &= !(1 << w);
        map[v] = usize::MAX;
    }
    false
}

/// Joint colour refinement; colour ids are comparable across both graphs.
fn refine_colours(a: &AdjGraph, b: &AdjGraph) -> (Vec<usize>, Vec<usize>) {
    let mut ca = a.degrees();
    let mut cb = b.degrees();
    let mut classes = 0;
    loop {
        let signature = |g: &AdjGraph, c: &[usize], v: usize| {
            let mut around: Vec<usize> = g.neighbors(v).iter().map(|u| c[u.index()]).collect();
            around.sort_unstable();
            (c[v], around)
        };
        let sa: Vec<_> = (0..a.n).map(|v| signature(a, &ca, v)).collect();
        let sb: Vec<_> = (0..b.n).map(|v| signature(b, &cb, v)).collect();
        let ids: BTreeMap<_, usize> = sa
            .iter()
            .chain(sb.iter())
            .cloned()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        ca = sa.iter().map(|s| ids[s]).collect();
        cb = sb.iter().map(|s| ids[s]).collect();
        if ids.len() == classes {
            return (ca, cb);
        }
        classes = ids.len();
    }
}

/// `Γ^g_{H,G}`: vertex set `G`; distinct `x`, `y` adjacent iff one of them
/// lies in `H` and `[x, y]` is neither `g` nor `g^-1`.
#[derive(Debug, Clone)]
pub struct RelGraph<'g> {
    group: &'g FiniteGroup,
    h_members: ElementSet,
    g_elem: ElementId,
    adjacency: AdjGraph,
}

impl<'g> RelGraph<'g> {
    pub fn build(h: &Subgroup<'g>, g: ElementId) -> Self {
        let group = h.group();
        let g_inv = group.inv(g);
        let mut adjacency = AdjGraph::new(group.order());
        for x in h.members().iter() {
            for y in group.elements() {
                if x == y {
                    continue;
                }
                let c = group.commutator(x, y);
                if c != g && c != g_inv {
                    adjacency.add_edge(x.index(), y.index());
                }
            }
        }
        RelGraph { group, h_members: h.members(), g_elem: g, adjacency }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn h_members(&self) -> ElementSet {
        self.h_members
    }

    pub fn g_elem(&self) -> ElementId {
        self.g_elem
    }

    pub fn as_graph(&self) -> &AdjGraph {
        &self.adjacency
    }

    pub fn adjacent(&self, x: ElementId, y: ElementId) -> bool {
        self.adjacency.has_edge(x.index(), y.index())
    }

    pub fn degree(&self, x: ElementId) -> usize {
        self.adjacency.degree(x.index())
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.edge_count()
    }

    pub fn classify_shape(&self) -> ShapeClass {
        self.adjacency.classify_shape()
    }

    pub fn is_triangle_free(&self) -> bool {
        self.adjacency.is_triangle_free()
    }

    pub fn domination_number(&self) -> Result<usize, GraphError> {
        self.adjacency.domination_number()
    }

    /// Structural invariants, re-derived from the group table. Returns a
    /// description of every violation found.
    pub fn check_invariants(&self) -> Vec<String> {
        let group = self.group;
        let g_inv = group.inv(self.g_elem);
        let mut problems = Vec::new();
        for x in group.elements() {
            if self.adjacent(x, x) {
                problems.push(format!("self-loop at {x}"));
            }
            for y in group.elements() {
                if self.adjacent(x, y) != self.adjacent(y, x) {
                    problems.push(format!("asymmetric pair {x},{y}"));
                }
                let touches_h = self.h_members.contains(x) || self.h_members.contains(y);
                let c = group.commutator(x, y);
                let expected = x != y && touches_h && c != self.g_elem && c != g_inv;
                if self.adjacent(x, y) != expected {
                    problems.push(format!("adjacency of {x},{y} disagrees with the definition"));
                }
            }
        }
        problems
    }

    /// DOT rendering: `H` vertices boxed, edges sorted by `(min, max)`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph relgraph {\n");
        for x in self.group.elements() {
            let shape = if self.h_members.contains(x) { "box" } else { "ellipse" };
            let label = self.group.label(x).replace('\\', "\\\\").replace('"', "\\\"");
            let _ = writeln!(out, "  {} [label=\"{}\", shape={}];", x.index(), label, shape);
        }
        for (u, v) in self.adjacency.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }

    pub fn export_dot(&self, path: &Path) -> Result<(), GraphError> {
        std::fs::write(path, self.to_dot())
            .map_err(|source| GraphError::File { path: path.display().to_string(), source })
    }
}
