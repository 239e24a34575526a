//! Graphs, rooted trees, nested collections, rooted clusters and the
//! extended hypergraph built from a rooted cluster.
//!
//! Vertex sets are `u64` bitmasks with bit `i` standing for vertex `i`
//! (vertices are 1-based, bit 0 is never used).

use serde::Deserialize;
use thiserror::Error;

pub type VertexSet = u64;

pub const MAX_VERTICES: usize = 62;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("root {0} is not a vertex")]
    BadRoot(u32),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("vertex {0} has no parent")]
    NoParent(u32),
    #[error("vertex {0} already belongs to the set")]
    VertexInSet(u32),
}

pub fn bit(v: u32) -> VertexSet {
    1u64 << v
}

pub fn set_of(vs: &[u32]) -> VertexSet {
    vs.iter().fold(0, |m, &v| m | bit(v))
}

pub fn members(s: VertexSet) -> Vec<u32> {
    crate::algebra::mask_vertices(s)
}

pub fn contains(s: VertexSet, v: u32) -> bool {
    s & bit(v) != 0
}

pub fn format_set(s: VertexSet) -> String {
    let parts: Vec<String> = members(s).iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Undirected simple graph on vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<VertexSet>,
    edges: Vec<(u32, u32)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::InvalidGraph(format!("at most {MAX_VERTICES} vertices supported")));
        }
        let mut adj = vec![0u64; n + 1];
        let mut list = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == 0 || v == 0 || u as usize > n || v as usize > n {
                return Err(GraphError::InvalidGraph(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(GraphError::InvalidGraph(format!("self-loop at {u}")));
            }
            if contains(adj[u as usize], v) {
                return Err(GraphError::InvalidGraph(format!("duplicate edge ({u},{v})")));
            }
            adj[u as usize] |= bit(v);
            adj[v as usize] |= bit(u);
            list.push((u.min(v), u.max(v)));
        }
        list.sort();
        Ok(SimpleGraph { n, adj, edges: list })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn all(&self) -> VertexSet {
        ((1u64 << (self.n + 1)) - 1) & !1
    }

    pub fn neighbors(&self, v: u32) -> VertexSet {
        self.adj[v as usize]
    }

    pub fn adjacent(&self, u: u32, v: u32) -> bool {
        contains(self.adj[u as usize], v)
    }

    pub fn degree(&self, v: u32) -> u32 {
        self.adj[v as usize].count_ones()
    }

    /// Vertices of `within` reachable from `start` inside `within`.
    pub fn reach(&self, start: u32, within: VertexSet) -> VertexSet {
        let mut seen = bit(start) & within;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros();
            frontier &= frontier - 1;
            let fresh = self.adj[v as usize] & within & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen
    }

    pub fn is_connected_set(&self, s: VertexSet) -> bool {
        s != 0 && self.reach(s.trailing_zeros(), s) == s
    }

    /// Connected components of the induced subgraph, ordered by least vertex.
    pub fn components(&self, s: VertexSet) -> Vec<VertexSet> {
        let mut rest = s;
        let mut out = Vec::new();
        while rest != 0 {
            let c = self.reach(rest.trailing_zeros(), rest);
            out.push(c);
            rest &= !c;
        }
        out
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.edges.len() == self.n - 1 && self.is_connected_set(self.all())
    }

    /// All nonempty connected vertex sets, in increasing bitmask order.
    pub fn connected_subsets(&self) -> Vec<VertexSet> {
        let full = self.all();
        let mut out = Vec::new();
        // Enumerate submasks of `full` in increasing order.
        let mut sub: u64 = 0;
        loop {
            sub = sub.wrapping_sub(full) & full;
            if sub == 0 {
                break;
            }
            if self.is_connected_set(sub) {
                out.push(sub);
            }
        }
        out
    }

    /// Returns `(S⊕i, S⊖i)`: the component of `S ∪ {i}` containing `i`, and
    /// the rest of `S ∪ {i}`.
    pub fn oplus_ominus(&self, s: VertexSet, i: u32) -> Result<(VertexSet, VertexSet), GraphError> {
        if contains(s, i) {
            return Err(GraphError::VertexInSet(i));
        }
        let si = s | bit(i);
        let plus = self.reach(i, si);
        Ok((plus, si & !plus))
    }
}

/// Pairwise nested-or-disjoint, every set connected, and no two disjoint
/// members adjacent (so every disjoint subfamily is exactly the component
/// decomposition of its union).
pub fn is_nested_collection(g: &SimpleGraph, sets: &[VertexSet]) -> bool {
    for (k, &a) in sets.iter().enumerate() {
        if !g.is_connected_set(a) {
            return false;
        }
        for &b in &sets[k + 1..] {
            let nested = a & b == a || a & b == b;
            if nested {
                continue;
            }
            if a & b != 0 {
                return false;
            }
            if members(a).iter().any(|&v| g.neighbors(v) & b != 0) {
                return false;
            }
        }
    }
    true
}

/// Maximal nested collection on `universe`: nested, covers `universe`, and no
/// further subset of `universe` can be added. Brute force over submasks.
pub fn is_maximal_nested_collection(g: &SimpleGraph, sets: &[VertexSet], universe: VertexSet) -> bool {
    if !is_nested_collection(g, sets) {
        return false;
    }
    if sets.iter().fold(0, |u, &s| u | s) != universe || sets.iter().any(|&s| s & !universe != 0) {
        return false;
    }
    let mut extended = sets.to_vec();
    extended.push(0);
    let mut sub: u64 = 0;
    loop {
        sub = sub.wrapping_sub(universe) & universe;
        if sub == 0 {
            return true;
        }
        if sets.contains(&sub) || !g.is_connected_set(sub) {
            continue;
        }
        *extended.last_mut().unwrap() = sub;
        if is_nested_collection(g, &extended) {
            return false;
        }
    }
}

#[derive(Deserialize)]
struct TreeDocument {
    vertices: usize,
    edges: Vec<[u32; 2]>,
    root: u32,
}

/// A tree on `1..=n` with a chosen root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    graph: SimpleGraph,
    root: u32,
    parent: Vec<Option<u32>>,
    children: Vec<Vec<u32>>,
    depth: Vec<u32>,
    below: Vec<VertexSet>,
}

impl RootedTree {
    pub fn new(graph: SimpleGraph, root: u32) -> Result<Self, GraphError> {
        let n = graph.n();
        if root == 0 || root as usize > n {
            return Err(GraphError::BadRoot(root));
        }
        if graph.edges().len() + 1 != n {
            return Err(GraphError::NotATree(format!("{} edges on {} vertices", graph.edges().len(), n)));
        }
        if !graph.is_connected_set(graph.all()) {
            return Err(GraphError::NotATree("graph is disconnected".into()));
        }
        let mut parent = vec![None; n + 1];
        let mut children = vec![Vec::new(); n + 1];
        let mut depth = vec![0u32; n + 1];
        let mut order = vec![root];
        let mut k = 0;
        while k < order.len() {
            let v = order[k];
            k += 1;
            for c in members(graph.neighbors(v)) {
                if Some(c) != parent[v as usize] {
                    parent[c as usize] = Some(v);
                    depth[c as usize] = depth[v as usize] + 1;
                    children[v as usize].push(c);
                    order.push(c);
                }
            }
        }
        let mut below = vec![0u64; n + 1];
        for &v in order.iter().rev() {
            below[v as usize] |= bit(v);
            if let Some(p) = parent[v as usize] {
                below[p as usize] |= below[v as usize];
            }
        }
        Ok(RootedTree { graph, root, parent, children, depth, below })
    }

    pub fn from_edges(n: usize, edges: &[(u32, u32)], root: u32) -> Result<Self, GraphError> {
        let g = SimpleGraph::new(n, edges).map_err(|e| match e {
            GraphError::InvalidGraph(m) => GraphError::NotATree(m),
            other => other,
        })?;
        Self::new(g, root)
    }

    pub fn reroot(&self, root: u32) -> Result<Self, GraphError> {
        Self::new(self.graph.clone(), root)
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> {
        1..=self.n() as u32
    }

    pub fn parent(&self, x: u32) -> Result<u32, GraphError> {
        self.parent[x as usize].ok_or(GraphError::NoParent(x))
    }

    pub fn parent_opt(&self, x: u32) -> Option<u32> {
        self.parent[x as usize]
    }

    pub fn children(&self, x: u32) -> &[u32] {
        &self.children[x as usize]
    }

    pub fn depth(&self, x: u32) -> u32 {
        self.depth[x as usize]
    }

    /// `I_x`: `x` together with everything below it.
    pub fn weakly_below(&self, x: u32) -> VertexSet {
        self.below[x as usize]
    }

    pub fn strictly_below(&self, x: u32) -> VertexSet {
        self.below[x as usize] & !bit(x)
    }

    pub fn strictly_above(&self, x: u32) -> VertexSet {
        let mut out = 0;
        let mut v = self.parent[x as usize];
        while let Some(p) = v {
            out |= bit(p);
            v = self.parent[p as usize];
        }
        out
    }

    pub fn is_minimal(&self, x: u32) -> bool {
        self.children[x as usize].is_empty()
    }

    /// Least common ancestor.
    pub fn join(&self, x: u32, y: u32) -> u32 {
        let (mut a, mut b) = (x, y);
        while self.depth(a) > self.depth(b) {
            a = self.parent[a as usize].unwrap();
        }
        while self.depth(b) > self.depth(a) {
            b = self.parent[b as usize].unwrap();
        }
        while a != b {
            a = self.parent[a as usize].unwrap();
            b = self.parent[b as usize].unwrap();
        }
        a
    }

    /// Γ-minimal vertices (no children) lying in `s`.
    pub fn minimal_in(&self, s: VertexSet) -> VertexSet {
        members(s).into_iter().filter(|&x| self.is_minimal(x)).fold(0, |m, x| m | bit(x))
    }

    /// Greatest element of a connected set.
    pub fn top_of(&self, s: VertexSet) -> u32 {
        members(s).into_iter().min_by_key(|&x| self.depth(x)).expect("nonempty set")
    }
}

pub fn parse_tree(document: &str) -> Result<RootedTree, GraphError> {
    let doc: TreeDocument = serde_json::from_str(document).map_err(|e| GraphError::Parse(e.to_string()))?;
    let edges: Vec<(u32, u32)> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
    if doc.root == 0 || doc.root as usize > doc.vertices {
        return Err(GraphError::BadRoot(doc.root));
    }
    RootedTree::from_edges(doc.vertices, &edges, doc.root)
}

#[derive(Deserialize)]
struct GraphDocument {
    vertices: usize,
    edges: Vec<[u32; 2]>,
    #[serde(default)]
    root: Option<u32>,
}

/// Reads the tree file format without requiring a tree; the root is
/// optional and returned as given.
pub fn parse_graph(document: &str) -> Result<(SimpleGraph, Option<u32>), GraphError> {
    let doc: GraphDocument = serde_json::from_str(document).map_err(|e| GraphError::Parse(e.to_string()))?;
    let edges: Vec<(u32, u32)> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
    Ok((SimpleGraph::new(doc.vertices, &edges)?, doc.root))
}

pub fn tree_to_json(t: &RootedTree) -> String {
    let edges: Vec<[u32; 2]> = t.graph().edges().iter().map(|&(u, v)| [u, v]).collect();
    serde_json::json!({ "vertices": t.n(), "edges": edges, "root": t.root() }).to_string()
}

/// A rooted cluster: one set `I_x` per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub root: u32,
    /// `(x, I_x)` in increasing order of `x`.
    pub sets: Vec<(u32, VertexSet)>,
}

impl Cluster {
    pub fn set_of(&self, x: u32) -> VertexSet {
        self.sets[(x - 1) as usize].1
    }

    pub fn families(&self) -> Vec<VertexSet> {
        self.sets.iter().map(|s| s.1).collect()
    }

    /// The vertex `x` with `I_x == s`, if `s` is a cluster set.
    pub fn label_of(&self, s: VertexSet) -> Option<u32> {
        self.sets.iter().find(|e| e.1 == s).map(|e| e.0)
    }
}

pub fn rooted_cluster(t: &RootedTree) -> Cluster {
    Cluster { root: t.root(), sets: t.vertices().map(|x| (x, t.weakly_below(x))).collect() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PosetQuery {
    Parent(u32),
    Children(u32),
    StrictlyBelow(u32),
    WeaklyBelow(u32),
    StrictlyAbove(u32),
    Join(u32, u32),
    MinimalPrimedBelow(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PosetAnswer {
    Vertex(u32),
    Set(VertexSet),
}

pub fn poset_query(t: &RootedTree, q: &PosetQuery) -> Result<PosetAnswer, GraphError> {
    Ok(match *q {
        PosetQuery::Parent(x) => PosetAnswer::Vertex(t.parent(x)?),
        PosetQuery::Children(x) => PosetAnswer::Set(set_of(t.children(x))),
        PosetQuery::StrictlyBelow(x) => PosetAnswer::Set(t.strictly_below(x)),
        PosetQuery::WeaklyBelow(x) => PosetAnswer::Set(t.weakly_below(x)),
        PosetQuery::StrictlyAbove(x) => PosetAnswer::Set(t.strictly_above(x)),
        PosetQuery::Join(x, y) => PosetAnswer::Vertex(ClusterHypergraph::new(t).join(x, y)),
        PosetQuery::MinimalPrimedBelow(x) => PosetAnswer::Set(ClusterHypergraph::new(t).primed_below(x)),
    })
}

/// The extended tree Γ′ (one primed vertex per degree-1 vertex, numbered
/// `n+1..` in increasing order of the vertex it hangs off) with one hyperedge
/// per cluster set `I_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterHypergraph {
    tree: RootedTree,
    total: u32,
    primed_of: Vec<Option<u32>>,
    base_of: Vec<u32>,
    adj: Vec<VertexSet>,
    up: Vec<Option<u32>>,
    depth: Vec<u32>,
    below: Vec<VertexSet>,
    hyperedges: Vec<VertexSet>,
}

impl ClusterHypergraph {
    pub fn new(t: &RootedTree) -> Self {
        let n = t.n() as u32;
        let leaves: Vec<u32> = if n >= 2 { t.vertices().filter(|&v| t.graph().degree(v) == 1).collect() } else { vec![] };
        let total = n + leaves.len() as u32;
        assert!((total as usize) < 64, "extended graph too large");
        let mut primed_of = vec![None; n as usize + 1];
        let mut base_of: Vec<u32> = (0..=total).collect();
        let mut adj = vec![0u64; total as usize + 1];
        for v in t.vertices() {
            adj[v as usize] = t.graph().neighbors(v);
        }
        for (k, &leaf) in leaves.iter().enumerate() {
            let p = n + 1 + k as u32;
            primed_of[leaf as usize] = Some(p);
            base_of[p as usize] = leaf;
            adj[leaf as usize] |= bit(p);
            adj[p as usize] |= bit(leaf);
        }
        // Poset on Γ′: tree order, primed leaves below their leaf, the primed
        // root (if any) above the root.
        let mut up = vec![None; total as usize + 1];
        for v in t.vertices() {
            up[v as usize] = t.parent_opt(v);
        }
        for &leaf in &leaves {
            let p = primed_of[leaf as usize].unwrap();
            if leaf == t.root() {
                up[leaf as usize] = Some(p);
            } else {
                up[p as usize] = Some(leaf);
            }
        }
        let mut depth = vec![0u32; total as usize + 1];
        let mut below = vec![0u64; total as usize + 1];
        for v in 1..=total {
            let mut d = 0;
            let mut w = v;
            below[v as usize] |= bit(v);
            while let Some(p) = up[w as usize] {
                below[p as usize] |= bit(v);
                d += 1;
                w = p;
            }
            depth[v as usize] = d;
        }
        let mut hyperedges = vec![0u64; n as usize + 1];
        for x in t.vertices() {
            let ix = t.weakly_below(x);
            let nb = members(ix).iter().fold(0u64, |m, &v| m | adj[v as usize]);
            hyperedges[x as usize] = nb & !ix;
        }
        ClusterHypergraph { tree: t.clone(), total, primed_of, base_of, adj, up, depth, below, hyperedges }
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn n(&self) -> u32 {
        self.tree.n() as u32
    }

    /// Largest vertex index of Γ′.
    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn is_primed(&self, v: u32) -> bool {
        v > self.n()
    }

    pub fn primed(&self, v: u32) -> Option<u32> {
        self.primed_of.get(v as usize).copied().flatten()
    }

    /// The original vertex a primed vertex hangs off (identity on Γ).
    pub fn base(&self, v: u32) -> u32 {
        self.base_of[v as usize]
    }

    pub fn neighbors(&self, v: u32) -> VertexSet {
        self.adj[v as usize]
    }

    pub fn adjacent(&self, u: u32, v: u32) -> bool {
        contains(self.adj[u as usize], v)
    }

    /// `x⁺` in Γ′: the parent, or the primed root above a degree-1 root.
    pub fn up(&self, v: u32) -> Option<u32> {
        self.up[v as usize]
    }

    pub fn weakly_below(&self, v: u32) -> VertexSet {
        self.below[v as usize]
    }

    pub fn leq(&self, a: u32, b: u32) -> bool {
        contains(self.below[b as usize], a)
    }

    /// `𝓛_x`: primed vertices below `x`.
    pub fn primed_below(&self, x: u32) -> VertexSet {
        self.below[x as usize] & !self.tree.graph().all() & !1 & !bit(x)
    }

    pub fn join(&self, x: u32, y: u32) -> u32 {
        let (mut a, mut b) = (x, y);
        while self.depth[a as usize] > self.depth[b as usize] {
            a = self.up[a as usize].unwrap();
        }
        while self.depth[b as usize] > self.depth[a as usize] {
            b = self.up[b as usize].unwrap();
        }
        while a != b {
            a = self.up[a as usize].unwrap();
            b = self.up[b as usize].unwrap();
        }
        a
    }

    /// Endpoints of the hyperedge labelled `I_x`.
    pub fn hyperedge(&self, x: u32) -> VertexSet {
        self.hyperedges[x as usize]
    }

    /// Γ′-neighbors of `s` outside `s` (the set `S′`).
    pub fn boundary(&self, s: VertexSet) -> VertexSet {
        members(s).iter().fold(0u64, |m, &v| m | self.adj[v as usize]) & !s
    }

    pub fn vertex_name(&self, v: u32) -> String {
        if self.is_primed(v) {
            format!("{}'", self.base(v))
        } else {
            v.to_string()
        }
    }
}
