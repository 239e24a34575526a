//! Hyper T-paths: diagrams, the rule validator, singleton generators,
//! pasting, enumeration and a brute-force search over small diagrams.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{LaurentPoly, Monomial, RationalFn};
use crate::graphcore::{bit, contains, format_set, members, ClusterHypergraph, RootedTree, VertexSet};
use crate::lpcalc::{admissible_choices, cluster_var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TPathError {
    #[error("set {} is not connected", format_set(*.0))]
    NotConnected(VertexSet),
    #[error("hyper T-paths need a tree with at least two vertices")]
    TooSmall,
    #[error("paths cannot be pasted along ({0},{1})")]
    NotPasteable(u32, u32),
    #[error("invalid hyper T-path: {0:?}")]
    InvalidPath(Vec<Violation>),
    #[error("search frontier exceeded {0} states")]
    BudgetExceeded(usize),
    #[error("underlying graph is not a path")]
    NotAPath,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

/// A connection label: an edge of Γ′ (stored with the smaller end first) or
/// the hyperedge of the cluster set `I_x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConnLabel {
    Edge(u32, u32),
    Hyper(u32),
}

impl ConnLabel {
    pub fn edge(u: u32, v: u32) -> Self {
        ConnLabel::Edge(u.min(v), u.max(v))
    }

    /// Endpoint labels the connection must join, or `None` for a pair that
    /// is not an edge of Γ′.
    pub fn endpoints(&self, h: &ClusterHypergraph) -> Option<VertexSet> {
        match *self {
            ConnLabel::Edge(u, v) => (u != v && u <= h.total() && v <= h.total() && h.adjacent(u, v)).then(|| bit(u) | bit(v)),
            ConnLabel::Hyper(x) => (x >= 1 && x <= h.n()).then(|| h.hyperedge(x)),
        }
    }

    pub fn weight(&self, t: &RootedTree) -> Monomial {
        match *self {
            ConnLabel::Edge(..) => Monomial::one(),
            ConnLabel::Hyper(x) => Monomial::var(cluster_var(t, x)),
        }
    }

    pub fn name(&self, h: &ClusterHypergraph) -> String {
        match *self {
            ConnLabel::Edge(u, v) => format!("({},{})", h.vertex_name(u), h.vertex_name(v)),
            ConnLabel::Hyper(x) => format!("I{x}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TNode {
    pub id: usize,
    pub label: u32,
    pub boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TConnection {
    pub id: usize,
    pub parity: Parity,
    pub label: ConnLabel,
    pub incident: Vec<usize>,
}

/// Which requirement a diagram breaks: one of the nine numbered rules,
/// connectivity, or the even-connection census.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    Rule(u8),
    Connected,
    EvenCensus,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleId::Rule(k) => write!(f, "rule {k}"),
            RuleId::Connected => write!(f, "connectivity"),
            RuleId::EvenCensus => write!(f, "even census"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: RuleId,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Validation {
    pub violations: Vec<Violation>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, rule: u8) -> bool {
        self.violations.iter().any(|v| v.rule == RuleId::Rule(rule))
    }

    /// Distinct rules cited, in order.
    pub fn rules(&self) -> Vec<RuleId> {
        self.violations.iter().map(|v| v.rule).collect::<BTreeSet<_>>().into_iter().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TWeight {
    pub value: Monomial,
}

impl TWeight {
    pub fn to_rational(&self) -> RationalFn {
        RationalFn::from_poly(LaurentPoly::monomial(self.value.clone()))
    }
}

type NodeKey = (u32, Option<ConnLabel>);

/// Canonical form of a diagram: its connections as (parity, label, node keys)
/// sorted, where a boundary node is keyed by its label and an internal node by
/// its label and the label of its even connection.
pub type CanonicalForm = Vec<(Parity, ConnLabel, Vec<NodeKey>)>;

#[derive(Clone, Debug)]
pub struct HyperTPath {
    hypergraph: Arc<ClusterHypergraph>,
    target: VertexSet,
    nodes: Vec<TNode>,
    connections: Vec<TConnection>,
}

impl HyperTPath {
    pub fn new(hypergraph: Arc<ClusterHypergraph>, target: VertexSet) -> Self {
        HyperTPath { hypergraph, target, nodes: Vec::new(), connections: Vec::new() }
    }

    pub fn add_node(&mut self, label: u32, boundary: bool) -> usize {
        let id = self.nodes.len();
        self.nodes.push(TNode { id, label, boundary });
        id
    }

    pub fn add_connection(&mut self, parity: Parity, label: ConnLabel, incident: &[usize]) -> usize {
        let id = self.connections.len();
        self.connections.push(TConnection { id, parity, label, incident: incident.to_vec() });
        id
    }

    pub fn hypergraph(&self) -> &ClusterHypergraph {
        &self.hypergraph
    }

    pub fn tree(&self) -> &RootedTree {
        self.hypergraph.tree()
    }

    pub fn target(&self) -> VertexSet {
        self.target
    }

    pub fn nodes(&self) -> &[TNode] {
        &self.nodes
    }

    pub fn connections(&self) -> &[TConnection] {
        &self.connections
    }

    /// The weight monomial without checking the rules.
    pub fn raw_weight(&self) -> Monomial {
        let t = self.tree();
        self.connections.iter().fold(Monomial::one(), |m, c| match c.parity {
            Parity::Odd => m.mul(&c.label.weight(t)),
            Parity::Even => m.div(&c.label.weight(t)),
        })
    }

    pub fn weight(&self) -> Result<TWeight, TPathError> {
        let v = self.validate();
        if !v.is_valid() {
            return Err(TPathError::InvalidPath(v.violations));
        }
        Ok(TWeight { value: self.raw_weight() })
    }

    fn node_connections(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for c in &self.connections {
            for &k in &c.incident {
                if k < out.len() && !out[k].contains(&c.id) {
                    out[k].push(c.id);
                }
            }
        }
        out
    }

    fn even_label_of(&self, node: usize, incidence: &[Vec<usize>]) -> Option<ConnLabel> {
        let evens: Vec<ConnLabel> = incidence[node]
            .iter()
            .map(|&c| &self.connections[c])
            .filter(|c| c.parity == Parity::Even)
            .map(|c| c.label)
            .collect();
        (evens.len() == 1).then(|| evens[0])
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        let incidence = self.node_connections();
        let key = |k: usize| -> NodeKey {
            let n = &self.nodes[k];
            if n.boundary {
                (n.label, None)
            } else {
                (n.label, self.even_label_of(k, &incidence))
            }
        };
        let mut form: CanonicalForm = self
            .connections
            .iter()
            .map(|c| {
                let mut ks: Vec<NodeKey> = c.incident.iter().map(|&k| key(k)).collect();
                ks.sort();
                (c.parity, c.label, ks)
            })
            .collect();
        form.sort();
        form
    }

    pub fn validate(&self) -> Validation {
        let mut out = Validation::default();
        let mut flag = |rule: RuleId, detail: String| out.violations.push(Violation { rule, detail });
        let h = &*self.hypergraph;
        let s = self.target;
        let name = |v: u32| h.vertex_name(v);

        for n in &self.nodes {
            if n.label == 0 || n.label > h.total() {
                flag(RuleId::Rule(1), format!("node {} has label {} outside the extended graph", n.id, n.label));
            }
        }
        for c in &self.connections {
            if c.incident.iter().any(|&k| k >= self.nodes.len()) {
                flag(RuleId::Rule(1), format!("connection {} touches a missing node", c.id));
                continue;
            }
            let labels: Vec<u32> = c.incident.iter().map(|&k| self.nodes[k].label).collect();
            let mut sorted = labels.clone();
            sorted.sort_unstable();
            let distinct = sorted.windows(2).all(|w| w[0] != w[1]);
            match c.label.endpoints(h) {
                None => flag(RuleId::Rule(1), format!("connection {} has a label that is not a hyperedge", c.id)),
                Some(ends) => {
                    if !distinct || sorted != members(ends) {
                        flag(
                            RuleId::Rule(1),
                            format!("connection {} labelled {} joins the wrong endpoints", c.id, c.label.name(h)),
                        );
                    }
                }
            }
        }

        // Rule 2: boundary labels are S′, each once.
        let boundary = h.boundary(s);
        let mut seen: Vec<u32> = self.nodes.iter().filter(|n| n.boundary).map(|n| n.label).collect();
        seen.sort_unstable();
        if seen != members(boundary) {
            let shown: Vec<String> = seen.iter().map(|&v| name(v)).collect();
            flag(RuleId::Rule(2), format!("boundary labels [{}] differ from S'", shown.join(",")));
        }

        let incidence = self.node_connections();
        for n in &self.nodes {
            let conns = &incidence[n.id];
            let evens = conns.iter().filter(|&&c| self.connections[c].parity == Parity::Even).count();
            let odds = conns.len() - evens;
            if n.boundary {
                if evens > 0 {
                    flag(RuleId::Rule(4), format!("boundary node {} ({}) touches an even connection", n.id, name(n.label)));
                }
            } else if n.label <= h.n() && contains(s, n.label) {
                if evens != 1 || odds == 0 {
                    flag(
                        RuleId::Rule(5),
                        format!("internal node {} ({}) has {evens} even and {odds} odd connections", n.id, name(n.label)),
                    );
                }
            } else if evens != 1 || odds != 1 {
                flag(
                    RuleId::Rule(6),
                    format!("internal node {} ({}) has {evens} even and {odds} odd connections", n.id, name(n.label)),
                );
            }
        }

        if !self.is_connected(&incidence) {
            flag(RuleId::Connected, "diagram is not connected".into());
        }

        let (expected, _) = census(h, s);
        let mut evens: Vec<u32> = Vec::new();
        let mut census_ok = true;
        for c in self.connections.iter().filter(|c| c.parity == Parity::Even) {
            match c.label {
                ConnLabel::Hyper(y) => evens.push(y),
                ConnLabel::Edge(..) => census_ok = false,
            }
        }
        evens.sort_unstable();
        if !census_ok || evens != expected {
            flag(RuleId::EvenCensus, "even connections differ from the census of S".into());
        }

        if self.nodes.iter().all(|n| n.label >= 1 && n.label <= h.total()) {
            for v in self.boundary_path_violations(&incidence, false) {
                out.violations.push(v);
            }
        }
        out
    }

    fn is_connected(&self, incidence: &[Vec<usize>]) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(k) = stack.pop() {
            for &c in &incidence[k] {
                for &j in &self.connections[c].incident {
                    if j < seen.len() && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Rules 7, 8 and 9 over every simple path between two boundary nodes.
    /// With `first_only` the scan stops at the first violation.
    fn boundary_path_violations(&self, incidence: &[Vec<usize>], first_only: bool) -> Vec<Violation> {
        let h = &*self.hypergraph;
        let s = self.target;
        let top = h.tree().top_of(s);
        let above = h.up(top);
        let boundary: Vec<usize> = self.nodes.iter().filter(|n| n.boundary).map(|n| n.id).collect();
        let mut found: Vec<Violation> = Vec::new();
        let mut reported: BTreeSet<(RuleId, usize, usize)> = BTreeSet::new();

        for &start in &boundary {
            for &end in &boundary {
                if start >= end {
                    continue;
                }
                let (x, y) = (self.nodes[start].label, self.nodes[end].label);
                let req = PathRequirement::new(h, x, y, above);
                let mut walker = Walker {
                    path: self,
                    incidence,
                    end,
                    visited_nodes: vec![false; self.nodes.len()],
                    used: vec![false; self.connections.len()],
                    evens: Vec::new(),
                    interior: Vec::new(),
                    req: &req,
                    hit: Vec::new(),
                };
                walker.visited_nodes[start] = true;
                walker.walk(start, first_only);
                for rule in walker.hit {
                    if reported.insert((rule, start, end)) {
                        found.push(Violation {
                            rule,
                            detail: format!("a path from {} to {} breaks {rule}", h.vertex_name(x), h.vertex_name(y)),
                        });
                        if first_only {
                            return found;
                        }
                    }
                }
            }
        }
        found
    }

    /// True when some boundary-to-boundary path already breaks rules 7–9.
    fn has_path_violation(&self) -> bool {
        let incidence = self.node_connections();
        !self.boundary_path_violations(&incidence, true).is_empty()
    }
}

/// Even labels required along boundary paths and the allowed interior labels.
struct PathRequirement {
    /// Even sequence from the first boundary label to the second; `None` when
    /// both ends lie above `S` (cannot happen for a single `m⁺`).
    sequence: Option<(u8, Vec<u32>)>,
    allowed: VertexSet,
}

impl PathRequirement {
    fn new(h: &ClusterHypergraph, x: u32, y: u32, above: Option<u32>) -> Self {
        let join = h.join(x, y);
        let chain = |from: u32| {
            let mut out = Vec::new();
            let mut v = from;
            while let Some(p) = h.up(v) {
                if p == join {
                    break;
                }
                out.push(p);
                v = p;
            }
            if from == join {
                out.clear();
            }
            out
        };
        let a_side = chain(x);
        let b_side = chain(y);
        let own = |v: u32| (!h.is_primed(v)).then_some(v);
        let allowed = h.primed_below(join)
            | bit(join)
            | a_side.iter().fold(0u64, |m, &v| m | bit(v))
            | b_side.iter().fold(0u64, |m, &v| m | bit(v));
        let x_above = Some(x) == above;
        let y_above = Some(y) == above;
        let sequence = match (x_above, y_above) {
            (false, false) => {
                let mut seq: Vec<u32> = own(x).into_iter().collect();
                seq.extend(a_side.iter().copied());
                seq.extend(b_side.iter().rev().copied());
                seq.extend(own(y));
                Some((7, seq))
            }
            (false, true) => {
                let mut seq: Vec<u32> = own(x).into_iter().collect();
                seq.extend(a_side.iter().take(a_side.len().saturating_sub(1)).copied());
                Some((8, seq))
            }
            (true, false) => {
                let mut seq: Vec<u32> = own(y).into_iter().collect();
                seq.extend(b_side.iter().take(b_side.len().saturating_sub(1)).copied());
                seq.reverse();
                Some((8, seq))
            }
            (true, true) => None,
        };
        PathRequirement { sequence, allowed }
    }
}

struct Walker<'a> {
    path: &'a HyperTPath,
    incidence: &'a [Vec<usize>],
    end: usize,
    visited_nodes: Vec<bool>,
    used: Vec<bool>,
    evens: Vec<u32>,
    interior: Vec<u32>,
    req: &'a PathRequirement,
    hit: Vec<RuleId>,
}

impl Walker<'_> {
    fn walk(&mut self, at: usize, first_only: bool) {
        if first_only && !self.hit.is_empty() {
            return;
        }
        for &c in &self.incidence[at] {
            if self.used[c] {
                continue;
            }
            let conn = &self.path.connections[c];
            let even = match (conn.parity, conn.label) {
                (Parity::Even, ConnLabel::Hyper(y)) => Some(y),
                (Parity::Even, ConnLabel::Edge(..)) => Some(0),
                _ => None,
            };
            self.used[c] = true;
            if let Some(y) = even {
                self.evens.push(y);
            }
            for &next in &conn.incident {
                if self.visited_nodes[next] {
                    continue;
                }
                if next == self.end {
                    self.check();
                }
                self.visited_nodes[next] = true;
                self.interior.push(self.path.nodes[next].label);
                self.walk(next, first_only);
                self.interior.pop();
                self.visited_nodes[next] = false;
            }
            if even.is_some() {
                self.evens.pop();
            }
            self.used[c] = false;
        }
    }

    fn check(&mut self) {
        if let Some((rule, seq)) = &self.req.sequence {
            if &self.evens != seq {
                self.push(RuleId::Rule(*rule));
            }
        }
        if self.interior.iter().any(|&v| !contains(self.req.allowed, v)) {
            self.push(RuleId::Rule(9));
        }
    }

    fn push(&mut self, rule: RuleId) {
        if !self.hit.contains(&rule) {
            self.hit.push(rule);
        }
    }
}

/// Labels `y` of the forced even connections `I_y` (sorted), and the maximal
/// element of `S`.
fn census(h: &ClusterHypergraph, s: VertexSet) -> (Vec<u32>, u32) {
    let top = h.tree().top_of(s);
    let skip = bit(top) | h.up(top).map_or(0, bit);
    let labels = (s | h.boundary(s)) & !skip;
    (members(labels).into_iter().filter(|&v| !h.is_primed(v)).collect(), top)
}

pub fn hypergraph_of(t: &RootedTree) -> Result<Arc<ClusterHypergraph>, TPathError> {
    if t.n() < 2 {
        return Err(TPathError::TooSmall);
    }
    Ok(Arc::new(ClusterHypergraph::new(t)))
}

/// Which singleton diagram to build for a vertex `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingletonChoice {
    /// `T_y^+`, or the lone odd `I_y` connection when `y` is minimal.
    Plus,
    /// `T_y^c` for a child `c`.
    Child(u32),
}

struct Builder {
    p: HyperTPath,
}

impl Builder {
    fn node(&mut self, label: u32, boundary: bool) -> usize {
        self.p.add_node(label, boundary)
    }

    fn conn(&mut self, parity: Parity, label: ConnLabel, incident: Vec<usize>) {
        self.p.add_connection(parity, label, &incident);
    }

    /// Fresh internal nodes for the primed vertices below `x`.
    fn primed_nodes(&mut self, x: u32) -> Vec<usize> {
        members(self.p.hypergraph.primed_below(x)).into_iter().map(|v| self.node(v, false)).collect()
    }

    /// Boundary `c` joined by an odd edge to a fresh `y` node, which carries
    /// the even `I_c` onto fresh `𝓛_c` nodes. Returns those nodes.
    fn side_branch(&mut self, y: u32, c: u32) -> Vec<usize> {
        let b = self.node(c, true);
        let inner = self.node(y, false);
        self.conn(Parity::Odd, ConnLabel::edge(c, y), vec![b, inner]);
        let ls = self.primed_nodes(c);
        let mut ends = vec![inner];
        ends.extend(&ls);
        self.conn(Parity::Even, ConnLabel::Hyper(c), ends);
        ls
    }
}

pub fn singleton_path(
    h: &Arc<ClusterHypergraph>,
    y: u32,
    choice: SingletonChoice,
) -> Result<HyperTPath, TPathError> {
    let t = h.tree();
    if y == 0 || y > h.n() {
        return Err(TPathError::PreconditionViolated(format!("vertex {y} not in the tree")));
    }
    let mut b = Builder { p: HyperTPath::new(Arc::clone(h), bit(y)) };
    let up = h.up(y);
    if t.is_minimal(y) {
        if choice != SingletonChoice::Plus {
            return Err(TPathError::PreconditionViolated(format!("vertex {y} has no children")));
        }
        let ends: Vec<usize> = members(h.hyperedge(y)).into_iter().map(|v| b.node(v, true)).collect();
        b.conn(Parity::Odd, ConnLabel::Hyper(y), ends);
        return Ok(b.p);
    }
    match choice {
        SingletonChoice::Plus => {
            let mut bundle = Vec::new();
            for &c in t.children(y) {
                bundle.extend(b.side_branch(y, c));
            }
            if let Some(u) = up {
                bundle.push(b.node(u, true));
            }
            b.conn(Parity::Odd, ConnLabel::Hyper(y), bundle);
        }
        SingletonChoice::Child(c0) => {
            if !t.children(y).contains(&c0) {
                return Err(TPathError::PreconditionViolated(format!("{c0} is not a child of {y}")));
            }
            let bc = b.node(c0, true);
            let mut lc = Vec::new();
            if t.children(c0).is_empty() {
                let prime = h.primed(c0).expect("leaves carry a primed vertex");
                let p = b.node(prime, false);
                b.conn(Parity::Odd, ConnLabel::edge(c0, prime), vec![bc, p]);
                lc.push(p);
            } else {
                for &w in t.children(c0) {
                    let ls = b.primed_nodes(w);
                    let mut ends = vec![bc];
                    ends.extend(&ls);
                    b.conn(Parity::Odd, ConnLabel::Hyper(w), ends);
                    lc.extend(ls);
                }
            }
            let central = b.node(y, false);
            let mut ends = vec![central];
            ends.extend(&lc);
            b.conn(Parity::Even, ConnLabel::Hyper(c0), ends);
            for &c in t.children(y) {
                if c == c0 {
                    continue;
                }
                let ls = b.side_branch(y, c);
                let mut ends = ls;
                ends.push(central);
                b.conn(Parity::Odd, ConnLabel::Hyper(c), ends);
            }
            if let Some(u) = up {
                let bu = b.node(u, true);
                b.conn(Parity::Odd, ConnLabel::edge(y, u), vec![central, bu]);
            }
        }
    }
    Ok(b.p)
}

/// All hyper T-paths for `{y}`: `T_y^+` followed by `T_y^c` for each child
/// in increasing order (just the single odd connection when `y` is minimal).
pub fn singleton_paths(t: &RootedTree, y: u32) -> Result<Vec<HyperTPath>, TPathError> {
    let h = hypergraph_of(t)?;
    singleton_paths_in(&h, y)
}

pub fn singleton_paths_in(h: &Arc<ClusterHypergraph>, y: u32) -> Result<Vec<HyperTPath>, TPathError> {
    let mut out = vec![singleton_path(h, y, SingletonChoice::Plus)?];
    for &c in h.tree().children(y) {
        out.push(singleton_path(h, y, SingletonChoice::Child(c))?);
    }
    Ok(out)
}

/// `tA ⊕ tB` along the tree edge `(u, v)` with `u ∈ A`, `v ∈ B`.
pub fn paste(ta: &HyperTPath, tb: &HyperTPath, edge: (u32, u32)) -> Result<HyperTPath, TPathError> {
    let (u, v) = edge;
    if *ta.hypergraph != *tb.hypergraph {
        return Err(TPathError::PreconditionViolated("paths live on different trees".into()));
    }
    if ta.target & tb.target != 0 {
        return Err(TPathError::PreconditionViolated("target sets overlap".into()));
    }
    if !contains(ta.target, u) || !contains(tb.target, v) || !ta.tree().graph().adjacent(u, v) {
        return Err(TPathError::PreconditionViolated(format!("({u},{v}) does not join the two targets")));
    }
    if let Some((conn, inner, outer)) = pasting_site(ta, u, v) {
        return Ok(merge(ta, tb, conn, inner, outer, u));
    }
    if let Some((conn, inner, outer)) = pasting_site(tb, v, u) {
        return Ok(merge(tb, ta, conn, inner, outer, v));
    }
    Err(TPathError::NotPasteable(u, v))
}

/// An odd `Edge(inside, outside)` connection joining an internal `inside`
/// node to the boundary `outside` node.
fn pasting_site(p: &HyperTPath, inside: u32, outside: u32) -> Option<(usize, usize, usize)> {
    p.connections.iter().find_map(|c| {
        if c.parity != Parity::Odd || c.label != ConnLabel::edge(inside, outside) || c.incident.len() != 2 {
            return None;
        }
        let (a, b) = (&p.nodes[c.incident[0]], &p.nodes[c.incident[1]]);
        let pick = |i: &TNode, o: &TNode| (!i.boundary && i.label == inside && o.boundary && o.label == outside).then_some((c.id, i.id, o.id));
        pick(a, b).or_else(|| pick(b, a))
    })
}

fn merge(p: &HyperTPath, q: &HyperTPath, conn: usize, inner: usize, outer: usize, label: u32) -> HyperTPath {
    let mut out = HyperTPath::new(Arc::clone(&p.hypergraph), p.target | q.target);
    let mut map_p = vec![usize::MAX; p.nodes.len()];
    for n in &p.nodes {
        if n.id != outer {
            map_p[n.id] = out.add_node(n.label, n.boundary);
        }
    }
    let mut map_q = vec![usize::MAX; q.nodes.len()];
    for n in &q.nodes {
        if n.boundary && n.label == label {
            map_q[n.id] = map_p[inner];
        } else {
            map_q[n.id] = out.add_node(n.label, n.boundary);
        }
    }
    for c in &p.connections {
        if c.id != conn {
            let inc: Vec<usize> = c.incident.iter().map(|&k| map_p[k]).collect();
            out.add_connection(c.parity, c.label, &inc);
        }
    }
    for c in &q.connections {
        let inc: Vec<usize> = c.incident.iter().map(|&k| map_q[k]).collect();
        out.add_connection(c.parity, c.label, &inc);
    }
    out
}

/// One hyper T-path per admissible `(O, u)` choice, in the order shared with
/// the general expansion.
pub fn enumerate(t: &RootedTree, s: VertexSet) -> Result<Vec<HyperTPath>, TPathError> {
    let h = hypergraph_of(t)?;
    enumerate_in(&h, s)
}

pub fn enumerate_in(h: &Arc<ClusterHypergraph>, s: VertexSet) -> Result<Vec<HyperTPath>, TPathError> {
    let t = h.tree();
    if s == 0 || s & !t.graph().all() != 0 || !t.graph().is_connected_set(s) {
        return Err(TPathError::NotConnected(s));
    }
    // Shallowest first; each later vertex is pasted onto the path built so
    // far along the edge to its parent.
    let mut order = members(s);
    order.sort_by_key(|&v| (t.depth(v), v));
    admissible_choices(t, s)
        .into_iter()
        .map(|(o, u)| {
            let choice = |x: u32| {
                if contains(o, x) {
                    SingletonChoice::Plus
                } else {
                    let c = u.iter().find(|&&(y, _)| y == x).map(|&(_, c)| c).expect("u covers S minus O");
                    SingletonChoice::Child(c)
                }
            };
            let mut acc = singleton_path(h, order[0], choice(order[0]))?;
            for &y in &order[1..] {
                let piece = singleton_path(h, y, choice(y))?;
                acc = paste(&piece, &acc, (y, t.parent(y).expect("non-top vertex has a parent")))?;
            }
            Ok(acc)
        })
        .collect()
}

pub fn sum_weights(paths: &[HyperTPath]) -> RationalFn {
    let total = paths.iter().fold(LaurentPoly::zero(), |acc, p| acc.add(&LaurentPoly::monomial(p.raw_weight())));
    RationalFn::from_poly(total)
}

/// Default node budget for the exhaustive search: `|S ∪ S′| + 2|S| + 2`,
/// raised to the node count forced by the even census when that is larger.
pub fn default_node_budget(t: &RootedTree, s: VertexSet) -> usize {
    let h = ClusterHypergraph::new(t);
    let b = h.boundary(s);
    let formula = (s | b).count_ones() as usize + 2 * s.count_ones() as usize + 2;
    formula.max(forced_node_count(&h, s))
}

/// Boundary nodes plus the endpoints of every forced even connection.
pub fn forced_node_count(h: &ClusterHypergraph, s: VertexSet) -> usize {
    let (evens, _) = census(h, s);
    h.boundary(s).count_ones() as usize + evens.iter().map(|&y| h.hyperedge(y).count_ones() as usize).sum::<usize>()
}

pub const DEFAULT_FRONTIER_CAP: usize = 20_000_000;

/// Every valid diagram for `S` with at most `node_budget` nodes, one per
/// isomorphism class, sorted by canonical form.
pub fn exhaustive_search(t: &RootedTree, s: VertexSet, node_budget: usize) -> Result<Vec<HyperTPath>, TPathError> {
    exhaustive_search_capped(t, s, node_budget, DEFAULT_FRONTIER_CAP)
}

pub fn exhaustive_search_capped(
    t: &RootedTree,
    s: VertexSet,
    node_budget: usize,
    cap: usize,
) -> Result<Vec<HyperTPath>, TPathError> {
    let h = hypergraph_of(t)?;
    if s == 0 || s & !t.graph().all() != 0 || !t.graph().is_connected_set(s) {
        return Err(TPathError::NotConnected(s));
    }
    // Every internal node carries exactly one even connection, and the even
    // connections are forced, so the node set is fixed up front.
    let mut base = HyperTPath::new(Arc::clone(&h), s);
    for v in members(h.boundary(s)) {
        base.add_node(v, true);
    }
    let (evens, _) = census(&h, s);
    for &y in &evens {
        let ends: Vec<usize> = members(h.hyperedge(y)).into_iter().map(|v| base.add_node(v, false)).collect();
        base.add_connection(Parity::Even, ConnLabel::Hyper(y), &ends);
    }
    if base.nodes.len() > node_budget {
        return Ok(Vec::new());
    }

    let mut labels: Vec<ConnLabel> = t.vertices().map(ConnLabel::Hyper).collect();
    for a in 1..=h.total() {
        for b in members(h.neighbors(a)) {
            if a < b {
                labels.push(ConnLabel::Edge(a, b));
            }
        }
    }
    let mut candidates: Vec<(ConnLabel, Vec<usize>)> = Vec::new();
    for label in labels {
        let ends = members(label.endpoints(&h).expect("labels come from the hypergraph"));
        let pools: Vec<Vec<usize>> =
            ends.iter().map(|&v| base.nodes.iter().filter(|n| n.label == v).map(|n| n.id).collect()).collect();
        if pools.iter().any(|p| p.is_empty()) {
            continue;
        }
        let mut pick = vec![0usize; pools.len()];
        loop {
            candidates.push((label, pick.iter().zip(&pools).map(|(&i, p)| p[i]).collect()));
            let mut k = 0;
            while k < pick.len() {
                pick[k] += 1;
                if pick[k] < pools[k].len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
            if k == pick.len() {
                break;
            }
        }
    }

    let single_odd: Vec<bool> =
        base.nodes.iter().map(|n| !n.boundary && !(n.label <= h.n() && contains(s, n.label))).collect();
    let mut search = Search {
        base,
        candidates,
        single_odd,
        odd_count: Vec::new(),
        chosen: Vec::new(),
        steps: 0,
        cap,
        found: std::collections::BTreeMap::new(),
    };
    search.odd_count = vec![0; search.base.nodes.len()];
    search.run(0)?;
    Ok(search.found.into_values().collect())
}

struct Search {
    base: HyperTPath,
    candidates: Vec<(ConnLabel, Vec<usize>)>,
    single_odd: Vec<bool>,
    odd_count: Vec<usize>,
    chosen: Vec<usize>,
    steps: usize,
    cap: usize,
    found: std::collections::BTreeMap<CanonicalForm, HyperTPath>,
}

impl Search {
    fn diagram(&self) -> HyperTPath {
        let mut p = self.base.clone();
        for &k in &self.chosen {
            let (label, inc) = &self.candidates[k];
            p.add_connection(Parity::Odd, *label, inc);
        }
        p
    }

    fn usable(&self, k: usize) -> bool {
        self.candidates[k].1.iter().all(|&n| !self.single_odd[n] || self.odd_count[n] == 0)
    }

    fn run(&mut self, i: usize) -> Result<(), TPathError> {
        self.steps += 1;
        if self.steps > self.cap {
            return Err(TPathError::BudgetExceeded(self.cap));
        }
        // Every node still lacking an odd connection needs a usable candidate.
        for n in 0..self.odd_count.len() {
            if self.odd_count[n] == 0 && !(i..self.candidates.len()).any(|k| self.candidates[k].1.contains(&n) && self.usable(k)) {
                return Ok(());
            }
        }
        if i == self.candidates.len() {
            let p = self.diagram();
            if p.validate().is_valid() {
                self.found.entry(p.canonical_form()).or_insert(p);
            }
            return Ok(());
        }
        if self.usable(i) {
            self.chosen.push(i);
            for &n in &self.candidates[i].1 {
                self.odd_count[n] += 1;
            }
            if !self.diagram().has_path_violation() {
                self.run(i + 1)?;
            }
            for &n in &self.candidates[i].1 {
                self.odd_count[n] -= 1;
            }
            self.chosen.pop();
        }
        self.run(i + 1)
    }
}

/// Checks that on a path graph every enumerated hyper T-path is a single
/// alternating chain of two-node connections, odd at both ends, whose even
/// labels follow rules 7 and 8.
pub fn path_graph_specialize(t: &RootedTree, s: VertexSet) -> Result<bool, TPathError> {
    let g = t.graph();
    if !g.is_tree() || t.vertices().any(|v| g.degree(v) > 2) {
        return Err(TPathError::NotAPath);
    }
    let h = hypergraph_of(t)?;
    let top = t.top_of(s);
    for p in enumerate_in(&h, s)? {
        if !p.validate().is_valid() || !is_linear_chain(&p, &h, h.up(top)) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn is_linear_chain(p: &HyperTPath, h: &ClusterHypergraph, above: Option<u32>) -> bool {
    if p.connections.iter().any(|c| c.incident.len() != 2) {
        return false;
    }
    let incidence = p.node_connections();
    let ends: Vec<usize> = p.nodes.iter().filter(|n| n.boundary).map(|n| n.id).collect();
    if ends.len() != 2 || p.nodes.iter().any(|n| incidence[n.id].len() != if n.boundary { 1 } else { 2 }) {
        return false;
    }
    let mut parities = Vec::new();
    let mut evens = Vec::new();
    let (mut at, mut via) = (ends[0], usize::MAX);
    while let Some(&c) = incidence[at].iter().find(|&&c| c != via) {
        let conn = &p.connections[c];
        parities.push(conn.parity);
        if conn.parity == Parity::Even {
            match conn.label {
                ConnLabel::Hyper(y) => evens.push(y),
                ConnLabel::Edge(..) => return false,
            }
        }
        at = if conn.incident[0] == at { conn.incident[1] } else { conn.incident[0] };
        via = c;
        if at == ends[1] {
            break;
        }
    }
    if at != ends[1] || parities.len() != p.connections.len() {
        return false;
    }
    let d = evens.len();
    let alternating = parities
        .iter()
        .enumerate()
        .all(|(k, &par)| par == if k % 2 == 0 { Parity::Odd } else { Parity::Even });
    let req = PathRequirement::new(h, p.nodes[ends[0]].label, p.nodes[ends[1]].label, above);
    alternating && parities.len() == 2 * d + 1 && req.sequence.is_some_and(|(_, seq)| seq == evens)
}
