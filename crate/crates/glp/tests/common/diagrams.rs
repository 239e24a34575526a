#![allow(dead_code)]

//! Hand-built hyper T-path diagrams on small trees.

use std::sync::Arc;

use glp::graphcore::{set_of, ClusterHypergraph};
use glp::tpaths::{hypergraph_of, ConnLabel, HyperTPath, Parity};
use glp::verify::{forked_tree, path_tree};

use ConnLabel::{Edge, Hyper};
use Parity::{Even, Odd};

// Forked tree rooted at 3: primed vertices 1' = 6, 4' = 7, 5' = 8.
pub const P1: u32 = 6;
pub const P4: u32 = 7;
pub const P5: u32 = 8;

pub fn forked() -> Arc<ClusterHypergraph> {
    hypergraph_of(&forked_tree()).unwrap()
}

pub struct Draft {
    pub p: HyperTPath,
}

impl Draft {
    pub fn new(h: &Arc<ClusterHypergraph>, s: &[u32]) -> Self {
        Draft { p: HyperTPath::new(Arc::clone(h), set_of(s)) }
    }
    pub fn b(&mut self, label: u32) -> usize {
        self.p.add_node(label, true)
    }
    pub fn i(&mut self, label: u32) -> usize {
        self.p.add_node(label, false)
    }
    pub fn c(&mut self, parity: Parity, label: ConnLabel, nodes: &[usize]) {
        self.p.add_connection(parity, label, nodes);
    }
}

/// The hand-drawn first diagram: `T_2^1` pasted with `T_3^4`.
pub fn first_diagram(h: &Arc<ClusterHypergraph>) -> HyperTPath {
    let mut d = Draft::new(h, &[2, 3]);
    let (b1, p1a, c2) = (d.b(1), d.i(P1), d.i(2));
    let (b5, x2, p5a) = (d.b(5), d.i(2), d.i(P5));
    let (b4, p4, c3, x3, p1b, p5b) = (d.b(4), d.i(P4), d.i(3), d.i(3), d.i(P1), d.i(P5));
    d.c(Odd, Edge(1, P1), &[b1, p1a]);
    d.c(Even, Hyper(1), &[p1a, c2]);
    d.c(Odd, Edge(2, 5), &[b5, x2]);
    d.c(Even, Hyper(5), &[x2, p5a]);
    d.c(Odd, Hyper(5), &[p5a, c2]);
    d.c(Odd, Edge(2, 3), &[c2, x3]);
    d.c(Even, Hyper(2), &[x3, p1b, p5b]);
    d.c(Odd, Hyper(2), &[p1b, p5b, c3]);
    d.c(Odd, Edge(4, P4), &[b4, p4]);
    d.c(Even, Hyper(4), &[p4, c3]);
    d.p
}

/// `T_2^5` pasted with `T_3^4`.
pub fn second_diagram(h: &Arc<ClusterHypergraph>) -> HyperTPath {
    let mut d = Draft::new(h, &[2, 3]);
    let (b5, p5, c2) = (d.b(5), d.i(P5), d.i(2));
    let (b1, x2, p1a) = (d.b(1), d.i(2), d.i(P1));
    let (b4, p4, c3, x3, p1b, p5b) = (d.b(4), d.i(P4), d.i(3), d.i(3), d.i(P1), d.i(P5));
    d.c(Odd, Edge(5, P5), &[b5, p5]);
    d.c(Even, Hyper(5), &[p5, c2]);
    d.c(Odd, Edge(1, 2), &[b1, x2]);
    d.c(Even, Hyper(1), &[x2, p1a]);
    d.c(Odd, Hyper(1), &[p1a, c2]);
    d.c(Odd, Edge(2, 3), &[c2, x3]);
    d.c(Even, Hyper(2), &[x3, p1b, p5b]);
    d.c(Odd, Hyper(2), &[p1b, p5b, c3]);
    d.c(Odd, Edge(4, P4), &[b4, p4]);
    d.c(Even, Hyper(4), &[p4, c3]);
    d.p
}

/// `T_2^+` pasted with `T_3^4`.
pub fn third_diagram(h: &Arc<ClusterHypergraph>) -> HyperTPath {
    let mut d = Draft::new(h, &[2, 3]);
    let (b1, x2a, p1a) = (d.b(1), d.i(2), d.i(P1));
    let (b5, x2b, p5a) = (d.b(5), d.i(2), d.i(P5));
    let (b4, p4, c3, x3, p1b, p5b) = (d.b(4), d.i(P4), d.i(3), d.i(3), d.i(P1), d.i(P5));
    d.c(Odd, Edge(1, 2), &[b1, x2a]);
    d.c(Even, Hyper(1), &[x2a, p1a]);
    d.c(Odd, Edge(2, 5), &[b5, x2b]);
    d.c(Even, Hyper(5), &[x2b, p5a]);
    d.c(Odd, Hyper(2), &[p1a, p5a, x3]);
    d.c(Even, Hyper(2), &[x3, p1b, p5b]);
    d.c(Odd, Hyper(2), &[p1b, p5b, c3]);
    d.c(Odd, Edge(4, P4), &[b4, p4]);
    d.c(Even, Hyper(4), &[p4, c3]);
    d.p
}

/// `T_2^1` pasted with `T_3^+`.
pub fn fourth_diagram(h: &Arc<ClusterHypergraph>) -> HyperTPath {
    let mut d = Draft::new(h, &[2, 3]);
    let (b1, p1a, c2) = (d.b(1), d.i(P1), d.i(2));
    let (b5, x2, p5a) = (d.b(5), d.i(2), d.i(P5));
    let (x3a, p1b, p5b, b4, x3b, p4) = (d.i(3), d.i(P1), d.i(P5), d.b(4), d.i(3), d.i(P4));
    d.c(Odd, Edge(1, P1), &[b1, p1a]);
    d.c(Even, Hyper(1), &[p1a, c2]);
    d.c(Odd, Edge(2, 5), &[b5, x2]);
    d.c(Even, Hyper(5), &[x2, p5a]);
    d.c(Odd, Hyper(5), &[p5a, c2]);
    d.c(Odd, Edge(2, 3), &[c2, x3a]);
    d.c(Even, Hyper(2), &[x3a, p1b, p5b]);
    d.c(Odd, Edge(3, 4), &[b4, x3b]);
    d.c(Even, Hyper(4), &[x3b, p4]);
    d.c(Odd, Hyper(3), &[p1b, p5b, p4]);
    d.p
}

/// Like the first diagram, but the odd edge to 3 leaves the second 2-node,
/// so the path from 1 to 4 steps through the even `I_5`.
pub fn rule7_near_miss(h: &Arc<ClusterHypergraph>) -> HyperTPath {
    let mut d = Draft::new(h, &[2, 3]);
    let (b1, p1a, c2) = (d.b(1), d.i(P1), d.i(2));
    let (b5, x2, p5a) = (d.b(5), d.i(2), d.i(P5));
    let (b4, p4, c3, x3, p1b, p5b) = (d.b(4), d.i(P4), d.i(3), d.i(3), d.i(P1), d.i(P5));
    d.c(Odd, Edge(1, P1), &[b1, p1a]);
    d.c(Even, Hyper(1), &[p1a, c2]);
    d.c(Odd, Edge(2, 5), &[b5, x2]);
    d.c(Even, Hyper(5), &[x2, p5a]);
    d.c(Odd, Hyper(5), &[p5a, c2]);
    d.c(Odd, Edge(2, 3), &[x2, x3]);
    d.c(Even, Hyper(2), &[x3, p1b, p5b]);
    d.c(Odd, Hyper(2), &[p1b, p5b, c3]);
    d.c(Odd, Edge(4, P4), &[b4, p4]);
    d.c(Even, Hyper(4), &[p4, c3]);
    d.p
}

// Path on [4] rooted at 1: primed vertices 1' = 5 (above the root), 4' = 6.
pub const Q4: u32 = 6;

/// The rule 8 example with its node labels kept and connections that satisfy
/// every other rule: from 4 the evens come as `I_3`, `I_4`.
pub fn rule8_clean() -> HyperTPath {
    let h = hypergraph_of(&path_tree(4, 1)).unwrap();
    let mut d = Draft::new(&h, &[2, 3]);
    let (b4, pa, y2, x3, pb, b1) = (d.b(4), d.i(Q4), d.i(2), d.i(3), d.i(Q4), d.b(1));
    d.c(Odd, Edge(4, Q4), &[b4, pa]);
    d.c(Even, Hyper(3), &[pa, y2]);
    d.c(Odd, Edge(2, 3), &[y2, x3]);
    d.c(Even, Hyper(4), &[x3, pb]);
    d.c(Odd, Hyper(2), &[pb, b1]);
    d.p
}

/// The rule 8 example read off the drawing as printed.
pub fn rule8_literal() -> HyperTPath {
    let h = hypergraph_of(&path_tree(4, 1)).unwrap();
    let mut d = Draft::new(&h, &[2, 3]);
    let (b4, x3, pa, y2, pb, b1) = (d.b(4), d.i(3), d.i(Q4), d.i(2), d.i(Q4), d.b(1));
    d.c(Odd, Edge(3, 4), &[b4, x3]);
    d.c(Odd, Hyper(4), &[b4, pa]);
    d.c(Even, Hyper(3), &[x3, pa, y2]);
    d.c(Odd, Hyper(3), &[y2, pb]);
    d.c(Even, Hyper(2), &[pb, b1]);
    d.p
}

