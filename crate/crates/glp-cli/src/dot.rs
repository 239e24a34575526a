//! Graphviz output for hyper T-paths and for the cluster hypergraph.

use glp::graphcore::{members, ClusterHypergraph};
use glp::tpaths::{HyperTPath, Parity};

/// One `graph` block per path. Nodes are `n<id>`; boundary nodes are double
/// circles. Two-node connections are drawn as a single edge, larger ones
/// through a small square junction `c<id>`.
pub fn tpaths_dot(paths: &[HyperTPath]) -> String {
    let mut out = String::new();
    for (k, p) in paths.iter().enumerate() {
        let h = p.hypergraph();
        out.push_str(&format!("graph path{} {{\n", k + 1));
        out.push_str(&format!("  label=\"weight {}\";\n", p.raw_weight()));
        for n in p.nodes() {
            let shape = if n.boundary { "doublecircle" } else { "circle" };
            out.push_str(&format!("  n{} [shape={shape}, label=\"{}\"];\n", n.id, h.vertex_name(n.label)));
        }
        for c in p.connections() {
            let style = match c.parity {
                Parity::Odd => "solid",
                Parity::Even => "dashed",
            };
            let label = c.label.name(h);
            if c.incident.len() == 2 {
                out.push_str(&format!(
                    "  n{} -- n{} [style={style}, label=\"{label}\"];\n",
                    c.incident[0], c.incident[1]
                ));
            } else {
                out.push_str(&format!(
                    "  c{} [shape=square, width=0.1, height=0.1, fixedsize=true, label=\"\", xlabel=\"{label}\"];\n",
                    c.id
                ));
                for &k in &c.incident {
                    out.push_str(&format!("  c{} -- n{k} [style={style}];\n", c.id));
                }
            }
        }
        out.push_str("}\n");
    }
    out
}

/// The extended tree with one junction per cluster hyperedge `I_x`.
pub fn hypergraph_dot(h: &ClusterHypergraph) -> String {
    let mut out = String::from("graph hypergraph {\n");
    for v in 1..=h.total() {
        let shape = if h.is_primed(v) { "circle, style=dotted" } else { "circle" };
        out.push_str(&format!("  n{v} [shape={shape}, label=\"{}\"];\n", h.vertex_name(v)));
    }
    for u in 1..=h.total() {
        for v in members(h.neighbors(u)) {
            if u < v {
                out.push_str(&format!("  n{u} -- n{v};\n"));
            }
        }
    }
    for x in 1..=h.n() {
        out.push_str(&format!(
            "  h{x} [shape=square, width=0.1, height=0.1, fixedsize=true, label=\"\", xlabel=\"I{x}\"];\n"
        ));
        for v in members(h.hyperedge(x)) {
            out.push_str(&format!("  h{x} -- n{v} [style=dashed];\n"));
        }
    }
    out.push_str("}\n");
    out
}
