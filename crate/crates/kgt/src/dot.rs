//! Deterministic DOT export. Vertices and edges are emitted in index order
//! so identical inputs render byte-identical output; colors become edge
//! attributes and tower levels become clusters.

use std::fmt::Write as _;

use crate::kgraph::KGraph;
use crate::tower::TowerGraph;

const PALETTE: [&str; 6] = ["black", "blue", "red", "forestgreen", "purple", "orange"];

fn color_attr(color: usize) -> &'static str {
    PALETTE[(color - 1) % PALETTE.len()]
}

pub fn kgraph_dot(g: &KGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph kgraph {{");
    let _ = writeln!(out, "  rankdir=LR;");
    for v in 0..g.num_vertices() as u32 {
        let _ = writeln!(out, "  \"{}\";", g.vertex_id(v));
    }
    for e in 0..g.num_edges() as u32 {
        let ed = g.edge(e);
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\", color={}];",
            g.vertex_id(ed.s()),
            g.vertex_id(ed.r()),
            ed.id,
            color_attr(ed.color),
        );
    }
    let _ = writeln!(out, "}}");
    out
}

pub fn tower_dot(t: &TowerGraph) -> String {
    let g = &t.graph;
    let mut out = String::new();
    let _ = writeln!(out, "digraph tower {{");
    let _ = writeln!(out, "  rankdir=LR;");
    for level in 1..=t.levels() {
        let _ = writeln!(out, "  subgraph cluster_level_{level} {{");
        let _ = writeln!(out, "    label=\"level {level}\";");
        for local in 0..t.level_vertex_count(level) as u32 {
            let v = t.vertex(level, local);
            let _ = writeln!(out, "    \"{}\";", g.vertex_id(v));
        }
        let _ = writeln!(out, "  }}");
    }
    for e in 0..g.num_edges() as u32 {
        let ed = g.edge(e);
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\", color={}];",
            g.vertex_id(ed.s()),
            g.vertex_id(ed.r()),
            ed.id,
            color_attr(ed.color),
        );
    }
    let _ = writeln!(out, "}}");
    out
}
