//! Skew products: the graph Lambda x_c G with range twisted by a cocycle.
//!
//! Vertices and edges are cartesian pairs; the range of `(f, g)` is
//! `(r(f), c(f)g)` and the source is `(s(f), g)`. Composition follows
//! `(mu, c(nu)g)(nu, g) = (mu nu, g)`.

use crate::chain::Cocycle;
use crate::error::{KgtError, Result};
use crate::group::Gel;
use crate::kgraph::{KGraph, Path, RawEdge, RawGraph};

/// A skew product together with the index arithmetic tying it back to the
/// base graph: vertex `(v, g)` sits at `v * |G| + g`, and the edges are laid
/// out the same way.
#[derive(Debug, Clone)]
pub struct SkewGraph {
    pub graph: KGraph,
    base_vertices: usize,
    base_edges: usize,
    group_order: usize,
}

impl SkewGraph {
    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn vertex(&self, v: u32, g: Gel) -> u32 {
        debug_assert!((v as usize) < self.base_vertices);
        v * self.group_order as u32 + g as u32
    }

    pub fn edge(&self, f: u32, g: Gel) -> u32 {
        debug_assert!((f as usize) < self.base_edges);
        f * self.group_order as u32 + g as u32
    }

    /// Split a skew vertex into (base vertex, group element).
    pub fn vertex_parts(&self, sv: u32) -> (u32, Gel) {
        (
            sv / self.group_order as u32,
            (sv % self.group_order as u32) as Gel,
        )
    }

    pub fn edge_parts(&self, se: u32) -> (u32, Gel) {
        (
            se / self.group_order as u32,
            (se % self.group_order as u32) as Gel,
        )
    }

    /// The path `(lambda, g)` with source group element `g`.
    pub fn lift_path(&self, base: &KGraph, c: &Cocycle, lambda: &Path, g: Gel) -> Path {
        let word = lambda.edge_indices();
        // label of the suffix strictly after position i, accumulated right to left
        let mut suffix = vec![c.group.identity(); word.len() + 1];
        for i in (0..word.len()).rev() {
            suffix[i] = c.group.mul(c.of_edge(word[i]), suffix[i + 1]);
        }
        let ids: Vec<String> = word
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let twist = c.group.mul(suffix[i + 1], g);
                self.graph.edge(self.edge(e, twist)).id.clone()
            })
            .collect();
        if ids.is_empty() {
            return self
                .graph
                .vertex_path(self.vertex(lambda.range_vertex(), g));
        }
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        let _ = base;
        self.graph
            .path_from_edges(&refs)
            .expect("lift of a composable word is composable")
    }

    /// Project a skew path to (base path, source group element).
    pub fn project_path(&self, base: &KGraph, p: &Path) -> (Path, Gel) {
        let (_, g) = self.vertex_parts(p.source_vertex());
        let ids: Vec<String> = p
            .edge_indices()
            .iter()
            .map(|&se| base.edge(self.edge_parts(se).0).id.clone())
            .collect();
        if ids.is_empty() {
            let (v, _) = self.vertex_parts(p.range_vertex());
            return (base.vertex_path(v), g);
        }
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        (
            base.path_from_edges(&refs)
                .expect("projection is composable"),
            g,
        )
    }
}

/// Build the skew product of a validated graph by a cocycle into a finite
/// group. The result is re-validated; a failure there indicates a bug, not
/// bad input.
pub fn skew_product(base: &KGraph, c: &Cocycle) -> Result<SkewGraph> {
    let order = c.group.order();
    let mut raw = RawGraph {
        k: base.rank(),
        ..Default::default()
    };
    for v in 0..base.num_vertices() as u32 {
        for g in c.group.elements() {
            raw.vertices
                .push(format!("{}|{}", base.vertex_id(v), c.group.name(g)));
        }
    }
    let vid = |v: u32, g: Gel| format!("{}|{}", base.vertex_id(v), c.group.name(g));
    let eid = |f: u32, g: Gel| format!("{}|{}", base.edge(f).id, c.group.name(g));
    for f in 0..base.num_edges() as u32 {
        let e = base.edge(f);
        for g in c.group.elements() {
            raw.edges.push(RawEdge {
                id: eid(f, g),
                color: e.color,
                src: vid(e.s(), g),
                dst: vid(e.r(), c.group.mul(c.of_edge(f), g)),
            });
        }
    }
    for (&(f, gg), &(gp, fp)) in base.squares() {
        for h in c.group.elements() {
            raw.squares.push([
                eid(f, c.group.mul(c.of_edge(gg), h)),
                eid(gg, h),
                eid(gp, c.group.mul(c.of_edge(fp), h)),
                eid(fp, h),
            ]);
        }
    }
    let graph = KGraph::validate(&raw)
        .map_err(|e| KgtError::Internal(format!("skew product failed validation: {e}")))?;
    Ok(SkewGraph {
        graph,
        base_vertices: base.num_vertices(),
        base_edges: base.num_edges(),
        group_order: order,
    })
}
