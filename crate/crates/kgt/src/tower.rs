//! The tower graph of a covering sequence: a rank-(k+1) graph stacking the
//! levels, with one extra-color edge from each vertex down to its image.
//!
//! Levels are 1-based. The truncation at N levels legitimately has no
//! color-(k+1) edge ranged at the top level, so the tower is validated
//! without a no-sources requirement.

use crate::chain::CocycleChain;
use crate::cover::{quotient_sequence, CoveringSequence};
use crate::degree::Degree;
use crate::error::{KgtError, Result};
use crate::kgraph::{GraphConfig, KGraph, Path, RawEdge, RawGraph};
use crate::skew::SkewGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TowerEdge {
    /// A copy of a level edge: (level, local edge index).
    Level(usize, u32),
    /// A connecting edge: (source level, local source vertex index).
    Connector(usize, u32),
}

#[derive(Debug, Clone)]
pub struct TowerGraph {
    pub graph: KGraph,
    base_rank: usize,
    levels: usize,
    vertex_level: Vec<u16>,
    vertex_local: Vec<u32>,
    level_vertex_tower: Vec<Vec<u32>>,
    edge_parts: Vec<TowerEdge>,
    level_edge_tower: Vec<Vec<u32>>,
    connector_of: Vec<Option<u32>>,
}

fn level_vertex_id(g: &KGraph, level: usize, v: u32) -> String {
    format!("L{level}:{}", g.vertex_id(v))
}

fn level_edge_id(g: &KGraph, level: usize, e: u32) -> String {
    format!("L{level}:{}", g.edge(e).id)
}

fn connector_id(g: &KGraph, level: usize, v: u32) -> String {
    format!("e(L{level}:{})", g.vertex_id(v))
}

/// Stack a covering sequence into its rank-(k+1) tower graph. Every level
/// graph must have no sources.
pub fn build_tower(seq: &CoveringSequence) -> Result<TowerGraph> {
    let levels = seq.levels();
    let k = seq.graph(1).rank();
    for n in 1..=levels {
        if seq.graph(n).rank() != k {
            return Err(KgtError::RankMismatch(seq.graph(n).rank(), k));
        }
        seq.graph(n).require_no_sources()?;
    }

    let mut raw = RawGraph {
        k: k + 1,
        ..Default::default()
    };
    for n in 1..=levels {
        let g = seq.graph(n);
        for v in 0..g.num_vertices() as u32 {
            raw.vertices.push(level_vertex_id(g, n, v));
        }
    }
    for n in 1..=levels {
        let g = seq.graph(n);
        for e in 0..g.num_edges() as u32 {
            let ed = g.edge(e);
            raw.edges.push(RawEdge {
                id: level_edge_id(g, n, e),
                color: ed.color,
                src: level_vertex_id(g, n, ed.s()),
                dst: level_vertex_id(g, n, ed.r()),
            });
        }
    }
    for n in 2..=levels {
        let g = seq.graph(n);
        let below = seq.graph(n - 1);
        for v in 0..g.num_vertices() as u32 {
            raw.edges.push(RawEdge {
                id: connector_id(g, n, v),
                color: k + 1,
                src: level_vertex_id(g, n, v),
                dst: level_vertex_id(below, n - 1, seq.map(n - 1).vertex(v)),
            });
        }
    }
    // level-internal squares
    for n in 1..=levels {
        let g = seq.graph(n);
        for (&(f, gg), &(gp, fp)) in g.squares() {
            raw.squares.push([
                level_edge_id(g, n, f),
                level_edge_id(g, n, gg),
                level_edge_id(g, n, gp),
                level_edge_id(g, n, fp),
            ]);
        }
    }
    // mixed squares: p(lambda) e(s(lambda)) = e(r(lambda)) lambda for each
    // edge lambda above level 1
    for n in 1..levels {
        let above = seq.graph(n + 1);
        let below = seq.graph(n);
        for le in 0..above.num_edges() as u32 {
            let ed = above.edge(le);
            raw.squares.push([
                level_edge_id(below, n, seq.map(n).edge(le)),
                connector_id(above, n + 1, ed.s()),
                connector_id(above, n + 1, ed.r()),
                level_edge_id(above, n + 1, le),
            ]);
        }
    }

    let config = GraphConfig {
        max_rank: (k + 1).max(3),
        exhaustive_bound: 2,
    };
    let graph = KGraph::validate_with(&raw, &config)?;

    let mut vertex_level = Vec::with_capacity(graph.num_vertices());
    let mut vertex_local = Vec::with_capacity(graph.num_vertices());
    let mut level_vertex_tower = vec![Vec::new(); levels];
    let mut next = 0u32;
    for n in 1..=levels {
        for v in 0..seq.graph(n).num_vertices() as u32 {
            vertex_level.push(n as u16);
            vertex_local.push(v);
            level_vertex_tower[n - 1].push(next);
            next += 1;
        }
    }
    let mut edge_parts = Vec::with_capacity(graph.num_edges());
    let mut level_edge_tower = vec![Vec::new(); levels];
    let mut next = 0u32;
    for n in 1..=levels {
        for e in 0..seq.graph(n).num_edges() as u32 {
            edge_parts.push(TowerEdge::Level(n, e));
            level_edge_tower[n - 1].push(next);
            next += 1;
        }
    }
    let mut connector_of = vec![None; graph.num_vertices()];
    for n in 2..=levels {
        for v in 0..seq.graph(n).num_vertices() as u32 {
            edge_parts.push(TowerEdge::Connector(n, v));
            connector_of[level_vertex_tower[n - 1][v as usize] as usize] = Some(next);
            next += 1;
        }
    }

    Ok(TowerGraph {
        graph,
        base_rank: k,
        levels,
        vertex_level,
        vertex_local,
        level_vertex_tower,
        edge_parts,
        level_edge_tower,
        connector_of,
    })
}

impl TowerGraph {
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn base_rank(&self) -> usize {
        self.base_rank
    }

    /// Tower vertex index of a level-local vertex.
    pub fn vertex(&self, level: usize, local: u32) -> u32 {
        self.level_vertex_tower[level - 1][local as usize]
    }

    /// (level, local index) of a tower vertex.
    pub fn vertex_parts(&self, tv: u32) -> (usize, u32) {
        (
            self.vertex_level[tv as usize] as usize,
            self.vertex_local[tv as usize],
        )
    }

    pub fn level_of_vertex(&self, tv: u32) -> usize {
        self.vertex_level[tv as usize] as usize
    }

    pub fn level_edge(&self, level: usize, local: u32) -> u32 {
        self.level_edge_tower[level - 1][local as usize]
    }

    pub fn edge_parts(&self, te: u32) -> TowerEdge {
        self.edge_parts[te as usize]
    }

    /// The connecting edge sourced at a vertex of level >= 2.
    pub fn connector(&self, tv: u32) -> Option<u32> {
        self.connector_of[tv as usize]
    }

    /// Number of vertices at a level.
    pub fn level_vertex_count(&self, level: usize) -> usize {
        self.level_vertex_tower[level - 1].len()
    }

    /// Embed a path of the level graph into the tower.
    pub fn embed_path(&self, seq: &CoveringSequence, level: usize, p: &Path) -> Path {
        if p.is_vertex() {
            return self.graph.vertex_path(self.vertex(level, p.range_vertex()));
        }
        let g = seq.graph(level);
        let ids: Vec<String> = p
            .edge_indices()
            .iter()
            .map(|&e| level_edge_id(g, level, e))
            .collect();
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        self.graph
            .path_from_edges(&refs)
            .expect("level path embeds")
    }

    /// The unique connecting path of degree (m - l) e_{k+1} sourced at the
    /// given level-m vertex, with range its projection at level l.
    pub fn connector_path(&self, m: usize, local: u32, l: usize) -> Result<Path> {
        if !(1 <= l && l <= m && m <= self.levels) {
            return Err(KgtError::LevelOutOfRange(l.max(m), self.levels));
        }
        let mut tv = self.vertex(m, local);
        let mut word_rev = Vec::with_capacity(m - l);
        for _ in l..m {
            let e = self.connector(tv).ok_or_else(|| {
                KgtError::Internal("vertex above level 1 lacks a connector".into())
            })?;
            word_rev.push(e);
            tv = self.graph.edge(e).r();
        }
        if word_rev.is_empty() {
            return Ok(self.graph.vertex_path(tv));
        }
        let ids: Vec<String> = word_rev
            .iter()
            .rev()
            .map(|&e| self.graph.edge(e).id.clone())
            .collect();
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        Ok(self
            .graph
            .path_from_edges(&refs)
            .expect("connector chain composes"))
    }

    /// Degree (0, .., 0, j) in the tower's rank.
    pub fn vertical_degree(&self, j: u32) -> Degree {
        Degree::unit(self.base_rank + 1, self.base_rank + 1).scale(j)
    }
}

/// A quotient tower: the skew products of a common base by every level of a
/// cocycle chain, their quotient coverings, and the stacked tower graph.
#[derive(Debug, Clone)]
pub struct QuotientTower {
    pub cc: CocycleChain,
    pub skews: Vec<SkewGraph>,
    pub seq: CoveringSequence,
    pub tower: TowerGraph,
}

impl QuotientTower {
    pub fn build(cc: &CocycleChain, levels: usize) -> Result<QuotientTower> {
        let (skews, seq) = quotient_sequence(cc, levels)?;
        let tower = build_tower(&seq)?;
        Ok(QuotientTower {
            cc: cc.clone(),
            skews,
            seq,
            tower,
        })
    }

    pub fn levels(&self) -> usize {
        self.tower.levels()
    }

    /// Tower vertex for (base vertex, group element) at a level.
    pub fn skew_vertex(&self, level: usize, v: u32, g: crate::group::Gel) -> u32 {
        self.tower.vertex(level, self.skews[level - 1].vertex(v, g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::bd_chain;

    #[test]
    fn odometer_tower_shape() {
        let cc = bd_chain(3);
        let qt = QuotientTower::build(&cc, 3).unwrap();
        let t = &qt.tower;
        assert_eq!(t.levels(), 3);
        assert_eq!(t.graph.rank(), 2);
        assert_eq!(t.level_vertex_count(1), 1);
        assert_eq!(t.level_vertex_count(2), 2);
        assert_eq!(t.level_vertex_count(3), 4);
        let connectors = (0..t.graph.num_edges() as u32)
            .filter(|&e| matches!(t.edge_parts(e), TowerEdge::Connector(_, _)))
            .count();
        assert_eq!(connectors, 6);
    }

    #[test]
    fn single_level_tower_has_no_connectors() {
        let cc = bd_chain(1);
        let qt = QuotientTower::build(&cc, 1).unwrap();
        assert_eq!(qt.tower.graph.rank(), 2);
        assert_eq!(qt.tower.graph.num_edges(), 1);
        assert!(qt.tower.connector(0).is_none());
    }

    #[test]
    fn mixed_square_rule() {
        // e(r(lambda)) lambda = p(lambda) e(s(lambda)) as the unique square
        let cc = bd_chain(3);
        let qt = QuotientTower::build(&cc, 3).unwrap();
        let t = &qt.tower;
        for n in 1..3usize {
            let above = qt.seq.graph(n + 1);
            for le in 0..above.num_edges() as u32 {
                let ed = above.edge(le);
                let p_lambda = t.level_edge(n, qt.seq.map(n).edge(le));
                let e_s = t.connector(t.vertex(n + 1, ed.s())).unwrap();
                let e_r = t.connector(t.vertex(n + 1, ed.r())).unwrap();
                let lambda = t.level_edge(n + 1, le);
                assert_eq!(t.graph.square(p_lambda, e_s), Some((e_r, lambda)));
            }
        }
    }

    #[test]
    fn connector_paths_are_unique() {
        let cc = bd_chain(4);
        let qt = QuotientTower::build(&cc, 4).unwrap();
        let t = &qt.tower;
        for m in 1..=4usize {
            for local in 0..t.level_vertex_count(m) as u32 {
                for l in 1..=m {
                    let alpha = t.connector_path(m, local, l).unwrap();
                    assert_eq!(alpha.degree(), &t.vertical_degree((m - l) as u32));
                    assert_eq!(alpha.source_vertex(), t.vertex(m, local));
                    assert_eq!(t.level_of_vertex(alpha.range_vertex()), l);
                    // uniqueness among all paths of that vertical degree
                    let count = t
                        .graph
                        .paths_of_degree(alpha.degree(), None)
                        .into_iter()
                        .filter(|p| p.source_vertex() == t.vertex(m, local))
                        .count();
                    assert_eq!(count, 1);
                }
            }
        }
    }

    #[test]
    fn identity_connector_is_the_vertex() {
        let cc = bd_chain(2);
        let qt = QuotientTower::build(&cc, 2).unwrap();
        let t = &qt.tower;
        let v = t.vertex(2, 1);
        let alpha = t.connector_path(2, 1, 2).unwrap();
        assert_eq!(alpha, t.graph.vertex_path(v));
    }

    #[test]
    fn rank_two_base_stacks_into_a_rank_three_tower() {
        // exercises the cube condition on the mixed squares
        let cc = crate::presets::s3_square_chain();
        let qt = QuotientTower::build(&cc, 3).unwrap();
        assert_eq!(qt.tower.graph.rank(), 3);
        assert_eq!(qt.tower.level_vertex_count(1), 1);
        assert_eq!(qt.tower.level_vertex_count(2), 2);
        assert_eq!(qt.tower.level_vertex_count(3), 6);
    }

    #[test]
    fn odometer_alpha_example() {
        // from (v, 2) at level 3 down to the floor: two connector steps
        let cc = bd_chain(3);
        let qt = QuotientTower::build(&cc, 3).unwrap();
        let local = qt.skews[2].vertex(0, 2);
        let alpha = qt.tower.connector_path(3, local, 1).unwrap();
        assert_eq!(alpha.degree(), &Degree::new(vec![0, 2]));
        assert_eq!(alpha.range_vertex(), qt.tower.vertex(1, 0));
    }
}
