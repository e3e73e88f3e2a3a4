//! Brute-force reference implementations used to cross-validate the main
//! algorithms. These deliberately share as little machinery as possible with
//! the code they check: reachability is recomputed locally and decisions are
//! made by exhaustive enumeration over eventually periodic paths.

use std::collections::BTreeSet;

use crate::degree::Degree;
use crate::error::Result;
use crate::infpath::InfinitePathSpec;
use crate::iso::{verify_isomorphism, Isomorphism};
use crate::kgraph::KGraph;

/// Vertices w with a path from w to v (walking edges from range to source),
/// recomputed here independently of the analysis module.
fn ancestors(g: &KGraph, v: u32) -> BTreeSet<u32> {
    let mut seen = BTreeSet::from([v]);
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        for c in 1..=g.rank() {
            for &e in g.edges_ranged_at(u, c) {
                let w = g.edge(e).s();
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
    }
    seen
}

#[derive(Debug, Clone)]
pub struct OracleCofinality {
    pub cofinal: bool,
    /// A vertex v and a path avoiding the set reaching v, when found.
    pub witness: Option<(u32, InfinitePathSpec)>,
    pub paths_tried: usize,
}

/// Decide cofinality by enumerating every eventually periodic path with
/// `d(head) + d(cycle) <= depth * (1, ..., 1)` and testing whether each one
/// meets the ancestor set of every vertex. Exact refutations; confirmations
/// are exhaustive over the enumerated class only.
pub fn cofinal_oracle(g: &KGraph, depth: u32) -> Result<OracleCofinality> {
    let mut specs: Vec<InfinitePathSpec> = Vec::new();
    let bound = Degree::diagonal(g.rank(), depth);
    for dh in Degree::grid(&bound) {
        for head in g.paths_of_degree(&dh, None) {
            let rest = bound.sub(&dh).expect("grid stays below the bound");
            for dc in Degree::grid(&rest) {
                if dc.coords().contains(&0) {
                    continue;
                }
                for cycle in g.paths_of_degree(&dc, Some(head.source_vertex())) {
                    if cycle.source_vertex() != head.source_vertex() {
                        continue;
                    }
                    specs.push(InfinitePathSpec::new(g, head.clone(), cycle)?);
                }
            }
        }
    }
    let mut visited: Vec<BTreeSet<u32>> = Vec::with_capacity(specs.len());
    for spec in &specs {
        let horizon = spec.head().degree().add(spec.cycle().degree());
        visited.push(
            spec.vertices_up_to(g, &horizon)?
                .into_iter()
                .map(|(_, v)| v)
                .collect(),
        );
    }
    let tried = specs.len();
    for v in 0..g.num_vertices() as u32 {
        let anc = ancestors(g, v);
        for (spec, verts) in specs.iter().zip(&visited) {
            if verts.is_disjoint(&anc) {
                return Ok(OracleCofinality {
                    cofinal: false,
                    witness: Some((v, spec.clone())),
                    paths_tried: tried,
                });
            }
        }
    }
    Ok(OracleCofinality {
        cofinal: true,
        witness: None,
        paths_tried: tried,
    })
}

/// Exhaustive isomorphism search over all vertex bijections and all edge
/// matchings; intended for graphs with at most six vertices.
pub fn brute_force_isomorphic(a: &KGraph, b: &KGraph) -> Option<Isomorphism> {
    if a.rank() != b.rank()
        || a.num_vertices() != b.num_vertices()
        || a.num_edges() != b.num_edges()
    {
        return None;
    }
    let n = a.num_vertices();
    let mut perm: Vec<u32> = (0..n as u32).collect();
    loop {
        if let Some(iso) = try_edges(a, b, &perm) {
            return Some(iso);
        }
        // next permutation
        let i = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| perm[i] < perm[i + 1])?;
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

fn try_edges(a: &KGraph, b: &KGraph, vmap: &[u32]) -> Option<Isomorphism> {
    fn rec(
        a: &KGraph,
        b: &KGraph,
        vmap: &[u32],
        e: u32,
        used: &mut Vec<bool>,
        emap: &mut Vec<u32>,
    ) -> Option<Isomorphism> {
        if e as usize == a.num_edges() {
            let iso = Isomorphism {
                vertex_map: vmap.to_vec(),
                edge_map: emap.clone(),
            };
            return verify_isomorphism(a, b, &iso).then_some(iso);
        }
        let ea = a.edge(e);
        for cand in 0..b.num_edges() as u32 {
            if used[cand as usize] {
                continue;
            }
            let eb = b.edge(cand);
            if eb.color != ea.color
                || eb.r() != vmap[ea.r() as usize]
                || eb.s() != vmap[ea.s() as usize]
            {
                continue;
            }
            used[cand as usize] = true;
            emap[e as usize] = cand;
            if let Some(iso) = rec(a, b, vmap, e + 1, used, emap) {
                return Some(iso);
            }
            used[cand as usize] = false;
        }
        None
    }
    rec(
        a,
        b,
        vmap,
        0,
        &mut vec![false; b.num_edges()],
        &mut vec![u32::MAX; a.num_edges()],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn disjoint_cycles_refuted() {
        let g = presets::disjoint_union(&presets::cycle(2), &presets::cycle(3));
        let res = cofinal_oracle(&g, 4).unwrap();
        assert!(!res.cofinal);
        assert!(res.witness.is_some());
    }

    #[test]
    fn single_cycle_confirmed() {
        let g = presets::cycle(5);
        assert!(cofinal_oracle(&g, 5).unwrap().cofinal);
    }

    #[test]
    fn brute_force_agrees_on_small_graphs() {
        let a = presets::cycle(4);
        let b = presets::cycle(4);
        assert!(brute_force_isomorphic(&a, &b).is_some());
        let c = presets::disjoint_union(&presets::cycle(2), &presets::cycle(2));
        assert!(brute_force_isomorphic(&a, &c).is_none());
    }
}
