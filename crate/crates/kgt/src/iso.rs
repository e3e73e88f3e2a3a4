//! Degree-preserving isomorphism search between small rank-k graphs.
//!
//! Backtracks over vertex assignments ordered by a breadth-first sweep, then
//! over edge matchings within each parallel-edge bucket, and finally checks
//! that every factorisation square is carried to a square. Sound and
//! complete for the graph sizes this crate targets.

use std::collections::HashMap;

use crate::error::{KgtError, Result};
use crate::kgraph::KGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertex_map: Vec<u32>,
    pub edge_map: Vec<u32>,
}

/// Full verification that maps constitute a degree-preserving isomorphism.
pub fn verify_isomorphism(a: &KGraph, b: &KGraph, iso: &Isomorphism) -> bool {
    if a.rank() != b.rank()
        || iso.vertex_map.len() != a.num_vertices()
        || a.num_vertices() != b.num_vertices()
        || iso.edge_map.len() != a.num_edges()
        || a.num_edges() != b.num_edges()
    {
        return false;
    }
    let mut seen_v = vec![false; b.num_vertices()];
    for &v in &iso.vertex_map {
        if (v as usize) >= seen_v.len() || seen_v[v as usize] {
            return false;
        }
        seen_v[v as usize] = true;
    }
    let mut seen_e = vec![false; b.num_edges()];
    for &e in &iso.edge_map {
        if (e as usize) >= seen_e.len() || seen_e[e as usize] {
            return false;
        }
        seen_e[e as usize] = true;
    }
    for e in 0..a.num_edges() as u32 {
        let ea = a.edge(e);
        let eb = b.edge(iso.edge_map[e as usize]);
        if ea.color != eb.color
            || iso.vertex_map[ea.r() as usize] != eb.r()
            || iso.vertex_map[ea.s() as usize] != eb.s()
        {
            return false;
        }
    }
    for (&(f, g), &(gp, fp)) in a.squares() {
        let img = b.square(iso.edge_map[f as usize], iso.edge_map[g as usize]);
        if img != Some((iso.edge_map[gp as usize], iso.edge_map[fp as usize])) {
            return false;
        }
    }
    true
}

/// Per-vertex fingerprint: in/out edge counts per color.
fn profile(g: &KGraph, v: u32) -> Vec<(usize, usize)> {
    (1..=g.rank())
        .map(|c| {
            (
                g.edges_ranged_at(v, c).len(),
                g.edges_sourced_at(v, c).len(),
            )
        })
        .collect()
}

fn pair_counts(g: &KGraph) -> HashMap<(u32, u32, usize), Vec<u32>> {
    let mut out: HashMap<(u32, u32, usize), Vec<u32>> = HashMap::new();
    for e in 0..g.num_edges() as u32 {
        let ed = g.edge(e);
        out.entry((ed.s(), ed.r(), ed.color)).or_default().push(e);
    }
    out
}

struct Search<'a> {
    a: &'a KGraph,
    b: &'a KGraph,
    order: Vec<u32>,
    candidates: Vec<Vec<u32>>,
    buckets_a: HashMap<(u32, u32, usize), Vec<u32>>,
    buckets_b: HashMap<(u32, u32, usize), Vec<u32>>,
}

impl<'a> Search<'a> {
    fn run(&self) -> Option<Isomorphism> {
        let mut vmap = vec![u32::MAX; self.a.num_vertices()];
        let mut used = vec![false; self.b.num_vertices()];
        self.assign(0, &mut vmap, &mut used)
    }

    fn assign(&self, i: usize, vmap: &mut Vec<u32>, used: &mut Vec<bool>) -> Option<Isomorphism> {
        if i == self.order.len() {
            return self.match_edges(vmap);
        }
        let v = self.order[i];
        for &w in &self.candidates[v as usize] {
            if used[w as usize] {
                continue;
            }
            vmap[v as usize] = w;
            if self.consistent(v, vmap) {
                used[w as usize] = true;
                if let Some(iso) = self.assign(i + 1, vmap, used) {
                    return Some(iso);
                }
                used[w as usize] = false;
            }
            vmap[v as usize] = u32::MAX;
        }
        None
    }

    /// Edge multiplicities between `v` and every already-assigned vertex must
    /// match in the image.
    fn consistent(&self, v: u32, vmap: &[u32]) -> bool {
        let w = vmap[v as usize];
        for u in 0..vmap.len() as u32 {
            let wu = vmap[u as usize];
            if wu == u32::MAX {
                continue;
            }
            for c in 1..=self.a.rank() {
                for ((x, y), (ix, iy)) in [((v, u), (w, wu)), ((u, v), (wu, w))] {
                    let na = self.buckets_a.get(&(x, y, c)).map_or(0, |b| b.len());
                    let nb = self.buckets_b.get(&(ix, iy, c)).map_or(0, |b| b.len());
                    if na != nb {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn match_edges(&self, vmap: &[u32]) -> Option<Isomorphism> {
        let mut keys: Vec<&(u32, u32, usize)> = self.buckets_a.keys().collect();
        keys.sort();
        let mut emap = vec![u32::MAX; self.a.num_edges()];
        if self.fill_bucket(&keys, 0, vmap, &mut emap) {
            let iso = Isomorphism {
                vertex_map: vmap.to_vec(),
                edge_map: emap,
            };
            debug_assert!(verify_isomorphism(self.a, self.b, &iso));
            Some(iso)
        } else {
            None
        }
    }

    fn fill_bucket(
        &self,
        keys: &[&(u32, u32, usize)],
        i: usize,
        vmap: &[u32],
        emap: &mut Vec<u32>,
    ) -> bool {
        if i == keys.len() {
            let iso = Isomorphism {
                vertex_map: vmap.to_vec(),
                edge_map: emap.clone(),
            };
            return verify_isomorphism(self.a, self.b, &iso);
        }
        let &(s, r, c) = keys[i];
        let ours = &self.buckets_a[&(s, r, c)];
        let theirs = match self.buckets_b.get(&(vmap[s as usize], vmap[r as usize], c)) {
            Some(t) if t.len() == ours.len() => t,
            _ => return false,
        };
        // no squares: any pairing works, so fix one and move on
        if self.a.squares().next().is_none() {
            for (x, y) in ours.iter().zip(theirs) {
                emap[*x as usize] = *y;
            }
            return self.fill_bucket(keys, i + 1, vmap, emap);
        }
        self.permute(
            ours,
            theirs,
            0,
            &mut vec![false; theirs.len()],
            keys,
            i,
            vmap,
            emap,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn permute(
        &self,
        ours: &[u32],
        theirs: &[u32],
        j: usize,
        taken: &mut Vec<bool>,
        keys: &[&(u32, u32, usize)],
        i: usize,
        vmap: &[u32],
        emap: &mut Vec<u32>,
    ) -> bool {
        if j == ours.len() {
            return self.fill_bucket(keys, i + 1, vmap, emap);
        }
        for (t, &img) in theirs.iter().enumerate() {
            if taken[t] {
                continue;
            }
            taken[t] = true;
            emap[ours[j] as usize] = img;
            if self.permute(ours, theirs, j + 1, taken, keys, i, vmap, emap) {
                return true;
            }
            emap[ours[j] as usize] = u32::MAX;
            taken[t] = false;
        }
        false
    }
}

/// Search for a degree-preserving isomorphism; `None` when the graphs are
/// not isomorphic.
pub fn are_isomorphic(a: &KGraph, b: &KGraph) -> Result<Option<Isomorphism>> {
    if a.rank() != b.rank() {
        return Err(KgtError::RankMismatch(a.rank(), b.rank()));
    }
    if a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() {
        return Ok(None);
    }
    for c in 1..=a.rank() {
        if a.edges_of_color(c).len() != b.edges_of_color(c).len() {
            return Ok(None);
        }
    }
    let mut profiles_a: Vec<_> = (0..a.num_vertices() as u32)
        .map(|v| profile(a, v))
        .collect();
    let mut profiles_b: Vec<_> = (0..b.num_vertices() as u32)
        .map(|v| profile(b, v))
        .collect();
    let candidates: Vec<Vec<u32>> = profiles_a
        .iter()
        .map(|pa| {
            (0..b.num_vertices() as u32)
                .filter(|&w| &profiles_b[w as usize] == pa)
                .collect()
        })
        .collect();
    profiles_a.sort();
    profiles_b.sort();
    if profiles_a != profiles_b {
        return Ok(None);
    }

    // breadth-first order over the undirected skeleton, covering every component
    let n = a.num_vertices();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n as u32 {
        if seen[start as usize] {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        seen[start as usize] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for c in 1..=a.rank() {
                for &e in a
                    .edges_ranged_at(v, c)
                    .iter()
                    .chain(a.edges_sourced_at(v, c))
                {
                    for w in [a.edge(e).s(), a.edge(e).r()] {
                        if !seen[w as usize] {
                            seen[w as usize] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
    }

    let search = Search {
        a,
        b,
        order,
        candidates,
        buckets_a: pair_counts(a),
        buckets_b: pair_counts(b),
    };
    Ok(search.run())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::bd_chain;
    use crate::presets;
    use crate::skew::skew_product;

    #[test]
    fn identity_is_found() {
        let g = presets::one_square();
        let iso = are_isomorphic(&g, &g).unwrap().expect("identity exists");
        assert!(verify_isomorphism(&g, &g, &iso));
    }

    #[test]
    fn cycles_of_different_length_differ() {
        let c2 = presets::cycle(2);
        let c4 = presets::cycle(4);
        assert!(are_isomorphic(&c2, &c4).unwrap().is_none());
    }

    #[test]
    fn skew_of_loop_by_z2_is_the_two_cycle() {
        let cc = bd_chain(2);
        let sk = skew_product(cc.graph(), cc.cocycle(2)).unwrap();
        let c2 = presets::cycle(2);
        let iso = are_isomorphic(&sk.graph, &c2).unwrap().expect("isomorphic");
        assert!(verify_isomorphism(&sk.graph, &c2, &iso));
    }

    #[test]
    fn rank_mismatch_errors() {
        let a = presets::b1();
        let b = presets::one_square();
        assert!(matches!(
            are_isomorphic(&a, &b),
            Err(KgtError::RankMismatch(1, 2))
        ));
    }

    #[test]
    fn relabeled_cycle_matches() {
        let c3 = presets::cycle(3);
        // same shape with shuffled ids
        let raw = crate::kgraph::RawGraph {
            k: 1,
            vertices: vec!["x".into(), "y".into(), "z".into()],
            edges: vec![
                crate::kgraph::RawEdge {
                    id: "p".into(),
                    color: 1,
                    src: "y".into(),
                    dst: "x".into(),
                },
                crate::kgraph::RawEdge {
                    id: "q".into(),
                    color: 1,
                    src: "z".into(),
                    dst: "y".into(),
                },
                crate::kgraph::RawEdge {
                    id: "r".into(),
                    color: 1,
                    src: "x".into(),
                    dst: "z".into(),
                },
            ],
            squares: vec![],
        };
        let other = KGraph::validate(&raw).unwrap();
        assert!(are_isomorphic(&c3, &other).unwrap().is_some());
    }
}
