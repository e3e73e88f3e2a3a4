//! Cross-validation of level-graph verdicts against direct evidence on the
//! built tower.
//!
//! Cofinality: when every level is cofinal, every sampled parametrized tower
//! path must be reachable from every tower vertex within a bounded window;
//! when some level fails, the failing witness must be unreachable from the
//! violated vertex, at every lift, within the window. Periodicity: a
//! separating level for a locally periodic base triple must show up as a
//! concrete pair of distinct vertices on the two shifts of a parametrized
//! tower path, and conversely.

use serde::Serialize;

use crate::chain::ProfiniteElement;
use crate::degree::Degree;
use crate::error::{KgtError, Result};
use crate::infpath::{InfinitePathSpec, InfinitePathSpecDesc};
use crate::kgraph::KGraph;
use crate::tower::QuotientTower;

use super::cofinality::{is_cofinal, reach_set};
use super::periodicity::find_lp_triples;
use super::tower_paths::{build_tower_path, parametrized_vertex};

fn spec_from_desc(g: &KGraph, desc: &InfinitePathSpecDesc) -> Result<InfinitePathSpec> {
    let build = |d: &crate::kgraph::PathDesc| -> Result<crate::kgraph::Path> {
        if d.edges.is_empty() {
            let v = g
                .vertex_index(&d.range)
                .ok_or_else(|| KgtError::UnknownVertex(d.range.clone(), "witness".into()))?;
            Ok(g.vertex_path(v))
        } else {
            let refs: Vec<&str> = d.edges.iter().map(String::as_str).collect();
            g.path_from_edges(&refs)
        }
    };
    InfinitePathSpec::new(g, build(&desc.head)?, build(&desc.cycle)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct CofinalityCrossCheck {
    pub per_level: Vec<bool>,
    pub samples: usize,
    /// Sampled (vertex, path) pairs that could not connect within the window
    /// even though every level is cofinal.
    pub positive_misses: Vec<String>,
    /// When a level fails: whether the lifted witness is indeed unreachable
    /// from the violated vertex at every window point.
    pub negative_confirmed: Option<bool>,
    pub consistent: bool,
}

/// Compare per-level cofinality verdicts with bounded reachability evidence
/// on the tower. `window` bounds the horizontal search degree.
pub fn cofinality_cross_check(qt: &QuotientTower, window: u32) -> Result<CofinalityCrossCheck> {
    let levels = qt.levels();
    let base = qt.cc.graph();
    let tower = &qt.tower.graph;

    let mut per_level = Vec::with_capacity(levels);
    let mut reports = Vec::with_capacity(levels);
    for n in 1..=levels {
        let rep = is_cofinal(&qt.seq.graph(n).clone())?;
        per_level.push(rep.cofinal);
        reports.push(rep);
    }
    let all_cofinal = per_level.iter().all(|&b| b);

    let reach: Vec<std::collections::BTreeSet<u32>> = (0..tower.num_vertices() as u32)
        .map(|w| reach_set(tower, w))
        .collect();

    let mut samples = 0usize;
    let mut positive_misses = Vec::new();
    let mut negative_confirmed = None;

    if all_cofinal {
        let tuples = ProfiniteElement::all_at_level(qt.cc.chain(), levels);
        for u in 0..base.num_vertices() as u32 {
            let spec = InfinitePathSpec::pump_from(base, u)?;
            for g in &tuples {
                for i0 in 0..levels.min(3) {
                    samples += 1;
                    for w in 0..tower.num_vertices() as u32 {
                        let mut hit = false;
                        'search: for j in 0..=(levels - 1 - i0) {
                            for m in Degree::grid(&Degree::diagonal(base.rank(), window)) {
                                let z = parametrized_vertex(qt, &spec, g, i0, &m, j)?;
                                if reach[w as usize].contains(&z) {
                                    hit = true;
                                    break 'search;
                                }
                            }
                        }
                        if !hit {
                            positive_misses.push(format!(
                                "vertex {} cannot reach the path from {} (shift {i0})",
                                tower.vertex_id(w),
                                base.vertex_id(u)
                            ));
                        }
                    }
                }
            }
        }
    } else {
        // lift the first failing witness and confirm it stays unreachable
        let n0 = per_level.iter().position(|&b| !b).unwrap() + 1;
        let level_graph = qt.seq.graph(n0);
        let violation = &reports[n0 - 1].violations[0];
        let v_local = level_graph
            .vertex_index(&violation.vertex)
            .ok_or_else(|| KgtError::Internal("witness vertex disappeared".into()))?;
        let w_star = qt.tower.vertex(n0, v_local);
        let spec = spec_from_desc(level_graph, &violation.witness)?;
        let horizon = spec.head().degree().add(spec.cycle().degree());
        let mut confirmed = true;
        for (_, u_level) in spec.vertices_up_to(level_graph, &horizon)? {
            for j in 0..=(levels - n0) {
                for z in 0..qt.seq.graph(n0 + j).num_vertices() as u32 {
                    if qt.seq.project_vertex(n0 + j, n0, z) != u_level {
                        continue;
                    }
                    samples += 1;
                    if reach[w_star as usize].contains(&qt.tower.vertex(n0 + j, z)) {
                        confirmed = false;
                    }
                }
            }
        }
        negative_confirmed = Some(confirmed);
    }

    let consistent = if all_cofinal {
        positive_misses.is_empty()
    } else {
        negative_confirmed == Some(true)
    };
    Ok(CofinalityCrossCheck {
        per_level,
        samples,
        positive_misses,
        negative_confirmed,
        consistent,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TripleEvidence {
    pub vertex: String,
    pub p: Degree,
    pub q: Degree,
    /// Level at which a cocycle separates the prefixes, if any, together
    /// with the two distinct tower vertices exhibiting the separation.
    pub separating_level: Option<usize>,
    pub tower_vertices: Option<(String, String)>,
    pub prefix_form_satisfied: bool,
    pub consistent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicityCrossCheck {
    pub triples: Vec<TripleEvidence>,
    /// Vertical shifts always separate: connecting edges change level.
    pub vertical_shifts_separate: bool,
    pub consistent: bool,
}

/// For every locally periodic base triple, compare the capped prefix-form
/// separation verdict against concrete distinct vertices on the two shifts
/// of a parametrized tower path.
pub fn periodicity_cross_check(
    qt: &QuotientTower,
    degree_bound: u32,
    state_cap: usize,
) -> Result<PeriodicityCrossCheck> {
    let base = qt.cc.graph();
    let levels = qt.levels();
    let zero = Degree::zero(base.rank());
    let scan = find_lp_triples(base, degree_bound, state_cap)?;

    let mut triples = Vec::new();
    for (v, p, q) in &scan.periodic {
        let join = p.sup(q);
        // capped prefix-form search
        let mut found: Option<(usize, crate::kgraph::Path)> = None;
        'outer: for n in 1..=levels {
            let c = qt.cc.cocycle(n);
            for lambda in base.paths_of_degree(&join, Some(*v)) {
                let val_p = c.of_path(&base.factor(&lambda, &zero, p)?);
                let val_q = c.of_path(&base.factor(&lambda, &zero, q)?);
                if val_p != val_q {
                    found = Some((n, lambda));
                    break 'outer;
                }
            }
        }
        let satisfied = found.is_some();
        let (mut separating_level, mut tower_vertices) = (None, None);
        let mut consistent = true;
        if let Some((n, lambda)) = found {
            // exhibit the separation on an actual tower path
            let pumped = InfinitePathSpec::pump_from(base, lambda.source_vertex())?;
            let head = base.compose(&lambda, pumped.head())?;
            let spec = InfinitePathSpec::new(base, head, pumped.cycle().clone())?;
            let g = ProfiniteElement::identity(qt.cc.chain(), levels);
            let zp = parametrized_vertex(qt, &spec, &g, 0, p, n - 1)?;
            let zq = parametrized_vertex(qt, &spec, &g, 0, q, n - 1)?;
            // the same vertices, read off a built path window
            let y = build_tower_path(qt, &spec, &g, &join, n - 1)?;
            let at = |d: &Degree| -> Result<u32> {
                let spot = d.extend((n - 1) as u32);
                Ok(qt.tower.graph.factor(&y, &spot, &spot)?.range_vertex())
            };
            if at(p)? != zp || at(q)? != zq {
                return Err(KgtError::Internal(
                    "parametrized vertices disagree with the built path".into(),
                ));
            }
            separating_level = Some(n);
            tower_vertices = Some((
                qt.tower.graph.vertex_id(zp).to_string(),
                qt.tower.graph.vertex_id(zq).to_string(),
            ));
            consistent = zp != zq;
        }
        triples.push(TripleEvidence {
            vertex: base.vertex_id(*v).to_string(),
            p: p.clone(),
            q: q.clone(),
            separating_level,
            tower_vertices,
            prefix_form_satisfied: satisfied,
            consistent,
        });
    }

    // connecting edges always change level, so vertical shifts separate
    let vertical_shifts_separate = (0..qt.tower.graph.num_edges() as u32)
        .filter_map(|e| {
            let ed = qt.tower.graph.edge(e);
            (ed.color == base.rank() + 1)
                .then(|| qt.tower.level_of_vertex(ed.r()) + 1 == qt.tower.level_of_vertex(ed.s()))
        })
        .all(|ok| ok);

    let consistent = triples.iter().all(|t| t.consistent) && vertical_shifts_separate;
    Ok(PeriodicityCrossCheck {
        triples,
        vertical_shifts_separate,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::bd_chain;
    use crate::presets;
    use crate::tower::QuotientTower;

    #[test]
    fn odometer_levels_agree_with_tower() {
        let cc = bd_chain(4);
        let qt = QuotientTower::build(&cc, 4).unwrap();
        let rep = cofinality_cross_check(&qt, 3).unwrap();
        assert!(rep.per_level.iter().all(|&b| b));
        assert!(rep.consistent, "misses: {:?}", rep.positive_misses);
    }

    #[test]
    fn split_base_is_confirmed_unreachable() {
        let base = presets::disjoint_union(&presets::cycle(2), &presets::cycle(2));
        let cc = presets::trivial_chain(&base, 2);
        let qt = QuotientTower::build(&cc, 2).unwrap();
        let rep = cofinality_cross_check(&qt, 3).unwrap();
        assert!(rep.per_level.iter().all(|&b| !b));
        assert_eq!(rep.negative_confirmed, Some(true));
        assert!(rep.consistent);
    }

    #[test]
    fn odometer_separation_shows_on_the_tower() {
        let cc = bd_chain(4);
        let qt = QuotientTower::build(&cc, 4).unwrap();
        let rep = periodicity_cross_check(&qt, 2, 100_000).unwrap();
        assert!(rep.consistent);
        assert!(!rep.triples.is_empty());
        for t in &rep.triples {
            assert!(t.prefix_form_satisfied);
            // the separating level is the first whose modulus exceeds the
            // shift difference: level 2 for (1,0) and (2,1), level 3 for (2,0)
            let diff = t.p.total().abs_diff(t.q.total());
            let expected = if diff % 2 == 1 { 2 } else { 3 };
            assert_eq!(
                t.separating_level,
                Some(expected),
                "triple {:?}",
                (&t.p, &t.q)
            );
        }
    }

    #[test]
    fn trivial_chain_has_no_evidence_and_fails_consistently() {
        let cc = presets::trivial_chain(&presets::b1(), 3);
        let qt = QuotientTower::build(&cc, 3).unwrap();
        let rep = periodicity_cross_check(&qt, 2, 100_000).unwrap();
        assert!(rep.consistent);
        for t in &rep.triples {
            assert!(!t.prefix_form_satisfied);
            assert!(t.separating_level.is_none());
        }
    }
}
