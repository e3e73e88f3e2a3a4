//! Exact local-periodicity decision via residual-pair closure.
//!
//! Local periodicity (p, q) at v asks that every infinite path from v agree
//! with itself under the two shifts. Writing j = p v q, a path x from v is
//! the prefix x(0, j) followed by diagonal blocks of degree (1, ..., 1), and
//! the two shifted views of x differ only through a pair of bounded-degree
//! residuals: the parts of x between p + m(1,..,1) and j + m(1,..,1), and
//! between q + m(1,..,1) and j + m(1,..,1). Appending a block transforms the
//! residual pair and emits one comparable diagonal block on each side. The
//! residual pairs form a finite state space, so exhausting the reachable
//! states either proves periodicity or produces a concrete disagreeing
//! extension, which we close up into an eventually periodic witness.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::degree::Degree;
use crate::error::{KgtError, Result};
use crate::infpath::{InfinitePathSpec, InfinitePathSpecDesc};
use crate::kgraph::{KGraph, Path};

#[derive(Debug, Clone)]
pub struct AperiodicWitness {
    pub spec: InfinitePathSpec,
    /// A window bound: the shifted segments of the witness differ somewhere
    /// within (0, disagree_within).
    pub disagree_within: Degree,
}

#[derive(Debug, Clone)]
pub enum PeriodicityVerdict {
    /// Every reachable residual state is consistent: an exhaustive proof.
    Periodic,
    Aperiodic(AperiodicWitness),
    /// State cap exceeded before exhaustion.
    Unknown {
        cap: usize,
    },
}

#[derive(Debug, Clone)]
pub struct PeriodicityReport {
    pub vertex: u32,
    pub p: Degree,
    pub q: Degree,
    pub verdict: PeriodicityVerdict,
    pub states_explored: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicityReportDesc {
    pub vertex: String,
    pub p: Degree,
    pub q: Degree,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<InfinitePathSpecDesc>,
    pub states_explored: usize,
}

impl PeriodicityReport {
    pub fn is_periodic(&self) -> bool {
        matches!(self.verdict, PeriodicityVerdict::Periodic)
    }

    pub fn describe(&self, g: &KGraph) -> PeriodicityReportDesc {
        let (verdict, witness) = match &self.verdict {
            PeriodicityVerdict::Periodic => ("periodic".to_string(), None),
            PeriodicityVerdict::Aperiodic(w) => ("aperiodic".to_string(), Some(w.spec.describe(g))),
            PeriodicityVerdict::Unknown { cap } => (format!("unknown(cap {cap})"), None),
        };
        PeriodicityReportDesc {
            vertex: g.vertex_id(self.vertex).to_string(),
            p: self.p.clone(),
            q: self.q.clone(),
            verdict,
            witness,
            states_explored: self.states_explored,
        }
    }
}

/// Close an observed finite trail into an eventually periodic witness.
fn witness_from_trail(g: &KGraph, trail: &Path) -> Result<InfinitePathSpec> {
    let pumped = InfinitePathSpec::pump_from(g, trail.source_vertex())?;
    let head = g.compose(trail, pumped.head())?;
    InfinitePathSpec::new(g, head, pumped.cycle().clone())
}

/// Decide whether sigma^p(x) = sigma^q(x) for every x from `v`. Exact on
/// no-source graphs; `state_cap` bounds the closure as a safety valve.
pub fn local_periodicity_check(
    g: &KGraph,
    v: u32,
    p: &Degree,
    q: &Degree,
    state_cap: usize,
) -> Result<PeriodicityReport> {
    if p == q {
        return Err(KgtError::Internal("local periodicity needs p != q".into()));
    }
    g.require_no_sources()?;
    let j = p.sup(q);
    let step = Degree::ones(g.rank());

    let mut seen: BTreeSet<(Path, Path)> = BTreeSet::new();
    let mut queue: Vec<(Path, Path, Path)> = Vec::new(); // (residual_p, residual_q, trail)
    let report = |verdict: PeriodicityVerdict, states: usize| PeriodicityReport {
        vertex: v,
        p: p.clone(),
        q: q.clone(),
        verdict,
        states_explored: states,
    };

    for lambda in g.paths_of_degree(&j, Some(v)) {
        let a = g.factor(&lambda, p, &j)?;
        let b = g.factor(&lambda, q, &j)?;
        if a.range_vertex() != b.range_vertex() {
            // x(p) != x(q) for any extension of lambda
            let spec = witness_from_trail(g, &lambda)?;
            return Ok(report(
                PeriodicityVerdict::Aperiodic(AperiodicWitness {
                    spec,
                    disagree_within: Degree::zero(g.rank()),
                }),
                seen.len(),
            ));
        }
        if seen.insert((a.clone(), b.clone())) {
            queue.push((a, b, lambda));
        }
    }

    while let Some((a, b, trail)) = queue.pop() {
        let w = a.source_vertex();
        debug_assert_eq!(w, b.source_vertex());
        for block in g.paths_of_degree(&step, Some(w)) {
            let am = g.compose(&a, &block)?;
            let bm = g.compose(&b, &block)?;
            let da = am.degree().clone();
            let db = bm.degree().clone();
            let emit_a = g.factor(&am, &Degree::zero(g.rank()), &step)?;
            let emit_b = g.factor(&bm, &Degree::zero(g.rank()), &step)?;
            let extended = g.compose(&trail, &block)?;
            if emit_a != emit_b {
                let spec = witness_from_trail(g, &extended)?;
                let window = extended.degree().sub(&j).expect("trail dominates the join");
                return Ok(report(
                    PeriodicityVerdict::Aperiodic(AperiodicWitness {
                        spec,
                        disagree_within: window,
                    }),
                    seen.len(),
                ));
            }
            let next_a = g.factor(&am, &step, &da)?;
            let next_b = g.factor(&bm, &step, &db)?;
            if seen.insert((next_a.clone(), next_b.clone())) {
                if seen.len() > state_cap {
                    return Ok(report(
                        PeriodicityVerdict::Unknown { cap: state_cap },
                        seen.len(),
                    ));
                }
                queue.push((next_a, next_b, extended.clone()));
            }
        }
    }
    let states = seen.len();
    Ok(report(PeriodicityVerdict::Periodic, states))
}

/// Re-verify an aperiodicity witness by expanding it and locating a window
/// where the shifted views differ.
pub fn verify_aperiodicity_witness(
    g: &KGraph,
    v: u32,
    p: &Degree,
    q: &Degree,
    spec: &InfinitePathSpec,
    window: u32,
) -> bool {
    if spec.range() != v {
        return false;
    }
    let vp = match spec.vertex_at(g, p) {
        Ok(x) => x,
        Err(_) => return false,
    };
    let vq = match spec.vertex_at(g, q) {
        Ok(x) => x,
        Err(_) => return false,
    };
    if vp != vq {
        return true;
    }
    for l in Degree::grid(&Degree::diagonal(g.rank(), window)) {
        let sp = spec.segment(g, p, &p.add(&l));
        let sq = spec.segment(g, q, &q.add(&l));
        match (sp, sq) {
            (Ok(x), Ok(y)) if x.edge_indices() != y.edge_indices() => return true,
            _ => {}
        }
    }
    false
}

#[derive(Debug, Clone)]
pub struct LpScan {
    /// Canonical triples (v, p, q) with p lexicographically above q that are
    /// provably locally periodic.
    pub periodic: Vec<(u32, Degree, Degree)>,
    pub unknown: Vec<(u32, Degree, Degree)>,
    pub aperiodic: usize,
}

/// Scan all vertices and all pairs p != q below the diagonal bound.
pub fn find_lp_triples(g: &KGraph, degree_bound: u32, state_cap: usize) -> Result<LpScan> {
    let grid = Degree::grid(&Degree::diagonal(g.rank(), degree_bound));
    let mut scan = LpScan {
        periodic: Vec::new(),
        unknown: Vec::new(),
        aperiodic: 0,
    };
    for v in 0..g.num_vertices() as u32 {
        for p in &grid {
            for q in &grid {
                if q >= p {
                    continue;
                }
                let rep = local_periodicity_check(g, v, p, q, state_cap)?;
                match rep.verdict {
                    PeriodicityVerdict::Periodic => scan.periodic.push((v, p.clone(), q.clone())),
                    PeriodicityVerdict::Unknown { .. } => {
                        scan.unknown.push((v, p.clone(), q.clone()))
                    }
                    PeriodicityVerdict::Aperiodic(w) => {
                        // the disagreement sits inside the witness's own window
                        let window = w
                            .disagree_within
                            .coords()
                            .iter()
                            .copied()
                            .max()
                            .unwrap_or(0)
                            .max(1);
                        debug_assert!(verify_aperiodicity_witness(g, v, p, q, &w.spec, window));
                        scan.aperiodic += 1;
                    }
                }
            }
        }
    }
    Ok(scan)
}
