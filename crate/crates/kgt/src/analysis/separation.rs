//! The cocycle-separation condition behind tower simplicity.
//!
//! At a locally periodic triple (v, p, q) the tower can only be aperiodic if
//! some level's cocycle distinguishes the two shifts. Two formulations are
//! evaluated side by side:
//!
//! * prefix form: some x from v and some level N have
//!   c_N(x(0, p)) != c_N(x(0, q));
//! * segment form: some x, window l and level N have
//!   c_N(x(p, p+l)) != c_N(x(q, q+l)).
//!
//! On a locally periodic triple the shifted segments x(p, p+l) and
//! x(q, q+l) coincide as paths, so the segment form can never be satisfied
//! there; it is computed and reported anyway, and the prefix form is the
//! operative criterion. Once a level separates, every deeper level does, so
//! the level search ascends and stops at the first hit.

use serde::Serialize;

use crate::chain::CocycleChain;
use crate::degree::Degree;
use crate::error::{KgtError, Result};
use crate::infpath::{InfinitePathSpec, InfinitePathSpecDesc};
use crate::kgraph::KGraph;

use super::periodicity::{local_periodicity_check, PeriodicityVerdict};

#[derive(Debug, Clone)]
pub struct SeparationWitness {
    pub x: InfinitePathSpec,
    pub level: usize,
    /// Window for the segment form; absent for the prefix form.
    pub window: Option<Degree>,
    pub value_p: String,
    pub value_q: String,
}

#[derive(Debug, Clone)]
pub enum SeparationOutcome {
    Satisfied(SeparationWitness),
    /// No witness exists within the supplied chain.
    FailedExhaustively {
        chain_len: usize,
    },
    /// The triple could not be confirmed locally periodic within the cap.
    Inconclusive,
}

impl SeparationOutcome {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, SeparationOutcome::Satisfied(_))
    }
}

#[derive(Debug, Clone)]
pub struct SeparationReport {
    pub vertex: u32,
    pub p: Degree,
    pub q: Degree,
    pub prefix_form: SeparationOutcome,
    pub segment_form: SeparationOutcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationOutcomeDesc {
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<Degree>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<InfinitePathSpecDesc>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationReportDesc {
    pub vertex: String,
    pub p: Degree,
    pub q: Degree,
    pub prefix_form: SeparationOutcomeDesc,
    pub segment_form: SeparationOutcomeDesc,
}

fn describe_outcome(g: &KGraph, o: &SeparationOutcome) -> SeparationOutcomeDesc {
    match o {
        SeparationOutcome::Satisfied(w) => SeparationOutcomeDesc {
            outcome: "satisfied".into(),
            level: Some(w.level),
            window: w.window.clone(),
            values: Some((w.value_p.clone(), w.value_q.clone())),
            witness: Some(w.x.describe(g)),
        },
        SeparationOutcome::FailedExhaustively { chain_len } => SeparationOutcomeDesc {
            outcome: format!("failed exhaustively (levels 1..={chain_len})"),
            level: None,
            window: None,
            values: None,
            witness: None,
        },
        SeparationOutcome::Inconclusive => SeparationOutcomeDesc {
            outcome: "inconclusive".into(),
            level: None,
            window: None,
            values: None,
            witness: None,
        },
    }
}

impl SeparationReport {
    pub fn describe(&self, g: &KGraph) -> SeparationReportDesc {
        SeparationReportDesc {
            vertex: g.vertex_id(self.vertex).to_string(),
            p: self.p.clone(),
            q: self.q.clone(),
            prefix_form: describe_outcome(g, &self.prefix_form),
            segment_form: describe_outcome(g, &self.segment_form),
        }
    }
}

/// Evaluate both separation forms at a triple that must first re-verify as
/// locally periodic.
pub fn separation_condition(
    cc: &CocycleChain,
    v: u32,
    p: &Degree,
    q: &Degree,
    segment_bound: u32,
    state_cap: usize,
) -> Result<SeparationReport> {
    let g = cc.graph();
    let lp = local_periodicity_check(g, v, p, q, state_cap)?;
    match lp.verdict {
        PeriodicityVerdict::Aperiodic(_) => {
            return Err(KgtError::TripleNotPeriodic(
                g.vertex_id(v).to_string(),
                p.to_string(),
                q.to_string(),
            ));
        }
        PeriodicityVerdict::Unknown { .. } => {
            return Ok(SeparationReport {
                vertex: v,
                p: p.clone(),
                q: q.clone(),
                prefix_form: SeparationOutcome::Inconclusive,
                segment_form: SeparationOutcome::Inconclusive,
            });
        }
        PeriodicityVerdict::Periodic => {}
    }

    let join = p.sup(q);
    let zero = Degree::zero(g.rank());

    // prefix form: prefixes of degree p v q determine x(0,p) and x(0,q)
    let mut prefix_form = SeparationOutcome::FailedExhaustively {
        chain_len: cc.len(),
    };
    'prefix: for n in 1..=cc.len() {
        let c = cc.cocycle(n);
        for lambda in g.paths_of_degree(&join, Some(v)) {
            let val_p = c.of_path(&g.factor(&lambda, &zero, p)?);
            let val_q = c.of_path(&g.factor(&lambda, &zero, q)?);
            if val_p != val_q {
                let pumped = InfinitePathSpec::pump_from(g, lambda.source_vertex())?;
                let head = g.compose(&lambda, pumped.head())?;
                let x = InfinitePathSpec::new(g, head, pumped.cycle().clone())?;
                prefix_form = SeparationOutcome::Satisfied(SeparationWitness {
                    x,
                    level: n,
                    window: None,
                    value_p: c.group.name(val_p).to_string(),
                    value_q: c.group.name(val_q).to_string(),
                });
                break 'prefix;
            }
        }
    }

    // segment form: any window l up to the bound
    let mut segment_form = SeparationOutcome::FailedExhaustively {
        chain_len: cc.len(),
    };
    let deep = join.add(&Degree::diagonal(g.rank(), segment_bound));
    'segment: for n in 1..=cc.len() {
        let c = cc.cocycle(n);
        for lambda in g.paths_of_degree(&deep, Some(v)) {
            for l in Degree::grid(&Degree::diagonal(g.rank(), segment_bound)) {
                let seg_p = g.factor(&lambda, p, &p.add(&l))?;
                let seg_q = g.factor(&lambda, q, &q.add(&l))?;
                let (val_p, val_q) = (c.of_path(&seg_p), c.of_path(&seg_q));
                if val_p != val_q {
                    let pumped = InfinitePathSpec::pump_from(g, lambda.source_vertex())?;
                    let head = g.compose(&lambda, pumped.head())?;
                    let x = InfinitePathSpec::new(g, head, pumped.cycle().clone())?;
                    segment_form = SeparationOutcome::Satisfied(SeparationWitness {
                        x,
                        level: n,
                        window: Some(l),
                        value_p: c.group.name(val_p).to_string(),
                        value_q: c.group.name(val_q).to_string(),
                    });
                    break 'segment;
                }
            }
        }
    }

    Ok(SeparationReport {
        vertex: v,
        p: p.clone(),
        q: q.clone(),
        prefix_form,
        segment_form,
    })
}
