//! Decision procedures over finite rank-k graphs: cofinality, local
//! periodicity, the cocycle-separation condition for tower simplicity, the
//! parametrisation of tower paths, and cross-checks tying level-graph
//! verdicts to direct evidence on the tower.

mod cofinality;
mod cross_checks;
mod periodicity;
mod separation;
mod simplicity;
mod tower_paths;

pub use cofinality::{is_cofinal, reach_set, CofinalityReport, CofinalityViolation};
pub use cross_checks::{
    cofinality_cross_check, periodicity_cross_check, CofinalityCrossCheck, PeriodicityCrossCheck,
};
pub use periodicity::{
    find_lp_triples, local_periodicity_check, verify_aperiodicity_witness, LpScan,
    PeriodicityReport, PeriodicityVerdict,
};
pub use separation::{
    separation_condition, SeparationOutcome, SeparationReport, SeparationWitness,
};
pub use simplicity::{simplicity_check, SimplicityBounds, SimplicityReport, SimplicityVerdict};
pub use tower_paths::{
    build_tower_path, decompose_tower_path, parametrized_vertex, rebuild_decomposition,
    TowerPathDecomposition,
};
