//! Truncated projective limits along a covering sequence: compatible tuples
//! of paths with componentwise structure maps, cylinder sets, and the
//! identification of quotient towers with skew products by compatible group
//! tuples.

use serde::Serialize;

use crate::chain::{CocycleChain, ProfiniteElement};
use crate::cover::{quotient_sequence, CoveringSequence};
use crate::degree::Degree;
use crate::error::{KgtError, Result};
use crate::kgraph::{Path, PathDesc};

/// A tuple (lambda_1, ..., lambda_j) with p_i(lambda_{i+1}) = lambda_i; the
/// common degree is the degree of any component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProjLimPath {
    components: Vec<Path>,
}

impl ProjLimPath {
    pub fn new(seq: &CoveringSequence, components: Vec<Path>) -> Result<ProjLimPath> {
        if components.is_empty() || components.len() > seq.levels() {
            return Err(KgtError::LevelOutOfRange(components.len(), seq.levels()));
        }
        for i in 1..components.len() {
            let projected = seq.map(i).path(seq.graph(i), &components[i]);
            if projected != components[i - 1] {
                return Err(KgtError::IncompatibleTuple(i + 1));
            }
        }
        Ok(ProjLimPath { components })
    }

    /// Lift a single top-level path to the full compatible tuple below it.
    pub fn from_top(seq: &CoveringSequence, level: usize, top: Path) -> ProjLimPath {
        let mut components = vec![top];
        for i in (1..level).rev() {
            let below = seq.map(i).path(seq.graph(i), &components[0]);
            components.insert(0, below);
        }
        ProjLimPath { components }
    }

    pub fn level(&self) -> usize {
        self.components.len()
    }

    /// The common degree.
    pub fn degree(&self) -> &Degree {
        self.components[0].degree()
    }

    /// 1-based component access.
    pub fn component(&self, n: usize) -> &Path {
        &self.components[n - 1]
    }

    pub fn components(&self) -> &[Path] {
        &self.components
    }

    pub fn range(&self, seq: &CoveringSequence) -> ProjLimPath {
        ProjLimPath {
            components: self
                .components
                .iter()
                .enumerate()
                .map(|(i, p)| seq.graph(i + 1).vertex_path(p.range_vertex()))
                .collect(),
        }
    }

    pub fn source(&self, seq: &CoveringSequence) -> ProjLimPath {
        ProjLimPath {
            components: self
                .components
                .iter()
                .enumerate()
                .map(|(i, p)| seq.graph(i + 1).vertex_path(p.source_vertex()))
                .collect(),
        }
    }

    /// Componentwise composition; both tuples must sit at the same level.
    pub fn compose(
        seq: &CoveringSequence,
        a: &ProjLimPath,
        b: &ProjLimPath,
    ) -> Result<ProjLimPath> {
        if a.level() != b.level() {
            return Err(KgtError::LevelMismatch(a.level(), b.level()));
        }
        let components = a
            .components
            .iter()
            .zip(&b.components)
            .enumerate()
            .map(|(i, (x, y))| seq.graph(i + 1).compose(x, y))
            .collect::<Result<_>>()?;
        Ok(ProjLimPath { components })
    }

    /// Componentwise factor lambda(p, q); levelwise unique factorisation
    /// keeps the tuple compatible.
    pub fn factor(&self, seq: &CoveringSequence, p: &Degree, q: &Degree) -> Result<ProjLimPath> {
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(i, x)| seq.graph(i + 1).factor(x, p, q))
            .collect::<Result<_>>()?;
        Ok(ProjLimPath { components })
    }

    pub fn describe(&self, seq: &CoveringSequence) -> Vec<PathDesc> {
        self.components
            .iter()
            .enumerate()
            .map(|(i, p)| seq.graph(i + 1).describe(p))
            .collect()
    }
}

/// Membership in the cylinder fixing the first `spec.len()` components.
pub fn cylinder_contains(spec: &[Path], candidate: &ProjLimPath) -> bool {
    spec.len() <= candidate.level() && candidate.components[..spec.len()] == *spec
}

/// A cylinder description is consistent (hence nonempty at every truncation)
/// exactly when its parts are a compatible tuple; in particular the degrees
/// must all agree.
pub fn cylinder_spec_consistent(seq: &CoveringSequence, parts: &[Path]) -> bool {
    if parts.is_empty() || parts.len() > seq.levels() {
        return false;
    }
    if parts.windows(2).any(|w| w[0].degree() != w[1].degree()) {
        return false;
    }
    ProjLimPath::new(seq, parts.to_vec()).is_ok()
}

/// All level-`level` compatible tuples of the given degree, one per
/// top-level path.
pub fn enumerate_tuples(
    seq: &CoveringSequence,
    level: usize,
    degree: &Degree,
) -> Result<Vec<ProjLimPath>> {
    if level == 0 || level > seq.levels() {
        return Err(KgtError::LevelOutOfRange(level, seq.levels()));
    }
    Ok(seq
        .graph(level)
        .paths_of_degree(degree, None)
        .into_iter()
        .map(|top| ProjLimPath::from_top(seq, level, top))
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct BijectionReport {
    pub level: usize,
    pub degree: Degree,
    pub pairs: usize,
    pub tuples: usize,
    pub bijective: bool,
    pub range_law_holds: bool,
}

/// Check that `(lambda, g) -> ((lambda, Q_n(g)))_n` is a bijection from
/// base paths of the given degree times compatible group tuples onto the
/// level-`level` path tuples, and that the range of every component obeys
/// the twisted law `r(lambda, g) = (r(lambda), c(lambda) g)`.
pub fn profinite_skew_bijection(
    cc: &CocycleChain,
    level: usize,
    degree: &Degree,
) -> Result<BijectionReport> {
    let (skews, seq) = quotient_sequence(cc, level)?;
    let base = cc.graph();
    let mut images = std::collections::BTreeSet::new();
    let mut pairs = 0usize;
    let mut range_law_holds = true;
    for lambda in base.paths_of_degree(degree, None) {
        for g in ProfiniteElement::all_at_level(cc.chain(), level) {
            pairs += 1;
            let components: Vec<Path> = (1..=level)
                .map(|n| skews[n - 1].lift_path(base, cc.cocycle(n), &lambda, g.component(n)))
                .collect();
            let tuple = ProjLimPath::new(&seq, components)?;
            for n in 1..=level {
                let grp = cc.group(n);
                let expected = skews[n - 1].vertex(
                    lambda.range_vertex(),
                    grp.mul(cc.cocycle(n).of_path(&lambda), g.component(n)),
                );
                if tuple.component(n).range_vertex() != expected {
                    range_law_holds = false;
                }
            }
            images.insert(tuple);
        }
    }
    let tuples = enumerate_tuples(&seq, level, degree)?;
    let bijective =
        images.len() == pairs && tuples.len() == pairs && tuples.iter().all(|t| images.contains(t));
    Ok(BijectionReport {
        level,
        degree: degree.clone(),
        pairs,
        tuples: tuples.len(),
        bijective,
        range_law_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::bd_chain;

    fn bd_seq(levels: usize) -> (CocycleChain, CoveringSequence) {
        let cc = bd_chain(levels);
        let (_, seq) = quotient_sequence(&cc, levels).unwrap();
        (cc, seq)
    }

    #[test]
    fn compatible_tuple_validates() {
        let (_cc, seq) = bd_seq(3);
        // the loop lifted with source elements 0, 1, 3
        let l1 = seq.graph(1).edge_path(0);
        let l2 = seq
            .graph(2)
            .edge_path(seq.graph(2).edge_index("f|1").unwrap());
        let l3 = seq
            .graph(3)
            .edge_path(seq.graph(3).edge_index("f|3").unwrap());
        let t = ProjLimPath::new(&seq, vec![l1, l2, l3]).unwrap();
        assert_eq!(t.degree(), &Degree::new(vec![1]));
    }

    #[test]
    fn incompatible_tuple_rejected() {
        let (_cc, seq) = bd_seq(3);
        let l1 = seq.graph(1).edge_path(0);
        let l2 = seq
            .graph(2)
            .edge_path(seq.graph(2).edge_index("f|1").unwrap());
        let l3_bad = seq
            .graph(3)
            .edge_path(seq.graph(3).edge_index("f|0").unwrap());
        match ProjLimPath::new(&seq, vec![l1, l2, l3_bad]) {
            Err(KgtError::IncompatibleTuple(3)) => {}
            other => panic!("expected IncompatibleTuple(3), got {other:?}"),
        }
    }

    #[test]
    fn vertex_tuple_is_its_own_endpoints() {
        let (_cc, seq) = bd_seq(2);
        let t = ProjLimPath::new(
            &seq,
            vec![seq.graph(1).vertex_path(0), seq.graph(2).vertex_path(1)],
        )
        .unwrap();
        assert!(t.degree().is_zero());
        assert_eq!(t.range(&seq), t);
        assert_eq!(t.source(&seq), t);
    }

    #[test]
    fn composition_is_componentwise() {
        let (_cc, seq) = bd_seq(3);
        let d = Degree::new(vec![1]);
        let tuples = enumerate_tuples(&seq, 3, &d).unwrap();
        for a in &tuples {
            for b in &tuples {
                if a.source(&seq) == b.range(&seq) {
                    let ab = ProjLimPath::compose(&seq, a, b).unwrap();
                    for n in 1..=3 {
                        assert_eq!(
                            ab.component(n),
                            &seq.graph(n)
                                .compose(a.component(n), b.component(n))
                                .unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn factorisation_is_componentwise() {
        let (_cc, seq) = bd_seq(3);
        let d = Degree::new(vec![3]);
        for t in enumerate_tuples(&seq, 3, &d).unwrap() {
            for p in 0..=3u32 {
                for q in p..=3u32 {
                    let (p, q) = (Degree::new(vec![p]), Degree::new(vec![q]));
                    let mid = t.factor(&seq, &p, &q).unwrap();
                    for n in 1..=3 {
                        assert_eq!(
                            mid.component(n),
                            &seq.graph(n).factor(t.component(n), &p, &q).unwrap()
                        );
                    }
                    // the factored tuple is itself compatible
                    ProjLimPath::new(&seq, mid.components().to_vec()).unwrap();
                }
            }
        }
    }

    #[test]
    fn cylinders() {
        let (_cc, seq) = bd_seq(2);
        let d = Degree::new(vec![1]);
        let tuples = enumerate_tuples(&seq, 2, &d).unwrap();
        assert_eq!(tuples.len(), 2);
        let spec = vec![seq.graph(1).edge_path(0)];
        // both lifts of the loop extend Z(f)
        for t in &tuples {
            assert!(cylinder_contains(&spec, t));
            assert!(cylinder_contains(&t.components()[..1], t));
        }
        // degree-mismatched parts are inconsistent (empty cylinder)
        let bad = vec![seq.graph(1).edge_path(0), seq.graph(2).vertex_path(0)];
        assert!(!cylinder_spec_consistent(&seq, &bad));
    }

    #[test]
    fn range_injective_on_fixed_first_component() {
        let (_cc, seq) = bd_seq(3);
        for d in 0..3u32 {
            let d = Degree::new(vec![d]);
            let tuples = enumerate_tuples(&seq, 3, &d).unwrap();
            for a in &tuples {
                for b in &tuples {
                    if a.component(1) == b.component(1) && a.range(&seq) == b.range(&seq) {
                        assert_eq!(a, b);
                    }
                }
            }
        }
    }

    #[test]
    fn bijection_at_small_levels() {
        let cc = bd_chain(4);
        for level in 1..=4usize {
            for d in 0..=2u32 {
                let rep = profinite_skew_bijection(&cc, level, &Degree::new(vec![d])).unwrap();
                assert!(rep.bijective, "level {level} degree {d}");
                assert!(rep.range_law_holds);
                // the single-loop base has one path per degree
                assert_eq!(rep.pairs, cc.group(level).order());
            }
        }
    }
}
