//! Quotient chains of finite groups, truncated profinite elements, and
//! graph cocycles compatible with a chain.

use std::collections::BTreeMap;

use crate::error::{KgtError, Result};
use crate::group::{check_homomorphism, is_surjective, FiniteGroup, Gel};
use crate::kgraph::{KGraph, Path};

/// Groups G_1, ..., G_N with surjections q_n : G_{n+1} -> G_n. Levels are
/// 1-based throughout.
#[derive(Debug, Clone)]
pub struct QuotientChain {
    groups: Vec<FiniteGroup>,
    /// maps[n-1] sends elements of G_{n+1} to G_n.
    maps: Vec<Vec<Gel>>,
}

impl QuotientChain {
    pub fn validate(groups: Vec<FiniteGroup>, maps: Vec<Vec<Gel>>) -> Result<QuotientChain> {
        if groups.is_empty() {
            return Err(KgtError::GroupInvalid(
                "chain needs at least one group".into(),
            ));
        }
        if maps.len() + 1 != groups.len() {
            return Err(KgtError::GroupInvalid(format!(
                "{} groups need {} connecting maps, got {}",
                groups.len(),
                groups.len() - 1,
                maps.len()
            )));
        }
        for (i, map) in maps.iter().enumerate() {
            check_homomorphism(&groups[i + 1], &groups[i], map)?;
            if !is_surjective(&groups[i], map) {
                return Err(KgtError::SurjectivityFailure(i + 1));
            }
        }
        Ok(QuotientChain { groups, maps })
    }

    /// Number of levels N.
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// G_n (1-based).
    pub fn group(&self, n: usize) -> &FiniteGroup {
        &self.groups[n - 1]
    }

    /// Apply q_n once: G_{n+1} -> G_n.
    pub fn step_down(&self, n: usize, g: Gel) -> Gel {
        self.maps[n - 1][g as usize]
    }

    /// Project an element of G_from down to G_to (to <= from).
    pub fn project(&self, from: usize, to: usize, g: Gel) -> Gel {
        debug_assert!(1 <= to && to <= from && from <= self.len());
        let mut g = g;
        for n in (to..from).rev() {
            g = self.step_down(n, g);
        }
        g
    }
}

/// A compatible tuple (g_1, ..., g_level) with q_n(g_{n+1}) = g_n: an element
/// of the inverse limit truncated at `level`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProfiniteElement {
    components: Vec<Gel>,
}

impl ProfiniteElement {
    pub fn new(chain: &QuotientChain, components: Vec<Gel>) -> Result<ProfiniteElement> {
        if components.is_empty() || components.len() > chain.len() {
            return Err(KgtError::LevelOutOfRange(components.len(), chain.len()));
        }
        for n in 1..components.len() {
            if chain.step_down(n, components[n]) != components[n - 1] {
                return Err(KgtError::IncompatibleComponents(n));
            }
        }
        Ok(ProfiniteElement { components })
    }

    pub fn identity(chain: &QuotientChain, level: usize) -> ProfiniteElement {
        ProfiniteElement {
            components: (1..=level).map(|n| chain.group(n).identity()).collect(),
        }
    }

    /// The compatible tuple obtained by projecting a single top-level element
    /// downwards. Every compatible tuple arises this way.
    pub fn from_top(chain: &QuotientChain, level: usize, top: Gel) -> ProfiniteElement {
        let components = (1..=level).map(|n| chain.project(level, n, top)).collect();
        ProfiniteElement { components }
    }

    /// All compatible tuples at `level`, one per element of G_level.
    pub fn all_at_level(chain: &QuotientChain, level: usize) -> Vec<ProfiniteElement> {
        chain
            .group(level)
            .elements()
            .map(|g| Self::from_top(chain, level, g))
            .collect()
    }

    pub fn level(&self) -> usize {
        self.components.len()
    }

    /// Q_n: the component in G_n (1-based).
    pub fn component(&self, n: usize) -> Gel {
        self.components[n - 1]
    }

    pub fn components(&self) -> &[Gel] {
        &self.components
    }

    pub fn multiply(
        &self,
        chain: &QuotientChain,
        other: &ProfiniteElement,
    ) -> Result<ProfiniteElement> {
        if self.level() != other.level() {
            return Err(KgtError::LevelMismatch(self.level(), other.level()));
        }
        Ok(ProfiniteElement {
            components: (1..=self.level())
                .map(|n| chain.group(n).mul(self.component(n), other.component(n)))
                .collect(),
        })
    }

    pub fn truncate(&self, level: usize) -> Result<ProfiniteElement> {
        if level == 0 || level > self.level() {
            return Err(KgtError::LevelOutOfRange(level, self.level()));
        }
        Ok(ProfiniteElement {
            components: self.components[..level].to_vec(),
        })
    }
}

/// An edge labeling by group elements that respects every factorisation
/// square, hence extends to a functor on all paths.
#[derive(Debug, Clone)]
pub struct Cocycle {
    pub group: FiniteGroup,
    labels: Vec<Gel>,
}

impl Cocycle {
    /// Validate labels (indexed by the graph's edges) against every square.
    pub fn validate(graph: &KGraph, group: FiniteGroup, labels: Vec<Gel>) -> Result<Cocycle> {
        if labels.len() != graph.num_edges() {
            // report the first edge without a label
            let missing = labels.len().min(graph.num_edges());
            return Err(KgtError::MissingLabel(
                graph.edge(missing as u32).id.clone(),
            ));
        }
        if labels.iter().any(|&g| (g as usize) >= group.order()) {
            return Err(KgtError::GroupInvalid("cocycle label out of range".into()));
        }
        let c = Cocycle { group, labels };
        for (&(f, g), &(gp, fp)) in graph.squares() {
            let lhs = c.group.mul(c.labels[f as usize], c.labels[g as usize]);
            let rhs = c.group.mul(c.labels[gp as usize], c.labels[fp as usize]);
            if lhs != rhs {
                return Err(KgtError::SquareIncompatible(
                    graph.edge(f).id.clone(),
                    graph.edge(g).id.clone(),
                    graph.edge(gp).id.clone(),
                    graph.edge(fp).id.clone(),
                ));
            }
        }
        Ok(c)
    }

    /// Build from an edge-id map, requiring a label for every edge.
    pub fn from_names(
        graph: &KGraph,
        group: FiniteGroup,
        by_id: &BTreeMap<String, String>,
    ) -> Result<Cocycle> {
        let mut labels = Vec::with_capacity(graph.num_edges());
        for e in 0..graph.num_edges() as u32 {
            let id = &graph.edge(e).id;
            let name = by_id
                .get(id)
                .ok_or_else(|| KgtError::MissingLabel(id.clone()))?;
            let gel = group
                .element(name)
                .ok_or_else(|| KgtError::GroupInvalid(format!("unknown element `{name}`")))?;
            labels.push(gel);
        }
        Cocycle::validate(graph, group, labels)
    }

    pub fn of_edge(&self, e: u32) -> Gel {
        self.labels[e as usize]
    }

    /// c(lambda): the ordered product of the edge labels. Square
    /// compatibility makes this independent of the factorisation used;
    /// vertices map to the identity.
    pub fn of_path(&self, path: &Path) -> Gel {
        path.edge_indices()
            .iter()
            .fold(self.group.identity(), |acc, &e| {
                self.group.mul(acc, self.labels[e as usize])
            })
    }
}

/// A quotient chain together with one cocycle per level on a common graph,
/// compatible edgewise with the connecting maps.
#[derive(Debug, Clone)]
pub struct CocycleChain {
    graph: KGraph,
    chain: QuotientChain,
    cocycles: Vec<Cocycle>,
}

impl CocycleChain {
    pub fn validate(
        graph: KGraph,
        chain: QuotientChain,
        cocycles: Vec<Cocycle>,
    ) -> Result<CocycleChain> {
        if cocycles.len() != chain.len() {
            return Err(KgtError::GroupInvalid(format!(
                "{} cocycles for a chain of {} levels",
                cocycles.len(),
                chain.len()
            )));
        }
        for (n, c) in cocycles.iter().enumerate() {
            if c.labels.len() != graph.num_edges() {
                return Err(KgtError::MissingLabel(format!("level {}", n + 1)));
            }
            if c.group != *chain.group(n + 1) {
                return Err(KgtError::GroupInvalid(format!(
                    "cocycle {} labels a different group than chain level {}",
                    n + 1,
                    n + 1
                )));
            }
        }
        for n in 1..chain.len() {
            for e in 0..graph.num_edges() as u32 {
                let projected = chain.step_down(n, cocycles[n].of_edge(e));
                if projected != cocycles[n - 1].of_edge(e) {
                    return Err(KgtError::ChainIncompatible(n, graph.edge(e).id.clone()));
                }
            }
        }
        Ok(CocycleChain {
            graph,
            chain,
            cocycles,
        })
    }

    /// Assemble without any validation. Intended for fault-injection tests
    /// and for callers that have already validated the parts.
    pub fn new_unchecked(
        graph: KGraph,
        chain: QuotientChain,
        cocycles: Vec<Cocycle>,
    ) -> CocycleChain {
        CocycleChain {
            graph,
            chain,
            cocycles,
        }
    }

    pub fn graph(&self) -> &KGraph {
        &self.graph
    }

    pub fn chain(&self) -> &QuotientChain {
        &self.chain
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// The level-n cocycle c_n (1-based).
    pub fn cocycle(&self, n: usize) -> &Cocycle {
        &self.cocycles[n - 1]
    }

    pub fn group(&self, n: usize) -> &FiniteGroup {
        self.chain.group(n)
    }

    /// The compatible tuple (c_1(lambda), ..., c_N(lambda)).
    pub fn path_labels(&self, path: &Path) -> ProfiniteElement {
        ProfiniteElement {
            components: (1..=self.len())
                .map(|n| self.cocycle(n).of_path(path))
                .collect(),
        }
    }

    /// The chain restricted to its first `levels` levels.
    pub fn truncate(&self, levels: usize) -> Result<CocycleChain> {
        if levels == 0 || levels > self.len() {
            return Err(KgtError::LevelOutOfRange(levels, self.len()));
        }
        Ok(CocycleChain {
            graph: self.graph.clone(),
            chain: QuotientChain {
                groups: self.chain.groups[..levels].to_vec(),
                maps: self.chain.maps[..levels - 1].to_vec(),
            },
            cocycles: self.cocycles[..levels].to_vec(),
        })
    }
}

/// The odometer tower data on the single-loop graph: G_n = Z/2^{n-1},
/// reduction maps, and the loop labeled by 1 at every level.
pub fn bd_chain(levels: usize) -> CocycleChain {
    assert!(levels >= 1, "need at least one level");
    let graph = crate::presets::b1();
    let groups: Vec<FiniteGroup> = (1..=levels)
        .map(|n| FiniteGroup::cyclic(1 << (n - 1)))
        .collect();
    let maps: Vec<Vec<Gel>> = (1..levels)
        .map(|n| {
            let small = 1u32 << (n - 1);
            (0..(1u32 << n)).map(|m| (m % small) as Gel).collect()
        })
        .collect();
    let chain = QuotientChain::validate(groups.clone(), maps).expect("odometer chain is valid");
    let cocycles = groups
        .iter()
        .map(|grp| {
            let one = if grp.order() == 1 { 0 } else { 1 };
            Cocycle::validate(&graph, grp.clone(), vec![one]).expect("loop label is a cocycle")
        })
        .collect();
    CocycleChain::validate(graph, chain, cocycles).expect("odometer chain is compatible")
}
