//! The JSON spec-file schema shared by the CLI and the library: a graph
//! section plus optional groups/chain/cocycles sections and default bounds.
//! Unknown fields are rejected everywhere.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chain::{Cocycle, CocycleChain, QuotientChain};
use crate::error::{KgtError, Result};
use crate::group::{FiniteGroup, Gel};
use crate::kgraph::{GraphConfig, KGraph, RawEdge, RawGraph};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub graph: GraphSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<GroupSpec>>,
    /// Surjections G_{n+1} -> G_n as element-name maps, one per consecutive
    /// pair of groups.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<BTreeMap<String, String>>>,
    /// Edge-id to element-name labelings, one per group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycles: Option<Vec<BTreeMap<String, String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSection {
    pub k: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    pub squares: Vec<[String; 4]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: String,
    /// 1-based color.
    pub color: usize,
    /// Source vertex s(e).
    pub src: String,
    /// Range vertex r(e): the edge runs src -> dst.
    pub dst: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Cyclic {
        cyclic: usize,
    },
    Table {
        elements: Vec<String>,
        /// table[i][j] is the index of elements[i] * elements[j].
        table: Vec<Vec<Gel>>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsSection {
    /// Window depth for bounded tower evidence.
    pub depth: u32,
    /// Diagonal bound for the periodicity scan.
    pub degree: u32,
    /// Window bound for the segment separation form.
    pub segment: u32,
    pub state_cap: usize,
}

impl Default for BoundsSection {
    fn default() -> Self {
        BoundsSection {
            depth: 3,
            degree: 2,
            segment: 2,
            state_cap: 100_000,
        }
    }
}

impl SpecFile {
    pub fn parse(text: &str) -> std::result::Result<SpecFile, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("spec serializes");
        s.push('\n');
        s
    }

    pub fn raw_graph(&self) -> RawGraph {
        RawGraph {
            k: self.graph.k,
            vertices: self.graph.vertices.clone(),
            edges: self
                .graph
                .edges
                .iter()
                .map(|e| RawEdge {
                    id: e.id.clone(),
                    color: e.color,
                    src: e.src.clone(),
                    dst: e.dst.clone(),
                })
                .collect(),
            squares: self.graph.squares.clone(),
        }
    }

    pub fn build_graph(&self, config: &GraphConfig) -> Result<KGraph> {
        KGraph::validate_with(&self.raw_graph(), config)
    }

    /// Build the chain sections when present. `group_cap` bounds group
    /// orders.
    pub fn build_chain(&self, graph: &KGraph, group_cap: usize) -> Result<Option<CocycleChain>> {
        let (Some(groups), Some(cocycles)) = (&self.groups, &self.cocycles) else {
            return Ok(None);
        };
        let built: Vec<FiniteGroup> = groups
            .iter()
            .map(|g| build_group(g, group_cap))
            .collect::<Result<_>>()?;
        let maps_spec = self.chain.clone().unwrap_or_default();
        if maps_spec.len() + 1 != built.len() {
            return Err(KgtError::GroupInvalid(format!(
                "{} groups need {} chain maps, got {}",
                built.len(),
                built.len() - 1,
                maps_spec.len()
            )));
        }
        let mut maps: Vec<Vec<Gel>> = Vec::new();
        for (i, spec) in maps_spec.iter().enumerate() {
            let dom = &built[i + 1];
            let cod = &built[i];
            let mut table = vec![Gel::MAX; dom.order()];
            for (from, to) in spec {
                let a = dom
                    .element(from)
                    .ok_or_else(|| KgtError::GroupInvalid(format!("unknown element `{from}`")))?;
                let b = cod
                    .element(to)
                    .ok_or_else(|| KgtError::GroupInvalid(format!("unknown element `{to}`")))?;
                table[a as usize] = b;
            }
            if table.contains(&Gel::MAX) {
                return Err(KgtError::NotAHomomorphism(format!(
                    "chain map {} does not cover its domain",
                    i + 1
                )));
            }
            maps.push(table);
        }
        let chain = QuotientChain::validate(built.clone(), maps)?;
        if cocycles.len() != built.len() {
            return Err(KgtError::GroupInvalid(format!(
                "{} cocycles for {} groups",
                cocycles.len(),
                built.len()
            )));
        }
        let cocycles = cocycles
            .iter()
            .zip(&built)
            .map(|(labels, grp)| Cocycle::from_names(graph, grp.clone(), labels))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(CocycleChain::validate(
            graph.clone(),
            chain,
            cocycles,
        )?))
    }

    /// Reassemble a spec file from built objects.
    pub fn from_parts(
        graph: &KGraph,
        cc: Option<&CocycleChain>,
        bounds: Option<BoundsSection>,
    ) -> SpecFile {
        let raw = graph.to_raw();
        let graph_section = GraphSection {
            k: raw.k,
            vertices: raw.vertices,
            edges: raw
                .edges
                .into_iter()
                .map(|e| EdgeSpec {
                    id: e.id,
                    color: e.color,
                    src: e.src,
                    dst: e.dst,
                })
                .collect(),
            squares: raw.squares,
        };
        let (groups, chain, cocycles) = match cc {
            None => (None, None, None),
            Some(cc) => {
                let groups: Vec<GroupSpec> = (1..=cc.len())
                    .map(|n| describe_group(cc.group(n)))
                    .collect();
                let chain: Vec<BTreeMap<String, String>> = (1..cc.len())
                    .map(|n| {
                        cc.group(n + 1)
                            .elements()
                            .map(|g| {
                                (
                                    cc.group(n + 1).name(g).to_string(),
                                    cc.group(n).name(cc.chain().step_down(n, g)).to_string(),
                                )
                            })
                            .collect()
                    })
                    .collect();
                let cocycles: Vec<BTreeMap<String, String>> = (1..=cc.len())
                    .map(|n| {
                        (0..graph.num_edges() as u32)
                            .map(|e| {
                                (
                                    graph.edge(e).id.clone(),
                                    cc.group(n).name(cc.cocycle(n).of_edge(e)).to_string(),
                                )
                            })
                            .collect()
                    })
                    .collect();
                (Some(groups), Some(chain), Some(cocycles))
            }
        };
        SpecFile {
            graph: graph_section,
            groups,
            chain,
            cocycles,
            bounds,
        }
    }
}

fn build_group(spec: &GroupSpec, cap: usize) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Cyclic { cyclic } => {
            if *cyclic == 0 {
                return Err(KgtError::GroupInvalid("cyclic group of order 0".into()));
            }
            if *cyclic > cap {
                return Err(KgtError::GroupTooLarge(*cyclic, cap));
            }
            Ok(FiniteGroup::cyclic(*cyclic))
        }
        GroupSpec::Table { elements, table } => {
            FiniteGroup::from_table_with_cap(elements.clone(), table.clone(), cap)
        }
    }
}

fn describe_group(g: &FiniteGroup) -> GroupSpec {
    let m = g.order();
    let is_cyclic_named = (0..m).all(|i| g.name(i as Gel) == i.to_string())
        && (0..m).all(|i| (0..m).all(|j| g.mul(i as Gel, j as Gel) == ((i + j) % m) as Gel));
    if is_cyclic_named {
        GroupSpec::Cyclic { cyclic: m }
    } else {
        GroupSpec::Table {
            elements: (0..m).map(|i| g.name(i as Gel).to_string()).collect(),
            table: (0..m)
                .map(|i| (0..m).map(|j| g.mul(i as Gel, j as Gel)).collect())
                .collect(),
        }
    }
}

/// Spec for the single-loop graph with the odometer chain.
pub fn bd_spec(levels: usize) -> SpecFile {
    let cc = crate::chain::bd_chain(levels);
    SpecFile::from_parts(cc.graph(), Some(&cc), Some(BoundsSection::default()))
}

/// Spec for the simple cycle with a trivial one-level chain.
pub fn cycle_spec(p: usize) -> SpecFile {
    let g = crate::presets::cycle(p);
    let cc = crate::presets::trivial_chain(&g, 1);
    SpecFile::from_parts(&g, Some(&cc), Some(BoundsSection::default()))
}

/// Spec for the two-loop graph with the separating mod-2 chain.
pub fn twoloop_spec() -> SpecFile {
    let cc = crate::presets::two_loop_chain();
    SpecFile::from_parts(cc.graph(), Some(&cc), Some(BoundsSection::default()))
}
