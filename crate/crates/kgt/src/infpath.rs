//! Eventually periodic infinite paths, represented as a finite head followed
//! by a cycle repeated forever. The cycle degree must be strictly positive in
//! every coordinate so that the path has a vertex at every lattice point.

use serde::Serialize;

use crate::degree::Degree;
use crate::error::{KgtError, Result};
use crate::kgraph::{KGraph, Path, PathDesc};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InfinitePathSpec {
    head: Path,
    cycle: Path,
}

#[derive(Debug, Clone, Serialize)]
pub struct InfinitePathSpecDesc {
    pub head: PathDesc,
    pub cycle: PathDesc,
}

impl InfinitePathSpec {
    pub fn new(g: &KGraph, head: Path, cycle: Path) -> Result<InfinitePathSpec> {
        if cycle.range_vertex() != cycle.source_vertex() {
            return Err(KgtError::BadInfinitePathSpec(
                "cycle does not close up".into(),
            ));
        }
        if cycle.range_vertex() != head.source_vertex() {
            return Err(KgtError::BadInfinitePathSpec(
                "cycle does not start at the head's source".into(),
            ));
        }
        if cycle.degree().coords().contains(&0) {
            return Err(KgtError::DegenerateCycle(cycle.degree().to_string()));
        }
        let _ = g;
        Ok(InfinitePathSpec { head, cycle })
    }

    /// The periodic path at a single cycle (empty head).
    pub fn periodic(g: &KGraph, cycle: Path) -> Result<InfinitePathSpec> {
        let head = g.vertex_path(cycle.range_vertex());
        InfinitePathSpec::new(g, head, cycle)
    }

    /// Walk diagonal blocks from `w` until a vertex repeats, splitting the
    /// walk into head and cycle. Needs every vertex to receive an edge of
    /// every color.
    pub fn pump_from(g: &KGraph, w: u32) -> Result<InfinitePathSpec> {
        g.require_no_sources()?;
        let step = Degree::ones(g.rank());
        let mut at = w;
        let mut visited: Vec<u32> = vec![w];
        let mut segments: Vec<Path> = Vec::new();
        loop {
            let block = g
                .paths_of_degree(&step, Some(at))
                .into_iter()
                .next()
                .ok_or_else(|| KgtError::Internal("no sources yet no diagonal block".into()))?;
            let next = block.source_vertex();
            segments.push(block);
            if let Some(pos) = visited.iter().position(|&v| v == next) {
                let mut head = g.vertex_path(w);
                for seg in &segments[..pos] {
                    head = g.compose(&head, seg)?;
                }
                let mut cycle = g.vertex_path(next);
                for seg in &segments[pos..] {
                    cycle = g.compose(&cycle, seg)?;
                }
                // the cycle assembled from the first repeat starts at
                // visited[pos] and returns there
                debug_assert_eq!(head.source_vertex(), cycle.range_vertex());
                return InfinitePathSpec::new(g, head, cycle);
            }
            visited.push(next);
            at = next;
        }
    }

    pub fn range(&self) -> u32 {
        self.head.range_vertex()
    }

    pub fn head(&self) -> &Path {
        &self.head
    }

    pub fn cycle(&self) -> &Path {
        &self.cycle
    }

    /// A finite expansion whose degree dominates `target`.
    pub fn expand_to(&self, g: &KGraph, target: &Degree) -> Result<Path> {
        let reps = (1..=g.rank())
            .map(|c| {
                let need = target.get(c).saturating_sub(self.head.degree().get(c));
                let per = self.cycle.degree().get(c);
                need.div_ceil(per)
            })
            .max()
            .unwrap_or(0);
        let mut out = self.head.clone();
        for _ in 0..reps {
            out = g.compose(&out, &self.cycle)?;
        }
        Ok(out)
    }

    /// The prefix x(0, n).
    pub fn prefix(&self, g: &KGraph, n: &Degree) -> Result<Path> {
        let big = self.expand_to(g, n)?;
        g.factor(&big, &Degree::zero(g.rank()), n)
    }

    /// The segment x(p, q).
    pub fn segment(&self, g: &KGraph, p: &Degree, q: &Degree) -> Result<Path> {
        let big = self.expand_to(g, q)?;
        g.factor(&big, p, q)
    }

    /// The vertex x(n).
    pub fn vertex_at(&self, g: &KGraph, n: &Degree) -> Result<u32> {
        Ok(self.segment(g, n, n)?.range_vertex())
    }

    /// Vertices at every lattice point up to `bound`, computed by peeling
    /// prefixes incrementally. Pairs are emitted in grid order.
    pub fn vertices_up_to(&self, g: &KGraph, bound: &Degree) -> Result<Vec<(Degree, u32)>> {
        let big = self.expand_to(g, bound)?;
        let mut suffixes: std::collections::HashMap<Degree, Path> = Default::default();
        suffixes.insert(Degree::zero(g.rank()), big);
        let mut out = Vec::new();
        for n in Degree::grid(bound) {
            if !suffixes.contains_key(&n) {
                // peel one edge along the first nonzero coordinate
                let c = (1..=g.rank())
                    .find(|&c| n.get(c) > 0)
                    .expect("nonzero point");
                let prev = n
                    .sub(&Degree::unit(g.rank(), c))
                    .expect("predecessor exists");
                let prev_suffix = &suffixes[&prev];
                let d = prev_suffix.degree().clone();
                let peeled = g.factor(prev_suffix, &Degree::unit(g.rank(), c), &d)?;
                suffixes.insert(n.clone(), peeled);
            }
            out.push((n.clone(), suffixes[&n].range_vertex()));
        }
        Ok(out)
    }

    pub fn describe(&self, g: &KGraph) -> InfinitePathSpecDesc {
        InfinitePathSpecDesc {
            head: g.describe(&self.head),
            cycle: g.describe(&self.cycle),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn loop_expansion() {
        let g = presets::b1();
        let spec = InfinitePathSpec::periodic(&g, g.edge_path(0)).unwrap();
        let p = spec.prefix(&g, &Degree::new(vec![5])).unwrap();
        assert_eq!(p.degree(), &Degree::new(vec![5]));
        assert_eq!(spec.vertex_at(&g, &Degree::new(vec![9])).unwrap(), 0);
    }

    #[test]
    fn cycle_must_be_positive() {
        let g = presets::one_square();
        let a = g.edge_path(g.edge_index("a").unwrap());
        // degree (1,0) cycle cannot fill the plane
        assert!(matches!(
            InfinitePathSpec::periodic(&g, a),
            Err(KgtError::DegenerateCycle(_))
        ));
    }

    #[test]
    fn pump_finds_a_cycle() {
        let g = presets::lasso();
        let u = g.vertex_index("u").unwrap();
        let spec = InfinitePathSpec::pump_from(&g, u).unwrap();
        assert_eq!(spec.range(), u);
        // head walks onto the loop vertex, the cycle is the loop
        let w = g.vertex_index("w").unwrap();
        assert_eq!(spec.cycle().range_vertex(), w);
        assert_eq!(spec.vertex_at(&g, &Degree::new(vec![3])).unwrap(), w);
    }

    #[test]
    fn vertices_grid_matches_pointwise() {
        let g = presets::product(&presets::cycle(2), &presets::cycle(3));
        let v = 0u32;
        let spec = InfinitePathSpec::pump_from(&g, v).unwrap();
        let bound = Degree::new(vec![3, 3]);
        for (n, vertex) in spec.vertices_up_to(&g, &bound).unwrap() {
            assert_eq!(vertex, spec.vertex_at(&g, &n).unwrap(), "at {n}");
        }
    }

    #[test]
    fn segments_respect_shifts() {
        let g = presets::two_loop();
        let a = g.edge_path(0);
        let b = g.edge_path(1);
        let head = g.compose(&a, &b).unwrap();
        let spec = InfinitePathSpec::new(&g, head, a.clone()).unwrap();
        // x = a b a a a ... ; x(2, 3) is the third letter
        let seg = spec
            .segment(&g, &Degree::new(vec![2]), &Degree::new(vec![3]))
            .unwrap();
        assert_eq!(seg, a);
    }
}
