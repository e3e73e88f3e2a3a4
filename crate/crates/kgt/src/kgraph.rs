//! Finite presentations of higher-rank graphs and their path calculus.
//!
//! A rank-k graph is presented by a colored 1-skeleton (k disjoint sets of
//! edges between a common vertex set) together with a complete collection of
//! factorisation squares: for every composable pair `f g` with `f` of color i,
//! `g` of color j and i < j, the presentation names the unique pair `g' f'`
//! with `f g = g' f'`. Paths are stored in color-normal form (all color-1
//! edges first, then color-2, and so on), and the squares act as rewrite
//! rules between the two orders.
//!
//! Edges compose like functions: `f g` requires `s(f) = r(g)`, and a word
//! `[e_0, e_1, ...]` lists edges from the range end inward. In the JSON
//! presentation an edge `{src, dst}` runs from its source `src` to its range
//! `dst`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::degree::Degree;
use crate::error::{KgtError, Result};

/// Validation limits. `max_rank` bounds the rank accepted from raw input;
/// `exhaustive_bound` is the diagonal bound for the unique-factorisation sweep.
#[derive(Debug, Clone)]
pub struct GraphConfig {
    pub max_rank: usize,
    pub exhaustive_bound: u32,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig {
            max_rank: 3,
            exhaustive_bound: 2,
        }
    }
}

/// Raw presentation as read from a spec file, prior to validation.
#[derive(Debug, Clone, Default)]
pub struct RawGraph {
    pub k: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<RawEdge>,
    /// Quadruples `[f, g, g', f']` meaning `f g = g' f'`, with
    /// `color(f) = color(f') < color(g) = color(g')`.
    pub squares: Vec<[String; 4]>,
}

#[derive(Debug, Clone)]
pub struct RawEdge {
    pub id: String,
    pub color: usize,
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    /// 1-based color; the edge has degree e_color.
    pub color: usize,
    src: u32,
    dst: u32,
}

impl Edge {
    /// Source vertex s(e).
    pub fn s(&self) -> u32 {
        self.src
    }

    /// Range vertex r(e).
    pub fn r(&self) -> u32 {
        self.dst
    }
}

/// A path in color-normal form. Degree-0 paths are vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    range: u32,
    source: u32,
    degree: Degree,
    edges: Vec<u32>,
}

impl Path {
    pub fn range_vertex(&self) -> u32 {
        self.range
    }

    pub fn source_vertex(&self) -> u32 {
        self.source
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn edge_indices(&self) -> &[u32] {
        &self.edges
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Serializable description of a path by vertex/edge ids.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct PathDesc {
    pub range: String,
    pub source: String,
    pub degree: Degree,
    pub edges: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructuralReport {
    pub no_sources: bool,
    /// Pairs (vertex, color) with no color-`color` edge ranged there.
    pub missing_receivers: Vec<(String, usize)>,
    pub connected: bool,
}

/// A validated rank-k graph with finitely many vertices and edges.
#[derive(Debug, Clone)]
pub struct KGraph {
    k: usize,
    vertex_ids: Vec<String>,
    vertex_idx: BTreeMap<String, u32>,
    edges: Vec<Edge>,
    edge_idx: BTreeMap<String, u32>,
    by_color: Vec<Vec<u32>>,
    /// in_at[c-1][v]: edges e with r(e) = v, i.e. v Lambda^{e_c}.
    in_at: Vec<Vec<Vec<u32>>>,
    /// out_at[c-1][v]: edges e with s(e) = v, i.e. Lambda^{e_c} v.
    out_at: Vec<Vec<Vec<u32>>>,
    sq_fwd: BTreeMap<(u32, u32), (u32, u32)>,
    sq_bwd: BTreeMap<(u32, u32), (u32, u32)>,
}

#[derive(Debug, Clone)]
struct Word {
    range: u32,
    edges: Vec<u32>,
}

impl KGraph {
    pub fn validate(raw: &RawGraph) -> Result<KGraph> {
        Self::validate_with(raw, &GraphConfig::default())
    }

    pub fn validate_with(raw: &RawGraph, config: &GraphConfig) -> Result<KGraph> {
        if raw.k < 1 || raw.k > config.max_rank {
            return Err(KgtError::UnsupportedRank(raw.k, config.max_rank));
        }
        if raw.vertices.is_empty() {
            return Err(KgtError::EmptyVertexSet);
        }
        let mut vertex_idx = BTreeMap::new();
        for (i, v) in raw.vertices.iter().enumerate() {
            if vertex_idx.insert(v.clone(), i as u32).is_some() {
                return Err(KgtError::DuplicateVertexId(v.clone()));
            }
        }
        let mut edges = Vec::with_capacity(raw.edges.len());
        let mut edge_idx = BTreeMap::new();
        for e in &raw.edges {
            if e.color < 1 || e.color > raw.k {
                return Err(KgtError::BadEdgeColor(e.id.clone(), e.color, raw.k));
            }
            let src = *vertex_idx
                .get(&e.src)
                .ok_or_else(|| KgtError::UnknownVertex(e.src.clone(), e.id.clone()))?;
            let dst = *vertex_idx
                .get(&e.dst)
                .ok_or_else(|| KgtError::UnknownVertex(e.dst.clone(), e.id.clone()))?;
            let idx = edges.len() as u32;
            if edge_idx.insert(e.id.clone(), idx).is_some() {
                return Err(KgtError::DuplicateEdgeId(e.id.clone()));
            }
            edges.push(Edge {
                id: e.id.clone(),
                color: e.color,
                src,
                dst,
            });
        }

        let mut g = KGraph {
            k: raw.k,
            vertex_ids: raw.vertices.clone(),
            vertex_idx,
            edges,
            edge_idx,
            by_color: vec![Vec::new(); raw.k],
            in_at: vec![vec![Vec::new(); raw.vertices.len()]; raw.k],
            out_at: vec![vec![Vec::new(); raw.vertices.len()]; raw.k],
            sq_fwd: BTreeMap::new(),
            sq_bwd: BTreeMap::new(),
        };
        for (i, e) in g.edges.iter().enumerate() {
            g.by_color[e.color - 1].push(i as u32);
            g.in_at[e.color - 1][e.dst as usize].push(i as u32);
            g.out_at[e.color - 1][e.src as usize].push(i as u32);
        }

        g.install_squares(raw)?;
        g.check_square_completeness()?;
        if g.k >= 3 {
            g.check_cubes()?;
        }
        g.check_unique_factorisation(config.exhaustive_bound)?;
        Ok(g)
    }

    fn install_squares(&mut self, raw: &RawGraph) -> Result<()> {
        for sq in &raw.squares {
            let [f, gg, gp, fp] = sq;
            let lookup = |id: &String| {
                self.edge_idx
                    .get(id)
                    .copied()
                    .ok_or_else(|| KgtError::UnknownEdge(id.clone()))
            };
            let (f, gg, gp, fp) = (lookup(f)?, lookup(gg)?, lookup(gp)?, lookup(fp)?);
            let mismatch = || {
                KgtError::EndpointMismatch(
                    self.edges[f as usize].id.clone(),
                    self.edges[gg as usize].id.clone(),
                    self.edges[gp as usize].id.clone(),
                    self.edges[fp as usize].id.clone(),
                )
            };
            let (ef, eg, egp, efp) = (
                &self.edges[f as usize],
                &self.edges[gg as usize],
                &self.edges[gp as usize],
                &self.edges[fp as usize],
            );
            if ef.color >= eg.color || efp.color != ef.color || egp.color != eg.color {
                return Err(mismatch());
            }
            // f g and g' f' must both compose, with common range and source.
            if ef.src != eg.dst || egp.src != efp.dst || ef.dst != egp.dst || eg.src != efp.src {
                return Err(mismatch());
            }
            if self.sq_fwd.insert((f, gg), (gp, fp)).is_some() {
                return Err(KgtError::NonBijectiveSquares(format!(
                    "pair ({}, {}) has two squares",
                    ef.id, eg.id
                )));
            }
            if self.sq_bwd.insert((gp, fp), (f, gg)).is_some() {
                return Err(KgtError::NonBijectiveSquares(format!(
                    "pair ({}, {}) is the flip of two squares",
                    egp.id, efp.id
                )));
            }
        }
        Ok(())
    }

    fn check_square_completeness(&self) -> Result<()> {
        for i in 1..=self.k {
            for j in (i + 1)..=self.k {
                for &f in &self.by_color[i - 1] {
                    for &gg in &self.by_color[j - 1] {
                        if self.edges[f as usize].src == self.edges[gg as usize].dst
                            && !self.sq_fwd.contains_key(&(f, gg))
                        {
                            return Err(KgtError::MissingSquare(
                                self.edges[f as usize].id.clone(),
                                self.edges[gg as usize].id.clone(),
                            ));
                        }
                        // flipped order: g f with g of color j, f of color i
                        if self.edges[gg as usize].src == self.edges[f as usize].dst
                            && !self.sq_bwd.contains_key(&(gg, f))
                        {
                            return Err(KgtError::NonBijectiveSquares(format!(
                                "composable pair ({}, {}) is not the flip of any square",
                                self.edges[gg as usize].id, self.edges[f as usize].id
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_cubes(&self) -> Result<()> {
        let flip = |a: u32, b: u32| self.sq_fwd[&(a, b)];
        for i in 1..=self.k {
            for j in (i + 1)..=self.k {
                for l in (j + 1)..=self.k {
                    for &f in &self.by_color[i - 1] {
                        for &gg in &self.by_color[j - 1] {
                            if self.edges[f as usize].src != self.edges[gg as usize].dst {
                                continue;
                            }
                            for &h in &self.by_color[l - 1] {
                                if self.edges[gg as usize].src != self.edges[h as usize].dst {
                                    continue;
                                }
                                // Route A: flip (g,h), then (f,h.), then (f.,g.)
                                let (h1, g1) = flip(gg, h);
                                let (h2, f1) = flip(f, h1);
                                let (g2, f2) = flip(f1, g1);
                                let a = [h2, g2, f2];
                                // Route B: flip (f,g), then (f.,h), then (g.,h.)
                                let (g3, f3) = flip(f, gg);
                                let (h3, f4) = flip(f3, h);
                                let (h4, g4) = flip(g3, h3);
                                let b = [h4, g4, f4];
                                if a != b {
                                    return Err(KgtError::CubeViolation(
                                        self.edges[f as usize].id.clone(),
                                        self.edges[gg as usize].id.clone(),
                                        self.edges[h as usize].id.clone(),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Exhaustively verify unique factorisation for all paths of degree at
    /// most `(b, ..., b)` and all splits. The squares presentation should
    /// make this automatic; the sweep guards against presentation bugs.
    fn check_unique_factorisation(&self, b: u32) -> Result<()> {
        let bound = Degree::diagonal(self.k, b);
        for d in Degree::grid(&bound) {
            if d.is_zero() {
                continue;
            }
            let all: Vec<Path> = self.paths_of_degree(&d, None);
            for m in Degree::grid(&d) {
                if m.is_zero() || m == d {
                    continue;
                }
                let n = d.sub(&m).expect("m <= d");
                let mut counts: HashMap<&Path, u32> = all.iter().map(|p| (p, 0)).collect();
                for mu in self.paths_of_degree(&m, None) {
                    for nu in self.paths_of_degree(&n, Some(mu.source)) {
                        let prod = self.compose(&mu, &nu).expect("composable by choice");
                        match counts.get_mut(&prod) {
                            Some(c) => *c += 1,
                            None => {
                                return Err(KgtError::FactorisationViolation(
                                    d.to_string(),
                                    m.to_string(),
                                ))
                            }
                        }
                    }
                }
                if counts.values().any(|&c| c != 1) {
                    return Err(KgtError::FactorisationViolation(
                        d.to_string(),
                        m.to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, v: u32) -> &str {
        &self.vertex_ids[v as usize]
    }

    pub fn vertex_index(&self, id: &str) -> Option<u32> {
        self.vertex_idx.get(id).copied()
    }

    pub fn edge(&self, e: u32) -> &Edge {
        &self.edges[e as usize]
    }

    pub fn edge_index(&self, id: &str) -> Option<u32> {
        self.edge_idx.get(id).copied()
    }

    pub fn edges_of_color(&self, color: usize) -> &[u32] {
        &self.by_color[color - 1]
    }

    /// v Lambda^{e_color}: edges ranged at `v`.
    pub fn edges_ranged_at(&self, v: u32, color: usize) -> &[u32] {
        &self.in_at[color - 1][v as usize]
    }

    /// Lambda^{e_color} v: edges sourced at `v`.
    pub fn edges_sourced_at(&self, v: u32, color: usize) -> &[u32] {
        &self.out_at[color - 1][v as usize]
    }

    /// The square `(f, g) -> (g', f')` with `f g = g' f'`, for
    /// `color(f) < color(g)`.
    pub fn square(&self, f: u32, g: u32) -> Option<(u32, u32)> {
        self.sq_fwd.get(&(f, g)).copied()
    }

    pub fn squares(&self) -> impl Iterator<Item = (&(u32, u32), &(u32, u32))> {
        self.sq_fwd.iter()
    }

    /// The identity path at `v`.
    pub fn vertex_path(&self, v: u32) -> Path {
        Path {
            range: v,
            source: v,
            degree: Degree::zero(self.k),
            edges: Vec::new(),
        }
    }

    /// The length-one path consisting of a single edge.
    pub fn edge_path(&self, e: u32) -> Path {
        let edge = &self.edges[e as usize];
        Path {
            range: edge.dst,
            source: edge.src,
            degree: Degree::unit(self.k, edge.color),
            edges: vec![e],
        }
    }

    fn word_degree(&self, edges: &[u32]) -> Degree {
        let mut coords = vec![0u32; self.k];
        for &e in edges {
            coords[self.edges[e as usize].color - 1] += 1;
        }
        Degree::new(coords)
    }

    fn path_from_word(&self, range: u32, edges: Vec<u32>) -> Path {
        let source = edges.last().map_or(range, |&e| self.edges[e as usize].src);
        debug_assert!(edges
            .first()
            .is_none_or(|&e| self.edges[e as usize].dst == range));
        Path {
            range,
            source,
            degree: self.word_degree(&edges),
            edges,
        }
    }

    /// Build a path from a composable edge word in any color order; the word
    /// is rewritten to normal form through the squares.
    pub fn path_from_edges(&self, edge_ids: &[&str]) -> Result<Path> {
        let mut word = Vec::with_capacity(edge_ids.len());
        for id in edge_ids {
            let e = self
                .edge_idx
                .get(*id)
                .copied()
                .ok_or_else(|| KgtError::UnknownEdge((*id).to_string()))?;
            word.push(e);
        }
        for w in word.windows(2) {
            let (a, b) = (&self.edges[w[0] as usize], &self.edges[w[1] as usize]);
            if a.src != b.dst {
                return Err(KgtError::ComposeMismatch(a.id.clone(), b.id.clone()));
            }
        }
        let Some(range) = word.first().map(|&e| self.edges[e as usize].dst) else {
            return Err(KgtError::Internal("empty edge word has no range".into()));
        };
        self.normalize(&mut word);
        Ok(self.path_from_word(range, word))
    }

    /// Bubble the word into ascending color order using the square flips.
    fn normalize(&self, word: &mut [u32]) {
        if word.len() < 2 {
            return;
        }
        let mut i = 0;
        while i + 1 < word.len() {
            let ca = self.edges[word[i] as usize].color;
            let cb = self.edges[word[i + 1] as usize].color;
            if ca > cb {
                let (f, g) = self.sq_bwd[&(word[i], word[i + 1])];
                word[i] = f;
                word[i + 1] = g;
                i = i.saturating_sub(1);
            } else {
                i += 1;
            }
        }
    }

    /// Composition `a b`; requires `s(a) = r(b)`.
    pub fn compose(&self, a: &Path, b: &Path) -> Result<Path> {
        if a.source != b.range {
            return Err(KgtError::ComposeMismatch(
                self.describe(a).edges.join("."),
                self.describe(b).edges.join("."),
            ));
        }
        let mut word = Vec::with_capacity(a.edges.len() + b.edges.len());
        word.extend_from_slice(&a.edges);
        word.extend_from_slice(&b.edges);
        self.normalize(&mut word);
        Ok(Path {
            range: a.range,
            source: b.source,
            degree: a.degree.add(&b.degree),
            edges: word,
        })
    }

    /// Move the leftmost color-`color` edge to the front of the normal word
    /// and strip it off.
    fn split_first(&self, w: Word, color: usize) -> (u32, Word) {
        let mut edges = w.edges;
        let t = edges
            .iter()
            .position(|&e| self.edges[e as usize].color == color)
            .expect("degree accounting guarantees an edge of this color");
        for j in (1..=t).rev() {
            let (gp, fp) = self.sq_fwd[&(edges[j - 1], edges[j])];
            edges[j] = fp;
            edges[j - 1] = gp;
        }
        let head = edges.remove(0);
        let range = self.edges[head as usize].src;
        (head, Word { range, edges })
    }

    fn take_prefix(&self, w: Word, m: &Degree) -> (Word, Word) {
        let prefix_range = w.range;
        let mut rest = w;
        let mut prefix = Vec::new();
        for color in 1..=self.k {
            for _ in 0..m.get(color) {
                let (e, r) = self.split_first(rest, color);
                prefix.push(e);
                rest = r;
            }
        }
        (
            Word {
                range: prefix_range,
                edges: prefix,
            },
            rest,
        )
    }

    /// The factor `lambda(p, q)`: the unique path of degree `q - p` sitting
    /// between degrees `p` and `q` of `lambda`. Requires `p <= q <= d(lambda)`.
    pub fn factor(&self, lambda: &Path, p: &Degree, q: &Degree) -> Result<Path> {
        if !p.leq(q) || !q.leq(&lambda.degree) {
            return Err(KgtError::DegreeOutOfRange(
                format!("{p}..{q}"),
                lambda.degree.to_string(),
            ));
        }
        let w = Word {
            range: lambda.range,
            edges: lambda.edges.clone(),
        };
        let (_, rest) = self.take_prefix(w, p);
        let (mid, _) = self.take_prefix(rest, &q.sub(p).expect("p <= q"));
        Ok(self.path_from_word(mid.range, mid.edges))
    }

    /// The vertex `lambda(p)` visited at degree `p`.
    pub fn vertex_at(&self, lambda: &Path, p: &Degree) -> Result<u32> {
        Ok(self.factor(lambda, p, p)?.range)
    }

    /// All normal-form paths of degree `n`, optionally restricted to range
    /// vertex `v`, in a deterministic order.
    pub fn paths_of_degree(&self, n: &Degree, range: Option<u32>) -> Vec<Path> {
        let mut out = Vec::new();
        let vs: Vec<u32> = match range {
            Some(v) => vec![v],
            None => (0..self.vertex_ids.len() as u32).collect(),
        };
        for v in vs {
            let mut word = Vec::new();
            let mut remaining = n.coords().to_vec();
            self.enumerate_rec(v, v, &mut remaining, 1, &mut word, &mut out);
        }
        out
    }

    fn enumerate_rec(
        &self,
        range: u32,
        at: u32,
        remaining: &mut [u32],
        color: usize,
        word: &mut Vec<u32>,
        out: &mut Vec<Path>,
    ) {
        if color > self.k {
            out.push(self.path_from_word(range, word.clone()));
            return;
        }
        if remaining[color - 1] == 0 {
            self.enumerate_rec(range, at, remaining, color + 1, word, out);
            return;
        }
        remaining[color - 1] -= 1;
        for &e in &self.in_at[color - 1][at as usize] {
            word.push(e);
            self.enumerate_rec(
                range,
                self.edges[e as usize].src,
                remaining,
                color,
                word,
                out,
            );
            word.pop();
        }
        remaining[color - 1] += 1;
    }

    /// `|v Lambda^n|` without enumerating, or the total over all `v`.
    pub fn count_paths(&self, n: &Degree, range: Option<u32>) -> u64 {
        let mut memo: HashMap<(u32, Vec<u32>), u64> = HashMap::new();
        let vs: Vec<u32> = match range {
            Some(v) => vec![v],
            None => (0..self.vertex_ids.len() as u32).collect(),
        };
        vs.into_iter()
            .map(|v| self.count_rec(v, n.coords().to_vec(), &mut memo))
            .sum()
    }

    fn count_rec(&self, v: u32, n: Vec<u32>, memo: &mut HashMap<(u32, Vec<u32>), u64>) -> u64 {
        if n.iter().all(|&c| c == 0) {
            return 1;
        }
        if let Some(&c) = memo.get(&(v, n.clone())) {
            return c;
        }
        let color = n.iter().position(|&c| c > 0).unwrap() + 1;
        let mut rest = n.clone();
        rest[color - 1] -= 1;
        let total: u64 = self.in_at[color - 1][v as usize]
            .iter()
            .map(|&e| self.count_rec(self.edges[e as usize].src, rest.clone(), memo))
            .sum();
        memo.insert((v, n), total);
        total
    }

    /// No-sources and connectivity flags.
    pub fn structural_checks(&self) -> StructuralReport {
        let mut missing = Vec::new();
        for v in 0..self.vertex_ids.len() {
            for c in 1..=self.k {
                if self.in_at[c - 1][v].is_empty() {
                    missing.push((self.vertex_ids[v].clone(), c));
                }
            }
        }
        // undirected reachability over the full 1-skeleton
        let n = self.vertex_ids.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for c in 1..=self.k {
                for &e in self.in_at[c - 1][v as usize]
                    .iter()
                    .chain(&self.out_at[c - 1][v as usize])
                {
                    for w in [self.edges[e as usize].src, self.edges[e as usize].dst] {
                        if !seen[w as usize] {
                            seen[w as usize] = true;
                            count += 1;
                            stack.push(w);
                        }
                    }
                }
            }
        }
        StructuralReport {
            no_sources: missing.is_empty(),
            missing_receivers: missing,
            connected: count == n,
        }
    }

    pub fn no_sources(&self) -> bool {
        self.structural_checks().no_sources
    }

    /// Fail unless every vertex receives an edge of every color.
    pub fn require_no_sources(&self) -> Result<()> {
        let rep = self.structural_checks();
        match rep.missing_receivers.into_iter().next() {
            None => Ok(()),
            Some((v, c)) => Err(KgtError::HasSources(v, c)),
        }
    }

    pub fn describe(&self, p: &Path) -> PathDesc {
        PathDesc {
            range: self.vertex_ids[p.range as usize].clone(),
            source: self.vertex_ids[p.source as usize].clone(),
            degree: p.degree.clone(),
            edges: p
                .edges
                .iter()
                .map(|&e| self.edges[e as usize].id.clone())
                .collect(),
        }
    }

    /// Reconstruct the raw presentation (used by serialization and by
    /// constructions that extend a graph).
    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            k: self.k,
            vertices: self.vertex_ids.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    id: e.id.clone(),
                    color: e.color,
                    src: self.vertex_ids[e.src as usize].clone(),
                    dst: self.vertex_ids[e.dst as usize].clone(),
                })
                .collect(),
            squares: self
                .sq_fwd
                .iter()
                .map(|(&(f, g), &(gp, fp))| {
                    [
                        self.edges[f as usize].id.clone(),
                        self.edges[g as usize].id.clone(),
                        self.edges[gp as usize].id.clone(),
                        self.edges[fp as usize].id.clone(),
                    ]
                })
                .collect(),
        }
    }
}
