//! Parametrisation of tower paths by pairs (x, g): a base infinite path and
//! a compatible group tuple.
//!
//! With levels numbered from 1 and g = (g_1, ..., g_N) compatible under the
//! quotient maps, the tower path x^g is pinned down by
//!
//! * x^g(0, (m, 0)) = the level-1 lift of x(0, m), and
//! * x^g((0, n))    = the level-(n+1) vertex (x(0), g_{n+1}),
//!
//! and its vertical shifts read off the twisted level paths:
//! sigma^{n e}(x^g)(0, (m, 0)) = (x(0, m), c_{n+1}(x(0, m))^{-1} g_{n+1}).
//! Every tower path prefix arises as a window of some x^g, and the window
//! data (shift, base prefix, group tuple) is recoverable.

use crate::chain::ProfiniteElement;
use crate::degree::Degree;
use crate::error::{KgtError, Result};
use crate::infpath::InfinitePathSpec;
use crate::kgraph::Path;
use crate::tower::{QuotientTower, TowerEdge};

/// The prefix x^g(0, (m, depth)) as a concrete tower path.
pub fn build_tower_path(
    qt: &QuotientTower,
    x: &InfinitePathSpec,
    g: &ProfiniteElement,
    m: &Degree,
    depth: usize,
) -> Result<Path> {
    let prefix = x.prefix(qt.cc.graph(), m)?;
    build_from_prefix(qt, &prefix, g, depth)
}

/// Same, from the finite data x(0, m) only.
pub fn build_from_prefix(
    qt: &QuotientTower,
    base_prefix: &Path,
    g: &ProfiniteElement,
    depth: usize,
) -> Result<Path> {
    if depth + 1 > qt.levels() {
        return Err(KgtError::LevelOutOfRange(depth + 1, qt.levels()));
    }
    if g.level() < depth + 1 {
        return Err(KgtError::LevelTooShallow(g.level(), depth + 1));
    }
    let base = qt.cc.graph();
    let tail_vertex = base_prefix.source_vertex();

    let c1 = qt.cc.cocycle(1);
    let src1 = c1
        .group
        .mul(c1.group.inv(c1.of_path(base_prefix)), g.component(1));
    let lifted = qt.skews[0].lift_path(base, c1, base_prefix, src1);
    let mut path = qt.tower.embed_path(&qt.seq, 1, &lifted);

    for t in 1..=depth {
        let c = qt.cc.cocycle(t + 1);
        let elem = c
            .group
            .mul(c.group.inv(c.of_path(base_prefix)), g.component(t + 1));
        let w = qt.skew_vertex(t + 1, tail_vertex, elem);
        let connector = qt
            .tower
            .connector(w)
            .ok_or_else(|| KgtError::Internal("missing connector above level 1".into()))?;
        path = qt
            .tower
            .graph
            .compose(&path, &qt.tower.graph.edge_path(connector))?;
    }
    Ok(path)
}

/// The vertex sigma^{i0 e}(x^g)((m, j)): it sits at level i0 + j + 1 and its
/// group component is the twisted g-component there.
pub fn parametrized_vertex(
    qt: &QuotientTower,
    x: &InfinitePathSpec,
    g: &ProfiniteElement,
    i0: usize,
    m: &Degree,
    j: usize,
) -> Result<u32> {
    let level = i0 + j + 1;
    if level > qt.levels() {
        return Err(KgtError::LevelOutOfRange(level, qt.levels()));
    }
    if g.level() < level {
        return Err(KgtError::LevelTooShallow(g.level(), level));
    }
    let base = qt.cc.graph();
    let prefix = x.prefix(base, m)?;
    let c = qt.cc.cocycle(level);
    let elem = c
        .group
        .mul(c.group.inv(c.of_path(&prefix)), g.component(level));
    Ok(qt.skew_vertex(level, prefix.source_vertex(), elem))
}

#[derive(Debug, Clone)]
pub struct TowerPathDecomposition {
    /// The vertical shift n: the prefix is a window of sigma^{n e}(x^g).
    pub shift: usize,
    /// x(0, m), recovered at level 1.
    pub base_prefix: Path,
    /// Components g_1, ..., g_{shift + 1 + vertical}, exactly the levels the
    /// window touches.
    pub g: ProfiniteElement,
}

/// Recover (shift, x-prefix, g-components) from a tower path prefix.
pub fn decompose_tower_path(qt: &QuotientTower, y: &Path) -> Result<TowerPathDecomposition> {
    let k = qt.tower.base_rank();
    if y.degree().rank() != k + 1 {
        return Err(KgtError::RankMismatch(y.degree().rank(), k + 1));
    }
    let m = Degree::new(y.degree().coords()[..k].to_vec());
    let vertical = y.degree().coords()[k] as usize;
    let level = qt.tower.level_of_vertex(y.range_vertex());
    let shift = level - 1;
    let top = level + vertical;
    if top > qt.levels() {
        return Err(KgtError::InsufficientDepth(format!(
            "window touches level {top} of a {}-level tower",
            qt.levels()
        )));
    }

    // the horizontal part lives inside the range level
    let zero = Degree::zero(k);
    let level_part = qt.tower.graph.factor(y, &zero.extend(0), &m.extend(0))?;
    let local = level_local_path(qt, level, &level_part)?;
    let at_level_one = qt.seq.project_path(level, 1, &local);
    let (base_prefix, _) = qt.skews[0].project_path(qt.cc.graph(), &at_level_one);

    // vertical vertices on the range side carry the deep components directly
    let mut components = vec![0u16; top];
    for i in level..=top {
        let spot = zero.extend((i - level) as u32);
        let tv = qt.tower.graph.factor(y, &spot, &spot)?.range_vertex();
        let (lvl, loc) = qt.tower.vertex_parts(tv);
        debug_assert_eq!(lvl, i);
        components[i - 1] = qt.skews[i - 1].vertex_parts(loc).1;
    }
    for i in (1..level).rev() {
        components[i - 1] = qt.cc.chain().step_down(i, components[i]);
    }
    let g = ProfiniteElement::new(qt.cc.chain(), components)
        .map_err(|e| KgtError::Internal(format!("recovered components incompatible: {e}")))?;

    Ok(TowerPathDecomposition {
        shift,
        base_prefix,
        g,
    })
}

fn level_local_path(qt: &QuotientTower, level: usize, p: &Path) -> Result<Path> {
    if p.is_vertex() {
        let (lvl, loc) = qt.tower.vertex_parts(p.range_vertex());
        if lvl != level {
            return Err(KgtError::Internal(
                "horizontal part strays off its level".into(),
            ));
        }
        return Ok(qt.seq.graph(level).vertex_path(loc));
    }
    let g = qt.seq.graph(level);
    let ids: Vec<String> = p
        .edge_indices()
        .iter()
        .map(|&te| match qt.tower.edge_parts(te) {
            TowerEdge::Level(lvl, local) if lvl == level => Ok(g.edge(local).id.clone()),
            _ => Err(KgtError::Internal(
                "horizontal part strays off its level".into(),
            )),
        })
        .collect::<Result<_>>()?;
    let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
    g.path_from_edges(&refs)
}

/// Rebuild the original window from a decomposition: the degree and depth
/// are implicit in the recovered data.
pub fn rebuild_decomposition(qt: &QuotientTower, dec: &TowerPathDecomposition) -> Result<Path> {
    let m = dec.base_prefix.degree().clone();
    let vertical = dec.g.level() - dec.shift - 1;
    let full = build_from_prefix(qt, &dec.base_prefix, &dec.g, dec.shift + vertical)?;
    let lo = Degree::zero(m.rank()).extend(dec.shift as u32);
    let hi = m.extend((dec.shift + vertical) as u32);
    qt.tower.graph.factor(&full, &lo, &hi)
}
