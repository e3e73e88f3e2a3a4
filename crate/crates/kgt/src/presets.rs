//! Built-in example graphs and chains used by the CLI generators and the
//! test corpus.

use crate::chain::{Cocycle, CocycleChain, QuotientChain};
use crate::group::{FiniteGroup, Gel};
use crate::kgraph::{KGraph, RawEdge, RawGraph};

/// Single vertex `v` with one loop `f`.
pub fn b1() -> KGraph {
    let raw = RawGraph {
        k: 1,
        vertices: vec!["v".into()],
        edges: vec![RawEdge {
            id: "f".into(),
            color: 1,
            src: "v".into(),
            dst: "v".into(),
        }],
        squares: vec![],
    };
    KGraph::validate(&raw).expect("single loop is a 1-graph")
}

/// Single vertex with two loops `a`, `b`.
pub fn two_loop() -> KGraph {
    multi_loop(2)
}

/// Single vertex with `n` loops `a0`, ..
pub fn multi_loop(n: usize) -> KGraph {
    let raw = RawGraph {
        k: 1,
        vertices: vec!["v".into()],
        edges: (0..n)
            .map(|i| RawEdge {
                id: format!("a{i}"),
                color: 1,
                src: "v".into(),
                dst: "v".into(),
            })
            .collect(),
        squares: vec![],
    };
    KGraph::validate(&raw).expect("loops form a 1-graph")
}

/// The simple cycle with `p` vertices: r(e_i) = v_i, s(e_i) = v_{i+1 mod p}.
pub fn cycle(p: usize) -> KGraph {
    assert!(p >= 1);
    let raw = RawGraph {
        k: 1,
        vertices: (0..p).map(|i| format!("v{i}")).collect(),
        edges: (0..p)
            .map(|i| RawEdge {
                id: format!("e{i}"),
                color: 1,
                src: format!("v{}", (i + 1) % p),
                dst: format!("v{i}"),
            })
            .collect(),
        squares: vec![],
    };
    KGraph::validate(&raw).expect("cycle is a 1-graph")
}

/// A tail edge feeding a loop: walks from `u` reach `w` and stay there.
pub fn lasso() -> KGraph {
    let raw = RawGraph {
        k: 1,
        vertices: vec!["u".into(), "w".into()],
        edges: vec![
            RawEdge {
                id: "t".into(),
                color: 1,
                src: "w".into(),
                dst: "u".into(),
            },
            RawEdge {
                id: "l".into(),
                color: 1,
                src: "w".into(),
                dst: "w".into(),
            },
        ],
        squares: vec![],
    };
    KGraph::validate(&raw).expect("lasso is a 1-graph")
}

/// One vertex, a blue loop `a`, a red loop `b`, and the only possible square.
pub fn one_square() -> KGraph {
    let raw = RawGraph {
        k: 2,
        vertices: vec!["v".into()],
        edges: vec![
            RawEdge {
                id: "a".into(),
                color: 1,
                src: "v".into(),
                dst: "v".into(),
            },
            RawEdge {
                id: "b".into(),
                color: 2,
                src: "v".into(),
                dst: "v".into(),
            },
        ],
        squares: vec![["a".into(), "b".into(), "b".into(), "a".into()]],
    };
    KGraph::validate(&raw).expect("one-square presentation is a 2-graph")
}

/// Disjoint union, with ids prefixed `A:` and `B:`.
pub fn disjoint_union(a: &KGraph, b: &KGraph) -> KGraph {
    assert_eq!(a.rank(), b.rank(), "union needs equal ranks");
    let (ra, rb) = (a.to_raw(), b.to_raw());
    let tag = |p: &str, raw: RawGraph| -> RawGraph {
        RawGraph {
            k: raw.k,
            vertices: raw.vertices.iter().map(|v| format!("{p}{v}")).collect(),
            edges: raw
                .edges
                .iter()
                .map(|e| RawEdge {
                    id: format!("{p}{}", e.id),
                    color: e.color,
                    src: format!("{p}{}", e.src),
                    dst: format!("{p}{}", e.dst),
                })
                .collect(),
            squares: raw
                .squares
                .iter()
                .map(|s| {
                    [
                        format!("{p}{}", s[0]),
                        format!("{p}{}", s[1]),
                        format!("{p}{}", s[2]),
                        format!("{p}{}", s[3]),
                    ]
                })
                .collect(),
        }
    };
    let ta = tag("A:", ra);
    let tb = tag("B:", rb);
    let raw = RawGraph {
        k: ta.k,
        vertices: ta.vertices.into_iter().chain(tb.vertices).collect(),
        edges: ta.edges.into_iter().chain(tb.edges).collect(),
        squares: ta.squares.into_iter().chain(tb.squares).collect(),
    };
    KGraph::validate(&raw).expect("union of valid graphs is valid")
}

/// The product 2-graph of two 1-graphs: color 1 moves in `a`, color 2 in `b`,
/// with the commuting squares.
pub fn product(a: &KGraph, b: &KGraph) -> KGraph {
    assert_eq!(a.rank(), 1);
    assert_eq!(b.rank(), 1);
    let vid = |u: u32, w: u32| format!("{},{}", a.vertex_id(u), b.vertex_id(w));
    let mut raw = RawGraph {
        k: 2,
        ..Default::default()
    };
    for u in 0..a.num_vertices() as u32 {
        for w in 0..b.num_vertices() as u32 {
            raw.vertices.push(vid(u, w));
        }
    }
    for e in 0..a.num_edges() as u32 {
        let ed = a.edge(e);
        for w in 0..b.num_vertices() as u32 {
            raw.edges.push(RawEdge {
                id: format!("{},{}", ed.id, b.vertex_id(w)),
                color: 1,
                src: vid(ed.s(), w),
                dst: vid(ed.r(), w),
            });
        }
    }
    for f in 0..b.num_edges() as u32 {
        let fd = b.edge(f);
        for u in 0..a.num_vertices() as u32 {
            raw.edges.push(RawEdge {
                id: format!("{},{}", a.vertex_id(u), fd.id),
                color: 2,
                src: vid(u, fd.s()),
                dst: vid(u, fd.r()),
            });
        }
    }
    for e in 0..a.num_edges() as u32 {
        let ed = a.edge(e);
        for f in 0..b.num_edges() as u32 {
            let fd = b.edge(f);
            // (e, r(f)) (s(e), f) = (r(e), f) (e, s(f))
            raw.squares.push([
                format!("{},{}", ed.id, b.vertex_id(fd.r())),
                format!("{},{}", a.vertex_id(ed.s()), fd.id),
                format!("{},{}", a.vertex_id(ed.r()), fd.id),
                format!("{},{}", ed.id, b.vertex_id(fd.s())),
            ]);
        }
    }
    KGraph::validate(&raw).expect("product of 1-graphs is a 2-graph")
}

/// All-trivial chain of the given length on a graph: every group is Z/1 and
/// every label is the identity.
pub fn trivial_chain(graph: &KGraph, levels: usize) -> CocycleChain {
    let groups: Vec<FiniteGroup> = (0..levels).map(|_| FiniteGroup::cyclic(1)).collect();
    let maps: Vec<Vec<Gel>> = (1..levels).map(|_| vec![0]).collect();
    let chain = QuotientChain::validate(groups.clone(), maps).expect("trivial chain");
    let cocycles = groups
        .iter()
        .map(|g| Cocycle::validate(graph, g.clone(), vec![0; graph.num_edges()]).unwrap())
        .collect();
    CocycleChain::validate(graph.clone(), chain, cocycles).expect("trivial chain is compatible")
}

/// Two-loop graph with the mod-2 labeling that separates the loops.
pub fn two_loop_chain() -> CocycleChain {
    let graph = two_loop();
    let groups = vec![FiniteGroup::cyclic(1), FiniteGroup::cyclic(2)];
    let maps: Vec<Vec<Gel>> = vec![vec![0, 0]];
    let chain = QuotientChain::validate(groups.clone(), maps).unwrap();
    let cocycles = vec![
        Cocycle::validate(&graph, groups[0].clone(), vec![0, 0]).unwrap(),
        Cocycle::validate(&graph, groups[1].clone(), vec![0, 1]).unwrap(),
    ];
    CocycleChain::validate(graph, chain, cocycles).expect("two-loop chain is compatible")
}

/// A nonabelian chain on the one-square 2-graph: {e} <- Z/2 <- S_3 via the
/// sign map, both loops labeled by the same transposition.
pub fn s3_square_chain() -> CocycleChain {
    let graph = one_square();
    let s3 = FiniteGroup::symmetric(3);
    let z2 = FiniteGroup::cyclic(2);
    let z1 = FiniteGroup::cyclic(1);
    // sign of a permutation named by its image word
    let sign: Vec<Gel> = s3
        .elements()
        .map(|g| {
            let w: Vec<u8> = s3.name(g).bytes().map(|b| b - b'0').collect();
            let mut inv = 0;
            for i in 0..w.len() {
                for j in (i + 1)..w.len() {
                    if w[i] > w[j] {
                        inv += 1;
                    }
                }
            }
            (inv % 2) as Gel
        })
        .collect();
    let collapse: Vec<Gel> = vec![0, 0];
    let chain = QuotientChain::validate(
        vec![z1.clone(), z2.clone(), s3.clone()],
        vec![collapse, sign.clone()],
    )
    .expect("sign chain");
    let t = s3.element("102").expect("transposition");
    let c3 = Cocycle::validate(&graph, s3, vec![t, t]).unwrap();
    let c2 = Cocycle::validate(&graph, z2, vec![sign[t as usize], sign[t as usize]]).unwrap();
    let c1 = Cocycle::validate(&graph, z1, vec![0, 0]).unwrap();
    CocycleChain::validate(graph, chain, vec![c1, c2, c3]).expect("sign chain is compatible")
}

/// Graph corpus for the cofinality cross-validation: rank <= 2, at most 8
/// vertices, mixing cofinal and non-cofinal shapes. Components of the
/// disconnected entries are small enough for the bounded path oracle.
pub fn corpus() -> Vec<(String, KGraph)> {
    let mut out: Vec<(String, KGraph)> = Vec::new();
    for p in 1..=6 {
        out.push((format!("cycle-{p}"), cycle(p)));
    }
    out.push(("two-loop".into(), two_loop()));
    out.push(("three-loop".into(), multi_loop(3)));
    out.push(("lasso".into(), lasso()));
    out.push(("union-c1-c1".into(), disjoint_union(&cycle(1), &cycle(1))));
    out.push(("union-c2-c3".into(), disjoint_union(&cycle(2), &cycle(3))));
    out.push(("union-c2-c2".into(), disjoint_union(&cycle(2), &cycle(2))));
    out.push(("union-c1-c4".into(), disjoint_union(&cycle(1), &cycle(4))));
    out.push(("union-loop-lasso".into(), disjoint_union(&b1(), &lasso())));
    out.push(("one-square".into(), one_square()));
    out.push(("prod-c2-c3".into(), product(&cycle(2), &cycle(3))));
    out.push(("prod-c2-c2".into(), product(&cycle(2), &cycle(2))));
    out.push(("prod-c4-c1".into(), product(&cycle(4), &cycle(1))));
    out.push(("prod-twoloop-c1".into(), product(&two_loop(), &cycle(1))));
    out.push(("prod-twoloop-c2".into(), product(&two_loop(), &cycle(2))));
    out.push(("prod-c3-c1".into(), product(&cycle(3), &cycle(1))));
    out.push((
        "union-prod-c1c1-prod-c2c2".into(),
        disjoint_union(
            &product(&cycle(1), &cycle(1)),
            &product(&cycle(2), &cycle(2)),
        ),
    ));
    out.push((
        "union-twoloop-c3".into(),
        disjoint_union(&two_loop(), &cycle(3)),
    ));
    out
}
