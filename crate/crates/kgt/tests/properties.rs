//! Property-based invariants: normal-form soundness, unique factorisation
//! beyond the validator's exhaustive window, functoriality of cocycles, and
//! agreement of the isomorphism search with brute force.

use proptest::prelude::*;

use kgt::chain::{bd_chain, Cocycle, ProfiniteElement};
use kgt::degree::Degree;
use kgt::group::FiniteGroup;
use kgt::iso::are_isomorphic;
use kgt::kgraph::{KGraph, RawEdge, RawGraph};
use kgt::oracle::brute_force_isomorphic;
use kgt::presets;

/// A one-vertex 2-graph with `nb` blue and `nr` red loops and an arbitrary
/// bijection on composable pairs: every such presentation is a valid
/// 2-graph.
fn loops_graph(nb: usize, nr: usize, perm: &[usize]) -> KGraph {
    let mut raw = RawGraph {
        k: 2,
        vertices: vec!["v".into()],
        ..Default::default()
    };
    for i in 0..nb {
        raw.edges.push(RawEdge {
            id: format!("a{i}"),
            color: 1,
            src: "v".into(),
            dst: "v".into(),
        });
    }
    for j in 0..nr {
        raw.edges.push(RawEdge {
            id: format!("b{j}"),
            color: 2,
            src: "v".into(),
            dst: "v".into(),
        });
    }
    for (idx, &img) in perm.iter().enumerate() {
        let (i, j) = (idx / nr, idx % nr);
        let (ip, jp) = (img / nr, img % nr);
        raw.squares.push([
            format!("a{i}"),
            format!("b{j}"),
            format!("b{jp}"),
            format!("a{ip}"),
        ]);
    }
    KGraph::validate(&raw).expect("loop presentations are valid")
}

fn square_graph_strategy() -> impl Strategy<Value = KGraph> {
    (1usize..=3, 1usize..=3)
        .prop_flat_map(|(nb, nr)| {
            let n = nb * nr;
            (
                Just(nb),
                Just(nr),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            )
        })
        .prop_map(|(nb, nr, perm)| loops_graph(nb, nr, &perm))
}

fn degree_leq(bound: &Degree) -> impl Strategy<Value = Degree> {
    let coords: Vec<_> = bound.coords().iter().map(|&c| 0..=c).collect();
    coords.prop_map(Degree::new)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn factor_compose_roundtrip(
        g in square_graph_strategy(),
        pick in any::<proptest::sample::Index>(),
        cut_a in any::<proptest::sample::Index>(),
        cut_b in any::<proptest::sample::Index>(),
    ) {
        let d = Degree::new(vec![3, 3]);
        let paths = g.paths_of_degree(&d, None);
        let lambda = &paths[pick.index(paths.len())];
        let grid = Degree::grid(&d);
        let mut p = grid[cut_a.index(grid.len())].clone();
        let mut q = grid[cut_b.index(grid.len())].clone();
        if !p.leq(&q) {
            std::mem::swap(&mut p, &mut q);
        }
        prop_assume!(p.leq(&q));
        let head = g.factor(lambda, &Degree::zero(2), &p).unwrap();
        let mid = g.factor(lambda, &p, &q).unwrap();
        let tail = g.factor(lambda, &q, &d).unwrap();
        let rebuilt = g.compose(&head, &g.compose(&mid, &tail).unwrap()).unwrap();
        prop_assert_eq!(&rebuilt, lambda);
    }

    #[test]
    fn factorisation_is_unique_beyond_the_validated_window(
        g in square_graph_strategy(),
        pick in any::<proptest::sample::Index>(),
        cut in any::<proptest::sample::Index>(),
    ) {
        let d = Degree::new(vec![3, 2]);
        let paths = g.paths_of_degree(&d, None);
        let lambda = &paths[pick.index(paths.len())];
        let grid = Degree::grid(&d);
        let m = grid[cut.index(grid.len())].clone();
        let n = d.sub(&m).unwrap();
        let mut count = 0usize;
        for mu in g.paths_of_degree(&m, Some(lambda.range_vertex())) {
            for nu in g.paths_of_degree(&n, Some(mu.source_vertex())) {
                if &g.compose(&mu, &nu).unwrap() == lambda {
                    count += 1;
                }
            }
        }
        prop_assert_eq!(count, 1);
    }

    #[test]
    fn normal_form_is_stable_under_reassembly(
        g in square_graph_strategy(),
        pick in any::<proptest::sample::Index>(),
        order in proptest::collection::vec(any::<bool>(), 8),
    ) {
        // peel a path into single edges in a data-driven color order and
        // recompose; the normal form must come back unchanged
        let d = Degree::new(vec![2, 2]);
        let paths = g.paths_of_degree(&d, None);
        let lambda = &paths[pick.index(paths.len())];
        let mut rest = lambda.clone();
        let mut pieces = Vec::new();
        let mut flip = order.into_iter().cycle();
        while !rest.degree().is_zero() {
            let deg = rest.degree().clone();
            let color = if deg.get(1) > 0 && (deg.get(2) == 0 || flip.next().unwrap()) { 1 } else { 2 };
            let unit = Degree::unit(2, color);
            let head = g.factor(&rest, &Degree::zero(2), &unit).unwrap();
            rest = g.factor(&rest, &unit, &deg).unwrap();
            pieces.push(head);
        }
        let mut rebuilt = g.vertex_path(lambda.range_vertex());
        for piece in &pieces {
            rebuilt = g.compose(&rebuilt, piece).unwrap();
        }
        prop_assert_eq!(&rebuilt, lambda);
    }

    #[test]
    fn counting_identity(
        g in square_graph_strategy(),
        m in degree_leq(&Degree::new(vec![2, 2])),
        n in degree_leq(&Degree::new(vec![2, 2])),
    ) {
        for v in 0..g.num_vertices() as u32 {
            let lhs = g.count_paths(&m.add(&n), Some(v));
            let rhs: u64 = g
                .paths_of_degree(&m, Some(v))
                .iter()
                .map(|mu| g.count_paths(&n, Some(mu.source_vertex())))
                .sum();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn uniform_labels_are_cocycles_and_functorial(
        g in square_graph_strategy(),
        x in 0u16..4,
        y in 0u16..4,
        da in degree_leq(&Degree::new(vec![1, 1])),
        db in degree_leq(&Degree::new(vec![1, 1])),
        pick in any::<proptest::sample::Index>(),
    ) {
        let z4 = FiniteGroup::cyclic(4);
        let labels: Vec<u16> = (0..g.num_edges() as u32)
            .map(|e| if g.edge(e).color == 1 { x } else { y })
            .collect();
        let c = Cocycle::validate(&g, z4.clone(), labels).unwrap();
        let mus = g.paths_of_degree(&da, None);
        let mu = &mus[pick.index(mus.len())];
        for nu in g.paths_of_degree(&db, Some(mu.source_vertex())) {
            let prod = g.compose(mu, &nu).unwrap();
            prop_assert_eq!(c.of_path(&prod), z4.mul(c.of_path(mu), c.of_path(&nu)));
        }
    }

    #[test]
    fn profinite_multiplication_associates(
        a in 0u16..16,
        b in 0u16..16,
        c in 0u16..16,
    ) {
        let cc = bd_chain(5);
        let chain = cc.chain();
        let ea = ProfiniteElement::from_top(chain, 5, a);
        let eb = ProfiniteElement::from_top(chain, 5, b);
        let ec = ProfiniteElement::from_top(chain, 5, c);
        let lhs = ea.multiply(chain, &eb).unwrap().multiply(chain, &ec).unwrap();
        let rhs = ea.multiply(chain, &eb.multiply(chain, &ec).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn iso_search_agrees_with_brute_force_on_small_graphs() {
    let mut graphs: Vec<(&str, KGraph)> = vec![
        ("c1", presets::cycle(1)),
        ("c2", presets::cycle(2)),
        ("c3", presets::cycle(3)),
        ("c4", presets::cycle(4)),
        ("two-loop", presets::two_loop()),
        ("lasso", presets::lasso()),
        (
            "c2+c2",
            presets::disjoint_union(&presets::cycle(2), &presets::cycle(2)),
        ),
        (
            "c1+c3",
            presets::disjoint_union(&presets::cycle(1), &presets::cycle(3)),
        ),
    ];
    // a relabeled 4-cycle (vertex order rotated)
    let rotated = {
        let raw = RawGraph {
            k: 1,
            vertices: vec!["w2".into(), "w3".into(), "w0".into(), "w1".into()],
            edges: (0..4)
                .map(|i| RawEdge {
                    id: format!("g{i}"),
                    color: 1,
                    src: format!("w{}", (i + 1) % 4),
                    dst: format!("w{i}"),
                })
                .collect(),
            squares: vec![],
        };
        KGraph::validate(&raw).unwrap()
    };
    graphs.push(("c4-rotated", rotated));

    for (na, a) in &graphs {
        for (nb, b) in &graphs {
            if a.rank() != b.rank() {
                continue;
            }
            let fast = are_isomorphic(a, b).unwrap().is_some();
            let slow = brute_force_isomorphic(a, b).is_some();
            assert_eq!(fast, slow, "disagreement on {na} vs {nb}");
        }
    }
}
