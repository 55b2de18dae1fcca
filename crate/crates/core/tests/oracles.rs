//! Brute-force oracles and property tests.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use endlink::decomposition::{build, construction_checks, contract_to_linked, verify};
use endlink::ends::{min_end_separator, undominated_gdelta};
use endlink::envelope::{envelope, PointSet};
use endlink::families::HalfGrid;
use endlink::flow::{vertex_flow, Side};
use endlink::graph::{expand, GadgetPart};
use endlink::region_algorithm::run;
use endlink::{Host, VSet, Vertex};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

/// Vertices reachable from `x \ s` avoiding `s`.
fn side(adj: &[Vec<usize>], s: &BTreeSet<usize>, x: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut seen: BTreeSet<usize> = x.iter().copied().filter(|v| !s.contains(v)).collect();
    let mut stack: Vec<usize> = seen.iter().copied().collect();
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !s.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}

fn graph_strategy() -> impl Strategy<Value = (usize, Vec<(usize, usize)>, BTreeSet<usize>, BTreeSet<usize>)> {
    (2usize..=8).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let m = pairs.len();
        (
            Just(n),
            proptest::sample::subsequence(pairs, 0..=m),
            proptest::collection::btree_set(0..n, 1..=3),
            proptest::collection::btree_set(0..n, 1..=3),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn nearest_cuts_are_extremal_minimum_separators((n, edges, x, y) in graph_strategy()) {
        let adj = adjacency(n, &edges);
        let t = finite_window(n, &edges);
        let host = Host::whole(&t);
        let (wx, wy) = (window_set(&t, &x), window_set(&t, &y));
        let back = |s: &VSet| -> BTreeSet<usize> { s.iter().map(|&v| t.label(v).parse().unwrap()).collect() };
        let near_x = back(&vertex_flow(&host, &wx, &wy, &VSet::new(), Side::NearestX).unwrap().separator);
        let near_y = back(&vertex_flow(&host, &wx, &wy, &VSet::new(), Side::NearestY).unwrap().separator);
        let pool: Vec<usize> = (0..n).collect();
        let k = brute_min_separator(&adj, &pool, &x, &y, n).unwrap();
        prop_assert_eq!(near_x.len(), k);
        prop_assert_eq!(near_y.len(), k);
        prop_assert!(brute_separates(&adj, &near_x, &x, &y));
        prop_assert!(brute_separates(&adj, &near_y, &x, &y));
        let sx = side(&adj, &near_x, &x);
        let sy = side(&adj, &near_y, &y);
        subsets(&pool, k, &mut |s| {
            if brute_separates(&adj, s, &x, &y) {
                assert!(sx.is_subset(&side(&adj, s, &x)));
                assert!(sy.is_subset(&side(&adj, s, &y)));
            }
            false
        });
    }

    #[test]
    fn flow_paths_are_disjoint_and_valid((n, edges, x, y) in graph_strategy()) {
        let t = finite_window(n, &edges);
        let host = Host::whole(&t);
        let (wx, wy) = (window_set(&t, &x), window_set(&t, &y));
        let cut = vertex_flow(&host, &wx, &wy, &VSet::new(), Side::NearestX).unwrap();
        let mut used = BTreeSet::new();
        for p in &cut.paths {
            prop_assert!(wx.contains(&p[0]));
            prop_assert!(wy.contains(p.last().unwrap()));
            for w in p.windows(2) {
                prop_assert!(t.has_edge(w[0], w[1]));
            }
            for (i, v) in p.iter().enumerate() {
                prop_assert!(used.insert(*v));
                if i > 0 { prop_assert!(!wx.contains(v)); }
                if i + 1 < p.len() { prop_assert!(!wy.contains(v)); }
            }
        }
        prop_assert_eq!(cut.paths.len(), cut.value);
    }

    #[test]
    fn labels_round_trip(i in 1u32..50, j in 1u32..50, c in 1u32..5) {
        for v in [
            Vertex::Grid(i, j),
            Vertex::Id(i),
            Vertex::Tree(i as u64),
            Vertex::Comb(i, j),
            Vertex::Ladder(i, c, j),
            Vertex::Gadget(j, GadgetPart::Low(c, i)),
            Vertex::Gadget(j, GadgetPart::S2),
        ] {
            prop_assert_eq!(v.to_string().parse::<Vertex>().unwrap(), v);
        }
    }

    #[test]
    fn envelopes_of_random_ball_subsets_pass_their_audit(mask in proptest::collection::vec(any::<bool>(), 10)) {
        let t = expand(Arc::new(HalfGrid::new(4)), 10).unwrap();
        let ball: Vec<usize> = t.ball(3).into_iter().collect();
        let x: VSet = ball.iter().zip(&mask).filter(|(_, &m)| m).map(|(&v, _)| v).collect();
        let host = Host::whole(&t);
        let r = envelope(&host, &PointSet::vertices(x.clone())).unwrap();
        prop_assert!(r.audit.passed());
        prop_assert!(x.is_subset(&r.envelope));
        let db = t.horizon() - 2;
        for c in host.components_without(&r.envelope) {
            prop_assert!(host.neighborhood(&c).iter().all(|&v| t.depth(v) <= db));
        }
    }
}

/// Core vertices plus the first three rows of every ladder.
fn planted_pool(t: &endlink::Truncation) -> Vec<usize> {
    (0..t.len())
        .filter(|&v| match t.vertex(v) {
            Vertex::Id(_) => true,
            Vertex::Ladder(_, _, r) => r <= 3,
            _ => false,
        })
        .collect()
}

fn ladder_row(t: &endlink::Truncation, l: u32, row: u32) -> BTreeSet<usize> {
    (0..t.len())
        .filter(|&v| matches!(t.vertex(v), Vertex::Ladder(a, _, r) if a == l && r == row))
        .collect()
}

#[test]
fn planted_end_separators_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let n = rng.gen_range(2..=6);
        let ladders = rng.gen_range(1..=2);
        let fam = random_planted(&mut rng, n, ladders, 2);
        let h = planted_horizon(n, 2);
        let t = expand(Arc::new(fam), h).unwrap();
        let host = Host::whole(&t);
        let adj = window_adjacency(&t);
        let pool = planted_pool(&t);
        let x: VSet = (0..rng.gen_range(1..=3))
            .map(|_| t.set_of_labels(&[rng.gen_range(0..n).to_string()]).unwrap())
            .flatten()
            .collect();
        let xs: BTreeSet<usize> = x.iter().copied().collect();
        for l in 0..ladders as u32 {
            let e = t.oracle().end(&format!("ladder{l}"), h).unwrap();
            let got = min_end_separator(&host, &x, &e).unwrap().order();
            let deep = ladder_row(&t, l, 8);
            let want = brute_min_separator(&adj, &pool, &xs, &deep, 3).unwrap();
            assert_eq!(got, want);
        }
    }
}

#[test]
fn planted_regions_are_linked_both_ways() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut regions = 0;
    for _ in 0..30 {
        let n = rng.gen_range(3..=6);
        let fam = random_planted(&mut rng, n, 2, 3);
        let h = planted_horizon(n, 3);
        let t = expand(Arc::new(fam), h).unwrap();
        let host = Host::whole(&t);
        let adj = window_adjacency(&t);
        let pool = planted_pool(&t);
        let x: VSet = (0..n)
            .filter(|_| rng.gen_bool(0.6))
            .flat_map(|i| t.set_of_labels(&[i.to_string()]).unwrap())
            .collect();
        if x.is_empty() {
            continue;
        }
        let xs: BTreeSet<usize> = x.iter().copied().collect();
        let out = run(&host, &x, &[]).unwrap();
        for s in &out.outputs {
            regions += 1;
            let nb: BTreeSet<usize> = s.region.neighborhood.iter().copied().collect();
            assert_eq!(brute_min_separator(&adj, &pool, &nb, &xs, 4), Some(nb.len()));
            let l: u32 = s.end.trim_start_matches("ladder").parse().unwrap();
            let deep = ladder_row(&t, l, 8);
            assert_eq!(brute_min_separator(&adj, &pool, &nb, &deep, 4), Some(nb.len()));
        }
    }
    assert!(regions > 0);
}

#[test]
fn planted_decompositions_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for case in 0..12 {
        let n = rng.gen_range(2..=5);
        let ladders = rng.gen_range(1..=3);
        let fam = Arc::new(random_planted(&mut rng, n, ladders, 2));
        let t = expand(fam.clone(), planted_horizon(n, 2) + 4).unwrap();
        let spec = undominated_gdelta(fam);
        let built = build(&t, &spec, n + 3).unwrap();
        assert!(construction_checks(&t, &built).passed(), "case {case}");
        let td = contract_to_linked(&t, &built).unwrap();
        let r = verify(&t, &spec, &td, usize::MAX).unwrap();
        assert!(r.passed(), "case {case}: {:?}", r.properties());
        assert!(r.displays_psi(), "case {case}: {:?}", r.displays);
        // Independent T2: the nodes holding a vertex are connected in the tree.
        for v in 0..t.len() {
            let holders: Vec<usize> = (0..td.len()).filter(|&i| td.nodes[i].bag.contains(&v)).collect();
            let tops = holders
                .iter()
                .filter(|&&i| td.nodes[i].parent.map_or(true, |p| !td.nodes[p].bag.contains(&v)))
                .count();
            assert!(holders.is_empty() || tops == 1);
        }
    }
}
