//! One test per acceptance criterion. Each prints a single PASS/FAIL line;
//! run with `--nocapture` to see them.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use endlink::decomposition::{
    build, construction_checks, contract_to_linked, verify, LiminfStatus, TreeDecomposition,
    VerificationReport,
};
use endlink::ends::{
    boundary_of, certified_depth, ids, min_end_separator, sink, undominated_gdelta, GDeltaSpec,
};
use endlink::envelope::{envelope, envelope_avoiding, EnvelopeResult, PointSet};
use endlink::families::{
    eps3, eps4, half_grid_pendant, AppendixGadget, BinaryTree, Comb, FullGrid, HalfGrid,
};
use endlink::gadget::gadget_facts;
use endlink::graph::expand;
use endlink::region_algorithm::{audit_observation, run};
use endlink::separation::max_disjoint_paths;
use endlink::{GraphFamily, Host, Region, Truncation, VSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn report(n: u32, pass: bool, what: &str, detail: String) {
    println!("criterion {n} {}: {what} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {detail}");
}

#[test]
fn criterion_1_menger_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = Vec::new();
    for case in 0..200 {
        let n = rng.gen_range(2..=10);
        let edges = random_edges(&mut rng, n, 0.35);
        let adj = adjacency(n, &edges);
        let t = finite_window(n, &edges);
        let pick = |rng: &mut ChaCha8Rng| -> BTreeSet<usize> {
            let k = rng.gen_range(1..=3.min(n));
            (0..k).map(|_| rng.gen_range(0..n)).collect()
        };
        let (x, y) = (pick(&mut rng), pick(&mut rng));
        let flow = max_disjoint_paths(&t, &window_set(&t, &x), &window_set(&t, &y)).len();
        let pool: Vec<usize> = (0..n).collect();
        let brute = brute_min_separator(&adj, &pool, &x, &y, 5);
        if brute != Some(flow) {
            mismatches.push((case, flow, brute));
        }
    }
    let elapsed = start.elapsed();
    report(
        1,
        mismatches.is_empty() && elapsed < Duration::from_secs(10),
        "max disjoint paths equal brute-force minimum separators on 200 random graphs",
        format!("mismatches {mismatches:?}, {:.2}s of 10s", elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_2_gadget_facts() {
    let start = Instant::now();
    let facts = gadget_facts(Arc::new(AppendixGadget::new()), 16, 1).unwrap();

    // Independent exhaustive checks of the first two facts.
    let t = expand(Arc::new(AppendixGadget::new()), 16).unwrap();
    let host = Host::whole(&t);
    let adj = window_adjacency(&t);
    let x = t.set_of(&AppendixGadget::q_x(1)).unwrap();
    let xs: BTreeSet<usize> = x.iter().copied().collect();
    let end = |id: String| t.oracle().end(&id, 16).unwrap();
    let (e3, e4) = (end(eps3(1)), end(eps4(1)));
    let y3 = sink(&host, &e3, certified_depth(&t, &e3, 4, t.max_depth(&x)).unwrap()).unwrap();
    let y4 = sink(&host, &e4, certified_depth(&t, &e4, 4, t.max_depth(&x)).unwrap()).unwrap();
    let pool: Vec<usize> = (0..t.len()).filter(|&v| t.depth(v) <= 8).collect();
    let mut pairs3 = Vec::new();
    subsets(&pool, 2, &mut |s| {
        if brute_separates(&adj, s, &xs, &y3.iter().copied().collect()) {
            pairs3.push(t.labels(&s.iter().copied().collect()));
        }
        false
    });
    let no_single3 = !subsets(&pool, 1, &mut |s| brute_separates(&adj, s, &xs, &y3.iter().copied().collect()));
    let no_pair4 = !subsets(&pool, 2, &mut |s| brute_separates(&adj, s, &xs, &y4.iter().copied().collect()));
    let unique = pairs3 == vec![vec!["(4,1)".to_string(), "g1.s2".to_string()]];
    let elapsed = start.elapsed();
    report(
        2,
        facts.passed() && unique && no_single3 && no_pair4 && elapsed < Duration::from_secs(5),
        "gadget separator facts at horizon 16",
        format!(
            "facts {:?}, order-2 eps3 separators {pairs3:?}, no order-2 eps4 separator {no_pair4}, {:.2}s of 5s",
            facts.facts.iter().map(|f| f.pass).collect::<Vec<_>>(),
            elapsed.as_secs_f64()
        ),
    );
}

/// Every family's root step: `X = N(C)` for each component `C` of the
/// window minus the ball of radius 1.
fn root_steps(family: Arc<dyn GraphFamily>, horizon: u32) -> Vec<(usize, bool)> {
    let t = expand(family, horizon).unwrap();
    let whole = Host::whole(&t);
    let mut out = Vec::new();
    for c in whole.components_without(&t.ball(1)) {
        let x = whole.neighborhood(&c);
        let host = Host::induced(&t, &c.union(&x).copied().collect());
        let r = run(&host, &x, &[]).unwrap();
        let audit = audit_observation(&host, &r).unwrap();
        out.push((r.outputs.len(), audit.passed()));
    }
    out
}

#[test]
fn criterion_3_observation_suite() {
    let families: Vec<(Arc<dyn GraphFamily>, u32)> = vec![
        (Arc::new(HalfGrid::new(4)), 16),
        (Arc::new(FullGrid::new()), 14),
        (Arc::new(BinaryTree::new()), 12),
        (Arc::new(Comb::new()), 14),
        (Arc::new(AppendixGadget::new()), 20),
        (Arc::new(half_grid_pendant()), 16),
    ];
    let mut failures = Vec::new();
    let mut outputs = 0;
    for (f, h) in families {
        let name = f.name();
        for (n, ok) in root_steps(f, h) {
            outputs += n;
            if !ok {
                failures.push(name.clone());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut planted_regions = 0;
    for case in 0..50 {
        let n = rng.gen_range(3..=7);
        let ladders = rng.gen_range(1..=3);
        let fam = random_planted(&mut rng, n, ladders, 3);
        let t = expand(Arc::new(fam), planted_horizon(n, 3)).unwrap();
        let host = Host::whole(&t);
        let size = rng.gen_range(1..=n.min(4)) as usize;
        let core: Vec<usize> = (0..n).map(|i| t.set_of_labels(&[i.to_string()]).unwrap()).flat_map(|s| s.into_iter()).collect();
        let x: VSet = (0..size).map(|_| core[rng.gen_range(0..core.len())]).collect();
        let r = run(&host, &x, &[]).unwrap();
        planted_regions += r.outputs.len();
        if !audit_observation(&host, &r).unwrap().passed() {
            failures.push(format!("planted case {case}"));
        }
    }
    report(
        3,
        failures.is_empty() && outputs > 0 && planted_regions > 0,
        "observation properties on every root step and 50 planted hosts",
        format!("{outputs} family regions, {planted_regions} planted regions, failures {failures:?}"),
    );
}

fn envelope_ok(host: &Host, r: &EnvelopeResult) -> bool {
    let boundary = ids(&boundary_of(host, &r.envelope));
    r.audit.passed() && boundary == r.closure_ends && r.boundary_witness == boundary
}

#[test]
fn criterion_4_envelope_contracts() {
    let mut results: Vec<(String, bool, usize)> = Vec::new();

    let t = expand(Arc::new(HalfGrid::new(4)), 12).unwrap();
    let host = Host::whole(&t);
    let r = envelope(&host, &PointSet::vertices(t.ball(3))).unwrap();
    results.push(("half grid ball".into(), envelope_ok(&host, &r), 0));
    let e = t.oracle().end("end", 12).unwrap();
    let r = envelope(&host, &PointSet::new(VSet::new(), vec![e])).unwrap();
    results.push(("half grid end".into(), envelope_ok(&host, &r), 0));
    let column: VSet = (0..t.len()).filter(|&v| matches!(t.vertex(v), endlink::Vertex::Grid(1, _))).collect();
    let r = envelope(&host, &PointSet::vertices(column)).unwrap();
    results.push(("half grid column".into(), envelope_ok(&host, &r), 0));

    let t = expand(Arc::new(half_grid_pendant()), 12).unwrap();
    let host = Host::whole(&t);
    let pendant = host.region(t.set_of_labels(&["0", "1", "2"]).unwrap());
    let e = t.oracle().end("end", 12).unwrap();
    let x = PointSet::new(VSet::new(), vec![e]);
    let r = envelope_avoiding(&host, &x, std::slice::from_ref(&pendant)).unwrap();
    results.push(("pendant avoided".into(), envelope_ok(&host, &r), r.replaced.len()));

    let t = expand(Arc::new(AppendixGadget::new()), 20).unwrap();
    let host = Host::whole(&t);
    let one_per_gadget: VSet = (1..=6).map(|j| t.index_of(&AppendixGadget::y1(j)).unwrap()).collect();
    let r = envelope(&host, &PointSet::vertices(one_per_gadget)).unwrap();
    results.push(("one vertex per gadget".into(), envelope_ok(&host, &r), 0));
    let x = t.set_of(&AppendixGadget::q_x(1)).unwrap();
    let out = run(&host, &x, &[]).unwrap();
    let regions: Vec<Region> = out.maximal_outputs();
    let core: VSet = t.ball(3).difference(&regions.iter().flat_map(|r| r.vertices.iter().copied()).collect()).copied().collect();
    let r = envelope_avoiding(&host, &PointSet::vertices(core), &regions).unwrap();
    results.push(("gadget regions avoided".into(), envelope_ok(&host, &r), r.replaced.len()));

    let t = expand(Arc::new(Comb::new()), 14).unwrap();
    let host = Host::whole(&t);
    let spine = t.oracle().end("spine", 14).unwrap();
    let r = envelope(&host, &PointSet::new(t.ball(2), vec![spine])).unwrap();
    results.push(("comb spine".into(), envelope_ok(&host, &r), 0));

    let replaced: usize = results.iter().map(|r| r.2).sum();
    report(
        4,
        results.iter().all(|r| r.1) && replaced > 0,
        "envelope contracts on all fixtures, avoidance formula exercised",
        format!("{:?}", results),
    );
}

fn build_and_check(family: Arc<dyn GraphFamily>, horizon: u32, levels: u32) -> (Truncation, TreeDecomposition, TreeDecomposition, VerificationReport) {
    let t = expand(family.clone(), horizon).unwrap();
    let spec = undominated_gdelta(family);
    let built = build(&t, &spec, levels).unwrap();
    let td = contract_to_linked(&t, &built).unwrap();
    let r = verify(&t, &spec, &td, usize::MAX).unwrap();
    (t, built, td, r)
}

#[test]
fn criterion_5_half_grid_end_to_end() {
    let start = Instant::now();
    let g: Arc<dyn GraphFamily> = Arc::new(HalfGrid::new(4));
    let (t, built, td, r) = build_and_check(g.clone(), 20, 5);
    let spec = undominated_gdelta(g);
    let built_report = verify(&t, &spec, &built, usize::MAX).unwrap();
    let five = r.properties()[..5].iter().all(|p| p.pass);
    let all_pairs = |r: &VerificationReport| r.linked.pass && r.linked.checked == r.pairs_total;
    let end = &r.ends[0];
    let ray_pairs_at_four = r.pairs_total > 0;
    let stabilized = end.stabilized.map(|(v, _)| v) == Some(4) && end.degree_status == LiminfStatus::Consistent;
    let last = end.adhesion_sizes.last().copied();
    let elapsed = start.elapsed();
    report(
        5,
        five && all_pairs(&r) && all_pairs(&built_report) && ray_pairs_at_four && stabilized && last == Some(4)
            && elapsed < Duration::from_secs(30),
        "half_grid(4) build, contract and verify at horizon 20, 5 levels",
        format!(
            "{} nodes, adhesions along the ray {:?}, {} comparable pairs linked, {:.2}s of 30s",
            td.len(),
            end.adhesion_sizes,
            r.pairs_total,
            elapsed.as_secs_f64()
        ),
    );
}

fn lemma_builds() -> Vec<(String, Arc<dyn GraphFamily>, u32, u32)> {
    vec![
        ("half_grid".into(), Arc::new(HalfGrid::new(4)), 20, 6),
        ("appendix_gadget".into(), Arc::new(AppendixGadget::new()), 24, 4),
        ("full_grid".into(), Arc::new(FullGrid::new()), 16, 4),
        ("comb".into(), Arc::new(Comb::new()), 16, 5),
        ("binary_tree".into(), Arc::new(BinaryTree::new()), 14, 4),
        ("half_grid_pendant".into(), Arc::new(half_grid_pendant()), 16, 5),
    ]
}

#[test]
fn criterion_6_minimum_separator_adhesions() {
    let mut rows = Vec::new();
    let mut pass = true;
    let mut total = 0;
    for (name, fam, h, levels) in lemma_builds() {
        let (_, _, _, r) = build_and_check(fam, h, levels);
        let checked = r.separator_witnesses.iter().filter(|w| w.checked).count();
        let ok = r.separator_witnesses.iter().filter(|w| w.checked && w.witness.is_some()).count();
        pass &= checked == ok && r.separator_lemma.pass;
        total += checked;
        rows.push(format!("{name} {ok}/{checked}"));
    }
    report(
        6,
        pass && total > 0,
        "every checked ray edge has a later minimum-separator adhesion",
        rows.join(", "),
    );
}

#[test]
fn criterion_7_coverage_bound() {
    let mut rows = Vec::new();
    let mut pass = true;
    for (name, fam, h, levels) in lemma_builds() {
        let (t, built, _, _) = build_and_check(fam, h, levels);
        let c = construction_checks(&t, &built);
        pass &= c.coverage.pass && c.coverage.checked > 0;
        rows.push(format!("{name} {} vertices, {} violations", c.coverage.checked, c.coverage_failures.len()));
    }
    report(7, pass, "vertices of X_n enter a bag within |V_e| - 1 rounds", rows.join(", "));
}

type Signature = (Vec<Vec<String>>, Vec<(String, usize, Vec<String>)>, Vec<(Option<usize>, Vec<String>)>);

/// Separators, root-step regions and the contracted tree, as labels.
fn answers(family: Arc<dyn GraphFamily>, horizon: u32, xs: &[Vec<endlink::Vertex>], end_ids: &[String], levels: u32) -> Signature {
    let t = expand(family.clone(), horizon).unwrap();
    let host = Host::whole(&t);
    let mut seps = Vec::new();
    for x in xs {
        let x = t.set_of(x).unwrap();
        for id in end_ids {
            let e = t.oracle().end(id, horizon).unwrap();
            seps.push(t.labels(&min_end_separator(&host, &x, &e).unwrap().separator));
        }
    }
    let mut regions = Vec::new();
    for c in host.components_without(&t.ball(1)) {
        let x = host.neighborhood(&c);
        let sub = Host::induced(&t, &c.union(&x).copied().collect());
        for s in run(&sub, &x, &[]).unwrap().outputs {
            if end_ids.contains(&s.end) {
                regions.push((s.end.clone(), s.order, t.labels(&s.region.neighborhood)));
            }
        }
    }
    regions.sort();
    let spec: GDeltaSpec = undominated_gdelta(family);
    let built = build(&t, &spec, levels).unwrap();
    let td = contract_to_linked(&t, &built).unwrap();
    let tree = td.nodes.iter().map(|n| (n.parent, t.labels(&n.bag))).collect();
    (seps, regions, tree)
}

#[test]
fn criterion_8_horizon_stability() {
    let h = 16;
    let g: Arc<dyn GraphFamily> = Arc::new(HalfGrid::new(4));
    let hg = HalfGrid::new(4);
    let xs: Vec<Vec<endlink::Vertex>> = (1..=3).map(|j| hg.rung(j)).collect();
    let ends = vec!["end".to_string()];
    let a = answers(g.clone(), h, &xs, &ends, 5);
    let b = answers(g, h + 4, &xs, &ends, 5);
    let grid_same = a == b;

    let g: Arc<dyn GraphFamily> = Arc::new(AppendixGadget::new());
    let xs: Vec<Vec<endlink::Vertex>> = (1..=3).map(AppendixGadget::q_x).collect();
    let mut ends = vec![endlink::families::PSI.to_string()];
    for j in 1..=h - 9 {
        ends.push(eps3(j));
        ends.push(eps4(j));
    }
    let c = answers(g.clone(), h, &xs, &ends, 4);
    let d = answers(g, h + 4, &xs, &ends, 4);
    let gadget_same = c == d;
    report(
        8,
        grid_same && gadget_same,
        "separator, region and decomposition answers agree at horizons 16 and 20",
        format!(
            "half_grid {} separators {} regions {} nodes; gadget {} separators {} regions {} nodes",
            a.0.len(), a.1.len(), a.2.len(), c.0.len(), c.1.len(), c.2.len()
        ),
    );
}

fn fixture(edges: &[(&str, &str)], bags: &[&[&str]], parents: &[Option<usize>]) -> (Vec<String>, bool) {
    let mut names: Vec<&str> = vec![edges[0].0];
    for &(a, b) in edges {
        for v in [a, b] {
            if !names.contains(&v) {
                names.push(v);
            }
        }
    }
    let g = endlink::families::FiniteGraph::from_edges(&names, edges).unwrap();
    let t = expand(Arc::new(g), 20).unwrap();
    let spec = undominated_gdelta(t.family().clone());
    let bags: Vec<VSet> = bags.iter().map(|b| t.set_of_labels(b).unwrap()).collect();
    let td = TreeDecomposition::from_bags(parents, bags);
    let r = verify(&t, &spec, &td, 100).unwrap();
    let failing: Vec<&endlink::decomposition::PropertyCheck> = r.properties().into_iter().filter(|p| !p.pass).collect();
    let witnessed = failing.iter().all(|p| p.witness.is_some());
    (failing.iter().map(|p| p.name.clone()).collect(), witnessed)
}

#[test]
fn criterion_9_adversarial_fixtures() {
    let hub = [
        ("r", "x1"), ("r", "x2"), ("r", "x3"), ("x1", "h"), ("x2", "h"), ("x3", "h"),
        ("h", "y1"), ("h", "y2"), ("h", "y3"), ("y1", "z"), ("y2", "z"), ("y3", "z"),
    ];
    let inflated = fixture(
        &hub,
        &[&["r", "x1", "x2", "x3"], &["x1", "x2", "x3", "h", "y1", "y2", "y3"], &["y1", "y2", "y3", "z"]],
        &[None, Some(0), Some(1)],
    );
    let split = fixture(&[("r", "a"), ("r", "b")], &[&["r"], &["r", "a", "b"]], &[None, Some(0)]);
    let loose = fixture(&[("r", "a"), ("a", "b")], &[&["r", "a"], &["r", "a", "b"]], &[None, Some(0)]);
    let pass = inflated == (vec!["linked".to_string()], true)
        && split == (vec!["componental".to_string()], true)
        && loose == (vec!["tight".to_string()], true);
    report(
        9,
        pass,
        "corrupted decompositions fail exactly the intended property with a witness",
        format!("inflated bag {inflated:?}, split upper part {split:?}, loose adhesion {loose:?}"),
    );
}
