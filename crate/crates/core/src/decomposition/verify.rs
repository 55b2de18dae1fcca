use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::ends::{
    boundary_depth, boundary_of, component_of_end, host_ends, ids, min_end_separator, require,
    Degree, EndHandle, GDeltaSpec, MARGIN,
};
use crate::error::Result;
use crate::flow::Side;
use crate::graph::{Host, Truncation, VSet, Vertex};
use crate::separation::{max_disjoint_paths, min_separator};

use super::TreeDecomposition;

/// Outcome of one property with a witness when it fails.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyCheck {
    pub name: String,
    pub pass: bool,
    pub checked: usize,
    pub witness: Option<Value>,
}

impl PropertyCheck {
    fn new(name: &str) -> Self {
        PropertyCheck {
            name: name.to_string(),
            pass: true,
            checked: 0,
            witness: None,
        }
    }

    fn fail(&mut self, witness: Value) {
        if self.pass {
            self.witness = Some(witness);
        }
        self.pass = false;
    }
}

/// A comparable pair of edges `e < f` with the flow between their adhesions.
#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub lower: usize,
    pub upper: usize,
    pub min_adhesion: usize,
    pub flow: usize,
    pub cut: Vec<String>,
}

/// Where an end goes in the tree: a node, or a ray of edges that runs into
/// an undecomposed part (`pending` indexes [`TreeDecomposition::pending`]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum EndImage {
    Node(usize),
    Ray { edges: Vec<usize>, pending: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LiminfStatus {
    Consistent,
    Inconsistent,
    Unstabilized,
}

#[derive(Clone, Debug, Serialize)]
pub struct EndReport {
    pub id: String,
    pub in_psi: bool,
    pub image: EndImage,
    pub combined_degree: Degree,
    pub adhesion_sizes: Vec<usize>,
    /// Final value of the adhesion sizes with the index where its run starts.
    pub stabilized: Option<(usize, usize)>,
    pub degree_status: LiminfStatus,
    pub dominator_status: LiminfStatus,
}

/// One edge of a ray checked for a later minimum separator among the adhesions.
#[derive(Clone, Debug, Serialize)]
pub struct SeparatorWitness {
    pub end: String,
    pub edge: usize,
    pub order: usize,
    pub witness: Option<usize>,
    /// False when neither a witness nor an adhesion past the certified depth
    /// exists on the built prefix.
    pub checked: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverageCheck {
    pub vertex: String,
    pub round: u32,
    pub adhesion: usize,
    pub entry: Option<u32>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub t1: PropertyCheck,
    pub t2: PropertyCheck,
    pub finite_adhesion: PropertyCheck,
    pub tight: PropertyCheck,
    pub componental: PropertyCheck,
    pub linked: PropertyCheck,
    pub pairs_total: usize,
    pub failing_pairs: Vec<PairCheck>,
    pub displays: PropertyCheck,
    pub undetermined_pairs: usize,
    pub ends: Vec<EndReport>,
    pub separator_witnesses: Vec<SeparatorWitness>,
    pub separator_lemma: PropertyCheck,
    /// Whether each bag induces a connected subgraph (informational).
    pub connected_parts: Vec<bool>,
}

impl VerificationReport {
    /// The six decomposition properties.
    pub fn properties(&self) -> [&PropertyCheck; 6] {
        [
            &self.t1,
            &self.t2,
            &self.finite_adhesion,
            &self.tight,
            &self.componental,
            &self.linked,
        ]
    }

    pub fn passed(&self) -> bool {
        self.properties().iter().all(|p| p.pass)
    }

    pub fn displays_psi(&self) -> bool {
        self.displays.pass
    }
}

fn labels(t: &Truncation, s: &VSet) -> Vec<String> {
    t.labels(s)
}

fn check_t1(t: &Truncation, td: &TreeDecomposition) -> PropertyCheck {
    let mut p = PropertyCheck::new("T1");
    let mut owner = vec![None; t.len()];
    for (i, part) in td.pending.iter().enumerate() {
        for &v in &part.component {
            owner[v] = Some(i);
        }
    }
    let mut in_bag = vec![false; t.len()];
    for n in &td.nodes {
        for &v in &n.bag {
            in_bag[v] = true;
        }
    }
    for v in 0..t.len() {
        p.checked += 1;
        if !in_bag[v] && owner[v].is_none() {
            p.fail(json!({ "uncovered_vertex": t.label(v) }));
        }
    }
    for (u, v) in t.edges() {
        p.checked += 1;
        let pending_ok = |a: usize, b: usize| {
            owner[a].is_some_and(|i| {
                let part = &td.pending[i];
                part.component.contains(&b) || part.neighborhood.contains(&b)
            })
        };
        if pending_ok(u, v) || pending_ok(v, u) {
            continue;
        }
        if !td.nodes.iter().any(|n| n.bag.contains(&u) && n.bag.contains(&v)) {
            p.fail(json!({ "uncovered_edge": [t.label(u), t.label(v)] }));
        }
    }
    p
}

fn check_t2(t: &Truncation, td: &TreeDecomposition) -> PropertyCheck {
    let mut p = PropertyCheck::new("T2");
    let mut tops: Vec<Vec<usize>> = vec![Vec::new(); t.len()];
    for (i, n) in td.nodes.iter().enumerate() {
        for &v in &n.bag {
            let top = n.parent.map_or(true, |q| !td.nodes[q].bag.contains(&v));
            if top {
                tops[v].push(i);
            }
        }
    }
    for (v, nodes) in tops.iter().enumerate() {
        if nodes.is_empty() {
            continue;
        }
        p.checked += 1;
        if nodes.len() > 1 {
            p.fail(json!({ "vertex": t.label(v), "disconnected_at": nodes }));
        }
        if let Some(part) = td.pending.iter().position(|q| q.component.contains(&v)) {
            p.fail(json!({ "vertex": t.label(v), "also_pending": part }));
        }
    }
    p
}

fn check_finite_adhesion(t: &Truncation, td: &TreeDecomposition) -> PropertyCheck {
    let mut p = PropertyCheck::new("finite_adhesion");
    let db = boundary_depth(t);
    for e in td.edges() {
        p.checked += 1;
        let adhesion = td.adhesion(e);
        if let Some(&v) = adhesion.iter().find(|&&v| t.depth(v) > db) {
            p.fail(json!({ "edge": e, "deep_vertex": t.label(v), "boundary_depth": db }));
        }
    }
    p
}

fn check_tight_componental(t: &Truncation, td: &TreeDecomposition) -> (PropertyCheck, PropertyCheck) {
    let whole = Host::whole(t);
    let mut tight = PropertyCheck::new("tight");
    let mut comp = PropertyCheck::new("componental");
    for e in td.edges() {
        let adhesion = td.adhesion(e);
        let above = td.strict_upper(e);
        let sub = Host::induced(t, &above);
        let parts = sub.components_without(&VSet::new());
        tight.checked += 1;
        comp.checked += 1;
        if parts.len() != 1 {
            comp.fail(json!({
                "edge": e,
                "components": parts.len(),
                "sizes": parts.iter().map(|c| c.len()).collect::<Vec<_>>(),
            }));
        }
        if !parts.iter().any(|c| whole.neighborhood(c) == adhesion) {
            tight.fail(json!({
                "edge": e,
                "adhesion": labels(t, &adhesion),
                "neighborhoods": parts.iter().map(|c| labels(t, &whole.neighborhood(c))).collect::<Vec<_>>(),
            }));
        }
    }
    (tight, comp)
}

/// Comparable pairs `(e, f)` with `e` strictly below `f` on a root path,
/// shallowest first.
fn comparable_pairs(td: &TreeDecomposition) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for f in td.edges() {
        let path = td.path_edges(0, f);
        for &e in &path[..path.len() - 1] {
            out.push((e, f));
        }
    }
    out.sort_by_key(|&(e, f)| (td.nodes[f].height, f, td.nodes[e].height));
    out
}

fn check_linked(
    t: &Truncation,
    td: &TreeDecomposition,
    budget: usize,
) -> (PropertyCheck, usize, Vec<PairCheck>) {
    let pairs = comparable_pairs(td);
    let total = pairs.len();
    let results: Vec<PairCheck> = pairs
        .into_par_iter()
        .take(budget)
        .map(|(e, f)| {
            let path = td.path_edges(td.nodes[e].parent.expect("edge"), f);
            let min_adhesion = path.iter().map(|&g| td.adhesion(g).len()).min().unwrap_or(0);
            let (ve, vf) = (td.adhesion(e), td.adhesion(f));
            let flow = max_disjoint_paths(t, &ve, &vf).len();
            let cut = if flow < min_adhesion {
                t.labels(&min_separator(t, &ve, &vf, Side::NearestX))
            } else {
                Vec::new()
            };
            PairCheck {
                lower: e,
                upper: f,
                min_adhesion,
                flow,
                cut,
            }
        })
        .collect();
    let mut p = PropertyCheck::new("linked");
    p.checked = results.len();
    let failing: Vec<PairCheck> = results.into_iter().filter(|r| r.flow < r.min_adhesion).collect();
    if let Some(w) = failing.first() {
        p.fail(serde_json::to_value(w).expect("serializable"));
    }
    (p, total, failing)
}

/// Directs every edge towards the side containing `C(V_e, ε)` and follows
/// the arrows from the root, for every resolvable end of the window.
pub fn end_tree_map(t: &Truncation, td: &TreeDecomposition) -> Result<Vec<(EndHandle, EndImage)>> {
    let whole = Host::whole(t);
    let uppers: Vec<Option<VSet>> = (0..td.len())
        .map(|c| td.nodes[c].parent.map(|_| td.strict_upper(c)))
        .collect();
    let mut out = Vec::new();
    for e in host_ends(&whole) {
        let tail = e.tail(t).expect("resolvable ends live in the window");
        let mut node = 0;
        let mut edges = Vec::new();
        let image = loop {
            let next = td
                .children(node)
                .into_iter()
                .find(|&c| uppers[c].as_ref().is_some_and(|u| u.contains(&tail)));
            if let Some(c) = next {
                let adhesion = td.adhesion(c);
                require(t, t.max_depth(&adhesion) + MARGIN, &format!("orienting an edge for `{}`", e.id))?;
                edges.push(c);
                node = c;
                continue;
            }
            match td
                .pending
                .iter()
                .position(|p| p.parent == node && p.component.contains(&tail))
            {
                Some(pending) => break EndImage::Ray { edges, pending },
                None => break EndImage::Node(node),
            }
        };
        out.push((e, image));
    }
    Ok(out)
}

fn degree_status(sizes: &[usize], degree: Degree) -> (Option<(usize, usize)>, LiminfStatus) {
    let Some(&last) = sizes.last() else {
        return (None, LiminfStatus::Unstabilized);
    };
    let start = sizes.iter().rposition(|&s| s != last).map_or(0, |p| p + 1);
    let run = sizes.len() - start;
    let stabilized = (run >= 2).then_some((last, start));
    let status = match degree {
        Degree::Finite(d) if run >= 2 && last == d as usize => LiminfStatus::Consistent,
        Degree::Finite(_) if run >= 3 => LiminfStatus::Inconsistent,
        Degree::Finite(_) => LiminfStatus::Unstabilized,
        Degree::Infinite => {
            let n = sizes.len();
            if n >= 3 && sizes[n - 3] < sizes[n - 2] && sizes[n - 2] < sizes[n - 1] {
                LiminfStatus::Consistent
            } else {
                LiminfStatus::Unstabilized
            }
        }
    };
    (stabilized, status)
}

fn dominator_status(t: &Truncation, td: &TreeDecomposition, edges: &[usize], dom: &[Vertex]) -> LiminfStatus {
    if edges.len() < 2 {
        return LiminfStatus::Unstabilized;
    }
    let a = td.adhesion(edges[edges.len() - 2]);
    let b = td.adhesion(edges[edges.len() - 1]);
    let recent: VSet = a.intersection(&b).copied().collect();
    let dom: VSet = dom.iter().filter_map(|d| t.index_of(d)).collect();
    if recent == dom {
        LiminfStatus::Consistent
    } else if !dom.is_subset(&recent) {
        LiminfStatus::Inconsistent
    } else {
        LiminfStatus::Unstabilized
    }
}

fn separator_witnesses(
    t: &Truncation,
    td: &TreeDecomposition,
    e: &EndHandle,
    edges: &[usize],
) -> Result<Vec<SeparatorWitness>> {
    let whole = Host::whole(t);
    let adhesions: Vec<VSet> = edges.iter().map(|&g| td.adhesion(g)).collect();
    let mut out = Vec::new();
    for i in 0..edges.len() {
        let ve = &adhesions[i];
        let sep = min_end_separator(&whole, ve, e)?;
        let order = sep.order();
        let mut witness = None;
        for j in i..edges.len() {
            let vf = &adhesions[j];
            if vf.len() != order {
                continue;
            }
            let Ok(c) = component_of_end(&whole, vf, e) else {
                continue;
            };
            if ve.iter().all(|v| vf.contains(v) || !c.vertices.contains(v)) {
                witness = Some(edges[j]);
                break;
            }
        }
        let beyond = adhesions[i..]
            .iter()
            .any(|vf| vf.iter().all(|&v| t.depth(v) > sep.certified_depth));
        out.push(SeparatorWitness {
            end: e.id.clone(),
            edge: edges[i],
            order,
            witness,
            checked: witness.is_some() || beyond,
        });
    }
    Ok(out)
}

/// Checks every property of `td` inside the window, the display of `Ψ`,
/// and the minimum-separator lemma along each displayed ray. At most
/// `pair_budget` comparable edge pairs are tested for linkedness.
pub fn verify(
    t: &Truncation,
    spec: &GDeltaSpec,
    td: &TreeDecomposition,
    pair_budget: usize,
) -> Result<VerificationReport> {
    let t1 = check_t1(t, td);
    let t2 = check_t2(t, td);
    let finite_adhesion = check_finite_adhesion(t, td);
    let (tight, componental) = check_tight_componental(t, td);
    let (linked, pairs_total, failing_pairs) = check_linked(t, td, pair_budget);

    let whole = Host::whole(t);
    let map = end_tree_map(t, td)?;
    let mut displays = PropertyCheck::new("displays_psi");
    let mut ends = Vec::new();
    let mut separator_witnesses_all = Vec::new();
    let xi = ids(&spec.xi(t.horizon()));
    let mut rays: Vec<(&str, &Vec<usize>, usize)> = Vec::new();
    for (e, image) in &map {
        let in_psi = spec.in_psi(e);
        displays.checked += 1;
        let mut sizes = Vec::new();
        let (mut stabilized, mut degree, mut dominators) =
            (None, LiminfStatus::Unstabilized, LiminfStatus::Unstabilized);
        match image {
            EndImage::Ray { edges, pending } => {
                if in_psi {
                    rays.push((e.id.as_str(), edges, *pending));
                    sizes = edges.iter().map(|&g| td.adhesion(g).len()).collect();
                    (stabilized, degree) = degree_status(&sizes, e.combined_degree());
                    dominators = dominator_status(t, td, edges, &e.dominators);
                    separator_witnesses_all.extend(separator_witnesses(t, td, e, edges)?);
                } else {
                    let first = (1..=td.levels).find(|&n| spec.end_in(e, n));
                    let last_adhesion = edges.last().map_or(0, |&g| td.adhesion(g).len() as u32);
                    if first.is_some_and(|n| n + last_adhesion.max(1) <= td.levels) {
                        displays.fail(json!({ "end": e.id, "reason": "end outside Psi maps to a ray" }));
                    }
                }
            }
            EndImage::Node(node) => {
                if in_psi {
                    displays.fail(json!({ "end": e.id, "reason": "end in Psi maps to a node", "node": node }));
                }
            }
        }
        ends.push(EndReport {
            id: e.id.clone(),
            in_psi,
            image: image.clone(),
            combined_degree: e.combined_degree(),
            adhesion_sizes: sizes,
            stabilized,
            degree_status: degree,
            dominator_status: dominators,
        });
    }
    let mut undetermined_pairs = 0;
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            if rays[i].1 == rays[j].1 && rays[i].2 == rays[j].2 {
                undetermined_pairs += 1;
            }
        }
    }
    for (i, n) in td.nodes.iter().enumerate() {
        for b in boundary_of(&whole, &n.bag) {
            displays.checked += 1;
            if !xi.contains(&b.id) {
                displays.fail(json!({ "node": i, "boundary_end": b.id, "reason": "bag boundary end outside Xi" }));
            }
        }
    }

    let mut separator_lemma = PropertyCheck::new("separator_lemma");
    for w in &separator_witnesses_all {
        if w.checked {
            separator_lemma.checked += 1;
            if w.witness.is_none() {
                separator_lemma.fail(serde_json::to_value(w).expect("serializable"));
            }
        }
    }
    for d in &ends {
        if d.degree_status == LiminfStatus::Inconsistent || d.dominator_status == LiminfStatus::Inconsistent {
            displays.fail(json!({ "end": d.id, "reason": "adhesions disagree with the end's degree or dominators" }));
        }
    }

    let connected_parts = td.nodes.iter().map(|n| whole.is_connected(&n.bag)).collect();
    Ok(VerificationReport {
        t1,
        t2,
        finite_adhesion,
        tight,
        componental,
        linked,
        pairs_total,
        failing_pairs,
        displays,
        undetermined_pairs,
        ends,
        separator_witnesses: separator_witnesses_all,
        separator_lemma,
        connected_parts,
    })
}

/// Checks that only make sense on a freshly built (uncontracted) tree.
#[derive(Clone, Debug, Serialize)]
pub struct ConstructionReport {
    /// Every region attached to an edge is the strict upper part of a later edge.
    pub regions_realized: PropertyCheck,
    pub regions_pending: usize,
    /// Vertices of `X_n` enter a bag within `|V_e| - 1` rounds after round `n`.
    pub coverage: PropertyCheck,
    pub coverage_failures: Vec<CoverageCheck>,
    /// Round audits and envelope audits.
    pub rounds: PropertyCheck,
}

impl ConstructionReport {
    pub fn passed(&self) -> bool {
        self.regions_realized.pass && self.coverage.pass && self.rounds.pass
    }
}

pub fn construction_checks(t: &Truncation, td: &TreeDecomposition) -> ConstructionReport {
    let mut realized = PropertyCheck::new("regions_realized");
    let mut regions_pending = 0;
    for (i, n) in td.nodes.iter().enumerate() {
        let sub = td.subtree(i);
        for d in &n.regions {
            realized.checked += 1;
            let found = sub[1..]
                .iter()
                .any(|&c| td.nodes[c].component.as_ref() == Some(&d.vertices));
            if found {
                continue;
            }
            let waiting = td
                .pending
                .iter()
                .any(|p| sub.contains(&p.parent) && d.vertices.is_subset(&p.component));
            if waiting {
                regions_pending += 1;
            } else {
                realized.fail(json!({
                    "node": i,
                    "region_size": d.vertices.len(),
                    "region_neighborhood": t.labels(&d.neighborhood),
                }));
            }
        }
    }

    let entry = td.entry_rounds(t);
    let mut coverage = PropertyCheck::new("coverage");
    let mut coverage_failures = Vec::new();
    for log in &td.log {
        let n = log.round;
        for part in &log.parts {
            let limit = n + (part.adhesion.len() as u32).max(1) - 1;
            for &v in part.component.iter().filter(|&&v| t.depth(v) <= n) {
                coverage.checked += 1;
                let pass = match entry[v] {
                    Some(m) => m <= limit,
                    None => limit > td.levels,
                };
                if !pass {
                    let c = CoverageCheck {
                        vertex: t.label(v),
                        round: n,
                        adhesion: part.adhesion.len(),
                        entry: entry[v],
                        pass,
                    };
                    coverage.fail(serde_json::to_value(&c).expect("serializable"));
                    coverage_failures.push(c);
                }
            }
        }
    }

    let mut rounds = PropertyCheck::new("rounds");
    for log in &td.log {
        rounds.checked += 1;
        if !log.audit.passed() {
            rounds.fail(json!({ "round": log.round, "audit": format!("{:?}", log.audit) }));
        }
        for part in &log.parts {
            rounds.checked += 1;
            if !part.envelope.audit.passed() {
                rounds.fail(json!({
                    "round": log.round,
                    "node": part.node,
                    "envelope_audit": format!("{:?}", part.envelope.audit),
                }));
            }
        }
    }
    ConstructionReport {
        regions_realized: realized,
        regions_pending,
        coverage,
        coverage_failures,
        rounds,
    }
}
