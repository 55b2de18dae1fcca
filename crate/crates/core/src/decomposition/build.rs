use std::collections::BTreeSet;

use crate::ends::{boundary_depth, boundary_of, host_ends, ids, is_linked_to_end, require, GDeltaSpec, MARGIN};
use crate::envelope::{envelope_avoiding, EnvelopeResult, PointSet};
use crate::error::{Error, Result};
use crate::graph::{nested, Host, Region, Truncation, VSet};
use crate::region_algorithm::{maximal, run, AlgorithmRun};

use super::{Node, PendingPart, TreeDecomposition};

/// Everything computed while extending the tree at one leaf.
#[derive(Clone, Debug)]
pub struct PartLog {
    pub node: usize,
    pub parent: usize,
    pub component: VSet,
    pub adhesion: VSet,
    pub run: AlgorithmRun,
    /// `I`: the host minus every region of `𝒟'_f ∪ 𝒞_f`.
    pub interior: VSet,
    pub u1: VSet,
    pub u2: Vec<String>,
    pub u3: VSet,
    /// Maximal regions the bag was made to avoid.
    pub avoided: Vec<Region>,
    pub envelope: EnvelopeResult,
}

/// Per-round checks of the invariants the construction maintains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundAudit {
    /// Every new leaf component has a neighbourhood within the boundary depth.
    pub finite_adhesion: bool,
    /// Every new leaf component has its neighbourhood inside its parent bag.
    pub adhesion_in_parent: bool,
    /// Region families are nested, of order below the adhesion and outside the bag.
    pub regions_valid: bool,
}

impl RoundAudit {
    pub fn passed(&self) -> bool {
        self.finite_adhesion && self.adhesion_in_parent && self.regions_valid
    }
}

#[derive(Clone, Debug)]
pub struct RoundLog {
    pub round: u32,
    pub parts: Vec<PartLog>,
    pub audit: RoundAudit,
}

fn union(regions: &[Region]) -> VSet {
    regions.iter().flat_map(|r| r.vertices.iter().copied()).collect()
}

fn dedup(regions: Vec<Region>) -> Vec<Region> {
    let mut seen = BTreeSet::new();
    regions
        .into_iter()
        .filter(|r| seen.insert(r.vertices.clone()))
        .collect()
}

/// Builds `levels` rounds of the decomposition inside the window `t`.
pub fn build(t: &Truncation, spec: &GDeltaSpec, levels: u32) -> Result<TreeDecomposition> {
    if t.is_empty() {
        return Err(Error::Precondition("the graph has no vertices".into()));
    }
    require(t, levels + MARGIN, "decomposition levels")?;
    let whole = Host::whole(t);
    let root = t
        .index_of(&t.family().root())
        .ok_or_else(|| Error::Precondition("root is missing from the window".into()))?;
    let mut td = TreeDecomposition {
        nodes: vec![Node {
            parent: None,
            height: 0,
            bag: [root].into(),
            component: None,
            regions: Vec::new(),
            round: 0,
        }],
        levels,
        ..Default::default()
    };
    let mut covered: VSet = [root].into();
    td.pending = whole
        .components_without(&covered)
        .into_iter()
        .map(|c| PendingPart {
            parent: 0,
            neighborhood: whole.neighborhood(&c),
            component: c,
        })
        .collect();

    let db = boundary_depth(t);
    for round in 1..=levels {
        let todo = std::mem::take(&mut td.pending);
        let mut parts = Vec::new();
        let mut next = Vec::new();
        let mut regions_valid = true;
        for part in todo {
            let (log, node, children) = extend(t, spec, &td, &part, round)
                .map_err(|e| contextualize(e, round))?;
            let id = td.nodes.len();
            for r in &node.regions {
                regions_valid &= r.order() < part.neighborhood.len() && r.vertices.is_disjoint(&node.bag);
            }
            for i in 0..node.regions.len() {
                for j in i + 1..node.regions.len() {
                    regions_valid &= nested(t, &node.regions[i], &node.regions[j]);
                }
            }
            covered.extend(node.bag.iter().copied());
            td.nodes.push(node);
            next.extend(children.into_iter().map(|(c, n)| PendingPart {
                parent: id,
                component: c,
                neighborhood: n,
            }));
            parts.push(PartLog { node: id, ..log });
        }
        let finite_adhesion = next
            .iter()
            .all(|p| p.neighborhood.iter().all(|&v| t.depth(v) <= db));
        let adhesion_in_parent = next
            .iter()
            .all(|p| p.neighborhood.is_subset(&td.nodes[p.parent].bag));
        td.pending = next;
        td.log.push(RoundLog {
            round,
            parts,
            audit: RoundAudit {
                finite_adhesion,
                adhesion_in_parent,
                regions_valid,
            },
        });
        if td.pending.is_empty() {
            break;
        }
    }
    Ok(td)
}

fn contextualize(e: Error, round: u32) -> Error {
    match e {
        Error::HorizonTooSmall {
            required,
            actual,
            context,
        } => Error::HorizonTooSmall {
            required,
            actual,
            context: format!("round {round}: {context}"),
        },
        other => other,
    }
}

type Extension = (PartLog, Node, Vec<(VSet, VSet)>);

fn extend(
    t: &Truncation,
    spec: &GDeltaSpec,
    td: &TreeDecomposition,
    part: &PendingPart,
    round: u32,
) -> Result<Extension> {
    let whole = Host::whole(t);
    let c = &part.component;
    let x = &part.neighborhood;
    let closed: VSet = c.union(x).copied().collect();
    let host = Host::induced(t, &closed);

    let inherited: Vec<Region> = td.nodes[part.parent]
        .regions
        .iter()
        .filter(|d| d.vertices.is_subset(c) && d.vertices != *c)
        .cloned()
        .collect();
    let inputs = maximal(&inherited);
    let algorithm = run(&host, x, &inputs)?;

    let mut all = inherited;
    all.extend(algorithm.regions());
    let all = dedup(all);
    let avoided = maximal(&all);
    let in_regions = union(&all);
    let interior: VSet = closed.difference(&in_regions).copied().collect();

    let ball = spec.vertices_at(t, round);
    let u1: VSet = interior.intersection(&ball).copied().collect();
    let xi_ends = spec.ends_at(t.horizon(), round);
    let xi_ids = ids(&xi_ends);
    let interior_boundary = ids(&boundary_of(&host, &interior));
    let u2_ends: Vec<_> = host_ends(&host)
        .into_iter()
        .filter(|e| xi_ids.contains(&e.id) && interior_boundary.contains(&e.id))
        .collect();
    let mut u3 = VSet::new();
    for d in &avoided {
        let meets_vertices = !d.vertices.is_disjoint(&ball);
        let meets_ends = || {
            boundary_of(&whole, &d.vertices)
                .iter()
                .any(|e| xi_ids.contains(&e.id))
        };
        if meets_vertices || meets_ends() {
            u3.extend(d.neighborhood.iter().copied());
        }
    }

    let mut core = u1.clone();
    core.extend(u3.iter().copied());
    core.extend(x.iter().copied());
    let point_set = PointSet::new(core, u2_ends.clone());
    let env = envelope_avoiding(&host, &point_set, &avoided)?;
    let bag = env.envelope.clone();
    if bag.is_empty() {
        return Err(Error::Precondition(format!(
            "round {round}: empty bag for a component of size {}",
            c.len()
        )));
    }

    let children: Vec<(VSet, VSet)> = host
        .components_without(&bag)
        .into_iter()
        .map(|comp| {
            let n = whole.neighborhood(&comp);
            (comp, n)
        })
        .collect();

    let node = Node {
        parent: Some(part.parent),
        height: td.nodes[part.parent].height + 1,
        bag,
        component: Some(c.clone()),
        regions: all,
        round,
    };
    let log = PartLog {
        node: usize::MAX,
        parent: part.parent,
        component: c.clone(),
        adhesion: x.clone(),
        run: algorithm,
        interior,
        u1,
        u2: ids(&u2_ends),
        u3,
        avoided,
        envelope: env,
    };
    Ok((log, node, children))
}

/// Contracts every edge whose adhesion is not linked to an end living
/// above it. Bags of merged nodes are united.
pub fn contract_to_linked(t: &Truncation, td: &TreeDecomposition) -> Result<TreeDecomposition> {
    let whole = Host::whole(t);
    let ends = host_ends(&whole);
    let n = td.nodes.len();
    let mut keep = vec![false; n];
    keep[0] = true;
    for e in td.edges() {
        let adhesion = td.adhesion(e);
        let above = td.strict_upper(e);
        for end in &ends {
            if end.tail(t).is_some_and(|v| above.contains(&v))
                && is_linked_to_end(&whole, &adhesion, end)?
            {
                keep[e] = true;
                break;
            }
        }
    }
    let rep = |mut c: usize| {
        while !keep[c] {
            c = td.nodes[c].parent.expect("root is kept");
        }
        c
    };
    let mut new_id = vec![usize::MAX; n];
    let mut nodes: Vec<Node> = Vec::new();
    for i in 0..n {
        if keep[i] {
            new_id[i] = nodes.len();
            let parent = td.nodes[i].parent.map(|p| new_id[rep(p)]);
            nodes.push(Node {
                parent,
                height: parent.map_or(0, |p| nodes[p].height + 1),
                bag: VSet::new(),
                ..td.nodes[i].clone()
            });
        }
    }
    for i in 0..n {
        let r = new_id[rep(i)];
        nodes[r].bag.extend(td.nodes[i].bag.iter().copied());
    }
    let pending = td
        .pending
        .iter()
        .map(|p| PendingPart {
            parent: new_id[rep(p.parent)],
            ..p.clone()
        })
        .collect();
    Ok(TreeDecomposition {
        nodes,
        pending,
        log: td.log.clone(),
        levels: td.levels,
    })
}
