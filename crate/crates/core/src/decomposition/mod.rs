//! Rooted tree-decompositions: level-by-level construction, contraction to
//! the linked edges, the end-to-tree map, and a verifier for every property.

mod build;
mod export;
mod verify;

pub use build::{build, contract_to_linked, PartLog, RoundAudit, RoundLog};
pub use export::{report_json, to_dot, to_json};
pub use verify::{
    construction_checks, end_tree_map, verify, ConstructionReport, CoverageCheck, EndImage,
    EndReport, LiminfStatus, PairCheck, PropertyCheck, SeparatorWitness, VerificationReport,
};

use crate::graph::{Host, Region, Truncation, VSet};

/// A node of the decomposition tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub parent: Option<usize>,
    pub height: u32,
    pub bag: VSet,
    /// The component `C` this node was created for (`G↑̊e` of its parent edge).
    pub component: Option<VSet>,
    /// `𝒟_e` for the edge to the parent.
    pub regions: Vec<Region>,
    /// Construction round that created the node; the root has round 0.
    pub round: u32,
}

/// A component of the graph minus the built part, not yet decomposed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PendingPart {
    pub parent: usize,
    pub component: VSet,
    pub neighborhood: VSet,
}

#[derive(Clone, Debug, Default)]
pub struct TreeDecomposition {
    pub nodes: Vec<Node>,
    pub pending: Vec<PendingPart>,
    pub log: Vec<RoundLog>,
    pub levels: u32,
}

impl TreeDecomposition {
    /// A decomposition from explicit parents and bags; node 0 must be the root.
    pub fn from_bags(parents: &[Option<usize>], bags: Vec<VSet>) -> Self {
        let mut nodes: Vec<Node> = Vec::with_capacity(bags.len());
        for (i, bag) in bags.into_iter().enumerate() {
            let parent = parents[i];
            let height = parent.map_or(0, |p| nodes[p].height + 1);
            nodes.push(Node {
                parent,
                height,
                bag,
                component: None,
                regions: Vec::new(),
                round: height,
            });
        }
        TreeDecomposition {
            nodes,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn children(&self, i: usize) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&c| self.nodes[c].parent == Some(i))
            .collect()
    }

    /// Tree edges, each named by its child node.
    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&c| self.nodes[c].parent.is_some())
    }

    /// `V_e` for the edge above `child`.
    pub fn adhesion(&self, child: usize) -> VSet {
        match self.nodes[child].parent {
            Some(p) => self.nodes[p]
                .bag
                .intersection(&self.nodes[child].bag)
                .copied()
                .collect(),
            None => VSet::new(),
        }
    }

    /// True when `a` lies on the path from the root to `b` (inclusive).
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let mut cur = Some(b);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.nodes[c].parent;
        }
        false
    }

    /// Edges (child nodes) on the path from `top` (exclusive) down to `bottom`.
    pub fn path_edges(&self, top: usize, bottom: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = bottom;
        while cur != top {
            out.push(cur);
            cur = self.nodes[cur].parent.expect("top is an ancestor");
        }
        out.reverse();
        out
    }

    pub fn subtree(&self, i: usize) -> Vec<usize> {
        let mut out = vec![i];
        let mut k = 0;
        while k < out.len() {
            out.extend(self.children(out[k]));
            k += 1;
        }
        out
    }

    /// `G↑e`: bags of the subtree below the edge plus pending parts hanging there.
    pub fn upper(&self, child: usize) -> VSet {
        let sub = self.subtree(child);
        let mut out = VSet::new();
        for &s in &sub {
            out.extend(self.nodes[s].bag.iter().copied());
        }
        for p in &self.pending {
            if sub.contains(&p.parent) {
                out.extend(p.component.iter().copied());
            }
        }
        out
    }

    /// `G↑̊e = G↑e \ V_e`.
    pub fn strict_upper(&self, child: usize) -> VSet {
        let adhesion = self.adhesion(child);
        self.upper(child)
            .into_iter()
            .filter(|v| !adhesion.contains(v))
            .collect()
    }

    /// Round in which each vertex first enters a bag.
    pub fn entry_rounds(&self, t: &Truncation) -> Vec<Option<u32>> {
        let mut entry = vec![None; t.len()];
        for n in &self.nodes {
            for &v in &n.bag {
                let e: &mut Option<u32> = &mut entry[v];
                if e.map_or(true, |r| n.round < r) {
                    *e = Some(n.round);
                }
            }
        }
        entry
    }

    /// Attaches every component of the window minus all bags as a pending
    /// part below the last node whose bag holds its neighbourhood.
    pub fn attach_remainder(&mut self, t: &Truncation) {
        let whole = Host::whole(t);
        let covered: VSet = self.nodes.iter().flat_map(|n| n.bag.iter().copied()).collect();
        self.pending = whole
            .components_without(&covered)
            .into_iter()
            .map(|c| {
                let neighborhood = whole.neighborhood(&c);
                let parent = (0..self.nodes.len())
                    .rev()
                    .find(|&i| neighborhood.is_subset(&self.nodes[i].bag))
                    .unwrap_or(0);
                PendingPart {
                    parent,
                    component: c,
                    neighborhood,
                }
            })
            .collect();
    }

    pub fn max_adhesion(&self) -> usize {
        self.edges().map(|e| self.adhesion(e).len()).max().unwrap_or(0)
    }
}
