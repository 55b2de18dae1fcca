//! Finitely presented graph families, their finite BFS truncations, and the
//! component / neighbourhood primitives the rest of the crate is built on.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ends::EndOracle;
use crate::error::{Error, Result};

/// A set of vertex indices into a [`Truncation`].
pub type VSet = BTreeSet<usize>;

/// Parts of the gadget glued along each rung of the gadget family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GadgetPart {
    Y1,
    Y2,
    S2,
    /// Vertex of the degree-3 sub-grid, `(column, row)`.
    Low(u32, u32),
    /// Vertex of the degree-4 sub-grid, `(column, row)`.
    High(u32, u32),
}

/// Opaque, totally ordered vertex identifier. Families encode their
/// coordinates into one of these shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Id(u32),
    Grid(u32, u32),
    /// Binary tree node in heap numbering (root is 1).
    Tree(u64),
    /// Comb vertex; `tooth == 0` is on the spine.
    Comb(u32, u32),
    Apex,
    Gadget(u32, GadgetPart),
    /// Ladder `l`, column, row.
    Ladder(u32, u32, u32),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Vertex::Id(i) => write!(f, "{i}"),
            Vertex::Grid(i, j) => write!(f, "({i},{j})"),
            Vertex::Tree(n) => write!(f, "t{n}"),
            Vertex::Comb(s, t) => write!(f, "c({s},{t})"),
            Vertex::Apex => write!(f, "apex"),
            Vertex::Gadget(r, part) => match part {
                GadgetPart::Y1 => write!(f, "g{r}.y1"),
                GadgetPart::Y2 => write!(f, "g{r}.y2"),
                GadgetPart::S2 => write!(f, "g{r}.s2"),
                GadgetPart::Low(a, b) => write!(f, "g{r}.a({a},{b})"),
                GadgetPart::High(a, b) => write!(f, "g{r}.b({a},{b})"),
            },
            Vertex::Ladder(l, c, r) => write!(f, "l{l}({c},{r})"),
        }
    }
}

fn parse_pair(s: &str) -> Option<(u32, u32)> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownVertex(s.to_string());
        if s == "apex" {
            return Ok(Vertex::Apex);
        }
        if let Ok(i) = s.parse::<u32>() {
            return Ok(Vertex::Id(i));
        }
        if let Some((i, j)) = parse_pair(s) {
            return Ok(Vertex::Grid(i, j));
        }
        if let Some(rest) = s.strip_prefix("c(") {
            let (a, b) = parse_pair(&format!("({rest}")).ok_or_else(bad)?;
            return Ok(Vertex::Comb(a, b));
        }
        if let Some(rest) = s.strip_prefix('t') {
            return rest.parse().map(Vertex::Tree).map_err(|_| bad());
        }
        if let Some(rest) = s.strip_prefix('g') {
            let (rung, part) = rest.split_once('.').ok_or_else(bad)?;
            let rung: u32 = rung.parse().map_err(|_| bad())?;
            let part = match part {
                "y1" => GadgetPart::Y1,
                "y2" => GadgetPart::Y2,
                "s2" => GadgetPart::S2,
                p if p.starts_with('a') => {
                    let (a, b) = parse_pair(&p[1..]).ok_or_else(bad)?;
                    GadgetPart::Low(a, b)
                }
                p if p.starts_with('b') => {
                    let (a, b) = parse_pair(&p[1..]).ok_or_else(bad)?;
                    GadgetPart::High(a, b)
                }
                _ => return Err(bad()),
            };
            return Ok(Vertex::Gadget(rung, part));
        }
        if let Some(rest) = s.strip_prefix('l') {
            let open = rest.find('(').ok_or_else(bad)?;
            let l: u32 = rest[..open].parse().map_err(|_| bad())?;
            let (c, r) = parse_pair(&rest[open..]).ok_or_else(bad)?;
            return Ok(Vertex::Ladder(l, c, r));
        }
        Err(bad())
    }
}

impl Serialize for Vertex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Neighbour list returned by a family generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Neighbors {
    Finite(Vec<Vertex>),
    /// The vertex has infinite degree; such families cannot be truncated.
    Unbounded,
}

/// A finitely presented, possibly infinite, graph.
///
/// The generator must be deterministic and symmetric. Each family carries its
/// own end oracle.
pub trait GraphFamily: Send + Sync {
    fn name(&self) -> String;

    fn params(&self) -> BTreeMap<String, u64> {
        BTreeMap::new()
    }

    fn root(&self) -> Vertex;

    /// BFS seeds: the root, plus one vertex per further component for finite
    /// graphs that are not connected. Empty for the empty graph.
    fn roots(&self) -> Vec<Vertex> {
        vec![self.root()]
    }

    fn neighbors(&self, v: &Vertex) -> Neighbors;

    fn oracle(&self) -> &dyn EndOracle;

    /// Human readable label; finite graphs use the names from their input file.
    fn label(&self, v: &Vertex) -> String {
        v.to_string()
    }

    fn parse_label(&self, s: &str) -> Option<Vertex> {
        s.parse().ok()
    }

    /// Graph distance from the root, when the family knows it in closed form.
    fn root_distance(&self, _v: &Vertex) -> Option<u32> {
        None
    }
}

/// The closed BFS ball of radius `horizon` around the family root.
pub struct Truncation {
    family: Arc<dyn GraphFamily>,
    horizon: u32,
    vertices: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    adj: Vec<Vec<usize>>,
    depth: Vec<u32>,
}

impl fmt::Debug for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Truncation")
            .field("family", &self.family.name())
            .field("horizon", &self.horizon)
            .field("vertices", &self.vertices.len())
            .field("edges", &self.edge_count())
            .finish()
    }
}

fn finite_neighbors(family: &dyn GraphFamily, v: &Vertex) -> Result<Vec<Vertex>> {
    match family.neighbors(v) {
        Neighbors::Finite(mut list) => {
            list.sort();
            list.dedup();
            if list.contains(v) {
                return Err(Error::InvalidInput(format!(
                    "family `{}` has a loop at {v}",
                    family.name()
                )));
            }
            Ok(list)
        }
        Neighbors::Unbounded => Err(Error::UnboundedNeighborhood {
            family: family.name(),
            vertex: *v,
        }),
    }
}

/// Expands `family` to the BFS ball of radius `horizon` around its root.
pub fn expand(family: Arc<dyn GraphFamily>, horizon: u32) -> Result<Truncation> {
    let mut depth_of: HashMap<Vertex, u32> = HashMap::new();
    let mut lists: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    let mut queue = VecDeque::new();
    for root in family.roots() {
        if depth_of.insert(root, 0).is_none() {
            queue.push_back(root);
        }
    }
    while let Some(v) = queue.pop_front() {
        let d = depth_of[&v];
        let list = finite_neighbors(family.as_ref(), &v)?;
        if d < horizon {
            for u in &list {
                if !depth_of.contains_key(u) {
                    depth_of.insert(*u, d + 1);
                    queue.push_back(*u);
                }
            }
        }
        lists.insert(v, list);
    }

    let mut vertices: Vec<Vertex> = depth_of.keys().copied().collect();
    vertices.sort();
    let index: HashMap<Vertex, usize> =
        vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut adj = vec![Vec::new(); vertices.len()];
    for (i, v) in vertices.iter().enumerate() {
        for u in &lists[v] {
            if let Some(&j) = index.get(u) {
                if lists[u].binary_search(v).is_err() {
                    return Err(Error::AsymmetricAdjacency {
                        family: family.name(),
                        u: *v,
                        v: *u,
                    });
                }
                adj[i].push(j);
            }
        }
        adj[i].sort_unstable();
    }
    let depth = vertices.iter().map(|v| depth_of[v]).collect();
    Ok(Truncation {
        family,
        horizon,
        vertices,
        index,
        adj,
        depth,
    })
}

impl Truncation {
    pub fn family(&self) -> &Arc<dyn GraphFamily> {
        &self.family
    }

    pub fn oracle(&self) -> &dyn EndOracle {
        self.family.oracle()
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Vertex {
        self.vertices[i]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn depth(&self, i: usize) -> u32 {
        self.depth[i]
    }

    pub fn is_frontier(&self, i: usize) -> bool {
        self.depth[i] == self.horizon
    }

    pub fn frontier(&self) -> VSet {
        (0..self.len()).filter(|&i| self.is_frontier(i)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Undirected edges `(i, j)` with `i < j`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |&&j| i < j).map(move |&j| (i, j)))
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn label(&self, i: usize) -> String {
        self.family.label(&self.vertices[i])
    }

    pub fn labels(&self, set: &VSet) -> Vec<String> {
        set.iter().map(|&i| self.label(i)).collect()
    }

    /// Resolves vertices to indices; vertices outside the ball are an error.
    pub fn set_of<'a>(&self, vs: impl IntoIterator<Item = &'a Vertex>) -> Result<VSet> {
        vs.into_iter()
            .map(|v| self.index_of(v).ok_or_else(|| Error::UnknownVertex(v.to_string())))
            .collect()
    }

    /// Like [`Truncation::set_of`] but resolves labels through the family.
    pub fn set_of_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<VSet> {
        labels
            .iter()
            .map(|s| {
                let s = s.as_ref();
                self.family
                    .parse_label(s)
                    .and_then(|v| self.index_of(&v))
                    .ok_or_else(|| Error::UnknownVertex(s.to_string()))
            })
            .collect()
    }

    pub fn ball(&self, radius: u32) -> VSet {
        (0..self.len()).filter(|&i| self.depth[i] <= radius).collect()
    }

    pub fn max_depth(&self, set: &VSet) -> u32 {
        set.iter().map(|&i| self.depth[i]).max().unwrap_or(0)
    }
}

/// An induced subgraph of a truncation, given by a vertex mask.
#[derive(Clone)]
pub struct Host<'a> {
    t: &'a Truncation,
    mask: Vec<bool>,
    size: usize,
}

impl<'a> Host<'a> {
    pub fn whole(t: &'a Truncation) -> Self {
        Host {
            t,
            mask: vec![true; t.len()],
            size: t.len(),
        }
    }

    pub fn induced(t: &'a Truncation, set: &VSet) -> Self {
        let mut mask = vec![false; t.len()];
        for &i in set {
            mask[i] = true;
        }
        Host {
            t,
            mask,
            size: set.len(),
        }
    }

    pub fn truncation(&self) -> &'a Truncation {
        self.t
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask[i]
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.t.len()).filter(|&i| self.mask[i])
    }

    pub fn vertex_set(&self) -> VSet {
        self.vertices().collect()
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.t.adj[i].iter().copied().filter(|&j| self.mask[j])
    }

    /// Open neighbourhood of `set` inside the host.
    pub fn neighborhood(&self, set: &VSet) -> VSet {
        let mut out = VSet::new();
        for &v in set {
            for u in self.neighbors(v) {
                if !set.contains(&u) {
                    out.insert(u);
                }
            }
        }
        out
    }

    /// Connected components of the host minus `removed`, in index order.
    pub fn components_without(&self, removed: &VSet) -> Vec<VSet> {
        let mut seen = vec![false; self.t.len()];
        for &r in removed {
            seen[r] = true;
        }
        let mut comps = Vec::new();
        for start in 0..self.t.len() {
            if !self.mask[start] || seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = VSet::new();
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// The component of host minus `removed` containing `start`.
    pub fn component_containing(&self, removed: &VSet, start: usize) -> Option<VSet> {
        if !self.mask[start] || removed.contains(&start) {
            return None;
        }
        let mut seen = VSet::new();
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if !removed.contains(&u) && seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        Some(seen)
    }

    pub fn is_connected(&self, set: &VSet) -> bool {
        let Some(&start) = set.iter().next() else {
            return true;
        };
        let mut seen = VSet::new();
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if set.contains(&u) && seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen.len() == set.len()
    }

    pub fn region(&self, vertices: VSet) -> Region {
        let neighborhood = self.neighborhood(&vertices);
        let touches_frontier = vertices.iter().any(|&v| self.t.is_frontier(v));
        Region {
            vertices,
            neighborhood,
            touches_frontier,
        }
    }
}

/// A connected induced subgraph together with its neighbourhood.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Region {
    pub vertices: VSet,
    pub neighborhood: VSet,
    pub touches_frontier: bool,
}

impl Region {
    pub fn order(&self) -> usize {
        self.neighborhood.len()
    }

    pub fn closure(&self) -> VSet {
        self.vertices.union(&self.neighborhood).copied().collect()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.vertices.is_subset(&other.vertices)
    }
}

/// Components of `t - s` as regions, each tagged with whether it reaches the frontier.
pub fn components_minus(t: &Truncation, s: &VSet) -> Vec<Region> {
    let host = Host::whole(t);
    host.components_without(s)
        .into_iter()
        .map(|c| host.region(c))
        .collect()
}

/// Two regions touch when they share a vertex or an edge joins them.
pub fn touch(t: &Truncation, c: &Region, d: &Region) -> bool {
    if !c.vertices.is_disjoint(&d.vertices) {
        return true;
    }
    let (small, large) = if c.vertices.len() <= d.vertices.len() {
        (c, d)
    } else {
        (d, c)
    };
    small
        .vertices
        .iter()
        .any(|&v| t.neighbors(v).iter().any(|u| large.vertices.contains(u)))
}

pub fn nested(t: &Truncation, c: &Region, d: &Region) -> bool {
    c.is_subset(d) || d.is_subset(c) || !touch(t, c, d)
}
