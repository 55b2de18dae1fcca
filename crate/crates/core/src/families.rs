//! Built-in graph families.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;
use std::sync::Arc;

use serde_json::Value;

use crate::ends::{DeclaredOracle, Degree, EndHandle, EndOracle};
use crate::error::{Error, Result};
use crate::graph::{GadgetPart, GraphFamily, Neighbors, Vertex};

/// Neighbours of `(i, j)` in the grid `[width] x N` (1-based).
fn grid_neighbors(width: Option<u32>, i: u32, j: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(4);
    if i > 1 {
        out.push((i - 1, j));
    }
    if width.map_or(true, |w| i < w) {
        out.push((i + 1, j));
    }
    if j > 1 {
        out.push((i, j - 1));
    }
    out.push((i, j + 1));
    out
}

fn finite(list: impl IntoIterator<Item = Vertex>) -> Neighbors {
    Neighbors::Finite(list.into_iter().collect())
}

/// A finite simple graph, usually read from a JSON file.
pub struct FiniteGraph {
    names: Vec<String>,
    lookup: HashMap<String, u32>,
    adj: Vec<BTreeSet<u32>>,
    oracle: DeclaredOracle,
}

impl FiniteGraph {
    pub fn from_edges<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut lookup = HashMap::new();
        let mut names = Vec::new();
        for v in vertices {
            let name = v.as_ref().to_string();
            if lookup.insert(name.clone(), names.len() as u32).is_some() {
                return Err(Error::InvalidInput(format!("duplicate vertex `{name}`")));
            }
            names.push(name);
        }
        let mut adj = vec![BTreeSet::new(); names.len()];
        for (a, b) in edges {
            let find = |s: &str| {
                lookup
                    .get(s)
                    .copied()
                    .ok_or_else(|| Error::InvalidInput(format!("edge mentions unknown vertex `{s}`")))
            };
            let (x, y) = (find(a.as_ref())?, find(b.as_ref())?);
            if x == y {
                return Err(Error::InvalidInput(format!("loop at `{}`", a.as_ref())));
            }
            adj[x as usize].insert(y);
            adj[y as usize].insert(x);
        }
        Ok(FiniteGraph {
            names,
            lookup,
            adj,
            oracle: DeclaredOracle::none(),
        })
    }

    /// Parses `{"vertices": [...], "edges": [[u, v], ...]}`. Vertex names may be
    /// strings or integers.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text)?;
        let name_of = |v: &Value| match v {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            other => Err(Error::InvalidInput(format!("bad vertex name {other}"))),
        };
        let vertices = doc
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("missing `vertices` array".into()))?
            .iter()
            .map(name_of)
            .collect::<Result<Vec<_>>>()?;
        let mut edges = Vec::new();
        for e in doc
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("missing `edges` array".into()))?
        {
            match e.as_array().map(Vec::as_slice) {
                Some([a, b]) => edges.push((name_of(a)?, name_of(b)?)),
                _ => return Err(Error::InvalidInput(format!("edge {e} is not a pair"))),
            }
        }
        Self::from_edges(&vertices, &edges)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }
}

impl GraphFamily for FiniteGraph {
    fn name(&self) -> String {
        "finite".into()
    }

    fn params(&self) -> BTreeMap<String, u64> {
        BTreeMap::from([("n".to_string(), self.names.len() as u64)])
    }

    fn root(&self) -> Vertex {
        Vertex::Id(0)
    }

    fn roots(&self) -> Vec<Vertex> {
        let mut seen = vec![false; self.names.len()];
        let mut out = Vec::new();
        for s in 0..self.names.len() {
            if seen[s] {
                continue;
            }
            out.push(Vertex::Id(s as u32));
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &u in &self.adj[v] {
                    if !seen[u as usize] {
                        seen[u as usize] = true;
                        stack.push(u as usize);
                    }
                }
            }
        }
        out
    }

    fn neighbors(&self, v: &Vertex) -> Neighbors {
        match v {
            Vertex::Id(i) if (*i as usize) < self.adj.len() => {
                finite(self.adj[*i as usize].iter().map(|&u| Vertex::Id(u)))
            }
            _ => finite([]),
        }
    }

    fn oracle(&self) -> &dyn EndOracle {
        &self.oracle
    }

    fn label(&self, v: &Vertex) -> String {
        match v {
            Vertex::Id(i) if (*i as usize) < self.names.len() => self.names[*i as usize].clone(),
            other => other.to_string(),
        }
    }

    fn parse_label(&self, s: &str) -> Option<Vertex> {
        self.lookup.get(s).map(|&i| Vertex::Id(i))
    }
}

/// The grid `[k] x N` with its single end of degree `k`.
pub struct HalfGrid {
    k: u32,
    oracle: DeclaredOracle,
}

impl HalfGrid {
    pub fn new(k: u32) -> Self {
        assert!(k >= 1, "half grid needs k >= 1");
        let oracle = DeclaredOracle::new(
            move |_| {
                vec![EndHandle::new("end", Degree::Finite(k), vec![], 0, |n| {
                    Vertex::Grid(1, n as u32 + 1)
                })]
            },
            move |_, d| d + k + 1,
        );
        HalfGrid { k, oracle }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The rung `{(i, j) : i in [k]}`.
    pub fn rung(&self, j: u32) -> Vec<Vertex> {
        (1..=self.k).map(|i| Vertex::Grid(i, j)).collect()
    }
}

impl GraphFamily for HalfGrid {
    fn name(&self) -> String {
        "half_grid".into()
    }

    fn params(&self) -> BTreeMap<String, u64> {
        BTreeMap::from([("k".to_string(), self.k as u64)])
    }

    fn root(&self) -> Vertex {
        Vertex::Grid(1, 1)
    }

    fn neighbors(&self, v: &Vertex) -> Neighbors {
        match *v {
            Vertex::Grid(i, j) if (1..=self.k).contains(&i) && j >= 1 => finite(
                grid_neighbors(Some(self.k), i, j)
                    .into_iter()
                    .map(|(a, b)| Vertex::Grid(a, b)),
            ),
            _ => finite([]),
        }
    }

    fn oracle(&self) -> &dyn EndOracle {
        &self.oracle
    }

    fn root_distance(&self, v: &Vertex) -> Option<u32> {
        match *v {
            Vertex::Grid(i, j) => Some(i - 1 + j - 1),
            _ => None,
        }
    }
}

/// The quarter plane `N x N`, one end of infinite degree.
pub struct FullGrid {
    oracle: DeclaredOracle,
}

impl FullGrid {
    pub fn new() -> Self {
        let oracle = DeclaredOracle::new(
            |_| {
                vec![EndHandle::new("end", Degree::Infinite, vec![], 0, |n| {
                    Vertex::Grid(1, n as u32 + 1)
                })]
            },
            |k, d| d + k + 2,
        );
        FullGrid { oracle }
    }
}

impl Default for FullGrid {
    fn default() -> Self {
        Self::new()
    }
}

impl GraphFamily for FullGrid {
    fn name(&self) -> String {
        "full_grid".into()
    }

    fn root(&self) -> Vertex {
        Vertex::Grid(1, 1)
    }

    fn neighbors(&self, v: &Vertex) -> Neighbors {
        match *v {
            Vertex::Grid(i, j) if i >= 1 && j >= 1 => finite(
                grid_neighbors(None, i, j)
                    .into_iter()
                    .map(|(a, b)| Vertex::Grid(a, b)),
            ),
            _ => finite([]),
        }
    }

    fn oracle(&self) -> &dyn EndOracle {
        &self.oracle
    }

    fn root_distance(&self, v: &Vertex) -> Option<u32> {
        match *v {
            Vertex::Grid(i, j) => Some(i - 1 + j - 1),
            _ => None,
        }
    }
}

/// Words describing the sampled ends of the binary tree; `L` goes to `2n`,
/// `R` to `2n + 1`, and the word repeats forever.
pub const TREE_SAMPLE: [&str; 4] = ["L", "R", "LR", "RL"];

fn tree_ray(word: &'static str) -> impl Fn(usize) -> Vertex + Send + Sync {
    move |i| {
        let bytes = word.as_bytes();
        let mut n: u64 = 1;
        for step in 0..i {
            n = 2 * n + u64::from(bytes[step % bytes.len()] == b'R');
        }
        Vertex::Tree(n)
    }
}

/// The rooted infinite binary tree; its ends are sampled.
pub struct BinaryTree {
    oracle: DeclaredOracle,
}

impl BinaryTree {
    pub fn new() -> Self {
        let oracle = DeclaredOracle::new(
            |_| {
                TREE_SAMPLE
                    .iter()
                    .map(|&w| EndHandle::new(w, Degree::Finite(1), vec![], 2, tree_ray(w)))
                    .collect()
            },
            |_, d| d + 1,
        )
        .sampled();
        BinaryTree { oracle }
    }
}

impl Default for BinaryTree {
    fn default() -> Self {
        Self::new()
    }
}

impl GraphFamily for BinaryTree {
    fn name(&self) -> String {
        "binary_tree".into()
    }

    fn root(&self) -> Vertex {
        Vertex::Tree(1)
    }

    fn neighbors(&self, v: &Vertex) -> Neighbors {
        match *v {
            // Stay well clear of overflow; depth 60 is far beyond desk scale.
            Vertex::Tree(n) if n >= 1 && n < (1 << 60) => {
                let mut out = vec![Vertex::Tree(2 * n), Vertex::Tree(2 * n + 1)];
                if n > 1 {
                    out.push(Vertex::Tree(n / 2));
                }
                finite(out)
            }
            _ => finite([]),
        }
    }

    fn oracle(&self) -> &dyn EndOracle {
        &self.oracle
    }

    fn root_distance(&self, v: &Vertex) -> Option<u32> {
        match *v {
            Vertex::Tree(n) if n >= 1 => Some(63 - n.leading_zeros()),
            _ => None,
        }
    }
}

fn comb_ends(horizon: u32, dominators: Vec<Vertex>, certified_only: bool) -> Vec<EndHandle> {
    let mut out = vec![EndHandle::new(
        "spine",
        Degree::Finite(1),
        dominators,
        0,
        |n| Vertex::Comb(n as u32 + 1, 0),
    )];
    let last = if certified_only {
        horizon.saturating_sub(5)
    } else {
        horizon
    };
    for s in 1..=last {
        out.push(EndHandle::new(
            format!("tooth{s}"),
            Degree::Finite(1),
            vec![],
            s,
            move |n| Vertex::Comb(s, n as u32 + 1),
        ));
    }
    out
}

fn comb_neighbors(s: u32, t: u32) -> Vec<Vertex> {
    if t == 0 {
        let mut out = vec![Vertex::Comb(s + 1, 0), Vertex::Comb(s, 1)];
        if s > 1 {
            out.push(Vertex::Comb(s - 1, 0));
        }
        out
    } else {
        vec![Vertex::Comb(s, t - 1), Vertex::Comb(s, t + 1)]
    }
}

/// A ray (the spine) with an infinite ray (tooth) hanging off every spine vertex.
pub struct Comb {
    oracle: DeclaredOracle,
}

impl Comb {
    pub fn new() -> Self {
        Comb {
            oracle: DeclaredOracle::new(|h| comb_ends(h, vec![], true), |_, d| d + 2),
        }
    }
}

impl Default for Comb {
    fn default() -> Self {
        Self::new()
    }
}

impl GraphFamily for Comb {
    fn name(&self) -> String {
        "comb".into()
    }

    fn root(&self) -> Vertex {
        Vertex::Comb(1, 0)
    }

    fn neighbors(&self, v: &Vertex) -> Neighbors {
        match *v {
            Vertex::Comb(s, t) if s >= 1 => finite(comb_neighbors(s, t)),
            _ => finite([]),
        }
    }

    fn oracle(&self) -> &dyn EndOracle {
        &self.oracle
    }

    fn root_distance(&self, v: &Vertex) -> Option<u32> {
        match *v {
            Vertex::Comb(s, t) => Some(s - 1 + t),
            _ => None,
        }
    }
}

/// The comb plus an apex joined to every spine vertex. The apex has infinite
/// degree, so this family cannot be truncated; it exists for G-delta specs.
pub struct CombApex {
    oracle: DeclaredOracle,
}

impl CombApex {
    pub fn new() -> Self {
        CombApex {
            oracle: DeclaredOracle::new(
                |h| comb_ends(h, vec![Vertex::Apex], false),
                |_, d| d + 2,
            ),
        }
    }
}

impl Default for CombApex {
    fn default() -> Self {
        Self::new()
    }
}

impl GraphFamily for CombApex {
    fn name(&self) -> String {
        "comb_apex".into()
    }

    fn root(&self) -> Vertex {
        Vertex::Comb(1, 0)
    }

    fn neighbors(&self, v: &Vertex) -> Neighbors {
        match *v {
            Vertex::Apex => Neighbors::Unbounded,
            Vertex::Comb(s, 0) if s >= 1 => {
                let mut out = comb_neighbors(s, 0);
                out.push(Vertex::Apex);
                finite(out)
            }
            Vertex::Comb(s, t) if s >= 1 => finite(comb_neighbors(s, t)),
            _ => finite([]),
        }
    }

    fn oracle(&self) -> &dyn EndOracle {
        &self.oracle
    }

    fn root_distance(&self, v: &Vertex) -> Option<u32> {
        match *v {
            Vertex::Apex => Some(1),
            Vertex::Comb(s, t) => Some((s - 1).min(2) + t),
            _ => None,
        }
    }
}

/// The grid `[4] x N` with a copy of the gadget `Q` glued along every rung.
///
/// On rung `j`: `x1, x2, x3, s1` are the grid vertices `(1,j) .. (4,j)`;
/// `y1, y2` see `x1, x2, x3`; `y1, y2, s2` see the first row of the degree-4
/// sub-grid (`b`); `s1, s2` see the first row of the degree-3 sub-grid (`a`).
pub struct AppendixGadget {
    oracle: DeclaredOracle,
}

/// Id of the degree-3 end of the gadget on rung `j`.
pub fn eps3(j: u32) -> String {
    format!("eps3_{j}")
}

/// Id of the degree-4 end of the gadget on rung `j`.
pub fn eps4(j: u32) -> String {
    format!("eps4_{j}")
}

pub const PSI: &str = "psi";

impl AppendixGadget {
    pub fn new() -> Self {
        let oracle = DeclaredOracle::new(
            |h| {
                let mut out = vec![EndHandle::new(PSI, Degree::Finite(4), vec![], 0, |n| {
                    Vertex::Grid(1, n as u32 + 1)
                })];
                // Rung j's gadget ends separate from everything at depth j + 2;
                // list those whose separators near that depth are certifiable.
                for j in 1..=h.saturating_sub(9) {
                    out.push(EndHandle::new(eps3(j), Degree::Finite(3), vec![], j + 2, move |n| {
                        Vertex::Gadget(j, GadgetPart::Low(1, n as u32 + 1))
                    }));
                    out.push(EndHandle::new(eps4(j), Degree::Finite(4), vec![], j + 2, move |n| {
                        Vertex::Gadget(j, GadgetPart::High(1, n as u32 + 1))
                    }));
                }
                out
            },
            |_, d| d + 4,
        );
        AppendixGadget { oracle }
    }

    /// `Q_X` of rung `j`: `x1, x2, x3, s1`.
    pub fn q_x(j: u32) -> Vec<Vertex> {
        (1..=4).map(|i| Vertex::Grid(i, j)).collect()
    }

    pub fn y1(j: u32) -> Vertex {
        Vertex::Gadget(j, GadgetPart::Y1)
    }

    pub fn y2(j: u32) -> Vertex {
        Vertex::Gadget(j, GadgetPart::Y2)
    }

    pub fn s1(j: u32) -> Vertex {
        Vertex::Grid(4, j)
    }

    pub fn s2(j: u32) -> Vertex {
        Vertex::Gadget(j, GadgetPart::S2)
    }
}

impl Default for AppendixGadget {
    fn default() -> Self {
        Self::new()
    }
}

impl GraphFamily for AppendixGadget {
    fn name(&self) -> String {
        "appendix_gadget".into()
    }

    fn root(&self) -> Vertex {
        Vertex::Grid(1, 1)
    }

    fn neighbors(&self, v: &Vertex) -> Neighbors {
        use GadgetPart::*;
        let g = Vertex::Gadget;
        match *v {
            Vertex::Grid(i, j) if (1..=4).contains(&i) && j >= 1 => {
                let mut out: Vec<Vertex> = grid_neighbors(Some(4), i, j)
                    .into_iter()
                    .map(|(a, b)| Vertex::Grid(a, b))
                    .collect();
                if i <= 3 {
                    out.extend([g(j, Y1), g(j, Y2)]);
                } else {
                    out.extend((1..=3).map(|c| g(j, Low(c, 1))));
                }
                finite(out)
            }
            Vertex::Gadget(j, Y1 | Y2) if j >= 1 => finite(
                (1..=3)
                    .map(|i| Vertex::Grid(i, j))
                    .chain((1..=4).map(|c| g(j, High(c, 1)))),
            ),
            Vertex::Gadget(j, S2) if j >= 1 => finite(
                (1..=3)
                    .map(|c| g(j, Low(c, 1)))
                    .chain((1..=4).map(|c| g(j, High(c, 1)))),
            ),
            Vertex::Gadget(j, Low(c, b)) if j >= 1 && (1..=3).contains(&c) && b >= 1 => {
                let mut out: Vec<Vertex> = grid_neighbors(Some(3), c, b)
                    .into_iter()
                    .map(|(x, y)| g(j, Low(x, y)))
                    .collect();
                if b == 1 {
                    out.extend([Vertex::Grid(4, j), g(j, S2)]);
                }
                finite(out)
            }
            Vertex::Gadget(j, High(c, b)) if j >= 1 && (1..=4).contains(&c) && b >= 1 => {
                let mut out: Vec<Vertex> = grid_neighbors(Some(4), c, b)
                    .into_iter()
                    .map(|(x, y)| g(j, High(x, y)))
                    .collect();
                if b == 1 {
                    out.extend([g(j, Y1), g(j, Y2), g(j, S2)]);
                }
                finite(out)
            }
            _ => finite([]),
        }
    }

    fn oracle(&self) -> &dyn EndOracle {
        &self.oracle
    }

    fn root_distance(&self, v: &Vertex) -> Option<u32> {
        use GadgetPart::*;
        match *v {
            Vertex::Grid(i, j) => Some(i - 1 + j - 1),
            Vertex::Gadget(j, Y1 | Y2) => Some(j),
            Vertex::Gadget(j, S2) => Some(j + 2),
            Vertex::Gadget(j, High(_, b)) => Some(j + b),
            Vertex::Gadget(j, Low(_, b)) => Some(j + 2 + b),
            _ => None,
        }
    }
}

/// A finite connected core with ladders `[w] x N` glued on; ladder `l`'s
/// first row is attached to the listed core vertices.
pub struct Planted {
    core: Vec<BTreeSet<u32>>,
    ladders: Vec<Vec<u32>>,
    oracle: DeclaredOracle,
}

impl Planted {
    pub fn new(n: u32, edges: &[(u32, u32)], ladders: Vec<Vec<u32>>) -> Result<Self> {
        let mut core = vec![BTreeSet::new(); n as usize];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidInput(format!("bad core edge ({a},{b})")));
            }
            core[a as usize].insert(b);
            core[b as usize].insert(a);
        }
        for l in &ladders {
            if l.is_empty() || l.iter().any(|&a| a >= n) {
                return Err(Error::InvalidInput("bad ladder attachment".into()));
            }
        }
        let widths: Vec<u32> = ladders.iter().map(|l| l.len() as u32).collect();
        let wmax = widths.iter().copied().max().unwrap_or(0);
        let oracle = DeclaredOracle::new(
            move |_| {
                widths
                    .iter()
                    .enumerate()
                    .map(|(l, &w)| {
                        let l = l as u32;
                        EndHandle::new(format!("ladder{l}"), Degree::Finite(w), vec![], n, move |i| {
                            Vertex::Ladder(l, 1, i as u32 + 1)
                        })
                    })
                    .collect()
            },
            move |_, d| d + n + wmax + 2,
        );
        Ok(Planted {
            core,
            ladders,
            oracle,
        })
    }
}

impl GraphFamily for Planted {
    fn name(&self) -> String {
        "planted".into()
    }

    fn params(&self) -> BTreeMap<String, u64> {
        BTreeMap::from([
            ("core".to_string(), self.core.len() as u64),
            ("ladders".to_string(), self.ladders.len() as u64),
        ])
    }

    fn root(&self) -> Vertex {
        Vertex::Id(0)
    }

    fn neighbors(&self, v: &Vertex) -> Neighbors {
        match *v {
            Vertex::Id(i) if (i as usize) < self.core.len() => {
                let mut out: Vec<Vertex> =
                    self.core[i as usize].iter().map(|&u| Vertex::Id(u)).collect();
                for (l, attach) in self.ladders.iter().enumerate() {
                    for (c, &a) in attach.iter().enumerate() {
                        if a == i {
                            out.push(Vertex::Ladder(l as u32, c as u32 + 1, 1));
                        }
                    }
                }
                finite(out)
            }
            Vertex::Ladder(l, c, r) if (l as usize) < self.ladders.len() => {
                let attach = &self.ladders[l as usize];
                let w = attach.len() as u32;
                if c < 1 || c > w || r < 1 {
                    return finite([]);
                }
                let mut out: Vec<Vertex> = grid_neighbors(Some(w), c, r)
                    .into_iter()
                    .map(|(x, y)| Vertex::Ladder(l, x, y))
                    .collect();
                if r == 1 {
                    out.push(Vertex::Id(attach[c as usize - 1]));
                }
                finite(out)
            }
            _ => finite([]),
        }
    }

    fn oracle(&self) -> &dyn EndOracle {
        &self.oracle
    }
}

/// Another family with a finite set of edges added and removed.
pub struct Edited {
    name: String,
    inner: Arc<dyn GraphFamily>,
    added: HashMap<Vertex, Vec<Vertex>>,
    removed: BTreeSet<(Vertex, Vertex)>,
}

impl Edited {
    pub fn new(
        name: impl Into<String>,
        inner: Arc<dyn GraphFamily>,
        add: &[(Vertex, Vertex)],
        remove: &[(Vertex, Vertex)],
    ) -> Self {
        let mut added: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
        for &(a, b) in add {
            added.entry(a).or_default().push(b);
            added.entry(b).or_default().push(a);
        }
        let removed = remove
            .iter()
            .flat_map(|&(a, b)| [(a, b), (b, a)])
            .collect();
        Edited {
            name: name.into(),
            inner,
            added,
            removed,
        }
    }
}

impl GraphFamily for Edited {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn params(&self) -> BTreeMap<String, u64> {
        self.inner.params()
    }

    fn root(&self) -> Vertex {
        self.inner.root()
    }

    fn neighbors(&self, v: &Vertex) -> Neighbors {
        match self.inner.neighbors(v) {
            Neighbors::Unbounded => Neighbors::Unbounded,
            Neighbors::Finite(mut list) => {
                list.retain(|u| !self.removed.contains(&(*v, *u)));
                if let Some(extra) = self.added.get(v) {
                    list.extend(extra.iter().copied());
                }
                Neighbors::Finite(list)
            }
        }
    }

    fn oracle(&self) -> &dyn EndOracle {
        self.inner.oracle()
    }

    fn label(&self, v: &Vertex) -> String {
        self.inner.label(v)
    }

    fn parse_label(&self, s: &str) -> Option<Vertex> {
        self.inner.parse_label(s)
    }
}

/// `half_grid(4)` with a three-vertex path hanging off `(1,3), (2,3), (3,3)`.
pub fn half_grid_pendant() -> Edited {
    let add = [
        (Vertex::Id(0), Vertex::Id(1)),
        (Vertex::Id(1), Vertex::Id(2)),
        (Vertex::Id(0), Vertex::Grid(1, 3)),
        (Vertex::Id(1), Vertex::Grid(2, 3)),
        (Vertex::Id(2), Vertex::Grid(3, 3)),
    ];
    Edited::new("half_grid_pendant", Arc::new(HalfGrid::new(4)), &add, &[])
}

/// Names and one-line descriptions of the built-in families.
pub const CATALOG: [(&str, &str); 8] = [
    ("finite", "finite graph from a JSON file (--input)"),
    ("half_grid", "the grid [k] x N (--k), one end of degree k"),
    ("full_grid", "the quarter grid N x N, one end of infinite degree"),
    ("binary_tree", "rooted binary tree; ends sampled"),
    ("comb", "a spine ray with a ray hanging off every spine vertex"),
    ("comb_apex", "comb plus an apex on the spine (not truncatable)"),
    ("appendix_gadget", "[4] x N with the gadget Q glued on every rung"),
    ("half_grid_pendant", "half_grid(4) with a finite path attached at rung 3"),
];

/// Instantiates a named built-in family. `finite` is handled by the caller.
pub fn by_name(name: &str, k: Option<u32>) -> Result<Arc<dyn GraphFamily>> {
    Ok(match name {
        "half_grid" => Arc::new(HalfGrid::new(k.unwrap_or(4).max(1))),
        "full_grid" => Arc::new(FullGrid::new()),
        "binary_tree" => Arc::new(BinaryTree::new()),
        "comb" => Arc::new(Comb::new()),
        "comb_apex" => Arc::new(CombApex::new()),
        "appendix_gadget" => Arc::new(AppendixGadget::new()),
        "half_grid_pendant" => Arc::new(half_grid_pendant()),
        other => return Err(Error::InvalidInput(format!("unknown family `{other}`"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::expand;

    #[test]
    fn gadget_root_distances_match_bfs() {
        let t = expand(Arc::new(AppendixGadget::new()), 9).unwrap();
        let fam = AppendixGadget::new();
        for (i, v) in t.vertices().iter().enumerate() {
            assert_eq!(fam.root_distance(v), Some(t.depth(i)), "{v}");
        }
    }

    #[test]
    fn tree_rays_follow_words() {
        let r = tree_ray("LR");
        let got: Vec<Vertex> = (0..4).map(&r).collect();
        assert_eq!(
            got,
            [1, 2, 5, 10].map(Vertex::Tree).to_vec()
        );
    }

    #[test]
    fn finite_json_accepts_numbers_and_strings() {
        let g = FiniteGraph::from_json_str(r#"{"vertices":[1,"b"],"edges":[[1,"b"]]}"#).unwrap();
        assert_eq!(g.parse_label("1"), Some(Vertex::Id(0)));
        assert_eq!(g.label(&Vertex::Id(1)), "b");
        assert!(FiniteGraph::from_json_str(r#"{"vertices":[1],"edges":[[1,2]]}"#).is_err());
        assert!(FiniteGraph::from_json_str(r#"{"vertices":[1],"edges":[[1,1]]}"#).is_err());
    }

    #[test]
    fn disconnected_finite_graph_is_fully_expanded() {
        let g = FiniteGraph::from_edges(&["a", "b", "c"], &[("a", "b")]).unwrap();
        let t = expand(Arc::new(g), 5).unwrap();
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn apex_family_cannot_be_truncated() {
        let err = expand(Arc::new(CombApex::new()), 3).unwrap_err();
        assert!(matches!(err, Error::UnboundedNeighborhood { .. }));
    }
}
