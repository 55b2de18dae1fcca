//! Oracle-declared ends, `C(S, ε)`, end separators, boundaries of vertex sets,
//! and G-delta specifications.

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::flow::{vertex_flow, Side};
use crate::graph::{GraphFamily, Host, Region, Truncation, VSet, Vertex};

/// Degree of an end: the maximum number of disjoint rays in it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    Finite(u32),
    Infinite,
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(n) => Some(n),
            Degree::Infinite => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(n) => write!(f, "{n}"),
            Degree::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Degree::Finite(n) => s.serialize_u32(*n),
            Degree::Infinite => s.serialize_str("infinite"),
        }
    }
}

type RayFn = Arc<dyn Fn(usize) -> Vertex + Send + Sync>;

/// A family-declared end.
///
/// `anchor_depth` is a depth beyond which the canonical ray no longer shares a
/// finite-side component with any other declared end.
#[derive(Clone)]
pub struct EndHandle {
    pub id: String,
    pub degree: Degree,
    pub dominators: Vec<Vertex>,
    pub anchor_depth: u32,
    ray: RayFn,
}

impl fmt::Debug for EndHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EndHandle")
            .field("id", &self.id)
            .field("degree", &self.degree)
            .field("dominators", &self.dominators)
            .field("anchor_depth", &self.anchor_depth)
            .finish()
    }
}

impl PartialEq for EndHandle {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for EndHandle {}

impl EndHandle {
    pub fn new(
        id: impl Into<String>,
        degree: Degree,
        dominators: Vec<Vertex>,
        anchor_depth: u32,
        ray: impl Fn(usize) -> Vertex + Send + Sync + 'static,
    ) -> Self {
        EndHandle {
            id: id.into(),
            degree,
            dominators,
            anchor_depth,
            ray: Arc::new(ray),
        }
    }

    /// The `i`-th vertex of the canonical ray.
    pub fn ray_vertex(&self, i: usize) -> Vertex {
        (self.ray)(i)
    }

    pub fn combined_degree(&self) -> Degree {
        match self.degree {
            Degree::Finite(n) => Degree::Finite(n + self.dominators.len() as u32),
            Degree::Infinite => Degree::Infinite,
        }
    }

    /// Longest prefix of the canonical ray inside the truncation, as indices.
    pub fn ray_prefix(&self, t: &Truncation) -> Vec<usize> {
        let mut out = Vec::new();
        for i in 0..=t.len() {
            match t.index_of(&self.ray_vertex(i)) {
                Some(x) => out.push(x),
                None => break,
            }
        }
        out
    }

    /// Last vertex of the ray prefix: the representative tail vertex.
    pub fn tail(&self, t: &Truncation) -> Option<usize> {
        self.ray_prefix(t).last().copied()
    }
}

/// Source of declared ends for a family, with a stabilization certificate.
pub trait EndOracle: Send + Sync {
    /// The declared ends whose anchors are resolvable at `horizon`.
    fn ends(&self, horizon: u32) -> Vec<EndHandle>;

    /// Depth that contains some minimum separator of order at most `k`
    /// between any vertex set within depth `d` and any declared end.
    fn stabilization_depth(&self, k: u32, d: u32) -> u32;

    /// True when `ends` is a sample of an uncountable end space.
    fn sampled(&self) -> bool {
        false
    }

    fn end(&self, id: &str, horizon: u32) -> Option<EndHandle> {
        self.ends(horizon).into_iter().find(|e| e.id == id)
    }
}

type EndsFn = Box<dyn Fn(u32) -> Vec<EndHandle> + Send + Sync>;
type StabFn = Box<dyn Fn(u32, u32) -> u32 + Send + Sync>;

/// An oracle assembled from closures; what the built-in families use.
pub struct DeclaredOracle {
    ends: EndsFn,
    stab: StabFn,
    sampled: bool,
}

impl DeclaredOracle {
    pub fn new(
        ends: impl Fn(u32) -> Vec<EndHandle> + Send + Sync + 'static,
        stab: impl Fn(u32, u32) -> u32 + Send + Sync + 'static,
    ) -> Self {
        DeclaredOracle {
            ends: Box::new(ends),
            stab: Box::new(stab),
            sampled: false,
        }
    }

    /// Oracle of a graph without ends.
    pub fn none() -> Self {
        Self::new(|_| Vec::new(), |_, d| d)
    }

    pub fn sampled(mut self) -> Self {
        self.sampled = true;
        self
    }
}

impl EndOracle for DeclaredOracle {
    fn ends(&self, horizon: u32) -> Vec<EndHandle> {
        (self.ends)(horizon)
    }

    fn stabilization_depth(&self, k: u32, d: u32) -> u32 {
        (self.stab)(k, d).max(d)
    }

    fn sampled(&self) -> bool {
        self.sampled
    }
}

/// Slack kept between a certified depth and the horizon.
pub const MARGIN: u32 = 2;

/// True when `e` can be resolved inside a window of radius `horizon`.
pub fn resolvable(e: &EndHandle, horizon: u32) -> bool {
    e.anchor_depth + 1 + MARGIN <= horizon
}

/// Depth beyond which `e`'s separators from sets of order `k` within depth
/// `d` need not be searched. Fails when the window is too shallow.
pub fn certified_depth(t: &Truncation, e: &EndHandle, k: usize, d: u32) -> Result<u32> {
    let depth = t
        .oracle()
        .stabilization_depth(k as u32, d)
        .max(e.anchor_depth + 1);
    require(t, depth + MARGIN, &format!("end `{}`", e.id))?;
    Ok(depth)
}

pub(crate) fn require(t: &Truncation, required: u32, context: &str) -> Result<()> {
    if t.horizon() < required {
        return Err(Error::HorizonTooSmall {
            required,
            actual: t.horizon(),
            context: context.to_string(),
        });
    }
    Ok(())
}

/// The tail vertex of `e`, if it lies in the host.
pub fn tail_in(host: &Host, e: &EndHandle) -> Option<usize> {
    e.tail(host.truncation()).filter(|&v| host.contains(v))
}

/// True when `e` lives in the host (its ray tail is a host vertex).
pub fn lives_in(host: &Host, e: &EndHandle) -> bool {
    tail_in(host, e).is_some()
}

/// True when `e` lives in the component `c` (which must be a component of
/// the host minus some shallow set).
pub fn lives_in_set(host: &Host, e: &EndHandle, c: &VSet) -> bool {
    tail_in(host, e).is_some_and(|v| c.contains(&v))
}

/// Component of the host minus the ball of radius `depth` that contains the
/// tail of `e`.
pub fn deep_component(host: &Host, e: &EndHandle, depth: u32) -> Option<VSet> {
    let t = host.truncation();
    let tail = tail_in(host, e)?;
    let ball: VSet = host.vertices().filter(|&v| t.depth(v) <= depth).collect();
    host.component_containing(&ball, tail)
}

/// Finite stand-in for `e` at certified depth `depth`: the first layer of its
/// deep component plus its dominators.
pub fn sink(host: &Host, e: &EndHandle, depth: u32) -> Result<VSet> {
    let t = host.truncation();
    let deep = deep_component(host, e, depth)
        .ok_or_else(|| Error::Precondition(format!("end `{}` does not live in the host", e.id)))?;
    let mut out: VSet = deep
        .into_iter()
        .filter(|&v| t.depth(v) == depth + 1)
        .collect();
    for d in &e.dominators {
        if let Some(i) = t.index_of(d).filter(|&i| host.contains(i)) {
            out.insert(i);
        }
    }
    Ok(out)
}

/// A minimum `X`-`ε` separator with its Menger witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndSeparator {
    pub separator: VSet,
    /// Disjoint paths from `X` into the end's deep layer (or dominators).
    pub paths: Vec<Vec<usize>>,
    pub certified_depth: u32,
}

impl EndSeparator {
    pub fn order(&self) -> usize {
        self.separator.len()
    }
}

/// Minimum `X`-`ε` separator in the host avoiding `uncuttable`. `None` when
/// no such finite separator exists.
pub fn min_end_separator_with(
    host: &Host,
    x: &VSet,
    e: &EndHandle,
    uncuttable: &VSet,
    side: Side,
) -> Result<Option<EndSeparator>> {
    let t = host.truncation();
    let depth = certified_depth(t, e, x.len(), t.max_depth(x))?;
    let y = sink(host, e, depth)?;
    Ok(vertex_flow(host, x, &y, uncuttable, side).map(|cut| EndSeparator {
        separator: cut.separator,
        paths: cut.paths,
        certified_depth: depth,
    }))
}

/// Minimum `X`-`ε` separator nearest to `X`.
pub fn min_end_separator(host: &Host, x: &VSet, e: &EndHandle) -> Result<EndSeparator> {
    Ok(min_end_separator_with(host, x, e, &VSet::new(), Side::NearestX)?
        .expect("unit capacities give a finite flow"))
}

/// `C(S, ε)`: the component of the host minus `S` in which `e` lives.
pub fn component_of_end(host: &Host, s: &VSet, e: &EndHandle) -> Result<Region> {
    let t = host.truncation();
    require(t, t.max_depth(s) + MARGIN, &format!("C(S, {})", e.id))?;
    let tail = tail_in(host, e)
        .ok_or_else(|| Error::Precondition(format!("end `{}` does not live in the host", e.id)))?;
    let comp = host
        .component_containing(s, tail)
        .ok_or_else(|| Error::Precondition(format!("separator contains the tail of `{}`", e.id)))?;
    Ok(host.region(comp))
}

pub fn is_linked_to_end(host: &Host, x: &VSet, e: &EndHandle) -> Result<bool> {
    Ok(min_end_separator(host, x, e)?.order() == x.len())
}

/// Depth used to decide boundaries: a set meets an end's direction when it
/// reaches that end's component below this depth.
pub fn boundary_depth(t: &Truncation) -> u32 {
    t.horizon().saturating_sub(MARGIN)
}

/// The declared ends living in the host that are resolvable at this horizon.
pub fn host_ends(host: &Host) -> Vec<EndHandle> {
    let t = host.truncation();
    t.oracle()
        .ends(t.horizon())
        .into_iter()
        .filter(|e| resolvable(e, t.horizon()) && lives_in(host, e))
        .collect()
}

/// `∂(X)`: declared ends with a comb attached to `X`, i.e. ends whose deep
/// component at the boundary depth still meets `X`.
pub fn boundary_of(host: &Host, x: &VSet) -> Vec<EndHandle> {
    let db = boundary_depth(host.truncation());
    host_ends(host)
        .into_iter()
        .filter(|e| {
            deep_component(host, e, db).is_some_and(|c| c.iter().any(|v| x.contains(v)))
        })
        .collect()
}

/// Ids of a list of ends, sorted.
pub fn ids(ends: &[EndHandle]) -> Vec<String> {
    let mut out: Vec<String> = ends.iter().map(|e| e.id.clone()).collect();
    out.sort();
    out
}

/// How `Ψ` is chosen among the declared ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsiRule {
    /// `Ψ` = undominated ends; `X_n` = closure of the ball of radius `n`.
    Undominated,
    /// `Ψ` = all ends; `X_n` = the ball of radius `n`.
    All,
    /// `Ψ` = the listed ends; every other end lies in every `X_n`.
    Subset(Vec<String>),
}

/// A G-delta set of ends presented by an increasing sequence of closed sets
/// `X_1 ⊆ X_2 ⊆ ...` covering every vertex and every end outside `Ψ`.
#[derive(Clone)]
pub struct GDeltaSpec {
    pub family: Arc<dyn GraphFamily>,
    pub rule: PsiRule,
}

impl GDeltaSpec {
    pub fn new(family: Arc<dyn GraphFamily>, rule: PsiRule) -> Self {
        GDeltaSpec { family, rule }
    }

    pub fn in_psi(&self, e: &EndHandle) -> bool {
        match &self.rule {
            PsiRule::Undominated => e.dominators.is_empty(),
            PsiRule::All => true,
            PsiRule::Subset(ids) => ids.contains(&e.id),
        }
    }

    pub fn psi(&self, horizon: u32) -> Vec<EndHandle> {
        let all = self.family.oracle().ends(horizon);
        all.into_iter().filter(|e| self.in_psi(e)).collect()
    }

    pub fn xi(&self, horizon: u32) -> Vec<EndHandle> {
        let all = self.family.oracle().ends(horizon);
        all.into_iter().filter(|e| !self.in_psi(e)).collect()
    }

    /// Whether vertex `v` (at root distance `dist`) lies in `X_n`.
    pub fn vertex_in(&self, dist: u32, n: u32) -> bool {
        n >= 1 && dist <= n
    }

    /// Whether end `e` lies in `X_n`.
    pub fn end_in(&self, e: &EndHandle, n: u32) -> bool {
        if n == 0 || self.in_psi(e) {
            return false;
        }
        match self.rule {
            PsiRule::Undominated => e
                .dominators
                .iter()
                .any(|d| self.family.root_distance(d).is_some_and(|r| r <= n)),
            PsiRule::All => false,
            PsiRule::Subset(_) => true,
        }
    }

    /// `X_n ∩ V` inside a truncation.
    pub fn vertices_at(&self, t: &Truncation, n: u32) -> VSet {
        if n == 0 {
            VSet::new()
        } else {
            t.ball(n)
        }
    }

    /// `X_n ∩ Ω` among the ends declared at `horizon`.
    pub fn ends_at(&self, horizon: u32, n: u32) -> Vec<EndHandle> {
        let all = self.family.oracle().ends(horizon);
        all.into_iter().filter(|e| self.end_in(e, n)).collect()
    }

    /// Closedness of `X_n` in the window: every end in the boundary of its
    /// vertex part belongs to `X_n`.
    pub fn is_closed_at(&self, t: &Truncation, n: u32) -> bool {
        let host = Host::whole(t);
        let inside = ids(&self.ends_at(t.horizon(), n));
        boundary_of(&host, &self.vertices_at(t, n))
            .iter()
            .all(|e| inside.contains(&e.id))
    }
}

/// `Ψ` and `X_n` for the undominated ends of `family`.
pub fn undominated_gdelta(family: Arc<dyn GraphFamily>) -> GDeltaSpec {
    GDeltaSpec::new(family, PsiRule::Undominated)
}
