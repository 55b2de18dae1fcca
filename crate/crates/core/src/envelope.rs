//! Envelopes of vertex-and-end sets, and envelopes avoiding a family of regions.

use serde_json::{json, Value};

use crate::ends::{boundary_depth, boundary_of, host_ends, ids, lives_in_set, EndHandle};
use crate::error::{Error, Result};
use crate::graph::{touch, Host, Region, VSet};

/// A set of vertices together with a set of ends.
#[derive(Clone, Debug, Default)]
pub struct PointSet {
    pub vertices: VSet,
    pub ends: Vec<EndHandle>,
}

impl PointSet {
    pub fn vertices(vertices: VSet) -> Self {
        PointSet {
            vertices,
            ends: Vec::new(),
        }
    }

    pub fn new(vertices: VSet, ends: Vec<EndHandle>) -> Self {
        PointSet { vertices, ends }
    }

    /// `cl(X) ∩ Ω`: the boundary of the vertex part plus the listed ends.
    pub fn closure_ends(&self, host: &Host) -> Vec<String> {
        let mut out = ids(&boundary_of(host, &self.vertices));
        for e in &self.ends {
            if !out.contains(&e.id) {
                out.push(e.id.clone());
            }
        }
        out.sort();
        out
    }
}

/// Machine-checked contract of one envelope computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopeAudit {
    pub contains_core: bool,
    pub finite_adhesion: bool,
    pub boundary_matches: bool,
    pub avoids_regions: bool,
    /// Regions whose closure avoids `X` meet the base envelope only in
    /// shallow vertices.
    pub moreover: bool,
}

impl EnvelopeAudit {
    pub fn passed(&self) -> bool {
        self.contains_core
            && self.finite_adhesion
            && self.boundary_matches
            && self.avoids_regions
            && self.moreover
    }
}

#[derive(Clone, Debug)]
pub struct EnvelopeResult {
    pub core: PointSet,
    pub envelope: VSet,
    /// Each component of the host minus the envelope with its neighbourhood.
    pub adhesion_witness: Vec<(VSet, VSet)>,
    /// `∂(X*)` as end ids.
    pub boundary_witness: Vec<String>,
    /// `cl(X) ∩ Ω` as end ids.
    pub closure_ends: Vec<String>,
    /// Regions of the avoided family that met the base envelope.
    pub replaced: Vec<usize>,
    pub audit: EnvelopeAudit,
}

impl EnvelopeResult {
    pub fn to_json(&self, host: &Host) -> Value {
        let t = host.truncation();
        json!({
            "core": {
                "vertices": t.labels(&self.core.vertices),
                "ends": ids(&self.core.ends),
            },
            "envelope": t.labels(&self.envelope),
            "adhesion_witness": self.adhesion_witness.iter().map(|(c, n)| json!({
                "component_size": c.len(),
                "component_min": c.iter().next().map(|&v| t.label(v)),
                "neighborhood": t.labels(n),
            })).collect::<Vec<_>>(),
            "boundary": self.boundary_witness,
            "closure_ends": self.closure_ends,
            "replaced_regions": self.replaced,
            "audit": {
                "contains_core": self.audit.contains_core,
                "finite_adhesion": self.audit.finite_adhesion,
                "boundary_matches": self.audit.boundary_matches,
                "avoids_regions": self.audit.avoids_regions,
                "moreover": self.audit.moreover,
            },
        })
    }
}

fn is_deep(host: &Host, set: &VSet) -> bool {
    let db = boundary_depth(host.truncation());
    set.iter().any(|&v| host.truncation().depth(v) > db)
}

/// Sealing loop: grows `V(X)` plus ray tails of the ends in `X` until every
/// complementary component has a shallow neighbourhood.
fn seal(host: &Host, x: &PointSet) -> Result<(VSet, Vec<String>)> {
    let t = host.truncation();
    let target = x.closure_ends(host);
    let ends = host_ends(host);
    let mut w = x.vertices.clone();
    for e in &x.ends {
        if !ends.iter().any(|h| h.id == e.id) {
            return Err(Error::UnknownEnd(e.id.clone()));
        }
        let prefix = e.ray_prefix(t);
        let start = prefix
            .iter()
            .rposition(|&v| !host.contains(v))
            .map_or(0, |p| p + 1);
        w.extend(prefix[start..].iter().copied());
    }

    loop {
        let mut changed = false;
        for c in host.components_without(&w) {
            let n = host.neighborhood(&c);
            if !is_deep(host, &n) {
                continue;
            }
            let bad: Vec<&EndHandle> = ends
                .iter()
                .filter(|e| !target.contains(&e.id) && lives_in_set(host, e, &c))
                .collect();
            if bad.is_empty() {
                w.extend(c);
                changed = true;
                continue;
            }
            let delta = bad.iter().map(|e| e.anchor_depth + 1).max().unwrap_or(0);
            let shallow: VSet = c.iter().copied().filter(|&v| t.depth(v) <= delta).collect();
            let inner = Host::induced(t, &c);
            for piece in inner.components_without(&shallow) {
                let pn = host.neighborhood(&piece);
                let attached = pn.iter().any(|v| w.contains(v) && t.depth(*v) > boundary_depth(t));
                let holds_target = ends
                    .iter()
                    .any(|e| target.contains(&e.id) && lives_in_set(host, e, &piece));
                if attached || holds_target {
                    w.extend(piece);
                }
            }
            w.extend(shallow);
            changed = true;
        }
        if !changed {
            break;
        }
    }
    Ok((w, target))
}

fn audit(
    host: &Host,
    x: &PointSet,
    envelope: &VSet,
    target: &[String],
    regions: &[Region],
    base: &VSet,
) -> (EnvelopeAudit, Vec<(VSet, VSet)>, Vec<String>) {
    let t = host.truncation();
    let db = boundary_depth(t);
    let witness: Vec<(VSet, VSet)> = host
        .components_without(envelope)
        .into_iter()
        .map(|c| {
            let n = host.neighborhood(&c);
            (c, n)
        })
        .collect();
    let boundary = ids(&boundary_of(host, envelope));
    let avoids = regions
        .iter()
        .all(|r| r.vertices.is_disjoint(envelope));
    let moreover = regions
        .iter()
        .all(|r| r.vertices.intersection(base).all(|&v| t.depth(v) <= db));
    let audit = EnvelopeAudit {
        contains_core: x.vertices.is_subset(envelope),
        finite_adhesion: witness.iter().all(|(_, n)| !is_deep(host, n)),
        boundary_matches: boundary == target,
        avoids_regions: avoids,
        moreover,
    };
    (audit, witness, boundary)
}

fn contract_error(r: &EnvelopeResult) -> Option<Error> {
    let a = &r.audit;
    let clause = if !a.contains_core {
        "envelope misses a vertex of X"
    } else if !a.finite_adhesion {
        "a complementary component has an unbounded neighbourhood"
    } else if !a.boundary_matches {
        "boundary differs from cl(X) ∩ Ω"
    } else if !a.avoids_regions {
        "envelope meets an avoided region"
    } else if !a.moreover {
        "base envelope reaches deep into a region avoiding cl(X)"
    } else {
        return None;
    };
    Some(Error::EnvelopeContract(format!(
        "{clause} (boundary {:?}, expected {:?})",
        r.boundary_witness, r.closure_ends
    )))
}

/// An envelope of `X` in the host: a superset of `V(X)` of finite adhesion
/// whose boundary is `cl(X) ∩ Ω`.
pub fn envelope(host: &Host, x: &PointSet) -> Result<EnvelopeResult> {
    let (w, target) = seal(host, x)?;
    let (audit, adhesion_witness, boundary_witness) = audit(host, x, &w, &target, &[], &w);
    let result = EnvelopeResult {
        core: x.clone(),
        envelope: w,
        adhesion_witness,
        boundary_witness,
        closure_ends: target,
        replaced: Vec::new(),
        audit,
    };
    match contract_error(&result) {
        Some(err) => Err(err),
        None => Ok(result),
    }
}

/// Checks that `regions` may be avoided: pairwise non-touching, disjoint from
/// `V(X)`, shallow neighbourhoods, and no end of `X` in their closure.
pub fn check_avoidable(host: &Host, x: &PointSet, regions: &[Region]) -> Result<()> {
    let t = host.truncation();
    for i in 0..regions.len() {
        for j in i + 1..regions.len() {
            if touch(t, &regions[i], &regions[j]) {
                return Err(Error::TouchingRegions {
                    first: i,
                    second: j,
                });
            }
        }
    }
    let x_ends = x.closure_ends(host);
    for (i, r) in regions.iter().enumerate() {
        if !r.vertices.is_disjoint(&x.vertices) {
            return Err(Error::Precondition(format!("region {i} meets X")));
        }
        if is_deep(host, &r.neighborhood) {
            return Err(Error::Precondition(format!(
                "region {i} has an unbounded neighbourhood"
            )));
        }
        if let Some(e) = boundary_of(host, &r.vertices)
            .iter()
            .find(|e| x_ends.contains(&e.id))
        {
            return Err(Error::Precondition(format!(
                "closure of region {i} contains the end `{}` of cl(X)",
                e.id
            )));
        }
    }
    Ok(())
}

/// An envelope of `X` disjoint from every region in `regions`:
/// `X* = (X** \ ⋃D') ∪ ⋃{N(D) : D ∈ D'}` where `X**` is the base envelope
/// and `D'` the regions meeting it.
pub fn envelope_avoiding(host: &Host, x: &PointSet, regions: &[Region]) -> Result<EnvelopeResult> {
    check_avoidable(host, x, regions)?;
    let (base, target) = seal(host, x)?;
    let mut replaced = Vec::new();
    let mut w = base.clone();
    for (i, r) in regions.iter().enumerate() {
        if !r.vertices.is_disjoint(&base) {
            replaced.push(i);
            for v in &r.vertices {
                w.remove(v);
            }
        }
    }
    for &i in &replaced {
        w.extend(regions[i].neighborhood.iter().copied());
    }
    let (audit, adhesion_witness, boundary_witness) = audit(host, x, &w, &target, regions, &base);
    let result = EnvelopeResult {
        core: x.clone(),
        envelope: w,
        adhesion_witness,
        boundary_witness,
        closure_ends: target,
        replaced,
        audit,
    };
    match contract_error(&result) {
        Some(err) => Err(err),
        None => Ok(result),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{half_grid_pendant, HalfGrid};
    use crate::graph::{expand, Vertex};
    use std::sync::Arc;

    #[test]
    fn finite_set_is_its_own_envelope() {
        let g = HalfGrid::new(4);
        let t = expand(Arc::new(HalfGrid::new(4)), 10).unwrap();
        let host = Host::whole(&t);
        let x = t.set_of(&g.rung(2)).unwrap();
        let r = envelope(&host, &PointSet::vertices(x.clone())).unwrap();
        assert_eq!(r.envelope, x);
        assert!(r.boundary_witness.is_empty());
    }

    #[test]
    fn end_of_half_grid() {
        let t = expand(Arc::new(HalfGrid::new(4)), 10).unwrap();
        let host = Host::whole(&t);
        let e = t.oracle().end("end", 10).unwrap();
        let r = envelope(&host, &PointSet::new(VSet::new(), vec![e])).unwrap();
        assert_eq!(r.boundary_witness, vec!["end"]);
        assert!(r.audit.passed());
    }

    #[test]
    fn pendant_is_swapped_for_its_neighbourhood() {
        let t = expand(Arc::new(half_grid_pendant()), 10).unwrap();
        let host = Host::whole(&t);
        let blob = t
            .set_of(&[Vertex::Id(0), Vertex::Id(1), Vertex::Id(2)])
            .unwrap();
        let d = host.region(blob.clone());
        assert_eq!(d.order(), 3);
        let e = t.oracle().end("end", 10).unwrap();
        let x = PointSet::new(VSet::new(), vec![e]);
        let base = envelope(&host, &x).unwrap();
        assert!(!base.envelope.is_disjoint(&blob));
        let r = envelope_avoiding(&host, &x, &[d.clone()]).unwrap();
        assert_eq!(r.replaced, vec![0]);
        assert!(r.envelope.is_disjoint(&blob));
        assert!(d.neighborhood.is_subset(&r.envelope));
        assert!(r.audit.passed());
    }
}
