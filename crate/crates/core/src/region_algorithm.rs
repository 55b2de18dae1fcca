//! The nicest-region selection loop: given a finite `X` and input regions,
//! emit pairwise nested end-linked regions of order `< |X|` until every end
//! is linked to `X` or lives in a chosen region.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::ends::{
    component_of_end, host_ends, is_linked_to_end, lives_in_set, min_end_separator,
    min_end_separator_with, EndHandle,
};
use crate::error::{Error, Result};
use crate::flow::Side;
use crate::graph::{nested, touch, Host, Region, VSet};
use crate::separation::max_disjoint_paths_in;

/// One emitted region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub region: Region,
    pub end: String,
    /// `|N(C)|`, equal to the minimum `X`-`ε` separator size.
    pub order: usize,
    /// True when the direct nearest cut crossed an earlier region and the
    /// region came from [`uncross`] instead.
    pub uncrossed: bool,
}

#[derive(Clone, Debug)]
pub struct AlgorithmRun {
    pub host: VSet,
    pub x: VSet,
    pub inputs: Vec<Region>,
    pub outputs: Vec<Step>,
    /// Minimum `X`-`ε` separator size of every end living in the host.
    pub end_orders: BTreeMap<String, usize>,
    pub linked_ends: Vec<String>,
    pub covered_by_input: Vec<String>,
}

impl AlgorithmRun {
    pub fn k(&self) -> usize {
        self.x.len()
    }

    pub fn regions(&self) -> Vec<Region> {
        self.outputs.iter().map(|s| s.region.clone()).collect()
    }

    /// Outputs not strictly contained in another output.
    pub fn maximal_outputs(&self) -> Vec<Region> {
        maximal(&self.regions())
    }

    pub fn to_json(&self, host: &Host) -> Value {
        let t = host.truncation();
        json!({
            "x": t.labels(&self.x),
            "k": self.k(),
            "inputs": self.inputs.iter().map(|r| json!({
                "size": r.vertices.len(),
                "neighborhood": t.labels(&r.neighborhood),
            })).collect::<Vec<_>>(),
            "outputs": self.outputs.iter().map(|s| json!({
                "end": s.end,
                "order": s.order,
                "size": s.region.vertices.len(),
                "neighborhood": t.labels(&s.region.neighborhood),
                "uncrossed": s.uncrossed,
            })).collect::<Vec<_>>(),
            "end_orders": self.end_orders,
            "linked_ends": self.linked_ends,
            "covered_by_input": self.covered_by_input,
        })
    }
}

/// The inclusion-maximal members of a list of regions, in input order.
pub fn maximal(regions: &[Region]) -> Vec<Region> {
    regions
        .iter()
        .enumerate()
        .filter(|(i, r)| {
            !regions.iter().enumerate().any(|(j, s)| {
                *i != j
                    && r.vertices.is_subset(&s.vertices)
                    && (r.vertices.len() < s.vertices.len() || j < *i)
            })
        })
        .map(|(_, r)| r.clone())
        .collect()
}

fn union(regions: &[Region]) -> VSet {
    regions
        .iter()
        .flat_map(|r| r.vertices.iter().copied())
        .collect()
}

/// True when the region's neighbourhood is linked to `e`, which lives in it.
pub fn is_end_linked(host: &Host, r: &Region, e: &EndHandle) -> Result<bool> {
    Ok(lives_in_set(host, e, &r.vertices) && is_linked_to_end(host, &r.neighborhood, e)?)
}

fn check_inputs(host: &Host, x: &VSet, inputs: &[Region], ends: &[EndHandle]) -> Result<()> {
    let t = host.truncation();
    if x.is_empty() {
        return Err(Error::Precondition("X must be nonempty".into()));
    }
    for i in 0..inputs.len() {
        for j in i + 1..inputs.len() {
            if touch(t, &inputs[i], &inputs[j]) {
                return Err(Error::TouchingRegions {
                    first: i,
                    second: j,
                });
            }
        }
    }
    for (i, d) in inputs.iter().enumerate() {
        if !d.vertices.is_disjoint(x) {
            return Err(Error::Precondition(format!("input region {i} meets X")));
        }
        if d.order() >= x.len() {
            return Err(Error::Precondition(format!(
                "input region {i} has order {} >= |X| = {}",
                d.order(),
                x.len()
            )));
        }
        let mut linked = false;
        for e in ends.iter().filter(|e| lives_in_set(host, e, &d.vertices)) {
            if is_linked_to_end(host, &d.neighborhood, e)? {
                linked = true;
                break;
            }
        }
        if !linked {
            return Err(Error::Precondition(format!(
                "input region {i} is not linked to any end living in it"
            )));
        }
    }
    Ok(())
}

/// Runs the selection loop in `host` on input `X` and input regions `inputs`.
pub fn run(host: &Host, x: &VSet, inputs: &[Region]) -> Result<AlgorithmRun> {
    let ends = host_ends(host);
    check_inputs(host, x, inputs, &ends)?;
    let k = x.len();
    let mut end_orders = BTreeMap::new();
    let mut linked_ends = Vec::new();
    let mut covered_by_input = Vec::new();
    let mut pending: Vec<(EndHandle, usize)> = Vec::new();
    for e in ends {
        if inputs.iter().any(|d| lives_in_set(host, &e, &d.vertices)) {
            covered_by_input.push(e.id.clone());
            continue;
        }
        let m = min_end_separator(host, x, &e)?.order();
        end_orders.insert(e.id.clone(), m);
        if m >= k {
            linked_ends.push(e.id.clone());
        } else {
            pending.push((e, m));
        }
    }

    let mut outputs: Vec<Step> = Vec::new();
    loop {
        pending.retain(|(e, _)| {
            !outputs
                .iter()
                .any(|s| lives_in_set(host, e, &s.region.vertices))
        });
        let Some(level) = pending.iter().map(|(_, m)| *m).min() else {
            break;
        };
        let mut regions: Vec<Region> = inputs.to_vec();
        regions.extend(outputs.iter().map(|s| s.region.clone()));
        let blocked = union(&regions);
        let mut best: Option<Step> = None;
        for (e, _) in pending.iter().filter(|(_, m)| *m == level) {
            let constrained = min_end_separator_with(host, x, e, &blocked, Side::NearestX)?;
            let step = match constrained {
                Some(cut) if cut.order() == level => Step {
                    region: component_of_end(host, &cut.separator, e)?,
                    end: e.id.clone(),
                    order: level,
                    uncrossed: false,
                },
                _ => {
                    let s = min_end_separator(host, x, e)?;
                    let c = component_of_end(host, &s.separator, e)?;
                    let region = uncross(host, &c, &regions, e)?;
                    Step {
                        order: region.order(),
                        region,
                        end: e.id.clone(),
                        uncrossed: true,
                    }
                }
            };
            if step.order != level || !step.region.vertices.is_disjoint(x) {
                return Err(Error::RegionContract(format!(
                    "region for `{}` has order {} (expected {level}) or meets X",
                    e.id, step.order
                )));
            }
            if best
                .as_ref()
                .map_or(true, |b| step.region.vertices.len() > b.region.vertices.len())
            {
                best = Some(step);
            }
        }
        outputs.push(best.expect("pending ends at this level"));
    }

    Ok(AlgorithmRun {
        host: host.vertex_set(),
        x: x.clone(),
        inputs: inputs.to_vec(),
        outputs,
        end_orders,
        linked_ends,
        covered_by_input,
    })
}

fn subsets_up_to(pool: &[usize], max: usize, f: &mut dyn FnMut(&VSet)) {
    fn rec(pool: &[usize], start: usize, max: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&VSet)) {
        f(&cur.iter().copied().collect());
        if cur.len() == max {
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i]);
            rec(pool, i + 1, max, cur, f);
            cur.pop();
        }
    }
    rec(pool, 0, max, &mut Vec::new(), f);
}

/// Largest pool for the exhaustive corner search in [`uncross`].
pub const UNCROSS_POOL_LIMIT: usize = 24;

/// Replaces an `ε`-linked region `C` by an `ε`-linked region of order at most
/// `|N(C)|` that is nested with every region in `others`.
pub fn uncross(host: &Host, c: &Region, others: &[Region], e: &EndHandle) -> Result<Region> {
    let t = host.truncation();
    for i in 0..others.len() {
        for j in i + 1..others.len() {
            if touch(t, &others[i], &others[j]) {
                return Err(Error::TouchingRegions {
                    first: i,
                    second: j,
                });
            }
        }
    }
    if !is_end_linked(host, c, e)? {
        return Err(Error::Precondition(format!("C is not `{}`-linked", e.id)));
    }
    if others
        .iter()
        .any(|d| !d.is_subset(c) && lives_in_set(host, e, &d.vertices))
    {
        return Err(Error::Precondition(format!(
            "`{}` lives in a region not contained in C",
            e.id
        )));
    }
    let crossing: Vec<&Region> = others.iter().filter(|d| !nested(t, c, d)).collect();
    if crossing.is_empty() {
        return Ok(c.clone());
    }
    let k = c.order();
    let all_nested = |r: &Region| others.iter().all(|d| nested(t, r, d));

    let mut best: Option<Region> = None;
    let consider = |r: Region, best: &mut Option<Region>| -> Result<()> {
        if r.order() > k || !all_nested(&r) || !is_end_linked(host, &r, e)? {
            return Ok(());
        }
        let better = best.as_ref().map_or(true, |b| {
            (r.order(), std::cmp::Reverse(r.vertices.len()))
                < (b.order(), std::cmp::Reverse(b.vertices.len()))
        });
        if better {
            *best = Some(r);
        }
        Ok(())
    };

    let blocked = union(others);
    if let Some(cut) = min_end_separator_with(host, &c.neighborhood, e, &blocked, Side::NearestX)? {
        if let Ok(r) = component_of_end(host, &cut.separator, e) {
            consider(r, &mut best)?;
        }
    }

    let mut pool: VSet = c.neighborhood.clone();
    for d in &crossing {
        pool.extend(d.neighborhood.iter().copied());
    }
    if pool.len() <= UNCROSS_POOL_LIMIT {
        let pool: Vec<usize> = pool.into_iter().collect();
        let mut found: Vec<Region> = Vec::new();
        subsets_up_to(&pool, k, &mut |s| {
            if let Ok(r) = component_of_end(host, s, e) {
                if r.neighborhood == *s {
                    found.push(r);
                }
            }
        });
        for r in found {
            consider(r, &mut best)?;
        }
    }
    best.ok_or_else(|| {
        Error::RegionContract(format!(
            "no nested `{}`-linked region of order <= {k} found",
            e.id
        ))
    })
}

/// Per-end and per-region outcome of the two observation checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ObservationReport {
    /// `(end, passed)`: ends neither linked to `X` nor in an input get an
    /// `ε`-linked output.
    pub ends: Vec<(String, bool)>,
    /// `(output index, passed)`: `N(C_i)` is linked to `X`.
    pub regions: Vec<(usize, bool)>,
    /// Structural invariant violations, as messages.
    pub violations: Vec<String>,
}

impl ObservationReport {
    pub fn passed(&self) -> bool {
        self.ends.iter().all(|(_, ok)| *ok)
            && self.regions.iter().all(|(_, ok)| *ok)
            && self.violations.is_empty()
    }
}

/// Checks both observation properties and the structural invariants of a run.
pub fn audit_observation(host: &Host, run: &AlgorithmRun) -> Result<ObservationReport> {
    let t = host.truncation();
    let mut report = ObservationReport::default();
    for e in host_ends(host) {
        if run.covered_by_input.contains(&e.id) || run.linked_ends.contains(&e.id) {
            continue;
        }
        let mut ok = false;
        for s in &run.outputs {
            if is_end_linked(host, &s.region, &e)? {
                ok = true;
                break;
            }
        }
        report.ends.push((e.id.clone(), ok));
    }
    for (i, s) in run.outputs.iter().enumerate() {
        let n = &s.region.neighborhood;
        let paths = max_disjoint_paths_in(host, n, &run.x);
        report.regions.push((i, paths.len() == n.len()));
    }

    let k = run.k();
    let outs = &run.outputs;
    for (i, s) in outs.iter().enumerate() {
        let r = &s.region;
        if !r.vertices.is_disjoint(&run.x) {
            report.violations.push(format!("output {i} meets X"));
        }
        if s.order >= k || r.order() != s.order {
            report.violations.push(format!("output {i} has order {} (k = {k})", r.order()));
        }
        if i > 0 && outs[i - 1].order > s.order {
            report.violations.push(format!("order decreases at output {i}"));
        }
        if !host.is_connected(&r.vertices) {
            report.violations.push(format!("output {i} is disconnected"));
        }
        for (j, o) in outs.iter().enumerate().skip(i + 1) {
            if !nested(t, r, &o.region) {
                report.violations.push(format!("outputs {i} and {j} cross"));
            }
            if r.vertices == o.region.vertices {
                report.violations.push(format!("outputs {i} and {j} coincide"));
            }
        }
        for (j, d) in run.inputs.iter().enumerate() {
            if !nested(t, r, d) {
                report.violations.push(format!("output {i} crosses input {j}"));
            }
            if r.vertices.is_subset(&d.vertices) && r.vertices != d.vertices {
                report.violations.push(format!("output {i} lies strictly inside input {j}"));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{eps3, eps4, AppendixGadget, HalfGrid};
    use crate::graph::expand;
    use std::sync::Arc;

    #[test]
    fn rung_is_linked_to_the_grid_end() {
        let g = HalfGrid::new(4);
        let t = expand(Arc::new(HalfGrid::new(4)), 12).unwrap();
        let host = Host::whole(&t);
        let x = t.set_of(&g.rung(1)).unwrap();
        let r = run(&host, &x, &[]).unwrap();
        assert!(r.outputs.is_empty());
        assert_eq!(r.linked_ends, vec!["end"]);
        assert!(audit_observation(&host, &r).unwrap().passed());
    }

    #[test]
    fn gadget_root_step() {
        let t = expand(Arc::new(AppendixGadget::new()), 16).unwrap();
        let host = Host::whole(&t);
        let x = t.set_of(&AppendixGadget::q_x(1)).unwrap();
        let r = run(&host, &x, &[]).unwrap();
        let first = r.outputs.iter().find(|s| s.end == eps3(1)).unwrap();
        assert_eq!(first.order, 2);
        assert_eq!(
            first.region.neighborhood,
            t.set_of(&[AppendixGadget::s1(1), AppendixGadget::s2(1)]).unwrap()
        );
        let second = r.outputs.iter().find(|s| s.end == eps4(1)).unwrap();
        assert_eq!(second.order, 3);
        let orders: Vec<usize> = r.outputs.iter().map(|s| s.order).collect();
        assert!(orders.windows(2).all(|w| w[0] <= w[1]));
        assert!(audit_observation(&host, &r).unwrap().passed());
    }
}
