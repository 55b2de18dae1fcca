use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::graph::{Host, Truncation};

use super::verify::{ConstructionReport, VerificationReport};
use super::TreeDecomposition;

pub const SCHEMA: u32 = 1;

/// The tree, its pending parts and the construction log. Envelope and
/// region-algorithm records are included on request.
pub fn to_json(t: &Truncation, td: &TreeDecomposition, envelopes: bool, algorithm: bool) -> Value {
    let family = t.family();
    let nodes: Vec<Value> = td
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| {
            json!({
                "id": i,
                "parent": n.parent,
                "height": n.height,
                "round": n.round,
                "bag": t.labels(&n.bag),
                "adhesion": t.labels(&td.adhesion(i)),
                "component_size": n.component.as_ref().map(|c| c.len()),
                "regions": n.regions.iter().map(|r| json!({
                    "size": r.vertices.len(),
                    "neighborhood": t.labels(&r.neighborhood),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let pending: Vec<Value> = td
        .pending
        .iter()
        .map(|p| {
            json!({
                "parent": p.parent,
                "size": p.component.len(),
                "neighborhood": t.labels(&p.neighborhood),
            })
        })
        .collect();
    let log: Vec<Value> = td
        .log
        .iter()
        .map(|r| {
            json!({
                "round": r.round,
                "audit": {
                    "finite_adhesion": r.audit.finite_adhesion,
                    "adhesion_in_parent": r.audit.adhesion_in_parent,
                    "regions_valid": r.audit.regions_valid,
                },
                "parts": r.parts.iter().map(|p| {
                    let host = Host::induced(t, &p.component.union(&p.adhesion).copied().collect());
                    let mut v = json!({
                        "node": p.node,
                        "parent": p.parent,
                        "component_size": p.component.len(),
                        "adhesion": t.labels(&p.adhesion),
                        "outputs": p.run.outputs.iter().map(|s| json!({
                            "end": s.end,
                            "order": s.order,
                            "neighborhood": t.labels(&s.region.neighborhood),
                        })).collect::<Vec<_>>(),
                        "interior_size": p.interior.len(),
                        "u1": t.labels(&p.u1),
                        "u2": p.u2,
                        "u3": t.labels(&p.u3),
                        "avoided": p.avoided.iter().map(|r| t.labels(&r.neighborhood)).collect::<Vec<_>>(),
                    });
                    if envelopes {
                        v["envelope"] = p.envelope.to_json(&host);
                    }
                    if algorithm {
                        v["algorithm"] = p.run.to_json(&host);
                    }
                    v
                }).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "family": family.name(),
        "params": family.params(),
        "horizon": t.horizon(),
        "levels": td.levels,
        "nodes": nodes,
        "pending": pending,
        "construction_log": log,
    })
}

pub fn report_json(report: &VerificationReport, construction: Option<&ConstructionReport>) -> Value {
    let mut v = json!({
        "schema": SCHEMA,
        "passed": report.passed(),
        "displays_psi": report.displays_psi(),
        "report": report,
    });
    if let Some(c) = construction {
        v["construction"] = serde_json::to_value(c).expect("serializable");
    }
    v
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn to_dot(t: &Truncation, td: &TreeDecomposition) -> String {
    let mut out = String::from("digraph decomposition {\n  node [shape=box];\n");
    for (i, n) in td.nodes.iter().enumerate() {
        let bag = t.labels(&n.bag).join(" ");
        let _ = writeln!(out, "  n{i} [label=\"{i}: {{{}}}\"];", escape(&bag));
    }
    for e in td.edges() {
        let p = td.nodes[e].parent.expect("edge");
        let adhesion = t.labels(&td.adhesion(e)).join(" ");
        let _ = writeln!(out, "  n{p} -> n{e} [label=\"{{{}}}\"];", escape(&adhesion));
    }
    for (i, p) in td.pending.iter().enumerate() {
        let _ = writeln!(
            out,
            "  p{i} [shape=ellipse, style=dashed, label=\"pending ({} vertices)\"];\n  n{} -> p{i} [style=dashed];",
            p.component.len(),
            p.parent
        );
    }
    out.push_str("}\n");
    out
}
