//! Unit vertex-capacity max flow by vertex splitting (Edmonds-Karp).

use std::collections::VecDeque;

use crate::graph::{Host, VSet};

const INF: u32 = 1 << 30;

/// Which canonical minimum cut to extract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    NearestX,
    NearestY,
}

/// Result of a vertex flow: value, a minimum separator, and disjoint paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub value: usize,
    pub separator: VSet,
    /// Each path starts in `X`, ends in `Y`, and meets them nowhere else.
    pub paths: Vec<Vec<usize>>,
}

struct Arc {
    to: usize,
    cap: u32,
    flow: i64,
}

struct Net {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl Net {
    fn new(n: usize) -> Self {
        Net {
            arcs: Vec::new(),
            out: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, a: usize, b: usize, cap: u32) {
        self.out[a].push(self.arcs.len());
        self.arcs.push(Arc { to: b, cap, flow: 0 });
        self.out[b].push(self.arcs.len());
        self.arcs.push(Arc { to: a, cap: 0, flow: 0 });
    }

    fn residual(&self, e: usize) -> i64 {
        self.arcs[e].cap as i64 - self.arcs[e].flow
    }

    /// Nodes reachable from `s` in the residual graph.
    fn reach(&self, s: usize, only_infinite: bool) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.out[u] {
                let ok = if only_infinite {
                    self.arcs[e].cap == INF
                } else {
                    self.residual(e) > 0
                };
                let v = self.arcs[e].to;
                if ok && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Nodes that can reach `t` in the residual graph.
    fn coreach(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(v) = queue.pop_front() {
            // Arc e: u -> v with residual > 0 appears as the reverse of e ^ 1 at v.
            for &r in &self.out[v] {
                let e = r ^ 1;
                let u = self.arcs[r].to;
                if self.residual(e) > 0 && !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut pred = vec![usize::MAX; self.out.len()];
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &e in &self.out[u] {
                let v = self.arcs[e].to;
                if !seen[v] && self.residual(e) > 0 {
                    seen[v] = true;
                    pred[v] = e;
                    queue.push_back(v);
                }
            }
        }
        if !seen[t] {
            return false;
        }
        let mut v = t;
        while v != s {
            let e = pred[v];
            self.arcs[e].flow += 1;
            self.arcs[e ^ 1].flow -= 1;
            v = self.arcs[e ^ 1].to;
        }
        true
    }
}

/// Maximum number of disjoint `X`-`Y` paths in `host`, with a minimum
/// separator. Vertices in `uncuttable` get infinite capacity and may be shared
/// by paths. Returns `None` when no finite separator exists.
pub fn vertex_flow(host: &Host, x: &VSet, y: &VSet, uncuttable: &VSet, side: Side) -> Option<Cut> {
    let t = host.truncation();
    let n = t.len();
    let (src, snk) = (2 * n, 2 * n + 1);
    let mut net = Net::new(2 * n + 2);
    for v in host.vertices() {
        let cap = if uncuttable.contains(&v) { INF } else { 1 };
        net.add(2 * v, 2 * v + 1, cap);
        for u in host.neighbors(v) {
            net.add(2 * v + 1, 2 * u, INF);
        }
    }
    for &v in x.iter().filter(|&&v| host.contains(v)) {
        net.add(src, 2 * v, INF);
    }
    for &v in y.iter().filter(|&&v| host.contains(v)) {
        net.add(2 * v + 1, snk, INF);
    }
    if net.reach(src, true)[snk] {
        return None;
    }
    let mut value = 0;
    while net.augment(src, snk) {
        value += 1;
    }

    let separator: VSet = match side {
        Side::NearestX => {
            let r = net.reach(src, false);
            host.vertices().filter(|&v| r[2 * v] && !r[2 * v + 1]).collect()
        }
        Side::NearestY => {
            let r = net.coreach(snk);
            host.vertices().filter(|&v| r[2 * v + 1] && !r[2 * v]).collect()
        }
    };
    debug_assert_eq!(separator.len(), value);

    let mut paths = Vec::with_capacity(value);
    let mut used: Vec<i64> = net.arcs.iter().map(|a| a.flow.max(0)).collect();
    for _ in 0..value {
        let mut path = Vec::new();
        let mut u = src;
        while u != snk {
            let e = *net.out[u]
                .iter()
                .find(|&&e| e % 2 == 0 && used[e] > 0)
                .expect("flow decomposition");
            used[e] -= 1;
            u = net.arcs[e].to;
            if u < 2 * n && u % 2 == 0 {
                path.push(u / 2);
            }
        }
        let start = path.iter().rposition(|v| x.contains(v)).unwrap_or(0);
        let path = &path[start..];
        let end = path.iter().position(|v| y.contains(v)).unwrap_or(path.len() - 1);
        paths.push(path[..=end].to_vec());
    }
    Some(Cut {
        value,
        separator,
        paths,
    })
}
