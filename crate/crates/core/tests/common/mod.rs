#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use endlink::families::{FiniteGraph, Planted};
use endlink::graph::expand;
use endlink::{Truncation, VSet};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random simple graph on `n` vertices with edge probability `p`.
pub fn random_edges(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

/// Independent check: no path from `x \ s` to `y \ s` avoiding `s`.
pub fn brute_separates(adj: &[Vec<usize>], s: &BTreeSet<usize>, x: &BTreeSet<usize>, y: &BTreeSet<usize>) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::new();
    for &v in x.iter().filter(|v| !s.contains(v)) {
        seen[v] = true;
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        if y.contains(&u) {
            return false;
        }
        for &w in &adj[u] {
            if !seen[w] && !s.contains(&w) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    true
}

/// Calls `f` on every subset of `pool` of size exactly `k`.
pub fn subsets(pool: &[usize], k: usize, f: &mut dyn FnMut(&BTreeSet<usize>) -> bool) -> bool {
    fn rec(pool: &[usize], start: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&BTreeSet<usize>) -> bool) -> bool {
        if cur.len() == k {
            return f(&cur.iter().copied().collect());
        }
        for i in start..pool.len() {
            cur.push(pool[i]);
            if rec(pool, i + 1, k, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(pool, 0, k, &mut Vec::new(), f)
}

/// Smallest `S` within `pool`, of size at most `max`, separating `x` from `y`.
pub fn brute_min_separator(
    adj: &[Vec<usize>],
    pool: &[usize],
    x: &BTreeSet<usize>,
    y: &BTreeSet<usize>,
    max: usize,
) -> Option<usize> {
    (0..=max).find(|&k| subsets(pool, k, &mut |s| brute_separates(adj, s, x, y)))
}

/// The truncation's adjacency as plain lists.
pub fn window_adjacency(t: &Truncation) -> Vec<Vec<usize>> {
    (0..t.len()).map(|v| t.neighbors(v).to_vec()).collect()
}

pub fn finite_window(n: usize, edges: &[(usize, usize)]) -> Truncation {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let e: Vec<(String, String)> = edges.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect();
    expand(Arc::new(FiniteGraph::from_edges(&names, &e).unwrap()), n as u32 + 4).unwrap()
}

/// Map from test-side vertex numbers to window indices.
pub fn window_set(t: &Truncation, xs: &BTreeSet<usize>) -> VSet {
    let labels: Vec<String> = xs.iter().map(|v| v.to_string()).collect();
    t.set_of_labels(&labels).unwrap()
}

/// A random connected core of `n` vertices with ladders of widths in `1..=wmax`.
pub fn random_planted(rng: &mut ChaCha8Rng, n: u32, ladders: usize, wmax: u32) -> Planted {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.2) && !edges.contains(&(a, b)) {
                edges.push((a, b));
            }
        }
    }
    let attach = (0..ladders)
        .map(|_| {
            let w = rng.gen_range(1..=wmax);
            (0..w).map(|_| rng.gen_range(0..n)).collect()
        })
        .collect();
    Planted::new(n, &edges, attach).unwrap()
}

/// Horizon at which every planted certificate is met for sets inside the core.
pub fn planted_horizon(n: u32, wmax: u32) -> u32 {
    2 * n + wmax + 6
}
