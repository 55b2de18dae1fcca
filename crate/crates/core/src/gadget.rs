//! The three separator facts of the gadget graph, checked by flow and by
//! exhaustive search over small vertex sets.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::ends::{min_end_separator_with, require, sink};
use crate::error::{Error, Result};
use crate::families::{eps3, eps4, AppendixGadget, Edited};
use crate::flow::Side;
use crate::graph::{expand, GadgetPart, GraphFamily, Host, Truncation, VSet, Vertex};
use crate::separation::separates;

/// Horizon at which the fact suite is certified, exhaustive search included.
pub const FACTS_HORIZON: u32 = 16;

/// Radius around `Q_X` searched for order-3 separators.
pub const SEARCH_RADIUS: u32 = 3;

#[derive(Clone, Debug, Serialize)]
pub struct Fact {
    pub name: String,
    pub pass: bool,
    pub expected: Vec<Vec<String>>,
    pub found: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GadgetFacts {
    pub family: String,
    pub horizon: u32,
    pub rung: u32,
    pub facts: Vec<Fact>,
}

impl GadgetFacts {
    pub fn passed(&self) -> bool {
        self.facts.iter().all(|f| f.pass)
    }
}

fn names(t: &Truncation, sets: &BTreeSet<VSet>) -> Vec<Vec<String>> {
    sets.iter().map(|s| t.labels(s)).collect()
}

fn ball_around(t: &Truncation, x: &VSet, radius: u32) -> Vec<usize> {
    let mut dist = vec![u32::MAX; t.len()];
    let mut queue = std::collections::VecDeque::new();
    for &v in x {
        dist[v] = 0;
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] == radius {
            continue;
        }
        for &w in t.neighbors(u) {
            if dist[w] == u32::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    (0..t.len()).filter(|&v| dist[v] != u32::MAX).collect()
}

/// Checks, for the gadget on rung `rung` of `family` (the gadget graph or an
/// edit of it), that the minimum `Q_X`-`ε3` separator is `{s1, s2}` and
/// unique, that the minimum `Q_X`-`ε4` separator has order 3, and that the
/// order-3 `Q_X`-`ε4` separators meeting the gadget are exactly
/// `{y1, y2, s1}` and `{y1, y2, s2}`.
pub fn gadget_facts(family: Arc<dyn GraphFamily>, horizon: u32, rung: u32) -> Result<GadgetFacts> {
    let t = expand(family.clone(), horizon)?;
    require(&t, FACTS_HORIZON, "gadget facts")?;
    let host = Host::whole(&t);
    let j = rung;
    let end = |id: String| t.oracle().end(&id, horizon).ok_or(Error::UnknownEnd(id));
    let (e3, e4) = (end(eps3(j))?, end(eps4(j))?);
    let x = t.set_of(&AppendixGadget::q_x(j))?;
    let (y1, y2) = (AppendixGadget::y1(j), AppendixGadget::y2(j));
    let (s1, s2) = (AppendixGadget::s1(j), AppendixGadget::s2(j));
    let none = VSet::new();
    let cut = |e, side| -> Result<VSet> {
        Ok(min_end_separator_with(&host, &x, e, &none, side)?
            .expect("unit capacities give a finite flow")
            .separator)
    };

    let mut facts = Vec::new();
    let want: BTreeSet<VSet> = [t.set_of(&[s1, s2])?].into();
    let got: BTreeSet<VSet> = [cut(&e3, Side::NearestX)?, cut(&e3, Side::NearestY)?].into();
    facts.push(Fact {
        name: "min Q_X-eps3 separator is {s1,s2} and unique".into(),
        pass: got == want,
        expected: names(&t, &want),
        found: names(&t, &got),
    });

    let near = cut(&e4, Side::NearestX)?;
    facts.push(Fact {
        name: "min Q_X-eps4 separator has order 3".into(),
        pass: near.len() == 3,
        expected: vec![vec!["3".into()]],
        found: vec![vec![near.len().to_string()]],
    });

    let depth = crate::ends::certified_depth(&t, &e4, x.len(), t.max_depth(&x))?;
    let y = sink(&host, &e4, depth)?;
    let pool = ball_around(&t, &x, SEARCH_RADIUS);
    let in_gadget = |v: usize| matches!(t.vertex(v), Vertex::Gadget(r, _) if r == j);
    let n = pool.len();
    let mut triples: Vec<VSet> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                triples.push([pool[a], pool[b], pool[c]].into());
            }
        }
    }
    let found: BTreeSet<VSet> = triples
        .into_par_iter()
        .filter(|s: &VSet| s.iter().any(|&v| in_gadget(v)) && separates(&host, s, &x, &y))
        .collect();
    let want: BTreeSet<VSet> = [t.set_of(&[y1, y2, s1])?, t.set_of(&[y1, y2, s2])?].into();
    facts.push(Fact {
        name: "order-3 Q_X-eps4 separators meeting the gadget are {y1,y2,s1} and {y1,y2,s2}".into(),
        pass: found == want,
        expected: names(&t, &want),
        found: names(&t, &found),
    });

    Ok(GadgetFacts {
        family: family.name(),
        horizon,
        rung,
        facts,
    })
}

/// The gadget graph with the grid edge `x3-s1` of rung `j` removed.
pub fn without_x3_s1(j: u32) -> Edited {
    Edited::new(
        "appendix_gadget_minus_x3s1",
        Arc::new(AppendixGadget::new()),
        &[],
        &[(Vertex::Grid(3, j), AppendixGadget::s1(j))],
    )
}

/// The gadget graph with an extra edge from `y1` into the degree-3 sub-grid of rung `j`.
pub fn with_y1_shortcut(j: u32) -> Edited {
    Edited::new(
        "appendix_gadget_y1_shortcut",
        Arc::new(AppendixGadget::new()),
        &[(AppendixGadget::y1(j), Vertex::Gadget(j, GadgetPart::Low(2, 1)))],
        &[],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn facts_hold_at_sixteen() {
        let f = gadget_facts(Arc::new(AppendixGadget::new()), 16, 1).unwrap();
        assert!(f.passed(), "{f:?}");
    }

    #[test]
    fn shortcut_breaks_the_first_fact() {
        let f = gadget_facts(Arc::new(with_y1_shortcut(1)), 16, 1).unwrap();
        assert!(!f.facts[0].pass);
    }

    #[test]
    fn below_sixteen_is_a_certificate_error() {
        let err = gadget_facts(Arc::new(AppendixGadget::new()), 15, 1).unwrap_err();
        assert!(err.is_certificate());
    }
}
