//! Menger separators, disjoint path families, separations and stars.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{vertex_flow, Side};
use crate::graph::{touch, Host, Region, Truncation, VSet};

/// An ordered pair `(A, B)` with `A ∪ B = V` and no edge between `A \ B` and `B \ A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub left: VSet,
    pub right: VSet,
}

impl Separation {
    pub fn separator(&self) -> VSet {
        self.left.intersection(&self.right).copied().collect()
    }

    pub fn order(&self) -> usize {
        self.left.intersection(&self.right).count()
    }

    pub fn is_valid(&self, t: &Truncation) -> bool {
        if self.left.len() + self.right.len() - self.order() != t.len() {
            return false;
        }
        self.left
            .iter()
            .filter(|v| !self.right.contains(v))
            .all(|&v| {
                t.neighbors(v)
                    .iter()
                    .all(|u| self.left.contains(u))
            })
    }
}

/// A star of separations together with its interior.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Star {
    pub separations: Vec<Separation>,
    pub interior: VSet,
}

impl Star {
    /// Pairwise `A ⊆ D` and `C ⊆ B` for distinct members `(A,B)`, `(C,D)`.
    pub fn is_star(&self) -> bool {
        let s = &self.separations;
        (0..s.len()).all(|i| {
            (0..s.len()).all(|j| {
                i == j || (s[i].left.is_subset(&s[j].right) && s[j].left.is_subset(&s[i].right))
            })
        })
    }

    pub fn left_componental(&self, t: &Truncation) -> bool {
        let host = Host::whole(t);
        self.separations.iter().all(|sep| {
            let strict: VSet = sep.left.difference(&sep.right).copied().collect();
            host.is_connected(&strict)
        })
    }

    pub fn left_tight(&self, t: &Truncation) -> bool {
        let host = Host::whole(t);
        self.separations.iter().all(|sep| {
            let strict: VSet = sep.left.difference(&sep.right).copied().collect();
            let sub = Host::induced(t, &strict);
            let target = sep.separator();
            sub.components_without(&VSet::new())
                .into_iter()
                .any(|c| host.neighborhood(&c) == target)
        })
    }
}

/// Pairwise disjoint `X`-`Y` paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathFamily {
    pub paths: Vec<Vec<usize>>,
    pub endpoints_left: VSet,
    pub endpoints_right: VSet,
}

impl PathFamily {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

pub fn max_disjoint_paths_in(host: &Host, x: &VSet, y: &VSet) -> PathFamily {
    let cut = vertex_flow(host, x, y, &VSet::new(), Side::NearestX)
        .expect("unit capacities give a finite flow");
    PathFamily {
        endpoints_left: cut.paths.iter().map(|p| p[0]).collect(),
        endpoints_right: cut.paths.iter().map(|p| p[p.len() - 1]).collect(),
        paths: cut.paths,
    }
}

pub fn max_disjoint_paths(t: &Truncation, x: &VSet, y: &VSet) -> PathFamily {
    max_disjoint_paths_in(&Host::whole(t), x, y)
}

pub fn min_separator_in(host: &Host, x: &VSet, y: &VSet, side: Side) -> VSet {
    vertex_flow(host, x, y, &VSet::new(), side)
        .expect("unit capacities give a finite flow")
        .separator
}

pub fn min_separator(t: &Truncation, x: &VSet, y: &VSet, side: Side) -> VSet {
    min_separator_in(&Host::whole(t), x, y, side)
}

/// True iff there are `|X|` disjoint `X`-`Y` paths.
pub fn is_linked_set(t: &Truncation, x: &VSet, y: &VSet) -> bool {
    max_disjoint_paths(t, x, y).len() == x.len()
}

/// True iff `s` leaves no component meeting both `X \ S` and `Y \ S`.
pub fn separates(host: &Host, s: &VSet, x: &VSet, y: &VSet) -> bool {
    if x.iter().any(|v| y.contains(v) && !s.contains(v)) {
        return false;
    }
    host.components_without(s).iter().all(|c| {
        !(c.iter().any(|v| x.contains(v)) && c.iter().any(|v| y.contains(v)))
    })
}

/// Packages pairwise non-touching regions as the star of separations
/// `(R ∪ N(R), V \ R)`.
pub fn star_from_regions(t: &Truncation, regions: &[Region]) -> Result<Star> {
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
    let all: VSet = (0..t.len()).collect();
    let mut interior = all.clone();
    let separations = regions
        .iter()
        .map(|r| {
            for v in &r.vertices {
                interior.remove(v);
            }
            Separation {
                left: r.closure(),
                right: all.difference(&r.vertices).copied().collect(),
            }
        })
        .collect();
    Ok(Star {
        separations,
        interior,
    })
}
