//! Linked, tight and componental rooted tree-decompositions of finite adhesion
//! that display a prescribed set of ends of a locally finite infinite graph.
//!
//! Infinite graphs are given as finitely presented [`GraphFamily`] values and
//! every computation runs on a finite [`Truncation`] (a BFS ball around the
//! family root). Ends are declared by the family's [`EndOracle`], together
//! with a stabilization certificate that says how deep the window must reach
//! for the finite answers to equal the infinite ones.

pub mod decomposition;
pub mod ends;
pub mod envelope;
pub mod error;
pub mod families;
pub mod flow;
pub mod gadget;
pub mod graph;
pub mod region_algorithm;
pub mod separation;

pub use ends::{Degree, EndHandle, EndOracle, GDeltaSpec, PsiRule};
pub use error::{Error, Result};
pub use graph::{GraphFamily, Host, Neighbors, Region, Truncation, VSet, Vertex};
