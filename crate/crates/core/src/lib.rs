//! Certifying solver for switchable 2-colouring of `(m, n)`-mixed graphs.
//!
//! A mixed graph carries undirected edges coloured from `m` colours and arcs
//! coloured from `n` colours. A switch at a vertex applies one element of a
//! permutation group to every incidence at that vertex: the element permutes
//! edge colours, arc colours, and reverses selected arc directions. The
//! solver decides whether some sequence of switches turns the graph into one
//! that maps homomorphically onto a two-vertex target, and backs every answer
//! with a checkable certificate.
//!
//! Colours and vertices are 0-based throughout the library. The text formats
//! in [`format`] use 1-based indices.

pub mod error;
pub mod format;
pub mod mixed_graph;
pub mod oracle;
pub mod perm_group;
pub mod solver;
pub mod substitution;
pub mod switching;

pub use error::{Error, Result};
pub use mixed_graph::{Bipartition, Edge, Incidence, MixedGraph, OddCycleWitness, SpanningForest};
pub use perm_group::{ColourKind, ColourOrbit, SwitchElement, SwitchGroup};
pub use solver::certificate::{Certificate, NoCertificate, Target, Verification, YesCertificate};
pub use substitution::SubstitutionClasses;
pub use switching::{StepScope, SwitchSequence};
