//! Relative g-noncommuting graphs of finite groups.
//!
//! For a finite group `G`, a subgroup `H` and an element `g`, the graph
//! `Γ^g_{H,G}` has vertex set `G`, and distinct `x`, `y` are adjacent when
//! at least one of them lies in `H` and `[x, y]` is neither `g` nor `g^-1`.
//!
//! The crate builds these graphs from explicit Cayley tables, evaluates the
//! closed-form degree and edge-count formulas in exact rational arithmetic,
//! and checks them against the graphs themselves over every small group,
//! subgroup and element.

pub mod catalog;
pub mod formulas;
pub mod graph;
pub mod group;
pub mod harness;
pub mod isoclinism;

pub use catalog::{all_subgroups, build_group, group_from_str, GroupSpec};
pub use formulas::{Rational, SubgroupFacts};
pub use graph::{AdjGraph, RelGraph, ShapeClass};
pub use group::{ElementId, ElementSet, FiniteGroup, Subgroup};
pub use harness::{AuditRecord, SweepConfig, SweepReport};
pub use isoclinism::IsoclinismWitness;
