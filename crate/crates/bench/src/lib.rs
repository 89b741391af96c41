//! Fixed workloads shared by the criterion benches.

use relgnc::catalog::GroupSpec;
use relgnc::{build_group, FiniteGroup};

/// Groups benchmarked individually, smallest first.
pub const BENCH_GROUPS: &[&str] = &["S3", "D4", "Q8", "A4", "C2xD4", "S4", "C2xS4"];

pub fn group(spec: &str) -> FiniteGroup {
    let spec: GroupSpec = spec.parse().expect("bench specs parse");
    build_group(&spec).expect("bench groups build")
}

/// The largest non-normal proper subgroup generated by a single element,
/// so every bench graph has vertices both in and outside `H`.
pub fn cyclic_probe(group: &FiniteGroup) -> relgnc::ElementId {
    group
        .elements()
        .max_by_key(|&x| (!group.generated_subgroup(&[x]).is_normal(), group.element_order(x), std::cmp::Reverse(x)))
        .expect("groups are nonempty")
}

/// A non-identity element of the relative commutator set, if any.
pub fn commutator_target(group: &FiniteGroup, h_gen: relgnc::ElementId) -> relgnc::ElementId {
    let h = group.generated_subgroup(&[h_gen]);
    h.commutator_set().iter().find(|&c| c != group.identity()).unwrap_or(group.identity())
}
