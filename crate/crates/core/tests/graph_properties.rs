//! Graph construction and closed forms against a from-scratch adjacency
//! oracle, plus randomized structural invariants.

use proptest::prelude::*;
use relgnc::formulas::{degree_formula, edge_count_formula, pr_g};
use relgnc::graph::graphs_isomorphic;
use relgnc::{all_subgroups, group_from_str, ElementId, FiniteGroup, Rational, RelGraph, Subgroup, SubgroupFacts};

const GROUPS: &[&str] = &["S3", "D4", "Q8", "D5", "A4", "C2xS3", "D6", "C3xS3", "C2xD4", "C4xC2", "C7"];

/// Edge count straight from the definition, using only the group table.
fn oracle_edges(group: &FiniteGroup, h: &Subgroup<'_>, g: ElementId) -> usize {
    let g_inv = group.inv(g);
    let mut count = 0;
    for x in group.elements() {
        for y in group.elements() {
            if x.index() >= y.index() || !(h.contains(x) || h.contains(y)) {
                continue;
            }
            let c = group.mul(group.mul(group.inv(x), group.inv(y)), group.mul(x, y));
            if c != g && c != g_inv {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn graph_and_formula_match_definition() {
    for spec in GROUPS {
        let group = group_from_str(spec).unwrap();
        for h in all_subgroups(&group) {
            let facts = SubgroupFacts::new(&h);
            for g in group.elements() {
                let expected = oracle_edges(&group, &h, g);
                let graph = RelGraph::build(&h, g);
                assert_eq!(graph.edge_count(), expected, "{spec} {:?} {g}", h.members());
                assert_eq!(edge_count_formula(&facts, g).as_count(), Some(expected as u64));
            }
        }
    }
}

#[test]
fn graph_depends_only_on_the_pair_g_and_inverse() {
    let group = group_from_str("D5").unwrap();
    for h in all_subgroups(&group) {
        for g in group.elements() {
            let a = RelGraph::build(&h, g);
            let b = RelGraph::build(&h, group.inv(g));
            assert_eq!(a.as_graph(), b.as_graph());
        }
    }
}

#[test]
fn isomorphic_relabelings_are_found() {
    let group = group_from_str("D4").unwrap();
    let h = group.generated_subgroup(&[group.find_label("r").unwrap()]);
    let graph = RelGraph::build(&h, group.find_label("r^2").unwrap());
    let map = graphs_isomorphic(graph.as_graph(), graph.as_graph()).unwrap().unwrap();
    for (u, v) in graph.as_graph().edges() {
        assert!(graph.as_graph().has_edge(map[u], map[v]));
    }
}

fn instance() -> impl Strategy<Value = (usize, usize, usize)> {
    (0..GROUPS.len(), any::<usize>(), any::<usize>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn structural_invariants((gi, hi, gj) in instance()) {
        let group = group_from_str(GROUPS[gi]).unwrap();
        let subgroups = all_subgroups(&group);
        let h = &subgroups[hi % subgroups.len()];
        let g = ElementId(gj % group.order());
        let graph = RelGraph::build(h, g);
        prop_assert!(graph.check_invariants().is_empty());
        let degree_sum: usize = group.elements().map(|x| graph.degree(x)).sum();
        prop_assert_eq!(degree_sum, 2 * graph.edge_count());
        for (u, v) in graph.as_graph().edges() {
            prop_assert!(h.contains(ElementId(u)) || h.contains(ElementId(v)));
        }
        let facts = SubgroupFacts::new(h);
        for x in group.elements() {
            prop_assert_eq!(degree_formula(&facts, g, x).value, graph.degree(x));
        }
        if g != group.identity() {
            prop_assert_eq!(graph.domination_number().unwrap(), 1);
        } else {
            for z in facts.relative_center.iter() {
                prop_assert_eq!(graph.degree(z), 0);
            }
        }
    }

    #[test]
    fn probabilities_are_a_distribution((gi, hi, gj) in instance()) {
        let group = group_from_str(GROUPS[gi]).unwrap();
        let subgroups = all_subgroups(&group);
        let h = &subgroups[hi % subgroups.len()];
        let g = ElementId(gj % group.order());
        prop_assert_eq!(pr_g(h, g), pr_g(h, group.inv(g)));
        let total: Rational = group.elements().map(|u| pr_g(h, u)).sum();
        prop_assert_eq!(total, Rational::from_integer(1));
    }
}
