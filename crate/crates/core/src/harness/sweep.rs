use rayon::prelude::*;

use super::{AuditRecord, PrimitiveCensus, SpecialCheck, SweepConfig, SweepError, SweepReport, Violation};
use crate::catalog::{all_subgroups, build_group, default_families, GroupSpec};
use crate::formulas::{
    audit_bounds, class_count_edge_identity, degree_formula, edge_count_abelian_h, edge_count_formula,
    edge_count_normal_g1, edge_count_p_case, primitive_checks, BoundStatus, PrimitiveCheck, Rational,
    SubgroupFacts,
};
use crate::graph::{RelGraph, ShapeClass, SEARCH_LIMIT};
use crate::group::{ElementId, FiniteGroup, MAX_VERIFIED_ORDER};

/// One audited instance plus what the sweep aggregates from it.
#[derive(Debug, Clone)]
pub struct InstanceAudit {
    pub g: ElementId,
    pub record: AuditRecord,
    pub violations: Vec<String>,
    /// Coverage keys hit by this instance.
    pub coverage: Vec<String>,
    pub primitives: Vec<PrimitiveCheck>,
}

fn special(formula_id: &str, predicted: Rational, oracle: u64, hypotheses_met: bool) -> SpecialCheck {
    SpecialCheck {
        formula_id: formula_id.into(),
        predicted,
        matches_oracle: predicted == Rational::from_integer(oracle as i64),
        hypotheses_met,
    }
}

/// Builds the graph for `(H, g)`, evaluates every applicable formula and
/// bound, and checks the structural contracts.
pub fn audit_instance(group_spec: &str, facts: &SubgroupFacts<'_>, g: ElementId) -> InstanceAudit {
    let h = &facts.h;
    let group = h.group();
    let n = group.order();
    let graph = RelGraph::build(h, g);
    let edges = graph.edge_count() as u64;
    let g_in_k = facts.g_in_k(g);
    let g_is_one = g == group.identity();
    let h_is_central = facts.relative_center == h.members();
    let standing = !group.is_abelian() && !h_is_central && g_in_k;
    let mut violations: Vec<String> = graph.check_invariants();
    let mut coverage = Vec::new();

    let mut degree_mismatches = 0;
    for x in group.elements() {
        let predicted = degree_formula(facts, g, x);
        coverage.push(format!("degree.{:?}", predicted.case));
        if predicted.value != graph.degree(x) {
            degree_mismatches += 1;
            violations.push(format!(
                "degree of {x}: formula {} ({:?}) vs oracle {}",
                predicted.value,
                predicted.case,
                graph.degree(x)
            ));
        }
    }

    let general = edge_count_formula(facts, g);
    coverage.push(format!("edge.{:?}", general.case));
    if general.as_count() != Some(edges) {
        violations.push(format!("edge formula {} vs oracle {edges}", general.value));
    }

    let mut specials = Vec::new();
    if let Ok(p) = edge_count_abelian_h(facts, g) {
        specials.push(special(&p.formula_id, p.value, edges, true));
    }
    if let Ok(p) = edge_count_p_case(facts, g) {
        specials.push(special(&p.formula_id, p.value, edges, true));
    }
    if g_is_one {
        if let Ok(p) = edge_count_normal_g1(facts) {
            let printed = "normal_subgroup_class_edge_count";
            specials.push(special(&format!("{printed}.h_classes"), p.h_class_reading, edges, p.classes_coincide));
            specials.push(special(&format!("{printed}.g_classes"), p.g_class_reading, edges, p.classes_coincide));
            specials.push(special(&format!("{printed}.mixed"), p.mixed_reading, edges, true));
        }
        if let Ok(p) = class_count_edge_identity(facts) {
            specials.push(special(&p.formula_id, p.value, edges, true));
        }
    }
    for check in &specials {
        if check.hypotheses_met {
            coverage.push(format!("special.{}", check.formula_id));
            if !check.matches_oracle {
                violations.push(format!(
                    "{} predicts {} vs oracle {edges}",
                    check.formula_id, check.predicted
                ));
            }
        }
    }

    let primitives = primitive_checks(facts, g);
    let bound_audits = audit_bounds(facts, g, edges, &primitives);
    for audit in &bound_audits {
        coverage.push(format!("bound.{}.{:?}", audit.bound_id, audit.status()));
        if audit.status() == BoundStatus::Fail {
            violations.push(format!(
                "bound {} fails: {} vs {}",
                audit.bound_id, audit.lhs, audit.rhs
            ));
        }
    }

    let shape = graph.classify_shape();
    let triangle_free = graph.is_triangle_free();
    let domination = (n <= SEARCH_LIMIT).then(|| graph.domination_number().expect("within the search limit"));
    violations.extend(contract_violations(facts, &graph, standing, shape, triangle_free, domination));

    let record = AuditRecord {
        group_spec: group_spec.to_string(),
        group_order: n,
        subgroup_members: h.members().to_vec(),
        h_order: h.order(),
        g_label: group.label(g).to_string(),
        g_in_k,
        standing_assumptions_met: standing,
        edges_oracle: edges,
        edges_formula: general.value,
        degree_mismatch_count: degree_mismatches,
        shape,
        triangle_free,
        domination,
        bound_audits,
        special_formula_checks: specials,
    };
    InstanceAudit { g, record, violations, coverage, primitives }
}

/// Shape, triangle and domination claims about the graph family.
fn contract_violations(
    facts: &SubgroupFacts<'_>,
    graph: &RelGraph<'_>,
    standing: bool,
    shape: ShapeClass,
    triangle_free: bool,
    domination: Option<usize>,
) -> Vec<String> {
    let h = &facts.h;
    let group = h.group();
    let n = group.order();
    let g = graph.g_elem();
    let g_is_one = g == group.identity();
    let mut out = Vec::new();

    if standing {
        let star_expected = n == 6 && h.order() == 2 && !g_is_one;
        let is_star = matches!(shape, ShapeClass::Star { .. });
        if is_star != star_expected {
            out.push(format!("star expected {star_expected}, got {}", shape.name()));
        }
        if shape.is_tree() && !g_is_one && h.order() != 2 {
            out.push(format!("tree with |H| = {}", h.order()));
        }
        if matches!(shape, ShapeClass::Lollipop { .. }) && !matches!(h.order(), 2 | 3) {
            out.push(format!("lollipop with |H| = {}", h.order()));
        }
    }
    if shape == ShapeClass::CompleteGraph && facts.g_in_k(g) {
        out.push("complete graph with g in K(H,G)".into());
    }
    if !g_is_one {
        let has_order_three = h.members().iter().any(|x| group.element_order(x) == 3);
        if has_order_three && triangle_free {
            out.push("triangle-free although H has an element of order 3".into());
        }
        if let Some(d) = domination {
            if d != 1 {
                out.push(format!("domination number {d} with g != 1"));
            }
        }
    } else {
        // Dropping Z(H,G) loses no edges when g = 1.
        if facts.relative_center.iter().any(|z| graph.degree(z) != 0) {
            out.push("a vertex of Z(H,G) is not isolated for g = 1".into());
        }
    }
    out
}

/// Audits every `(H, g)` of one group; `g` runs over one representative
/// (the smaller id) of each `{g, g^-1}`.
fn audit_group(spec: &str, group: &FiniteGroup, include_central: bool) -> Vec<InstanceAudit> {
    let mut out = Vec::new();
    for h in all_subgroups(group) {
        let facts = SubgroupFacts::new(&h);
        if facts.relative_center == h.members() && !include_central {
            continue;
        }
        for g in group.elements().filter(|&g| g <= group.inv(g)) {
            out.push(audit_instance(spec, &facts, g));
        }
    }
    out
}

/// Runs the full sweep. Records come back sorted by (family position,
/// subgroup members, g id) whatever the worker count.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport, SweepError> {
    if config.max_order == 0 || config.max_order > MAX_VERIFIED_ORDER {
        return Err(SweepError::InvalidConfig(format!(
            "max_order must be in 1..={MAX_VERIFIED_ORDER}, got {}",
            config.max_order
        )));
    }
    if config.jobs == 0 {
        return Err(SweepError::InvalidConfig("jobs must be at least 1".into()));
    }
    let specs: Vec<GroupSpec> = config.families.clone().unwrap_or_else(|| default_families(config.max_order));
    let groups: Vec<(String, FiniteGroup)> = specs
        .iter()
        .map(|spec| {
            build_group(spec)
                .map(|g| (spec.to_string(), g))
                .map_err(|source| SweepError::Catalog { spec: spec.to_string(), source })
        })
        .collect::<Result<_, _>>()?;

    let include = config.include_g_not_in_k;
    let run = || -> Vec<(usize, Vec<InstanceAudit>)> {
        groups
            .par_iter()
            .enumerate()
            .map(|(i, (spec, group))| (i, audit_group(spec, group, include)))
            .collect()
    };
    let mut per_group = if config.jobs == 1 {
        groups.iter().enumerate().map(|(i, (spec, group))| (i, audit_group(spec, group, include))).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| SweepError::InvalidConfig(e.to_string()))?
            .install(run)
    };
    per_group.sort_by_key(|(i, _)| *i);

    let mut report = SweepReport::default();
    for (_, mut audits) in per_group {
        audits.sort_by(|a, b| (&a.record.subgroup_members, a.g).cmp(&(&b.record.subgroup_members, b.g)));
        for audit in audits {
            let key = audit.record.key();
            for message in audit.violations {
                report.violations.push(Violation { instance: key.clone(), message });
            }
            for c in audit.coverage {
                *report.coverage.entry(c).or_default() += 1;
            }
            for p in &audit.primitives {
                let entry: &mut PrimitiveCensus = report.primitive_census.entry(p.id.clone()).or_default();
                entry.evaluated += 1;
                entry.applicable += usize::from(p.applicable);
                entry.raw_violations += usize::from(!p.inequality_holds);
                entry.applicable_violations += usize::from(p.applicable && !p.inequality_holds);
            }
            if audit.record.shape.is_tree() {
                report.tree_instances.push(key);
            }
            report.records.push(audit.record);
        }
    }
    Ok(report)
}
