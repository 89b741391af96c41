//! Exhaustive sweep over catalog groups, cross-checking every graph
//! against the closed forms, and the JSON/CSV reports it produces.

mod report;
mod sweep;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{CatalogError, GroupSpec};
use crate::formulas::{ratio_str, BoundAudit, Rational};
use crate::graph::ShapeClass;

pub use report::{records_to_csv, records_to_json, write_report, ReportError};
pub use sweep::{audit_instance, run_sweep, InstanceAudit};

pub const DEFAULT_MAX_ORDER: usize = 16;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
    #[error("cannot build {spec}: {source}")]
    Catalog { spec: String, source: CatalogError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    /// Upper bound on group order for the default family list; at most 64.
    pub max_order: usize,
    /// Groups to sweep; `None` means every catalog group up to `max_order`.
    pub families: Option<Vec<GroupSpec>>,
    /// Also sweep subgroups with `H = Z(H, G)`, where `K(H, G) = {1}`.
    pub include_g_not_in_k: bool,
    pub jobs: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { max_order: DEFAULT_MAX_ORDER, families: None, include_g_not_in_k: true, jobs: 1 }
    }
}

/// A closed form evaluated on one instance beside the oracle edge count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialCheck {
    pub formula_id: String,
    #[serde(with = "ratio_str")]
    pub predicted: Rational,
    pub matches_oracle: bool,
    /// The formula's own hypotheses hold, so a mismatch is a real failure.
    pub hypotheses_met: bool,
}

/// Everything checked for one `(G, H, g)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub group_spec: String,
    pub group_order: usize,
    pub subgroup_members: Vec<usize>,
    pub h_order: usize,
    pub g_label: String,
    #[serde(rename = "g_in_K")]
    pub g_in_k: bool,
    /// `G` nonabelian, `H != Z(H, G)` and `g in K(H, G)`.
    pub standing_assumptions_met: bool,
    pub edges_oracle: u64,
    #[serde(with = "ratio_str")]
    pub edges_formula: Rational,
    pub degree_mismatch_count: usize,
    pub shape: ShapeClass,
    pub triangle_free: bool,
    pub domination: Option<usize>,
    pub bound_audits: Vec<BoundAudit>,
    pub special_formula_checks: Vec<SpecialCheck>,
}

impl AuditRecord {
    /// `spec|{members}|g`, unique within a sweep.
    pub fn key(&self) -> String {
        let members: Vec<String> = self.subgroup_members.iter().map(usize::to_string).collect();
        format!("{}|{{{}}}|{}", self.group_spec, members.join(","), self.g_label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub instance: String,
    pub message: String,
}

/// How often a primitive inequality failed across a sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveCensus {
    pub evaluated: usize,
    pub applicable: usize,
    /// Inequality false, regardless of its stated range.
    pub raw_violations: usize,
    /// Inequality false although the instance is in range.
    pub applicable_violations: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub records: Vec<AuditRecord>,
    pub violations: Vec<Violation>,
    /// Hit counts per degree case, edge case and special formula.
    pub coverage: BTreeMap<String, usize>,
    pub primitive_census: BTreeMap<String, PrimitiveCensus>,
    /// Instances whose graph is a tree (stars included).
    pub tree_instances: Vec<String>,
}

impl SweepReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn coverage_of(&self, key: &str) -> usize {
        self.coverage.get(key).copied().unwrap_or(0)
    }
}
