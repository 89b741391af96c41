//! Closed-form degree and edge-count predictions, and the edge-count bounds,
//! all evaluated from subgroup invariants without building the graph.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{is_prime, smallest_prime_factor, ElementId, ElementSet, Subgroup};

/// Exact rational arithmetic for probabilities and predicted counts.
pub type Rational = num_rational::Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
}

/// Serializes a [`Rational`] as `"p/q"`, or `"p"` when integral.
pub mod ratio_str {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        text.trim().parse().map_err(|_| D::Error::custom(format!("bad rational {text:?}")))
    }
}

fn int(n: usize) -> Rational {
    Rational::from_integer(n as i64)
}

/// The invariants of `H <= G` every prediction draws on, computed once.
#[derive(Debug, Clone)]
pub struct SubgroupFacts<'g> {
    pub h: Subgroup<'g>,
    /// `Z(H, G)`.
    pub relative_center: ElementSet,
    /// `Z(G, H)`.
    pub cocentralizer: ElementSet,
    /// `Z(H)`.
    pub center: ElementSet,
    /// `K(H, G)`.
    pub commutators: ElementSet,
    /// `K(H, H)`.
    pub inner_commutators: ElementSet,
    /// `[H, G]`.
    pub commutator_subgroup: ElementSet,
    /// `hist_hg[u]` counts pairs `(x in H, y in G)` with `[x, y] = u`.
    hist_hg: Vec<u64>,
    /// Same over `H x H`.
    hist_hh: Vec<u64>,
}

impl<'g> SubgroupFacts<'g> {
    pub fn new(h: &Subgroup<'g>) -> Self {
        let group = h.group();
        let mut hist_hg = vec![0u64; group.order()];
        let mut hist_hh = vec![0u64; group.order()];
        for x in h.members().iter() {
            for y in group.elements() {
                let c = group.commutator(x, y).index();
                hist_hg[c] += 1;
                if h.contains(y) {
                    hist_hh[c] += 1;
                }
            }
        }
        let support =
            |hist: &[u64]| hist.iter().enumerate().filter(|(_, &c)| c > 0).map(|(u, _)| ElementId(u)).collect();
        SubgroupFacts {
            relative_center: h.relative_center(),
            cocentralizer: h.cocentralizer(),
            center: h.center(),
            commutators: support(&hist_hg),
            inner_commutators: support(&hist_hh),
            commutator_subgroup: h.commutator_subgroup().members(),
            h: h.clone(),
            hist_hg,
            hist_hh,
        }
    }

    pub fn h_order(&self) -> usize {
        self.h.order()
    }

    pub fn g_order(&self) -> usize {
        self.h.group().order()
    }

    /// `Pr_g(H, G)`.
    pub fn pr_g(&self, g: ElementId) -> Rational {
        Rational::new(self.hist_hg[g.index()] as i64, (self.h_order() * self.g_order()) as i64)
    }

    /// `Pr_g(H) = Pr_g(H, H)`.
    pub fn pr_g_self(&self, g: ElementId) -> Rational {
        Rational::new(self.hist_hh[g.index()] as i64, (self.h_order() * self.h_order()) as i64)
    }

    /// `{g, g^-1}`, collapsed to one element when `g^2 = 1`.
    pub fn targets(&self, g: ElementId) -> Vec<ElementId> {
        let g_inv = self.h.group().inv(g);
        if g_inv == g { vec![g] } else { vec![g, g_inv] }
    }

    /// Sum of `Pr_u(H, G)` over `u in {g, g^-1}`.
    pub fn pr_pair(&self, g: ElementId) -> Rational {
        self.targets(g).into_iter().map(|u| self.pr_g(u)).sum()
    }

    /// Sum of `Pr_u(H)` over `u in {g, g^-1}`.
    pub fn pr_pair_self(&self, g: ElementId) -> Rational {
        self.targets(g).into_iter().map(|u| self.pr_g_self(u)).sum()
    }

    pub fn g_in_k(&self, g: ElementId) -> bool {
        self.commutators.contains(g)
    }

    /// `|Z(H, G)| * |Z(G, H)|`.
    fn zz(&self) -> usize {
        self.relative_center.len() * self.cocentralizer.len()
    }
}

/// `Pr_g(H, G)` without caching anything else.
pub fn pr_g(h: &Subgroup<'_>, g: ElementId) -> Rational {
    let group = h.group();
    let hits = h.members().iter().flat_map(|x| group.elements().map(move |y| group.commutator(x, y)));
    let count = hits.filter(|&c| c == g).count();
    Rational::new(count as i64, (h.order() * group.order()) as i64)
}

/// `Pr_g(H)`.
pub fn pr_g_self(h: &Subgroup<'_>, g: ElementId) -> Rational {
    let group = h.group();
    let members = h.members();
    let hits = members.iter().flat_map(|x| members.iter().map(move |y| group.commutator(x, y)));
    let count = hits.filter(|&c| c == g).count();
    Rational::new(count as i64, (h.order() * h.order()) as i64)
}

/// Which degree formula applies to a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DegreeCase {
    /// `g` is not a commutator of `H` with `G`: every `H`-pair is an edge.
    GNotInK,
    /// `g = 1`: neighbours are the non-commuting partners.
    G1,
    /// `x in Z(H, G)`, `g != 1`.
    CentralVertex,
    /// Exactly one of `xg`, `xg^-1` is conjugate to `x`.
    ConjOne,
    /// Both `xg` and `xg^-1` are conjugate to `x` (and differ).
    ConjBoth,
    /// Neither target is conjugate to `x`.
    NoWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreePrediction {
    pub vertex: ElementId,
    pub case: DegreeCase,
    pub value: usize,
}

/// Predicted degree of `x` in the graph for `(H, g)`.
///
/// For `g != 1` the non-neighbours `y` of `x in H` satisfy `y^-1 x y` in
/// `{xg, xg^-1}`; each realised target contributes a full coset of `C_G(x)`.
/// Vertices outside `H` only see `H`, so the same count runs over `C_H(x)`.
pub fn degree_formula(facts: &SubgroupFacts<'_>, g: ElementId, x: ElementId) -> DegreePrediction {
    let h = &facts.h;
    let group = h.group();
    let (n, m) = (group.order(), h.order());
    let in_h = h.contains(x);
    let (case, value) = if !facts.g_in_k(g) {
        (DegreeCase::GNotInK, if in_h { n - 1 } else { m })
    } else if g == group.identity() {
        let value = if in_h {
            n - group.centralizer(x, group.all()).len()
        } else {
            m - h.centralizer(x).len()
        };
        (DegreeCase::G1, value)
    } else if facts.relative_center.contains(x) {
        (DegreeCase::CentralVertex, n - 1)
    } else {
        let within = if in_h { group.all() } else { h.members() };
        let realized = facts
            .targets(g)
            .into_iter()
            .filter(|&u| group.conjugating_witness(x, group.mul(x, u), within).is_some())
            .count();
        let case = match realized {
            0 => DegreeCase::NoWitness,
            1 => DegreeCase::ConjOne,
            _ => DegreeCase::ConjBoth,
        };
        let centralizer = group.centralizer(x, within).len();
        let value = if in_h { n - 1 - realized * centralizer } else { m - realized * centralizer };
        (case, value)
    };
    DegreePrediction { vertex: x, case, value }
}

/// Which edge-count case an instance `(H, g)` falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeCase {
    GNotInK,
    Identity,
    InvolutionInH,
    InvolutionOutsideH,
    PairInH,
    PairOutsideH,
}

impl EdgeCase {
    pub fn of(facts: &SubgroupFacts<'_>, g: ElementId) -> Self {
        let group = facts.h.group();
        if !facts.g_in_k(g) {
            EdgeCase::GNotInK
        } else if g == group.identity() {
            EdgeCase::Identity
        } else {
            let involution = group.inv(g) == g;
            match (involution, facts.h.contains(g)) {
                (true, true) => EdgeCase::InvolutionInH,
                (true, false) => EdgeCase::InvolutionOutsideH,
                (false, true) => EdgeCase::PairInH,
                (false, false) => EdgeCase::PairOutsideH,
            }
        }
    }

    pub const ALL: [EdgeCase; 6] = [
        EdgeCase::GNotInK,
        EdgeCase::Identity,
        EdgeCase::InvolutionInH,
        EdgeCase::InvolutionOutsideH,
        EdgeCase::PairInH,
        EdgeCase::PairOutsideH,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub met: bool,
}

impl Hypothesis {
    fn new(name: &str, met: bool) -> Self {
        Hypothesis { name: name.to_string(), met }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgePrediction {
    pub formula_id: String,
    pub case: EdgeCase,
    #[serde(with = "ratio_str")]
    pub value: Rational,
    pub hypotheses: Vec<Hypothesis>,
}

impl EdgePrediction {
    /// The prediction as an edge count, if it is a non-negative integer.
    pub fn as_count(&self) -> Option<u64> {
        (self.value.is_integer() && self.value >= Rational::zero()).then(|| *self.value.numer() as u64)
    }
}

pub const PROBABILITY_EDGE_COUNT: &str = "probability_edge_count";
pub const ABELIAN_SUBGROUP_EDGE_COUNT: &str = "abelian_subgroup_edge_count";
pub const PRIME_COMMUTATOR_EDGE_COUNT: &str = "prime_commutator_edge_count";
pub const CLASS_COUNT_EDGE_IDENTITY: &str = "class_count_edge_identity";

/// Edge count from commutator probabilities. Exact for every `g`:
///
/// `2|E| = 2|H||G|(1 - P) - |H|^2 (1 - Q) - d`
///
/// with `P`, `Q` the summed `Pr_u(H, G)`, `Pr_u(H)` over `u in {g, g^-1}`,
/// and `d = |H|` unless `g = 1` (diagonal pairs carry commutator 1).
pub fn edge_count_formula(facts: &SubgroupFacts<'_>, g: ElementId) -> EdgePrediction {
    let case = EdgeCase::of(facts, g);
    let (h, n) = (int(facts.h_order()), int(facts.g_order()));
    let one = Rational::one();
    let two = int(2);
    let twice = match case {
        EdgeCase::GNotInK => two * h * n - h * h - h,
        EdgeCase::Identity => two * h * n * (one - facts.pr_g(g)) - h * h * (one - facts.pr_g_self(g)),
        EdgeCase::InvolutionInH | EdgeCase::PairInH => {
            two * h * n * (one - facts.pr_pair(g)) - h * h * (one - facts.pr_pair_self(g)) - h
        }
        EdgeCase::InvolutionOutsideH | EdgeCase::PairOutsideH => {
            two * h * n * (one - facts.pr_pair(g)) - h * h - h
        }
    };
    EdgePrediction {
        formula_id: PROBABILITY_EDGE_COUNT.into(),
        case,
        value: twice / two,
        hypotheses: Vec::new(),
    }
}

/// The probability formula with `Pr_u(H)` replaced by its value for abelian
/// `H` (1 at the identity, 0 elsewhere).
pub fn edge_count_abelian_h(facts: &SubgroupFacts<'_>, g: ElementId) -> Result<EdgePrediction, FormulaError> {
    if !facts.h.is_abelian() {
        return Err(FormulaError::HypothesisNotMet("H is not abelian".into()));
    }
    let case = EdgeCase::of(facts, g);
    let (h, n) = (int(facts.h_order()), int(facts.g_order()));
    let one = Rational::one();
    let two = int(2);
    let twice = match case {
        EdgeCase::GNotInK => two * h * n - h * h - h,
        EdgeCase::Identity => two * h * n * (one - facts.pr_g(g)),
        _ => two * h * n * (one - facts.pr_pair(g)) - h * h - h,
    };
    Ok(EdgePrediction {
        formula_id: ABELIAN_SUBGROUP_EDGE_COUNT.into(),
        case,
        value: twice / two,
        hypotheses: vec![Hypothesis::new("H abelian", true)],
    })
}

/// The prime `p` for which `[H, G]` has order `p` under the prime-commutator
/// hypothesis, if it holds: either `|[H, G]|` is the smallest prime dividing
/// `|G|`, or `G` is nilpotent and `|[H, G]|` is prime.
pub fn prime_commutator_order(facts: &SubgroupFacts<'_>) -> Option<usize> {
    let c = facts.commutator_subgroup.len();
    let group = facts.h.group();
    let smallest = Some(c) == smallest_prime_factor(group.order());
    (smallest || (is_prime(c) && group.is_nilpotent())).then_some(c)
}

/// Edge count when `[H, G]` has prime order `p`, in terms of `|Z(H, G)|`
/// and `|Z(H)|` only. Each case is a closed form for `2p|E|`.
pub fn edge_count_p_case(facts: &SubgroupFacts<'_>, g: ElementId) -> Result<EdgePrediction, FormulaError> {
    let p = prime_commutator_order(facts).ok_or_else(|| {
        FormulaError::HypothesisNotMet("[H,G] does not have the required prime order".into())
    })?;
    let case = EdgeCase::of(facts, g);
    if case == EdgeCase::GNotInK {
        return Err(FormulaError::HypothesisNotMet("g is not in K(H,G)".into()));
    }
    let (h, n) = (int(facts.h_order()), int(facts.g_order()));
    let z = int(facts.relative_center.len());
    let zh = int(facts.center.len());
    let pr = int(p);
    let one = Rational::one();
    let two = int(2);
    let scaled = match case {
        EdgeCase::Identity => (pr - one) * (two * n * (h - z) - h * (h - zh)),
        EdgeCase::InvolutionInH => {
            two * n * ((pr - one) * h + z) - h * ((pr - one) * h + zh + pr)
        }
        EdgeCase::InvolutionOutsideH => two * n * ((pr - one) * h + z) - pr * h * (h + one),
        EdgeCase::PairInH => {
            two * n * ((pr - two) * h + two * z) - h * ((pr - two) * h + two * zh + pr)
        }
        EdgeCase::PairOutsideH => two * n * ((pr - two) * h + two * z) - pr * h * (h + one),
        EdgeCase::GNotInK => unreachable!(),
    };
    Ok(EdgePrediction {
        formula_id: PRIME_COMMUTATOR_EDGE_COUNT.into(),
        case,
        value: scaled / (two * pr),
        hypotheses: vec![Hypothesis::new("[H,G] has prime order p", true)],
    })
}

/// Three readings of the normal-subgroup, `g = 1` class-count formula
/// `2|E| = (2|G| - |H|)(|H| - k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalClassPrediction {
    /// `k` = number of conjugacy classes of `H` itself.
    #[serde(with = "ratio_str")]
    pub h_class_reading: Rational,
    /// `k` = number of `G`-classes contained in `H`.
    #[serde(with = "ratio_str")]
    pub g_class_reading: Rational,
    /// `2|E| = 2|G|(|H| - k_G) - |H|(|H| - k_H)`, exact for normal `H`.
    #[serde(with = "ratio_str")]
    pub mixed_reading: Rational,
    /// Every `G`-class inside `H` is a single `H`-class (`k_H = k_G`).
    pub classes_coincide: bool,
}

pub fn edge_count_normal_g1(facts: &SubgroupFacts<'_>) -> Result<NormalClassPrediction, FormulaError> {
    if !facts.h.is_normal() {
        return Err(FormulaError::HypothesisNotMet("H is not normal in G".into()));
    }
    let (h, n) = (int(facts.h_order()), int(facts.g_order()));
    let k_h = facts.h.classes().len();
    let k_g = facts.h.parent_classes().len();
    let two = int(2);
    Ok(NormalClassPrediction {
        h_class_reading: (two * n - h) * (h - int(k_h)) / two,
        g_class_reading: (two * n - h) * (h - int(k_g)) / two,
        mixed_reading: (two * n * (h - int(k_g)) - h * (h - int(k_h))) / two,
        classes_coincide: k_h == k_g,
    })
}

/// `|E| = |G|(|G| - k(G)) / 2` for `H = G`, `g = 1`.
pub fn class_count_edge_identity(facts: &SubgroupFacts<'_>) -> Result<EdgePrediction, FormulaError> {
    if !facts.h.is_whole() {
        return Err(FormulaError::HypothesisNotMet("H is not the whole group".into()));
    }
    let group = facts.h.group();
    let n = int(group.order());
    let k = int(group.classes().len());
    Ok(EdgePrediction {
        formula_id: CLASS_COUNT_EDGE_IDENTITY.into(),
        case: EdgeCase::Identity,
        value: n * (n - k) / int(2),
        hypotheses: vec![Hypothesis::new("H = G", true)],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    AtLeast,
    AtMost,
}

impl Relation {
    fn holds(self, lhs: Rational, rhs: Rational) -> bool {
        match self {
            Relation::AtLeast => lhs >= rhs,
            Relation::AtMost => lhs <= rhs,
        }
    }
}

/// One probability inequality the bounds are derived from, evaluated on a
/// concrete instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveCheck {
    pub id: String,
    pub relation: Relation,
    #[serde(with = "ratio_str")]
    pub lhs: Rational,
    #[serde(with = "ratio_str")]
    pub rhs: Rational,
    /// The instance lies inside the primitive's stated range.
    pub applicable: bool,
    pub inequality_holds: bool,
}

impl PrimitiveCheck {
    pub fn met(&self) -> bool {
        self.applicable && self.inequality_holds
    }
}

/// Primitive ids. `_pair` variants sum over `{g, g^-1}`.
pub mod primitive {
    /// `1 - Pr_g(H,G) >= (|H| + |Z(H,G)|) / 2|H|`.
    pub const REL_LOWER: &str = "rel_complement_lower";
    /// `1 - sum Pr_u(H,G) >= |Z(H,G)| / |H|`.
    pub const REL_LOWER_PAIR: &str = "rel_complement_lower_pair";
    /// `Pr_g(H) >= 3|Z(H)|^2 / |H|^2`; needs `g in K(H,H)`.
    pub const SELF_LOWER: &str = "self_lower";
    /// `sum Pr_u(H) >= 6|Z(H)|^2 / |H|^2`; needs `g in K(H,H)`.
    pub const SELF_LOWER_PAIR: &str = "self_lower_pair";
    /// `1 - Pr_g(H,G) <= 1 - 2|Z(H,G)||Z(G,H)| / |H||G|`; needs `g in K(H,G)`.
    pub const REL_UPPER: &str = "rel_complement_upper";
    /// Pair form with 4 in place of 2; needs `g in K(H,G)`.
    pub const REL_UPPER_PAIR: &str = "rel_complement_upper_pair";
    /// `Pr_g(H) <= (|H| - |Z(H)|) / 2|H|`.
    pub const SELF_UPPER: &str = "self_upper";
    /// `sum Pr_u(H) <= (|H| - |Z(H)|) / |H|`.
    pub const SELF_UPPER_PAIR: &str = "self_upper_pair";
    /// `1 - Pr_g(H,G) >= ((p-1)|H| + |Z(H,G)|) / p|H|`.
    pub const REL_LOWER_P: &str = "rel_complement_lower_p";
    /// `1 - sum Pr_u(H,G) >= ((p-2)|H| + 2|Z(H,G)|) / p|H|`.
    pub const REL_LOWER_P_PAIR: &str = "rel_complement_lower_p_pair";
    /// `Pr_g(H) <= (|H| - |Z(H)|) / p|H|`.
    pub const SELF_UPPER_P: &str = "self_upper_p";
    /// `sum Pr_u(H) <= 2(|H| - |Z(H)|) / p|H|`.
    pub const SELF_UPPER_P_PAIR: &str = "self_upper_p_pair";
}

/// Evaluates every primitive on `(H, g)`; `p` is the smallest prime
/// dividing `|G|`. Empty for `g = 1`.
pub fn primitive_checks(facts: &SubgroupFacts<'_>, g: ElementId) -> Vec<PrimitiveCheck> {
    use primitive::*;
    use Relation::*;
    let group = facts.h.group();
    if g == group.identity() {
        return Vec::new();
    }
    let (h, n) = (int(facts.h_order()), int(facts.g_order()));
    let z = int(facts.relative_center.len());
    let zh = int(facts.center.len());
    let zz = int(facts.zz());
    let p = int(smallest_prime_factor(group.order()).expect("g != 1 forces |G| > 1"));
    let one = Rational::one();
    let two = int(2);
    let rel = one - facts.pr_g(g);
    let rel_pair = one - facts.pr_pair(g);
    let own = facts.pr_g_self(g);
    let own_pair = facts.pr_pair_self(g);
    let in_kh = facts.inner_commutators.contains(g);
    let in_k = facts.g_in_k(g);

    let rows: [(&str, Relation, Rational, Rational, bool); 12] = [
        (REL_LOWER, AtLeast, rel, (h + z) / (two * h), true),
        (REL_LOWER_PAIR, AtLeast, rel_pair, z / h, true),
        (SELF_LOWER, AtLeast, own, int(3) * zh * zh / (h * h), in_kh),
        (SELF_LOWER_PAIR, AtLeast, own_pair, int(6) * zh * zh / (h * h), in_kh),
        (REL_UPPER, AtMost, rel, (h * n - two * zz) / (h * n), in_k),
        (REL_UPPER_PAIR, AtMost, rel_pair, (h * n - int(4) * zz) / (h * n), in_k),
        (SELF_UPPER, AtMost, own, (h - zh) / (two * h), true),
        (SELF_UPPER_PAIR, AtMost, own_pair, (h - zh) / h, true),
        (REL_LOWER_P, AtLeast, rel, ((p - one) * h + z) / (p * h), true),
        (REL_LOWER_P_PAIR, AtLeast, rel_pair, ((p - two) * h + two * z) / (p * h), true),
        (SELF_UPPER_P, AtMost, own, (h - zh) / (p * h), true),
        (SELF_UPPER_P_PAIR, AtMost, own_pair, two * (h - zh) / (p * h), true),
    ];
    rows.into_iter()
        .map(|(id, relation, lhs, rhs, applicable)| PrimitiveCheck {
            id: id.into(),
            relation,
            lhs,
            rhs,
            applicable,
            inequality_holds: relation.holds(lhs, rhs),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundStatus {
    Pass,
    Fail,
    Na,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundAudit {
    /// Bound name and sub-case, e.g. `general_lower.involution_in_h`.
    pub bound_id: String,
    /// `lhs relation rhs`, with `lhs` the observed edge count.
    pub relation: Relation,
    #[serde(with = "ratio_str")]
    pub lhs: Rational,
    #[serde(with = "ratio_str")]
    pub rhs: Rational,
    pub holds: bool,
    /// The primitives this bound is derived from.
    pub primitives: Vec<String>,
    /// Every cited primitive holds on this instance.
    pub primitive_hypothesis_met: bool,
}

impl BoundAudit {
    pub fn status(&self) -> BoundStatus {
        match (self.primitive_hypothesis_met, self.holds) {
            (false, _) => BoundStatus::Na,
            (true, true) => BoundStatus::Pass,
            (true, false) => BoundStatus::Fail,
        }
    }
}

pub mod bound {
    pub const GENERAL_LOWER: &str = "general_lower";
    pub const GENERAL_UPPER: &str = "general_upper";
    pub const PRIME_LOWER: &str = "prime_lower";
    pub const PRIME_UPPER: &str = "prime_upper";
    pub const WHOLE_GENERAL_LOWER: &str = "whole_group_general_lower";
    pub const WHOLE_GENERAL_UPPER: &str = "whole_group_general_upper";
    pub const WHOLE_PRIME_LOWER: &str = "whole_group_prime_lower";
    pub const WHOLE_PRIME_UPPER: &str = "whole_group_prime_upper";
}

/// Audits every edge-count bound that applies to `(H, g)` against the
/// observed `edge_count`. Bounds are stated for `g != 1` only.
pub fn audit_bounds(
    facts: &SubgroupFacts<'_>,
    g: ElementId,
    edge_count: u64,
    primitives: &[PrimitiveCheck],
) -> Vec<BoundAudit> {
    use bound::*;
    use primitive::*;
    let group = facts.h.group();
    if g == group.identity() {
        return Vec::new();
    }
    let (h, n) = (int(facts.h_order()), int(facts.g_order()));
    let z = int(facts.relative_center.len());
    let zh = int(facts.center.len());
    let zz = int(facts.zz());
    let p = int(smallest_prime_factor(group.order()).expect("g != 1 forces |G| > 1"));
    let one = Rational::one();
    let (two, three, four, six, eight) = (int(2), int(3), int(4), int(6), int(8));
    let involution = group.inv(g) == g;
    let in_h = facts.h.contains(g);

    let mut rows: Vec<(&str, Relation, Rational, Vec<&str>)> = Vec::new();
    let lower = Relation::AtLeast;
    let upper = Relation::AtMost;
    match (involution, in_h) {
        (true, true) => {
            rows.push((
                GENERAL_LOWER,
                lower,
                (h * (n - one) + n * z + three * zh * zh - h * h) / two,
                vec![REL_LOWER, SELF_LOWER],
            ));
            rows.push((
                GENERAL_UPPER,
                upper,
                (four * h * n - eight * zz - h * h - h * (zh + two)) / four,
                vec![REL_UPPER, SELF_UPPER],
            ));
            rows.push((
                PRIME_LOWER,
                lower,
                (two * (p - one) * h * n + two * z * n - p * h * h + three * p * zh * zh - p * h) / (two * p),
                vec![REL_LOWER_P, SELF_LOWER],
            ));
            rows.push((
                PRIME_UPPER,
                upper,
                (two * p * h * n - four * p * zz - (p - one) * h * h - h * zh - p * h) / (two * p),
                vec![REL_UPPER, SELF_UPPER_P],
            ));
        }
        (true, false) => {
            rows.push((
                GENERAL_LOWER,
                lower,
                (h * (n - one) + n * z - h * h) / two,
                vec![REL_LOWER],
            ));
            rows.push((
                GENERAL_UPPER,
                upper,
                (two * h * n - four * zz - h * h - h) / two,
                vec![REL_UPPER],
            ));
            rows.push((
                PRIME_LOWER,
                lower,
                (two * (p - one) * h * n + two * z * n - p * h * h - p * h) / (two * p),
                vec![REL_LOWER_P],
            ));
            rows.push((
                PRIME_UPPER,
                upper,
                (two * h * n - four * zz - h * h - h) / two,
                vec![REL_UPPER],
            ));
        }
        (false, true) => {
            rows.push((
                GENERAL_LOWER,
                lower,
                (two * n * z + six * zh * zh - h * h - h) / two,
                vec![REL_LOWER_PAIR, SELF_LOWER_PAIR],
            ));
            rows.push((
                GENERAL_UPPER,
                upper,
                (two * h * n - eight * zz - h * (zh + one)) / two,
                vec![REL_UPPER_PAIR, SELF_UPPER_PAIR],
            ));
            rows.push((
                PRIME_LOWER,
                lower,
                (two * (p - two) * h * n + four * z * n - p * h * h + six * p * zh * zh - p * h) / (two * p),
                vec![REL_LOWER_P_PAIR, SELF_LOWER_PAIR],
            ));
            rows.push((
                PRIME_UPPER,
                upper,
                (two * p * h * n - eight * p * zz - (p - two) * h * h - two * h * zh - p * h) / (two * p),
                vec![REL_UPPER_PAIR, SELF_UPPER_P_PAIR],
            ));
        }
        (false, false) => {
            rows.push((
                GENERAL_LOWER,
                lower,
                (two * n * z - h * h - h) / two,
                vec![REL_LOWER_PAIR],
            ));
            rows.push((
                GENERAL_UPPER,
                upper,
                (two * h * n - eight * zz - h * h - h) / two,
                vec![REL_UPPER_PAIR],
            ));
            rows.push((
                PRIME_LOWER,
                lower,
                (two * (p - two) * h * n + four * z * n - p * h * h - p * h) / (two * p),
                vec![REL_LOWER_P_PAIR],
            ));
            rows.push((
                PRIME_UPPER,
                upper,
                (two * h * n - eight * zz - h * h - h) / two,
                vec![REL_UPPER_PAIR],
            ));
        }
    }

    if facts.h.is_whole() {
        // H = G: Z(H,G) = Z(G,H) = Z(H) = Z(G), and g lies in H.
        let (n, zg) = (n, z);
        if involution {
            rows.push((
                WHOLE_GENERAL_LOWER,
                lower,
                (n * zg + three * zg * zg - n) / two,
                vec![REL_LOWER, SELF_LOWER],
            ));
            rows.push((
                WHOLE_GENERAL_UPPER,
                upper,
                (three * n * n - eight * zg * zg - n * (zg + two)) / four,
                vec![REL_UPPER, SELF_UPPER],
            ));
            rows.push((
                WHOLE_PRIME_LOWER,
                lower,
                ((p - two) * n * n + two * zg * n + three * p * zg * zg - p * n) / (two * p),
                vec![REL_LOWER_P, SELF_LOWER],
            ));
            rows.push((
                WHOLE_PRIME_UPPER,
                upper,
                ((p + one) * n * n - four * p * zg * zg - n * zg - p * n) / (two * p),
                vec![REL_UPPER, SELF_UPPER_P],
            ));
        } else {
            rows.push((
                WHOLE_GENERAL_LOWER,
                lower,
                (two * n * zg + six * zg * zg - n * n - n) / two,
                vec![REL_LOWER_PAIR, SELF_LOWER_PAIR],
            ));
            rows.push((
                WHOLE_GENERAL_UPPER,
                upper,
                (two * n * n - eight * zg * zg - n * (zg + one)) / two,
                vec![REL_UPPER_PAIR, SELF_UPPER_PAIR],
            ));
            rows.push((
                WHOLE_PRIME_LOWER,
                lower,
                ((p - four) * n * n + four * zg * n + six * p * zg * zg - p * n) / (two * p),
                vec![REL_LOWER_P_PAIR, SELF_LOWER_PAIR],
            ));
            rows.push((
                WHOLE_PRIME_UPPER,
                upper,
                ((p + two) * n * n - eight * p * zg * zg - two * n * zg - p * n) / (two * p),
                vec![REL_UPPER_PAIR, SELF_UPPER_P_PAIR],
            ));
        }
    }

    let variant = match (involution, in_h) {
        (true, true) => "involution_in_h",
        (true, false) => "involution_outside_h",
        (false, true) => "pair_in_h",
        (false, false) => "pair_outside_h",
    };
    let whole_variant = if involution { "involution" } else { "pair" };
    let met = |id: &str| primitives.iter().any(|c| c.id == id && c.met());
    let actual = int(edge_count as usize);
    rows.into_iter()
        .map(|(id, relation, value, cited)| BoundAudit {
            bound_id: format!("{id}.{}", if id.starts_with("whole") { whole_variant } else { variant }),
            relation,
            lhs: actual,
            rhs: value,
            holds: relation.holds(actual, value),
            primitive_hypothesis_met: cited.iter().all(|c| met(c)),
            primitives: cited.into_iter().map(String::from).collect(),
        })
        .collect()
}
