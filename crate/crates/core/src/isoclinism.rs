//! Relative isoclinism between pairs `(H1, G1)`, `(H2, G2)` and the two
//! graph isomorphisms it supports: conjugating `g` when `H` is normal, and
//! transporting the graph along an isoclinism.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::RelGraph;
use crate::group::{ElementId, ElementSet, FiniteGroup, GroupError, Subgroup};

/// Largest parent-group order accepted by the witness search.
pub const ISOCLINISM_ORDER_LIMIT: usize = 16;

#[derive(Debug, Error)]
pub enum IsoclinismError {
    #[error("group of order {order} exceeds the isoclinism search limit {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error("H is not normal in G")]
    HNotNormal,
    #[error("relative centers differ in size ({left} vs {right})")]
    CenterSizeMismatch { left: usize, right: usize },
    #[error("g is not in the relative commutator subgroup [H, G]")]
    NotInCommutatorSubgroup,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `G / N` for a normal `N`, materialized on smallest-id coset representatives.
#[derive(Debug, Clone)]
pub struct Quotient {
    /// `reps[i]` represents coset `i`; ascending, so coset 0 is `N` itself.
    pub reps: Vec<ElementId>,
    /// Coset index of every element of the parent group.
    pub coset_of: Vec<usize>,
    pub group: FiniteGroup,
}

impl Quotient {
    pub fn new(parent: &FiniteGroup, normal: ElementSet) -> Result<Self, GroupError> {
        let mut coset_of = vec![usize::MAX; parent.order()];
        let mut reps = Vec::new();
        for x in parent.elements() {
            if coset_of[x.index()] != usize::MAX {
                continue;
            }
            for n in normal.iter() {
                coset_of[parent.mul(x, n).index()] = reps.len();
            }
            reps.push(x);
        }
        let table: Vec<Vec<usize>> = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| coset_of[parent.mul(a, b).index()]).collect())
            .collect();
        let labels = reps.iter().map(|&r| parent.label(r).to_string()).collect();
        let group = FiniteGroup::from_cayley_table(&table, Some(labels))?;
        Ok(Quotient { reps, coset_of, group })
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    /// Cosets meeting `set`.
    pub fn image(&self, set: ElementSet) -> ElementSet {
        set.iter().map(|x| ElementId(self.coset_of[x.index()])).collect()
    }
}

/// A relative isoclinism `(phi, psi)` from `(H1, G1)` to `(H2, G2)`.
#[derive(Debug, Clone)]
pub struct IsoclinismWitness<'a, 'b> {
    pub h1: Subgroup<'a>,
    pub h2: Subgroup<'b>,
    /// `phi` on coset representatives: `(rep in G1, rep in G2)`, ascending.
    pub phi: Vec<(ElementId, ElementId)>,
    /// `psi : [H1, G1] -> [H2, G2]` as ascending `(x, psi(x))` pairs.
    pub psi: Vec<(ElementId, ElementId)>,
    /// Coset representatives of `Z(H1, G1)` in `G1`, those in `H1` first.
    pub transversal1: Vec<ElementId>,
    /// `transversal2[i]` represents `phi` of the coset of `transversal1[i]`.
    pub transversal2: Vec<ElementId>,
}

impl IsoclinismWitness<'_, '_> {
    pub fn psi_of(&self, x: ElementId) -> Option<ElementId> {
        self.psi.iter().find(|(a, _)| *a == x).map(|&(_, b)| b)
    }

    /// Re-checks both maps and the commuting square from scratch.
    pub fn verify(&self) -> Result<(), String> {
        let (g1, g2) = (self.h1.group(), self.h2.group());
        let z1 = self.h1.relative_center();
        let z2 = self.h2.relative_center();
        let q1 = Quotient::new(g1, z1).map_err(|e| e.to_string())?;
        let q2 = Quotient::new(g2, z2).map_err(|e| e.to_string())?;
        if self.phi.len() != q1.order() || q1.order() != q2.order() {
            return Err("phi is not a bijection of the quotients".into());
        }
        let mut phi = vec![usize::MAX; q1.order()];
        for &(a, b) in &self.phi {
            phi[q1.coset_of[a.index()]] = q2.coset_of[b.index()];
        }
        let mut hit = vec![false; q2.order()];
        for &v in &phi {
            if v == usize::MAX || std::mem::replace(&mut hit[v], true) {
                return Err("phi is not a bijection of the quotients".into());
            }
        }
        for a in q1.group.elements() {
            for b in q1.group.elements() {
                let ab = q1.group.mul(a, b).index();
                let image = q2.group.mul(ElementId(phi[a.index()]), ElementId(phi[b.index()]));
                if phi[ab] != image.index() {
                    return Err(format!("phi is not multiplicative at {a}, {b}"));
                }
            }
        }
        let h_image: ElementSet = q1.image(self.h1.members()).iter().map(|c| ElementId(phi[c.index()])).collect();
        if h_image != q2.image(self.h2.members()) {
            return Err("phi does not carry H1/Z onto H2/Z".into());
        }

        let c1 = self.h1.commutator_subgroup().members();
        let c2 = self.h2.commutator_subgroup().members();
        let domain: ElementSet = self.psi.iter().map(|&(a, _)| a).collect();
        let range: ElementSet = self.psi.iter().map(|&(_, b)| b).collect();
        if domain != c1 || range != c2 || self.psi.len() != c1.len() {
            return Err("psi is not a bijection of the commutator subgroups".into());
        }
        for &(a, pa) in &self.psi {
            for &(b, pb) in &self.psi {
                if self.psi_of(g1.mul(a, b)) != Some(g2.mul(pa, pb)) {
                    return Err(format!("psi is not multiplicative at {a}, {b}"));
                }
            }
        }
        for h in self.h1.members().iter() {
            for g in g1.elements() {
                let h2 = q2.reps[phi[q1.coset_of[h.index()]]];
                let g2_ = q2.reps[phi[q1.coset_of[g.index()]]];
                if self.psi_of(g1.commutator(h, g)) != Some(g2.commutator(h2, g2_)) {
                    return Err(format!("commutator square fails at ({h}, {g})"));
                }
            }
        }
        let expected: Vec<ElementId> = self
            .transversal1
            .iter()
            .map(|t| q2.reps[phi[q1.coset_of[t.index()]]])
            .collect();
        if expected != self.transversal2 {
            return Err("transversals do not correspond under phi".into());
        }
        Ok(())
    }
}

fn check_size(group: &FiniteGroup) -> Result<(), IsoclinismError> {
    if group.order() > ISOCLINISM_ORDER_LIMIT {
        return Err(IsoclinismError::TooLarge { order: group.order(), limit: ISOCLINISM_ORDER_LIMIT });
    }
    Ok(())
}

/// Greedy generating sequence: repeatedly add the smallest element outside
/// the current closure.
fn generating_sequence(group: &FiniteGroup) -> Vec<ElementId> {
    let mut gens = Vec::new();
    let mut span = group.closure(&gens);
    while let Some(x) = group.all().difference(span).first() {
        gens.push(x);
        span = group.closure(&gens);
    }
    gens
}

/// Extends `gens[i] -> imgs[i]` to a map on all of `domain`'s span by walking
/// the Cayley graph from the identity; `None` on a clash. `seed` holds values
/// already forced.
fn extend_hom(
    source: &FiniteGroup,
    target: &FiniteGroup,
    gens: &[ElementId],
    imgs: &[ElementId],
    mut seed: Vec<Option<ElementId>>,
) -> Option<Vec<Option<ElementId>>> {
    let start = source.identity();
    match seed[start.index()] {
        Some(v) if v != target.identity() => return None,
        _ => seed[start.index()] = Some(target.identity()),
    }
    let mut seen = ElementSet::singleton(start);
    let mut queue = VecDeque::from([start]);
    while let Some(a) = queue.pop_front() {
        let fa = seed[a.index()].expect("visited elements are mapped");
        for (&s, &t) in gens.iter().zip(imgs) {
            let b = source.mul(a, s);
            let fb = target.mul(fa, t);
            match seed[b.index()] {
                Some(v) if v != fb => return None,
                _ => seed[b.index()] = Some(fb),
            }
            if seen.insert(b) {
                queue.push_back(b);
            }
        }
    }
    Some(seed)
}

/// All isomorphisms `Q1 -> Q2` carrying `sub1` onto `sub2`, in lexicographic
/// order of generator images; `visit` returns `true` to stop early.
fn for_each_quotient_iso(
    q1: &FiniteGroup,
    q2: &FiniteGroup,
    sub1: ElementSet,
    sub2: ElementSet,
    mut visit: impl FnMut(&[usize]) -> bool,
) {
    let gens = generating_sequence(q1);
    let candidates: Vec<Vec<ElementId>> = gens
        .iter()
        .map(|&s| {
            let order = q1.element_order(s);
            let keep_h = sub1.contains(s);
            q2.elements()
                .filter(|&t| q2.element_order(t) == order && sub2.contains(t) == keep_h)
                .collect()
        })
        .collect();
    let mut pick = vec![0usize; gens.len()];
    if candidates.iter().any(Vec::is_empty) {
        return;
    }
    loop {
        let imgs: Vec<ElementId> = pick.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if let Some(map) = extend_hom(q1, q2, &gens, &imgs, vec![None; q1.order()]) {
            let map: Vec<usize> = map.into_iter().map(|v| v.unwrap().index()).collect();
            let image: ElementSet = map.iter().map(|&v| ElementId(v)).collect();
            let sub_image: ElementSet = sub1.iter().map(|c| ElementId(map[c.index()])).collect();
            if image.len() == q2.order() && sub_image == sub2 && visit(&map) {
                return;
            }
        }
        // Odometer over candidate indices, last generator fastest.
        let mut i = gens.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < candidates[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// Searches for a relative isoclinism `(H1, G1) -> (H2, G2)`.
///
/// Enumerates isomorphisms `phi` of the central quotients that respect `H`;
/// for each, `psi` is forced on `K(H1, G1)` by the commuting square and is
/// accepted if it extends to an isomorphism `[H1, G1] -> [H2, G2]`.
pub fn find_relative_isoclinism<'a, 'b>(
    h1: &Subgroup<'a>,
    h2: &Subgroup<'b>,
) -> Result<Option<IsoclinismWitness<'a, 'b>>, IsoclinismError> {
    let (g1, g2) = (h1.group(), h2.group());
    check_size(g1)?;
    check_size(g2)?;
    let q1 = Quotient::new(g1, h1.relative_center())?;
    let q2 = Quotient::new(g2, h2.relative_center())?;
    let c1 = h1.commutator_subgroup();
    let c2 = h2.commutator_subgroup();
    let hq1 = q1.image(h1.members());
    let hq2 = q2.image(h2.members());
    if q1.order() != q2.order() || c1.order() != c2.order() || hq1.len() != hq2.len() {
        return Ok(None);
    }
    let k1: Vec<ElementId> = h1.commutator_set().iter().collect();

    let mut found = None;
    for_each_quotient_iso(&q1.group, &q2.group, hq1, hq2, |phi| {
        let lift = |x: ElementId| q2.reps[phi[q1.coset_of[x.index()]]];
        let mut seed: Vec<Option<ElementId>> = vec![None; g1.order()];
        for h in h1.members().iter() {
            for g in g1.elements() {
                let value = g2.commutator(lift(h), lift(g));
                let slot = &mut seed[g1.commutator(h, g).index()];
                match *slot {
                    Some(v) if v != value => return false,
                    _ => *slot = Some(value),
                }
            }
        }
        let imgs: Vec<ElementId> = k1.iter().map(|k| seed[k.index()].unwrap()).collect();
        let Some(psi) = extend_hom(g1, g2, &k1, &imgs, seed) else {
            return false;
        };
        let pairs: Vec<(ElementId, ElementId)> =
            c1.members().iter().map(|x| (x, psi[x.index()].unwrap())).collect();
        let range: ElementSet = pairs.iter().map(|&(_, y)| y).collect();
        if range != c2.members() || range.len() != pairs.len() {
            return false;
        }
        let mut transversal1: Vec<ElementId> = q1.reps.clone();
        transversal1.sort_by_key(|t| (!h1.contains(*t), *t));
        let transversal2 = transversal1.iter().map(|&t| lift(t)).collect();
        let phi_pairs = q1.reps.iter().map(|&r| (r, lift(r))).collect();
        found = Some(IsoclinismWitness {
            h1: h1.clone(),
            h2: h2.clone(),
            phi: phi_pairs,
            psi: pairs,
            transversal1,
            transversal2,
        });
        true
    });
    if let Some(w) = &found {
        w.verify().map_err(IsoclinismError::VerificationFailed)?;
    }
    Ok(found)
}

/// A vertex bijection between two relative graphs, already verified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphIsomorphism {
    /// `map[x]` is the image of vertex `x`.
    pub map: Vec<ElementId>,
    /// The `g` of the target graph.
    pub target_g: ElementId,
}

/// Checks that `map` is a bijection carrying adjacency of `a` exactly onto `b`.
fn verify_vertex_map(a: &RelGraph<'_>, b: &RelGraph<'_>, map: &[ElementId]) -> Result<(), IsoclinismError> {
    let image: ElementSet = map.iter().copied().collect();
    if map.len() != b.group().order() || image.len() != map.len() {
        return Err(IsoclinismError::VerificationFailed("vertex map is not a bijection".into()));
    }
    for x in a.group().elements() {
        for y in a.group().elements() {
            if a.adjacent(x, y) != b.adjacent(map[x.index()], map[y.index()]) {
                return Err(IsoclinismError::VerificationFailed(format!(
                    "adjacency of {x}, {y} is not preserved"
                )));
            }
        }
    }
    Ok(())
}

/// `a -> x^-1 a x` as an isomorphism from the graph for `g` to the graph for
/// `x^-1 g x`, for normal `H`.
pub fn conjugate_g_graph_iso(
    h: &Subgroup<'_>,
    g: ElementId,
    x: ElementId,
) -> Result<GraphIsomorphism, IsoclinismError> {
    if !h.is_normal() {
        return Err(IsoclinismError::HNotNormal);
    }
    let group = h.group();
    let map: Vec<ElementId> = group.elements().map(|a| group.conjugate(a, x)).collect();
    let target_g = group.conjugate(g, x);
    verify_vertex_map(&RelGraph::build(h, g), &RelGraph::build(h, target_g), &map)?;
    Ok(GraphIsomorphism { map, target_g })
}

/// `mu(t_i z) = t'_i theta(z)`, an isomorphism from the graph for `g` over
/// `(H1, G1)` to the graph for `psi(g)` over `(H2, G2)`. `theta` pairs the
/// relative centers in ascending id order.
pub fn isoclinism_graph_iso(
    witness: &IsoclinismWitness<'_, '_>,
    g: ElementId,
) -> Result<GraphIsomorphism, IsoclinismError> {
    let (g1, g2) = (witness.h1.group(), witness.h2.group());
    let z1 = witness.h1.relative_center();
    let z2 = witness.h2.relative_center();
    if z1.len() != z2.len() {
        return Err(IsoclinismError::CenterSizeMismatch { left: z1.len(), right: z2.len() });
    }
    let target_g = witness.psi_of(g).ok_or(IsoclinismError::NotInCommutatorSubgroup)?;
    let mut map = vec![ElementId(usize::MAX); g1.order()];
    for (&t, &t2) in witness.transversal1.iter().zip(&witness.transversal2) {
        for (z, theta_z) in z1.iter().zip(z2.iter()) {
            map[g1.mul(t, z).index()] = g2.mul(t2, theta_z);
        }
    }
    if map.iter().any(|m| m.index() == usize::MAX) {
        return Err(IsoclinismError::VerificationFailed("transversal does not cover G1".into()));
    }
    let a = RelGraph::build(&witness.h1, g);
    let b = RelGraph::build(&witness.h2, target_g);
    verify_vertex_map(&a, &b, &map)?;
    Ok(GraphIsomorphism { map, target_g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::group_from_str;

    #[test]
    fn quotient_by_center() {
        let d8 = group_from_str("D4").unwrap();
        let q = Quotient::new(&d8, d8.center()).unwrap();
        assert_eq!(q.order(), 4);
        assert!(q.group.is_abelian());
        assert_eq!(q.reps[0], d8.identity());
    }

    #[test]
    fn identity_witness() {
        let s3 = group_from_str("S3").unwrap();
        let a3 = s3.generated_subgroup(&[s3.find_label("(123)").unwrap()]);
        let w = find_relative_isoclinism(&a3, &a3).unwrap().expect("self-isoclinic");
        assert!(w.verify().is_ok());
        let g = s3.find_label("(123)").unwrap();
        let iso = isoclinism_graph_iso(&w, g).unwrap();
        assert_eq!(iso.map.len(), 6);
    }

    #[test]
    fn d8_and_q8_are_isoclinic() {
        let d8 = group_from_str("D4").unwrap();
        let q8 = group_from_str("Q8").unwrap();
        let w = find_relative_isoclinism(&d8.whole(), &q8.whole()).unwrap().expect("isoclinic");
        let r2 = d8.find_label("r^2").unwrap();
        assert_eq!(w.psi_of(r2), q8.find_label("-1"));
        let iso = isoclinism_graph_iso(&w, r2).unwrap();
        assert_eq!(iso.target_g, q8.find_label("-1").unwrap());
    }

    #[test]
    fn s3_and_c6_are_not_isoclinic() {
        let s3 = group_from_str("S3").unwrap();
        let c6 = group_from_str("C6").unwrap();
        assert!(find_relative_isoclinism(&s3.whole(), &c6.whole()).unwrap().is_none());
    }

    #[test]
    fn center_size_mismatch() {
        let s3 = group_from_str("S3").unwrap();
        let s3c2 = group_from_str("S3xC2").unwrap();
        let w = find_relative_isoclinism(&s3.whole(), &s3c2.whole()).unwrap().expect("isoclinic");
        let g = s3.find_label("(123)").unwrap();
        assert!(matches!(
            isoclinism_graph_iso(&w, g),
            Err(IsoclinismError::CenterSizeMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn not_in_commutator_subgroup() {
        let s3 = group_from_str("S3").unwrap();
        let w = find_relative_isoclinism(&s3.whole(), &s3.whole()).unwrap().unwrap();
        let t = s3.find_label("(12)").unwrap();
        assert!(matches!(isoclinism_graph_iso(&w, t), Err(IsoclinismError::NotInCommutatorSubgroup)));
    }

    #[test]
    fn conjugating_g() {
        let s3 = group_from_str("S3").unwrap();
        let a3 = s3.generated_subgroup(&[s3.find_label("(123)").unwrap()]);
        let g = s3.find_label("(123)").unwrap();
        let x = s3.find_label("(12)").unwrap();
        let iso = conjugate_g_graph_iso(&a3, g, x).unwrap();
        assert_eq!(iso.target_g, s3.find_label("(132)").unwrap());
        let id = conjugate_g_graph_iso(&a3, g, s3.identity()).unwrap();
        assert_eq!(id.target_g, g);
        assert!(id.map.iter().enumerate().all(|(i, m)| m.index() == i));
        let t = s3.generated_subgroup(&[x]);
        assert!(matches!(conjugate_g_graph_iso(&t, g, x), Err(IsoclinismError::HNotNormal)));
    }

    #[test]
    fn too_large() {
        let big = group_from_str("S4").unwrap();
        assert!(matches!(
            find_relative_isoclinism(&big.whole(), &big.whole()),
            Err(IsoclinismError::TooLarge { order: 24, .. })
        ));
    }
}
