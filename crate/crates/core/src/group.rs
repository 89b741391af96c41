//! Finite groups given by an explicit multiplication table.
//!
//! Every element is an [`ElementId`] in `0..n` with the identity pinned at
//! id 0. Sets of elements are [`ElementSet`] bitsets, which keeps subsets
//! canonical (sorted, deduplicated) and makes set algebra cheap at the
//! orders this crate handles.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest table accepted by [`FiniteGroup::from_cayley_table`].
pub const MAX_VERIFIED_ORDER: usize = 64;

/// Hard ceiling for any group, including permutation-built ones (S5 has 120).
pub const MAX_ORDER: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty multiplication table")]
    Empty,
    #[error("group order {order} exceeds the limit of {limit}")]
    OrderTooLarge { order: usize, limit: usize },
    #[error("row {row} has {len} entries, expected {expected}")]
    RaggedTable { row: usize, len: usize, expected: usize },
    #[error("entry ({row}, {col}) = {value} is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("not a Latin square: {line} {index} repeats element {value}")]
    NotLatinSquare { line: &'static str, index: usize, value: usize },
    #[error("table has no two-sided identity element")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("element set is not a subgroup: {0}")]
    NotASubgroup(String),
}

/// Index of an element inside one particular [`FiniteGroup`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub usize);

impl ElementId {
    pub const IDENTITY: ElementId = ElementId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for ElementId {
    fn from(i: usize) -> Self {
        ElementId(i)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A subset of a group's elements, stored as a 128-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ElementSet(u128);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn from_bits(bits: u128) -> Self {
        ElementSet(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    /// The set `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ORDER);
        if n == 128 {
            ElementSet(u128::MAX)
        } else {
            ElementSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(x: ElementId) -> Self {
        ElementSet(1u128 << x.0)
    }

    pub fn contains(self, x: ElementId) -> bool {
        x.0 < 128 && self.0 >> x.0 & 1 == 1
    }

    pub fn insert(&mut self, x: ElementId) -> bool {
        let fresh = !self.contains(x);
        self.0 |= 1u128 << x.0;
        fresh
    }

    pub fn remove(&mut self, x: ElementId) {
        self.0 &= !(1u128 << x.0);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn first(self) -> Option<ElementId> {
        (self.0 != 0).then(|| ElementId(self.0.trailing_zeros() as usize))
    }

    /// Members in increasing id order.
    pub fn iter(self) -> impl Iterator<Item = ElementId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(ElementId(i))
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().map(ElementId::index).collect()
    }
}

impl FromIterator<ElementId> for ElementSet {
    fn from_iter<I: IntoIterator<Item = ElementId>>(iter: I) -> Self {
        let mut s = ElementSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|x| x.0)).finish()
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ElementSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let ids = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = ids.iter().find(|&&i| i >= MAX_ORDER) {
            return Err(serde::de::Error::custom(format!("element id {bad} out of range")));
        }
        Ok(ids.into_iter().map(ElementId).collect())
    }
}

/// A finite group with a complete, verified multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u8>,
    inverses: Vec<u8>,
    labels: Vec<String>,
    relabeling: Option<Vec<usize>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("labels", &self.labels)
            .finish_non_exhaustive()
    }
}

impl FiniteGroup {
    /// Builds a group from an `n x n` table where `table[i][j]` is the
    /// product of element `i` by element `j`.
    ///
    /// All group axioms are checked. If the identity is not at id 0 the
    /// elements are relabeled by swapping it into place; the permutation
    /// used is available from [`FiniteGroup::relabeling`].
    pub fn from_cayley_table(
        table: &[Vec<usize>],
        labels: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n > MAX_VERIFIED_ORDER {
            return Err(GroupError::OrderTooLarge { order: n, limit: MAX_VERIFIED_ORDER });
        }
        let group = Self::checked_without_associativity(table, labels)?;
        group.check_associative()?;
        Ok(group)
    }

    /// Constructor for tables that are associative by construction
    /// (permutation composition, products of verified groups). Everything
    /// except associativity is still checked.
    pub(crate) fn from_associative_table(
        table: &[Vec<usize>],
        labels: Vec<String>,
    ) -> Result<Self, GroupError> {
        Self::checked_without_associativity(table, Some(labels))
    }

    fn checked_without_associativity(
        table: &[Vec<usize>],
        labels: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if n > MAX_ORDER {
            return Err(GroupError::OrderTooLarge { order: n, limit: MAX_ORDER });
        }
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return Err(GroupError::RaggedTable { row, len: entries.len(), expected: n });
            }
            if let Some((col, &value)) = entries.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(GroupError::EntryOutOfRange { row, col, value });
            }
        }
        check_latin(table)?;

        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;

        let labels = match labels {
            Some(l) if l.len() != n => {
                return Err(GroupError::LabelCount { expected: n, got: l.len() })
            }
            Some(l) => l,
            None => (0..n).map(|i| format!("g{i}")).collect(),
        };
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(GroupError::DuplicateLabel(l.clone()));
            }
        }

        // Swap the identity into slot 0 if needed.
        let perm: Vec<usize> = (0..n)
            .map(|i| if i == e { 0 } else if i == 0 { e } else { i })
            .collect();
        let mut flat = vec![0u8; n * n];
        let mut new_labels = vec![String::new(); n];
        for i in 0..n {
            new_labels[perm[i]] = labels[i].clone();
            for j in 0..n {
                flat[perm[i] * n + perm[j]] = perm[table[i][j]] as u8;
            }
        }

        let mut inverses = vec![0u8; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| flat[x * n + y] == 0)
                .ok_or(GroupError::NoInverse { element: x })?;
            if flat[y * n + x] != 0 {
                return Err(GroupError::NoInverse { element: x });
            }
            inverses[x] = y as u8;
        }

        Ok(FiniteGroup {
            order: n,
            table: flat,
            inverses,
            labels: new_labels,
            relabeling: (e != 0).then_some(perm),
        })
    }

    fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.table[a * n + b] as usize;
                for c in 0..n {
                    let bc = self.table[b * n + c] as usize;
                    if self.table[ab * n + c] != self.table[a * n + bc] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> ElementId {
        ElementId::IDENTITY
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> {
        (0..self.order).map(ElementId)
    }

    /// The whole carrier set as an [`ElementSet`].
    pub fn all(&self) -> ElementSet {
        ElementSet::full(self.order)
    }

    /// Permutation `old id -> new id` applied at construction, if the
    /// identity had to be moved to id 0.
    pub fn relabeling(&self) -> Option<&[usize]> {
        self.relabeling.as_deref()
    }

    pub fn label(&self, x: ElementId) -> &str {
        &self.labels[x.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find_label(&self, label: &str) -> Option<ElementId> {
        self.labels.iter().position(|l| l == label).map(ElementId)
    }

    /// The table as nested rows, e.g. for writing it back to a file.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.iter().map(|&v| v as usize).collect()).collect()
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        ElementId(self.table[a.0 * self.order + b.0] as usize)
    }

    #[inline]
    pub fn inv(&self, a: ElementId) -> ElementId {
        ElementId(self.inverses[a.0] as usize)
    }

    pub fn pow(&self, a: ElementId, k: usize) -> ElementId {
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: ElementId) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `y^-1 x y`.
    #[inline]
    pub fn conjugate(&self, x: ElementId, y: ElementId) -> ElementId {
        self.mul(self.mul(self.inv(y), x), y)
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    #[inline]
    pub fn commutator(&self, x: ElementId, y: ElementId) -> ElementId {
        let xinv_yinv = self.mul(self.inv(x), self.inv(y));
        self.mul(xinv_yinv, self.mul(x, y))
    }

    #[inline]
    pub fn commutes(&self, x: ElementId, y: ElementId) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|x| self.elements().all(|y| self.commutes(x, y)))
    }

    pub fn center(&self) -> ElementSet {
        self.elements().filter(|&x| self.elements().all(|y| self.commutes(x, y))).collect()
    }

    /// `{y in within : xy = yx}`.
    pub fn centralizer(&self, x: ElementId, within: ElementSet) -> ElementSet {
        within.iter().filter(|&y| self.commutes(x, y)).collect()
    }

    /// Orbits of `carrier` under conjugation by `acting`, ordered by their
    /// smallest member. `carrier` must be closed under that conjugation.
    pub fn conjugacy_classes(&self, carrier: ElementSet, acting: ElementSet) -> Vec<ElementSet> {
        let mut remaining = carrier;
        let mut classes = Vec::new();
        while let Some(x) = remaining.first() {
            let class: ElementSet = acting.iter().map(|y| self.conjugate(x, y)).collect();
            debug_assert!(class.is_subset(carrier), "carrier not closed under conjugation");
            remaining = remaining.difference(class);
            classes.push(class);
        }
        classes
    }

    /// Classes of the whole group.
    pub fn classes(&self) -> Vec<ElementSet> {
        self.conjugacy_classes(self.all(), self.all())
    }

    /// Some `y in within` with `y^-1 x y = target`, smallest id first.
    pub fn conjugating_witness(
        &self,
        x: ElementId,
        target: ElementId,
        within: ElementSet,
    ) -> Option<ElementId> {
        within.iter().find(|&y| self.conjugate(x, y) == target)
    }

    /// Every `y in within` with `y^-1 x y = target`. When `within` is a
    /// subgroup this is empty or a right coset of `C_within(x)`.
    pub fn conjugating_witnesses(
        &self,
        x: ElementId,
        target: ElementId,
        within: ElementSet,
    ) -> ElementSet {
        within.iter().filter(|&y| self.conjugate(x, y) == target).collect()
    }

    /// Closure of `gens` under multiplication, together with the identity.
    pub fn closure(&self, gens: &[ElementId]) -> ElementSet {
        let mut set = ElementSet::singleton(self.identity());
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(a) = queue.pop_front() {
            for &s in gens {
                let b = self.mul(a, s);
                if set.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        set
    }

    /// Smallest subgroup containing `gens`.
    pub fn generated_subgroup(&self, gens: &[ElementId]) -> Subgroup<'_> {
        Subgroup { group: self, members: self.closure(gens), generators: gens.to_vec() }
    }

    pub fn whole(&self) -> Subgroup<'_> {
        Subgroup { group: self, members: self.all(), generators: Vec::new() }
    }

    pub fn trivial_subgroup(&self) -> Subgroup<'_> {
        Subgroup {
            group: self,
            members: ElementSet::singleton(self.identity()),
            generators: Vec::new(),
        }
    }

    /// True when every Sylow subgroup is normal, i.e. for each prime `p`
    /// the `p`-elements number exactly the `p`-part of the order.
    pub fn is_nilpotent(&self) -> bool {
        prime_factors(self.order).into_iter().all(|p| {
            let mut part = 1;
            let mut m = self.order;
            while m.is_multiple_of(p) {
                m /= p;
                part *= p;
            }
            let p_elements =
                self.elements().filter(|&x| is_power_of(self.element_order(x), p)).count();
            p_elements == part
        })
    }
}

fn check_latin(table: &[Vec<usize>]) -> Result<(), GroupError> {
    let n = table.len();
    for (i, row) in table.iter().enumerate() {
        let mut seen = ElementSet::EMPTY;
        for &v in row {
            if !seen.insert(ElementId(v)) {
                return Err(GroupError::NotLatinSquare { line: "row", index: i, value: v });
            }
        }
    }
    for j in 0..n {
        let mut seen = ElementSet::EMPTY;
        for row in table {
            if !seen.insert(ElementId(row[j])) {
                return Err(GroupError::NotLatinSquare { line: "column", index: j, value: row[j] });
            }
        }
    }
    Ok(())
}

fn is_power_of(mut k: usize, p: usize) -> bool {
    while k.is_multiple_of(p) {
        k /= p;
    }
    k == 1
}

/// Distinct primes dividing `n`, ascending.
pub fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn smallest_prime_factor(n: usize) -> Option<usize> {
    prime_factors(n).first().copied()
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && smallest_prime_factor(n) == Some(n)
}

/// A subgroup `H` of a parent group `G`.
#[derive(Clone)]
pub struct Subgroup<'g> {
    group: &'g FiniteGroup,
    members: ElementSet,
    generators: Vec<ElementId>,
}

impl PartialEq for Subgroup<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.group, other.group) && self.members == other.members
    }
}

impl Eq for Subgroup<'_> {}

impl fmt::Debug for Subgroup<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("order", &self.order())
            .field("members", &self.members)
            .finish()
    }
}

impl<'g> Subgroup<'g> {
    /// Checks that `members` contains the identity and is closed under
    /// products and inverses.
    pub fn new(group: &'g FiniteGroup, members: ElementSet) -> Result<Self, GroupError> {
        if !members.is_subset(group.all()) {
            return Err(GroupError::NotASubgroup("ids outside the group".into()));
        }
        if !members.contains(group.identity()) {
            return Err(GroupError::NotASubgroup("identity missing".into()));
        }
        for a in members.iter() {
            if !members.contains(group.inv(a)) {
                return Err(GroupError::NotASubgroup(format!("inverse of {} missing", a.0)));
            }
            for b in members.iter() {
                if !members.contains(group.mul(a, b)) {
                    return Err(GroupError::NotASubgroup(format!(
                        "product {}*{} escapes",
                        a.0, b.0
                    )));
                }
            }
        }
        Ok(Subgroup { group, members, generators: Vec::new() })
    }

    pub(crate) fn from_parts(
        group: &'g FiniteGroup,
        members: ElementSet,
        generators: Vec<ElementId>,
    ) -> Self {
        Subgroup { group, members, generators }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn members(&self) -> ElementSet {
        self.members
    }

    pub fn generators(&self) -> &[ElementId] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: ElementId) -> bool {
        self.members.contains(x)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.group.order()
    }

    pub fn is_abelian(&self) -> bool {
        let g = self.group;
        self.members.iter().all(|x| self.members.iter().all(|y| g.commutes(x, y)))
    }

    pub fn is_normal(&self) -> bool {
        let g = self.group;
        self.members.iter().all(|x| g.elements().all(|y| self.contains(g.conjugate(x, y))))
    }

    /// `Z(H, G)`: elements of `H` commuting with all of `G`.
    pub fn relative_center(&self) -> ElementSet {
        let g = self.group;
        self.members.iter().filter(|&x| g.elements().all(|y| g.commutes(x, y))).collect()
    }

    /// `Z(G, H)`: elements of `G` commuting with all of `H`.
    pub fn cocentralizer(&self) -> ElementSet {
        let g = self.group;
        g.elements().filter(|&x| self.members.iter().all(|y| g.commutes(x, y))).collect()
    }

    /// `Z(H)`, the center of `H` itself.
    pub fn center(&self) -> ElementSet {
        let g = self.group;
        self.members
            .iter()
            .filter(|&x| self.members.iter().all(|y| g.commutes(x, y)))
            .collect()
    }

    /// `C_H(x)`.
    pub fn centralizer(&self, x: ElementId) -> ElementSet {
        self.group.centralizer(x, self.members)
    }

    /// `K(H, G) = {[x, y] : x in H, y in G}`.
    pub fn commutator_set(&self) -> ElementSet {
        let g = self.group;
        self.members
            .iter()
            .flat_map(|x| g.elements().map(move |y| g.commutator(x, y)))
            .collect()
    }

    /// `K(H, H)`.
    pub fn inner_commutator_set(&self) -> ElementSet {
        let g = self.group;
        self.members
            .iter()
            .flat_map(|x| self.members.iter().map(move |y| g.commutator(x, y)))
            .collect()
    }

    /// `[H, G]`, the subgroup generated by `K(H, G)`.
    pub fn commutator_subgroup(&self) -> Subgroup<'g> {
        let gens: Vec<ElementId> = self.commutator_set().iter().collect();
        self.group.generated_subgroup(&gens)
    }

    /// Conjugacy classes of `H` under its own action.
    pub fn classes(&self) -> Vec<ElementSet> {
        self.group.conjugacy_classes(self.members, self.members)
    }

    /// `G`-classes contained in `H`; requires `H` normal.
    pub fn parent_classes(&self) -> Vec<ElementSet> {
        debug_assert!(self.is_normal());
        self.group.conjugacy_classes(self.members, self.group.all())
    }
}
