//! Standard group families, direct products, subgroup enumeration and the
//! Cayley-table text format.
//!
//! Group expressions follow the grammar
//! `C<n> | D<n> | Q8 | S<n> | A<n> | <spec>x<spec> | file:<path>`, where
//! `D<n>` is the dihedral group of order `2n` and `x` is left-associative.
//! A `file:` atom swallows the rest of the expression, so it can only
//! appear as the last factor.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::group::{ElementId, ElementSet, FiniteGroup, GroupError, Subgroup, MAX_VERIFIED_ORDER};

/// Ceiling for single-instance probes (large enough for S5).
pub const PROBE_ORDER_LIMIT: usize = 120;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot parse group spec {spec:?}: {reason}")]
    Parse { spec: String, reason: String },
    #[error("group order {order} exceeds the limit of {limit}")]
    OrderTooLarge { order: usize, limit: usize },
    #[error("cannot read {path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A parsed group expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Quaternion,
    Symmetric(usize),
    Alternating(usize),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    File(PathBuf),
}

impl GroupSpec {
    /// Order of the described group, without building it. `None` for files.
    pub fn order(&self) -> Option<usize> {
        Some(match self {
            GroupSpec::Cyclic(n) => *n,
            GroupSpec::Dihedral(n) => 2 * n,
            GroupSpec::Quaternion => 8,
            GroupSpec::Symmetric(n) => factorial(*n),
            GroupSpec::Alternating(n) => (factorial(*n) / 2).max(1),
            GroupSpec::Product(a, b) => a.order()? * b.order()?,
            GroupSpec::File(_) => return None,
        })
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::Dihedral(n) => write!(f, "D{n}"),
            GroupSpec::Quaternion => write!(f, "Q8"),
            GroupSpec::Symmetric(n) => write!(f, "S{n}"),
            GroupSpec::Alternating(n) => write!(f, "A{n}"),
            GroupSpec::Product(a, b) => write!(f, "{a}x{b}"),
            GroupSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason: &str| CatalogError::Parse { spec: s.to_string(), reason: reason.into() };
        let mut rest = s.trim();
        let mut acc: Option<GroupSpec> = None;
        loop {
            if rest.is_empty() {
                return Err(fail("expected a group atom"));
            }
            let (atom, tail) = if let Some(path) = rest.strip_prefix("file:") {
                if path.is_empty() {
                    return Err(fail("empty file path"));
                }
                (GroupSpec::File(PathBuf::from(path)), "")
            } else {
                let family = rest.as_bytes()[0];
                let digits = rest[1..].bytes().take_while(u8::is_ascii_digit).count();
                if digits == 0 {
                    return Err(fail("family letter must be followed by a number"));
                }
                let n: usize = rest[1..1 + digits].parse().map_err(|_| fail("bad number"))?;
                let atom = match family {
                    b'C' if n >= 1 => GroupSpec::Cyclic(n),
                    b'D' if n >= 1 => GroupSpec::Dihedral(n),
                    b'Q' if n == 8 => GroupSpec::Quaternion,
                    b'S' if (1..=5).contains(&n) => GroupSpec::Symmetric(n),
                    b'A' if (1..=5).contains(&n) => GroupSpec::Alternating(n),
                    b'C' | b'D' => return Err(fail("order parameter must be at least 1")),
                    b'Q' => return Err(fail("only Q8 is supported")),
                    b'S' | b'A' => return Err(fail("S<n> and A<n> need 1 <= n <= 5")),
                    _ => return Err(fail("unknown family")),
                };
                (atom, &rest[1 + digits..])
            };
            acc = Some(match acc {
                None => atom,
                Some(prev) => GroupSpec::Product(Box::new(prev), Box::new(atom)),
            });
            if tail.is_empty() {
                break;
            }
            rest = tail.strip_prefix('x').ok_or_else(|| fail("expected 'x' between factors"))?;
        }
        Ok(acc.expect("loop runs at least once"))
    }
}

/// Builds the group with the default order limit of 64.
pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup, CatalogError> {
    build_group_with_limit(spec, MAX_VERIFIED_ORDER)
}

/// Builds the group, accepting orders up to `limit` (at most 120).
///
/// Groups of order at most 64 go through the fully verified constructor.
/// Larger ones are only produced by permutation composition or products of
/// verified groups and skip the cubic associativity check.
pub fn build_group_with_limit(spec: &GroupSpec, limit: usize) -> Result<FiniteGroup, CatalogError> {
    let limit = limit.min(PROBE_ORDER_LIMIT);
    if let Some(order) = spec.order() {
        if order > limit {
            return Err(CatalogError::OrderTooLarge { order, limit });
        }
    }
    let (table, labels) = raw_table(spec, limit)?;
    if table.len() > limit {
        return Err(CatalogError::OrderTooLarge { order: table.len(), limit });
    }
    let group = if table.len() <= MAX_VERIFIED_ORDER {
        FiniteGroup::from_cayley_table(&table, Some(labels))?
    } else {
        FiniteGroup::from_associative_table(&table, labels)?
    };
    Ok(group)
}

/// Parses and builds in one step.
pub fn group_from_str(spec: &str) -> Result<FiniteGroup, CatalogError> {
    build_group(&spec.parse()?)
}

type RawTable = (Vec<Vec<usize>>, Vec<String>);

fn raw_table(spec: &GroupSpec, limit: usize) -> Result<RawTable, CatalogError> {
    Ok(match spec {
        GroupSpec::Cyclic(n) => cyclic(*n),
        GroupSpec::Dihedral(n) => dihedral(*n),
        GroupSpec::Quaternion => quaternion(),
        GroupSpec::Symmetric(n) => permutations(*n, false),
        GroupSpec::Alternating(n) => permutations(*n, true),
        GroupSpec::File(path) => {
            let g = load_cayley_file(path)?;
            (g.table_rows(), g.labels().to_vec())
        }
        GroupSpec::Product(a, b) => {
            let (ta, la) = raw_table(a, limit)?;
            let (tb, lb) = raw_table(b, limit)?;
            let order = ta.len() * tb.len();
            if order > limit {
                return Err(CatalogError::OrderTooLarge { order, limit });
            }
            direct_product(&ta, &la, &tb, &lb)
        }
    })
}

fn power_label(base: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{k}"),
    }
}

fn cyclic(n: usize) -> RawTable {
    let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    let labels = (0..n).map(|i| if i == 0 { "1".into() } else { power_label("a", i) }).collect();
    (table, labels)
}

/// Elements `r^i s^j` stored at id `i + n*j`.
fn dihedral(n: usize) -> RawTable {
    let id = |i: usize, j: usize| i + n * j;
    let mut table = vec![vec![0; 2 * n]; 2 * n];
    for (a, b) in (0..n).flat_map(|a| (0..2).map(move |b| (a, b))) {
        for (c, d) in (0..n).flat_map(|c| (0..2).map(move |d| (c, d))) {
            // r^a s^b r^c s^d = r^(a +- c) s^(b+d)
            let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
            table[id(a, b)][id(c, d)] = id(rot, (b + d) % 2);
        }
    }
    let labels = (0..2)
        .flat_map(|j| (0..n).map(move |i| (i, j)))
        .map(|(i, j)| {
            let s = format!("{}{}", power_label("r", i), if j == 1 { "s" } else { "" });
            if s.is_empty() {
                "1".into()
            } else {
                s
            }
        })
        .collect();
    (table, labels)
}

/// Units `+-1, +-i, +-j, +-k` in that order.
fn quaternion() -> RawTable {
    // (sign, axis) with axis 0..4 = 1, i, j, k
    let units: [(i8, usize); 8] =
        [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)];
    let axis_product = |a: usize, b: usize| -> (i8, usize) {
        match (a, b) {
            (0, x) | (x, 0) => (1, x),
            (x, y) if x == y => (-1, 0),
            (1, 2) => (1, 3),
            (2, 3) => (1, 1),
            (3, 1) => (1, 2),
            (2, 1) => (-1, 3),
            (3, 2) => (-1, 1),
            (1, 3) => (-1, 2),
            _ => unreachable!(),
        }
    };
    let table = units
        .iter()
        .map(|&(sa, a)| {
            units
                .iter()
                .map(|&(sb, b)| {
                    let (s, axis) = axis_product(a, b);
                    let unit = (sa * sb * s, axis);
                    units.iter().position(|&u| u == unit).unwrap()
                })
                .collect()
        })
        .collect();
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].map(String::from).to_vec();
    (table, labels)
}

/// Permutations of `{1..n}` in lexicographic order of their image lists,
/// multiplied left to right: `(x*y)(i) = y(x(i))`.
fn permutations(n: usize, even_only: bool) -> RawTable {
    let mut perms = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        if !even_only || inversions(&current).is_multiple_of(2) {
            perms.push(current.clone());
        }
        if !next_permutation(&mut current) {
            break;
        }
    }
    let index: std::collections::HashMap<Vec<usize>, usize> =
        perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let table = perms
        .iter()
        .map(|x| {
            perms
                .iter()
                .map(|y| index[&x.iter().map(|&i| y[i]).collect::<Vec<_>>()])
                .collect()
        })
        .collect();
    let labels = perms.iter().map(|p| cycle_notation(p)).collect();
    (table, labels)
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

/// Pair `(a, b)` is stored at `a * |B| + b` and labelled `a.b`.
fn direct_product(ta: &[Vec<usize>], la: &[String], tb: &[Vec<usize>], lb: &[String]) -> RawTable {
    let (na, nb) = (ta.len(), tb.len());
    let table = (0..na * nb)
        .map(|x| {
            (0..na * nb)
                .map(|y| ta[x / nb][y / nb] * nb + tb[x % nb][y % nb])
                .collect()
        })
        .collect();
    let labels = (0..na * nb).map(|x| format!("{}.{}", la[x / nb], lb[x % nb])).collect();
    (table, labels)
}

/// Every subgroup of `group`, sorted by `(order, member list)`.
///
/// Works by cyclic extension: starting from the trivial subgroup, each
/// known subgroup `K` is extended to `<K, x>` for every `x` outside it.
/// Every subgroup is reached this way, since it is the top of a chain
/// obtained by adding one of its elements at a time.
pub fn all_subgroups(group: &FiniteGroup) -> Vec<Subgroup<'_>> {
    let trivial = ElementSet::singleton(group.identity());
    let mut found: Vec<(ElementSet, Vec<ElementId>)> = vec![(trivial, Vec::new())];
    let mut seen: HashSet<ElementSet> = HashSet::from([trivial]);
    let mut frontier = 0;
    while frontier < found.len() {
        let (members, gens) = found[frontier].clone();
        frontier += 1;
        let mut blocked = members;
        for x in group.all().difference(members).iter() {
            if blocked.contains(x) {
                continue;
            }
            let mut new_gens = gens.clone();
            new_gens.push(x);
            let ext = group.closure(&new_gens);
            // <K, x> = <K, kx> for every k in K.
            let coset: ElementSet = members.iter().map(|k| group.mul(k, x)).collect();
            blocked = blocked.union(coset);
            if seen.insert(ext) {
                found.push((ext, new_gens));
            }
        }
    }
    let mut subgroups: Vec<Subgroup<'_>> = found
        .into_iter()
        .map(|(members, gens)| Subgroup::from_parts(group, members, gens))
        .collect();
    subgroups.sort_by(|a, b| {
        a.order().cmp(&b.order()).then_with(|| a.members().to_vec().cmp(&b.members().to_vec()))
    });
    subgroups
}

/// Reads a group from the Cayley-table text format.
pub fn load_cayley_file(path: &Path) -> Result<FiniteGroup, CatalogError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CatalogError::File { path: path.to_path_buf(), source })?;
    parse_cayley_text(&text)
}

/// Parses the text format: a line holding `n`, then `n` rows of `n`
/// whitespace-separated 0-based ids, then an optional `labels: ...` line.
/// `#` starts a comment.
pub fn parse_cayley_text(text: &str) -> Result<FiniteGroup, CatalogError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, first) = lines
        .next()
        .ok_or(CatalogError::Format { line: 1, reason: "missing order line".into() })?;
    let n: usize = first.parse().map_err(|_| CatalogError::Format {
        line,
        reason: format!("expected the group order, found {first:?}"),
    })?;
    if n == 0 {
        return Err(CatalogError::Format { line, reason: "order must be positive".into() });
    }
    if n > MAX_VERIFIED_ORDER {
        return Err(CatalogError::OrderTooLarge { order: n, limit: MAX_VERIFIED_ORDER });
    }

    let mut table = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, row) = lines.next().ok_or(CatalogError::Format {
            line: line + table.len() + 1,
            reason: format!("expected {n} table rows, found {}", table.len()),
        })?;
        let entries = row
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CatalogError::Format { line, reason: "non-numeric entry".into() })?;
        if entries.len() != n {
            return Err(CatalogError::Format {
                line,
                reason: format!("expected {n} entries, found {}", entries.len()),
            });
        }
        table.push(entries);
    }

    let labels = match lines.next() {
        None => None,
        Some((line, l)) => {
            let rest = l.strip_prefix("labels:").ok_or(CatalogError::Format {
                line,
                reason: "unexpected content after the table".into(),
            })?;
            let labels: Vec<String> = rest.split_whitespace().map(String::from).collect();
            if labels.len() != n {
                return Err(CatalogError::Format {
                    line,
                    reason: format!("expected {n} labels, found {}", labels.len()),
                });
            }
            if let Some((line, _)) = lines.next() {
                return Err(CatalogError::Format { line, reason: "trailing content".into() });
            }
            Some(labels)
        }
    };
    Ok(FiniteGroup::from_cayley_table(&table, labels)?)
}

/// Renders a group in the text format read by [`parse_cayley_text`].
pub fn write_cayley_text(group: &FiniteGroup) -> String {
    let mut out = format!("{}\n", group.order());
    for row in group.table_rows() {
        let cells: Vec<String> = row.iter().map(usize::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out.push_str("labels: ");
    out.push_str(&group.labels().join(" "));
    out.push('\n');
    out
}

/// Named groups swept by default, before filtering by order.
const NAMED_FAMILIES: &[&str] = &[
    "Q8", "S3", "A4", "S4", "C2xC2", "C2xC4", "C2xC2xC2", "C3xC3", "C2xC6", "C2xC8", "C4xC4",
    "C2xC2xC4", "C2xC2xC2xC2", "C2xD4", "C2xQ8", "C2xS3", "C3xS3", "C2xA4", "C3xQ8", "C4xS3",
    "C3xD4", "C2xD6", "C4xQ8", "C4xD4", "C2xC2xD4", "S3xS3", "C2xS4",
];

/// The default sweep catalog: cyclic groups, dihedral groups `D3` upward
/// and a list of named groups and products, all of order `<= max_order`.
pub fn default_families(max_order: usize) -> Vec<GroupSpec> {
    let mut specs: Vec<GroupSpec> = (1..=max_order).map(GroupSpec::Cyclic).collect();
    specs.extend((3..=max_order / 2).map(GroupSpec::Dihedral));
    specs.extend(NAMED_FAMILIES.iter().map(|s| s.parse().expect("catalog entries parse")));
    specs.retain(|s| s.order().is_some_and(|o| o <= max_order));
    specs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar() {
        let spec: GroupSpec = "C2xD4xQ8".parse().unwrap();
        assert_eq!(spec.to_string(), "C2xD4xQ8");
        match &spec {
            GroupSpec::Product(left, right) => {
                assert_eq!(**right, GroupSpec::Quaternion);
                assert!(matches!(**left, GroupSpec::Product(_, _)));
            }
            _ => panic!("expected a product"),
        }
        assert_eq!(spec.order(), Some(128));
        assert_eq!(
            "C3xfile:/tmp/a x.txt".parse::<GroupSpec>().unwrap(),
            GroupSpec::Product(
                Box::new(GroupSpec::Cyclic(3)),
                Box::new(GroupSpec::File("/tmp/a x.txt".into()))
            )
        );
        for bad in ["", "C", "C0", "Q4", "S6", "X3", "C2x", "C2*C3", "C2xx"] {
            assert!(bad.parse::<GroupSpec>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn family_orders() {
        for (spec, order) in
            [("C1", 1), ("D4", 8), ("Q8", 8), ("S4", 24), ("A4", 12), ("A1", 1), ("D1", 2), ("C3xS3", 18)]
        {
            assert_eq!(group_from_str(spec).unwrap().order(), order, "{spec}");
        }
    }

    #[test]
    fn order_limit() {
        assert!(matches!(
            group_from_str("S5"),
            Err(CatalogError::OrderTooLarge { order: 120, limit: 64 })
        ));
        let s5 = build_group_with_limit(&"S5".parse().unwrap(), PROBE_ORDER_LIMIT).unwrap();
        assert_eq!(s5.order(), 120);
        assert_eq!(s5.center().len(), 1);
        let a5 = build_group_with_limit(&"A5".parse().unwrap(), PROBE_ORDER_LIMIT).unwrap();
        assert_eq!(a5.classes().len(), 5);
    }

    #[test]
    fn labels_are_readable() {
        let s3 = group_from_str("S3").unwrap();
        assert_eq!(s3.labels(), ["e", "(23)", "(12)", "(123)", "(132)", "(13)"]);
        let d4 = group_from_str("D4").unwrap();
        assert_eq!(d4.labels(), ["1", "r", "r^2", "r^3", "s", "rs", "r^2s", "r^3s"]);
        let r = d4.find_label("r").unwrap();
        let s = d4.find_label("s").unwrap();
        assert_eq!(d4.label(d4.commutator(r, s)), "r^2");
        assert_eq!(d4.center().len(), 2);
        let q8 = group_from_str("Q8").unwrap();
        let i = q8.find_label("i").unwrap();
        let j = q8.find_label("j").unwrap();
        assert_eq!(q8.label(q8.mul(i, j)), "k");
        assert_eq!(q8.label(q8.mul(j, i)), "-k");
        let v = group_from_str("C2xC2").unwrap();
        assert_eq!(v.labels(), ["1.1", "1.a", "a.1", "a.a"]);
    }

    #[test]
    fn s3_classes_and_subgroups() {
        let g = group_from_str("S3").unwrap();
        assert_eq!(g.classes().len(), 3);
        let subs = all_subgroups(&g);
        let orders: Vec<usize> = subs.iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn small_subgroup_counts() {
        assert_eq!(all_subgroups(&group_from_str("C1").unwrap()).len(), 1);
        assert_eq!(all_subgroups(&group_from_str("Q8").unwrap()).len(), 6);
        assert_eq!(all_subgroups(&group_from_str("D4").unwrap()).len(), 10);
        assert_eq!(all_subgroups(&group_from_str("C2xC2xC2").unwrap()).len(), 16);
    }

    #[test]
    fn text_format_round_trip() {
        let g = group_from_str("D3").unwrap();
        let text = write_cayley_text(&g);
        assert_eq!(parse_cayley_text(&text).unwrap(), g);

        let trivial = parse_cayley_text("# trivial\n1\n0\n").unwrap();
        assert_eq!(trivial.order(), 1);
        assert_eq!(trivial.labels(), ["g0"]);
    }

    #[test]
    fn text_format_errors() {
        assert!(matches!(parse_cayley_text(""), Err(CatalogError::Format { .. })));
        assert!(matches!(parse_cayley_text("2\n0 1\n"), Err(CatalogError::Format { line: 3, .. })));
        assert!(matches!(parse_cayley_text("2\n0 1\n1 x\n"), Err(CatalogError::Format { line: 3, .. })));
        assert!(matches!(
            parse_cayley_text("2\n0 1\n1 0\nlabels: a\n"),
            Err(CatalogError::Format { line: 4, .. })
        ));
        assert!(matches!(
            parse_cayley_text("2\n0 1\n0 1\n"),
            Err(CatalogError::Group(GroupError::NotLatinSquare { .. }))
        ));
    }

    #[test]
    fn default_catalog_respects_order() {
        let specs = default_families(8);
        assert!(specs.iter().all(|s| s.order().unwrap() <= 8));
        assert!(specs.contains(&GroupSpec::Quaternion));
        assert!(specs.contains(&GroupSpec::Dihedral(4)));
        for s in default_families(64) {
            build_group(&s).unwrap_or_else(|e| panic!("{s}: {e}"));
        }
    }
}
