//! Vertex groups of a cyclic product.
//!
//! Three kinds are supported: cyclic groups `Z/k`, finite groups given by a
//! multiplication table, and the infinite cyclic group `Z`. Elements are
//! plain `i64` values; the identity is always `0` (element id 0 for tables,
//! the residue 0 for cyclic groups, the integer 0 for `Z`).

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the order of groups whose automorphisms are enumerated.
pub const DEFAULT_ORDER_CAP: usize = 12;

/// Element value inside a local group.
pub type Elem = i64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic { order: u32 },
    Table { table: Vec<Vec<u32>>, names: Vec<String> },
    Integers,
}

/// A validated vertex group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LocalGroupSpec", into = "LocalGroupSpec")]
pub struct LocalGroup {
    kind: GroupKind,
    name: String,
    inverse: Vec<u32>,
}

/// Serialized form of a vertex group, as it appears in presentation files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum LocalGroupSpec {
    Cyclic {
        order: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
    Table {
        table: Vec<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        names: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
    Integers {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
}

impl TryFrom<LocalGroupSpec> for LocalGroup {
    type Error = Error;

    fn try_from(spec: LocalGroupSpec) -> Result<Self> {
        let group = match spec {
            LocalGroupSpec::Cyclic { order, name } => {
                let g = LocalGroup::cyclic(order)?;
                match name {
                    Some(n) => g.with_name(n),
                    None => g,
                }
            }
            LocalGroupSpec::Table { table, names, name } => {
                let g = LocalGroup::table(table, names)?;
                match name {
                    Some(n) => g.with_name(n),
                    None => g,
                }
            }
            LocalGroupSpec::Integers { name } => {
                let g = LocalGroup::integers();
                match name {
                    Some(n) => g.with_name(n),
                    None => g,
                }
            }
        };
        Ok(group)
    }
}

impl From<LocalGroup> for LocalGroupSpec {
    fn from(g: LocalGroup) -> Self {
        let default_name = match &g.kind {
            GroupKind::Cyclic { order } => format!("Z/{order}"),
            GroupKind::Table { table, .. } => format!("T{}", table.len()),
            GroupKind::Integers => "Z".to_string(),
        };
        let name = (g.name != default_name).then_some(g.name);
        match g.kind {
            GroupKind::Cyclic { order } => LocalGroupSpec::Cyclic { order, name },
            GroupKind::Table { table, names } => LocalGroupSpec::Table { table, names, name },
            GroupKind::Integers => LocalGroupSpec::Integers { name },
        }
    }
}

impl LocalGroup {
    pub fn cyclic(order: u32) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidTable(format!(
                "cyclic group order must be at least 2, got {order}"
            )));
        }
        let inverse = (0..order).map(|x| (order - x) % order).collect();
        Ok(LocalGroup {
            kind: GroupKind::Cyclic { order },
            name: format!("Z/{order}"),
            inverse,
        })
    }

    pub fn integers() -> Self {
        LocalGroup {
            kind: GroupKind::Integers,
            name: "Z".to_string(),
            inverse: Vec::new(),
        }
    }

    /// Builds a group from a multiplication table, `table[a][b] = a·b`.
    ///
    /// Element 0 must be the identity. The table is checked for closure,
    /// identity, inverses and associativity.
    pub fn table(table: Vec<Vec<u32>>, names: Vec<String>) -> Result<Self> {
        let m = table.len();
        if m < 2 {
            return Err(Error::InvalidTable(format!(
                "table must have at least 2 elements, got {m}"
            )));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidTable(format!(
                    "row {a} has {} entries, expected {m}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x as usize >= m) {
                return Err(Error::InvalidTable(format!(
                    "row {a} contains out-of-range entry {bad}"
                )));
            }
        }
        for x in 0..m {
            if table[0][x] as usize != x || table[x][0] as usize != x {
                return Err(Error::InvalidTable(format!(
                    "element 0 is not a two-sided identity (fails at {x})"
                )));
            }
        }
        let mut inverse = vec![0u32; m];
        for a in 0..m {
            let right: Vec<usize> = (0..m).filter(|&b| table[a][b] == 0).collect();
            if right.len() != 1 || table[right[0]][a] != 0 {
                return Err(Error::InvalidTable(format!("element {a} has no inverse")));
            }
            inverse[a] = right[0] as u32;
        }
        for a in 0..m {
            for b in 0..m {
                let ab = table[a][b] as usize;
                for c in 0..m {
                    let bc = table[b][c] as usize;
                    if table[ab][c] != table[a][bc] {
                        return Err(Error::InvalidTable(format!(
                            "not associative: ({a}·{b})·{c} ≠ {a}·({b}·{c})"
                        )));
                    }
                }
            }
        }
        if !names.is_empty() && names.len() != m {
            return Err(Error::InvalidTable(format!(
                "{} names given for {m} elements",
                names.len()
            )));
        }
        Ok(LocalGroup {
            kind: GroupKind::Table { table, names },
            name: format!("T{m}"),
            inverse,
        })
    }

    /// The symmetric group on three letters, elements
    /// `e, (12), (13), (23), (123), (132)`, composing right to left.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [1, 0, 2],
            [2, 1, 0],
            [0, 2, 1],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap() as u32;
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index([a[b[0]], a[b[1]], a[b[2]]]))
                    .collect()
            })
            .collect();
        let names = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        LocalGroup::table(table, names)
            .expect("S3 table is valid")
            .with_name("S3")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self.kind, GroupKind::Integers)
    }

    /// Group order, `None` for `Z`.
    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            GroupKind::Cyclic { order } => Some(*order as usize),
            GroupKind::Table { table, .. } => Some(table.len()),
            GroupKind::Integers => None,
        }
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn contains(&self, x: Elem) -> bool {
        match self.order() {
            Some(m) => x >= 0 && (x as usize) < m,
            None => true,
        }
    }

    /// Product `a·b`. Both arguments must be valid elements.
    pub fn op(&self, a: Elem, b: Elem) -> Elem {
        match &self.kind {
            GroupKind::Cyclic { order } => (a + b) % (*order as Elem),
            GroupKind::Table { table, .. } => table[a as usize][b as usize] as Elem,
            GroupKind::Integers => a + b,
        }
    }

    pub fn inv(&self, a: Elem) -> Elem {
        match &self.kind {
            GroupKind::Integers => -a,
            _ => self.inverse[a as usize] as Elem,
        }
    }

    /// All elements in id order.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        match self.order() {
            Some(m) => Ok((0..m as Elem).collect()),
            None => Err(Error::InfiniteGroup(self.name.clone())),
        }
    }

    pub fn non_identity(&self) -> Result<Vec<Elem>> {
        Ok(self.elements()?.into_iter().skip(1).collect())
    }

    /// The fixed generating list used to describe automorphisms by generator
    /// images: every non-identity element for finite groups, `[1]` for `Z`.
    pub fn generators(&self) -> Vec<Elem> {
        match self.order() {
            Some(m) => (1..m as Elem).collect(),
            None => vec![1],
        }
    }

    pub fn element_order(&self, x: Elem) -> Option<usize> {
        if x == 0 {
            return Some(1);
        }
        self.order()?;
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = self.op(y, x);
            k += 1;
        }
        Some(k)
    }

    pub fn element_name(&self, x: Elem) -> String {
        match &self.kind {
            GroupKind::Table { names, .. } if !names.is_empty() => names[x as usize].clone(),
            _ => x.to_string(),
        }
    }

    pub fn element(&self, value: Elem) -> Result<LocalElement<'_>> {
        if !self.contains(value) {
            return Err(Error::InvalidElement {
                group: self.name.clone(),
                value,
            });
        }
        Ok(LocalElement { group: self, value })
    }

    fn finite_order(&self, cap: usize) -> Result<usize> {
        let m = self
            .order()
            .ok_or_else(|| Error::InfiniteGroup(self.name.clone()))?;
        if m > cap {
            return Err(Error::OrderTooLarge {
                name: self.name.clone(),
                order: m,
                cap,
            });
        }
        Ok(m)
    }

    /// Every automorphism, sorted by mapping. `Z` yields `x ↦ x, x ↦ -x`.
    pub fn automorphisms(&self, cap: usize) -> Result<Vec<LocalIso>> {
        self.isomorphisms_to(self, cap)
    }

    /// Every isomorphism `self → target`, sorted by mapping.
    pub fn isomorphisms_to(&self, target: &LocalGroup, cap: usize) -> Result<Vec<LocalIso>> {
        match (self.is_finite(), target.is_finite()) {
            (false, false) => return Ok(vec![LocalIso::Sign(1), LocalIso::Sign(-1)]),
            (false, true) | (true, false) => return Ok(Vec::new()),
            _ => {}
        }
        let m = self.finite_order(cap)?;
        if target.finite_order(cap)? != m {
            return Ok(Vec::new());
        }
        Ok(bijective_homomorphisms(self, target)
            .into_iter()
            .map(LocalIso::Map)
            .collect())
    }

    pub fn is_isomorphic_to(&self, target: &LocalGroup, cap: usize) -> Result<bool> {
        Ok(!self.isomorphisms_to(target, cap)?.is_empty())
    }

    /// A finite set of elements such that the only automorphism fixing it
    /// pointwise is the identity. Grown greedily: each step adds the
    /// smallest element that leaves the fewest automorphisms.
    pub fn determining_set(&self, cap: usize) -> Result<Vec<Elem>> {
        if !self.is_finite() {
            return Ok(vec![1]);
        }
        let mut remaining = self.automorphisms(cap)?;
        let candidates = self.non_identity()?;
        let mut chosen = Vec::new();
        while remaining.len() > 1 {
            let (best, _) = candidates
                .iter()
                .map(|&x| (x, remaining.iter().filter(|f| f.apply(x) == x).count()))
                .min_by_key(|&(x, count)| (count, x))
                .expect("a non-trivial automorphism implies a non-identity element");
            chosen.push(best);
            remaining.retain(|f| f.apply(best) == best);
        }
        Ok(chosen)
    }
}

impl fmt::Display for LocalGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// An element together with the group it lives in.
#[derive(Debug, Clone, Copy)]
pub struct LocalElement<'a> {
    pub group: &'a LocalGroup,
    pub value: Elem,
}

impl<'a> LocalElement<'a> {
    pub fn mul(&self, other: &LocalElement<'a>) -> Result<LocalElement<'a>> {
        if !std::ptr::eq(self.group, other.group) && self.group != other.group {
            return Err(Error::GroupMismatch {
                left: self.group.name.clone(),
                right: other.group.name.clone(),
            });
        }
        Ok(LocalElement {
            group: self.group,
            value: self.group.op(self.value, other.value),
        })
    }

    pub fn inv(&self) -> LocalElement<'a> {
        LocalElement {
            group: self.group,
            value: self.group.inv(self.value),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.value == 0
    }
}

impl PartialEq for LocalElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.group == other.group
    }
}

/// An isomorphism between two vertex groups.
///
/// Finite groups carry the full element map; for `Z` the map is `x ↦ ±x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LocalIso {
    Map(Vec<u32>),
    Sign(i64),
}

impl LocalIso {
    pub fn identity(group: &LocalGroup) -> Self {
        match group.order() {
            Some(m) => LocalIso::Map((0..m as u32).collect()),
            None => LocalIso::Sign(1),
        }
    }

    pub fn apply(&self, x: Elem) -> Elem {
        match self {
            LocalIso::Map(map) => map[x as usize] as Elem,
            LocalIso::Sign(s) => s * x,
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &LocalIso) -> LocalIso {
        match (self, other) {
            (LocalIso::Map(f), LocalIso::Map(g)) => {
                LocalIso::Map(g.iter().map(|&x| f[x as usize]).collect())
            }
            (LocalIso::Sign(a), LocalIso::Sign(b)) => LocalIso::Sign(a * b),
            _ => panic!("composing isomorphisms of finite and infinite groups"),
        }
    }

    pub fn inverse(&self) -> LocalIso {
        match self {
            LocalIso::Map(f) => {
                let mut inv = vec![0u32; f.len()];
                for (x, &y) in f.iter().enumerate() {
                    inv[y as usize] = x as u32;
                }
                LocalIso::Map(inv)
            }
            LocalIso::Sign(s) => LocalIso::Sign(*s),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            LocalIso::Map(f) => f.iter().enumerate().all(|(x, &y)| x as u32 == y),
            LocalIso::Sign(s) => *s == 1,
        }
    }

    /// Exhaustive check that this is an isomorphism `source → target`.
    pub fn is_isomorphism(&self, source: &LocalGroup, target: &LocalGroup) -> bool {
        match self {
            LocalIso::Sign(s) => {
                !source.is_finite() && !target.is_finite() && (*s == 1 || *s == -1)
            }
            LocalIso::Map(f) => {
                let (Some(m), Some(m2)) = (source.order(), target.order()) else {
                    return false;
                };
                if f.len() != m || m2 != m {
                    return false;
                }
                let mut seen = vec![false; m];
                for &y in f {
                    if y as usize >= m || std::mem::replace(&mut seen[y as usize], true) {
                        return false;
                    }
                }
                (0..m as Elem).all(|a| {
                    (0..m as Elem).all(|b| {
                        self.apply(source.op(a, b)) == target.op(self.apply(a), self.apply(b))
                    })
                })
            }
        }
    }
}

/// Greedy generating set: scan ids upward, keep anything not yet generated.
fn greedy_generators(g: &LocalGroup) -> Vec<Elem> {
    let m = g.order().expect("finite");
    let mut gens = Vec::new();
    let mut inside = vec![false; m];
    inside[0] = true;
    for x in 1..m as Elem {
        if inside[x as usize] {
            continue;
        }
        gens.push(x);
        // closure of the generated subgroup
        let mut queue: VecDeque<Elem> = (0..m as Elem).filter(|&y| inside[y as usize]).collect();
        while let Some(y) = queue.pop_front() {
            for &s in &gens {
                let z = g.op(y, s);
                if !inside[z as usize] {
                    inside[z as usize] = true;
                    queue.push_back(z);
                }
            }
        }
    }
    gens
}

/// All bijective homomorphisms between two finite groups of equal order,
/// sorted lexicographically by element map.
fn bijective_homomorphisms(src: &LocalGroup, tgt: &LocalGroup) -> Vec<Vec<u32>> {
    let m = src.order().expect("finite");
    let gens = greedy_generators(src);

    // Spanning tree of the Cayley graph: every element as parent · generator.
    let mut parent: Vec<Option<(Elem, usize)>> = vec![None; m];
    let mut order = vec![0 as Elem];
    let mut seen = vec![false; m];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let y = order[head];
        head += 1;
        for (k, &s) in gens.iter().enumerate() {
            let z = src.op(y, s);
            if !seen[z as usize] {
                seen[z as usize] = true;
                parent[z as usize] = Some((y, k));
                order.push(z);
            }
        }
    }

    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&s| {
            let o = src.element_order(s);
            (1..m as Elem)
                .filter(|&y| tgt.element_order(y) == o)
                .collect()
        })
        .collect();

    let mut found = Vec::new();
    let mut images = vec![0 as Elem; gens.len()];
    fn search(
        depth: usize,
        images: &mut Vec<Elem>,
        candidates: &[Vec<Elem>],
        check: &mut dyn FnMut(&[Elem]),
    ) {
        if depth == candidates.len() {
            check(images);
            return;
        }
        for &c in &candidates[depth] {
            images[depth] = c;
            search(depth + 1, images, candidates, check);
        }
    }
    let mut check = |imgs: &[Elem]| {
        let mut map = vec![u32::MAX; m];
        map[0] = 0;
        let mut used = vec![false; m];
        used[0] = true;
        for &y in order.iter().skip(1) {
            let (p, k) = parent[y as usize].expect("spanning tree");
            let img = tgt.op(map[p as usize] as Elem, imgs[k]);
            if std::mem::replace(&mut used[img as usize], true) {
                return;
            }
            map[y as usize] = img as u32;
        }
        let hom = (0..m).all(|a| {
            (0..m).all(|b| {
                map[src.op(a as Elem, b as Elem) as usize] as Elem
                    == tgt.op(map[a] as Elem, map[b] as Elem)
            })
        });
        if hom {
            found.push(map);
        }
    };
    search(0, &mut images, &candidates, &mut check);
    found.sort();
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_associative(t: &[Vec<u32>]) -> bool {
        let m = t.len();
        (0..m).all(|a| {
            (0..m).all(|b| {
                (0..m).all(|c| t[t[a][b] as usize][c] == t[a][t[b][c] as usize])
            })
        })
    }

    #[test]
    fn cyclic_product_is_modular_addition() {
        let g = LocalGroup::cyclic(3).unwrap();
        let a = g.element(1).unwrap();
        let b = g.element(2).unwrap();
        assert_eq!(a.mul(&b).unwrap().value, 0);
        let e = g.element(0).unwrap();
        assert_eq!(e.mul(&a).unwrap(), a);
    }

    #[test]
    fn mismatched_groups_are_rejected() {
        let g = LocalGroup::cyclic(3).unwrap();
        let h = LocalGroup::cyclic(4).unwrap();
        let err = g.element(1).unwrap().mul(&h.element(1).unwrap());
        assert!(matches!(err, Err(Error::GroupMismatch { .. })));
    }

    #[test]
    fn s3_table_matches_permutation_composition() {
        let s3 = LocalGroup::symmetric3();
        // (12)·(13) = (132) under right-to-left composition
        assert_eq!(s3.element_name(s3.op(1, 2)), "(132)");
        assert_eq!(s3.element_name(s3.op(4, 4)), "(132)");
        assert_eq!(s3.inv(4), 5);
    }

    #[test]
    fn automorphism_counts() {
        let z2 = LocalGroup::cyclic(2).unwrap();
        let auts = z2.automorphisms(DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(auts.len(), 1);
        assert!(auts[0].is_identity());
        assert_eq!(
            LocalGroup::cyclic(3).unwrap().automorphisms(12).unwrap().len(),
            2
        );
        // φ(12) = 4, φ(7) = 6
        assert_eq!(LocalGroup::cyclic(12).unwrap().automorphisms(12).unwrap().len(), 4);
        assert_eq!(LocalGroup::cyclic(7).unwrap().automorphisms(12).unwrap().len(), 6);
        assert_eq!(LocalGroup::symmetric3().automorphisms(12).unwrap().len(), 6);
        assert_eq!(
            LocalGroup::integers().automorphisms(12).unwrap(),
            vec![LocalIso::Sign(1), LocalIso::Sign(-1)]
        );
    }

    #[test]
    fn automorphism_cap_is_enforced() {
        let g = LocalGroup::cyclic(13).unwrap();
        assert!(matches!(
            g.automorphisms(DEFAULT_ORDER_CAP),
            Err(Error::OrderTooLarge { order: 13, .. })
        ));
        assert_eq!(g.automorphisms(13).unwrap().len(), 12);
    }

    #[test]
    fn automorphisms_form_a_group() {
        for g in [
            LocalGroup::cyclic(5).unwrap(),
            LocalGroup::cyclic(8).unwrap(),
            LocalGroup::symmetric3(),
        ] {
            let auts = g.automorphisms(12).unwrap();
            assert!(auts.iter().any(|f| f.is_identity()));
            for f in &auts {
                assert!(f.is_isomorphism(&g, &g));
                assert!(auts.contains(&f.inverse()));
                for h in &auts {
                    assert!(auts.contains(&f.compose(h)));
                }
            }
        }
    }

    #[test]
    fn determining_sets() {
        assert_eq!(LocalGroup::cyclic(3).unwrap().determining_set(12).unwrap(), vec![1]);
        assert!(LocalGroup::cyclic(2).unwrap().determining_set(12).unwrap().is_empty());
        assert_eq!(LocalGroup::integers().determining_set(12).unwrap(), vec![1]);

        let s3 = LocalGroup::symmetric3();
        let set = s3.determining_set(12).unwrap();
        assert_eq!(set.len(), 2);
        let auts = s3.automorphisms(12).unwrap();
        let fixing: Vec<_> = auts
            .iter()
            .filter(|f| set.iter().all(|&x| f.apply(x) == x))
            .collect();
        assert_eq!(fixing.len(), 1);
        assert!(fixing[0].is_identity());
    }

    #[test]
    fn table_validation() {
        assert!(LocalGroup::table(vec![vec![0]], vec![]).is_err());
        assert!(LocalGroup::table(vec![vec![0, 1], vec![1, 1]], vec![]).is_err());
        assert!(LocalGroup::table(vec![vec![1, 0], vec![0, 1]], vec![]).is_err());
        assert!(LocalGroup::table(vec![vec![0, 1], vec![1, 0]], vec!["e".into()]).is_err());
        assert!(LocalGroup::table(vec![vec![0, 1], vec![1, 0]], vec![]).is_ok());
    }

    #[test]
    fn perturbed_tables_are_rejected_when_not_associative() {
        let base: Vec<Vec<u32>> = (0..3).map(|a| (0..3).map(|b| (a + b) % 3).collect()).collect();
        for r in 0..3 {
            for c in 0..3 {
                for v in 0..3u32 {
                    let mut t = base.clone();
                    t[r][c] = v;
                    let valid = LocalGroup::table(t.clone(), vec![]).is_ok();
                    if !is_associative(&t) {
                        assert!(!valid, "accepted non-associative table {t:?}");
                    }
                    if valid {
                        assert_eq!(t, base);
                    }
                }
            }
        }
    }

    #[test]
    fn isomorphism_between_presentations_of_z3() {
        let z3 = LocalGroup::cyclic(3).unwrap();
        let t3 = LocalGroup::table(vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]], vec![]).unwrap();
        assert!(z3.is_isomorphic_to(&t3, 12).unwrap());
        assert!(!z3.is_isomorphic_to(&LocalGroup::cyclic(2).unwrap(), 12).unwrap());
        assert!(!z3.is_isomorphic_to(&LocalGroup::integers(), 12).unwrap());
        let z6 = LocalGroup::cyclic(6).unwrap();
        assert!(!z6.is_isomorphic_to(&LocalGroup::symmetric3(), 12).unwrap());
    }

    #[test]
    fn spec_round_trip() {
        let json = r#"{"kind":"table","table":[[0,1],[1,0]],"names":["e","s"]}"#;
        let g: LocalGroup = serde_json::from_str(json).unwrap();
        assert_eq!(g.order(), Some(2));
        assert_eq!(g.element_name(1), "s");
        let back = serde_json::to_string(&g).unwrap();
        assert_eq!(back, json);
        let bad = r#"{"kind":"cyclic","order":1}"#;
        assert!(serde_json::from_str::<LocalGroup>(bad).is_err());
    }
}
