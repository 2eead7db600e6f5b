//! Elements of a cyclic product as canonical reduced words.
//!
//! A reduced word is unique up to swapping adjacent syllables that sit on
//! adjacent vertices of the cycle. Among those shuffles we keep the one
//! whose vertex sequence is lexicographically least, so equal elements have
//! identical words and `GroupElement` can be hashed and compared directly.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local::{Elem, LocalElement, LocalGroup};

/// Largest supported cycle length (vertex sets are 64-bit masks).
pub const MAX_CYCLE: usize = 64;

/// A subset of the cycle's vertices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn single(v: usize) -> Self {
        VertexSet(1 << v)
    }

    pub fn full(n: usize) -> Self {
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&v| self.contains(v))
    }

    pub fn bits(self) -> u64 {
        self.0
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

/// One non-identity element of one vertex group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub vertex: usize,
    pub elem: Elem,
}

impl Syllable {
    pub fn new(vertex: usize, elem: Elem) -> Self {
        Syllable { vertex, elem }
    }
}

/// An element of the cyclic product in canonical reduced form.
///
/// Ordered shortlex: first by syllable length, then syllable by syllable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupElement {
    word: Vec<Syllable>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement::default()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.word
    }

    /// Syllable length.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn into_syllables(self) -> Vec<Syllable> {
        self.word
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A parabolic subgroup `w·⟨G_S⟩·w⁻¹`, with `w` the minimal representative of
/// its coset `w⟨G_S⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParabolicRef {
    pub vertices: VertexSet,
    pub conjugator: GroupElement,
}

/// A cyclic product `C_n𝒢`: `n ≥ 5` non-trivial groups around a cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PresentationData", into = "PresentationData")]
pub struct Presentation {
    groups: Vec<LocalGroup>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<String>,
    n: usize,
    groups: Vec<LocalGroup>,
}

impl TryFrom<PresentationData> for Presentation {
    type Error = Error;

    fn try_from(data: PresentationData) -> Result<Self> {
        if let Some(schema) = &data.schema {
            if schema != crate::SCHEMA {
                return Err(Error::InvalidPresentation(format!(
                    "unsupported schema {schema:?}, expected {:?}",
                    crate::SCHEMA
                )));
            }
        }
        if data.groups.len() != data.n {
            return Err(Error::InvalidPresentation(format!(
                "n = {} but {} group specs given",
                data.n,
                data.groups.len()
            )));
        }
        Presentation::new(data.groups)
    }
}

impl From<Presentation> for PresentationData {
    fn from(p: Presentation) -> Self {
        PresentationData {
            schema: Some(crate::SCHEMA.to_string()),
            n: p.groups.len(),
            groups: p.groups,
        }
    }
}

impl Presentation {
    pub fn new(groups: Vec<LocalGroup>) -> Result<Self> {
        let n = groups.len();
        if n < 5 {
            return Err(Error::InvalidPresentation(format!(
                "cycle length must be at least 5, got {n}"
            )));
        }
        if n > MAX_CYCLE {
            return Err(Error::InvalidPresentation(format!(
                "cycle length {n} exceeds the supported maximum {MAX_CYCLE}"
            )));
        }
        Ok(Presentation { groups })
    }

    /// Reads a presentation file. Errors carry the line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidPresentation(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    /// `n` copies of the same group.
    pub fn uniform(n: usize, group: LocalGroup) -> Result<Self> {
        Presentation::new(vec![group; n])
    }

    /// Short human-readable summary such as `C5[Z/2,Z/3,S3,Z/2,Z/3]`.
    pub fn describe(&self) -> String {
        let names: Vec<&str> = self.groups.iter().map(LocalGroup::name).collect();
        format!("C{}[{}]", self.n(), names.join(","))
    }

    pub fn n(&self) -> usize {
        self.groups.len()
    }

    pub fn group(&self, v: usize) -> &LocalGroup {
        &self.groups[v]
    }

    pub fn groups(&self) -> &[LocalGroup] {
        &self.groups
    }

    pub fn all_finite(&self) -> bool {
        self.groups.iter().all(LocalGroup::is_finite)
    }

    pub fn require_finite(&self) -> Result<()> {
        match self.groups.iter().find(|g| !g.is_finite()) {
            Some(g) => Err(Error::InfiniteGroup(g.name().to_string())),
            None => Ok(()),
        }
    }

    /// `v + k` modulo `n`, for any signed offset.
    pub fn shift(&self, v: usize, k: isize) -> usize {
        let n = self.n() as isize;
        (((v as isize + k) % n + n) % n) as usize
    }

    /// Adjacency in the cycle: `|i − j| ≡ ±1 (mod n)`.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        let n = self.n();
        (i + 1) % n == j || (j + 1) % n == i
    }

    pub fn syllable(&self, vertex: usize, elem: Elem) -> Result<Syllable> {
        if vertex >= self.n() {
            return Err(Error::Parse(format!(
                "vertex {} out of range 1..={}",
                vertex + 1,
                self.n()
            )));
        }
        let g = &self.groups[vertex];
        if !g.contains(elem) {
            return Err(Error::InvalidElement {
                group: g.name().to_string(),
                value: elem,
            });
        }
        Ok(Syllable::new(vertex, elem))
    }

    pub fn local_element(&self, s: Syllable) -> LocalElement<'_> {
        LocalElement {
            group: &self.groups[s.vertex],
            value: s.elem,
        }
    }

    /// Every non-identity syllable, ordered by vertex then element.
    pub fn all_syllables(&self) -> Result<Vec<Syllable>> {
        self.syllables_in(VertexSet::full(self.n()))
    }

    pub fn syllables_in(&self, set: VertexSet) -> Result<Vec<Syllable>> {
        let mut out = Vec::new();
        for v in set.iter().filter(|&v| v < self.n()) {
            for e in self.groups[v].non_identity()? {
                out.push(Syllable::new(v, e));
            }
        }
        Ok(out)
    }

    /// Appends one syllable to a reduced word, keeping it reduced.
    fn push_syllable(&self, word: &mut Vec<Syllable>, s: Syllable) {
        if s.elem == 0 {
            return;
        }
        for k in (0..word.len()).rev() {
            let t = word[k];
            if t.vertex == s.vertex {
                let prod = self.groups[s.vertex].op(t.elem, s.elem);
                if prod == 0 {
                    word.remove(k);
                } else {
                    word[k].elem = prod;
                }
                return;
            }
            if !self.adjacent(t.vertex, s.vertex) {
                break;
            }
        }
        word.push(s);
    }

    /// Lexicographically least shuffle of a reduced word.
    fn canonicalize(&self, mut word: Vec<Syllable>) -> Vec<Syllable> {
        let mut out = Vec::with_capacity(word.len());
        while !word.is_empty() {
            let mut best = 0;
            let mut blockers = VertexSet::EMPTY;
            for (k, s) in word.iter().enumerate() {
                // movable to the front iff every earlier syllable commutes with it
                let movable = blockers.iter().all(|b| self.adjacent(b, s.vertex));
                if movable && (k == 0 || s.vertex < word[best].vertex) {
                    best = k;
                }
                blockers.insert(s.vertex);
            }
            out.push(word.remove(best));
        }
        out
    }

    fn element_from_reduced(&self, word: Vec<Syllable>) -> GroupElement {
        GroupElement {
            word: self.canonicalize(word),
        }
    }

    /// Canonical reduced form of an arbitrary word.
    pub fn reduce(&self, word: &[Syllable]) -> GroupElement {
        let mut out = Vec::with_capacity(word.len());
        for &s in word {
            self.push_syllable(&mut out, s);
        }
        self.element_from_reduced(out)
    }

    pub fn from_syllable(&self, s: Syllable) -> GroupElement {
        self.reduce(&[s])
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let mut out = a.word.clone();
        for &s in &b.word {
            self.push_syllable(&mut out, s);
        }
        self.element_from_reduced(out)
    }

    pub fn mul_all<'a>(&self, factors: impl IntoIterator<Item = &'a GroupElement>) -> GroupElement {
        let mut out = Vec::new();
        for f in factors {
            for &s in &f.word {
                self.push_syllable(&mut out, s);
            }
        }
        self.element_from_reduced(out)
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        let word = a
            .word
            .iter()
            .rev()
            .map(|s| Syllable::new(s.vertex, self.groups[s.vertex].inv(s.elem)))
            .collect();
        self.element_from_reduced(word)
    }

    /// `g·x·g⁻¹`.
    pub fn conjugate(&self, g: &GroupElement, x: &GroupElement) -> GroupElement {
        let gi = self.inv(g);
        self.mul_all([g, x, &gi])
    }

    pub fn pow(&self, g: &GroupElement, k: i64) -> GroupElement {
        let base = if k < 0 { self.inv(g) } else { g.clone() };
        let mut out = GroupElement::identity();
        for _ in 0..k.unsigned_abs() {
            out = self.mul(&out, &base);
        }
        out
    }

    pub fn support(&self, g: &GroupElement) -> VertexSet {
        g.word.iter().map(|s| s.vertex).collect()
    }

    fn right_movable(&self, word: &[Syllable], k: usize) -> bool {
        let v = word[k].vertex;
        word[k + 1..].iter().all(|t| self.adjacent(t.vertex, v))
    }

    fn left_movable(&self, word: &[Syllable], k: usize) -> bool {
        let v = word[k].vertex;
        word[..k].iter().all(|t| self.adjacent(t.vertex, v))
    }

    /// Splits `g = rep·h` with `h ∈ ⟨G_S⟩` and `rep` the minimal-length
    /// representative of `g⟨G_S⟩`.
    pub fn coset_split(&self, g: &GroupElement, set: VertexSet) -> (GroupElement, GroupElement) {
        let mut word = g.word.clone();
        let mut stripped = Vec::new();
        'outer: loop {
            for k in (0..word.len()).rev() {
                if set.contains(word[k].vertex) && self.right_movable(&word, k) {
                    stripped.push(word.remove(k));
                    continue 'outer;
                }
            }
            break;
        }
        stripped.reverse();
        (self.element_from_reduced(word), self.reduce(&stripped))
    }

    /// Minimal-length representative of the coset `g⟨G_S⟩`.
    pub fn coset_rep(&self, g: &GroupElement, set: VertexSet) -> GroupElement {
        self.coset_split(g, set).0
    }

    /// Splits `g = a·m·b` with `a ∈ ⟨G_A⟩`, `b ∈ ⟨G_B⟩` and `m` of minimal
    /// length in the double coset `⟨G_A⟩·g·⟨G_B⟩`.
    pub fn double_coset_split(
        &self,
        g: &GroupElement,
        left: VertexSet,
        right: VertexSet,
    ) -> (GroupElement, GroupElement, GroupElement) {
        let mut word = g.word.clone();
        let mut left_part = Vec::new();
        let mut right_part = Vec::new();
        loop {
            let l = (0..word.len())
                .find(|&k| left.contains(word[k].vertex) && self.left_movable(&word, k));
            if let Some(k) = l {
                left_part.push(word.remove(k));
                continue;
            }
            let r = (0..word.len())
                .rev()
                .find(|&k| right.contains(word[k].vertex) && self.right_movable(&word, k));
            if let Some(k) = r {
                right_part.push(word.remove(k));
                continue;
            }
            break;
        }
        right_part.reverse();
        (
            self.reduce(&left_part),
            self.element_from_reduced(word),
            self.reduce(&right_part),
        )
    }

    /// `g ∈ ⟨G_A⟩·⟨G_B⟩`.
    pub fn in_double_coset_product(&self, g: &GroupElement, left: VertexSet, right: VertexSet) -> bool {
        self.double_coset_split(g, left, right).1.is_identity()
    }

    pub fn parabolic(&self, vertices: VertexSet, conjugator: &GroupElement) -> ParabolicRef {
        ParabolicRef {
            vertices,
            conjugator: self.coset_rep(conjugator, vertices),
        }
    }

    /// `g ∈ w⟨G_S⟩w⁻¹`, decided as `supp(w⁻¹·g·w) ⊆ S`.
    pub fn parabolic_member(&self, g: &GroupElement, p: &ParabolicRef) -> bool {
        let wi = self.inv(&p.conjugator);
        let x = self.mul_all([&wi, g, &p.conjugator]);
        self.support(&x).is_subset(p.vertices)
    }

    /// `{i − 1, i, i + 1}`, the defining set of the maximal parabolic
    /// subgroups `⟨G_{i−1},G_i,G_{i+1}⟩`.
    pub fn closed_star(&self, i: usize) -> VertexSet {
        [self.shift(i, -1), i, self.shift(i, 1)].into_iter().collect()
    }

    /// Elements reachable from the identity by multiplying, on either side,
    /// by generators or their inverses while staying within syllable length
    /// `max_len`. Single syllables discovered along the way join the
    /// generating set. Generators longer than `max_len` are ignored.
    /// Returns the closure in shortlex order.
    pub fn bounded_closure(&self, gens: &[GroupElement], max_len: usize) -> Vec<GroupElement> {
        let mut out = self.closure_search(gens, max_len, &[]).0;
        out.sort();
        out
    }

    /// Whether [`Presentation::bounded_closure`] contains every target;
    /// stops as soon as it does.
    pub fn closure_reaches(&self, gens: &[GroupElement], max_len: usize, targets: &[GroupElement]) -> bool {
        self.closure_search(gens, max_len, targets).1
    }

    /// Whether [`Presentation::bounded_closure`] has more than `cap`
    /// elements; stops once it does.
    pub fn closure_size_exceeds(&self, gens: &[GroupElement], max_len: usize, cap: usize) -> bool {
        self.closure_search_capped(gens, max_len, &[], cap).0.len() > cap
    }

    fn closure_search(
        &self,
        gens: &[GroupElement],
        max_len: usize,
        targets: &[GroupElement],
    ) -> (Vec<GroupElement>, bool) {
        self.closure_search_capped(gens, max_len, targets, usize::MAX)
    }

    fn closure_search_capped(
        &self,
        gens: &[GroupElement],
        max_len: usize,
        targets: &[GroupElement],
        cap: usize,
    ) -> (Vec<GroupElement>, bool) {
        let mut set: HashSet<GroupElement> = HashSet::from([GroupElement::identity()]);
        let mut elems = vec![GroupElement::identity()];
        let mut generators: Vec<GroupElement> = Vec::new();
        let add_gen = |g: GroupElement, generators: &mut Vec<GroupElement>| {
            if g.len() <= max_len && !g.is_identity() && !generators.contains(&g) {
                generators.push(g);
            }
        };
        for g in gens {
            add_gen(g.clone(), &mut generators);
            add_gen(self.inv(g), &mut generators);
        }
        let hit = |set: &HashSet<GroupElement>| !targets.is_empty() && targets.iter().all(|t| set.contains(t));
        let (mut done_elems, mut done_gens) = (0, 0);
        loop {
            if hit(&set) {
                return (elems, true);
            }
            let (ne, ng) = (elems.len(), generators.len());
            if (done_elems == ne && done_gens == ng) || ne > cap {
                break;
            }
            // products not tried yet: new elements with all generators, old
            // elements with new generators
            let jobs: Vec<(usize, usize)> = (done_elems..ne)
                .flat_map(|e| (0..ng).map(move |g| (e, g)))
                .chain((0..done_elems).flat_map(|e| (done_gens..ng).map(move |g| (e, g))))
                .collect();
            let found: Vec<GroupElement> = jobs
                .par_iter()
                .flat_map_iter(|&(e, g)| {
                    let (a, s) = (&elems[e], &generators[g]);
                    [self.mul(a, s), self.mul(s, a)]
                })
                .filter(|c| c.len() <= max_len)
                .collect();
            done_elems = ne;
            done_gens = ng;
            for c in found {
                if set.insert(c.clone()) {
                    if c.len() == 1 {
                        add_gen(c.clone(), &mut generators);
                    }
                    elems.push(c);
                }
            }
        }
        let reached = hit(&set);
        (elems, reached)
    }

    /// `S` together with every vertex adjacent to all of `S`.
    pub fn parabolic_normalizer(&self, set: VertexSet) -> VertexSet {
        let n = self.n();
        let mut out = set;
        for v in 0..n {
            if set.iter().all(|s| self.adjacent(s, v)) {
                out.insert(v);
            }
        }
        out
    }

    /// Conjugates `g` towards a shortest form: while some syllable that can
    /// be shuffled to the front shares its vertex with a different syllable
    /// that can be shuffled to the back, conjugate by the front one (lowest
    /// vertex first). Returns `(core, conj)` with `g = conj·core·conj⁻¹`.
    pub fn cyclic_reduce(&self, g: &GroupElement) -> (GroupElement, GroupElement) {
        let mut core = g.clone();
        let mut conj = GroupElement::identity();
        loop {
            let w = &core.word;
            let mut best: Option<Syllable> = None;
            for i in 0..w.len() {
                if !self.left_movable(w, i) {
                    continue;
                }
                let paired = (0..w.len())
                    .any(|j| j != i && w[j].vertex == w[i].vertex && self.right_movable(w, j));
                if paired && best.is_none_or(|b| w[i].vertex < b.vertex) {
                    best = Some(w[i]);
                }
            }
            let Some(x) = best else { break };
            let x = self.from_syllable(x);
            let xi = self.inv(&x);
            core = self.mul_all([&xi, &core, &x]);
            conj = self.mul(&conj, &x);
        }
        (core, conj)
    }

    /// All elements of syllable length at most `max_len`, shortlex order.
    pub fn enumerate_ball_elements(&self, max_len: usize) -> Result<Vec<GroupElement>> {
        self.enumerate_ball_in(VertexSet::full(self.n()), max_len)
    }

    /// Elements of `⟨G_S⟩` of syllable length at most `max_len`.
    pub fn enumerate_ball_in(&self, set: VertexSet, max_len: usize) -> Result<Vec<GroupElement>> {
        for v in set.iter().filter(|&v| v < self.n()) {
            if !self.groups[v].is_finite() {
                return Err(Error::InfiniteGroup(self.groups[v].name().to_string()));
            }
        }
        let gens = self.syllables_in(set)?;
        let mut all = vec![GroupElement::identity()];
        let mut frontier = vec![GroupElement::identity()];
        for len in 1..=max_len {
            let mut next: Vec<GroupElement> = frontier
                .par_iter()
                .flat_map_iter(|w| {
                    gens.iter().filter_map(move |s| {
                        let last = w.word.last();
                        // only extend by syllables that cannot merge with the tail
                        if last.is_some_and(|t| t.vertex == s.vertex) {
                            return None;
                        }
                        let x = self.mul(w, &GroupElement { word: vec![*s] });
                        (x.len() == len).then_some(x)
                    })
                })
                .collect::<HashSet<_>>()
                .into_iter()
                .collect();
            next.sort();
            all.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(all)
    }

    /// Number of elements of each syllable length up to `max_len`, without
    /// materializing them: `counts[k]` for `k = 0..=max_len`.
    ///
    /// Counts canonical words with an automaton. For each vertex `x` the
    /// state records which neighbours of `x` occur in the longest suffix
    /// commuting with `x`, and whether that suffix is preceded by `x`
    /// itself. Appending `x` is allowed iff it would not merge with an
    /// earlier `x` and would not move left past a larger vertex.
    pub fn ball_growth(&self, max_len: usize) -> Result<Vec<u128>> {
        use std::collections::HashMap;
        self.require_finite()?;
        let n = self.n();
        let sizes: Vec<u128> = self
            .groups
            .iter()
            .map(|g| g.order().unwrap_or(1) as u128 - 1)
            .collect();
        // per vertex: bit 0 = left neighbour seen, bit 1 = right neighbour
        // seen, bit 2 = suffix is blocked by the vertex itself
        let mut states: HashMap<Vec<u8>, u128> = HashMap::new();
        states.insert(vec![0; n], 1);
        let mut counts = vec![1u128];
        for _ in 1..=max_len {
            let mut next: HashMap<Vec<u8>, u128> = HashMap::new();
            for (state, c) in &states {
                for y in 0..n {
                    let s = state[y];
                    let left = self.shift(y, -1);
                    let right = self.shift(y, 1);
                    let bigger_seen = (s & 1 == 1 && left > y) || (s & 2 == 2 && right > y);
                    if s & 4 == 4 || bigger_seen {
                        continue;
                    }
                    let mut t = state.clone();
                    for (x, tx) in t.iter_mut().enumerate() {
                        if x == self.shift(y, 1) {
                            *tx |= 1;
                        } else if x == self.shift(y, -1) {
                            *tx |= 2;
                        } else {
                            *tx = if x == y { 4 } else { 0 };
                        }
                    }
                    *next.entry(t).or_insert(0) += c * sizes[y];
                }
            }
            counts.push(next.values().sum());
            states = next;
        }
        Ok(counts)
    }

    /// Parses `v3:2 v1:1`: element id 2 at vertex 3, then id 1 at vertex 1.
    /// Vertices are numbered `1..=n`.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Syllable>> {
        text.split_whitespace()
            .map(|tok| {
                let rest = tok
                    .strip_prefix('v')
                    .ok_or_else(|| Error::Parse(format!("syllable {tok:?} must start with 'v'")))?;
                let (v, e) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("syllable {tok:?} is missing ':'")))?;
                let v: usize = v
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad vertex in {tok:?}")))?;
                let e: Elem = e
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad element in {tok:?}")))?;
                if v == 0 || v > self.n() {
                    return Err(Error::Parse(format!(
                        "vertex {v} in {tok:?} out of range 1..={}",
                        self.n()
                    )));
                }
                self.syllable(v - 1, e)
            })
            .collect()
    }

    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        Ok(self.reduce(&self.parse_word(text)?))
    }

    /// Draws a raw word of the given length, uniformly over non-identity
    /// syllables at each position.
    pub fn random_word<R: Rng>(&self, rng: &mut R, len: usize) -> Vec<Syllable> {
        (0..len)
            .map(|_| {
                let v = rng.gen_range(0..self.n());
                let g = &self.groups[v];
                let e = match g.order() {
                    Some(m) => rng.gen_range(1..m as Elem),
                    None => {
                        let k = rng.gen_range(1..=3);
                        if rng.gen_bool(0.5) {
                            k
                        } else {
                            -k
                        }
                    }
                };
                Syllable::new(v, e)
            })
            .collect()
    }

    /// Draws a word in which consecutive syllables sit on vertices that are
    /// neither equal nor adjacent. Such words admit no move at all, so they
    /// are their own unique reduced form.
    pub fn random_rigid_word<R: Rng>(&self, rng: &mut R, len: usize) -> Vec<Syllable> {
        let mut word: Vec<Syllable> = Vec::with_capacity(len);
        while word.len() < len {
            let s = self.random_word(rng, 1)[0];
            let ok = word
                .last()
                .is_none_or(|t| t.vertex != s.vertex && !self.adjacent(t.vertex, s.vertex));
            if ok {
                word.push(s);
            }
        }
        word
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R, max_len: usize) -> GroupElement {
        let len = rng.gen_range(0..=max_len);
        let w = self.random_word(rng, len);
        self.reduce(&w)
    }
}

/// Prints a word in the `vK:E` syntax with 1-based vertices.
pub fn format_word(word: &[Syllable]) -> String {
    let mut out = String::new();
    for (k, s) in word.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        out.push_str(&format!("v{}:{}", s.vertex + 1, s.elem));
    }
    out
}

/// Serialized as its word string; reading one back needs a presentation.
impl Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(&self.word))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::LocalGroup;

    fn z2() -> Presentation {
        Presentation::uniform(5, LocalGroup::cyclic(2).unwrap()).unwrap()
    }

    fn z3() -> Presentation {
        Presentation::uniform(5, LocalGroup::cyclic(3).unwrap()).unwrap()
    }

    fn a(p: &Presentation, v: usize) -> GroupElement {
        p.from_syllable(Syllable::new(v - 1, 1))
    }

    fn el(p: &Presentation, s: &str) -> GroupElement {
        p.parse_element(s).unwrap()
    }

    #[test]
    fn presentation_requires_five_nontrivial_groups() {
        let g = LocalGroup::cyclic(2).unwrap();
        assert!(Presentation::uniform(4, g.clone()).is_err());
        assert!(Presentation::uniform(5, g.clone()).is_ok());
        assert!(Presentation::uniform(65, g).is_err());
    }

    #[test]
    fn reduce_examples() {
        let p = z2();
        assert!(p.reduce(&[]).is_identity());
        assert_eq!(p.parse_element("v1:1 v2:1 v1:1").unwrap(), a(&p, 2));
        let w = p.parse_word("v1:1 v3:1 v1:1 v3:1").unwrap();
        let r = p.reduce(&w);
        assert_eq!(r.syllables(), &w[..]);
        assert_eq!(r.len(), 4);
    }

    #[test]
    fn canonical_form_prefers_smaller_vertices_first() {
        let p = z2();
        // 2 and 1 commute, so v2 v1 becomes v1 v2
        assert_eq!(el(&p, "v2:1 v1:1").to_string(), "v1:1 v2:1");
        // 1 and 3 do not commute
        assert_eq!(el(&p, "v3:1 v1:1").to_string(), "v3:1 v1:1");
        // 5 and 1 are adjacent in C_5
        assert_eq!(el(&p, "v5:1 v1:1").to_string(), "v1:1 v5:1");
    }

    #[test]
    fn mul_and_inv() {
        let p = z2();
        assert_eq!(p.mul(&a(&p, 1), &a(&p, 3)).to_string(), "v1:1 v3:1");
        let g = el(&p, "v1:1 v3:1 v2:1");
        assert!(p.mul(&g, &p.inv(&g)).is_identity());
        assert_eq!(p.inv(&a(&p, 1)), a(&p, 1));

        let q = z3();
        let t = el(&q, "v1:1 v3:1");
        let ti = q.inv(&t);
        assert_eq!(ti.to_string(), "v3:2 v1:2");
        assert!(q.mul(&t, &ti).is_identity());
    }

    #[test]
    fn coset_representatives() {
        let p = z2();
        let s12: VertexSet = [0, 1].into_iter().collect();
        assert!(p.coset_rep(&GroupElement::identity(), s12).is_identity());
        assert_eq!(p.coset_rep(&el(&p, "v3:1 v2:1"), s12), a(&p, 3));
        // v2 blocks v1 from reaching the end only if they don't commute; they do
        assert_eq!(p.coset_rep(&el(&p, "v4:1 v1:1 v2:1"), s12), a(&p, 4));
        assert_eq!(
            p.coset_rep(&el(&p, "v1:1 v3:1"), s12).to_string(),
            "v1:1 v3:1"
        );
    }

    #[test]
    fn parabolic_membership() {
        let p = z2();
        let s12: VertexSet = [0, 1].into_iter().collect();
        let standard = p.parabolic(s12, &GroupElement::identity());
        assert!(p.parabolic_member(&GroupElement::identity(), &standard));
        assert!(p.parabolic_member(&a(&p, 1), &standard));
        let conj = p.parabolic(s12, &el(&p, "v3:1"));
        assert!(!p.parabolic_member(&a(&p, 1), &conj));
        let shifted = p.parabolic(s12, &a(&p, 1));
        assert!(!p.parabolic_member(&a(&p, 3), &shifted));
        assert_eq!(shifted.conjugator, GroupElement::identity());
    }

    #[test]
    fn normalizers() {
        let p = z2();
        let n = p.n();
        for i in 0..n {
            let expect: VertexSet = [p.shift(i, -1), i, p.shift(i, 1)].into_iter().collect();
            assert_eq!(p.parabolic_normalizer(VertexSet::single(i)), expect);
            let edge: VertexSet = [i, p.shift(i, 1)].into_iter().collect();
            assert_eq!(p.parabolic_normalizer(edge), edge);
        }
        assert_eq!(p.parabolic_normalizer(VertexSet::EMPTY), VertexSet::full(n));
    }

    #[test]
    fn cyclic_reduction() {
        let p = z2();
        let (core, conj) = p.cyclic_reduce(&a(&p, 2));
        assert_eq!(core, a(&p, 2));
        assert!(conj.is_identity());
        let (core, conj) = p.cyclic_reduce(&el(&p, "v1:1 v3:1 v1:1"));
        assert_eq!(core, a(&p, 3));
        assert_eq!(conj, a(&p, 1));
    }

    #[test]
    fn ball_enumeration_counts() {
        let p = z2();
        assert_eq!(p.enumerate_ball_elements(0).unwrap(), vec![GroupElement::identity()]);
        assert_eq!(p.enumerate_ball_elements(1).unwrap().len(), 6);
        // 5 ordered-distinct pairs commute and are counted once: 20 − 5 = 15
        assert_eq!(p.enumerate_ball_elements(2).unwrap().len(), 21);
        let p = Presentation::new(vec![
            LocalGroup::cyclic(2).unwrap(),
            LocalGroup::integers(),
            LocalGroup::cyclic(2).unwrap(),
            LocalGroup::cyclic(2).unwrap(),
            LocalGroup::cyclic(2).unwrap(),
        ])
        .unwrap();
        assert!(matches!(
            p.enumerate_ball_elements(1),
            Err(Error::InfiniteGroup(_))
        ));
    }

    #[test]
    fn growth_series_matches_enumeration() {
        for p in [z2(), z3()] {
            let elems = p.enumerate_ball_elements(4).unwrap();
            let growth = p.ball_growth(4).unwrap();
            for k in 0..=4 {
                let count = elems.iter().filter(|g| g.len() == k).count() as u128;
                assert_eq!(growth[k], count, "length {k}");
            }
        }
    }

    #[test]
    fn double_coset_split_recombines() {
        let p = z3();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let a_set: VertexSet = [0, 1, 2].into_iter().collect();
        let b_set: VertexSet = [1, 2, 3].into_iter().collect();
        for _ in 0..200 {
            let g = p.random_element(&mut rng, 8);
            let (l, m, r) = p.double_coset_split(&g, a_set, b_set);
            assert_eq!(p.mul_all([&l, &m, &r]), g);
            assert!(p.support(&l).is_subset(a_set));
            assert!(p.support(&r).is_subset(b_set));
        }
    }

    #[test]
    fn bounded_closure_of_a_vertex_group_pair() {
        let p = z3();
        let gens = vec![a(&p, 1), a(&p, 2)];
        let c = p.bounded_closure(&gens, 2);
        // ⟨G_1,G_2⟩ = Z/3 × Z/3
        assert_eq!(c.len(), 9);
        let gens = vec![a(&p, 1), a(&p, 3)];
        let c = p.bounded_closure(&gens, 2);
        // free product Z/3 * Z/3 up to length 2: 1 + 4 + 8
        assert_eq!(c.len(), 13);
    }

    #[test]
    fn parse_errors() {
        let p = z2();
        assert!(p.parse_word("v0:1").is_err());
        assert!(p.parse_word("v6:1").is_err());
        assert!(p.parse_word("v1:2").is_err());
        assert!(p.parse_word("x1:1").is_err());
        assert!(p.parse_word("v1").is_err());
        assert_eq!(p.parse_word("").unwrap(), vec![]);
    }

    use rand::SeedableRng;
}
