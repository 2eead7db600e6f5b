//! Automorphisms of a cyclic product in the form `ι(g)∘λ`.
//!
//! A local automorphism `λ` is a symmetry `σ` of the cycle together with
//! isomorphisms `φ_i : G_i → G_σ(i)`; it maps the syllable `(i, s)` to
//! `(σ(i), φ_i(s))`. Every automorphism of `C_n𝒢` (`n ≥ 5`) is an inner one
//! composed with a local one, in exactly one way.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::davis::{pair_set, ComplexBall};
use crate::error::{Error, Result};
use crate::local::{Elem, LocalIso, DEFAULT_ORDER_CAP};
use crate::report::AuditReport;
use crate::walls::treewall_of_edge;
use crate::word::{GroupElement, Presentation, Syllable, VertexSet};

/// A symmetry of the cycle `C_n`, stored as the image of each vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleSymmetry {
    perm: Vec<usize>,
}

impl CycleSymmetry {
    pub fn identity(n: usize) -> Self {
        CycleSymmetry { perm: (0..n).collect() }
    }

    /// `i ↦ i + k`.
    pub fn rotation(n: usize, k: usize) -> Self {
        CycleSymmetry {
            perm: (0..n).map(|i| (i + k) % n).collect(),
        }
    }

    /// `i ↦ k − i`.
    pub fn reflection(n: usize, k: usize) -> Self {
        CycleSymmetry {
            perm: (0..n).map(|i| (k + n - i) % n).collect(),
        }
    }

    /// Rotations by `0..n`, then reflections `i ↦ k − i` for `k` in `0..n`.
    pub fn dihedral(n: usize) -> Vec<Self> {
        (0..n)
            .map(|k| Self::rotation(n, k))
            .chain((0..n).map(|k| Self::reflection(n, k)))
            .collect()
    }

    pub fn from_perm(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let s = CycleSymmetry { perm };
        if n < 5 || !s.is_dihedral() {
            return Err(Error::NotAnAutomorphism(format!(
                "{:?} is not a symmetry of the {n}-cycle",
                s.perm
            )));
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Whether the map is a bijection sending cycle edges to cycle edges.
    pub fn is_dihedral(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        for &j in &self.perm {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return false;
            }
        }
        (0..n).all(|i| {
            let (a, b) = (self.perm[i], self.perm[(i + 1) % n]);
            (a + 1) % n == b || (b + 1) % n == a
        })
    }

    /// Rotations send `i + 1` to the successor of `σ(i)`.
    pub fn preserves_orientation(&self) -> bool {
        let n = self.n();
        (self.perm[0] + 1) % n == self.perm[1 % n]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &CycleSymmetry) -> CycleSymmetry {
        CycleSymmetry {
            perm: other.perm.iter().map(|&i| self.perm[i]).collect(),
        }
    }

    pub fn inverse(&self) -> CycleSymmetry {
        let mut perm = vec![0; self.n()];
        for (i, &j) in self.perm.iter().enumerate() {
            perm[j] = i;
        }
        CycleSymmetry { perm }
    }

    /// Index `j` with `σ{i, i+1} = {j, j+1}`.
    pub fn image_of_pair(&self, i: usize) -> usize {
        let n = self.n();
        if self.preserves_orientation() {
            self.perm[i]
        } else {
            self.perm[(i + 1) % n]
        }
    }
}

/// The symmetries of the cycle that send each vertex group to an
/// isomorphic one.
pub fn symmetries(p: &Presentation) -> Result<Vec<CycleSymmetry>> {
    let n = p.n();
    let mut iso = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            iso[i][j] = p.group(i).is_isomorphic_to(p.group(j), DEFAULT_ORDER_CAP)?;
        }
    }
    Ok(CycleSymmetry::dihedral(n)
        .into_iter()
        .filter(|s| (0..n).all(|i| iso[i][s.apply(i)]))
        .collect())
}

/// A local automorphism: cycle symmetry plus `φ_i : G_i → G_σ(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalAut {
    pub sigma: CycleSymmetry,
    pub isos: Vec<LocalIso>,
}

impl LocalAut {
    pub fn identity(p: &Presentation) -> Self {
        LocalAut {
            sigma: CycleSymmetry::identity(p.n()),
            isos: p.groups().iter().map(LocalIso::identity).collect(),
        }
    }

    pub fn new(p: &Presentation, sigma: CycleSymmetry, isos: Vec<LocalIso>) -> Result<Self> {
        let a = LocalAut { sigma, isos };
        a.validate(p)?;
        Ok(a)
    }

    pub fn validate(&self, p: &Presentation) -> Result<()> {
        let n = p.n();
        if self.sigma.n() != n || self.isos.len() != n || !self.sigma.is_dihedral() {
            return Err(Error::NotAnAutomorphism(format!(
                "cycle map {:?} does not fit C{n}",
                self.sigma.perm
            )));
        }
        for (i, f) in self.isos.iter().enumerate() {
            let (src, dst) = (p.group(i), p.group(self.sigma.apply(i)));
            if !f.is_isomorphism(src, dst) {
                return Err(Error::NotAnAutomorphism(format!(
                    "map at vertex {} is not an isomorphism {src} → {dst}",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.is_identity() && self.isos.iter().all(LocalIso::is_identity)
    }

    pub fn apply_syllable(&self, s: Syllable) -> Syllable {
        Syllable::new(self.sigma.apply(s.vertex), self.isos[s.vertex].apply(s.elem))
    }

    pub fn apply(&self, p: &Presentation, x: &GroupElement) -> GroupElement {
        let word: Vec<Syllable> = x.syllables().iter().map(|&s| self.apply_syllable(s)).collect();
        p.reduce(&word)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LocalAut) -> LocalAut {
        LocalAut {
            sigma: self.sigma.compose(&other.sigma),
            isos: (0..other.isos.len())
                .map(|i| self.isos[other.sigma.apply(i)].compose(&other.isos[i]))
                .collect(),
        }
    }

    pub fn inverse(&self) -> LocalAut {
        let n = self.isos.len();
        let mut isos = vec![LocalIso::Sign(1); n];
        for i in 0..n {
            isos[self.sigma.apply(i)] = self.isos[i].inverse();
        }
        LocalAut {
            sigma: self.sigma.inverse(),
            isos,
        }
    }
}

/// Every local automorphism, ordered by symmetry then by isomorphisms.
pub fn enumerate_loc(p: &Presentation) -> Result<Vec<LocalAut>> {
    p.require_finite()?;
    let n = p.n();
    let mut out = Vec::new();
    for sigma in symmetries(p)? {
        let choices = (0..n)
            .map(|i| p.group(i).isomorphisms_to(p.group(sigma.apply(i)), DEFAULT_ORDER_CAP))
            .collect::<Result<Vec<_>>>()?;
        for isos in choices.into_iter().multi_cartesian_product() {
            out.push(LocalAut {
                sigma: sigma.clone(),
                isos,
            });
        }
    }
    Ok(out)
}

pub fn random_local<R: Rng>(p: &Presentation, rng: &mut R) -> Result<LocalAut> {
    let syms = symmetries(p)?;
    let sigma = syms.choose(rng).expect("the identity is a symmetry").clone();
    let isos = (0..p.n())
        .map(|i| {
            let options = p.group(i).isomorphisms_to(p.group(sigma.apply(i)), DEFAULT_ORDER_CAP)?;
            Ok(options.choose(rng).expect("σ preserves isomorphism classes").clone())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalAut { sigma, isos })
}

/// The automorphism `x ↦ g·λ(x)·g⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AutElement {
    pub inner: GroupElement,
    pub local: LocalAut,
}

impl AutElement {
    pub fn identity(p: &Presentation) -> Self {
        AutElement {
            inner: GroupElement::identity(),
            local: LocalAut::identity(p),
        }
    }

    pub fn inner(p: &Presentation, g: GroupElement) -> Self {
        AutElement {
            inner: g,
            local: LocalAut::identity(p),
        }
    }

    pub fn pure_local(local: LocalAut) -> Self {
        AutElement {
            inner: GroupElement::identity(),
            local,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.inner.is_identity() && self.local.is_identity()
    }

    pub fn apply(&self, p: &Presentation, x: &GroupElement) -> GroupElement {
        p.conjugate(&self.inner, &self.local.apply(p, x))
    }

    /// `self ∘ other`: `ι(g)λ ι(h)μ = ι(g·λ(h)) λμ`.
    pub fn compose(&self, p: &Presentation, other: &AutElement) -> AutElement {
        AutElement {
            inner: p.mul(&self.inner, &self.local.apply(p, &other.inner)),
            local: self.local.compose(&other.local),
        }
    }

    /// `(ι(g)λ)⁻¹ = ι(λ⁻¹(g⁻¹)) λ⁻¹`.
    pub fn inverse(&self, p: &Presentation) -> AutElement {
        let li = self.local.inverse();
        AutElement {
            inner: li.apply(p, &p.inv(&self.inner)),
            local: li,
        }
    }

    /// Images of the fixed generators of every vertex group.
    pub fn generator_images(&self, p: &Presentation) -> Vec<Vec<GroupElement>> {
        (0..p.n())
            .map(|i| {
                p.group(i)
                    .generators()
                    .into_iter()
                    .map(|s| self.apply(p, &p.from_syllable(Syllable::new(i, s))))
                    .collect()
            })
            .collect()
    }

    /// Image of the vertex `rep·⟨G_i,G_{i+1}⟩` of `X`, as `(index, rep)`.
    pub fn act_vertex(&self, p: &Presentation, index: usize, rep: &GroupElement) -> (usize, GroupElement) {
        let j = self.local.sigma.image_of_pair(index);
        let image = p.mul(&self.inner, &self.local.apply(p, rep));
        (j, p.coset_rep(&image, pair_set(p, j)))
    }

    /// Image of the edge `rep·G_label`.
    pub fn act_edge(&self, p: &Presentation, label: usize, rep: &GroupElement) -> (usize, GroupElement) {
        let j = self.local.sigma.apply(label);
        let image = p.mul(&self.inner, &self.local.apply(p, rep));
        (j, p.coset_rep(&image, VertexSet::single(j)))
    }

    /// Image of the polygon `rep·P`.
    pub fn act_polygon(&self, p: &Presentation, rep: &GroupElement) -> GroupElement {
        p.mul(&self.inner, &self.local.apply(p, rep))
    }

    pub fn to_data(&self) -> AutElementData {
        AutElementData {
            inner: self.inner.to_string(),
            sigma: self.local.sigma.perm.iter().map(|v| v + 1).collect(),
            isos: self.local.isos.clone(),
        }
    }

    pub fn from_data(p: &Presentation, data: &AutElementData) -> Result<Self> {
        let perm = data
            .sigma
            .iter()
            .map(|&v| {
                v.checked_sub(1)
                    .ok_or_else(|| Error::Parse("cycle labels start at 1".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        if perm.len() != p.n() {
            return Err(Error::Parse(format!("sigma has {} entries, expected {}", perm.len(), p.n())));
        }
        let sigma = CycleSymmetry::from_perm(perm)?;
        let local = LocalAut::new(p, sigma, data.isos.clone())?;
        Ok(AutElement {
            inner: p.parse_element(&data.inner)?,
            local,
        })
    }
}

/// Serialized automorphism; cycle labels are 1-based like word syllables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutElementData {
    pub inner: String,
    pub sigma: Vec<usize>,
    pub isos: Vec<LocalIso>,
}

impl fmt::Display for AutElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sigma: Vec<String> = self.local.sigma.perm.iter().map(|v| (v + 1).to_string()).collect();
        write!(f, "ι({})·λ[σ=({})]", self.inner, sigma.join(" "))
    }
}

pub fn random_aut<R: Rng>(p: &Presentation, rng: &mut R, max_inner: usize) -> Result<AutElement> {
    Ok(AutElement {
        inner: p.random_element(rng, max_inner),
        local: random_local(p, rng)?,
    })
}

/// Recovers `ι(g)∘λ` from the images of the fixed generators of each
/// vertex group (`images[i][k]` is the image of the `k`-th generator of
/// `G_i`).
///
/// Each image is cyclically reduced to a single syllable, which fixes
/// `σ(i)` and a coset `w_i⟨G_{σ(i)−1},G_σ(i),G_{σ(i)+1}⟩` of conjugators.
/// The cosets are intersected in order `i = 0..n−1`; for `n ≥ 5` the
/// intersection is a single element `g`, after which `φ_i` is read from
/// `g⁻¹·image·g`.
pub fn aut_decompose(p: &Presentation, images: &[Vec<GroupElement>]) -> Result<AutElement> {
    let n = p.n();
    let reject = |msg: String| Err(Error::NotAnAutomorphism(msg));
    if images.len() != n {
        return reject(format!("expected images for {n} vertex groups, got {}", images.len()));
    }
    let mut sigma = vec![0; n];
    let mut cosets: Vec<(GroupElement, VertexSet)> = Vec::with_capacity(n);
    for (i, imgs) in images.iter().enumerate() {
        let gens = p.group(i).generators();
        if imgs.len() != gens.len() {
            return reject(format!(
                "G{} has {} generators but {} images were given",
                i + 1,
                gens.len(),
                imgs.len()
            ));
        }
        let mut target: Option<(usize, GroupElement)> = None;
        for (k, img) in imgs.iter().enumerate() {
            let (core, conj) = p.cyclic_reduce(img);
            if core.len() != 1 {
                return reject(format!(
                    "image {img} of generator {} of G{} is not conjugate to a syllable",
                    gens[k],
                    i + 1
                ));
            }
            let v = core.syllables()[0].vertex;
            let w = p.coset_rep(&conj, p.closed_star(v));
            match &target {
                None => target = Some((v, w)),
                Some((v0, w0)) if *v0 == v && *w0 == w => {}
                Some(_) => {
                    return reject(format!(
                        "images of G{} do not lie in one conjugate of a vertex group (generator {} ↦ {img})",
                        i + 1,
                        gens[k]
                    ))
                }
            }
        }
        let (v, w) = target.expect("vertex groups are non-trivial");
        sigma[i] = v;
        cosets.push((w, p.closed_star(v)));
    }
    let sigma = CycleSymmetry::from_perm(sigma)?;

    let (mut c, mut a) = cosets[0].clone();
    for (i, (w, b)) in cosets.iter().enumerate().skip(1) {
        let q = p.mul(&p.inv(&c), w);
        let (left, middle, _) = p.double_coset_split(&q, a, *b);
        if !middle.is_identity() {
            return reject(format!(
                "no single conjugator serves G1..G{}; residue {middle}",
                i + 1
            ));
        }
        c = p.mul(&c, &left);
        a = a.intersection(*b);
    }
    if !a.is_empty() {
        return Err(Error::Inconclusive(format!(
            "conjugator only determined modulo {a:?}"
        )));
    }
    let g = c;
    let gi = p.inv(&g);

    let mut isos = Vec::with_capacity(n);
    for (i, imgs) in images.iter().enumerate() {
        let group = p.group(i);
        let j = sigma.apply(i);
        let mut values = Vec::with_capacity(imgs.len());
        for (k, img) in imgs.iter().enumerate() {
            let s = p.mul_all([&gi, img, &g]);
            match s.syllables() {
                [syl] if syl.vertex == j => values.push(syl.elem),
                _ => {
                    return reject(format!(
                        "generator {} of G{} maps outside the conjugate of G{}",
                        group.generators()[k],
                        i + 1,
                        j + 1
                    ))
                }
            }
        }
        let iso = match group.order() {
            Some(m) => {
                let mut map = vec![0u32; m];
                for (x, y) in group.generators().into_iter().zip(values) {
                    map[x as usize] = y as u32;
                }
                LocalIso::Map(map)
            }
            None => LocalIso::Sign(values[0]),
        };
        isos.push(iso);
    }
    let local = LocalAut::new(p, sigma, isos)?;
    let result = AutElement { inner: g, local };
    if result.generator_images(p) != images {
        return reject("recovered automorphism does not reproduce the images".into());
    }
    Ok(result)
}

/// Decomposes `samples` random automorphisms from their generator images
/// and checks exact recovery.
pub fn decompose_roundtrip_audit<R: Rng>(
    p: &Presentation,
    samples: usize,
    max_inner: usize,
    rng: &mut R,
) -> Result<AuditReport> {
    let mut report = AuditReport::new();
    for _ in 0..samples {
        let a = random_aut(p, rng, max_inner)?;
        let images = a.generator_images(p);
        match aut_decompose(p, &images) {
            Ok(b) => report.expect(a == b, || (a.to_string(), format!("recovered {b}"))),
            Err(e) => report.fail(a.to_string(), e.to_string()),
        }
    }
    Ok(report)
}

/// Group laws of composition, checked extensionally on random elements.
pub fn group_law_audit<R: Rng>(p: &Presentation, samples: usize, rng: &mut R) -> Result<AuditReport> {
    let mut report = AuditReport::new();
    let id = AutElement::identity(p);
    for _ in 0..samples {
        let (a, b, c) = (random_aut(p, rng, 2)?, random_aut(p, rng, 2)?, random_aut(p, rng, 2)?);
        let xs: Vec<GroupElement> = (0..4).map(|_| p.random_element(rng, 3)).collect();
        let (x, y) = (&xs[0], &xs[1]);
        report.expect(a.apply(p, &p.mul(x, y)) == p.mul(&a.apply(p, x), &a.apply(p, y)), || {
            (a.to_string(), format!("not multiplicative on {x}, {y}"))
        });
        let ab = a.compose(p, &b);
        report.expect(xs.iter().all(|x| ab.apply(p, x) == a.apply(p, &b.apply(p, x))), || {
            (format!("{a} ∘ {b}"), "composition disagrees with applying in turn".into())
        });
        let left = ab.compose(p, &c);
        let right = a.compose(p, &b.compose(p, &c));
        report.expect(left == right, || (format!("{a}, {b}, {c}"), "composition is not associative".into()));
        report.expect(a.compose(p, &a.inverse(p)) == id && a.inverse(p).compose(p, &a) == id, || {
            (a.to_string(), "inverse fails".into())
        });
        report.expect(a.compose(p, &id) == a && id.compose(p, &a) == a, || (a.to_string(), "identity fails".into()));
        if !a.is_identity() {
            let moved = a
                .generator_images(p)
                .iter()
                .enumerate()
                .any(|(i, imgs)| {
                    imgs.iter()
                        .zip(p.group(i).generators())
                        .any(|(img, s)| *img != p.from_syllable(Syllable::new(i, s)))
                });
            report.expect(moved, || (a.to_string(), "fixes every generator".into()));
        }
    }
    Ok(report)
}

/// No non-identity local automorphism agrees with an inner automorphism
/// on all generators.
pub fn inn_loc_audit(p: &Presentation, loc: &[LocalAut], inners: &[GroupElement]) -> AuditReport {
    let gens: Vec<GroupElement> = p
        .all_syllables()
        .expect("finite presentation")
        .into_iter()
        .map(|s| p.from_syllable(s))
        .collect();
    let mut report = AuditReport::new();
    for g in inners {
        let inner: Vec<GroupElement> = gens.iter().map(|s| p.conjugate(g, s)).collect();
        for lam in loc {
            if lam.is_identity() && g.is_identity() {
                continue;
            }
            let same = gens.iter().zip(&inner).all(|(s, t)| lam.apply(p, s) == *t);
            report.expect(!same, || {
                (format!("g = {g}"), format!("local σ={:?} equals conjugation", lam.sigma.perm))
            });
        }
    }
    report
}

fn polygon_corners(p: &Presentation, g: &GroupElement) -> BTreeSet<(usize, GroupElement)> {
    (0..p.n()).map(|i| (i, p.coset_rep(g, pair_set(p, i)))).collect()
}

fn image_corners(p: &Presentation, a: &AutElement, corners: &BTreeSet<(usize, GroupElement)>) -> BTreeSet<(usize, GroupElement)> {
    corners.iter().map(|(i, u)| a.act_vertex(p, *i, u)).collect()
}

/// Local automorphisms fix `P`; non-trivial inner ones move it, and an
/// automorphism fixes `P` exactly when its inner part is trivial.
pub fn loc_stabilizes_p_audit(p: &Presentation, sample: &[AutElement]) -> AuditReport {
    let corners = polygon_corners(p, &GroupElement::identity());
    let mut report = AuditReport::new();
    for a in sample {
        let fixed = image_corners(p, a, &corners) == corners;
        report.expect(fixed == a.inner.is_identity(), || {
            (
                a.to_string(),
                format!("fixes P: {fixed}, inner part trivial: {}", a.inner.is_identity()),
            )
        });
    }
    report
}

/// Vertices and edges of the ball whose images stay in the ball keep
/// their incidences.
pub fn ball_action_audit(b: &ComplexBall, a: &AutElement) -> AuditReport {
    let p = b.presentation();
    let mut report = AuditReport::new();
    for (e, edge) in b.edges().iter().enumerate() {
        let (j, rep) = a.act_edge(p, edge.label, &edge.rep);
        let Some(ge) = b.edge_id(j, &rep) else {
            report.skip();
            continue;
        };
        let ends: BTreeSet<Option<usize>> = edge
            .ends
            .iter()
            .map(|&v| {
                let vx = b.vertex(v);
                let (k, r) = a.act_vertex(p, vx.index, &vx.rep);
                b.vertex_id(k, &r)
            })
            .collect();
        let expected: BTreeSet<Option<usize>> = b.edge(ge).ends.iter().map(|&v| Some(v)).collect();
        report.expect(ends == expected, || {
            (
                format!("{a} on {}", b.edge_name(e)),
                format!("ends go to {ends:?}, image edge {} has {expected:?}", b.edge_name(ge)),
            )
        });
    }
    report
}

/// The element built from determining sets: `g = g_1⋯g_m` with
/// `g_j = g_{1,j}⋯g_{n,j}` and `g_{i,j} = s_{i+2,j}·s_{i,j}`.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub element: GroupElement,
    pub determining_sets: Vec<Vec<Elem>>,
    /// The sets after padding to a common size `m`.
    pub padded: Vec<Vec<Elem>>,
    pub m: usize,
    /// All determining sets were empty, so `g` is the identity.
    pub degenerate: bool,
    /// 1-based vertex sequence of `g`.
    pub vertex_sequence: Vec<usize>,
}

pub fn acyl_witness(p: &Presentation) -> Result<Witness> {
    p.require_finite()?;
    let n = p.n();
    let sets = (0..n)
        .map(|i| p.group(i).determining_set(DEFAULT_ORDER_CAP))
        .collect::<Result<Vec<_>>>()?;
    let m = sets.iter().map(Vec::len).max().unwrap_or(0);
    let padded: Vec<Vec<Elem>> = sets
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if m == 0 {
                return Vec::new();
            }
            let fill = s.last().copied().unwrap_or_else(|| p.group(i).generators()[0]);
            let mut s = s.clone();
            s.resize(m, fill);
            s
        })
        .collect();
    let mut word = Vec::with_capacity(2 * n * m);
    for j in 0..m {
        for i in 0..n {
            let k = p.shift(i, 2);
            word.push(Syllable::new(k, padded[k][j]));
            word.push(Syllable::new(i, padded[i][j]));
        }
    }
    for pair in word.windows(2) {
        let (a, b) = (pair[0].vertex, pair[1].vertex);
        if a == b || p.adjacent(a, b) {
            return Err(Error::InvalidPresentation(format!(
                "consecutive witness syllables at vertices {} and {}",
                a + 1,
                b + 1
            )));
        }
    }
    let element = p.reduce(&word);
    if element.syllables() != word.as_slice() {
        return Err(Error::InvalidPresentation(
            "witness word is not its own reduced form".into(),
        ));
    }
    Ok(Witness {
        vertex_sequence: word.iter().map(|s| s.vertex + 1).collect(),
        element,
        determining_sets: sets,
        padded,
        m,
        degenerate: m == 0,
    })
}

/// Local automorphisms fixing `g`, computed algebraically and from the
/// action on the corners of `gP`.
#[derive(Clone, Debug, Serialize)]
pub struct FixatorReport {
    pub element: GroupElement,
    pub loc_size: usize,
    pub fixator_size: usize,
    /// Positions in [`enumerate_loc`] order.
    pub fixator: Vec<usize>,
    pub only_identity: bool,
    /// Loc elements whose algebraic and geometric verdicts differ.
    pub geometric_mismatches: Vec<usize>,
}

pub fn witness_fixator_check(p: &Presentation, g: &GroupElement) -> Result<FixatorReport> {
    let loc = enumerate_loc(p)?;
    let corners_p = polygon_corners(p, &GroupElement::identity());
    let corners_g = polygon_corners(p, g);
    let mut fixator = Vec::new();
    let mut mismatches = Vec::new();
    for (k, lam) in loc.iter().enumerate() {
        let algebraic = lam.apply(p, g) == *g;
        let a = AutElement::pure_local(lam.clone());
        let geometric = image_corners(p, &a, &corners_p) == corners_p && image_corners(p, &a, &corners_g) == corners_g;
        if algebraic {
            fixator.push(k);
        }
        if algebraic != geometric {
            mismatches.push(k);
        }
    }
    let only_identity = fixator.len() == 1 && loc[fixator[0]].is_identity();
    Ok(FixatorReport {
        element: g.clone(),
        loc_size: loc.len(),
        fixator_size: fixator.len(),
        fixator,
        only_identity,
        geometric_mismatches: mismatches,
    })
}

/// A piece of the axis of `g_i = s_{i−1}·s_{i+1}` inside the wall through
/// the side `G_i` of `P`.
#[derive(Clone, Debug, Serialize)]
pub struct AxisSegment {
    pub label: usize,
    pub translation: GroupElement,
    /// Edge ids along the path, in order.
    pub edges: Vec<usize>,
    /// Vertex ids along the path, in order.
    pub vertices: Vec<usize>,
}

/// `⋃_{|j|≤k} g_i^j(e_i ∪ e_i′)` with `e_i = G_i` and `e_i′ = s_{i+1}⁻¹·G_i`.
/// `s_{i±1}` is the first generator of `G_{i±1}`.
pub fn axis_segment(b: &ComplexBall, i: usize, k: usize) -> Result<AxisSegment> {
    let p = b.presentation();
    let before = p.from_syllable(Syllable::new(p.shift(i, -1), p.group(p.shift(i, -1)).generators()[0]));
    let after = p.from_syllable(Syllable::new(p.shift(i, 1), p.group(p.shift(i, 1)).generators()[0]));
    let gi = p.mul(&before, &after);
    let base = [p.inv(&after), GroupElement::identity()];
    let mut edges = Vec::new();
    let k = k as i64;
    for j in -k..=k {
        let t = p.pow(&gi, j);
        for r in &base {
            let rep = p.mul(&t, r);
            let e = b.edge_id(i, &p.coset_rep(&rep, VertexSet::single(i))).ok_or_else(|| {
                Error::Cell(format!("edge [{rep}]·G{} lies outside the ball", i + 1))
            })?;
            edges.push(e);
        }
    }
    let mut vertices = Vec::with_capacity(edges.len() + 1);
    for w in edges.windows(2) {
        let shared: Vec<usize> = b.edge(w[0]).ends.iter().copied().filter(|v| b.edge(w[1]).ends.contains(v)).collect();
        let [v] = shared[..] else {
            return Err(Error::Cell(format!(
                "axis edges {} and {} do not meet in one vertex",
                b.edge_name(w[0]),
                b.edge_name(w[1])
            )));
        };
        if vertices.is_empty() {
            vertices.push(b.other_end(w[0], v));
        }
        vertices.push(v);
    }
    if let Some(&last) = edges.last() {
        let v = *vertices.last().unwrap_or(&b.edge(last).ends[0]);
        vertices.push(b.other_end(last, v));
    }
    Ok(AxisSegment {
        label: i,
        translation: gi,
        edges,
        vertices,
    })
}

/// The axis segment is a path of label-`i` edges in the wall through
/// `G_i`, never turning inside a polygon, translated by `g_i`.
pub fn axis_audit(b: &ComplexBall, i: usize, k: usize) -> Result<AuditReport> {
    let seg = axis_segment(b, i, k)?;
    let base = b
        .edge_id(i, &GroupElement::identity())
        .ok_or_else(|| Error::Cell("side of P missing".into()))?;
    let wall = treewall_of_edge(b, base)?;
    let mut report = AuditReport::new();
    let distinct: HashSet<usize> = seg.vertices.iter().copied().collect();
    report.expect(distinct.len() == seg.vertices.len(), || {
        ("axis".into(), "segment revisits a vertex".into())
    });
    for &e in &seg.edges {
        report.expect(b.edge(e).label == i && wall.contains_edge(e), || {
            (b.edge_name(e), format!("not in {}", wall.name(b)))
        });
    }
    for w in seg.edges.windows(2) {
        report.expect(!b.share_polygon(w[0], w[1]), || {
            (
                format!("{} / {}", b.edge_name(w[0]), b.edge_name(w[1])),
                "consecutive axis edges bound a common polygon".into(),
            )
        });
    }
    // g_i moves the segment two edges forward
    let m = seg.edges.len();
    for idx in 0..m.saturating_sub(2) {
        let moved = b.translate_edge(&seg.translation, seg.edges[idx]);
        report.expect(moved == Some(seg.edges[idx + 2]), || {
            (
                b.edge_name(seg.edges[idx]),
                format!("translate is {:?}, expected {}", moved.map(|e| b.edge_name(e)), b.edge_name(seg.edges[idx + 2])),
            )
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::davis::build_ball;
    use crate::reference;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn symmetries_respect_group_types() {
        assert_eq!(symmetries(&reference::c5_z3()).unwrap().len(), 10);
        assert_eq!(symmetries(&reference::c5_mixed()).unwrap().len(), 1);
        assert_eq!(symmetries(&reference::c6_mixed()).unwrap().len(), 2);
        let r = CycleSymmetry::reflection(5, 1);
        assert_eq!(r.apply(0), 1);
        assert_eq!(r.image_of_pair(0), 0);
        assert_eq!(r.image_of_pair(1), 4);
    }

    #[test]
    fn loc_sizes() {
        assert_eq!(enumerate_loc(&reference::c5_z3()).unwrap().len(), 320);
        assert_eq!(enumerate_loc(&reference::c5_z2()).unwrap().len(), 10);
        assert_eq!(enumerate_loc(&reference::c5_mixed()).unwrap().len(), 24);
        assert_eq!(enumerate_loc(&reference::c6_mixed()).unwrap().len(), 288);
    }

    #[test]
    fn rotation_relabels_and_composes() {
        let p = reference::c5_z2();
        let rot = AutElement::pure_local(LocalAut::new(&p, CycleSymmetry::rotation(5, 1), LocalAut::identity(&p).isos).unwrap());
        let a1 = p.parse_element("v1:1").unwrap();
        assert_eq!(rot.apply(&p, &a1), p.parse_element("v2:1").unwrap());
        let inner = AutElement::inner(&p, a1.clone());
        let c = rot.compose(&p, &inner);
        assert_eq!(c.inner, p.parse_element("v2:1").unwrap());
        assert_eq!(c.local, rot.local);
    }

    #[test]
    fn decomposes_simple_cases() {
        let p = reference::c5_z2();
        let a1 = p.parse_element("v1:1").unwrap();
        let inner = AutElement::inner(&p, a1.clone());
        assert_eq!(aut_decompose(&p, &inner.generator_images(&p)).unwrap(), inner);
        let refl = AutElement::pure_local(
            LocalAut::new(&p, CycleSymmetry::reflection(5, 2), LocalAut::identity(&p).isos).unwrap(),
        );
        assert_eq!(aut_decompose(&p, &refl.generator_images(&p)).unwrap(), refl);
    }

    #[test]
    fn decompose_rejects_non_automorphisms() {
        let p = reference::c5_z3();
        let mut images = AutElement::identity(&p).generator_images(&p);
        images[0][0] = p.parse_element("v1:1 v3:1").unwrap();
        assert!(matches!(aut_decompose(&p, &images), Err(Error::NotAnAutomorphism(_))));
        // the two generators of G_1 sent into different vertex groups
        let mut images = AutElement::identity(&p).generator_images(&p);
        images[0][1] = p.parse_element("v2:1").unwrap();
        assert!(matches!(aut_decompose(&p, &images), Err(Error::NotAnAutomorphism(_))));
        // collapsing two vertex groups onto one
        let mut images = AutElement::identity(&p).generator_images(&p);
        images[2] = images[0].clone();
        assert!(aut_decompose(&p, &images).is_err());
    }

    #[test]
    fn roundtrips_and_group_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (name, p) in reference::all() {
            let r = decompose_roundtrip_audit(&p, 60, 4, &mut rng).unwrap();
            assert!(r.is_clean(), "{name}: {:?}", r.violations);
            let r = group_law_audit(&p, 20, &mut rng).unwrap();
            assert!(r.is_clean(), "{name}: {:?}", r.violations);
        }
    }

    #[test]
    fn serialized_form_roundtrips() {
        let p = reference::c6_mixed();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_aut(&p, &mut rng, 3).unwrap();
        let json = serde_json::to_string(&a.to_data()).unwrap();
        let back: AutElementData = serde_json::from_str(&json).unwrap();
        assert_eq!(AutElement::from_data(&p, &back).unwrap(), a);
    }

    #[test]
    fn witness_for_z3_factors() {
        let p = reference::c5_z3();
        let w = acyl_witness(&p).unwrap();
        assert_eq!(w.vertex_sequence, vec![3, 1, 4, 2, 5, 3, 1, 4, 2, 5]);
        assert_eq!(w.element.len(), 10);
        let f = witness_fixator_check(&p, &w.element).unwrap();
        assert_eq!(f.loc_size, 320);
        assert!(f.only_identity);
        assert!(f.geometric_mismatches.is_empty());

        let t1 = p.parse_element("v1:1").unwrap();
        let f = witness_fixator_check(&p, &t1).unwrap();
        assert_eq!(f.fixator_size, 32);
        assert!(f.geometric_mismatches.is_empty());
        let f = witness_fixator_check(&p, &GroupElement::identity()).unwrap();
        assert_eq!(f.fixator_size, 320);
    }

    #[test]
    fn witness_degenerates_for_z2() {
        let w = acyl_witness(&reference::c5_z2()).unwrap();
        assert!(w.degenerate && w.element.is_identity());
    }

    #[test]
    fn witness_with_padding() {
        let p = reference::c6_mixed();
        let w = acyl_witness(&p).unwrap();
        assert_eq!(w.m, 2);
        assert_eq!(w.element.len(), 2 * 6 * 2);
        assert!(w.padded.iter().all(|s| s.len() == 2));
    }

    #[test]
    fn local_automorphisms_fix_p() {
        let p = reference::c5_z3();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut sample: Vec<AutElement> = enumerate_loc(&p).unwrap().into_iter().map(AutElement::pure_local).collect();
        for _ in 0..50 {
            sample.push(random_aut(&p, &mut rng, 3).unwrap());
        }
        let r = loc_stabilizes_p_audit(&p, &sample);
        assert!(r.is_clean(), "{:?}", r.violations);
    }

    #[test]
    fn automorphisms_act_on_the_ball() {
        let p = reference::c5_mixed();
        let b = build_ball(&p, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let a = random_aut(&p, &mut rng, 1).unwrap();
            let r = ball_action_audit(&b, &a);
            assert!(r.is_clean() && r.checked > 0, "{:?}", r.violations);
        }
    }

    #[test]
    fn axis_lies_in_the_wall() {
        for p in [reference::c5_z3(), reference::c6_mixed()] {
            let b = build_ball(&p, 3).unwrap();
            for i in 0..p.n() {
                let seg = axis_segment(&b, i, 1).unwrap();
                assert_eq!(seg.edges.len(), 6);
                let r = axis_audit(&b, i, 1).unwrap();
                assert!(r.is_clean(), "{:?}", r.violations);
            }
        }
        let b = build_ball(&reference::c5_z2(), 1).unwrap();
        let seg = axis_segment(&b, 0, 0).unwrap();
        assert_eq!(seg.edges.len(), 2);
        assert_eq!(seg.vertices.len(), 3);
    }

    #[test]
    fn inner_and_local_parts_do_not_overlap() {
        let p = reference::c5_z3();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let loc = enumerate_loc(&p).unwrap();
        let inners: Vec<GroupElement> = (0..20).map(|_| p.random_element(&mut rng, 3)).collect();
        let r = inn_loc_audit(&p, &loc, &inners);
        assert!(r.is_clean() && r.checked > 0);
    }
}
