//! The complex `𝒳` rebuilt from subgroups alone.
//!
//! Vertices of `𝒳` are the conjugates of `⟨G_i,G_{i+1}⟩`; two of them are
//! joined when together they generate a conjugate of
//! `⟨G_{i−1},G_i,G_{i+1}⟩`, and induced `n`-cycles are filled with polygons.
//! The map `g⟨G_i,G_{i+1}⟩ ↦ g⟨G_i,G_{i+1}⟩g⁻¹` identifies `X` with `𝒳`;
//! [`phi_iso_check`] verifies this on finite balls.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::davis::{pair_set, ComplexBall};
use crate::error::{Error, Result};
use crate::report::AuditReport;
use crate::word::{GroupElement, ParabolicRef, Presentation, VertexSet};

/// Closure depth used when none is given.
pub const DEFAULT_JOIN_DEPTH: usize = 4;
/// Deepest closure tried before a join is declared non-maximal.
pub const MAX_JOIN_DEPTH: usize = 6;
/// Closures larger than this are reported as inconclusive rather than
/// trusted as a negative answer.
pub const JOIN_CLOSURE_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    /// Conjugates of `G_i`.
    Minimal,
    /// Conjugates of `⟨G_i,G_{i+1}⟩`.
    Medium,
    /// Conjugates of `⟨G_{i−1},G_i,G_{i+1}⟩`.
    Maximal,
}

/// A subgroup `w·⟨G_S⟩·w⁻¹` with `S` determined by tier and base.
///
/// The conjugator is the minimal representative of `w·N(⟨G_S⟩)`, so two
/// encodings are equal exactly when the subgroups are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CSubgroup {
    pub tier: Tier,
    pub base: usize,
    pub conjugator: GroupElement,
}

pub fn defining_set(p: &Presentation, tier: Tier, base: usize) -> VertexSet {
    match tier {
        Tier::Minimal => VertexSet::single(base),
        Tier::Medium => pair_set(p, base),
        Tier::Maximal => p.closed_star(base),
    }
}

impl CSubgroup {
    pub fn new(p: &Presentation, tier: Tier, base: usize, conjugator: &GroupElement) -> Self {
        let normalizer = p.parabolic_normalizer(defining_set(p, tier, base));
        CSubgroup {
            tier,
            base,
            conjugator: p.coset_rep(conjugator, normalizer),
        }
    }

    pub fn vertex_set(&self, p: &Presentation) -> VertexSet {
        defining_set(p, self.tier, self.base)
    }

    pub fn parabolic(&self, p: &Presentation) -> ParabolicRef {
        p.parabolic(self.vertex_set(p), &self.conjugator)
    }

    pub fn contains(&self, p: &Presentation, g: &GroupElement) -> bool {
        p.parabolic_member(g, &self.parabolic(p))
    }

    /// `g·H·g⁻¹`.
    pub fn conjugate_by(&self, p: &Presentation, g: &GroupElement) -> CSubgroup {
        CSubgroup::new(p, self.tier, self.base, &p.mul(g, &self.conjugator))
    }

    /// Conjugates of the vertex-group syllables, generating the subgroup.
    pub fn generators(&self, p: &Presentation) -> Result<Vec<GroupElement>> {
        let w = &self.conjugator;
        let wi = p.inv(w);
        Ok(p
            .syllables_in(self.vertex_set(p))?
            .into_iter()
            .map(|s| p.mul_all([w, &p.from_syllable(s), &wi]))
            .collect())
    }

    pub fn display<'a>(&'a self, p: &'a Presentation) -> impl fmt::Display + 'a {
        CSubgroupName { h: self, p }
    }
}

struct CSubgroupName<'a> {
    h: &'a CSubgroup,
    p: &'a Presentation,
}

impl fmt::Display for CSubgroupName<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self
            .h
            .vertex_set(self.p)
            .iter()
            .map(|v| format!("G{}", v + 1))
            .collect();
        // closed stars wrap around the cycle; list them starting before the base
        let names = if self.h.tier == Tier::Maximal {
            let b = self.h.base;
            [self.p.shift(b, -1), b, self.p.shift(b, 1)]
                .iter()
                .map(|v| format!("G{}", v + 1))
                .collect()
        } else if self.h.tier == Tier::Medium {
            vec![format!("G{}", self.h.base + 1), format!("G{}", self.p.shift(self.h.base, 1) + 1)]
        } else {
            names
        };
        let inner = format!("<{}>", names.join(","));
        if self.h.conjugator.is_identity() {
            write!(f, "{inner}")
        } else {
            let w = &self.h.conjugator;
            write!(f, "[{w}]·{inner}·[{w}]^-1")
        }
    }
}

pub fn csubgroup_equal(a: &CSubgroup, b: &CSubgroup) -> bool {
    a == b
}

/// Outcome of [`join_is_cmaximal`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinVerdict {
    pub maximal: bool,
    pub candidate: Option<CSubgroup>,
    /// Closure depth at which the answer was settled; 0 when no closure was
    /// needed.
    pub depth: usize,
    /// Adjacency of the two vertices of `X`, read off from cosets.
    pub adjacent_in_x: bool,
}

/// Whether the vertices `H_1`, `H_2` of `X` (viewed as cosets) are joined by
/// an edge, decided from their conjugators.
pub fn adjacent_in_x(p: &Presentation, h1: &CSubgroup, h2: &CSubgroup) -> bool {
    let i = h1.base;
    let x = p.mul(&p.inv(&h1.conjugator), &h2.conjugator);
    // h1 normalized to ⟨G_i,G_{i+1}⟩; the neighbours are s⟨G_{i+1},G_{i+2}⟩
    // with s ∈ G_i and s⟨G_{i−1},G_i⟩ with s ∈ G_{i+1}
    let single_at = |v: usize, j: usize| {
        let rep = p.coset_rep(&x, pair_set(p, j));
        rep.is_identity() || (rep.len() == 1 && rep.syllables()[0].vertex == v)
    };
    if h2.base == p.shift(i, 1) {
        single_at(i, h2.base)
    } else if h2.base == p.shift(i, -1) {
        single_at(p.shift(i, 1), h2.base)
    } else {
        false
    }
}

/// Decides whether `⟨H_1,H_2⟩` is a maximal `𝒞`-subgroup by bounded closure.
///
/// A maximal parabolic containing `H_1 = w⟨G_i,G_{i+1}⟩w⁻¹` is one of
/// `w⟨G_{i−1},G_i,G_{i+1}⟩w⁻¹` and `w⟨G_i,G_{i+1},G_{i+2}⟩w⁻¹`. A candidate
/// that does not contain `H_2` is discarded on support grounds. Otherwise
/// the join is closed up to length `depth`, then `MAX_JOIN_DEPTH`; it is
/// maximal if the candidate's syllables all appear by then, and reported
/// non-maximal otherwise. A closure too large to inspect is inconclusive.
pub fn join_is_cmaximal(p: &Presentation, h1: &CSubgroup, h2: &CSubgroup, depth: usize) -> Result<JoinVerdict> {
    if h1.tier != Tier::Medium || h2.tier != Tier::Medium {
        return Err(Error::InvalidPresentation(
            "joins are only defined between medium subgroups".into(),
        ));
    }
    let adjacent = adjacent_in_x(p, h1, h2);
    let verdict = |maximal, candidate, depth| JoinVerdict {
        maximal,
        candidate,
        depth,
        adjacent_in_x: adjacent,
    };
    if h1 == h2 {
        return Ok(verdict(false, None, 0));
    }
    let i = h1.base;
    let w = &h1.conjugator;
    // move to the frame where H_1 is standard
    let x = CSubgroup::new(p, Tier::Medium, h2.base, &p.mul(&p.inv(w), &h2.conjugator));
    let standard = CSubgroup::new(p, Tier::Medium, i, &GroupElement::identity());
    let mut gens = standard.generators(p)?;
    let second = x.generators(p)?;
    let candidates: Vec<usize> = [i, p.shift(i, 1)]
        .into_iter()
        .filter(|&k| {
            let star = p.closed_star(k);
            second.iter().all(|g| p.support(g).is_subset(star))
        })
        .collect();
    let Some(&k) = candidates.first() else {
        return Ok(verdict(false, None, 0));
    };
    gens.extend(second);
    let targets: Vec<GroupElement> = p
        .syllables_in(p.closed_star(k))?
        .into_iter()
        .map(|s| p.from_syllable(s))
        .collect();
    let depths: Vec<usize> = if depth < MAX_JOIN_DEPTH {
        vec![depth, MAX_JOIN_DEPTH]
    } else {
        vec![depth]
    };
    for &d in &depths {
        if p.closure_reaches(&gens, d, &targets) {
            let cand = CSubgroup::new(p, Tier::Maximal, k, w);
            return Ok(verdict(true, Some(cand), d));
        }
    }
    let deepest = depths.last().copied().unwrap_or(depth);
    if p.closure_size_exceeds(&gens, deepest, JOIN_CLOSURE_CAP) {
        return Err(Error::Inconclusive(format!(
            "join of {} and {} grows past {JOIN_CLOSURE_CAP} elements by depth {deepest}",
            h1.display(p),
            h2.display(p),
        )));
    }
    Ok(verdict(false, None, deepest))
}

/// `𝒳` restricted to the stabilizers of the star-complete vertices of a ball.
#[derive(Clone, Debug, Serialize)]
pub struct ScriptXBall {
    pub nodes: Vec<CSubgroup>,
    /// The ball vertex each node came from.
    pub ball_vertex: Vec<usize>,
    pub arcs: Vec<(usize, usize)>,
    /// Induced `n`-cycles, each listed from its smallest node.
    pub polygons: Vec<Vec<usize>>,
    /// Pairs whose join could not be decided.
    pub inconclusive: Vec<(usize, usize)>,
    /// Pairs where the closure verdict and coset adjacency disagree.
    pub disagreements: Vec<(usize, usize)>,
}

impl ScriptXBall {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        adjacency_lists(self.nodes.len(), &self.arcs)
    }

    pub fn node_of(&self, h: &CSubgroup) -> Option<usize> {
        self.nodes.iter().position(|x| x == h)
    }
}

/// The medium subgroup `Φ(v)` attached to a vertex of the ball.
pub fn phi(b: &ComplexBall, v: usize) -> CSubgroup {
    let vx = b.vertex(v);
    CSubgroup::new(b.presentation(), Tier::Medium, vx.index, &vx.rep)
}

pub fn build_script_x_ball(b: &ComplexBall, depth: usize) -> Result<ScriptXBall> {
    let p = b.presentation();
    p.require_finite()?;
    let ball_vertex: Vec<usize> = (0..b.vertices().len())
        .filter(|&v| b.vertex(v).star_complete)
        .collect();
    let nodes: Vec<CSubgroup> = ball_vertex.iter().map(|&v| phi(b, v)).collect();
    let m = nodes.len();
    let outcomes: Vec<((usize, usize), Result<JoinVerdict>)> = (0..m)
        .into_par_iter()
        .flat_map_iter(|a| (a + 1..m).map(move |c| (a, c)))
        .map(|(a, c)| ((a, c), join_is_cmaximal(p, &nodes[a], &nodes[c], depth)))
        .collect();
    let mut arcs = Vec::new();
    let mut inconclusive = Vec::new();
    let mut disagreements = Vec::new();
    for (pair, outcome) in outcomes {
        match outcome {
            Ok(v) => {
                if v.maximal {
                    arcs.push(pair);
                }
                if v.maximal != v.adjacent_in_x {
                    disagreements.push(pair);
                }
            }
            Err(Error::Inconclusive(_)) => inconclusive.push(pair),
            Err(e) => return Err(e),
        }
    }
    let adj = adjacency_lists(m, &arcs);
    let polygons = induced_cycles(&adj, p.n());
    Ok(ScriptXBall {
        nodes,
        ball_vertex,
        arcs,
        polygons,
        inconclusive,
        disagreements,
    })
}

fn adjacency_lists(m: usize, arcs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); m];
    for &(a, c) in arcs {
        adj[a].push(c);
        adj[c].push(a);
    }
    for l in &mut adj {
        l.sort_unstable();
        l.dedup();
    }
    adj
}

/// Induced cycles of length `len` in a graph with sorted adjacency lists.
/// Each cycle starts at its smallest vertex and runs towards the smaller of
/// that vertex's two cycle neighbours.
pub fn induced_cycles(adj: &[Vec<usize>], len: usize) -> Vec<Vec<usize>> {
    let linked = |a: usize, c: usize| adj[a].binary_search(&c).is_ok();
    let mut out = Vec::new();
    for start in 0..adj.len() {
        let mut path = vec![start];
        extend_cycle(adj, &linked, len, &mut path, &mut out);
    }
    out
}

fn extend_cycle(
    adj: &[Vec<usize>],
    linked: &impl Fn(usize, usize) -> bool,
    len: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let start = path[0];
    let last = *path.last().unwrap();
    let k = path.len();
    for &next in &adj[last] {
        if next <= start || path.contains(&next) {
            continue;
        }
        // only consecutive path vertices may be adjacent, except that the
        // final vertex closes up to the start
        let chord = path[..k - 1]
            .iter()
            .enumerate()
            .any(|(idx, &u)| linked(u, next) && !(idx == 0 && k + 1 == len));
        if chord {
            continue;
        }
        if k + 1 == len {
            if linked(start, next) && path[1] < next {
                let mut cycle = path.clone();
                cycle.push(next);
                out.push(cycle);
            }
        } else {
            path.push(next);
            extend_cycle(adj, linked, len, path, out);
            path.pop();
        }
    }
}

/// Checks that `Φ` is an equivariant isomorphism from the star-complete part
/// of the ball onto the corresponding part of `𝒳`.
pub fn phi_iso_check<R: Rng>(b: &ComplexBall, depth: usize, samples: usize, rng: &mut R) -> Result<AuditReport> {
    let p = b.presentation();
    let sx = build_script_x_ball(b, depth)?;
    let mut report = AuditReport::new();

    // injective
    let mut seen = HashMap::new();
    for (node, h) in sx.nodes.iter().enumerate() {
        if let Some(prev) = seen.insert(h.clone(), node) {
            report.fail(
                h.display(p).to_string(),
                format!(
                    "vertices {} and {} have the same stabilizer",
                    b.vertex_name(sx.ball_vertex[prev]),
                    b.vertex_name(sx.ball_vertex[node])
                ),
            );
        } else {
            report.pass();
        }
    }

    // edges both ways
    let arcs: HashSet<(usize, usize)> = sx.arcs.iter().copied().collect();
    let undecided: HashSet<(usize, usize)> = sx.inconclusive.iter().copied().collect();
    let m = sx.nodes.len();
    for a in 0..m {
        for c in a + 1..m {
            if undecided.contains(&(a, c)) {
                report.skip();
                continue;
            }
            let (va, vc) = (sx.ball_vertex[a], sx.ball_vertex[c]);
            let in_x = b.edge_between(va, vc).is_some();
            let in_script = arcs.contains(&(a, c));
            report.expect(in_x == in_script, || {
                (
                    format!("{} / {}", b.vertex_name(va), b.vertex_name(vc)),
                    format!("adjacent in X: {in_x}, join maximal: {in_script}"),
                )
            });
        }
    }
    for &(a, c) in &sx.disagreements {
        report.fail(
            format!("{} / {}", sx.nodes[a].display(p), sx.nodes[c].display(p)),
            "closure verdict disagrees with coset adjacency".to_string(),
        );
    }

    // polygons of X with all corners present are exactly the induced cycles
    let node_of_vertex: HashMap<usize, usize> = sx
        .ball_vertex
        .iter()
        .enumerate()
        .map(|(node, &v)| (v, node))
        .collect();
    let corner_sets: HashSet<Vec<usize>> = b
        .polygons()
        .iter()
        .filter_map(|f| {
            let mut nodes: Vec<usize> = f
                .corners
                .iter()
                .map(|c| node_of_vertex.get(c).copied())
                .collect::<Option<_>>()?;
            nodes.sort_unstable();
            Some(nodes)
        })
        .collect();
    let cycle_sets: HashSet<Vec<usize>> = sx
        .polygons
        .iter()
        .map(|c| {
            let mut s = c.clone();
            s.sort_unstable();
            s
        })
        .collect();
    for s in &cycle_sets {
        report.expect(corner_sets.contains(s), || {
            (format!("cycle {s:?}"), "induced cycle of 𝒳 is not a polygon of X".into())
        });
    }
    for s in &corner_sets {
        report.expect(cycle_sets.contains(s), || {
            (format!("polygon {s:?}"), "polygon of X is not an induced cycle of 𝒳".into())
        });
    }

    // equivariance under sampled translations
    let reach = b.radius().saturating_sub(1).max(1);
    for _ in 0..samples {
        let g = p.random_element(rng, reach);
        for (node, h) in sx.nodes.iter().enumerate() {
            let Some(gv) = b.translate_vertex(&g, sx.ball_vertex[node]) else {
                continue;
            };
            let image = phi(b, gv);
            let moved = h.conjugate_by(p, &g);
            report.expect(image == moved, || {
                (
                    format!("g = {g}, x = {}", b.vertex_name(sx.ball_vertex[node])),
                    format!("Φ(g·x) = {} but ι(g)·Φ(x) = {}", image.display(p), moved.display(p)),
                )
            });
        }
        for &(a, c) in &sx.arcs {
            let ga = b.translate_vertex(&g, sx.ball_vertex[a]).and_then(|v| node_of_vertex.get(&v));
            let gc = b.translate_vertex(&g, sx.ball_vertex[c]).and_then(|v| node_of_vertex.get(&v));
            if let (Some(&ga), Some(&gc)) = (ga, gc) {
                let key = (ga.min(gc), ga.max(gc));
                if undecided.contains(&key) {
                    report.skip();
                    continue;
                }
                report.expect(arcs.contains(&key), || {
                    (
                        format!("g = {g}"),
                        format!("arc {} / {} not carried to an arc", sx.nodes[a].display(p), sx.nodes[c].display(p)),
                    )
                });
            }
        }
    }
    Ok(report)
}

/// Every induced `n`-cycle among the star-complete vertices of the ball
/// bounds a polygon.
pub fn induced_cycle_audit(b: &ComplexBall) -> AuditReport {
    let n = b.presentation().n();
    let keep: Vec<usize> = (0..b.vertices().len())
        .filter(|&v| b.vertex(v).star_complete)
        .collect();
    let local: HashMap<usize, usize> = keep.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let arcs: Vec<(usize, usize)> = b
        .edges()
        .iter()
        .filter_map(|e| Some((*local.get(&e.ends[0])?, *local.get(&e.ends[1])?)))
        .collect();
    let adj = adjacency_lists(keep.len(), &arcs);
    let polygons: HashSet<Vec<usize>> = b
        .polygons()
        .iter()
        .map(|f| {
            let mut c = f.corners.clone();
            c.sort_unstable();
            c
        })
        .collect();
    let mut report = AuditReport::new();
    for cycle in induced_cycles(&adj, n) {
        let mut vs: Vec<usize> = cycle.iter().map(|&k| keep[k]).collect();
        vs.sort_unstable();
        report.expect(polygons.contains(&vs), || {
            let names: Vec<String> = vs.iter().map(|&v| b.vertex_name(v)).collect();
            (names.join(" "), "induced cycle bounds no polygon".into())
        });
    }
    report
}

/// Graphviz rendering of `𝒳`, in the style of the ball export.
pub fn script_x_to_dot(p: &Presentation, sx: &ScriptXBall) -> String {
    let mut out = String::from("graph script_x {\n");
    for (k, h) in sx.nodes.iter().enumerate() {
        out.push_str(&format!("  n{k} [label=\"{}\"];\n", h.display(p)));
    }
    for &(a, c) in &sx.arcs {
        out.push_str(&format!("  n{a} -- n{c};\n"));
    }
    out.push_str("}\n");
    out
}
