//! Finite balls in the Davis complex of a cyclic product.
//!
//! The polygonal complex `X` has a vertex for each coset `g⟨G_i,G_{i+1}⟩`,
//! an edge labelled `i` for each coset `gG_i` (joining `g⟨G_{i−1},G_i⟩` to
//! `g⟨G_i,G_{i+1}⟩`) and an `n`-gon for each element `g`. A ball of radius
//! `r` contains the polygons `g` of syllable length at most `r` together
//! with their faces. Its square subdivision `X′` adds a vertex at the middle
//! of every edge and the centre of every polygon.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::AuditReport;
use crate::word::{GroupElement, Presentation, VertexSet};

/// Memory budget used by [`build_ball`].
pub const DEFAULT_BUDGET_BYTES: u64 = 1 << 30;

/// The subgroup a coset is taken of: trivial, `G_i`, or `⟨G_i,G_{i+1}⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum CosetKind {
    Trivial,
    Single(usize),
    Pair(usize),
}

impl CosetKind {
    pub fn vertex_set(self, n: usize) -> VertexSet {
        match self {
            CosetKind::Trivial => VertexSet::EMPTY,
            CosetKind::Single(i) => VertexSet::single(i),
            CosetKind::Pair(i) => [i, (i + 1) % n].into_iter().collect(),
        }
    }
}

pub fn pair_set(p: &Presentation, i: usize) -> VertexSet {
    CosetKind::Pair(i).vertex_set(p.n())
}

/// Human-readable name of a coset, with 1-based vertex labels.
pub fn coset_name(p: &Presentation, kind: CosetKind, rep: &GroupElement) -> String {
    let prefix = if rep.is_identity() {
        "e".to_string()
    } else {
        format!("[{rep}]")
    };
    match kind {
        CosetKind::Trivial => format!("{prefix}·P"),
        CosetKind::Single(i) => format!("{prefix}·G{}", i + 1),
        CosetKind::Pair(i) => format!("{prefix}·<G{},G{}>", i + 1, p.shift(i, 1) + 1),
    }
}

/// A vertex of `X`: the coset `rep·⟨G_index, G_index+1⟩`.
#[derive(Clone, Debug)]
pub struct Vertex {
    pub index: usize,
    pub rep: GroupElement,
    /// Every polygon of `X` containing the vertex is in the ball.
    pub interior: bool,
    /// Every edge of `X` at the vertex is in the ball.
    pub star_complete: bool,
    pub edges: Vec<usize>,
    pub polygons: Vec<usize>,
}

/// An edge of `X`: the coset `rep·G_label`.
#[derive(Clone, Debug)]
pub struct Edge {
    pub label: usize,
    pub rep: GroupElement,
    /// Ends `rep⟨G_{label−1},G_label⟩` and `rep⟨G_label,G_{label+1}⟩`.
    pub ends: [usize; 2],
    pub interior: bool,
    pub polygons: Vec<usize>,
}

/// The polygon `rep·P`. Corner `k` is `rep⟨G_k,G_{k+1}⟩` and side `k` is
/// `rep·G_k`, which joins corners `k − 1` and `k`.
#[derive(Clone, Debug)]
pub struct Polygon {
    pub rep: GroupElement,
    pub corners: Vec<usize>,
    pub sides: Vec<usize>,
}

/// A finite ball of `X` around the fundamental polygon.
#[derive(Clone, Debug)]
pub struct ComplexBall {
    presentation: Presentation,
    radius: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    polygons: Vec<Polygon>,
    vertex_index: HashMap<(usize, GroupElement), usize>,
    edge_index: HashMap<(usize, GroupElement), usize>,
    polygon_index: HashMap<GroupElement, usize>,
}

/// Rough memory footprint of a ball, used to refuse oversized builds.
pub fn estimate_ball_bytes(p: &Presentation, r: usize) -> Result<u64> {
    let growth = p.ball_growth(r)?;
    let polygons: u128 = growth.iter().sum();
    let per_polygon = (p.n() as u128) * (240 + 48 * r as u128);
    Ok(u64::try_from(polygons * per_polygon).unwrap_or(u64::MAX))
}

pub fn build_ball(p: &Presentation, r: usize) -> Result<ComplexBall> {
    build_ball_with_budget(p, r, DEFAULT_BUDGET_BYTES)
}

pub fn build_ball_with_budget(p: &Presentation, r: usize, budget_bytes: u64) -> Result<ComplexBall> {
    p.require_finite()?;
    let estimate = estimate_ball_bytes(p, r)?;
    if estimate > budget_bytes {
        return Err(Error::Resource(format!(
            "ball of radius {r} needs about {} MiB, budget is {} MiB",
            estimate >> 20,
            budget_bytes >> 20
        )));
    }
    let n = p.n();
    let elements = p.enumerate_ball_elements(r)?;
    let faces: Vec<(Vec<GroupElement>, Vec<GroupElement>)> = elements
        .par_iter()
        .map(|g| {
            let corners = (0..n).map(|k| p.coset_rep(g, pair_set(p, k))).collect();
            let sides = (0..n)
                .map(|k| p.coset_rep(g, VertexSet::single(k)))
                .collect();
            (corners, sides)
        })
        .collect();

    let mut vertex_keys = BTreeSet::new();
    let mut edge_keys = BTreeSet::new();
    for (corners, sides) in &faces {
        for (k, c) in corners.iter().enumerate() {
            vertex_keys.insert((k, c.clone()));
        }
        for (k, s) in sides.iter().enumerate() {
            edge_keys.insert((k, s.clone()));
        }
    }
    let vertex_index: HashMap<_, _> = vertex_keys
        .iter()
        .cloned()
        .enumerate()
        .map(|(id, key)| (key, id))
        .collect();
    let edge_index: HashMap<_, _> = edge_keys
        .iter()
        .cloned()
        .enumerate()
        .map(|(id, key)| (key, id))
        .collect();

    let mut vertices: Vec<Vertex> = vertex_keys
        .into_iter()
        .map(|(index, rep)| {
            let len = rep.len();
            Vertex {
                index,
                rep,
                interior: len + 2 <= r,
                star_complete: len < r,
                edges: Vec::new(),
                polygons: Vec::new(),
            }
        })
        .collect();
    let mut edges: Vec<Edge> = edge_keys
        .into_iter()
        .map(|(label, rep)| {
            let before = p.shift(label, -1);
            let ends = [
                vertex_index[&(before, p.coset_rep(&rep, pair_set(p, before)))],
                vertex_index[&(label, p.coset_rep(&rep, pair_set(p, label)))],
            ];
            let interior = rep.len() < r;
            Edge {
                label,
                rep,
                ends,
                interior,
                polygons: Vec::new(),
            }
        })
        .collect();
    for (id, e) in edges.iter().enumerate() {
        for &v in &e.ends {
            vertices[v].edges.push(id);
        }
    }

    let mut polygons = Vec::with_capacity(elements.len());
    let mut polygon_index = HashMap::with_capacity(elements.len());
    for (pid, (g, (corners, sides))) in elements.into_iter().zip(faces).enumerate() {
        let corners: Vec<usize> = corners
            .into_iter()
            .enumerate()
            .map(|(k, c)| vertex_index[&(k, c)])
            .collect();
        let sides: Vec<usize> = sides
            .into_iter()
            .enumerate()
            .map(|(k, s)| edge_index[&(k, s)])
            .collect();
        for &c in &corners {
            vertices[c].polygons.push(pid);
        }
        for &s in &sides {
            edges[s].polygons.push(pid);
        }
        polygon_index.insert(g.clone(), pid);
        polygons.push(Polygon {
            rep: g,
            corners,
            sides,
        });
    }

    Ok(ComplexBall {
        presentation: p.clone(),
        radius: r,
        vertices,
        edges,
        polygons,
        vertex_index,
        edge_index,
        polygon_index,
    })
}

impl ComplexBall {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn vertex(&self, id: usize) -> &Vertex {
        &self.vertices[id]
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn polygon(&self, id: usize) -> &Polygon {
        &self.polygons[id]
    }

    /// The vertex `g⟨G_i,G_{i+1}⟩`, if it lies in the ball.
    pub fn vertex_id(&self, index: usize, g: &GroupElement) -> Option<usize> {
        let p = &self.presentation;
        let rep = p.coset_rep(g, pair_set(p, index));
        self.vertex_index.get(&(index, rep)).copied()
    }

    /// The edge `g·G_label`, if it lies in the ball.
    pub fn edge_id(&self, label: usize, g: &GroupElement) -> Option<usize> {
        let rep = self.presentation.coset_rep(g, VertexSet::single(label));
        self.edge_index.get(&(label, rep)).copied()
    }

    pub fn polygon_id(&self, g: &GroupElement) -> Option<usize> {
        self.polygon_index.get(g).copied()
    }

    /// `g·v` for a vertex `v` of the ball.
    pub fn translate_vertex(&self, g: &GroupElement, v: usize) -> Option<usize> {
        let vx = &self.vertices[v];
        self.vertex_id(vx.index, &self.presentation.mul(g, &vx.rep))
    }

    /// `g·e` for an edge `e` of the ball.
    pub fn translate_edge(&self, g: &GroupElement, e: usize) -> Option<usize> {
        let ex = &self.edges[e];
        self.edge_id(ex.label, &self.presentation.mul(g, &ex.rep))
    }

    /// The edge joining two vertices, if any.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.vertices[a]
            .edges
            .iter()
            .copied()
            .find(|&e| self.other_end(e, a) == b)
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let [a, b] = self.edges[e].ends;
        if a == v {
            b
        } else {
            a
        }
    }

    /// Neighbouring vertices in the 1-skeleton.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.vertices[v].edges.iter().map(move |&e| self.other_end(e, v))
    }

    /// Breadth-first 1-skeleton distances from a set of vertices.
    pub fn distances_from(&self, sources: &[usize]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertices.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for w in self.neighbors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn vertex_name(&self, v: usize) -> String {
        let vx = &self.vertices[v];
        coset_name(&self.presentation, CosetKind::Pair(vx.index), &vx.rep)
    }

    pub fn edge_name(&self, e: usize) -> String {
        let ex = &self.edges[e];
        coset_name(&self.presentation, CosetKind::Single(ex.label), &ex.rep)
    }

    pub fn polygon_name(&self, f: usize) -> String {
        coset_name(&self.presentation, CosetKind::Trivial, &self.polygons[f].rep)
    }

    /// The two sides of polygon `f` at its corner `v`, or `None` if `v` is
    /// not a corner of `f`.
    pub fn sides_at_corner(&self, f: usize, v: usize) -> Option<(usize, usize)> {
        let poly = &self.polygons[f];
        let n = poly.corners.len();
        let k = poly.corners.iter().position(|&c| c == v)?;
        Some((poly.sides[k], poly.sides[(k + 1) % n]))
    }

    /// Whether two edges are sides of a common polygon.
    pub fn share_polygon(&self, a: usize, b: usize) -> bool {
        let pa = &self.edges[a].polygons;
        self.edges[b].polygons.iter().any(|f| pa.contains(f))
    }
}

/// The link of a vertex of `X`: one node per incident edge, one arc per
/// polygon corner at the vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkGraph {
    pub nodes: Vec<usize>,
    pub labels: Vec<usize>,
    pub arcs: Vec<(usize, usize)>,
}

impl LinkGraph {
    /// Length of the shortest cycle, counting a doubled arc as a 2-cycle and
    /// a loop as a 1-cycle. `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        graph_girth(self.nodes.len(), &self.arcs)
    }

    /// The two label classes form a complete bipartite graph with every
    /// cross pair joined exactly once and no arc inside a class.
    pub fn is_complete_bipartite_by_label(&self) -> bool {
        let mut classes: Vec<usize> = self.labels.clone();
        classes.sort_unstable();
        classes.dedup();
        if classes.len() != 2 {
            return false;
        }
        let left = self.labels.iter().filter(|&&l| l == classes[0]).count();
        let right = self.nodes.len() - left;
        let mut seen = BTreeSet::new();
        for &(a, b) in &self.arcs {
            if self.labels[a] == self.labels[b] {
                return false;
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return false;
            }
        }
        seen.len() == left * right
    }

    /// Sizes of the two label classes, ordered by label.
    pub fn side_sizes(&self) -> Vec<(usize, usize)> {
        let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
        for &l in &self.labels {
            *counts.entry(l).or_insert(0) += 1;
        }
        counts.into_iter().collect()
    }
}

/// Girth of a multigraph on `nodes` vertices given as an arc list.
pub fn graph_girth(nodes: usize, arcs: &[(usize, usize)]) -> Option<usize> {
    let mut adj = vec![Vec::new(); nodes];
    let mut best: Option<usize> = None;
    let mut seen = std::collections::HashSet::new();
    for (id, &(a, b)) in arcs.iter().enumerate() {
        if a == b {
            return Some(1);
        }
        if !seen.insert((a.min(b), a.max(b))) {
            best = Some(2);
        }
        adj[a].push((b, id));
        adj[b].push((a, id));
    }
    if best.is_some() {
        return best;
    }
    for s in 0..nodes {
        let mut dist = vec![usize::MAX; nodes];
        let mut via = vec![usize::MAX; nodes];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &(w, arc) in &adj[v] {
                if arc == via[v] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    via[w] = arc;
                    queue.push_back(w);
                } else {
                    let len = dist[v] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// Link of an interior vertex of `X`.
pub fn vertex_link(b: &ComplexBall, v: usize) -> Result<LinkGraph> {
    let vx = b.vertex(v);
    if !vx.interior {
        return Err(Error::BoundaryVertex(b.vertex_name(v)));
    }
    let nodes = vx.edges.clone();
    let labels = nodes.iter().map(|&e| b.edge(e).label).collect();
    let pos: HashMap<usize, usize> = nodes.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let arcs = vx
        .polygons
        .iter()
        .map(|&f| {
            let (s1, s2) = b.sides_at_corner(f, v).expect("incident polygon");
            (pos[&s1], pos[&s2])
        })
        .collect();
    Ok(LinkGraph {
        nodes,
        labels,
        arcs,
    })
}

/// A vertex of the square subdivision `X′`.
#[derive(Clone, Debug)]
pub struct SquareVertex {
    pub kind: CosetKind,
    pub rep: GroupElement,
    pub interior: bool,
}

/// The square subdivision of a ball. Each polygon `g` contributes the
/// squares `[g, gG_k, g⟨G_k,G_{k+1}⟩, gG_{k+1}]`.
#[derive(Clone, Debug)]
pub struct SquareComplex {
    presentation: Presentation,
    vertices: Vec<SquareVertex>,
    edges: Vec<[usize; 2]>,
    edge_interior: Vec<bool>,
    squares: Vec<[usize; 4]>,
    square_edges: Vec<[usize; 4]>,
    vertex_squares: Vec<Vec<usize>>,
    index: HashMap<(CosetKind, GroupElement), usize>,
    edge_index: HashMap<(usize, usize), usize>,
}

pub fn subdivide(b: &ComplexBall) -> SquareComplex {
    let p = b.presentation();
    let n = p.n();
    let mut keys: Vec<(CosetKind, GroupElement, bool)> = Vec::new();
    for f in b.polygons() {
        keys.push((CosetKind::Trivial, f.rep.clone(), true));
    }
    for e in b.edges() {
        keys.push((CosetKind::Single(e.label), e.rep.clone(), e.interior));
    }
    for v in b.vertices() {
        keys.push((CosetKind::Pair(v.index), v.rep.clone(), v.interior));
    }
    keys.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let index: HashMap<_, _> = keys
        .iter()
        .enumerate()
        .map(|(id, (k, r, _))| ((*k, r.clone()), id))
        .collect();
    let vertices: Vec<SquareVertex> = keys
        .into_iter()
        .map(|(kind, rep, interior)| SquareVertex {
            kind,
            rep,
            interior,
        })
        .collect();

    let mut squares = Vec::new();
    for f in b.polygons() {
        let centre = index[&(CosetKind::Trivial, f.rep.clone())];
        for k in 0..n {
            let next = (k + 1) % n;
            let side_k = b.edge(f.sides[k]);
            let side_next = b.edge(f.sides[next]);
            let corner = b.vertex(f.corners[k]);
            squares.push([
                centre,
                index[&(CosetKind::Single(k), side_k.rep.clone())],
                index[&(CosetKind::Pair(k), corner.rep.clone())],
                index[&(CosetKind::Single(next), side_next.rep.clone())],
            ]);
        }
    }

    let mut edge_index = HashMap::new();
    let mut edges = Vec::new();
    let mut square_edges = Vec::with_capacity(squares.len());
    for sq in &squares {
        let mut ids = [0; 4];
        for k in 0..4 {
            let (a, c) = (sq[k], sq[(k + 1) % 4]);
            let key = (a.min(c), a.max(c));
            ids[k] = *edge_index.entry(key).or_insert_with(|| {
                edges.push([key.0, key.1]);
                edges.len() - 1
            });
        }
        square_edges.push(ids);
    }
    // An edge of X′ is interior when every polygon containing it is present:
    // edges at a polygon centre lie in one polygon only; the two halves of an
    // edge of X inherit its interiority.
    let edge_interior = edges
        .iter()
        .map(|&[a, c]| {
            let kinds = (vertices[a].kind, vertices[c].kind);
            match kinds {
                (CosetKind::Trivial, _) | (_, CosetKind::Trivial) => true,
                (CosetKind::Single(_), _) => vertices[a].interior,
                (_, CosetKind::Single(_)) => vertices[c].interior,
                _ => false,
            }
        })
        .collect();
    let mut vertex_squares = vec![Vec::new(); vertices.len()];
    for (s, sq) in squares.iter().enumerate() {
        for &v in sq {
            vertex_squares[v].push(s);
        }
    }

    SquareComplex {
        presentation: p.clone(),
        vertices,
        edges,
        edge_interior,
        squares,
        square_edges,
        vertex_squares,
        index,
        edge_index,
    }
}

impl SquareComplex {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn vertices(&self) -> &[SquareVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn squares(&self) -> &[[usize; 4]] {
        &self.squares
    }

    /// Edge ids of each square, side `k` joining corners `k` and `k + 1`.
    pub fn square_edges(&self) -> &[[usize; 4]] {
        &self.square_edges
    }

    pub fn edge_is_interior(&self, e: usize) -> bool {
        self.edge_interior[e]
    }

    pub fn vertex_id(&self, kind: CosetKind, rep: &GroupElement) -> Option<usize> {
        self.index.get(&(kind, rep.clone())).copied()
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn vertex_name(&self, v: usize) -> String {
        let vx = &self.vertices[v];
        coset_name(&self.presentation, vx.kind, &vx.rep)
    }

    /// Link of a vertex: nodes are its neighbours, one arc per square
    /// corner at the vertex.
    pub fn link(&self, v: usize) -> (Vec<usize>, Vec<(usize, usize)>) {
        let mut nodes: Vec<usize> = Vec::new();
        let mut arcs = Vec::new();
        let pos = |x: usize, nodes: &mut Vec<usize>| match nodes.iter().position(|&y| y == x) {
            Some(k) => k,
            None => {
                nodes.push(x);
                nodes.len() - 1
            }
        };
        for &s in &self.vertex_squares[v] {
            let sq = &self.squares[s];
            if let Some(k) = sq.iter().position(|&x| x == v) {
                let a = pos(sq[(k + 3) % 4], &mut nodes);
                let c = pos(sq[(k + 1) % 4], &mut nodes);
                arcs.push((a, c));
            }
        }
        (nodes, arcs)
    }

    pub fn squares_at(&self, v: usize) -> &[usize] {
        &self.vertex_squares[v]
    }

    /// Number of squares containing each edge.
    pub fn squares_per_edge(&self) -> Vec<usize> {
        let mut count = vec![0; self.edges.len()];
        for ids in &self.square_edges {
            for &e in ids {
                count[e] += 1;
            }
        }
        count
    }
}

/// Small-cancellation audit: links of interior vertices of `X′` have girth
/// at least 4, and every polygon has `n` distinct corners and sides.
pub fn t4_audit(b: &ComplexBall) -> AuditReport {
    let sq = subdivide(b);
    let n = b.presentation().n();
    let mut report = AuditReport::new();
    let per_vertex: Vec<(usize, Option<usize>)> = (0..sq.vertices().len())
        .into_par_iter()
        .filter(|&v| sq.vertices()[v].interior)
        .map(|v| {
            let (nodes, arcs) = sq.link(v);
            (v, graph_girth(nodes.len(), &arcs))
        })
        .collect();
    for (v, girth) in per_vertex {
        report.expect(girth.is_some_and(|g| g >= 4), || {
            (sq.vertex_name(v), format!("link girth {girth:?}"))
        });
    }
    for (f, poly) in b.polygons().iter().enumerate() {
        let corners: BTreeSet<_> = poly.corners.iter().collect();
        let sides: BTreeSet<_> = poly.sides.iter().collect();
        report.expect(corners.len() == n && sides.len() == n, || {
            (
                b.polygon_name(f),
                format!("{} corners, {} sides", corners.len(), sides.len()),
            )
        });
    }
    report
}

/// Two polygons share at most one edge, and any shared vertices are the
/// ends of that edge (or a single vertex).
pub fn polygon_pair_audit(b: &ComplexBall) -> AuditReport {
    let mut report = AuditReport::new();
    let mut pairs = BTreeSet::new();
    for v in b.vertices() {
        for (k, &f) in v.polygons.iter().enumerate() {
            for &h in &v.polygons[k + 1..] {
                pairs.insert((f.min(h), f.max(h)));
            }
        }
    }
    for (f, h) in pairs {
        let (pf, ph) = (b.polygon(f), b.polygon(h));
        let shared_v = pf.corners.iter().filter(|c| ph.corners.contains(c)).count();
        let shared_e = pf.sides.iter().filter(|s| ph.sides.contains(s)).count();
        let ok = match shared_e {
            0 => shared_v <= 1,
            1 => shared_v == 2,
            _ => false,
        };
        report.expect(ok, || {
            (
                format!("{} & {}", b.polygon_name(f), b.polygon_name(h)),
                format!("share {shared_e} edges and {shared_v} vertices"),
            )
        });
    }
    report
}

/// Every interior edge of `X′` lies in at least two squares.
pub fn free_face_audit(b: &ComplexBall) -> AuditReport {
    let sq = subdivide(b);
    let counts = sq.squares_per_edge();
    let mut report = AuditReport::new();
    for (e, &c) in counts.iter().enumerate() {
        if !sq.edge_is_interior(e) {
            report.skip();
            continue;
        }
        report.expect(c >= 2, || {
            let [a, z] = sq.edges()[e];
            (
                format!("{} -- {}", sq.vertex_name(a), sq.vertex_name(z)),
                format!("in {c} squares"),
            )
        });
    }
    report
}

/// Links of interior vertices of `X` are complete bipartite between the two
/// labels, with sides of sizes `|G_{i+1}|` (label `i`) and `|G_i|`
/// (label `i + 1`).
pub fn bipartite_link_audit(b: &ComplexBall) -> AuditReport {
    let p = b.presentation();
    let mut report = AuditReport::new();
    for v in 0..b.vertices().len() {
        let Ok(link) = vertex_link(b, v) else {
            report.skip();
            continue;
        };
        let i = b.vertex(v).index;
        let j = p.shift(i, 1);
        let want_i = p.group(j).order().unwrap_or(0);
        let want_j = p.group(i).order().unwrap_or(0);
        let count = |l| link.labels.iter().filter(|&&x| x == l).count();
        let ok = link.is_complete_bipartite_by_label() && count(i) == want_i && count(j) == want_j;
        report.expect(ok, || {
            (
                b.vertex_name(v),
                format!("link sides {:?}, {} arcs", link.side_sizes(), link.arcs.len()),
            )
        });
    }
    report
}

/// Each edge with label `i` lies in exactly `|G_i|` polygons when interior,
/// and each polygon `g` has the corners and sides of `g·P`.
pub fn incidence_audit(b: &ComplexBall) -> AuditReport {
    let p = b.presentation();
    let mut report = AuditReport::new();
    for (e, edge) in b.edges().iter().enumerate() {
        if !edge.interior {
            report.skip();
            continue;
        }
        let want = p.group(edge.label).order().unwrap_or(0);
        report.expect(edge.polygons.len() == want, || {
            (
                b.edge_name(e),
                format!("in {} polygons, expected {want}", edge.polygons.len()),
            )
        });
    }
    let base = &b.polygons()[0];
    for (f, poly) in b.polygons().iter().enumerate() {
        let moved: Vec<Option<usize>> = base
            .corners
            .iter()
            .map(|&c| b.translate_vertex(&poly.rep, c))
            .collect();
        let ok = moved
            .iter()
            .zip(&poly.corners)
            .all(|(m, &c)| *m == Some(c));
        report.expect(ok, || (b.polygon_name(f), "is not g·P".into()));
    }
    report
}

/// Left multiplication by sampled `g` with `|g| + sub_radius ≤ radius`
/// carries the sub-ball of radius `sub_radius` into the ball, preserving
/// edge labels and incidence, injectively on vertices.
pub fn equivariance_audit<R: Rng>(
    b: &ComplexBall,
    sub_radius: usize,
    samples: usize,
    rng: &mut R,
) -> AuditReport {
    let p = b.presentation();
    let mut report = AuditReport::new();
    if sub_radius > b.radius() {
        report.skip();
        return report;
    }
    let max_len = b.radius() - sub_radius;
    let sub_edges: Vec<usize> = (0..b.edges().len())
        .filter(|&e| b.edge(e).rep.len() <= sub_radius)
        .collect();
    let sub_vertices: Vec<usize> = (0..b.vertices().len())
        .filter(|&v| b.vertex(v).rep.len() <= sub_radius)
        .collect();
    for _ in 0..samples {
        let g = p.random_element(rng, max_len);
        let mut image = HashMap::new();
        let mut ok = true;
        let mut why = String::new();
        for &v in &sub_vertices {
            match b.translate_vertex(&g, v) {
                Some(w) => {
                    image.insert(v, w);
                }
                None => {
                    ok = false;
                    why = format!("{} leaves the ball", b.vertex_name(v));
                    break;
                }
            }
        }
        let distinct: BTreeSet<_> = image.values().collect();
        if ok && distinct.len() != image.len() {
            ok = false;
            why = "not injective on vertices".into();
        }
        if ok {
            for &e in &sub_edges {
                let edge = b.edge(e);
                let Some(ge) = b.translate_edge(&g, e) else {
                    ok = false;
                    why = format!("{} leaves the ball", b.edge_name(e));
                    break;
                };
                let img = b.edge(ge);
                let ends_ok = edge
                    .ends
                    .iter()
                    .zip(img.ends)
                    .all(|(a, z)| image.get(a) == Some(&z));
                if img.label != edge.label || !ends_ok {
                    ok = false;
                    why = format!("{} maps to {}", b.edge_name(e), b.edge_name(ge));
                    break;
                }
            }
        }
        report.expect(ok, || (format!("g = {g}"), why));
    }
    report
}

/// For interior edges, the elements of length `≤ max_len` fixing both ends
/// are exactly those in the conjugate `uG_iu⁻¹` of the edge's label group.
pub fn edge_stabilizer_audit(b: &ComplexBall, max_len: usize) -> Result<AuditReport> {
    let p = b.presentation();
    let elements = p.enumerate_ball_elements(max_len)?;
    let results: Vec<AuditReport> = (0..b.edges().len())
        .into_par_iter()
        .map(|e| {
            let mut report = AuditReport::new();
            let edge = b.edge(e);
            if !edge.interior {
                report.skip();
                return report;
            }
            let conj = p.parabolic(VertexSet::single(edge.label), &edge.rep);
            for h in &elements {
                let fixes = edge
                    .ends
                    .iter()
                    .all(|&v| b.translate_vertex(h, v) == Some(v));
                let member = p.parabolic_member(h, &conj);
                report.expect(fixes == member, || {
                    (
                        b.edge_name(e),
                        format!("h = {h}: fixes {fixes}, in conjugate {member}"),
                    )
                });
            }
            report
        })
        .collect();
    let mut out = AuditReport::new();
    for r in results {
        out.merge(r);
    }
    Ok(out)
}

#[derive(Serialize)]
struct VertexJson {
    id: usize,
    #[serde(flatten)]
    kind: CosetKind,
    rep: String,
    interior: bool,
}

#[derive(Serialize)]
struct EdgeJson {
    id: usize,
    label: usize,
    rep: String,
    ends: [usize; 2],
    interior: bool,
}

#[derive(Serialize)]
struct PolygonJson {
    id: usize,
    rep: String,
    corners: Vec<usize>,
    sides: Vec<usize>,
}

#[derive(Serialize)]
struct BallJson<'a> {
    schema: &'static str,
    presentation: &'a Presentation,
    radius: usize,
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
    polygons: Vec<PolygonJson>,
}

#[derive(Serialize)]
struct SquareJson<'a> {
    schema: &'static str,
    presentation: &'a Presentation,
    radius: usize,
    subdivided: bool,
    vertices: Vec<VertexJson>,
    edges: Vec<[usize; 2]>,
    squares: &'a [[usize; 4]],
}

/// 1-based labels for documents, matching the `vK:E` word syntax.
fn labelled(kind: CosetKind) -> CosetKind {
    match kind {
        CosetKind::Trivial => CosetKind::Trivial,
        CosetKind::Single(i) => CosetKind::Single(i + 1),
        CosetKind::Pair(i) => CosetKind::Pair(i + 1),
    }
}

/// JSON document for a ball. Vertex-group labels are 1-based.
pub fn ball_to_json(b: &ComplexBall) -> serde_json::Value {
    let doc = BallJson {
        schema: crate::SCHEMA,
        presentation: b.presentation(),
        radius: b.radius(),
        vertices: b
            .vertices()
            .iter()
            .enumerate()
            .map(|(id, v)| VertexJson {
                id,
                kind: labelled(CosetKind::Pair(v.index)),
                rep: v.rep.to_string(),
                interior: v.interior,
            })
            .collect(),
        edges: b
            .edges()
            .iter()
            .enumerate()
            .map(|(id, e)| EdgeJson {
                id,
                label: e.label + 1,
                rep: e.rep.to_string(),
                ends: e.ends,
                interior: e.interior,
            })
            .collect(),
        polygons: b
            .polygons()
            .iter()
            .enumerate()
            .map(|(id, f)| PolygonJson {
                id,
                rep: f.rep.to_string(),
                corners: f.corners.clone(),
                sides: f.sides.clone(),
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("serializable")
}

pub fn squares_to_json(b: &ComplexBall, sq: &SquareComplex) -> serde_json::Value {
    let doc = SquareJson {
        schema: crate::SCHEMA,
        presentation: b.presentation(),
        radius: b.radius(),
        subdivided: true,
        vertices: sq
            .vertices()
            .iter()
            .enumerate()
            .map(|(id, v)| VertexJson {
                id,
                kind: labelled(v.kind),
                rep: v.rep.to_string(),
                interior: v.interior,
            })
            .collect(),
        edges: sq.edges().to_vec(),
        squares: sq.squares(),
    };
    serde_json::to_value(doc).expect("serializable")
}

/// Graphviz rendering of the 1-skeleton of `X`, edges labelled 1-based.
pub fn ball_to_dot(b: &ComplexBall) -> String {
    let mut out = String::from("graph X {\n");
    for v in 0..b.vertices().len() {
        let _ = writeln!(out, "  v{v} [label=\"{}\"];", b.vertex_name(v));
    }
    for e in b.edges() {
        let _ = writeln!(
            out,
            "  v{} -- v{} [label=\"{}\"];",
            e.ends[0],
            e.ends[1],
            e.label + 1
        );
    }
    out.push_str("}\n");
    out
}

/// Graphviz rendering of the 1-skeleton of `X′`.
pub fn squares_to_dot(sq: &SquareComplex) -> String {
    let mut out = String::from("graph Xprime {\n");
    for v in 0..sq.vertices().len() {
        let _ = writeln!(out, "  v{v} [label=\"{}\"];", sq.vertex_name(v));
    }
    for [a, z] in sq.edges() {
        let _ = writeln!(out, "  v{a} -- v{z};");
    }
    out.push_str("}\n");
    out
}
