//! Tree-walls of the Davis complex and their crossing graph.
//!
//! A tree-wall is a maximal connected subgraph of the 1-skeleton of `X`
//! whose edges all carry the same label. Two edges of label `i` meeting at a
//! vertex never lie in a common polygon, so walls grow through every vertex
//! they reach. The wall through `uG_i` is the orbit of that edge under
//! `u⟨G_{i−1},G_i,G_{i+1}⟩u⁻¹`, which gives each wall an algebraic key: its
//! label together with the minimal representative of `u⟨G_{i−1},G_i,G_{i+1}⟩`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::davis::{pair_set, subdivide, ComplexBall, CosetKind};
use crate::error::{Error, Result};
use crate::report::AuditReport;
use crate::word::{GroupElement, ParabolicRef, Presentation, VertexSet};

/// A tree-wall restricted to a ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeWall {
    pub label: usize,
    /// Smallest edge id of the wall.
    pub seed: usize,
    /// Edge ids, ascending.
    pub edges: Vec<usize>,
    /// Vertex ids, ascending.
    pub vertices: Vec<usize>,
    /// Minimal representative of `u⟨G_{i−1},G_i,G_{i+1}⟩` for any edge `uG_i`.
    pub key: GroupElement,
}

impl TreeWall {
    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// `stab(T) = u⟨G_{i−1},G_i,G_{i+1}⟩u⁻¹`.
    pub fn stabilizer(&self, p: &Presentation) -> ParabolicRef {
        p.parabolic(p.closed_star(self.label), &self.key)
    }

    pub fn name(&self, b: &ComplexBall) -> String {
        format!("T[{}]", b.edge_name(self.seed))
    }
}

/// Algebraic key of the wall through an edge.
pub fn wall_key(b: &ComplexBall, e: usize) -> (usize, GroupElement) {
    let p = b.presentation();
    let edge = b.edge(e);
    (edge.label, p.coset_rep(&edge.rep, p.closed_star(edge.label)))
}

/// Flood-fills the wall through `e` across same-label edges.
pub fn treewall_of_edge(b: &ComplexBall, e: usize) -> Result<TreeWall> {
    if e >= b.edges().len() {
        return Err(Error::Cell(format!("edge id {e} is not in the ball")));
    }
    let label = b.edge(e).label;
    let mut edges = BTreeSet::from([e]);
    let mut vertices = BTreeSet::new();
    let mut queue = VecDeque::from([e]);
    while let Some(x) = queue.pop_front() {
        for &v in &b.edge(x).ends {
            if !vertices.insert(v) {
                continue;
            }
            for &y in &b.vertex(v).edges {
                if b.edge(y).label == label && edges.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    let edges: Vec<usize> = edges.into_iter().collect();
    Ok(TreeWall {
        label,
        seed: edges[0],
        key: wall_key(b, edges[0]).1,
        edges,
        vertices: vertices.into_iter().collect(),
    })
}

/// Every wall meeting the ball, ordered by seed edge.
pub fn all_walls(b: &ComplexBall) -> Vec<TreeWall> {
    let mut seen = vec![false; b.edges().len()];
    let mut walls = Vec::new();
    for e in 0..b.edges().len() {
        if seen[e] {
            continue;
        }
        let w = treewall_of_edge(b, e).expect("edge in ball");
        for &x in &w.edges {
            seen[x] = true;
        }
        walls.push(w);
    }
    walls
}

/// Walls as nodes, arcs between walls sharing a vertex.
#[derive(Clone, Debug)]
pub struct CrossingGraph {
    pub walls: Vec<TreeWall>,
    pub arcs: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    edge_wall: Vec<Option<usize>>,
}

/// The crossing graph on the walls that contain an interior edge.
pub fn crossing_graph(b: &ComplexBall) -> CrossingGraph {
    let walls: Vec<TreeWall> = all_walls(b)
        .into_iter()
        .filter(|w| w.edges.iter().any(|&e| b.edge(e).interior))
        .collect();
    let mut edge_wall = vec![None; b.edges().len()];
    for (k, w) in walls.iter().enumerate() {
        for &e in &w.edges {
            edge_wall[e] = Some(k);
        }
    }
    let mut arcs = BTreeSet::new();
    for v in b.vertices() {
        let through: BTreeSet<usize> = v.edges.iter().filter_map(|&e| edge_wall[e]).collect();
        let through: Vec<usize> = through.into_iter().collect();
        for (k, &a) in through.iter().enumerate() {
            for &c in &through[k + 1..] {
                arcs.insert((a, c));
            }
        }
    }
    let mut adjacency = vec![Vec::new(); walls.len()];
    for &(a, c) in &arcs {
        adjacency[a].push(c);
        adjacency[c].push(a);
    }
    CrossingGraph {
        walls,
        arcs: arcs.into_iter().collect(),
        adjacency,
        edge_wall,
    }
}

impl CrossingGraph {
    pub fn neighbors(&self, w: usize) -> &[usize] {
        &self.adjacency[w]
    }

    /// Index of the wall containing an edge, if that wall is a node.
    pub fn wall_of_edge(&self, e: usize) -> Option<usize> {
        self.edge_wall[e]
    }

    /// Path-metric distances from one wall.
    pub fn distances_from(&self, w: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.walls.len()];
        dist[w] = Some(0);
        let mut queue = VecDeque::from([w]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &y in &self.adjacency[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Distance in the ball's crossing graph. The ball only sees some of
    /// the crossings, so this is an upper bound for the distance in `X`;
    /// distances 0 and 1 are exact.
    pub fn delta(&self, a: usize, c: usize) -> Option<usize> {
        self.distances_from(a)[c]
    }

    /// Walls crossing both `a` and `c`.
    pub fn common_neighbors(&self, a: usize, c: usize) -> Vec<usize> {
        let na: HashSet<_> = self.adjacency[a].iter().collect();
        let mut out: Vec<usize> = self.adjacency[c]
            .iter()
            .copied()
            .filter(|x| na.contains(x))
            .collect();
        out.sort_unstable();
        out
    }

    /// Vertices shared by two walls.
    pub fn shared_vertices(&self, a: usize, c: usize) -> Vec<usize> {
        let wc = &self.walls[c];
        self.walls[a]
            .vertices
            .iter()
            .copied()
            .filter(|&v| wc.contains_vertex(v))
            .collect()
    }

    pub fn to_dot(&self, b: &ComplexBall) -> String {
        let mut out = String::from("graph crossing {\n");
        for (k, w) in self.walls.iter().enumerate() {
            out.push_str(&format!(
                "  w{k} [label=\"{}\" label_index=\"{}\"];\n",
                w.name(b),
                w.label + 1
            ));
        }
        for (a, c) in &self.arcs {
            out.push_str(&format!("  w{a} -- w{c};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Whether two walls meet in `X`, decided algebraically: walls with labels
/// `i` and `i + 1` and keys `u`, `w` meet iff `u⁻¹w ∈ K_i·K_{i+1}` where
/// `K_i = ⟨G_{i−1},G_i,G_{i+1}⟩`. Walls whose labels are equal or not
/// adjacent never meet unless they coincide.
pub fn walls_intersect(p: &Presentation, a: &TreeWall, c: &TreeWall) -> bool {
    if a.label == c.label {
        return a.key == c.key;
    }
    if !p.adjacent(a.label, c.label) {
        return false;
    }
    let q = p.mul(&p.inv(&a.key), &c.key);
    p.in_double_coset_product(&q, p.closed_star(a.label), p.closed_star(c.label))
}

/// `g` fixes every interior edge of the wall (or its seed when no edge is
/// interior).
pub fn fixes_wall(b: &ComplexBall, w: &TreeWall, g: &GroupElement) -> bool {
    let mut interior = w.edges.iter().copied().filter(|&e| b.edge(e).interior).peekable();
    if interior.peek().is_none() {
        return b.translate_edge(g, w.seed) == Some(w.seed);
    }
    interior.all(|e| b.translate_edge(g, e) == Some(e))
}

/// Whether `g` maps the wall into itself, judged on the edges whose image
/// stays in the ball. `None` when no image is in the ball.
pub fn stabilizes_wall(b: &ComplexBall, w: &TreeWall, g: &GroupElement) -> Option<bool> {
    let mut seen = false;
    for &e in &w.edges {
        if let Some(ge) = b.translate_edge(g, e) {
            if !w.contains_edge(ge) {
                return Some(false);
            }
            seen = true;
        }
    }
    seen.then_some(true)
}

/// Elements of length at most `max_len` fixing the wall.
pub fn wall_fixator_truncated(b: &ComplexBall, w: &TreeWall, max_len: usize) -> Result<Vec<GroupElement>> {
    let elements = b.presentation().enumerate_ball_elements(max_len)?;
    Ok(fixator_among(b, w, &elements))
}

pub fn fixator_among(b: &ComplexBall, w: &TreeWall, elements: &[GroupElement]) -> Vec<GroupElement> {
    elements
        .par_iter()
        .filter(|g| fixes_wall(b, w, g))
        .cloned()
        .collect()
}

/// Elements of length at most `max_len` stabilizing the wall, and the
/// number of elements that could not be decided on the ball.
pub fn wall_stabilizer_truncated(
    b: &ComplexBall,
    w: &TreeWall,
    max_len: usize,
) -> Result<(Vec<GroupElement>, usize)> {
    let elements = b.presentation().enumerate_ball_elements(max_len)?;
    Ok(stabilizer_among(b, w, &elements))
}

pub fn stabilizer_among(b: &ComplexBall, w: &TreeWall, elements: &[GroupElement]) -> (Vec<GroupElement>, usize) {
    let verdicts: Vec<Option<bool>> = elements.par_iter().map(|g| stabilizes_wall(b, w, g)).collect();
    let mut members = Vec::new();
    let mut undecided = 0;
    for (g, v) in elements.iter().zip(verdicts) {
        match v {
            Some(true) => members.push(g.clone()),
            Some(false) => {}
            None => undecided += 1,
        }
    }
    (members, undecided)
}

/// Elements of length at most `max_len` stabilizing both walls, and the
/// number of undecided elements.
pub fn pair_stabilizer_truncated(
    b: &ComplexBall,
    w1: &TreeWall,
    w2: &TreeWall,
    max_len: usize,
) -> Result<(Vec<GroupElement>, usize)> {
    let elements = b.presentation().enumerate_ball_elements(max_len)?;
    Ok(pair_stabilizer_among(b, w1, w2, &elements))
}

pub fn pair_stabilizer_among(
    b: &ComplexBall,
    w1: &TreeWall,
    w2: &TreeWall,
    elements: &[GroupElement],
) -> (Vec<GroupElement>, usize) {
    let verdicts: Vec<Option<bool>> = elements
        .par_iter()
        .map(|g| match (stabilizes_wall(b, w1, g), stabilizes_wall(b, w2, g)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        })
        .collect();
    let mut members = Vec::new();
    let mut undecided = 0;
    for (g, v) in elements.iter().zip(verdicts) {
        match v {
            Some(true) => members.push(g.clone()),
            Some(false) => {}
            None => undecided += 1,
        }
    }
    (members, undecided)
}

/// Vertices of one wall closest to another, in the 1-skeleton of the ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinSet {
    pub vertices: Vec<usize>,
    pub distance: usize,
    pub diameter: usize,
}

pub fn min_set(b: &ComplexBall, w1: &TreeWall, w2: &TreeWall) -> Result<MinSet> {
    let dist = b.distances_from(&w2.vertices);
    let distance = w1
        .vertices
        .iter()
        .filter_map(|&v| dist[v])
        .min()
        .ok_or_else(|| Error::Cell("walls are not connected in the ball".into()))?;
    let vertices: Vec<usize> = w1
        .vertices
        .iter()
        .copied()
        .filter(|&v| dist[v] == Some(distance))
        .collect();
    let mut diameter = 0;
    for &v in &vertices {
        let dv = b.distances_from(&[v]);
        for &u in &vertices {
            let d = dv[u].ok_or_else(|| Error::Cell("minimal set is disconnected".into()))?;
            diameter = diameter.max(d);
        }
    }
    Ok(MinSet {
        vertices,
        distance,
        diameter,
    })
}

/// Tree property of every wall: connected, `V − E = 1`, maximal, no two
/// edges at a vertex in a common polygon; the part spanned by interior
/// edges is again a tree; flood-fill components agree with algebraic keys.
pub fn tree_audit(b: &ComplexBall) -> AuditReport {
    let mut report = AuditReport::new();
    let walls = all_walls(b);
    let mut keys = HashSet::new();
    for w in &walls {
        let name = w.name(b);
        report.expect(w.vertices.len() == w.edges.len() + 1, || {
            (
                name.clone(),
                format!("{} vertices, {} edges", w.vertices.len(), w.edges.len()),
            )
        });
        let maximal = w.vertices.iter().all(|&v| {
            b.vertex(v)
                .edges
                .iter()
                .all(|&e| b.edge(e).label != w.label || w.contains_edge(e))
        });
        report.expect(maximal, || (name.clone(), "not maximal".into()));
        let straight = w.vertices.iter().all(|&v| {
            let at: Vec<usize> = b
                .vertex(v)
                .edges
                .iter()
                .copied()
                .filter(|e| w.contains_edge(*e))
                .collect();
            at.iter()
                .enumerate()
                .all(|(k, &x)| at[k + 1..].iter().all(|&y| !b.share_polygon(x, y)))
        });
        report.expect(straight, || (name.clone(), "two edges in one polygon".into()));

        let interior: Vec<usize> = w.edges.iter().copied().filter(|&e| b.edge(e).interior).collect();
        if interior.is_empty() {
            report.skip();
        } else {
            let (v, comps) = forest_stats(b, &interior);
            report.expect(comps == 1 && v == interior.len() + 1, || {
                (
                    name.clone(),
                    format!("interior part: {v} vertices, {} edges, {comps} components", interior.len()),
                )
            });
        }

        let consistent = w.edges.iter().all(|&e| wall_key(b, e) == (w.label, w.key.clone()));
        report.expect(consistent && keys.insert((w.label, w.key.clone())), || {
            (name.clone(), "flood-fill disagrees with algebraic key".into())
        });
    }
    report
}

/// Vertex count and number of connected components of an edge set.
fn forest_stats(b: &ComplexBall, edges: &[usize]) -> (usize, usize) {
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut parent: Vec<usize> = Vec::new();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let mut id = |v: usize, parent: &mut Vec<usize>| {
        *ids.entry(v).or_insert_with(|| {
            parent.push(parent.len());
            parent.len() - 1
        })
    };
    let mut comps = 0;
    for &e in edges {
        let [a, c] = b.edge(e).ends;
        let (a, c) = (id(a, &mut parent), id(c, &mut parent));
        let (ra, rc) = (find(&mut parent, a), find(&mut parent, c));
        if ra != rc {
            parent[ra] = rc;
        }
    }
    for x in 0..parent.len() {
        if find(&mut parent, x) == x {
            comps += 1;
        }
    }
    (parent.len(), comps)
}

/// Walls chosen for stabilizer audits: those through the base polygon
/// first, then by key length and seed.
pub fn audit_walls(g: &CrossingGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.walls.len()).collect();
    order.sort_by_key(|&k| (g.walls[k].key.len(), g.walls[k].seed));
    order
}

/// Fixator of each wall equals the stabilizer of its seed edge, within
/// elements of length at most `max_len`.
pub fn fixator_audit(b: &ComplexBall, g: &CrossingGraph, walls: &[usize], max_len: usize) -> Result<AuditReport> {
    let p = b.presentation();
    let elements = p.enumerate_ball_elements(max_len)?;
    let mut report = AuditReport::new();
    for &k in walls {
        let w = &g.walls[k];
        let seed = b.edge(w.seed);
        let expected = p.parabolic(VertexSet::single(seed.label), &seed.rep);
        let fix: HashSet<GroupElement> = fixator_among(b, w, &elements).into_iter().collect();
        for h in &elements {
            let want = p.parabolic_member(h, &expected);
            let got = fix.contains(h);
            report.expect(got == want, || {
                (w.name(b), format!("h = {h}: fixes {got}, in edge stabilizer {want}"))
            });
        }
    }
    Ok(report)
}

/// Stabilizer of each wall equals `u⟨G_{i−1},G_i,G_{i+1}⟩u⁻¹`, within
/// elements of length at most `max_len` whose action is visible in the
/// ball.
pub fn stabilizer_audit(b: &ComplexBall, g: &CrossingGraph, walls: &[usize], max_len: usize) -> Result<AuditReport> {
    let p = b.presentation();
    let elements = p.enumerate_ball_elements(max_len)?;
    let mut report = AuditReport::new();
    for &k in walls {
        let w = &g.walls[k];
        let expected = w.stabilizer(p);
        let verdicts: Vec<Option<bool>> = elements.par_iter().map(|h| stabilizes_wall(b, w, h)).collect();
        for (h, v) in elements.iter().zip(verdicts) {
            match v {
                None => report.skip(),
                Some(got) => {
                    let want = p.parabolic_member(h, &expected);
                    report.expect(got == want, || {
                        (w.name(b), format!("h = {h}: stabilizes {got}, in parabolic {want}"))
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Outcome of classifying one pair of walls by their crossing distance.
#[derive(Clone, Debug, Serialize)]
pub struct PairCase {
    pub walls: (String, String),
    pub delta: usize,
    /// False when the ball may hide a shorter connection.
    pub exact: bool,
    pub stabilizer_size: usize,
    pub undecided: usize,
    pub ok: bool,
    pub detail: String,
}

/// Pair stabilizers against the classification by crossing distance:
/// distance 1 gives the conjugate `⟨G_i,G_{i+1}⟩` of the shared vertex,
/// distance 2 the conjugate `G_k` of the unique wall crossing both, and
/// distance at least 3 the trivial group.
pub fn classify_pair(
    b: &ComplexBall,
    g: &CrossingGraph,
    a: usize,
    c: usize,
    elements: &[GroupElement],
) -> PairCase {
    let p = b.presentation();
    let (wa, wc) = (&g.walls[a], &g.walls[c]);
    let delta = g.delta(a, c).unwrap_or(usize::MAX);
    let (members, undecided) = pair_stabilizer_among(b, wa, wc, elements);
    let members: HashSet<GroupElement> = members.into_iter().collect();
    let meets = walls_intersect(p, wa, wc);
    let mut detail = String::new();
    let expected: Option<ParabolicRef> = match delta {
        1 => {
            let shared = g.shared_vertices(a, c);
            if shared.len() != 1 || !meets {
                detail = format!("{} shared vertices, algebraic meet {meets}", shared.len());
                None
            } else {
                let v = b.vertex(shared[0]);
                Some(p.parabolic(pair_set(p, v.index), &v.rep))
            }
        }
        2 => {
            let middle = g.common_neighbors(a, c);
            if middle.len() != 1 || meets {
                detail = format!("{} walls cross both, algebraic meet {meets}", middle.len());
                None
            } else {
                let m = &g.walls[middle[0]];
                let seed = b.edge(m.seed);
                Some(p.parabolic(VertexSet::single(seed.label), &seed.rep))
            }
        }
        _ => {
            if meets {
                detail = "walls meet algebraically".into();
                None
            } else {
                Some(p.parabolic(VertexSet::EMPTY, &GroupElement::identity()))
            }
        }
    };
    let ok = match &expected {
        None => false,
        Some(par) => {
            let mut ok = true;
            for h in elements {
                let want = p.parabolic_member(h, par);
                let got = members.contains(h);
                if got != want && stabilizes_pair_decided(b, wa, wc, h) {
                    ok = false;
                    detail = format!("h = {h}: in pair stabilizer {got}, expected {want}");
                    break;
                }
            }
            ok
        }
    };
    PairCase {
        walls: (wa.name(b), wc.name(b)),
        delta,
        exact: delta <= 2,
        stabilizer_size: members.len(),
        undecided,
        ok,
        detail,
    }
}

fn stabilizes_pair_decided(b: &ComplexBall, w1: &TreeWall, w2: &TreeWall, h: &GroupElement) -> bool {
    !matches!(
        (stabilizes_wall(b, w1, h), stabilizes_wall(b, w2, h)),
        (None, None) | (None, Some(true)) | (Some(true), None)
    )
}

/// Runs [`classify_pair`] on up to `per_delta` pairs at distance 1 and at
/// distance 2, and on the first pair found at distance 3 or more. Pairs
/// are taken in [`audit_walls`] order.
pub fn pair_audit(
    b: &ComplexBall,
    g: &CrossingGraph,
    per_delta: usize,
    max_len: usize,
) -> Result<(AuditReport, Vec<PairCase>)> {
    let elements = b.presentation().enumerate_ball_elements(max_len)?;
    let order = audit_walls(g);
    let mut picked: [Vec<(usize, usize)>; 3] = Default::default();
    'outer: for (ka, &a) in order.iter().enumerate() {
        let dist = g.distances_from(a);
        for &c in &order[ka + 1..] {
            let Some(d) = dist[c] else { continue };
            let slot = match d {
                1 => 0,
                2 => 1,
                _ => 2,
            };
            let cap = if slot == 2 { 1 } else { per_delta };
            if picked[slot].len() < cap {
                picked[slot].push((a, c));
            }
            if picked.iter().enumerate().all(|(s, v)| v.len() >= if s == 2 { 1 } else { per_delta }) {
                break 'outer;
            }
        }
    }
    let mut report = AuditReport::new();
    let mut cases = Vec::new();
    for (a, c) in picked.into_iter().flatten() {
        let case = classify_pair(b, g, a, c, &elements);
        report.expect(case.ok, || {
            (
                format!("{} & {}", case.walls.0, case.walls.1),
                format!("delta {}: {}", case.delta, case.detail),
            )
        });
        cases.push(case);
    }
    Ok((report, cases))
}

/// No three walls pairwise cross.
pub fn triple_audit(g: &CrossingGraph) -> AuditReport {
    let mut report = AuditReport::new();
    for &(a, c) in &g.arcs {
        let common = g.common_neighbors(a, c);
        report.expect(common.is_empty(), || {
            (format!("walls {a}, {c}"), format!("also crossed by {common:?}"))
        });
    }
    report
}

/// For each sampled pair of walls, the closest vertices of the first wall
/// to the second span a set of diameter at most twice their distance.
pub fn min_set_audit(b: &ComplexBall, g: &CrossingGraph, pairs: usize) -> AuditReport {
    let mut report = AuditReport::new();
    let order = audit_walls(g);
    let mut done = 0;
    'outer: for (ka, &a) in order.iter().enumerate() {
        for &c in &order[ka + 1..] {
            if done >= pairs {
                break 'outer;
            }
            match min_set(b, &g.walls[a], &g.walls[c]) {
                Ok(m) => {
                    let meets = walls_intersect(b.presentation(), &g.walls[a], &g.walls[c]);
                    let ok = m.diameter <= 2 * m.distance
                        && (m.distance != 0 || (meets && m.vertices.len() == 1));
                    report.expect(ok, || {
                        (
                            format!("{} & {}", g.walls[a].name(b), g.walls[c].name(b)),
                            format!("distance {}, diameter {}", m.distance, m.diameter),
                        )
                    });
                }
                Err(_) => report.skip(),
            }
            done += 1;
        }
    }
    report
}

/// Each hyperplane of `X′` has two combinatorial sides, and exactly one of
/// them lies in the 1-skeleton of `X` with a single label.
pub fn hyperplane_treewall_audit(b: &ComplexBall) -> AuditReport {
    let sq = subdivide(b);
    let ne = sq.edges().len();
    let mut dual = UnionFind::new(ne);
    for ids in sq.square_edges() {
        dual.union(ids[0], ids[2]);
        dual.union(ids[1], ids[3]);
    }
    let mut classes: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in 0..ne {
        classes.entry(dual.find(e)).or_default().push(e);
    }
    let mut crossing: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (s, ids) in sq.square_edges().iter().enumerate() {
        crossing.entry(dual.find(ids[0])).or_default().push((s, 0));
        crossing.entry(dual.find(ids[1])).or_default().push((s, 1));
    }
    let mut roots: Vec<usize> = classes.keys().copied().collect();
    roots.sort_unstable();
    let mut report = AuditReport::new();
    for root in roots {
        let edges = &classes[&root];
        let truncated = !edges.iter().all(|&e| sq.edge_is_interior(e));
        if !edges.iter().any(|&e| sq.edge_is_interior(e)) {
            report.skip();
            continue;
        }
        let mut side = UnionFind::new(sq.vertices().len());
        for &(s, k) in &crossing[&root] {
            let c = sq.squares()[s];
            // dual sides are k and k + 2; the other two sides run along the carrier
            side.union(c[(k + 1) % 4], c[(k + 2) % 4]);
            side.union(c[(k + 3) % 4], c[k]);
        }
        let mut sides: BTreeSet<usize> = BTreeSet::new();
        let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
        for &e in edges {
            for &v in &sq.edges()[e] {
                let r = side.find(v);
                sides.insert(r);
                members.entry(r).or_default().push(v);
            }
        }
        let describe = || sq.vertex_name(sq.edges()[edges[0]][0]);
        if sides.len() != 2 {
            if truncated {
                report.skip();
            } else {
                report.fail(describe(), format!("{} sides", sides.len()));
            }
            continue;
        }
        let in_skeleton = |vs: &Vec<usize>| {
            let mut labels = BTreeSet::new();
            for &v in vs {
                match sq.vertices()[v].kind {
                    CosetKind::Trivial => return false,
                    CosetKind::Single(i) => {
                        labels.insert(i);
                    }
                    CosetKind::Pair(_) => {}
                }
            }
            labels.len() == 1
        };
        let wall_sides = sides.iter().filter(|r| in_skeleton(&members[r])).count();
        report.expect(wall_sides == 1, || {
            (describe(), format!("{wall_sides} sides are tree-walls"))
        });
    }
    report
}

/// For `T_i`, `T_{i+1}` through the base polygon, every interior vertex of
/// `T_i` has the shared corner as its unique closest point on `T_{i+1}`.
pub fn projection_audit(b: &ComplexBall) -> AuditReport {
    let p = b.presentation();
    let e = GroupElement::identity();
    let mut report = AuditReport::new();
    for i in 0..p.n() {
        let j = p.shift(i, 1);
        let (Some(ei), Some(ej), Some(u)) = (b.edge_id(i, &e), b.edge_id(j, &e), b.vertex_id(i, &e)) else {
            report.skip();
            continue;
        };
        let ti = treewall_of_edge(b, ei).expect("edge in ball");
        let tj = treewall_of_edge(b, ej).expect("edge in ball");
        for &v in &ti.vertices {
            if !b.vertex(v).interior {
                report.skip();
                continue;
            }
            let dist = b.distances_from(&[v]);
            let best = tj.vertices.iter().filter_map(|&x| dist[x]).min();
            let nearest: Vec<usize> = tj
                .vertices
                .iter()
                .copied()
                .filter(|&x| dist[x].is_some() && dist[x] == best)
                .collect();
            report.expect(nearest == [u], || {
                (
                    b.vertex_name(v),
                    format!("nearest points on T{} are {nearest:?}", j + 1),
                )
            });
        }
    }
    report
}

/// For interior vertices `v` and walls `T`, the stabilizer of `v` (within
/// elements of length at most `max_len`) stabilizes `T` exactly when `v`
/// lies on `T`. Vertices whose stabilizer generators `u·s·u⁻¹` are longer
/// than `max_len` are skipped, since their truncated stabilizer is too
/// small to say anything.
pub fn vertex_stabilizer_audit(
    b: &ComplexBall,
    g: &CrossingGraph,
    walls: &[usize],
    max_len: usize,
) -> Result<AuditReport> {
    let p = b.presentation();
    let elements = p.enumerate_ball_elements(max_len)?;
    let interior: Vec<usize> = (0..b.vertices().len()).filter(|&v| b.vertex(v).interior).collect();
    let cases: Vec<AuditReport> = interior
        .par_iter()
        .map(|&v| {
            let mut report = AuditReport::new();
            let vx = b.vertex(v);
            if 2 * vx.rep.len() + 1 > max_len {
                report.skip();
                return report;
            }
            let stab: Vec<&GroupElement> = elements
                .iter()
                .filter(|h| b.translate_vertex(h, v) == Some(v))
                .collect();
            for &k in walls {
                let w = &g.walls[k];
                let verdicts: Vec<Option<bool>> = stab.iter().map(|h| stabilizes_wall(b, w, h)).collect();
                if verdicts.iter().any(Option::is_none) {
                    report.skip();
                    continue;
                }
                let all = verdicts.iter().all(|x| *x == Some(true));
                let on = w.contains_vertex(v);
                report.expect(all == on, || {
                    (
                        format!("{} / {}", b.vertex_name(v), w.name(b)),
                        format!("stabilizes {all}, on wall {on}"),
                    )
                });
            }
            report
        })
        .collect();
    let mut out = AuditReport::new();
    for r in cases {
        out.merge(r);
    }
    Ok(out)
}

/// For pairs of vertices `x`, `y` on a wall `T`, the bounded closure of
/// `stab(x) ∪ stab(y)` reaches every syllable of `stab(T)` exactly when `x`
/// and `y` are adjacent. Computed after conjugating `T`'s key to the
/// identity, with generators and products of length at most `max_len`.
pub fn adjacency_closure_audit(
    b: &ComplexBall,
    g: &CrossingGraph,
    walls: &[usize],
    max_len: usize,
) -> AuditReport {
    let p = b.presentation();
    let mut report = AuditReport::new();
    for &k in walls {
        let w = &g.walls[k];
        let key_inv = p.inv(&w.key);
        let star = p.closed_star(w.label);
        let targets: Vec<GroupElement> = p
            .syllables_in(star)
            .unwrap_or_default()
            .into_iter()
            .map(|s| p.from_syllable(s))
            .collect();
        let verts: Vec<(usize, GroupElement)> = w
            .vertices
            .iter()
            .filter(|&&v| b.vertex(v).interior)
            .map(|&v| (v, p.coset_rep(&p.mul(&key_inv, &b.vertex(v).rep), pair_set(p, b.vertex(v).index))))
            .filter(|(_, u)| u.len() <= 1)
            .collect();
        let stab_gens = |v: usize, u: &GroupElement| -> Vec<GroupElement> {
            let ui = p.inv(u);
            p.syllables_in(pair_set(p, b.vertex(v).index))
                .unwrap_or_default()
                .into_iter()
                .map(|s| p.mul_all([u, &p.from_syllable(s), &ui]))
                .collect()
        };
        for (kx, (x, ux)) in verts.iter().enumerate() {
            for (y, uy) in &verts[kx + 1..] {
                let mut gens = stab_gens(*x, ux);
                gens.extend(stab_gens(*y, uy));
                let closure: HashSet<GroupElement> = p.bounded_closure(&gens, max_len).into_iter().collect();
                let saturated = targets.iter().all(|t| closure.contains(t));
                let adjacent = b.edge_between(*x, *y).is_some();
                if adjacent && !saturated {
                    // the closure bound may be too small to reach every syllable
                    report.skip();
                    continue;
                }
                report.expect(saturated == adjacent, || {
                    (
                        format!("{} / {}", b.vertex_name(*x), b.vertex_name(*y)),
                        format!("saturated {saturated}, adjacent {adjacent}"),
                    )
                });
            }
        }
    }
    report
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::davis::build_ball;
    use crate::reference;

    fn base_wall(b: &ComplexBall, i: usize) -> TreeWall {
        treewall_of_edge(b, b.edge_id(i, &GroupElement::identity()).unwrap()).unwrap()
    }

    #[test]
    fn wall_of_the_single_polygon_is_one_edge() {
        let p = reference::c5_z2();
        let b = build_ball(&p, 0).unwrap();
        for i in 0..5 {
            let w = base_wall(&b, i);
            assert_eq!(w.edges.len(), 1);
            assert_eq!(w.vertices.len(), 2);
        }
    }

    #[test]
    fn wall_degrees_match_neighbouring_groups() {
        let p = reference::c5_mixed();
        let b = build_ball(&p, 2).unwrap();
        for i in 0..5 {
            let w = base_wall(&b, i);
            let e = b.edge(w.seed);
            for (k, &v) in e.ends.iter().enumerate() {
                let deg = b
                    .vertex(v)
                    .edges
                    .iter()
                    .filter(|&&x| w.contains_edge(x))
                    .count();
                // at g⟨G_{i−1},G_i⟩ the label-i edges are the G_{i−1}-translates
                let other = if k == 0 { p.shift(i, -1) } else { p.shift(i, 1) };
                assert_eq!(deg, p.group(other).order().unwrap());
            }
        }
    }

    #[test]
    fn base_walls_cross_consecutively() {
        let p = reference::c5_z2();
        let b = build_ball(&p, 3).unwrap();
        let g = crossing_graph(&b);
        let idx = |i: usize| g.wall_of_edge(b.edge_id(i, &GroupElement::identity()).unwrap()).unwrap();
        for i in 0..5 {
            let (a, c) = (idx(i), idx((i + 1) % 5));
            assert_eq!(g.delta(a, c), Some(1));
            assert_eq!(g.shared_vertices(a, c).len(), 1);
            assert_eq!(g.delta(a, idx((i + 2) % 5)), Some(2));
            assert!(walls_intersect(&p, &g.walls[a], &g.walls[c]));
            assert!(!walls_intersect(&p, &g.walls[a], &g.walls[idx((i + 2) % 5)]));
        }
    }

    #[test]
    fn fixator_of_a_base_wall_is_its_vertex_group() {
        let p = reference::c5_z3();
        let b = build_ball(&p, 2).unwrap();
        let w = base_wall(&b, 1);
        let fix = wall_fixator_truncated(&b, &w, 3).unwrap();
        assert_eq!(fix.len(), 3);
        assert!(fix.iter().all(|h| h.len() <= 1 && p.support(h).is_subset(VertexSet::single(1))));
        assert_eq!(wall_fixator_truncated(&b, &w, 0).unwrap(), vec![GroupElement::identity()]);
    }

    #[test]
    fn stabilizer_of_a_base_wall_at_length_one() {
        let p = reference::c5_z2();
        let b = build_ball(&p, 2).unwrap();
        let w = base_wall(&b, 0);
        let (stab, undecided) = wall_stabilizer_truncated(&b, &w, 1).unwrap();
        assert_eq!(undecided, 0);
        let supports: BTreeSet<usize> = stab.iter().flat_map(|h| p.support(h).iter()).collect();
        assert_eq!(stab.len(), 4);
        assert_eq!(supports, BTreeSet::from([0, 1, 4]));
    }

    #[test]
    fn wall_audits_on_reference_balls() {
        for (_, p) in reference::all() {
            let b = build_ball(&p, 2).unwrap();
            let g = crossing_graph(&b);
            let walls: Vec<usize> = audit_walls(&g).into_iter().take(6).collect();
            for (name, r) in [
                ("tree", tree_audit(&b)),
                ("triples", triple_audit(&g)),
                ("hyperplanes", hyperplane_treewall_audit(&b)),
                ("projection", projection_audit(&b)),
                ("fixator", fixator_audit(&b, &g, &walls, 2).unwrap()),
                ("stabilizer", stabilizer_audit(&b, &g, &walls, 2).unwrap()),
                ("min set", min_set_audit(&b, &g, 40)),
            ] {
                assert!(r.is_clean(), "{name} on {}: {:?}", p.describe(), r.violations);
                assert!(r.checked > 0, "{name} on {} checked nothing", p.describe());
            }
        }
    }
}
