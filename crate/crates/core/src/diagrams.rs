//! Disc diagrams over `X` and their combinatorial curvature.
//!
//! Curvature is kept as an integer number of quarter-turns (`π/2`):
//! a vertex carries `4 − 2χ(link) − n_v` and a face `4 − n_f`. For any
//! finite contractible planar complex the total is `2π`, i.e. four
//! quarter-turns.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::davis::ComplexBall;
use crate::error::{Error, Result};
use crate::report::AuditReport;

/// The curvature total of a disc, `2π`, in quarter-turns.
pub const GAUSS_BONNET_QUARTER_TURNS: i64 = 4;

/// Faces attached before a filling search gives up.
pub const MAX_FILL_FACES: usize = 16;

/// An exact curvature, counted in quarter-turns.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct QuarterTurns(pub i64);

impl std::ops::Add for QuarterTurns {
    type Output = QuarterTurns;
    fn add(self, o: QuarterTurns) -> QuarterTurns {
        QuarterTurns(self.0 + o.0)
    }
}

impl std::iter::Sum for QuarterTurns {
    fn sum<I: Iterator<Item = QuarterTurns>>(iter: I) -> QuarterTurns {
        QuarterTurns(iter.map(|q| q.0).sum())
    }
}

impl QuarterTurns {
    pub fn radians(self) -> f64 {
        self.0 as f64 * std::f64::consts::FRAC_PI_2
    }
}

impl fmt::Display for QuarterTurns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // reduce k·π/2 to lowest terms
        match self.0 {
            0 => write!(f, "0"),
            k if k % 2 == 0 => match k / 2 {
                1 => write!(f, "π"),
                -1 => write!(f, "-π"),
                m => write!(f, "{m}π"),
            },
            1 => write!(f, "π/2"),
            -1 => write!(f, "-π/2"),
            k => write!(f, "{k}π/2"),
        }
    }
}

/// A finite planar 2-complex: vertices `0..vertex_count`, edges as vertex
/// pairs and faces as closed boundary walks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscDiagram {
    pub vertex_count: usize,
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<Vec<usize>>,
    /// Ball vertex under each diagram vertex, when the diagram maps to `X`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub vertex_map: Vec<usize>,
    /// Ball polygon under each face.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub face_map: Vec<usize>,
}

/// Local data at a diagram vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VertexData {
    pub link_euler: i64,
    pub faces: usize,
    pub boundary: bool,
}

impl DiscDiagram {
    /// Validates the combinatorics: walks follow edges, every link is a
    /// circle or a disjoint union of arcs, the complex is connected and
    /// has Euler characteristic 1.
    pub fn new(vertex_count: usize, edges: Vec<[usize; 2]>, faces: Vec<Vec<usize>>) -> Result<Self> {
        let d = DiscDiagram {
            vertex_count,
            edges,
            faces,
            vertex_map: Vec::new(),
            face_map: Vec::new(),
        };
        d.validate()?;
        Ok(d)
    }

    /// One `n`-gon.
    pub fn polygon(n: usize) -> Self {
        let edges = (0..n).map(|k| [k, (k + 1) % n]).collect();
        DiscDiagram::new(n, edges, vec![(0..n).collect()]).expect("an n-gon is a disc")
    }

    /// Two `n`-gons glued along one edge.
    pub fn two_polygons(n: usize) -> Self {
        // shared edge 0–1; second face uses new vertices n..2n−2
        let mut edges: Vec<[usize; 2]> = (0..n).map(|k| [k, (k + 1) % n]).collect();
        let mut walk = vec![1, 0];
        let mut prev = 0;
        for k in 0..n - 2 {
            let v = n + k;
            edges.push([prev, v]);
            walk.push(v);
            prev = v;
        }
        edges.push([prev, 1]);
        DiscDiagram::new(2 * n - 2, edges, vec![(0..n).collect(), walk]).expect("two glued n-gons form a disc")
    }

    fn edge_index(&self) -> HashMap<(usize, usize), usize> {
        let mut idx = HashMap::new();
        for (k, &[a, b]) in self.edges.iter().enumerate() {
            idx.insert((a.min(b), a.max(b)), k);
        }
        idx
    }

    fn face_sides(&self) -> Vec<Vec<usize>> {
        let idx = self.edge_index();
        self.faces
            .iter()
            .map(|w| {
                (0..w.len())
                    .map(|k| {
                        let (a, b) = (w[k], w[(k + 1) % w.len()]);
                        idx[&(a.min(b), a.max(b))]
                    })
                    .collect()
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDiagram(msg));
        let v = self.vertex_count;
        let mut seen = HashSet::new();
        for &[a, b] in &self.edges {
            if a >= v || b >= v || a == b {
                return bad(format!("edge {a}–{b} is not between two distinct vertices"));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return bad(format!("edge {a}–{b} appears twice"));
            }
        }
        for (f, w) in self.faces.iter().enumerate() {
            if w.len() < 3 {
                return bad(format!("face {f} has a walk of length {}", w.len()));
            }
            for k in 0..w.len() {
                let (a, b) = (w[k], w[(k + 1) % w.len()]);
                if !seen.contains(&(a.min(b), a.max(b))) {
                    return bad(format!("face {f} walks {a}–{b}, which is not an edge"));
                }
            }
        }
        let mut uses = vec![0usize; self.edges.len()];
        for sides in self.face_sides() {
            for e in sides {
                uses[e] += 1;
            }
        }
        if let Some(e) = uses.iter().position(|&u| u > 2) {
            let [a, b] = self.edges[e];
            return bad(format!("edge {a}–{b} lies on {} face sides", uses[e]));
        }
        // connected
        if v > 0 {
            let mut adj = vec![Vec::new(); v];
            for &[a, b] in &self.edges {
                adj[a].push(b);
                adj[b].push(a);
            }
            let mut reached = vec![false; v];
            let mut stack = vec![0];
            reached[0] = true;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !std::mem::replace(&mut reached[y], true) {
                        stack.push(y);
                    }
                }
            }
            if let Some(x) = reached.iter().position(|r| !r) {
                return bad(format!("vertex {x} is not connected to vertex 0"));
            }
        }
        let chi = v as i64 - self.edges.len() as i64 + self.faces.len() as i64;
        if chi != 1 {
            return bad(format!("Euler characteristic is {chi}, not 1"));
        }
        for x in 0..v {
            self.link(x)?;
        }
        Ok(())
    }

    /// The link of a vertex as (nodes, arcs): one node per incident edge,
    /// one arc per face corner. Errors unless it is a circle or a union of
    /// arcs.
    fn link(&self, x: usize) -> Result<(Vec<usize>, Vec<(usize, usize)>)> {
        let nodes: Vec<usize> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.contains(&x))
            .map(|(k, _)| k)
            .collect();
        let mut arcs = Vec::new();
        for (f, sides) in self.face_sides().iter().enumerate() {
            let w = &self.faces[f];
            let len = w.len();
            for k in 0..len {
                if w[k] == x {
                    arcs.push((sides[(k + len - 1) % len], sides[k]));
                }
            }
        }
        let mut degree: HashMap<usize, usize> = nodes.iter().map(|&e| (e, 0)).collect();
        for &(a, b) in &arcs {
            *degree.get_mut(&a).expect("arc ends are incident edges") += 1;
            *degree.get_mut(&b).expect("arc ends are incident edges") += 1;
        }
        if degree.values().any(|&d| d > 2) {
            return Err(Error::InvalidDiagram(format!("link of vertex {x} branches")));
        }
        let closed = degree.values().all(|&d| d == 2) && !nodes.is_empty();
        if closed {
            // a circle must be connected
            let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
            for &(a, b) in &arcs {
                adj.entry(a).or_default().push(b);
                adj.entry(b).or_default().push(a);
            }
            let mut reached = HashSet::from([nodes[0]]);
            let mut stack = vec![nodes[0]];
            while let Some(y) = stack.pop() {
                for &z in &adj[&y] {
                    if reached.insert(z) {
                        stack.push(z);
                    }
                }
            }
            if reached.len() != nodes.len() {
                return Err(Error::InvalidDiagram(format!(
                    "link of vertex {x} is several circles"
                )));
            }
        } else if arcs.len() >= nodes.len() && !nodes.is_empty() {
            return Err(Error::InvalidDiagram(format!("link of vertex {x} contains a cycle")));
        }
        Ok((nodes, arcs))
    }

    pub fn vertex_data(&self, x: usize) -> Result<VertexData> {
        let (nodes, arcs) = self.link(x)?;
        let link_euler = nodes.len() as i64 - arcs.len() as i64;
        let faces = self.faces.iter().filter(|w| w.contains(&x)).count();
        Ok(VertexData {
            link_euler,
            faces,
            boundary: link_euler != 0 || nodes.is_empty(),
        })
    }

    /// `2π − π·χ(link(v)) − n_v·π/2`.
    pub fn vertex_curvature(&self, x: usize) -> Result<QuarterTurns> {
        let d = self.vertex_data(x)?;
        Ok(QuarterTurns(4 - 2 * d.link_euler - d.faces as i64))
    }

    /// `2π − n_f·π/2` with `n_f` the number of distinct vertices of the face.
    pub fn face_curvature(&self, f: usize) -> QuarterTurns {
        let distinct: HashSet<usize> = self.faces[f].iter().copied().collect();
        QuarterTurns(4 - distinct.len() as i64)
    }

    pub fn boundary_vertices(&self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for x in 0..self.vertex_count {
            if self.vertex_data(x)?.boundary {
                out.push(x);
            }
        }
        Ok(out)
    }
}

/// Per-cell curvature table and total.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaussBonnet {
    pub vertices: Vec<QuarterTurns>,
    pub faces: Vec<QuarterTurns>,
    pub total: QuarterTurns,
    pub target: QuarterTurns,
    pub ok: bool,
}

pub fn curvature_sum(d: &DiscDiagram) -> Result<GaussBonnet> {
    let vertices = (0..d.vertex_count)
        .map(|x| d.vertex_curvature(x))
        .collect::<Result<Vec<_>>>()?;
    let faces: Vec<QuarterTurns> = (0..d.faces.len()).map(|f| d.face_curvature(f)).collect();
    let total = vertices.iter().copied().sum::<QuarterTurns>() + faces.iter().copied().sum();
    let target = QuarterTurns(GAUSS_BONNET_QUARTER_TURNS);
    Ok(GaussBonnet {
        ok: total == target,
        vertices,
        faces,
        total,
        target,
    })
}

/// Checks the curvature identity on a diagram.
pub fn gauss_bonnet_check(d: &DiscDiagram) -> Result<AuditReport> {
    let gb = curvature_sum(d)?;
    let mut report = AuditReport::new();
    report.expect(gb.ok, || {
        (
            format!("diagram with {} vertices, {} faces", d.vertex_count, d.faces.len()),
            format!("curvature sums to {} instead of {}", gb.total, gb.target),
        )
    });
    Ok(report)
}

/// Curvature totals of the two reference diagrams (one `n`-gon; two
/// `n`-gons sharing an edge). Audits only run once both equal the target.
pub fn reference_totals(n: usize) -> Result<[QuarterTurns; 2]> {
    Ok([
        curvature_sum(&DiscDiagram::polygon(n))?.total,
        curvature_sum(&DiscDiagram::two_polygons(n))?.total,
    ])
}

pub fn convention_lock(n: usize) -> Result<()> {
    let totals = reference_totals(n)?;
    if totals.iter().all(|t| t.0 == GAUSS_BONNET_QUARTER_TURNS) {
        Ok(())
    } else {
        Err(Error::InvalidDiagram(format!(
            "reference diagrams sum to {} and {}, expected {}",
            totals[0],
            totals[1],
            QuarterTurns(GAUSS_BONNET_QUARTER_TURNS)
        )))
    }
}

/// Result of filling a loop of `X`.
#[derive(Clone, Debug, Serialize)]
pub struct Filling {
    pub diagram: DiscDiagram,
    pub curvature: GaussBonnet,
    pub reduced: bool,
    /// Face and boundary-vertex bounds used in the small-cancellation
    /// counting arguments.
    pub audit: AuditReport,
}

#[derive(Clone, Debug)]
struct FillState {
    // union-find over diagram vertices and edges
    vparent: Vec<usize>,
    vimage: Vec<usize>,
    eparent: Vec<usize>,
    eends: Vec<[usize; 2]>,
    faces: Vec<(Vec<usize>, Vec<usize>, usize)>,
    edge_faces: HashMap<usize, Vec<usize>>,
    boundary: Vec<usize>,
    boundary_edges: Vec<usize>,
}

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

impl FillState {
    fn new(images: &[usize]) -> Self {
        let l = images.len();
        FillState {
            vparent: (0..l).collect(),
            vimage: images.to_vec(),
            eparent: (0..l).collect(),
            eends: (0..l).map(|k| [k, (k + 1) % l]).collect(),
            faces: Vec::new(),
            edge_faces: HashMap::new(),
            boundary: (0..l).collect(),
            boundary_edges: (0..l).collect(),
        }
    }

    fn image(&self, k: usize) -> usize {
        self.vimage[self.boundary[k]]
    }

    fn rotate(&mut self, k: usize) {
        self.boundary.rotate_left(k);
        self.boundary_edges.rotate_left(k);
    }

    fn new_vertex(&mut self, image: usize) -> usize {
        let id = self.vparent.len();
        self.vparent.push(id);
        self.vimage.push(image);
        id
    }

    fn new_edge(&mut self, a: usize, b: usize) -> usize {
        let id = self.eparent.len();
        self.eparent.push(id);
        self.eends.push([a, b]);
        id
    }

    fn key(&self) -> Vec<usize> {
        let imgs: Vec<usize> = (0..self.boundary.len()).map(|k| self.image(k)).collect();
        (0..imgs.len())
            .map(|r| {
                let mut v = imgs.clone();
                v.rotate_left(r);
                v
            })
            .min()
            .unwrap_or_default()
    }

    /// Folds a backtrack `x → y → x` found at positions `k, k+1, k+2`.
    fn fold_spur(&mut self) -> bool {
        let l = self.boundary.len();
        if l == 0 {
            return false;
        }
        if l == 2 {
            let (e0, e1) = (self.boundary_edges[0], self.boundary_edges[1]);
            let (r0, r1) = (find(&mut self.eparent, e0), find(&mut self.eparent, e1));
            self.eparent[r1] = r0;
            self.boundary.clear();
            self.boundary_edges.clear();
            return true;
        }
        let Some(k) = (0..l).find(|&k| self.image(k) == self.image((k + 2) % l)) else {
            return false;
        };
        self.rotate(k);
        let (a, c) = (self.boundary[0], self.boundary[2]);
        let (ra, rc) = (find(&mut self.vparent, a), find(&mut self.vparent, c));
        self.vparent[rc] = ra;
        let (e0, e1) = (self.boundary_edges[0], self.boundary_edges[1]);
        let (r0, r1) = (find(&mut self.eparent, e0), find(&mut self.eparent, e1));
        self.eparent[r1] = r0;
        if let Some(fs) = self.edge_faces.remove(&r1) {
            self.edge_faces.entry(r0).or_default().extend(fs);
        }
        self.boundary.drain(1..3);
        self.boundary_edges.drain(0..2);
        // the kept vertex stands for both ends
        self.boundary[0] = a;
        true
    }

    /// Attaches polygon `f` along the first `t` boundary edges; `corners`
    /// lists its corners in walking order from the image of position 0.
    fn attach(&mut self, f: usize, corners: &[usize], t: usize) -> bool {
        let n = corners.len();
        let l = self.boundary.len();
        for k in 0..t {
            let e = find(&mut self.eparent, self.boundary_edges[k]);
            if let Some(fs) = self.edge_faces.get(&e) {
                if fs.iter().any(|&g| self.faces[g].2 == f) {
                    return false;
                }
            }
        }
        let start = self.boundary[0];
        let mut walk: Vec<usize> = self.boundary[..t.min(l)].to_vec();
        let mut sides: Vec<usize> = self.boundary_edges[..t].to_vec();
        let (boundary, boundary_edges) = if t == n {
            // the boundary closes up around the polygon
            let closing = self.boundary[n % l];
            let (ra, rc) = (find(&mut self.vparent, start), find(&mut self.vparent, closing));
            self.vparent[rc] = ra;
            if l == n {
                (Vec::new(), Vec::new())
            } else {
                let mut bd = vec![start];
                bd.extend_from_slice(&self.boundary[n + 1..]);
                (bd, self.boundary_edges[n..].to_vec())
            }
        } else {
            let end = self.boundary[t];
            walk.push(end);
            let inner: Vec<usize> = corners[t + 1..].iter().map(|&c| self.new_vertex(c)).collect();
            let mut new_edges = Vec::with_capacity(n - t);
            let mut prev = end;
            for &v in &inner {
                new_edges.push(self.new_edge(prev, v));
                prev = v;
            }
            new_edges.push(self.new_edge(prev, start));
            walk.extend_from_slice(&inner);
            sides.extend_from_slice(&new_edges);
            let mut bd = vec![start];
            bd.extend(inner.iter().rev());
            bd.extend_from_slice(&self.boundary[t..]);
            let mut be: Vec<usize> = new_edges.iter().rev().copied().collect();
            be.extend_from_slice(&self.boundary_edges[t..]);
            (bd, be)
        };
        let face_id = self.faces.len();
        for &e in &sides {
            let r = find(&mut self.eparent, e);
            self.edge_faces.entry(r).or_default().push(face_id);
        }
        self.faces.push((walk, sides, f));
        self.boundary = boundary;
        self.boundary_edges = boundary_edges;
        true
    }

    fn finish(mut self) -> Result<DiscDiagram> {
        let nv = self.vparent.len();
        let mut vid: BTreeMap<usize, usize> = BTreeMap::new();
        let mut vertex_map = Vec::new();
        for x in 0..nv {
            let r = find(&mut self.vparent, x);
            if !vid.contains_key(&r) {
                vid.insert(r, vid.len());
                vertex_map.push(self.vimage[r]);
            }
        }
        let mut vmap = vec![0; nv];
        for (x, slot) in vmap.iter_mut().enumerate() {
            *slot = vid[&find(&mut self.vparent, x)];
        }
        let mut edges = Vec::new();
        let mut seen = HashSet::new();
        for e in 0..self.eparent.len() {
            if find(&mut self.eparent, e) != e {
                continue;
            }
            let [a, b] = self.eends[e];
            let (a, b) = (vmap[a], vmap[b]);
            if seen.insert((a.min(b), a.max(b))) {
                edges.push([a, b]);
            }
        }
        let faces: Vec<Vec<usize>> = self
            .faces
            .iter()
            .map(|(w, _, _)| w.iter().map(|&x| vmap[x]).collect())
            .collect();
        let face_map = self.faces.iter().map(|f| f.2).collect();
        let mut d = DiscDiagram::new(vid.len(), edges, faces)?;
        d.vertex_map = vertex_map;
        d.face_map = face_map;
        Ok(d)
    }
}

/// Polygon attachments available at the current boundary: `(rotation,
/// polygon, corners from the run start, run length)`, polygons in id
/// order, longer runs first.
fn face_moves(b: &ComplexBall, st: &FillState) -> Vec<(usize, usize, Vec<usize>, usize)> {
    let l = st.boundary.len();
    let mut moves = Vec::new();
    let mut seen = HashSet::new();
    for k in 0..l {
        let x = st.image(k);
        let y = st.image((k + 1) % l);
        for &f in &b.vertex(x).polygons {
            let corners = &b.polygon(f).corners;
            let n = corners.len();
            let a = corners.iter().position(|&c| c == x).expect("corner");
            let dir = if corners[(a + 1) % n] == y {
                1
            } else if corners[(a + n - 1) % n] == y {
                n - 1
            } else {
                continue;
            };
            let at = |j: usize| corners[(a + j * dir) % n];
            // back up to the start of the run
            let mut back = 0;
            while back < n.min(l) - 1 && st.image((k + l - back - 1) % l) == at(n - back - 1) {
                back += 1;
            }
            let s = (k + l - back) % l;
            let start_corner = (a + (n - back) * dir) % n;
            let mut t = 0;
            while t < n.min(l) && st.image((s + t + 1) % l) == corners[(start_corner + (t + 1) * dir) % n] {
                t += 1;
            }
            if 2 * t < n || (t == n && t > l) {
                continue;
            }
            if t == n && st.image((s + n) % l) != corners[start_corner] {
                continue;
            }
            let walk: Vec<usize> = (0..n).map(|j| corners[(start_corner + j * dir) % n]).collect();
            if seen.insert((s, f, t, walk.clone())) {
                moves.push((s, f, walk, t));
            }
        }
    }
    moves.sort_by(|a, b| a.1.cmp(&b.1).then(b.3.cmp(&a.3)).then(a.0.cmp(&b.0)));
    moves
}

fn search(
    b: &ComplexBall,
    mut st: FillState,
    failed: &mut HashSet<Vec<usize>>,
    visiting: &mut HashSet<Vec<usize>>,
) -> Option<FillState> {
    while st.fold_spur() {}
    if st.boundary.is_empty() {
        return Some(st);
    }
    if st.faces.len() >= MAX_FILL_FACES {
        return None;
    }
    let key = st.key();
    if failed.contains(&key) || !visiting.insert(key.clone()) {
        return None;
    }
    for (s, f, corners, t) in face_moves(b, &st) {
        let mut next = st.clone();
        next.rotate(s);
        if !next.attach(f, &corners, t) {
            continue;
        }
        if let Some(done) = search(b, next, failed, visiting) {
            return Some(done);
        }
    }
    visiting.remove(&key);
    failed.insert(key);
    None
}

/// Fills a closed edge path of the ball (given by its vertices) with a
/// reduced disc diagram and audits its curvature.
pub fn fill_and_audit(b: &ComplexBall, loop_vertices: &[usize]) -> Result<Filling> {
    convention_lock(b.presentation().n())?;
    let l = loop_vertices.len();
    for k in 0..l {
        let (x, y) = (loop_vertices[k], loop_vertices[(k + 1) % l]);
        if x >= b.vertices().len() || b.edge_between(x, y).is_none() {
            return Err(Error::InvalidDiagram(format!(
                "loop step {k} is not an edge of the ball"
            )));
        }
    }
    let diagram = if l == 0 {
        return Err(Error::InvalidDiagram("empty loop".into()));
    } else {
        let (mut failed, mut visiting) = (HashSet::new(), HashSet::new());
        let st = search(b, FillState::new(loop_vertices), &mut failed, &mut visiting).ok_or_else(|| {
            Error::NotFillable(format!("no reduced filling with at most {MAX_FILL_FACES} polygons"))
        })?;
        st.finish()?
    };
    let curvature = curvature_sum(&diagram)?;
    let reduced = is_reduced(&diagram);
    let mut audit = AuditReport::new();
    let n = b.presentation().n() as i64;
    for (f, k) in curvature.faces.iter().enumerate() {
        audit.expect(k.0 == 4 - n && k.0 <= -1, || (format!("face {f}"), format!("curvature {k}")));
    }
    for x in 0..diagram.vertex_count {
        let data = diagram.vertex_data(x)?;
        let k = curvature.vertices[x];
        if data.faces == 0 {
            // vertices on trees hanging off the disc carry no polygon bound
            audit.skip();
        } else if data.boundary {
            audit.expect(k.0 <= 1, || (format!("boundary vertex {x}"), format!("curvature {k}")));
        } else {
            audit.expect(k.0 <= 0, || (format!("interior vertex {x}"), format!("curvature {k}")));
        }
    }
    audit.expect(reduced, || ("diagram".into(), "two faces across an edge map to one polygon".into()));
    Ok(Filling {
        diagram,
        curvature,
        reduced,
        audit,
    })
}

/// No two faces sharing an edge map to the same polygon.
pub fn is_reduced(d: &DiscDiagram) -> bool {
    if d.face_map.is_empty() {
        return true;
    }
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (f, w) in d.faces.iter().enumerate() {
        for k in 0..w.len() {
            let (a, b) = (w[k], w[(k + 1) % w.len()]);
            by_edge.entry((a.min(b), a.max(b))).or_default().push(f);
        }
    }
    by_edge
        .values()
        .all(|fs| fs.len() < 2 || d.face_map[fs[0]] != d.face_map[fs[1]] || fs[0] == fs[1])
}

/// A random closed edge path that bounds inside the ball: a lasso around
/// one polygon, or the outer boundary of a strip of two or three polygons,
/// possibly with a backtrack inserted. At most `max_len` edges.
pub fn random_null_homotopic_loop<R: Rng>(b: &ComplexBall, rng: &mut R, max_len: usize) -> Option<Vec<usize>> {
    let n = b.presentation().n();
    if max_len < n {
        return None;
    }
    // polygons whose neighbours across every side are in the ball
    let inner: Vec<usize> = (0..b.polygons().len())
        .filter(|&f| b.polygon(f).sides.iter().all(|&e| b.edge(e).interior))
        .collect();
    if inner.is_empty() {
        return None;
    }
    (0..100).find_map(|_| loop_attempt(b, rng, &inner, max_len))
}

fn loop_attempt<R: Rng>(b: &ComplexBall, rng: &mut R, inner: &[usize], max_len: usize) -> Option<Vec<usize>> {
    let n = b.presentation().n();
    let f = *inner.choose(rng)?;
    let kind = rng.gen_range(0..3);
    let mut path = if kind == 0 {
        let tail = rng.gen_range(0..=(max_len - n) / 2);
        let corners = &b.polygon(f).corners;
        let c = rng.gen_range(0..n);
        let mut around: Vec<usize> = (0..n).map(|j| corners[(c + j) % n]).collect();
        if rng.gen_bool(0.5) {
            around[1..].reverse();
        }
        let mut walk = vec![around[0]];
        for _ in 0..tail {
            let next: Vec<usize> = b.neighbors(*walk.last()?).collect();
            walk.push(*next.choose(rng)?);
        }
        // w → … → c, around, c → … → w
        let mut out: Vec<usize> = walk.iter().rev().copied().collect();
        out.extend_from_slice(&around[1..]);
        out.extend_from_slice(&walk[..walk.len() - 1]);
        out
    } else {
        let count = kind + 1;
        if count * (n - 2) + 2 > max_len {
            return None;
        }
        let mut faces = vec![f];
        while faces.len() < count {
            let side = *b.polygon(*faces.last()?).sides.choose(rng)?;
            let others: Vec<usize> = b.edge(side).polygons.iter().copied().filter(|g| !faces.contains(g)).collect();
            faces.push(*others.choose(rng)?);
        }
        union_boundary(b, &faces)?
    };
    if path.len() + 2 <= max_len && rng.gen_bool(0.3) {
        let k = rng.gen_range(0..path.len());
        let nb: Vec<usize> = b.neighbors(path[k]).collect();
        let y = *nb.choose(rng)?;
        path.splice(k + 1..k + 1, [y, path[k]]);
    }
    if path.len() > max_len {
        return None;
    }
    let r = rng.gen_range(0..path.len());
    path.rotate_left(r);
    Some(path)
}

/// The boundary cycle of a union of polygons, if it is a simple cycle.
fn union_boundary(b: &ComplexBall, faces: &[usize]) -> Option<Vec<usize>> {
    let mut count: HashMap<usize, usize> = HashMap::new();
    for &f in faces {
        for &e in &b.polygon(f).sides {
            *count.entry(e).or_default() += 1;
        }
    }
    let edges: Vec<usize> = count.into_iter().filter(|&(_, c)| c == 1).map(|(e, _)| e).collect();
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &e in &edges {
        let [x, y] = b.edge(e).ends;
        adj.entry(x).or_default().push(y);
        adj.entry(y).or_default().push(x);
    }
    if adj.values().any(|v| v.len() != 2) {
        return None;
    }
    let start = *adj.keys().min()?;
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = adj[&start][0];
    while cur != start {
        cycle.push(cur);
        let next = if adj[&cur][0] == prev { adj[&cur][1] } else { adj[&cur][0] };
        prev = cur;
        cur = next;
    }
    (cycle.len() == edges.len()).then_some(cycle)
}
