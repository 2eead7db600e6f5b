//! The verification harness: runs the audits of one or all modules on a
//! presentation and collects a deterministic report.
//!
//! Every check draws its samples from its own generator, seeded from the
//! run seed and the check id, so results do not depend on which checks run
//! or in what order they finish.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebraic::{induced_cycle_audit, phi_iso_check, DEFAULT_JOIN_DEPTH};
use crate::aut::{
    acyl_witness, axis_audit, ball_action_audit, decompose_roundtrip_audit, enumerate_loc, group_law_audit,
    inn_loc_audit, loc_stabilizes_p_audit, random_aut, witness_fixator_check,
};
use crate::davis::{
    bipartite_link_audit, build_ball_with_budget, edge_stabilizer_audit, equivariance_audit, free_face_audit,
    incidence_audit, pair_set, polygon_pair_audit, t4_audit, ComplexBall,
};
use crate::diagrams::{convention_lock, fill_and_audit, random_null_homotopic_loop, reference_totals};
use crate::error::{Error, Result};
use crate::report::AuditReport;
use crate::walls::{
    adjacency_closure_audit, audit_walls, crossing_graph, fixator_audit, hyperplane_treewall_audit, min_set_audit,
    pair_audit, projection_audit, stabilizer_audit, tree_audit, triple_audit, vertex_stabilizer_audit,
    CrossingGraph,
};
use crate::word::{format_word, GroupElement, Presentation, Syllable, VertexSet};

/// Module whose audits a run covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Words,
    Davis,
    Walls,
    Algebraic,
    Aut,
    Diagrams,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["words", "davis", "walls", "algebraic", "aut", "diagrams", "all"];

    fn covers(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }

    fn needs_ball(self) -> bool {
        self != Suite::Words
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::Words => "words",
            Suite::Davis => "davis",
            Suite::Walls => "walls",
            Suite::Algebraic => "algebraic",
            Suite::Aut => "aut",
            Suite::Diagrams => "diagrams",
            Suite::All => "all",
        };
        f.write_str(name)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "words" => Suite::Words,
            "davis" => Suite::Davis,
            "walls" => Suite::Walls,
            "algebraic" => Suite::Algebraic,
            "aut" => Suite::Aut,
            "diagrams" => Suite::Diagrams,
            "all" => Suite::All,
            other => {
                return Err(Error::Parse(format!(
                    "unknown suite {other:?}, expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub radius: usize,
    /// Truncation length `L` for stabilizer and fixator searches.
    pub depth: usize,
    pub seed: u64,
    pub budget_bytes: u64,
    /// Record wall-clock time per check. Off by default so that reports
    /// are byte-identical across runs.
    pub timings: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            radius: 2,
            depth: 3,
            seed: 0,
            budget_bytes: crate::davis::DEFAULT_BUDGET_BYTES,
            timings: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub instance: String,
    pub status: Status,
    pub checked: usize,
    pub skipped: usize,
    pub failures: usize,
    pub violations: Vec<crate::report::Violation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub presentation: String,
    pub suite: Suite,
    pub radius: usize,
    pub depth: usize,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    /// 0 when everything passed, 1 on any failure, 3 when the only
    /// blemishes are inconclusive checks.
    pub fn exit_code(&self) -> i32 {
        if self.failed > 0 {
            1
        } else if self.inconclusive > 0 {
            3
        } else {
            0
        }
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// What a check hands back: the audit counts, a description of the
/// instance and optional replay data.
struct Outcome {
    instance: String,
    report: AuditReport,
    witness: Option<Value>,
}

impl Outcome {
    fn new(instance: impl Into<String>, report: AuditReport) -> Self {
        Outcome {
            instance: instance.into(),
            report,
            witness: None,
        }
    }

    fn with_witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }
}

struct Ctx<'a> {
    p: &'a Presentation,
    cfg: &'a VerifyConfig,
    ball: Option<&'a ComplexBall>,
    walls: Option<&'a CrossingGraph>,
}

impl<'a> Ctx<'a> {
    fn ball(&self) -> &'a ComplexBall {
        self.ball.expect("ball built for this suite")
    }

    fn graph(&self) -> &'a CrossingGraph {
        self.walls.expect("crossing graph built for this suite")
    }
}

type CheckFn = fn(&Ctx<'_>, &mut ChaCha8Rng) -> Result<Outcome>;

const CHECKS: &[(Suite, &str, CheckFn)] = &[
    (Suite::Words, "words.reduce-confluence", words_confluence),
    (Suite::Words, "words.rigid-words-are-reduced", words_rigid),
    (Suite::Words, "words.group-laws", words_group_laws),
    (Suite::Words, "words.coset-splitting", words_cosets),
    (Suite::Words, "words.double-coset-splitting", words_double_cosets),
    (Suite::Words, "words.cyclic-reduction", words_cyclic_reduce),
    (Suite::Words, "words.ball-growth-matches-enumeration", words_growth),
    (Suite::Davis, "davis.t4-links", |c, _| Ok(Outcome::new(radius(c), t4_audit(c.ball())))),
    (Suite::Davis, "davis.polygons-share-at-most-one-edge", |c, _| {
        Ok(Outcome::new(radius(c), polygon_pair_audit(c.ball())))
    }),
    (Suite::Davis, "davis.no-free-face", |c, _| Ok(Outcome::new(radius(c), free_face_audit(c.ball())))),
    (Suite::Davis, "davis.interior-links-complete-bipartite", |c, _| {
        Ok(Outcome::new(radius(c), bipartite_link_audit(c.ball())))
    }),
    (Suite::Davis, "davis.incidence", |c, _| Ok(Outcome::new(radius(c), incidence_audit(c.ball())))),
    (Suite::Davis, "davis.translation-equivariance", |c, rng| {
        let sub = c.cfg.radius.saturating_sub(1).max(1);
        Ok(Outcome::new(
            format!("{}, sub-ball radius {sub}, 50 samples", radius(c)),
            equivariance_audit(c.ball(), sub, 50, rng),
        ))
    }),
    (Suite::Davis, "davis.edge-stabilizer-is-vertex-group", |c, _| {
        Ok(Outcome::new(depth(c), edge_stabilizer_audit(c.ball(), c.cfg.depth)?))
    }),
    (Suite::Walls, "walls.tree-property", |c, _| Ok(Outcome::new(radius(c), tree_audit(c.ball())))),
    (Suite::Walls, "walls.fixator-equals-edge-stabilizer", |c, _| {
        let ws = audit_walls(c.graph());
        Ok(Outcome::new(depth(c), fixator_audit(c.ball(), c.graph(), &ws, c.cfg.depth)?))
    }),
    (Suite::Walls, "walls.stabilizer-is-star-parabolic", |c, _| {
        let ws = audit_walls(c.graph());
        Ok(Outcome::new(depth(c), stabilizer_audit(c.ball(), c.graph(), &ws, c.cfg.depth)?))
    }),
    (Suite::Walls, "walls.pair-classification", |c, _| {
        let (report, cases) = pair_audit(c.ball(), c.graph(), 10, c.cfg.depth)?;
        let mut counts = [0usize; 3];
        for case in &cases {
            counts[case.delta.clamp(1, 3) - 1] += 1;
        }
        Ok(Outcome::new(
            format!(
                "{}; pairs at distance 1: {}, 2: {}, 3+: {}",
                depth(c),
                counts[0],
                counts[1],
                counts[2]
            ),
            report,
        )
        .with_witness(serde_json::to_value(&cases).expect("cases serialize")))
    }),
    (Suite::Walls, "walls.no-pairwise-crossing-triple", |c, _| {
        Ok(Outcome::new(radius(c), triple_audit(c.graph())))
    }),
    (Suite::Walls, "walls.min-set", |c, _| {
        Ok(Outcome::new(format!("{}, 20 pairs", radius(c)), min_set_audit(c.ball(), c.graph(), 20)))
    }),
    (Suite::Walls, "walls.hyperplane-is-tree-wall", |c, _| {
        Ok(Outcome::new(radius(c), hyperplane_treewall_audit(c.ball())))
    }),
    (Suite::Walls, "walls.projection", |c, _| Ok(Outcome::new(radius(c), projection_audit(c.ball())))),
    (Suite::Walls, "walls.vertex-stabilizer-criterion", |c, _| {
        let ws = audit_walls(c.graph());
        let l = c.cfg.depth.min(2);
        Ok(Outcome::new(
            format!("{}, L = {l}", radius(c)),
            vertex_stabilizer_audit(c.ball(), c.graph(), &ws, l)?,
        ))
    }),
    (Suite::Walls, "walls.adjacency-generates-stabilizer", |c, _| {
        let ws = audit_walls(c.graph());
        let l = c.cfg.depth.min(3);
        Ok(Outcome::new(
            format!("{}, L = {l}", radius(c)),
            adjacency_closure_audit(c.ball(), c.graph(), &ws, l),
        ))
    }),
    (Suite::Algebraic, "algebraic.phi-isomorphism", |c, rng| {
        Ok(Outcome::new(
            format!("{}, join depth {DEFAULT_JOIN_DEPTH}, 50 samples", radius(c)),
            phi_iso_check(c.ball(), DEFAULT_JOIN_DEPTH, 50, rng)?,
        ))
    }),
    (Suite::Algebraic, "algebraic.induced-cycles-bound-polygons", |c, _| {
        Ok(Outcome::new(radius(c), induced_cycle_audit(c.ball())))
    }),
    (Suite::Aut, "aut.decompose-roundtrip", |c, rng| {
        Ok(Outcome::new("500 samples", decompose_roundtrip_audit(c.p, 500, 3, rng)?))
    }),
    (Suite::Aut, "aut.group-laws", |c, rng| Ok(Outcome::new("50 samples", group_law_audit(c.p, 50, rng)?))),
    (Suite::Aut, "aut.inner-meets-local-trivially", aut_inn_loc),
    (Suite::Aut, "aut.local-stabilizes-base-polygon", |c, rng| {
        let sample = (0..200)
            .map(|k| random_aut(c.p, rng, if k % 2 == 0 { 0 } else { 3 }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Outcome::new("200 samples", loc_stabilizes_p_audit(c.p, &sample)))
    }),
    (Suite::Aut, "aut.ball-action", |c, rng| {
        let mut report = AuditReport::new();
        for _ in 0..10 {
            let a = random_aut(c.p, rng, 1)?;
            report.merge(ball_action_audit(c.ball(), &a));
        }
        Ok(Outcome::new(format!("{}, 10 samples", radius(c)), report))
    }),
    (Suite::Aut, "aut.witness-fixator", aut_witness),
    (Suite::Aut, "aut.axis-in-wall", |c, _| {
        let k = c.cfg.radius.saturating_sub(1) / 2;
        let mut report = AuditReport::new();
        for i in 0..c.p.n() {
            report.merge(axis_audit(c.ball(), i, k)?);
        }
        Ok(Outcome::new(format!("{}, k = {k}, every label", radius(c)), report))
    }),
    (Suite::Diagrams, "diagrams.convention-lock", |c, _| {
        let n = c.p.n();
        let totals = reference_totals(n)?;
        let mut report = AuditReport::new();
        report.expect(convention_lock(n).is_ok(), || {
            (
                format!("reference {n}-gon diagrams"),
                format!("totals {} and {}", totals[0], totals[1]),
            )
        });
        Ok(Outcome::new(format!("n = {n}"), report)
            .with_witness(json!({"totals": [totals[0].0, totals[1].0]})))
    }),
    (Suite::Diagrams, "diagrams.gauss-bonnet-on-fillings", diagrams_fillings),
];

fn radius(c: &Ctx<'_>) -> String {
    format!("radius {}", c.cfg.radius)
}

fn depth(c: &Ctx<'_>) -> String {
    format!("radius {}, L = {}", c.cfg.radius, c.cfg.depth)
}

/// Ids of every check in `suite`, sorted.
pub fn check_ids(suite: Suite) -> Vec<&'static str> {
    let mut ids: Vec<&'static str> = CHECKS.iter().filter(|(s, _, _)| suite.covers(*s)).map(|c| c.1).collect();
    ids.sort_unstable();
    ids
}

fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Generator for the check `id` under run seed `seed`.
pub fn check_rng(seed: u64, id: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ fnv1a(id))
}

pub fn run_verify(p: &Presentation, suite: Suite, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let ball = if suite.needs_ball() {
        Some(build_ball_with_budget(p, cfg.radius, cfg.budget_bytes)?)
    } else {
        None
    };
    let graph = ball.as_ref().map(crossing_graph);
    let ctx = Ctx {
        p,
        cfg,
        ball: ball.as_ref(),
        walls: graph.as_ref(),
    };
    let mut checks: Vec<CheckResult> = CHECKS
        .par_iter()
        .filter(|(s, _, _)| suite.covers(*s))
        .map(|&(_, id, f)| run_check(&ctx, id, f))
        .collect();
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    Ok(VerifyReport {
        schema: crate::SCHEMA,
        presentation: p.describe(),
        suite,
        radius: cfg.radius,
        depth: cfg.depth,
        seed: cfg.seed,
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        inconclusive: count(Status::Inconclusive),
        checks,
    })
}

fn run_check(ctx: &Ctx<'_>, id: &str, f: CheckFn) -> CheckResult {
    let mut rng = check_rng(ctx.cfg.seed, id);
    let start = Instant::now();
    let outcome = f(ctx, &mut rng);
    let elapsed_ms = ctx.cfg.timings.then(|| start.elapsed().as_millis() as u64);
    match outcome {
        Ok(o) => {
            let r = o.report;
            let status = if r.failures > 0 {
                Status::Fail
            } else if r.checked == 0 {
                Status::Inconclusive
            } else {
                Status::Pass
            };
            CheckResult {
                id: id.to_string(),
                instance: o.instance,
                status,
                checked: r.checked,
                skipped: r.skipped,
                failures: r.failures,
                violations: r.violations,
                witness: o.witness,
                elapsed_ms,
            }
        }
        Err(e) => {
            // truncation limits leave the check undecided; anything else is a defect
            let status = match e {
                Error::Inconclusive(_) | Error::Resource(_) | Error::Cell(_) => Status::Inconclusive,
                _ => Status::Fail,
            };
            CheckResult {
                id: id.to_string(),
                instance: String::new(),
                status,
                checked: 0,
                skipped: 0,
                failures: usize::from(status == Status::Fail),
                violations: vec![crate::report::Violation::new("check", e.to_string())],
                witness: None,
                elapsed_ms,
            }
        }
    }
}

fn words_confluence(c: &Ctx<'_>, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let p = c.p;
    let mut report = AuditReport::new();
    for _ in 0..300 {
        let len = rng.gen_range(0..=10);
        let w = p.random_word(rng, len);
        let mut moved = w.clone();
        for _ in 0..4 {
            apply_random_move(p, &mut moved, rng);
        }
        let (a, b) = (p.reduce(&w), p.reduce(&moved));
        report.expect(a == b, || {
            (
                format_word(&w),
                format!("reduces to {a}, but after moves {} reduces to {b}", format_word(&moved)),
            )
        });
    }
    Ok(Outcome::new("300 random words, 4 moves each", report))
}

/// Inserts a cancelling pair, splits a syllable in two, or swaps two
/// consecutive commuting syllables. Each preserves the element.
fn apply_random_move(p: &Presentation, w: &mut Vec<Syllable>, rng: &mut ChaCha8Rng) {
    match rng.gen_range(0..3) {
        0 => {
            let s = p.random_word(rng, 1)[0];
            let k = rng.gen_range(0..=w.len());
            let inv = Syllable::new(s.vertex, p.group(s.vertex).inv(s.elem));
            w.splice(k..k, [s, inv]);
        }
        1 if !w.is_empty() => {
            let k = rng.gen_range(0..w.len());
            let s = w[k];
            let g = p.group(s.vertex);
            let a = p.random_word(rng, 1)[0];
            if a.vertex == s.vertex {
                let b = g.op(g.inv(a.elem), s.elem);
                if b != g.identity() {
                    w.splice(k..=k, [a, Syllable::new(s.vertex, b)]);
                }
            }
        }
        _ if w.len() >= 2 => {
            let k = rng.gen_range(0..w.len() - 1);
            if p.adjacent(w[k].vertex, w[k + 1].vertex) {
                w.swap(k, k + 1);
            }
        }
        _ => {}
    }
}

fn words_rigid(c: &Ctx<'_>, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let p = c.p;
    let mut report = AuditReport::new();
    for _ in 0..1000 {
        let len = rng.gen_range(1..=12);
        let w = p.random_rigid_word(rng, len);
        let g = p.reduce(&w);
        report.expect(g.syllables() == w.as_slice(), || {
            (format_word(&w), format!("reduce returned {g}"))
        });
    }
    Ok(Outcome::new("1000 words of length 1..12", report))
}

fn words_group_laws(c: &Ctx<'_>, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let p = c.p;
    let mut report = AuditReport::new();
    let e = GroupElement::identity();
    for _ in 0..200 {
        let (a, b, x) = (p.random_element(rng, 6), p.random_element(rng, 6), p.random_element(rng, 6));
        let left = p.mul(&p.mul(&a, &b), &x);
        let right = p.mul(&a, &p.mul(&b, &x));
        report.expect(left == right, || (format!("{a} | {b} | {x}"), "not associative".into()));
        report.expect(p.mul(&a, &p.inv(&a)).is_identity() && p.mul(&p.inv(&a), &a).is_identity(), || {
            (a.to_string(), "inverse does not cancel".into())
        });
        report.expect(p.mul(&a, &e) == a && p.mul(&e, &a) == a, || {
            (a.to_string(), "identity is not neutral".into())
        });
        report.expect(p.inv(&p.mul(&a, &b)) == p.mul(&p.inv(&b), &p.inv(&a)), || {
            (format!("{a} | {b}"), "inverse of a product".into())
        });
    }
    Ok(Outcome::new("200 random triples", report))
}

fn random_subset(p: &Presentation, rng: &mut ChaCha8Rng) -> VertexSet {
    let i = rng.gen_range(0..p.n());
    match rng.gen_range(0..3) {
        0 => VertexSet::single(i),
        1 => pair_set(p, i),
        _ => p.closed_star(i),
    }
}

fn words_cosets(c: &Ctx<'_>, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let p = c.p;
    let mut report = AuditReport::new();
    for _ in 0..300 {
        let g = p.random_element(rng, 8);
        let set = random_subset(p, rng);
        let (rep, h) = p.coset_split(&g, set);
        report.expect(p.mul(&rep, &h) == g && p.support(&h).is_subset(set), || {
            (format!("{g} mod {set:?}"), format!("split into {rep} · {h}"))
        });
        // the representative is a function of the coset and no longer than g
        let x = p.reduce(&p.random_word(rng, 3).into_iter().filter(|s| set.contains(s.vertex)).collect::<Vec<_>>());
        let moved = p.coset_rep(&p.mul(&g, &x), set);
        report.expect(moved == rep && rep.len() <= g.len(), || {
            (format!("{g} mod {set:?}"), format!("rep {rep}, but g·{x} gives {moved}"))
        });
    }
    Ok(Outcome::new("300 random elements and parabolic subsets", report))
}

fn words_double_cosets(c: &Ctx<'_>, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let p = c.p;
    let mut report = AuditReport::new();
    for _ in 0..300 {
        let g = p.random_element(rng, 8);
        let (left, right) = (random_subset(p, rng), random_subset(p, rng));
        let (a, m, b) = p.double_coset_split(&g, left, right);
        let ok = p.mul_all([&a, &m, &b]) == g
            && p.support(&a).is_subset(left)
            && p.support(&b).is_subset(right)
            && m.len() <= g.len();
        report.expect(ok, || {
            (format!("{g} in {left:?}·g·{right:?}"), format!("split into {a} · {m} · {b}"))
        });
    }
    Ok(Outcome::new("300 random elements and subset pairs", report))
}

fn words_cyclic_reduce(c: &Ctx<'_>, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let p = c.p;
    let mut report = AuditReport::new();
    for _ in 0..300 {
        let g = p.random_element(rng, 8);
        let (core, conj) = p.cyclic_reduce(&g);
        report.expect(p.conjugate(&conj, &core) == g && core.len() <= g.len(), || {
            (g.to_string(), format!("core {core}, conjugator {conj}"))
        });
        // reducing again changes nothing
        let (again, w) = p.cyclic_reduce(&core);
        report.expect(again == core && w.is_identity(), || {
            (core.to_string(), format!("reduces further to {again}"))
        });
    }
    Ok(Outcome::new("300 random elements", report))
}

fn words_growth(c: &Ctx<'_>, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let p = c.p;
    let l = c.cfg.depth;
    let counts = p.ball_growth(l)?;
    let elems = p.enumerate_ball_elements(l)?;
    let mut by_len = vec![0u128; l + 1];
    for g in &elems {
        by_len[g.len()] += 1;
    }
    let mut report = AuditReport::new();
    for k in 0..=l {
        report.expect(counts[k] == by_len[k], || {
            (format!("length {k}"), format!("automaton counts {}, enumeration {}", counts[k], by_len[k]))
        });
    }
    Ok(Outcome::new(format!("L = {l}"), report).with_witness(json!({
        "sphere_sizes": counts.iter().map(|x| x.to_string()).collect::<Vec<_>>()
    })))
}

fn aut_inn_loc(c: &Ctx<'_>, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let p = c.p;
    let loc = enumerate_loc(p)?;
    let mut inners: Vec<GroupElement> = vec![GroupElement::identity()];
    inners.extend(p.all_syllables()?.into_iter().map(|s| p.from_syllable(s)));
    while inners.len() < 60 {
        let g = p.random_element(rng, 4);
        if !g.is_identity() {
            inners.push(g);
        }
    }
    Ok(Outcome::new(
        format!("|Loc| = {}, {} inner automorphisms", loc.len(), inners.len()),
        inn_loc_audit(p, &loc, &inners),
    ))
}

fn aut_witness(c: &Ctx<'_>, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let p = c.p;
    let w = acyl_witness(p)?;
    let fx = witness_fixator_check(p, &w.element)?;
    let mut report = AuditReport::new();
    let expected_len = 2 * p.n() * w.m;
    report.expect(w.element.len() == expected_len, || {
        (w.element.to_string(), format!("length {}, expected {expected_len}", w.element.len()))
    });
    report.expect(fx.geometric_mismatches.is_empty(), || {
        (
            w.element.to_string(),
            format!("algebraic and geometric fixators differ at {:?}", fx.geometric_mismatches),
        )
    });
    if w.degenerate {
        // no vertex group has a non-trivial determining set: g = 1 and
        // every local automorphism fixes it
        report.expect(fx.fixator_size == fx.loc_size, || {
            ("identity".into(), format!("fixator has {} of {} elements", fx.fixator_size, fx.loc_size))
        });
    } else {
        report.expect(fx.only_identity, || {
            (
                w.element.to_string(),
                format!("fixed by {} of {} local automorphisms", fx.fixator_size, fx.loc_size),
            )
        });
    }
    let instance = format!(
        "|g| = {}, m = {}, |Loc| = {}{}",
        w.element.len(),
        w.m,
        fx.loc_size,
        if w.degenerate { ", degenerate" } else { "" }
    );
    Ok(Outcome::new(instance, report).with_witness(json!({
        "element": w.element.to_string(),
        "vertex_sequence": w.vertex_sequence,
        "fixator_size": fx.fixator_size,
    })))
}

fn diagrams_fillings(c: &Ctx<'_>, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let b = c.ball();
    let mut report = AuditReport::new();
    let mut totals = Vec::new();
    for k in 0..100 {
        let Some(lp) = random_null_homotopic_loop(b, rng, 12) else {
            report.skip();
            continue;
        };
        let name = || lp.iter().map(|&v| b.vertex_name(v)).collect::<Vec<_>>().join(" ");
        match fill_and_audit(b, &lp) {
            Ok(fill) => {
                totals.push(fill.curvature.total.0);
                report.expect(fill.curvature.ok, || {
                    (
                        format!("loop {k}: {}", name()),
                        format!("curvature sums to {}, expected {}", fill.curvature.total, fill.curvature.target),
                    )
                });
                for v in fill.audit.violations.iter().take(1) {
                    report.fail(format!("loop {k}: {}", name()), format!("{}: {}", v.subject, v.detail));
                }
            }
            Err(e) => report.fail(format!("loop {k}: {}", name()), e.to_string()),
        }
    }
    totals.sort_unstable();
    totals.dedup();
    Ok(Outcome::new(format!("{}, 100 loops of length ≤ 12", radius(c)), report)
        .with_witness(json!({ "distinct_totals": totals })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;

    #[test]
    fn ids_are_unique_and_prefixed_by_suite() {
        let ids = check_ids(Suite::All);
        let mut dedup = ids.clone();
        dedup.dedup();
        assert_eq!(ids, dedup);
        for &(suite, id, _) in CHECKS {
            assert!(id.starts_with(&format!("{suite}.")), "{id}");
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().to_string(), name);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn rng_depends_on_id_and_seed() {
        let x = |s, id| check_rng(s, id).gen::<u64>();
        assert_eq!(x(0, "a"), x(0, "a"));
        assert_ne!(x(0, "a"), x(0, "b"));
        assert_ne!(x(0, "a"), x(1, "a"));
    }

    #[test]
    fn words_suite_passes_and_is_deterministic() {
        let p = reference::c5_mixed();
        let cfg = VerifyConfig::default();
        let a = run_verify(&p, Suite::Words, &cfg).unwrap();
        assert_eq!(a.exit_code(), 0, "{}", a.to_json());
        let b = run_verify(&p, Suite::Words, &cfg).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn timings_only_when_asked() {
        let p = reference::c5_z2();
        let cfg = VerifyConfig {
            timings: true,
            ..VerifyConfig::default()
        };
        let r = run_verify(&p, Suite::Words, &cfg).unwrap();
        assert!(r.checks.iter().all(|c| c.elapsed_ms.is_some()));
        let r = run_verify(&p, Suite::Words, &VerifyConfig::default()).unwrap();
        assert!(!r.to_json().contains("elapsed_ms"));
    }
}
