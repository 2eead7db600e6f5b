//! Acceptance run: one line per criterion, `PASS` or `FAIL`, with the
//! measured time against its budget. Exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cyclewall::algebraic::{induced_cycle_audit, phi_iso_check, DEFAULT_JOIN_DEPTH};
use cyclewall::aut::{acyl_witness, decompose_roundtrip_audit, enumerate_loc, inn_loc_audit, witness_fixator_check};
use cyclewall::davis::{bipartite_link_audit, build_ball, free_face_audit, polygon_pair_audit, t4_audit};
use cyclewall::diagrams::{curvature_sum, fill_and_audit, random_null_homotopic_loop, reference_totals};
use cyclewall::verify::{run_verify, Suite, VerifyConfig};
use cyclewall::walls::{
    audit_walls, crossing_graph, fixator_audit, hyperplane_treewall_audit, pair_audit, stabilizer_audit, tree_audit,
    triple_audit,
};
use cyclewall::{reference, AuditReport, GroupElement, Syllable};

use common::{all_words, RawWord, first_disagreement, from_syllables, oracle_normal_form, rigid_word, to_syllables};

/// Longest raw word compared against the rewriting oracle.
const ORACLE_WORD_LEN: usize = 6;
const RIGID_WORDS: usize = 1000;
const PAIRS_PER_DELTA: usize = 10;
const TRUNCATION_L: usize = 3;
const PHI_SAMPLES: usize = 50;
const ROUNDTRIP_SAMPLES: usize = 500;
const INNER_SAMPLES: usize = 60;
const FILLINGS: usize = 100;
const MAX_LOOP_LEN: usize = 12;
/// Curvature total the criterion demands of every disc diagram, in
/// quarter-turns.
const REQUIRED_CURVATURE_TOTAL: i64 = 8;
const WITNESS_LEN: usize = 10;
const WITNESS_LOC_SIZE: usize = 320;
const SEED: u64 = 0x5eed;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn check(report: &AuditReport, what: &str) -> Result<(), String> {
    if report.failures > 0 {
        let v = &report.violations[0];
        return Err(format!("{what}: {} failures, first {}: {}", report.failures, v.subject, v.detail));
    }
    if report.checked == 0 {
        return Err(format!("{what}: nothing checked"));
    }
    Ok(())
}

fn c1_oracle_equivalence() -> Outcome {
    let mut total = 0;
    for (name, p) in [("c5_z2", reference::c5_z2()), ("c5_z3", reference::c5_z3())] {
        let words: Vec<_> = (0..=ORACLE_WORD_LEN).flat_map(|k| all_words(&p, k)).collect();
        let pairs: Vec<(RawWord, RawWord)> = words
            .par_iter()
            .map(|w| (oracle_normal_form(&p, w), from_syllables(p.reduce(&to_syllables(w)).syllables())))
            .collect();
        if let Some((w, (o, c))) = words.iter().zip(&pairs).find(|(_, (o, c))| o != c) {
            return Err(format!("{name}: {w:?} oracle {o:?}, reduce {c:?}"));
        }
        let (oracle, canon): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        if let Some((a, b)) = first_disagreement(&words, &oracle, &canon) {
            return Err(format!("{name}: classifications differ on {a:?} and {b:?}"));
        }
        total += words.len();
    }
    Ok(format!("{total} words of length ≤ {ORACLE_WORD_LEN} classified identically"))
}

fn c2_rigid_words() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (name, p) in reference::all() {
        for _ in 0..RIGID_WORDS {
            let len = rng.gen_range(1..=12);
            let w = to_syllables(&rigid_word(&p, &mut rng, len));
            let g = p.reduce(&w);
            if g.syllables() != w.as_slice() {
                return Err(format!("{name}: {} became {g}", cyclewall::format_word(&w)));
            }
        }
    }
    Ok(format!("{RIGID_WORDS} words per presentation returned verbatim"))
}

fn c3_davis() -> Outcome {
    for (name, p) in reference::all() {
        let b = build_ball(&p, 2).map_err(|e| e.to_string())?;
        check(&t4_audit(&b), &format!("{name} T(4)"))?;
        check(&polygon_pair_audit(&b), &format!("{name} polygon pairs"))?;
        check(&free_face_audit(&b), &format!("{name} free faces"))?;
        check(&bipartite_link_audit(&b), &format!("{name} bipartite links"))?;
    }
    Ok("four audits clean at radius 2 on every presentation".into())
}

fn c4_walls() -> Outcome {
    let mut found = Vec::new();
    for (name, p) in reference::all() {
        for r in [2, 3] {
            let b = build_ball(&p, r).map_err(|e| e.to_string())?;
            let g = crossing_graph(&b);
            let ws = audit_walls(&g);
            let tag = format!("{name} r={r}");
            let err = |e: cyclewall::Error| e.to_string();
            check(&tree_audit(&b), &format!("{tag} tree property"))?;
            check(&fixator_audit(&b, &g, &ws, TRUNCATION_L).map_err(err)?, &format!("{tag} fixator"))?;
            check(&stabilizer_audit(&b, &g, &ws, TRUNCATION_L).map_err(err)?, &format!("{tag} stabilizer"))?;
            let (report, cases) = pair_audit(&b, &g, PAIRS_PER_DELTA, TRUNCATION_L).map_err(err)?;
            check(&report, &format!("{tag} pair classification"))?;
            for d in [1, 2] {
                let k = cases.iter().filter(|c| c.delta == d).count();
                if k < PAIRS_PER_DELTA {
                    return Err(format!("{tag}: only {k} wall pairs at distance {d}"));
                }
            }
            found.push(cases.iter().filter(|c| c.delta >= 3).count());
            check(&hyperplane_treewall_audit(&b), &format!("{tag} hyperplanes"))?;
            check(&triple_audit(&g), &format!("{tag} crossing triples"))?;
        }
    }
    Ok(format!(
        "all wall audits clean at radius 2 and 3; distance ≥ 3 pairs found in {} of {} instances",
        found.iter().filter(|&&k| k > 0).count(),
        found.len()
    ))
}

fn c5_phi() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (name, p) in reference::all() {
        let b = build_ball(&p, 2).map_err(|e| e.to_string())?;
        let r = phi_iso_check(&b, DEFAULT_JOIN_DEPTH, PHI_SAMPLES, &mut rng).map_err(|e| e.to_string())?;
        check(&r, &format!("{name} phi"))?;
        check(&induced_cycle_audit(&b), &format!("{name} induced cycles"))?;
    }
    Ok(format!("phi is an isomorphism on interior cells with {PHI_SAMPLES} equivariance samples each"))
}

fn c6_automorphisms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (name, p) in reference::all() {
        let r = decompose_roundtrip_audit(&p, ROUNDTRIP_SAMPLES, 3, &mut rng).map_err(|e| e.to_string())?;
        check(&r, &format!("{name} roundtrip"))?;
        if r.checked != ROUNDTRIP_SAMPLES {
            return Err(format!("{name}: {} roundtrips", r.checked));
        }
        let loc = enumerate_loc(&p).map_err(|e| e.to_string())?;
        let mut inners = Vec::new();
        while inners.len() < INNER_SAMPLES {
            let g = p.random_element(&mut rng, 4);
            if !g.is_identity() {
                inners.push(g);
            }
        }
        inners.push(GroupElement::identity());
        check(&inn_loc_audit(&p, &loc, &inners), &format!("{name} Inn ∩ Loc"))?;
    }
    Ok(format!("{ROUNDTRIP_SAMPLES} exact recoveries per presentation; Inn ∩ Loc trivial on samples"))
}

fn c7_witness() -> Outcome {
    let p = reference::c5_z3();
    let w = acyl_witness(&p).map_err(|e| e.to_string())?;
    if w.element.len() != WITNESS_LEN || w.degenerate {
        return Err(format!("witness {} has length {}", w.element, w.element.len()));
    }
    let expected = [3, 1, 4, 2, 5, 3, 1, 4, 2, 5];
    if w.vertex_sequence != expected {
        return Err(format!("vertex sequence {:?}", w.vertex_sequence));
    }
    let fx = witness_fixator_check(&p, &w.element).map_err(|e| e.to_string())?;
    if fx.loc_size != WITNESS_LOC_SIZE || !fx.only_identity || fx.fixator_size != 1 {
        return Err(format!("|Loc| = {}, fixator size {}", fx.loc_size, fx.fixator_size));
    }
    if !fx.geometric_mismatches.is_empty() {
        return Err("stabilizers of P and gP disagree with the algebraic fixator".into());
    }
    // stabilizer formula on a single syllable: σ fixes its vertex and the
    // vertex isomorphism is trivial there
    let loc = enumerate_loc(&p).map_err(|e| e.to_string())?;
    let t1 = p.from_syllable(Syllable::new(0, 1));
    let fx1 = witness_fixator_check(&p, &t1).map_err(|e| e.to_string())?;
    let by_formula: Vec<usize> = loc
        .iter()
        .enumerate()
        .filter(|(_, l)| l.sigma.apply(0) == 0 && l.isos[0].is_identity())
        .map(|(k, _)| k)
        .collect();
    let by_definition: Vec<usize> = loc
        .iter()
        .enumerate()
        .filter(|(_, l)| l.apply(&p, &t1) == t1)
        .map(|(k, _)| k)
        .collect();
    if fx1.fixator != by_formula || by_definition != by_formula {
        return Err(format!(
            "fixator of v1:1 has {} elements, formula gives {}",
            fx1.fixator.len(),
            by_formula.len()
        ));
    }
    Ok(format!(
        "witness {} fixed only by the identity among {} local automorphisms",
        w.element, fx.loc_size
    ))
}

fn c8_gauss_bonnet() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut totals = std::collections::BTreeSet::new();
    for n in [5, 6] {
        for t in reference_totals(n).map_err(|e| e.to_string())? {
            totals.insert(t.0);
        }
    }
    let reference_ok = totals.iter().all(|&t| t == REQUIRED_CURVATURE_TOTAL);
    let mut filled = 0;
    let mut fill_totals = std::collections::BTreeSet::new();
    for (_, p) in reference::all() {
        let b = build_ball(&p, 2).map_err(|e| e.to_string())?;
        for _ in 0..FILLINGS {
            let lp = random_null_homotopic_loop(&b, &mut rng, MAX_LOOP_LEN).ok_or("no loop found in the ball")?;
            let fill = fill_and_audit(&b, &lp).map_err(|e| e.to_string())?;
            fill_totals.insert(curvature_sum(&fill.diagram).map_err(|e| e.to_string())?.total.0);
            filled += 1;
        }
    }
    let fills_ok = fill_totals.iter().all(|&t| t == REQUIRED_CURVATURE_TOTAL);
    let detail = format!(
        "reference diagrams sum to {totals:?}, {filled} fillings sum to {fill_totals:?} quarter-turns; required {REQUIRED_CURVATURE_TOTAL}"
    );
    if reference_ok && fills_ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c9_determinism() -> Outcome {
    let cfg = VerifyConfig::default();
    for (name, p) in reference::all() {
        let a = run_verify(&p, Suite::All, &cfg).map_err(|e| e.to_string())?.to_json();
        let b = run_verify(&p, Suite::All, &cfg).map_err(|e| e.to_string())?.to_json();
        if a != b {
            return Err(format!("{name}: reports differ"));
        }
    }
    Ok("verify all reports are byte-identical across runs".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("word-oracle-equivalence", c1_oracle_equivalence, 60),
        ("rigid-words-unique", c2_rigid_words, 5),
        ("davis-audits", c3_davis, 120),
        ("tree-wall-suite", c4_walls, 300),
        ("phi-isomorphism", c5_phi, 180),
        ("automorphism-splitting", c6_automorphisms, 120),
        ("acylindricity-witness", c7_witness, 30),
        ("gauss-bonnet", c8_gauss_bonnet, 120),
        ("determinism", c9_determinism, 300),
    ];
    let mut failed = 0;
    for (k, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*budget);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d} (over the {budget} s budget)")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {} {name}: {status} [{:.1} s / {budget} s] {detail}",
            k + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
