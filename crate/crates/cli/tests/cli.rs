use std::io::Write;
use std::process::{Command, Output, Stdio};

use cyclewall::reference;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn cyclewall(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclewall")).args(args).output().unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cyclewall"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // feed stdin from another thread so a full stdout pipe cannot deadlock
    let mut pipe = child.stdin.take().unwrap();
    let input = input.to_string();
    let feeder = std::thread::spawn(move || pipe.write_all(input.as_bytes()).unwrap());
    let out = child.wait_with_output().unwrap();
    feeder.join().unwrap();
    out
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn reduce_examples() {
    let o = cyclewall(&["--presentation", "c5_z2", "reduce", "", "v1:1 v2:1 v1:1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "\nv2:1\n");
}

#[test]
fn reduce_batch_round_trips() {
    let p = reference::c5_mixed();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let words: Vec<String> = (0..10_000)
        .map(|_| {
            let len = rng.gen_range(0..12);
            cyclewall::format_word(&p.random_word(&mut rng, len))
        })
        .collect();
    let input = words.join("\n") + "\n";
    let first = with_stdin(&["--presentation", "c5_mixed", "reduce"], &input);
    assert!(first.status.success());
    let out = stdout(&first);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), words.len());
    for (w, l) in words.iter().zip(&lines) {
        assert_eq!(p.parse_element(w).unwrap().to_string(), *l);
    }
    let again = with_stdin(&["--presentation", "c5_mixed", "reduce"], &out);
    assert_eq!(stdout(&again), out);
    let third = with_stdin(&["--presentation", "c5_mixed", "reduce"], &input);
    assert_eq!(stdout(&third), out);
}

#[test]
fn bad_word_is_a_validation_error() {
    let o = cyclewall(&["--presentation", "c5_z2", "reduce", "v9:1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_all_is_byte_identical_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for path in [&a, &b] {
        let o = cyclewall(&["--presentation", "c5_z3", "verify", "--seed", "3", "-o", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let doc: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(doc["schema"], "cyclewall/1");
    assert_eq!(doc["seed"], 3);
    let ids: Vec<&str> = doc["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    assert_eq!(ids, sorted);
}

#[test]
fn presentation_files_load_and_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("p.json");
    std::fs::write(&good, reference::c5_z2().to_json()).unwrap();
    let o = cyclewall(&["--presentation", good.to_str().unwrap(), "verify", "--suite", "words"]);
    assert_eq!(o.status.code(), Some(0));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"n\": 5,\n  \"groups\": [\n    {\"kind\": \"cyclic\", \"oder\": 2}\n  ]\n}\n").unwrap();
    let o = cyclewall(&["--presentation", bad.to_str().unwrap(), "reduce", ""]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("unknown field `oder`") && err.contains("line 5"), "{err}");
}

#[test]
fn ball_exports() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("ball.json");
    let o = cyclewall(&["--presentation", "c5_z2", "ball", "--radius", "2", "-o", json.to_str().unwrap()]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["schema"], "cyclewall/1");
    assert_eq!(doc["polygons"].as_array().unwrap().len(), 21);
    assert!(doc["edges"].as_array().unwrap().iter().all(|e| (1..=5).contains(&e["label"].as_u64().unwrap())));

    let o = cyclewall(&["--presentation", "c5_z2", "ball", "--format", "dot", "--subdivide"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("graph"));
}

#[test]
fn memory_cap_is_a_resource_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_cyclewall"))
        .args(["--presentation", "c6_mixed", "ball", "--radius", "3"])
        .env("CYCLEWALL_MEM_MB", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource limit"));
}

#[test]
fn decompose_recovers_a_reflection_and_a_conjugation() {
    let dir = tempfile::tempdir().unwrap();
    // i ↦ 2 − i on C5 with all Z/3, in 1-based labels
    let reflect: Vec<Vec<String>> = (1..=5)
        .map(|k: i32| (1..=2).map(|e| format!("v{}:{e}", (1 - k).rem_euclid(5) + 1)).collect())
        .collect();
    let path = dir.path().join("images.json");
    std::fs::write(&path, serde_json::to_string(&reflect).unwrap()).unwrap();
    let o = cyclewall(&["--presentation", "c5_z3", "aut", "decompose", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["automorphism"]["inner"], "");
    let sigma: Vec<u64> = doc["automorphism"]["sigma"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert_ne!(sigma, vec![1, 2, 3, 4, 5]);

    let conj: Vec<Vec<String>> = (1..=5)
        .map(|k| (1..=2).map(|e| format!("v1:1 v{k}:{e} v1:2")).collect())
        .collect();
    let o = with_stdin(&["--presentation", "c5_z3", "aut", "decompose"], &serde_json::to_string(&conj).unwrap());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["automorphism"]["inner"], "v1:1");
    assert_eq!(doc["automorphism"]["sigma"], serde_json::json!([1, 2, 3, 4, 5]));

    let junk = vec![vec!["v1:1 v2:1".to_string(), "v1:2".to_string()]; 5];
    let o = with_stdin(&["--presentation", "c5_z3", "aut", "decompose"], &serde_json::to_string(&junk).unwrap());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn witness_and_fixator() {
    let o = cyclewall(&["--presentation", "c5_z3", "aut", "witness"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["witness"]["vertex_sequence"], serde_json::json!([3, 1, 4, 2, 5, 3, 1, 4, 2, 5]));
    let o = cyclewall(&["--presentation", "c5_z3", "aut", "fixator"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["fixator"]["loc_size"], 320);
    assert_eq!(doc["fixator"]["fixator_size"], 1);
    let o = cyclewall(&["--presentation", "c5_z3", "aut", "fixator", ""]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["fixator"]["fixator_size"], 320);
}
